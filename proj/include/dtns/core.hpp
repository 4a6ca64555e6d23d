/**
 * @file core.hpp
 * @brief Substitution algebra: parsing, validation, exact iterate lengths,
 *        primitivity and enumeration of periodic seeds.
 *
 * A substitution is stored with letters as dense indices `0..size()-1` in
 * first-appearance order. Values are immutable after construction; the only
 * internal state is a mutex-guarded table of iterate lengths shared between
 * copies, so a `Substitution` can be passed freely between threads.
 */
#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtns/bigint.hpp"
#include "dtns/error.hpp"

namespace dtns {

using Letter = std::uint32_t;
using Word = std::vector<Letter>;
using Matrix = std::vector<std::vector<BigInt>>;

class Substitution {
 public:
  Substitution(std::vector<std::string> names, std::vector<Word> images)
      : names_(std::move(names)), images_(std::move(images)) {
    if (names_.empty()) throw Error(ErrorCode::SyntaxError, "empty alphabet");
    if (names_.size() != images_.size()) {
      throw Error(ErrorCode::SyntaxError, "alphabet and image count differ");
    }
    for (std::size_t x = 0; x < images_.size(); ++x) {
      if (images_[x].empty()) throw Error(ErrorCode::EmptyImage, "image of '" + names_[x] + "' is empty");
      for (Letter y : images_[x]) {
        if (y >= names_.size()) throw Error(ErrorCode::UnknownLetter, "image of '" + names_[x] + "'");
      }
    }
    for (std::size_t x = 0; x < names_.size(); ++x) {
      for (std::size_t y = x + 1; y < names_.size(); ++y) {
        if (names_[x] == names_[y]) throw Error(ErrorCode::SyntaxError, "duplicate letter '" + names_[x] + "'");
      }
    }
    compute_growing();
    if (std::none_of(growing_.begin(), growing_.end(), [](bool g) { return g; })) {
      throw Error(ErrorCode::NoGrowingLetter, "no letter has unbounded iterate lengths");
    }
    lengths_ = std::make_shared<LengthCache>();
    lengths_->levels.emplace_back(names_.size(), BigInt(1));
  }

  std::size_t size() const noexcept { return names_.size(); }
  std::span<const std::string> alphabet() const noexcept { return names_; }
  const std::string& name(Letter x) const { return names_.at(x); }
  const Word& image(Letter x) const { return images_.at(x); }
  std::span<const Word> images() const noexcept { return images_; }

  std::optional<Letter> find(std::string_view name) const {
    for (std::size_t x = 0; x < names_.size(); ++x) {
      if (names_[x] == name) return static_cast<Letter>(x);
    }
    return std::nullopt;
  }

  Letter letter(std::string_view name) const {
    if (auto x = find(name)) return *x;
    throw Error(ErrorCode::UnknownLetter, "'" + std::string(name) + "' is not in the alphabet");
  }

  Letter first_letter(Letter x) const { return image(x).front(); }
  Letter last_letter(Letter x) const { return image(x).back(); }

  std::size_t max_image_length() const {
    std::size_t best = 0;
    for (const auto& w : images_) best = std::max(best, w.size());
    return best;
  }

  /// Largest digit of the associated numeration systems: max |mu(x)| - 1.
  std::size_t digit_bound() const { return max_image_length() - 1; }

  bool is_growing(Letter x) const { return growing_.at(x); }

  bool has_single_char_names() const {
    return std::all_of(names_.begin(), names_.end(), [](const std::string& s) { return s.size() == 1; });
  }

  /// |mu^level(x)|, exact. Lengths are memoized level by level via
  /// |mu^{l+1}(x)| = sum over y in mu(x) of |mu^l(y)|.
  const BigInt& image_length(Letter x, std::size_t level) const {
    if (x >= size()) throw Error(ErrorCode::UnknownLetter, "letter index out of range");
    std::lock_guard<std::mutex> lock(lengths_->mutex);
    auto& levels = lengths_->levels;
    while (levels.size() <= level) {
      const auto& prev = levels.back();
      std::vector<BigInt> next(size());
      for (std::size_t y = 0; y < size(); ++y) {
        for (Letter z : images_[y]) next[y] += prev[z];
      }
      levels.push_back(std::move(next));
    }
    return levels[level][x];
  }

  /// |mu^level(w)|.
  BigInt image_length(std::span<const Letter> w, std::size_t level) const {
    BigInt total = 0;
    for (Letter x : w) total += image_length(x, level);
    return total;
  }

  /// One rewriting step mu(w), by explicit concatenation.
  Word apply(std::span<const Letter> w) const {
    Word out;
    for (Letter x : w) out.insert(out.end(), images_[x].begin(), images_[x].end());
    return out;
  }

  /// Adjacency matrix: entry [y][x] counts occurrences of y in mu(x).
  Matrix adjacency() const {
    Matrix m(size(), std::vector<BigInt>(size(), BigInt(0)));
    for (std::size_t x = 0; x < size(); ++x) {
      for (Letter y : images_[x]) m[y][x] += 1;
    }
    return m;
  }

  std::string format_word(std::span<const Letter> w) const {
    std::string out;
    const bool compact = has_single_char_names();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!compact && i > 0) out += ' ';
      out += names_.at(w[i]);
    }
    return out;
  }

  /// Canonical DSL text, e.g. `a->abc,b->c,c->ac` or `a1->b c a2,...`.
  std::string to_dsl() const {
    std::string out;
    for (std::size_t x = 0; x < size(); ++x) {
      if (x > 0) out += ',';
      out += names_[x] + "->" + format_word(images_[x]);
    }
    return out;
  }

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.names_ == b.names_ && a.images_ == b.images_;
  }

 private:
  struct LengthCache {
    std::mutex mutex;
    std::deque<std::vector<BigInt>> levels;
  };

  // x grows iff it reaches a letter y lying on a cycle of the image graph
  // with |mu(y)| >= 2.
  void compute_growing() {
    const std::size_t n = size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<Letter> stack(images_[s].begin(), images_[s].end());
      while (!stack.empty()) {
        Letter y = stack.back();
        stack.pop_back();
        if (reach[s][y]) continue;
        reach[s][y] = true;
        for (Letter z : images_[y]) stack.push_back(z);
      }
    }
    growing_.assign(n, false);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        const bool reachable = (x == y) || reach[x][y];
        if (reachable && reach[y][y] && images_[y].size() >= 2) {
          growing_[x] = true;
          break;
        }
      }
    }
  }

  std::vector<std::string> names_;
  std::vector<Word> images_;
  std::vector<bool> growing_;
  std::shared_ptr<LengthCache> lengths_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

/**
 * Parses the substitution DSL.
 *
 * Rules `letter->image` are separated by `,` or `;`. When every rule name is
 * a single character, images are juxtaposed letters (`a->abc`); otherwise
 * images are whitespace-separated tokens (`a1 -> b c a2`) and every token
 * must name a declared letter.
 */
inline Substitution parse_substitution(std::string_view text) {
  struct Rule {
    std::string_view lhs;
    std::string_view rhs;
  };
  std::vector<Rule> rules;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find_first_of(",;", start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view rule = detail::trim(text.substr(start, end - start));
    if (!rule.empty()) {
      const auto arrow = rule.find("->");
      if (arrow == std::string_view::npos) {
        throw Error(ErrorCode::SyntaxError, "missing '->' in rule '" + std::string(rule) + "'");
      }
      Rule r{detail::trim(rule.substr(0, arrow)), detail::trim(rule.substr(arrow + 2))};
      if (r.lhs.empty() || detail::split_tokens(r.lhs).size() != 1) {
        throw Error(ErrorCode::SyntaxError, "bad letter in rule '" + std::string(rule) + "'");
      }
      if (r.rhs.find("->") != std::string_view::npos) {
        throw Error(ErrorCode::SyntaxError, "repeated '->' in rule '" + std::string(rule) + "'");
      }
      rules.push_back(r);
    }
    start = end + 1;
  }
  if (rules.empty()) throw Error(ErrorCode::SyntaxError, "no rules");

  const bool multi = std::any_of(rules.begin(), rules.end(), [](const Rule& r) { return r.lhs.size() > 1; });

  std::vector<std::string> names;
  std::map<std::string, Letter, std::less<>> index;
  auto intern = [&](std::string_view name) -> Letter {
    if (auto it = index.find(name); it != index.end()) return it->second;
    const auto id = static_cast<Letter>(names.size());
    names.emplace_back(name);
    index.emplace(std::string(name), id);
    return id;
  };

  std::vector<std::optional<Word>> images;
  std::vector<std::vector<std::string_view>> tokens(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Letter lhs = intern(rules[i].lhs);
    if (images.size() <= lhs) images.resize(lhs + 1);
    if (images[lhs]) throw Error(ErrorCode::SyntaxError, "duplicate rule for '" + std::string(rules[i].lhs) + "'");
    images[lhs] = Word{};
    if (multi) {
      tokens[i] = detail::split_tokens(rules[i].rhs);
    } else {
      for (std::size_t c = 0; c < rules[i].rhs.size(); ++c) {
        if (!std::isspace(static_cast<unsigned char>(rules[i].rhs[c]))) tokens[i].push_back(rules[i].rhs.substr(c, 1));
      }
      // Single-character mode: letters first seen inside an image are interned
      // now so that the alphabet follows first appearance in the text.
      for (auto tok : tokens[i]) intern(tok);
    }
  }
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Letter lhs = index.find(rules[i].lhs)->second;
    for (auto tok : tokens[i]) {
      auto it = index.find(tok);
      if (it == index.end()) {
        throw Error(ErrorCode::UnknownLetter, "'" + std::string(tok) + "' in image of '" + std::string(rules[i].lhs) + "'");
      }
      images[lhs]->push_back(it->second);
    }
  }
  images.resize(names.size());
  std::vector<Word> final_images;
  for (std::size_t x = 0; x < names.size(); ++x) {
    if (!images[x]) throw Error(ErrorCode::EmptyImage, "letter '" + names[x] + "' has no image");
    if (images[x]->empty()) throw Error(ErrorCode::EmptyImage, "image of '" + names[x] + "' is empty");
    final_images.push_back(std::move(*images[x]));
  }
  return Substitution(std::move(names), std::move(final_images));
}

inline const BigInt& image_length(const Substitution& sub, Letter x, std::size_t level) {
  return sub.image_length(x, level);
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<BigInt>(n, BigInt(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

inline Matrix matrix_power(const Matrix& m, std::size_t e) {
  const std::size_t n = m.size();
  Matrix result(n, std::vector<BigInt>(n, BigInt(0)));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = 1;
  Matrix base = m;
  while (e > 0) {
    if (e & 1U) result = multiply(result, base);
    e >>= 1U;
    if (e > 0) base = multiply(base, base);
  }
  return result;
}

/// Primitive iff some power M^k, k <= (|A|-1)^2 + 1, is entrywise positive.
inline bool is_primitive(const Substitution& sub) {
  const std::size_t n = sub.size();
  std::vector<std::vector<bool>> base(n, std::vector<bool>(n, false));
  for (std::size_t x = 0; x < n; ++x) {
    for (Letter y : sub.image(static_cast<Letter>(x))) base[y][x] = true;
  }
  auto power = base;
  const std::size_t bound = (n - 1) * (n - 1) + 1;
  for (std::size_t k = 1; k <= bound; ++k) {
    bool positive = true;
    for (const auto& row : power) positive = positive && std::all_of(row.begin(), row.end(), [](bool v) { return v; });
    if (positive) return true;
    std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!power[i][j]) continue;
        for (std::size_t l = 0; l < n; ++l) {
          if (base[j][l]) next[i][l] = true;
        }
      }
    }
    power = std::move(next);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Seeds and numeration systems
// ---------------------------------------------------------------------------

enum class Domain { N, Zneg, Z };

constexpr std::string_view domain_name(Domain d) noexcept {
  switch (d) {
    case Domain::N: return "N";
    case Domain::Zneg: return "Zneg";
    case Domain::Z: return "Z";
  }
  return "?";
}

/// Seed b|a of a periodic point: `left` is b, `right` is a; either side may
/// be absent (one-sided periodic point). `period` is a period of the point.
struct SeedSpec {
  std::optional<Letter> left;
  std::optional<Letter> right;
  std::size_t period = 1;

  Domain domain() const {
    if (left && right) return Domain::Z;
    return right ? Domain::N : Domain::Zneg;
  }

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

namespace detail {

template <typename Step>
std::optional<std::size_t> cycle_length(const Substitution& sub, Letter x, Step step) {
  Letter y = x;
  for (std::size_t t = 1; t <= sub.size(); ++t) {
    y = step(y);
    if (y == x) return t;
  }
  return std::nullopt;
}

}  // namespace detail

/// Length of the cycle of x under x -> first letter of mu(x), if x is on one.
inline std::optional<std::size_t> first_letter_cycle(const Substitution& sub, Letter x) {
  return detail::cycle_length(sub, x, [&](Letter y) { return sub.first_letter(y); });
}

/// Length of the cycle of x under x -> last letter of mu(x), if x is on one.
inline std::optional<std::size_t> last_letter_cycle(const Substitution& sub, Letter x) {
  return detail::cycle_length(sub, x, [&](Letter y) { return sub.last_letter(y); });
}

/// Minimal period of the periodic point grown from the given seed letters.
inline std::size_t minimal_period(const Substitution& sub, std::optional<Letter> left, std::optional<Letter> right) {
  std::size_t p = 1;
  if (right) {
    auto c = first_letter_cycle(sub, *right);
    if (!c) throw Error(ErrorCode::InvalidSeed, "'" + sub.name(*right) + "' is not on a first-letter cycle");
    p = std::lcm(p, *c);
  }
  if (left) {
    auto c = last_letter_cycle(sub, *left);
    if (!c) throw Error(ErrorCode::InvalidSeed, "'" + sub.name(*left) + "' is not on a last-letter cycle");
    p = std::lcm(p, *c);
  }
  return p;
}

inline void validate_seed(const Substitution& sub, const SeedSpec& seed) {
  if (!seed.left && !seed.right) throw Error(ErrorCode::InvalidSeed, "seed has no side");
  if (seed.period == 0) throw Error(ErrorCode::InvalidSeed, "period must be positive");
  for (auto side : {seed.left, seed.right}) {
    if (side && *side >= sub.size()) throw Error(ErrorCode::UnknownLetter, "seed letter out of range");
    if (side && !sub.is_growing(*side)) throw Error(ErrorCode::InvalidSeed, "'" + sub.name(*side) + "' is not growing");
  }
  const std::size_t minimal = minimal_period(sub, seed.left, seed.right);
  if (seed.period % minimal != 0) {
    throw Error(ErrorCode::InvalidSeed, "period " + std::to_string(seed.period) + " is not a multiple of the minimal period " +
                                            std::to_string(minimal));
  }
}

/// Builds a seed; period defaults to the minimal one and must otherwise be a multiple of it.
inline SeedSpec make_seed(const Substitution& sub, std::optional<Letter> left, std::optional<Letter> right,
                          std::optional<std::size_t> period = std::nullopt) {
  if (!left && !right) throw Error(ErrorCode::InvalidSeed, "seed has no side");
  SeedSpec seed{left, right, period.value_or(0)};
  if (!period) seed.period = minimal_period(sub, left, right);
  validate_seed(sub, seed);
  return seed;
}

/// Parses `b|a`, `_|a` or `b|_` (letters by name).
inline SeedSpec parse_seed(const Substitution& sub, std::string_view text, std::optional<std::size_t> period = std::nullopt) {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos) throw Error(ErrorCode::SyntaxError, "seed must look like b|a, _|a or b|_");
  auto side = [&](std::string_view s) -> std::optional<Letter> {
    s = detail::trim(s);
    if (s.empty() || s == "_" || s == "·") return std::nullopt;
    return sub.letter(s);
  };
  return make_seed(sub, side(text.substr(0, bar)), side(text.substr(bar + 1)), period);
}

inline std::string format_seed(const Substitution& sub, const SeedSpec& seed) {
  return (seed.left ? sub.name(*seed.left) : std::string("_")) + "|" + (seed.right ? sub.name(*seed.right) : std::string("_"));
}

/**
 * Every seed of `sub` for the given domain, each with its minimal period.
 *
 * Right seeds are growing letters on a cycle of the first-letter map, left
 * seeds growing letters on a cycle of the last-letter map; two-sided seeds
 * pair them with period the lcm of both cycle lengths.
 */
inline std::vector<SeedSpec> find_seeds(const Substitution& sub, Domain domain) {
  std::vector<std::pair<Letter, std::size_t>> rights;
  std::vector<std::pair<Letter, std::size_t>> lefts;
  for (Letter x = 0; x < sub.size(); ++x) {
    if (!sub.is_growing(x)) continue;
    if (auto c = first_letter_cycle(sub, x)) rights.emplace_back(x, *c);
    if (auto c = last_letter_cycle(sub, x)) lefts.emplace_back(x, *c);
  }
  std::vector<SeedSpec> out;
  switch (domain) {
    case Domain::N:
      for (auto [a, p] : rights) out.push_back({std::nullopt, a, p});
      break;
    case Domain::Zneg:
      for (auto [b, p] : lefts) out.push_back({b, std::nullopt, p});
      break;
    case Domain::Z:
      for (auto [b, pb] : lefts) {
        for (auto [a, pa] : rights) out.push_back({b, a, std::lcm(pa, pb)});
      }
      break;
  }
  return out;
}

/// The pair (u, r): a substitution, a growing seed with period p and a residue r < p.
class NumerationSystem {
 public:
  NumerationSystem(Substitution sub, SeedSpec seed, std::size_t residue = 0)
      : sub_(std::move(sub)), seed_(seed), residue_(residue) {
    validate_seed(sub_, seed_);
    if (residue_ >= seed_.period) {
      throw Error(ErrorCode::InvalidResidue,
                  "residue " + std::to_string(residue_) + " must be below the period " + std::to_string(seed_.period));
    }
  }

  const Substitution& substitution() const noexcept { return sub_; }
  const SeedSpec& seed() const noexcept { return seed_; }
  std::size_t period() const noexcept { return seed_.period; }
  std::size_t residue() const noexcept { return residue_; }
  Domain domain() const { return seed_.domain(); }
  bool has_left() const noexcept { return seed_.left.has_value(); }
  bool has_right() const noexcept { return seed_.right.has_value(); }

  Letter right() const {
    if (!seed_.right) throw Error(ErrorCode::SideMissing, "system has no right seed (non-negative integers)");
    return *seed_.right;
  }
  Letter left() const {
    if (!seed_.left) throw Error(ErrorCode::SideMissing, "system has no left seed (negative integers)");
    return *seed_.left;
  }

  bool in_domain(const BigInt& n) const { return n >= 0 ? has_right() : has_left(); }

 private:
  Substitution sub_;
  SeedSpec seed_;
  std::size_t residue_;
};

/// Restriction of a substitution to the letters reachable from a seed.
struct Restriction {
  Substitution substitution;
  SeedSpec seed;
  std::vector<Letter> original;      ///< new letter -> letter of the input substitution
  std::vector<std::string> removed;  ///< names of dropped letters, alphabet order
};

inline Restriction restrict_to_seed(const Substitution& sub, const SeedSpec& seed) {
  std::vector<bool> seen(sub.size(), false);
  std::vector<Letter> stack;
  for (auto side : {seed.left, seed.right}) {
    if (side) stack.push_back(*side);
  }
  while (!stack.empty()) {
    Letter x = stack.back();
    stack.pop_back();
    if (seen[x]) continue;
    seen[x] = true;
    for (Letter y : sub.image(x)) stack.push_back(y);
  }
  std::vector<Letter> remap(sub.size(), 0);
  std::vector<Letter> original;
  std::vector<std::string> names;
  std::vector<std::string> removed;
  for (Letter x = 0; x < sub.size(); ++x) {
    if (seen[x]) {
      remap[x] = static_cast<Letter>(original.size());
      original.push_back(x);
      names.push_back(sub.name(x));
    } else {
      removed.push_back(sub.name(x));
    }
  }
  std::vector<Word> images;
  for (Letter x : original) {
    Word w;
    for (Letter y : sub.image(x)) w.push_back(remap[y]);
    images.push_back(std::move(w));
  }
  SeedSpec mapped = seed;
  if (mapped.left) mapped.left = remap[*mapped.left];
  if (mapped.right) mapped.right = remap[*mapped.right];
  if (removed.empty()) return {sub, seed, std::move(original), {}};
  return {Substitution(std::move(names), std::move(images)), mapped, std::move(original), std::move(removed)};
}

/// The same numeration system over its minimal alphabet.
inline NumerationSystem minimal_system(const NumerationSystem& ns, std::vector<std::string>* removed = nullptr) {
  Restriction r = restrict_to_seed(ns.substitution(), ns.seed());
  if (removed) *removed = r.removed;
  return NumerationSystem(std::move(r.substitution), r.seed, ns.residue());
}

}  // namespace dtns
