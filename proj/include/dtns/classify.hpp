/**
 * @file classify.hpp
 * @brief Structure theory of positional systems over N: non-final letters,
 *        simplification to one non-final letter, tree-shape comparison,
 *        Fabre-like normal form, Parry condition and Bertrand classes.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtns/bigint.hpp"
#include "dtns/core.hpp"
#include "dtns/error.hpp"
#include "dtns/numeration.hpp"

namespace dtns {

/// E_mu: letters occurring at a non-final position of some image.
inline std::vector<Letter> nonfinal_letters(const Substitution& sub) {
  std::vector<bool> flag(sub.size(), false);
  for (const Word& img : sub.images()) {
    for (std::size_t i = 0; i + 1 < img.size(); ++i) flag[img[i]] = true;
  }
  std::vector<Letter> out;
  for (Letter x = 0; x < sub.size(); ++x) {
    if (flag[x]) out.push_back(x);
  }
  return out;
}

/// True iff T_{sub1,seed1} and T_{sub2,seed2} coincide up to relabelling.
inline bool tree_shape_equal(const Substitution& sub1, const SeedSpec& seed1, const Substitution& sub2,
                             const SeedSpec& seed2) {
  if (seed1.left.has_value() != seed2.left.has_value() || seed1.right.has_value() != seed2.right.has_value()) {
    return false;
  }
  std::set<std::pair<Letter, Letter>> seen;
  std::vector<std::pair<Letter, Letter>> queue;
  if (seed1.left) queue.emplace_back(*seed1.left, *seed2.left);
  if (seed1.right) queue.emplace_back(*seed1.right, *seed2.right);
  while (!queue.empty()) {
    auto pair = queue.back();
    queue.pop_back();
    if (!seen.insert(pair).second) continue;
    const Word& x = sub1.image(pair.first);
    const Word& y = sub2.image(pair.second);
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) queue.emplace_back(x[i], y[i]);
  }
  return true;
}

struct Simplification {
  Substitution substitution;
  SeedSpec seed;
  std::vector<Letter> letter_map;  ///< input letter -> output letter
  std::vector<bool> kept;          ///< whether the input letter survives
};

/**
 * Merges all non-final letters into the first one (in the images and in
 * the seed) and restricts to the letters reachable from the seed. The
 * period is kept. Requires c -> |mu^l(c)| constant on E_mu.
 */
inline Simplification simplify(const Substitution& sub, const SeedSpec& seed) {
  const std::vector<Letter> E = nonfinal_letters(sub);
  const Letter e = E.front();
  for (std::size_t ell = 0; ell < sub.size(); ++ell) {
    for (std::size_t i = 1; i < E.size(); ++i) {
      if (sub.image_length(E[i], ell) != sub.image_length(e, ell)) {
        throw Error(ErrorCode::NotLengthUniform, "|mu^" + std::to_string(ell) + "(" + sub.name(e) + ")| = " +
                                                     to_string(sub.image_length(e, ell)) + " but |mu^" +
                                                     std::to_string(ell) + "(" + sub.name(E[i]) + ")| = " +
                                                     to_string(sub.image_length(E[i], ell)) + " (" + sub.name(e) +
                                                     "," + sub.name(E[i]) + ")");
      }
    }
  }
  std::vector<Letter> merge(sub.size());
  for (Letter x = 0; x < sub.size(); ++x) merge[x] = std::binary_search(E.begin(), E.end(), x) ? e : x;
  std::vector<std::string> names(sub.alphabet().begin(), sub.alphabet().end());
  std::vector<Word> images;
  for (Letter x = 0; x < sub.size(); ++x) {
    Word w;
    for (Letter y : sub.image(x)) w.push_back(merge[y]);
    images.push_back(std::move(w));
  }
  const Substitution merged(std::move(names), std::move(images));
  SeedSpec merged_seed = seed;
  if (merged_seed.left) merged_seed.left = merge[*merged_seed.left];
  if (merged_seed.right) merged_seed.right = merge[*merged_seed.right];
  Restriction restricted = restrict_to_seed(merged, merged_seed);
  validate_seed(restricted.substitution, restricted.seed);
  Simplification out{std::move(restricted.substitution), restricted.seed, std::vector<Letter>(sub.size(), 0),
                     std::vector<bool>(sub.size(), false)};
  for (Letter y = 0; y < restricted.original.size(); ++y) {
    out.letter_map[restricted.original[y]] = y;
    out.kept[restricted.original[y]] = true;
  }
  for (Letter x = 0; x < sub.size(); ++x) {
    if (!out.kept[x] && out.kept[merge[x]]) out.letter_map[x] = out.letter_map[merge[x]];
  }
  if (!tree_shape_equal(sub, seed, out.substitution, out.seed)) {
    throw Error(ErrorCode::ShapeMismatch, "simplified tree differs from the original");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fabre-like form and digit words
// ---------------------------------------------------------------------------

/// a_1 -> a_1^{d_1} a_2, ..., a_n -> a_1^{d_n} a_k; cycle_entry is k (1-based).
struct FabreForm {
  std::vector<Digit> digits;
  std::size_t cycle_entry = 1;
  std::vector<Letter> chain;  ///< a_1..a_n as letters of the input

  std::size_t n() const { return digits.size(); }
  friend bool operator==(const FabreForm& a, const FabreForm& b) {
    return a.digits == b.digits && a.cycle_entry == b.cycle_entry;
  }
};

inline std::optional<FabreForm> fabre_form(const Substitution& sub, Letter a1) {
  FabreForm form;
  std::vector<std::size_t> position(sub.size(), 0);  // 1-based index in the chain, 0 if absent
  Letter x = a1;
  while (position[x] == 0) {
    form.chain.push_back(x);
    position[x] = form.chain.size();
    const Word& img = sub.image(x);
    for (std::size_t i = 0; i + 1 < img.size(); ++i) {
      if (img[i] != a1) return std::nullopt;
    }
    form.digits.push_back(static_cast<Digit>(img.size() - 1));
    x = img.back();
  }
  form.cycle_entry = position[x];
  if (form.digits.front() < 1) return std::nullopt;
  return form;
}

/// Builds the substitution of a Fabre form over letters named by `names`.
inline Substitution fabre_substitution(const std::vector<Digit>& digits, std::size_t cycle_entry,
                                       std::vector<std::string> names) {
  const std::size_t n = digits.size();
  if (n == 0 || cycle_entry < 1 || cycle_entry > n || digits.front() < 1 || names.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "invalid Fabre form");
  }
  std::vector<Word> images(n);
  for (std::size_t i = 0; i < n; ++i) {
    images[i].assign(digits[i], 0);
    images[i].push_back(static_cast<Letter>(i + 1 < n ? i + 1 : cycle_entry - 1));
  }
  return Substitution(std::move(names), std::move(images));
}

/// Ultimately periodic word preperiod . cycle^omega.
struct UPWord {
  std::vector<Digit> preperiod;
  std::vector<Digit> cycle;

  Digit at(std::size_t i) const {
    return i < preperiod.size() ? preperiod[i] : cycle[(i - preperiod.size()) % cycle.size()];
  }
  bool is_purely_periodic() const { return preperiod.empty(); }
  bool is_finite() const { return cycle.size() == 1 && cycle[0] == 0; }
  friend bool operator==(const UPWord&, const UPWord&) = default;
};

/// Minimal cycle, shortest preperiod.
inline UPWord normalize(UPWord w) {
  if (w.cycle.empty()) throw Error(ErrorCode::ShapeMismatch, "empty cycle");
  const std::size_t m = w.cycle.size();
  for (std::size_t q = 1; q <= m; ++q) {
    if (m % q != 0) continue;
    bool root = true;
    for (std::size_t i = q; i < m && root; ++i) root = w.cycle[i] == w.cycle[i - q];
    if (root) {
      w.cycle.resize(q);
      break;
    }
  }
  while (!w.preperiod.empty() && w.preperiod.back() == w.cycle.back()) {
    w.preperiod.pop_back();
    std::rotate(w.cycle.rbegin(), w.cycle.rbegin() + 1, w.cycle.rend());
  }
  return w;
}

inline std::string to_text(const UPWord& w) {
  auto render = [](const std::vector<Digit>& ds) {
    return to_text(DigitWord{std::nullopt, ds});
  };
  std::string out = w.preperiod.empty() ? "" : render(w.preperiod);
  const std::string cyc = render(w.cycle);
  out += (w.cycle.size() == 1 ? cyc : "(" + cyc + ")") + "^w";
  return out;
}

/// d_1 ... d_{k-1} (d_k ... d_n)^omega.
inline UPWord d_word(const FabreForm& form) {
  const auto split = form.digits.begin() + static_cast<std::ptrdiff_t>(form.cycle_entry - 1);
  return normalize(UPWord{{form.digits.begin(), split}, {split, form.digits.end()}});
}

/// d_1 ... d_l 0^omega -> (d_1 ... d_{l-1} (d_l - 1))^omega; other words unchanged.
inline UPWord quasi_greedy(const UPWord& input) {
  const UPWord w = normalize(input);
  if (!w.is_finite()) return w;
  if (w.preperiod.empty()) throw Error(ErrorCode::ShapeMismatch, "0^w has no quasi-greedy form");
  UPWord out{{}, w.preperiod};
  out.cycle.back() -= 1;
  return normalize(out);
}

/// (d_1 ... d_l)^omega -> d_1 ... d_{l-1} (d_l + 1) 0^omega.
inline UPWord inverse_quasi_greedy(const UPWord& input) {
  const UPWord w = normalize(input);
  if (!w.is_purely_periodic()) throw Error(ErrorCode::ShapeMismatch, "inverse quasi-greedy needs a purely periodic word");
  UPWord out{w.cycle, {0}};
  out.preperiod.back() += 1;
  return normalize(out);
}

struct ParryResult {
  bool pass = true;
  std::size_t shift = 0;  ///< first failing shift when !pass
};

/// Every shift sigma^s(w), s >= 1, must be lexicographically <= w.
inline ParryResult parry_check(const UPWord& input) {
  const UPWord w = normalize(input);
  const std::size_t pre = w.preperiod.size();
  const std::size_t cyc = w.cycle.size();
  const std::size_t window = pre + 2 * cyc;
  for (std::size_t s = 1; s <= pre + cyc; ++s) {
    for (std::size_t i = 0; i < window; ++i) {
      const Digit a = w.at(s + i);
      const Digit b = w.at(i);
      if (a < b) break;
      if (a > b) return {false, s};
    }
  }
  return {true, 0};
}

enum class BertrandClass {
  NotFabreLike,
  NotBertrand,
  Trivial,
  CanonicalParry,
  CanonicalSimpleParry,
  NonCanonicalSimpleParry,
};

constexpr std::string_view bertrand_name(BertrandClass c) noexcept {
  switch (c) {
    case BertrandClass::NotFabreLike: return "NotFabreLike";
    case BertrandClass::NotBertrand: return "NotBertrand";
    case BertrandClass::Trivial: return "Trivial";
    case BertrandClass::CanonicalParry: return "CanonicalParry";
    case BertrandClass::CanonicalSimpleParry: return "CanonicalSimpleParry";
    case BertrandClass::NonCanonicalSimpleParry: return "NonCanonicalSimpleParry";
  }
  return "?";
}

struct Classification {
  BertrandClass kind = BertrandClass::NotFabreLike;
  std::optional<FabreForm> fabre;
  std::optional<UPWord> dword;
  std::optional<ParryResult> parry;
  std::optional<UPWord> d_beta;  ///< finite expansion, for periodic d-words
  /// Set for a single non-final letter e != a_1 reaching a_1 via unary images.
  std::optional<std::vector<Letter>> fabre_like_periodic;
};

namespace detail {

inline std::optional<std::vector<Letter>> periodic_chain(const Substitution& sub, Letter a1) {
  const Restriction r = restrict_to_seed(sub, SeedSpec{std::nullopt, a1, 1});
  const std::vector<Letter> E = nonfinal_letters(r.substitution);
  if (E.size() != 1) return std::nullopt;
  const Letter start = r.seed.right.value();
  Letter x = E.front();
  if (x == start) return std::nullopt;
  std::vector<Letter> chain{r.original[x]};
  for (std::size_t step = 0; step < r.substitution.size(); ++step) {
    if (r.substitution.image(x).size() != 1) return std::nullopt;
    x = r.substitution.image(x).front();
    chain.push_back(r.original[x]);
    if (x == start) return chain;
  }
  return std::nullopt;
}

}  // namespace detail

inline Classification bertrand_classify(const Substitution& sub, Letter a1) {
  Classification out;
  out.fabre = fabre_form(sub, a1);
  if (!out.fabre) {
    out.fabre_like_periodic = detail::periodic_chain(sub, a1);
    return out;
  }
  out.dword = d_word(*out.fabre);
  out.parry = parry_check(*out.dword);
  if (!out.parry->pass) {
    out.kind = BertrandClass::NotBertrand;
  } else if (*out.dword == UPWord{{1}, {0}}) {
    out.kind = BertrandClass::Trivial;
  } else if (out.dword->is_purely_periodic()) {
    out.kind = BertrandClass::CanonicalSimpleParry;
    out.d_beta = inverse_quasi_greedy(*out.dword);
  } else if (out.dword->is_finite()) {
    out.kind = BertrandClass::NonCanonicalSimpleParry;
  } else {
    out.kind = BertrandClass::CanonicalParry;
  }
  return out;
}

/// Greedy representation over the weights U_l = |mu^l(a_1)|, leading digit nonzero.
inline std::vector<Digit> greedy_digits(const Substitution& sub, Letter a1, const BigInt& n) {
  std::size_t k = 0;
  while (sub.image_length(a1, k) <= n) ++k;
  std::vector<Digit> digits;
  BigInt rest = n;
  for (std::size_t ell = k; ell-- > 0;) {
    const BigInt& u = sub.image_length(a1, ell);
    const BigInt q = rest / u;
    digits.push_back(static_cast<Digit>(q));
    rest -= q * u;
  }
  return digits;
}

}  // namespace dtns
