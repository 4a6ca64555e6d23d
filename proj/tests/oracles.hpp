/**
 * @file oracles.hpp
 * @brief Independent reference implementations used only by the tests:
 *        explicit string rewriting, path enumeration and random generators.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dtns/dtns.hpp"

namespace oracle {

using dtns::BigInt;
using dtns::Digit;
using dtns::DigitWord;
using dtns::Letter;
using dtns::Substitution;
using dtns::Word;

/// mu^level(w) by repeated concatenation.
inline Word iterate(const Substitution& sub, Word w, std::size_t level) {
  for (std::size_t i = 0; i < level; ++i) w = sub.apply(w);
  return w;
}

inline std::size_t expanded_length(const Substitution& sub, Letter x, std::size_t level) {
  return iterate(sub, Word{x}, level).size();
}

/// Column reached by a tree path, computed from explicitly expanded words.
/// Returns nullopt for a digit that exceeds the image length.
inline std::optional<long long> path_column(const Substitution& sub, Letter root, bool left,
                                            const std::vector<Digit>& digits) {
  const std::size_t k = digits.size();
  Letter x = root;
  long long column = 0;
  for (std::size_t idx = 0; idx < k; ++idx) {
    const Word& img = sub.image(x);
    if (digits[idx] >= img.size()) return std::nullopt;
    const Word prefix(img.begin(), img.begin() + digits[idx]);
    column += static_cast<long long>(iterate(sub, prefix, k - 1 - idx).size());
    x = img[digits[idx]];
  }
  if (left) column -= static_cast<long long>(expanded_length(sub, root, k));
  return column;
}

/// All tree paths of length k below root, in lexicographic order.
inline std::vector<std::vector<Digit>> all_paths(const Substitution& sub, Letter root, std::size_t k) {
  std::vector<std::vector<Digit>> out;
  std::vector<Digit> current;
  auto rec = [&](auto&& self, Letter x, std::size_t depth) -> void {
    if (depth == k) {
      out.push_back(current);
      return;
    }
    const Word& img = sub.image(x);
    for (std::size_t j = 0; j < img.size(); ++j) {
      current.push_back(static_cast<Digit>(j));
      self(self, img[j], depth + 1);
      current.pop_back();
    }
  };
  rec(rec, root, 0);
  return out;
}

/// rep by exhaustive path enumeration at each candidate level.
inline DigitWord enumerate_rep(const dtns::NumerationSystem& ns, long long n) {
  const auto& sub = ns.substitution();
  const bool left = n < 0;
  const Letter root = left ? ns.left() : ns.right();
  for (std::size_t k = ns.residue();; k += ns.period()) {
    for (const auto& path : all_paths(sub, root, k)) {
      if (path_column(sub, root, left, path) == n) return DigitWord{left ? 1U : 0U, path};
    }
  }
}

/// Standard binary representation, most significant first, empty for 0.
inline std::vector<Digit> binary(std::uint64_t n) {
  std::vector<Digit> out;
  while (n > 0) {
    out.push_back(static_cast<Digit>(n & 1U));
    n >>= 1U;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

/// Zeckendorf representation over 1, 2, 3, 5, 8, ...
inline std::vector<Digit> zeckendorf(std::uint64_t n) {
  std::vector<std::uint64_t> fib{1, 2};
  while (fib.back() <= n) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
  std::vector<Digit> out;
  bool started = false;
  for (std::size_t i = fib.size(); i-- > 0;) {
    if (fib[i] <= n) {
      n -= fib[i];
      out.push_back(1);
      started = true;
    } else if (started) {
      out.push_back(0);
    }
  }
  return out;
}

/// Random substitution with at most `max_letters` letters and images of length <= max_image.
inline std::optional<Substitution> random_substitution(std::mt19937_64& rng, std::size_t max_letters,
                                                       std::size_t max_image) {
  std::uniform_int_distribution<std::size_t> letters_dist(1, max_letters);
  const std::size_t n = letters_dist(rng);
  std::uniform_int_distribution<std::size_t> len_dist(1, max_image);
  std::uniform_int_distribution<Letter> letter_dist(0, static_cast<Letter>(n - 1));
  std::vector<std::string> names;
  std::vector<Word> images;
  for (std::size_t x = 0; x < n; ++x) {
    names.emplace_back(1, static_cast<char>('a' + x));
    Word w(len_dist(rng));
    for (auto& y : w) y = letter_dist(rng);
    images.push_back(std::move(w));
  }
  try {
    return Substitution(std::move(names), std::move(images));
  } catch (const dtns::Error&) {
    return std::nullopt;
  }
}

/// Fabre-like substitution a_1 -> a_1^{d_1} a_2, ..., a_n -> a_1^{d_n} a_k with
/// letters renamed by `perm` (perm[i] is the position of a_{i+1} in the alphabet).
inline Substitution fabre_from(const std::vector<Digit>& digits, std::size_t k, const std::vector<std::size_t>& perm) {
  const std::size_t n = digits.size();
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = "x" + std::to_string(i);
  std::vector<Word> images(n);
  const auto L = [&](std::size_t i) { return static_cast<Letter>(perm[i]); };
  for (std::size_t i = 0; i < n; ++i) {
    Word w(digits[i], L(0));
    w.push_back(L(i + 1 < n ? i + 1 : k - 1));
    images[perm[i]] = std::move(w);
  }
  return Substitution(std::move(names), std::move(images));
}

}  // namespace oracle
