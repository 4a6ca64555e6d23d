/**
 * @file numeration.hpp
 * @brief Representation and evaluation maps of Dumont--Thomas numeration
 *        systems over N, the negative integers and Z, plus two's complement.
 *
 * Representations are computed by top-down descent through the prefix tree
 * using exact iterate lengths; mu^k(seed) is never materialized, so integers
 * with thousands of digits are fine.
 *
 * Digit words are stored most significant digit first. For a sequence
 * ((m_i, a_i))_{i<k} the digit at index 0 is |m_{k-1}|.
 */
#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dtns/bigint.hpp"
#include "dtns/core.hpp"
#include "dtns/error.hpp"

namespace dtns {

using Digit = std::uint32_t;

struct AdmissibleStep {
  Word prefix;   ///< m_i
  Letter pivot;  ///< a_i

  friend bool operator==(const AdmissibleStep&, const AdmissibleStep&) = default;
};

/// Element i holds (m_i, a_i); element k-1 is the step taken at the root.
using AdmissibleSequence = std::vector<AdmissibleStep>;

struct DigitWord {
  std::optional<Digit> sign;
  std::vector<Digit> digits;

  std::size_t length() const noexcept { return digits.size(); }
  friend bool operator==(const DigitWord&, const DigitWord&) = default;
};

/// Text form: sign digit then digits, contiguous (`10120`) unless some digit
/// is at least 10, in which case dot-separated (`1.0.12.0`). Empty word: `ε`.
inline std::string to_text(const DigitWord& w) {
  std::vector<Digit> all;
  if (w.sign) all.push_back(*w.sign);
  all.insert(all.end(), w.digits.begin(), w.digits.end());
  if (all.empty()) return "ε";
  bool dotted = false;
  for (Digit d : all) dotted = dotted || d >= 10;
  std::string out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (dotted && i > 0) out += '.';
    out += std::to_string(all[i]);
  }
  return out;
}

/// Inverse of to_text. With `has_sign` the first digit is the sign digit.
inline DigitWord parse_digit_word(std::string_view text, bool has_sign = true) {
  text = detail::trim(text);
  std::vector<Digit> all;
  if (!text.empty() && text != "ε") {
    if (text.find('.') != std::string_view::npos) {
      std::size_t start = 0;
      while (start <= text.size()) {
        auto end = text.find('.', start);
        if (end == std::string_view::npos) end = text.size();
        auto part = text.substr(start, end - start);
        if (part.empty() || part.size() > 9) throw Error(ErrorCode::SyntaxError, "bad digit in '" + std::string(text) + "'");
        Digit d = 0;
        for (char c : part) {
          if (c < '0' || c > '9') throw Error(ErrorCode::SyntaxError, "bad digit in '" + std::string(text) + "'");
          d = d * 10 + static_cast<Digit>(c - '0');
        }
        all.push_back(d);
        start = end + 1;
      }
    } else {
      for (char c : text) {
        if (c < '0' || c > '9') throw Error(ErrorCode::SyntaxError, "bad digit in '" + std::string(text) + "'");
        all.push_back(static_cast<Digit>(c - '0'));
      }
    }
  }
  DigitWord w;
  if (has_sign) {
    if (all.empty()) throw Error(ErrorCode::SignRequired, "word has no sign digit");
    w.sign = all.front();
    all.erase(all.begin());
  }
  w.digits = std::move(all);
  return w;
}

namespace detail {

// Child indices of the unique root-admissible path of length k reaching
// offset n of mu^k(root). At letter x on level i (counted from the bottom),
// the child j satisfies sum_{l<j} |mu^i(mu(x)_l)| <= t < sum_{l<=j}.
inline std::vector<Digit> descend(const Substitution& sub, Letter root, std::size_t k, BigInt offset,
                                  AdmissibleSequence* steps = nullptr) {
  std::vector<Digit> digits(k);
  if (steps) steps->assign(k, AdmissibleStep{{}, root});
  Letter x = root;
  for (std::size_t idx = 0; idx < k; ++idx) {
    const std::size_t level = k - 1 - idx;
    const Word& img = sub.image(x);
    std::size_t j = 0;
    for (; j + 1 < img.size(); ++j) {
      const BigInt& len = sub.image_length(img[j], level);
      if (offset < len) break;
      offset -= len;
    }
    assert(offset < sub.image_length(img[j], level));
    digits[idx] = static_cast<Digit>(j);
    if (steps) (*steps)[level] = AdmissibleStep{Word(img.begin(), img.begin() + static_cast<std::ptrdiff_t>(j)), img[j]};
    x = img[j];
  }
  return digits;
}

}  // namespace detail

/**
 * Unique root-admissible sequence ((m_i, a_i))_{i<k} with
 * mu^{k-1}(m_{k-1}) ... mu^0(m_0) equal to the length-n prefix of mu^k(root).
 */
inline AdmissibleSequence decompose_prefix(const Substitution& sub, Letter root, std::size_t k, const BigInt& n) {
  if (root >= sub.size()) throw Error(ErrorCode::UnknownLetter, "root letter out of range");
  if (n < 0 || n >= sub.image_length(root, k)) {
    throw Error(ErrorCode::OffsetOutOfRange,
                "offset " + to_string(n) + " outside [0, " + to_string(sub.image_length(root, k)) + ")");
  }
  AdmissibleSequence steps;
  detail::descend(sub, root, k, n, &steps);
  return steps;
}

/// Digits |m_{k-1}| ... |m_0| of an admissible sequence.
inline std::vector<Digit> digits_of(const AdmissibleSequence& seq) {
  std::vector<Digit> out;
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) out.push_back(static_cast<Digit>(it->prefix.size()));
  return out;
}

/**
 * The uniqueness conditions on a tree path of length k = r mod p:
 * for the right side the top p digits are not all 0; for the left side the
 * top p steps do not all take the last child (that path spells mu^p(b)).
 * Vacuous when k < p.
 */
inline bool satisfies_uniqueness_conditions(const NumerationSystem& ns, const DigitWord& w) {
  const std::size_t p = ns.period();
  const std::size_t k = w.digits.size();
  if (k % p != ns.residue() % p) return false;
  if (k < p) return true;
  if (w.sign.value_or(0) == 0) {
    for (std::size_t i = 0; i < p; ++i) {
      if (w.digits[i] != 0) return true;
    }
    return false;
  }
  const auto& sub = ns.substitution();
  Letter x = ns.left();
  for (std::size_t i = 0; i < p; ++i) {
    const Word& img = sub.image(x);
    if (w.digits[i] + 1 != img.size()) return true;
    x = img.back();
  }
  return false;
}

/// rep_{u,r}(n): sign digit 0 for n >= 0 (right seed), 1 for n < 0 (left seed).
inline DigitWord rep(const NumerationSystem& ns, const BigInt& n) {
  const auto& sub = ns.substitution();
  const std::size_t p = ns.period();
  std::size_t k = ns.residue();
  DigitWord out;
  if (n >= 0) {
    const Letter a = ns.right();
    // minimal k = r (mod p) with n < |mu^k(a)|; then |mu^{k-p}(a)| <= n holds.
    while (n >= sub.image_length(a, k)) k += p;
    out.sign = 0;
    out.digits = detail::descend(sub, a, k, n);
  } else {
    const Letter b = ns.left();
    const BigInt magnitude = -n;
    // -|mu^k(b)| <= n < -|mu^{k-p}(b)| for the minimal such k = r (mod p).
    while (sub.image_length(b, k) < magnitude) k += p;
    out.sign = 1;
    out.digits = detail::descend(sub, b, k, sub.image_length(b, k) + n);
  }
  assert(satisfies_uniqueness_conditions(ns, out));
  return out;
}

struct Evaluation {
  BigInt value;
  bool canonical = false;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

/**
 * Evaluates any tree path: digit d_i selects child d_i, the value is the
 * column reached, i.e. sum_i |mu^i(m_i)| (minus |mu^k(b)| for sign 1).
 * `canonical` tells whether the word is rep(ns, value).
 */
inline Evaluation val(const NumerationSystem& ns, const DigitWord& word) {
  Digit sign = 0;
  if (word.sign) {
    sign = *word.sign;
  } else {
    if (ns.domain() == Domain::Z) throw Error(ErrorCode::SignRequired, "two-sided systems need a sign digit");
    sign = ns.has_right() ? 0 : 1;
  }
  if (sign > 1) throw Error(ErrorCode::DigitOutOfRange, "sign digit must be 0 or 1");
  const auto& sub = ns.substitution();
  const Letter root = sign == 0 ? ns.right() : ns.left();
  const std::size_t k = word.digits.size();
  Letter x = root;
  BigInt value = 0;
  for (std::size_t idx = 0; idx < k; ++idx) {
    const std::size_t level = k - 1 - idx;
    const Word& img = sub.image(x);
    const Digit d = word.digits[idx];
    if (d >= img.size()) {
      throw Error(ErrorCode::DigitOutOfRange, "digit " + std::to_string(d) + " at position " + std::to_string(level) +
                                                  " but '" + sub.name(x) + "' has " + std::to_string(img.size()) +
                                                  " children");
    }
    for (Digit j = 0; j < d; ++j) value += sub.image_length(img[j], level);
    x = img[d];
  }
  if (sign == 1) value -= sub.image_length(root, k);
  const DigitWord canonical_word = rep(ns, value);
  return {value, canonical_word.digits == word.digits && canonical_word.sign == sign};
}

/// Sum_i d_i U_i - sign * V_k for a word with k digits.
inline BigInt positional_value(const DigitWord& w, std::span<const BigInt> U, std::span<const BigInt> V) {
  const std::size_t k = w.digits.size();
  BigInt value = 0;
  for (std::size_t idx = 0; idx < k; ++idx) {
    const std::size_t pos = k - 1 - idx;
    if (w.digits[idx] == 0) continue;
    if (pos >= U.size()) throw Error(ErrorCode::OffsetOutOfRange, "weight table too short");
    value += BigInt(w.digits[idx]) * U[pos];
  }
  if (w.sign.value_or(0) == 1) {
    if (k >= V.size()) throw Error(ErrorCode::OffsetOutOfRange, "weight table too short");
    value -= V[k];
  }
  return value;
}

// ---------------------------------------------------------------------------
// Classic Dumont--Thomas system over N (fixed point, no sign digit)
// ---------------------------------------------------------------------------

inline void require_fixed_point_seed(const Substitution& sub, Letter a) {
  if (a >= sub.size()) throw Error(ErrorCode::UnknownLetter, "seed letter out of range");
  if (sub.first_letter(a) != a || !sub.is_growing(a)) {
    throw Error(ErrorCode::NotFixedPointSeed, "mu('" + sub.name(a) + "') must start with '" + sub.name(a) +
                                                  "' and the letter must be growing");
  }
}

/// rep_{mu,a}(n): ε for 0, otherwise digits with a nonzero leading digit.
inline DigitWord rep_classic_N(const Substitution& sub, Letter a, const BigInt& n) {
  require_fixed_point_seed(sub, a);
  if (n < 0) throw Error(ErrorCode::OffsetOutOfRange, "classic system represents non-negative integers only");
  std::size_t k = 0;
  while (n >= sub.image_length(a, k)) ++k;
  return DigitWord{std::nullopt, detail::descend(sub, a, k, n)};
}

/// Path value in T_{mu,a}; canonical iff the word is rep_classic_N of it.
inline Evaluation val_classic_N(const Substitution& sub, Letter a, const DigitWord& word) {
  require_fixed_point_seed(sub, a);
  const std::size_t k = word.digits.size();
  Letter x = a;
  BigInt value = 0;
  for (std::size_t idx = 0; idx < k; ++idx) {
    const std::size_t level = k - 1 - idx;
    const Word& img = sub.image(x);
    const Digit d = word.digits[idx];
    if (d >= img.size()) throw Error(ErrorCode::DigitOutOfRange, "digit " + std::to_string(d) + " too large");
    for (Digit j = 0; j < d; ++j) value += sub.image_length(img[j], level);
    x = img[d];
  }
  return {value, rep_classic_N(sub, a, value).digits == word.digits};
}

// ---------------------------------------------------------------------------
// Two's complement
// ---------------------------------------------------------------------------

/// Unique binary word avoiding the prefixes 00 and 11 with val_2c(w) = n.
inline DigitWord twos_complement_rep(const BigInt& n) {
  DigitWord w;
  if (n == 0) return w;
  // minimal k with -2^{k-1} <= n < 2^{k-1}
  std::size_t k = 1;
  BigInt half = 1;
  while (!(-half <= n && n < half)) {
    ++k;
    half <<= 1;
  }
  BigInt residue = n < 0 ? BigInt(n + (half << 1)) : n;
  w.digits.assign(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    w.digits[k - 1 - i] = static_cast<Digit>(bit_test(residue, static_cast<unsigned>(i)) ? 1 : 0);
  }
  return w;
}

/// val_2c(w) = -w_{k-1} 2^{k-1} + sum_{i<=k-2} w_i 2^i.
inline BigInt twos_complement_val(const DigitWord& w) {
  const std::size_t k = w.digits.size();
  BigInt value = 0;
  for (std::size_t idx = 0; idx < k; ++idx) {
    const Digit d = w.digits[idx];
    if (d > 1) throw Error(ErrorCode::DigitOutOfRange, "two's complement digits are 0 or 1");
    const std::size_t pos = k - 1 - idx;
    if (d == 1) {
      BigInt weight = BigInt(1) << static_cast<unsigned>(pos);
      value += idx == 0 ? BigInt(-weight) : weight;
    }
  }
  return value;
}

}  // namespace dtns
