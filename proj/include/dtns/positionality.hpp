/**
 * @file positionality.hpp
 * @brief Structural positionality test: the residue sets E_j with the
 *        column -2 adjustment, condition (C), weight sequences U/V, and an
 *        independent weight-fitting oracle over exact rationals.
 *
 * Every analysis runs on the minimal alphabet (letters reachable from the
 * seed); the restriction is applied automatically and recorded.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "dtns/bigint.hpp"
#include "dtns/core.hpp"
#include "dtns/error.hpp"
#include "dtns/numeration.hpp"
#include "dtns/trees.hpp"

namespace dtns {

/// |mu^{r-j}(letter)| = |mu^{r-j}(e)| for every e in E_j.
struct ConditionC {
  std::size_t j = 0;
  Letter letter = 0;
  std::size_t exponent = 0;  ///< r - j
};

struct ResidueSets {
  std::vector<std::vector<Letter>> E;         ///< final sets, per residue, sorted
  std::vector<std::vector<Letter>> c2_added;  ///< letters added by the column -2 rule
  std::vector<ConditionC> condition_c;
};

struct WeightTable {
  std::vector<BigInt> U;
  std::vector<BigInt> V;
  std::vector<std::size_t> unconstrained;

  bool is_unconstrained(std::size_t i) const {
    return std::find(unconstrained.begin(), unconstrained.end(), i) != unconstrained.end();
  }
};

struct Counterexample {
  enum class Kind { Constancy, ConditionC };
  Kind kind = Kind::Constancy;
  std::size_t j = 0;
  std::size_t ell = 0;
  Letter first = 0;
  Letter second = 0;
  BigInt first_length;
  BigInt second_length;
};

inline constexpr std::size_t kDefaultWeightCount = 10;

struct PositionalityReport {
  bool positional = false;
  NumerationSystem system;            ///< the analysed system, over its minimal alphabet
  std::vector<std::string> removed;   ///< letters dropped by the restriction
  ResidueSets sets;
  std::optional<WeightTable> weights;
  std::optional<Counterexample> counterexample;
  std::vector<std::string> notes;
};

namespace detail {

enum class Kind : unsigned { General = 0, Spine = 1 };

inline void add_witnesses(const Substitution& sub, Letter x, Kind kind, std::vector<bool>& out) {
  const Word& img = sub.image(x);
  // A general parent contributes every non-final child. Under a spine parent
  // the child just left of the spine child sits at column -2 of a full left
  // block and is excluded.
  const std::size_t limit = kind == Kind::General ? img.size() - 1 : (img.size() >= 2 ? img.size() - 2 : 0);
  for (std::size_t pos = 0; pos < limit; ++pos) out[img[pos]] = true;
}

inline std::vector<std::vector<Letter>> to_sets(const std::vector<std::vector<bool>>& flags) {
  std::vector<std::vector<Letter>> out(flags.size());
  for (std::size_t j = 0; j < flags.size(); ++j) {
    for (Letter x = 0; x < flags[j].size(); ++x) {
      if (flags[j][x]) out[j].push_back(x);
    }
  }
  return out;
}

// Column -2 rule on literal levels 1..p-1. Mutates `flags` and fills the
// c2/condition-C parts of `sets`.
inline void apply_column_minus_two(const NumerationSystem& ns, std::vector<std::vector<bool>>& flags, ResidueSets& sets) {
  const std::size_t p = ns.period();
  const std::size_t r = ns.residue();
  sets.c2_added.assign(p, {});
  if (!ns.has_left()) return;
  const auto& sub = ns.substitution();
  Letter spine = ns.left();
  for (std::size_t j = 1; j < p; ++j) {
    const Word& img = sub.image(spine);
    if (img.size() >= 2) {
      const Letter c = img[img.size() - 2];
      const Letter d = img.back();
      const BigInt& len = sub.image_length(d, p - j);
      if (len > 1) {
        if (!flags[j][c]) {
          flags[j][c] = true;
          sets.c2_added[j].push_back(c);
        }
      } else if (j <= r) {
        sets.condition_c.push_back({j, c, r - j});
      }
    }
    spine = img.back();
  }
}

}  // namespace detail

/**
 * Residue sets by closure over occurrence states (letter, level mod p,
 * kind). The right seed starts as a general occurrence, the left seed as a
 * spine occurrence; a spine node passes the spine kind to its last child
 * only.
 */
inline ResidueSets compute_Ej(const NumerationSystem& input) {
  const NumerationSystem ns = minimal_system(input);
  const auto& sub = ns.substitution();
  const std::size_t p = ns.period();
  const std::size_t n = sub.size();
  std::vector<std::array<std::vector<bool>, 2>> seen(p, {std::vector<bool>(n, false), std::vector<bool>(n, false)});
  struct State {
    Letter x;
    std::size_t i;
    detail::Kind kind;
  };
  std::vector<State> stack;
  if (ns.has_right()) stack.push_back({ns.right(), 0, detail::Kind::General});
  if (ns.has_left()) stack.push_back({ns.left(), 0, detail::Kind::Spine});
  std::vector<std::vector<bool>> flags(p, std::vector<bool>(n, false));
  while (!stack.empty()) {
    const State s = stack.back();
    stack.pop_back();
    auto& slot = seen[s.i][static_cast<unsigned>(s.kind)];
    if (slot[s.x]) continue;
    slot[s.x] = true;
    const std::size_t child = (s.i + 1) % p;
    detail::add_witnesses(sub, s.x, s.kind, flags[child]);
    const Word& img = sub.image(s.x);
    for (std::size_t pos = 0; pos < img.size(); ++pos) {
      const bool spine = s.kind == detail::Kind::Spine && pos + 1 == img.size();
      stack.push_back({img[pos], child, spine ? detail::Kind::Spine : detail::Kind::General});
    }
  }
  ResidueSets sets;
  detail::apply_column_minus_two(ns, flags, sets);
  sets.E = detail::to_sets(flags);
  return sets;
}

/// The same sets computed level by level down to `depth` instead of by closure.
inline ResidueSets compute_Ej_bounded(const NumerationSystem& input, std::size_t depth) {
  const NumerationSystem ns = minimal_system(input);
  const auto& sub = ns.substitution();
  const std::size_t p = ns.period();
  const std::size_t n = sub.size();
  std::array<std::vector<bool>, 2> level{std::vector<bool>(n, false), std::vector<bool>(n, false)};
  if (ns.has_right()) level[0][ns.right()] = true;
  if (ns.has_left()) level[1][ns.left()] = true;
  std::vector<std::vector<bool>> flags(p, std::vector<bool>(n, false));
  for (std::size_t l = 1; l <= depth; ++l) {
    std::array<std::vector<bool>, 2> next{std::vector<bool>(n, false), std::vector<bool>(n, false)};
    for (unsigned kind = 0; kind < 2; ++kind) {
      for (Letter x = 0; x < n; ++x) {
        if (!level[kind][x]) continue;
        detail::add_witnesses(sub, x, static_cast<detail::Kind>(kind), flags[l % p]);
        const Word& img = sub.image(x);
        for (std::size_t pos = 0; pos < img.size(); ++pos) {
          next[kind == 1 && pos + 1 == img.size() ? 1 : 0][img[pos]] = true;
        }
      }
    }
    level = std::move(next);
  }
  ResidueSets sets;
  detail::apply_column_minus_two(ns, flags, sets);
  sets.E = detail::to_sets(flags);
  return sets;
}

/// Number of occurrence states, 2 |A| p; closure is reached within this many levels.
inline std::size_t state_closure_bound(const NumerationSystem& ns) {
  return 2 * minimal_system(ns).substitution().size() * ns.period();
}

struct ColumnMinusTwo {
  std::size_t level = 0;
  Letter c = 0;
  Letter d = 0;
  bool shares_parent = false;
};

/// Letters in columns -2 and -1 on levels 1..2p-1 (minimal alphabet), for inspection.
inline std::vector<ColumnMinusTwo> column_minus_two_diagnostic(const NumerationSystem& input) {
  std::vector<ColumnMinusTwo> out;
  const NumerationSystem ns = minimal_system(input);
  if (!ns.has_left()) return out;
  const auto& sub = ns.substitution();
  // Track the last two letters of mu^l(b) together with their parents.
  Word tail{ns.left()};
  std::vector<std::size_t> parent{0};
  for (std::size_t level = 1; level < 2 * ns.period(); ++level) {
    Word next;
    std::vector<std::size_t> next_parent;
    for (std::size_t i = 0; i < tail.size(); ++i) {
      for (Letter y : sub.image(tail[i])) {
        next.push_back(y);
        next_parent.push_back(i);
      }
    }
    if (next.size() > 2) {
      next.erase(next.begin(), next.end() - 2);
      next_parent.erase(next_parent.begin(), next_parent.end() - 2);
    }
    if (next.size() == 2) out.push_back({level, next[0], next[1], next_parent[0] == next_parent[1]});
    tail = next;
  }
  return out;
}

namespace detail {

inline std::optional<Counterexample> check_constancy(const Substitution& sub, const std::vector<Letter>& set,
                                                     std::size_t j, std::size_t ell0, std::size_t p) {
  if (set.size() < 2) return std::nullopt;
  for (std::size_t t = 0; t < sub.size(); ++t) {
    const std::size_t ell = ell0 + t * p;
    const BigInt& ref = sub.image_length(set[0], ell);
    for (std::size_t i = 1; i < set.size(); ++i) {
      const BigInt& other = sub.image_length(set[i], ell);
      if (other != ref) return Counterexample{Counterexample::Kind::Constancy, j, ell, set[0], set[i], ref, other};
    }
  }
  return std::nullopt;
}

inline WeightTable build_weights(const NumerationSystem& ns, const ResidueSets& sets, std::size_t count) {
  const auto& sub = ns.substitution();
  const std::size_t p = ns.period();
  const std::size_t r = ns.residue();
  WeightTable table;
  for (std::size_t ell = 0; ell < count; ++ell) {
    const std::size_t j = (r + p - ell % p) % p;
    if (!sets.E[j].empty()) {
      table.U.push_back(sub.image_length(sets.E[j].front(), ell));
      continue;
    }
    std::optional<Letter> supplier;
    for (const auto& ob : sets.condition_c) {
      if (ob.j == j && ob.exponent == ell) supplier = ob.letter;
    }
    if (supplier) {
      table.U.push_back(sub.image_length(*supplier, ell));
    } else {
      table.U.push_back(0);
      table.unconstrained.push_back(ell);
    }
  }
  if (ns.has_left()) {
    for (std::size_t ell = 0; ell < count; ++ell) table.V.push_back(sub.image_length(ns.left(), ell));
  }
  return table;
}

}  // namespace detail

/**
 * Decides positionality: for every residue j, |mu^l(c)| must be constant over
 * E_j for all l = r - j (mod p), and every condition-(C) obligation must hold.
 */
inline PositionalityReport check_positional(const NumerationSystem& input, std::size_t weight_count = kDefaultWeightCount) {
  std::vector<std::string> removed;
  NumerationSystem ns = minimal_system(input, &removed);
  PositionalityReport report{false, ns, removed, compute_Ej(ns), std::nullopt, std::nullopt, {}};
  const auto& sub = ns.substitution();
  const std::size_t p = ns.period();
  const std::size_t r = ns.residue();
  if (!removed.empty()) {
    std::string list;
    for (const auto& name : removed) list += (list.empty() ? "" : ",") + name;
    report.notes.push_back("restricted to minimal alphabet; removed " + list);
  }
  report.notes.push_back("constancy checked on " + std::to_string(sub.size()) +
                         " terms per progression; the characteristic polynomial of M^p extends it to all terms");
  for (std::size_t j = 0; j < p && !report.counterexample; ++j) {
    const std::size_t ell0 = (r + p - j) % p;
    report.counterexample = detail::check_constancy(sub, report.sets.E[j], j, ell0, p);
  }
  for (const auto& ob : report.sets.condition_c) {
    if (report.counterexample) break;
    const BigInt& len = sub.image_length(ob.letter, ob.exponent);
    for (Letter e : report.sets.E[ob.j]) {
      const BigInt& other = sub.image_length(e, ob.exponent);
      if (other != len) {
        report.counterexample = Counterexample{Counterexample::Kind::ConditionC, ob.j, ob.exponent, ob.letter, e, len, other};
        break;
      }
    }
  }
  for (std::size_t j = 0; j < p; ++j) {
    if (report.sets.E[j].empty()) report.notes.push_back("E_" + std::to_string(j) + " is empty");
  }
  report.positional = !report.counterexample;
  if (report.positional) report.weights = detail::build_weights(ns, report.sets, weight_count);
  return report;
}

/// U_0..U_{count-1} and V_0..V_{count-1} of a positional system.
inline WeightTable weights(const NumerationSystem& ns, std::size_t count) {
  PositionalityReport report = check_positional(ns, count);
  if (!report.positional) throw Error(ErrorCode::NotPositionalSystem, "the system is not positional");
  return *report.weights;
}

// ---------------------------------------------------------------------------
// Weight-fitting oracle
// ---------------------------------------------------------------------------

/// Unknown of the linear system: U_i or V_i.
struct WeightVar {
  bool is_v = false;
  std::size_t index = 0;

  std::size_t id() const { return 2 * index + (is_v ? 1 : 0); }
  static WeightVar from_id(std::size_t id) { return {id % 2 == 1, id / 2}; }
  std::string label() const { return std::string(is_v ? "V" : "U") + std::to_string(index); }
  friend bool operator==(const WeightVar&, const WeightVar&) = default;
};

struct RepEquation {
  BigInt n;
  DigitWord word;
};

struct ConsistentWeights {
  std::map<std::size_t, BigInt> U;  ///< determined coordinates only
  std::map<std::size_t, BigInt> V;
  std::size_t equations = 0;
};

struct Contradiction {
  /// The equation that failed, or the last one needed to pin a bad coordinate.
  RepEquation witness;
  /// Value of the witness word forced by the supporting equations. For a bad
  /// coordinate this is the forced coordinate value.
  Rational predicted;
  std::optional<WeightVar> coordinate;  ///< set when a forced weight is non-integral or negative
  std::vector<RepEquation> support;     ///< equations the derivation uses, increasing |n|
};

struct FitResult {
  std::optional<ConsistentWeights> consistent;
  std::optional<Contradiction> contradiction;

  bool is_consistent() const { return consistent.has_value(); }
};

namespace detail {

using SparseRow = std::map<std::size_t, Rational>;

struct EqRow {
  SparseRow coef;
  Rational rhs;
  boost::dynamic_bitset<> deps;
};

inline void axpy(EqRow& row, const Rational& factor, const EqRow& pivot) {
  for (const auto& [var, c] : pivot.coef) {
    auto it = row.coef.find(var);
    if (it == row.coef.end()) {
      row.coef.emplace(var, -factor * c);
    } else {
      it->second -= factor * c;
      if (it->second == 0) row.coef.erase(it);
    }
  }
  row.rhs -= factor * pivot.rhs;
  row.deps |= pivot.deps;
}

inline EqRow equation_row(const RepEquation& eq, std::size_t id, std::size_t total) {
  EqRow row{{}, Rational(eq.n), boost::dynamic_bitset<>(total)};
  row.deps.set(id);
  const std::size_t k = eq.word.digits.size();
  for (std::size_t idx = 0; idx < k; ++idx) {
    const Digit d = eq.word.digits[idx];
    if (d != 0) row.coef[WeightVar{false, k - 1 - idx}.id()] += Rational(d);
  }
  if (eq.word.sign.value_or(0) == 1) row.coef[WeightVar{true, k}.id()] += Rational(-1);
  return row;
}

inline std::vector<RepEquation> collect_support(const std::vector<RepEquation>& eqs, const boost::dynamic_bitset<>& deps,
                                                std::size_t skip) {
  std::vector<RepEquation> out;
  for (std::size_t i = deps.find_first(); i != boost::dynamic_bitset<>::npos; i = deps.find_next(i)) {
    if (i != skip) out.push_back(eqs[i]);
  }
  return out;
}

}  // namespace detail

/**
 * Fits U/V to explicit representations: every n in [lo, hi] inside the
 * domain contributes n = sum d_i U_i - sign V_k, with words from oracle_rep.
 * Equations are eliminated exactly in order of increasing |n|.
 */
inline FitResult fit_equations(const std::vector<RepEquation>& eqs) {
  const std::size_t total = eqs.size();
  std::map<std::size_t, detail::EqRow> pivots;
  for (std::size_t id = 0; id < total; ++id) {
    detail::EqRow row = detail::equation_row(eqs[id], id, total);
    while (!row.coef.empty()) {
      const auto top = std::prev(row.coef.end());
      auto pit = pivots.find(top->first);
      if (pit == pivots.end()) break;
      const Rational factor = top->second;
      detail::axpy(row, factor, pit->second);
    }
    if (row.coef.empty()) {
      if (row.rhs != 0) {
        Contradiction c;
        c.witness = eqs[id];
        c.predicted = Rational(eqs[id].n) - row.rhs;
        c.support = detail::collect_support(eqs, row.deps, id);
        return {std::nullopt, std::move(c)};
      }
      continue;
    }
    const auto top = std::prev(row.coef.end());
    const Rational lead = top->second;
    for (auto& [var, c] : row.coef) c /= lead;
    row.rhs /= lead;
    pivots.emplace(top->first, std::move(row));
  }

  // Back substitution in increasing pivot order leaves only free variables.
  ConsistentWeights result;
  result.equations = total;
  for (auto& [var, row] : pivots) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = row.coef.begin(); it != row.coef.end(); ++it) {
        if (it->first == var) continue;
        auto pit = pivots.find(it->first);
        if (pit == pivots.end() || pit->first >= var) continue;
        const Rational factor = it->second;
        detail::axpy(row, factor, pit->second);
        changed = true;
        break;
      }
    }
    if (row.coef.size() != 1) continue;
    const WeightVar w = WeightVar::from_id(var);
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (denominator(row.rhs) != 1 || row.rhs < 0) {
      Contradiction c;
      std::size_t last = row.deps.find_first();
      for (std::size_t i = last; i != boost::dynamic_bitset<>::npos; i = row.deps.find_next(i)) last = i;
      c.witness = eqs[last];
      c.predicted = row.rhs;
      c.coordinate = w;
      c.support = detail::collect_support(eqs, row.deps, last);
      return {std::nullopt, std::move(c)};
    }
    (w.is_v ? result.V : result.U).emplace(w.index, numerator(row.rhs));
  }
  return {std::move(result), std::nullopt};
}

/// Integers of [lo, hi] in the domain of ns, ordered 0, 1, -1, 2, -2, ...
inline std::vector<BigInt> fitting_order(const NumerationSystem& ns, const BigInt& lo, const BigInt& hi) {
  std::vector<BigInt> out;
  const BigInt bound = std::max(hi < 0 ? BigInt(-hi) : hi, lo < 0 ? BigInt(-lo) : lo);
  for (BigInt m = 0; m <= bound; ++m) {
    if (m >= lo && m <= hi && ns.has_right()) out.push_back(m);
    if (m > 0 && -m >= lo && -m <= hi && ns.has_left()) out.push_back(-m);
  }
  return out;
}

inline FitResult fit_weights_oracle(const NumerationSystem& ns, const BigInt& lo, const BigInt& hi,
                                    std::size_t cap = kDefaultNodeCap) {
  const auto reps = oracle_rep_range(ns, lo, hi, cap);
  std::vector<RepEquation> eqs;
  for (const BigInt& n : fitting_order(ns, lo, hi)) eqs.push_back({n, reps.at(n)});
  return fit_equations(eqs);
}

/// True iff every coordinate the oracle determined matches the table.
inline bool weights_match(const ConsistentWeights& fit, const WeightTable& table) {
  for (const auto& [i, u] : fit.U) {
    if (i >= table.U.size() || table.is_unconstrained(i) || table.U[i] != u) return false;
  }
  for (const auto& [i, v] : fit.V) {
    if (i >= table.V.size() || table.V[i] != v) return false;
  }
  return true;
}

}  // namespace dtns
