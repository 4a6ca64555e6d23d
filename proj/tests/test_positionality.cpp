#include <catch_amalgamated.hpp>

#include <random>

#include "dtns/positionality.hpp"
#include "oracles.hpp"

using namespace dtns;

namespace {

NumerationSystem make(const char* sub_text, const char* seed_text, std::size_t r = 0,
                      std::optional<std::size_t> period = std::nullopt) {
  auto sub = parse_substitution(sub_text);
  return NumerationSystem(sub, parse_seed(sub, seed_text, period), r);
}

std::vector<std::string> names(const NumerationSystem& ns, const std::vector<Letter>& set) {
  std::vector<std::string> out;
  for (Letter x : set) out.push_back(minimal_system(ns).substitution().name(x));
  return out;
}

std::vector<BigInt> ints(std::initializer_list<long long> xs) { return {xs.begin(), xs.end()}; }

const char* const kCursed = "a1->b c a2, f->b b, a2->a3, b->d d, c->d d e, a3->a1, d->f f, e->f f f f";
const char* const kCursedRepaired = "a1->b c a2, f->b b, a2->a3, b->d d, c->d e, a3->a1, d->f f, e->f f f f";

}  // namespace

TEST_CASE("compute_Ej on the worked examples", "[positionality]") {
  SECTION("ccd/cd/ab/a, seed a|a") {
    const auto ns = make("a->ccd,b->cd,c->ab,d->a", "a|a");
    const auto sets = compute_Ej(ns);
    REQUIRE(names(ns, sets.E[0]) == std::vector<std::string>{"a"});
    REQUIRE(names(ns, sets.E[1]) == std::vector<std::string>{"c"});
    // Column -2 on level 1 is c next to d with |mu(d)| = 1: an obligation, trivial for r = 1.
    REQUIRE(sets.condition_c.empty());
    const auto sets1 = compute_Ej(make("a->ccd,b->cd,c->ab,d->a", "a|a", 1));
    REQUIRE(sets1.condition_c.size() == 1);
    REQUIRE(sets1.condition_c[0].exponent == 0);
  }
  SECTION("bcd/ba/bb/b, seed a|b: the column -2 rule adds c to E_1") {
    const auto ns = make("a->bcd,d->ba,b->bb,c->b", "a|b");
    const auto sets = compute_Ej(ns);
    REQUIRE(names(ns, sets.E[0]) == std::vector<std::string>{"b"});
    REQUIRE(names(ns, sets.E[1]) == std::vector<std::string>{"b", "c"});
    REQUIRE(names(ns, sets.c2_added[1]) == std::vector<std::string>{"c"});
  }
  SECTION("bca/bb/b, seed a|b: c only ever sits next to the spine") {
    const auto ns = make("a->bca,b->bb,c->b", "a|b");
    const auto sets = compute_Ej(ns);
    REQUIRE(sets.E.size() == 1);
    REQUIRE(names(ns, sets.E[0]) == std::vector<std::string>{"b"});
    REQUIRE(sets.c2_added[0].empty());
  }
  SECTION("empty E_j") {
    const auto ns = make("a->b,b->aa", "_|a", 0, 2);
    const auto sets = compute_Ej(ns);
    REQUIRE(sets.E[1].empty());
    const auto report = check_positional(ns, 6);
    REQUIRE(report.positional);
    REQUIRE(report.weights->unconstrained == std::vector<std::size_t>{1, 3, 5});
  }
}

TEST_CASE("E_j is independent of search depth past the closure bound", "[positionality][property]") {
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 150) {
    auto sub = oracle::random_substitution(rng, 4, 3);
    if (!sub) continue;
    for (const auto& seed : find_seeds(*sub, Domain::Z)) {
      const NumerationSystem ns(*sub, seed, 0);
      const std::size_t bound = state_closure_bound(ns);
      const auto closure = compute_Ej(ns);
      const auto once = compute_Ej_bounded(ns, bound);
      const auto twice = compute_Ej_bounded(ns, 2 * bound);
      REQUIRE(once.E == closure.E);
      REQUIRE(twice.E == closure.E);
      REQUIRE(twice.c2_added == closure.c2_added);
      ++checked;
    }
  }
}

TEST_CASE("check_positional verdicts", "[positionality]") {
  REQUIRE(check_positional(make("a->aab,b->a", "b|a")).positional);
  const auto rho = check_positional(make("a->abb,b->ab", "b|a"));
  REQUIRE_FALSE(rho.positional);
  REQUIRE(rho.counterexample);
  REQUIRE(rho.counterexample->ell == 1);
  const auto& sub = rho.system.substitution();
  REQUIRE(sub.name(rho.counterexample->first) == "a");
  REQUIRE(sub.name(rho.counterexample->second) == "b");
  REQUIRE(rho.counterexample->first_length == 3);
  REQUIRE(rho.counterexample->second_length == 2);
  REQUIRE_FALSE(rho.weights);

  REQUIRE_FALSE(check_positional(make(kCursed, "a1|_", 2)).positional);
  REQUIRE(check_positional(make(kCursedRepaired, "a1|_", 2)).positional);
  REQUIRE_FALSE(check_positional(make("a->bcd,d->ba,b->bb,c->b", "a|b")).positional);
}

TEST_CASE("unreachable letters are removed and recorded", "[positionality]") {
  const auto report = check_positional(make("a->aab,b->a,z->zz", "b|a"));
  REQUIRE(report.positional);
  REQUIRE(report.removed == std::vector<std::string>{"z"});
  REQUIRE(report.system.substitution().size() == 2);
}

TEST_CASE("weights", "[positionality]") {
  REQUIRE(weights(make("a->ccd,b->cd,c->ab,d->a", "a|a", 0), 6).U == ints({1, 2, 5, 8, 21, 34}));
  REQUIRE(weights(make("a->ccd,b->cd,c->ab,d->a", "a|a", 1), 6).U == ints({1, 3, 5, 13, 21, 55}));
  const auto bca = weights(make("a->bca,b->bb,c->b", "a|b"), 11);
  for (std::size_t i = 0; i <= 10; ++i) {
    REQUIRE(bca.U[i] == BigInt(1) << i);
    REQUIRE(bca.V[i] == (i == 0 ? BigInt(1) : BigInt(3) << (i - 1)));
  }
  REQUIRE(weights(make("a->ab,b->a", "a|a"), 6).U == ints({1, 2, 3, 5, 8, 13}));
  try {
    weights(make("a->abb,b->ab", "b|a"), 4);
    FAIL("expected NotPositionalSystem");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::NotPositionalSystem);
  }
  SECTION("V is the length of the left seed's iterates") {
    const auto ns = make("a->ccd,b->cd,c->ab,d->a", "a|a");
    const auto t = weights(ns, 12);
    for (std::size_t l = 0; l < 12; ++l) REQUIRE(t.V[l] == ns.substitution().image_length(ns.left(), l));
  }
}

TEST_CASE("positional weights evaluate every representation", "[positionality][property]") {
  const std::pair<const char*, const char*> cases[] = {{"a->aab,b->a", "b|a"},
                                                       {"a->ccd,b->cd,c->ab,d->a", "a|a"},
                                                       {"a->bca,b->bb,c->b", "a|b"},
                                                       {"a->ab,b->a", "b|a"},
                                                       {kCursedRepaired, "a1|_"}};
  for (const auto& [s, seed] : cases) {
    auto sub = parse_substitution(s);
    const auto spec = parse_seed(sub, seed);
    for (std::size_t r = 0; r < spec.period; ++r) {
      const NumerationSystem ns(sub, spec, r);
      const auto report = check_positional(ns, 40);
      REQUIRE(report.positional);
      for (long long n = -2000; n <= 2000; ++n) {
        if (ns.in_domain(n)) REQUIRE(positional_value(rep(ns, n), report.weights->U, report.weights->V) == n);
      }
    }
  }
}

TEST_CASE("fit_weights_oracle", "[positionality]") {
  SECTION("silver mean rho: U_1 = 3 from rep(3) but rep(5) = 020 evaluates to 6") {
    const auto fit = fit_weights_oracle(make("a->abb,b->ab", "b|a"), -5, 5);
    REQUIRE(fit.contradiction);
    const auto& c = *fit.contradiction;
    REQUIRE(c.witness.n == 5);
    REQUIRE(to_text(c.witness.word) == "020");
    REQUIRE(c.predicted == 6);
    const bool uses_three = std::any_of(c.support.begin(), c.support.end(), [](const RepEquation& e) {
      return e.n == 3 && to_text(e.word) == "010";
    });
    REQUIRE(uses_three);
  }
  SECTION("renamed square: rep(5) = 10 and rep(8) = 20 conflict") {
    const auto fit = fit_weights_oracle(make("a->ababa,b->aba,c->ccdcd,d->ccd", "_|a"), 0, 10);
    REQUIRE(fit.contradiction);
    REQUIRE(fit.contradiction->witness.n == 8);
    REQUIRE(to_text(fit.contradiction->witness.word) == "020");
    REQUIRE(fit.contradiction->support.back().n == 5);
  }
  SECTION("silver mean mu: consistent and equal to the analyzer's weights") {
    const auto ns = make("a->aab,b->a", "b|a");
    const auto fit = fit_weights_oracle(ns, -50, 50);
    REQUIRE(fit.consistent);
    REQUIRE(weights_match(*fit.consistent, weights(ns, 20)));
    REQUIRE(fit.consistent->U.size() >= 4);
    REQUIRE(fit.consistent->V.size() >= 4);
  }
  SECTION("a non-integral forced weight is a contradiction") {
    const std::vector<RepEquation> eqs{{1, DigitWord{0, {2}}}};
    const auto fit = fit_equations(eqs);
    REQUIRE(fit.contradiction);
    REQUIRE(fit.contradiction->coordinate == WeightVar{false, 0});
  }
}

TEST_CASE("Fabre-like systems over N have U_l = |mu^l(a_1)|", "[positionality]") {
  for (const char* s : {"a->ab,b->a", "a->ab,b->ac,c->a", "a->aab,b->aaaa", "a->ab,b->b", "a->aaab,b->ac,c->b"}) {
    const auto sub = parse_substitution(s);
    const auto table = weights(NumerationSystem(sub, make_seed(sub, std::nullopt, Letter{0})), 15);
    for (std::size_t l = 0; l < 15; ++l) REQUIRE(table.U[l] == sub.image_length(0, l));
  }
}

TEST_CASE("column -2 diagnostic lists the letters next to the spine", "[positionality]") {
  const auto diag = column_minus_two_diagnostic(make("a->bcd,d->ba,b->bb,c->b", "a|b"));
  REQUIRE(diag.size() == 3);
  REQUIRE(diag[0].level == 1);
  REQUIRE(diag[0].shares_parent);
}
