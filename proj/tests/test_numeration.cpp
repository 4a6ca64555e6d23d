#include <catch_amalgamated.hpp>

#include "dtns/numeration.hpp"
#include "dtns/trees.hpp"
#include "oracles.hpp"

using namespace dtns;

namespace {

NumerationSystem make(const char* sub_text, const char* seed_text, std::size_t r = 0,
                      std::optional<std::size_t> period = std::nullopt) {
  auto sub = parse_substitution(sub_text);
  auto seed = parse_seed(sub, seed_text, period);
  return NumerationSystem(sub, seed, r);
}

std::string rep_text(const NumerationSystem& ns, long long n) { return to_text(rep(ns, BigInt(n))); }

struct Sys {
  const char* sub;
  const char* seed;
  std::size_t r;
};

const Sys kSystems[] = {
    {"a->abc,b->c,c->ac", "c|a", 0},
    {"a->aab,b->a", "b|a", 0},
    {"a->aab,b->a", "b|a", 1},
    {"a->abb,b->ab", "b|a", 0},
    {"a->ccd,b->cd,c->ab,d->a", "a|a", 0},
    {"a->ccd,b->cd,c->ab,d->a", "a|a", 1},
    {"a->bca,b->bb,c->b", "a|b", 0},
    {"a->bcd,d->ba,b->bb,c->b", "a|b", 0},
    {"a->bcd,d->ba,b->bb,c->b", "a|b", 1},
    {"a->ab,b->a", "b|a", 1},
    {"a->ab,b->ac,c->a", "_|a", 0},
    {"a1->b c a2, f->b b, a2->a3, b->d d, c->d d e, a3->a1, d->f f, e->f f f f", "a1|_", 2},
};

}  // namespace

TEST_CASE("decompose_prefix", "[numeration]") {
  const auto trib = parse_substitution("a->ab,b->ac,c->a");
  const Letter a = 0, b = 1, c = 2;
  const auto steps = decompose_prefix(trib, a, 3, 3);
  REQUIRE(steps.size() == 3);
  REQUIRE(steps[0] == AdmissibleStep{Word{a}, c});
  REQUIRE(steps[1] == AdmissibleStep{Word{a}, b});
  REQUIRE(steps[2] == AdmissibleStep{Word{}, a});
  REQUIRE(digits_of(steps) == std::vector<Digit>{0, 1, 1});

  const auto silver = parse_substitution("a->aab,b->a");
  REQUIRE(digits_of(decompose_prefix(silver, 0, 2, 5)) == std::vector<Digit>{1, 2});

  SECTION("offset 0 follows the leftmost spine") {
    for (const auto& step : decompose_prefix(trib, a, 6, 0)) REQUIRE(step == AdmissibleStep{Word{}, a});
  }
  SECTION("out of range") {
    REQUIRE_THROWS_AS(decompose_prefix(trib, a, 3, 7), Error);
    REQUIRE_THROWS_AS(decompose_prefix(trib, a, 3, -1), Error);
  }
}

TEST_CASE("rep on printed examples", "[numeration]") {
  const auto abc = make("a->abc,b->c,c->ac", "c|a");
  REQUIRE(rep_text(abc, 2) == "02");
  REQUIRE(rep_text(abc, -5) == "100");
  REQUIRE(rep_text(abc, -2) == "10");

  const auto silver = make("a->aab,b->a", "b|a", 0, 2);
  REQUIRE(rep_text(silver, -4) == "10120");
  REQUIRE(rep_text(silver, 5) == "012");

  const auto phi0 = make("a->ccd,b->cd,c->ab,d->a", "a|a", 0);
  const auto phi1 = make("a->ccd,b->cd,c->ab,d->a", "a|a", 1);
  REQUIRE(rep_text(phi0, 0) == "0");
  REQUIRE(rep_text(phi1, 0) == "00");
  REQUIRE(rep_text(phi1, 7) == "0102");

  SECTION("missing sides") {
    const auto n_only = make("a->ab,b->ac,c->a", "_|a");
    REQUIRE_THROWS_AS(rep(n_only, -1), Error);
    try {
      rep(n_only, -1);
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::SideMissing);
    }
  }
}

TEST_CASE("val on printed examples", "[numeration]") {
  const auto abc = make("a->abc,b->c,c->ac", "c|a");
  REQUIRE(val(abc, parse_digit_word("02")) == Evaluation{2, true});
  REQUIRE(val(abc, parse_digit_word("002")) == Evaluation{2, false});
  try {
    val(abc, parse_digit_word("03"));
    FAIL("expected DigitOutOfRange");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::DigitOutOfRange);
  }
  REQUIRE_THROWS_AS(val(abc, DigitWord{std::nullopt, {0, 2}}), Error);
}

TEST_CASE("digit word text form", "[numeration]") {
  REQUIRE(to_text(DigitWord{1, {0, 12, 0}}) == "1.0.12.0");
  REQUIRE(parse_digit_word("1.0.12.0") == DigitWord{1, {0, 12, 0}});
  REQUIRE(to_text(DigitWord{}) == "ε");
  REQUIRE(parse_digit_word("ε", false) == DigitWord{});
  REQUIRE(parse_digit_word("10120") == DigitWord{1, {0, 1, 2, 0}});
  REQUIRE_THROWS_AS(parse_digit_word("1x"), Error);
  REQUIRE_THROWS_AS(parse_digit_word(""), Error);
}

TEST_CASE("classic system over N", "[numeration]") {
  const auto trib = parse_substitution("a->ab,b->ac,c->a");
  const char* expected[] = {"ε", "1", "10", "11", "100", "101", "110"};
  for (int n = 0; n <= 6; ++n) REQUIRE(to_text(rep_classic_N(trib, 0, n)) == expected[n]);
  for (int n = 0; n < 500; ++n) {
    const auto w = rep_classic_N(trib, 0, n);
    if (!w.digits.empty()) REQUIRE(w.digits.front() != 0);
    REQUIRE(val_classic_N(trib, 0, w) == Evaluation{n, true});
  }
  REQUIRE(val_classic_N(trib, 0, DigitWord{std::nullopt, {0, 1}}) == Evaluation{1, false});
  try {
    rep_classic_N(parse_substitution("a->ba,b->ab"), 0, 3);
    FAIL("expected NotFixedPointSeed");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::NotFixedPointSeed);
  }
}

TEST_CASE("two's complement", "[numeration]") {
  const char* expected[] = {"100", "101", "10", "1", "ε", "01", "010", "011", "0100"};
  for (int n = -4; n <= 4; ++n) REQUIRE(to_text(twos_complement_rep(n)) == expected[n + 4]);
  REQUIRE(twos_complement_val(parse_digit_word("011", false)) == 3);

  SECTION("matches the system a->aa with seed a|a away from 0") {
    const auto dt = make("a->aa", "a|a");
    for (int n = -2000; n <= 2000; ++n) {
      const auto w = twos_complement_rep(n);
      REQUIRE(twos_complement_val(w) == n);
      if (n == 0) continue;
      const auto d = rep(dt, n);
      std::vector<Digit> joined{*d.sign};
      joined.insert(joined.end(), d.digits.begin(), d.digits.end());
      REQUIRE(joined == w.digits);
    }
  }
  SECTION("positional with U_i = V_i = 2^i") {
    std::vector<BigInt> pow2;
    for (int i = 0; i < 20; ++i) pow2.push_back(BigInt(1) << i);
    for (int n = -3000; n <= 3000; ++n) {
      const auto w = twos_complement_rep(n);
      if (w.digits.empty()) continue;
      const DigitWord split{w.digits[0], {w.digits.begin() + 1, w.digits.end()}};
      REQUIRE(positional_value(split, pow2, pow2) == n);
    }
  }
}

TEST_CASE("rep/val properties on the fixture systems", "[numeration][property]") {
  for (const auto& s : kSystems) {
    const auto ns = make(s.sub, s.seed, s.r);
    const auto& sub = ns.substitution();
    INFO(s.sub << " seed " << s.seed << " r=" << s.r);
    std::optional<DigitWord> prev_pos;
    std::optional<DigitWord> prev_neg;
    for (long long n = -3000; n <= 3000; ++n) {
      if (!ns.in_domain(n)) continue;
      const auto w = rep(ns, n);
      REQUIRE(val(ns, w) == Evaluation{n, true});
      REQUIRE(w.digits.size() % ns.period() == ns.residue());
      REQUIRE(*w.sign == (n >= 0 ? 0U : 1U));
      REQUIRE(satisfies_uniqueness_conditions(ns, w));
      // Columns increase along a level: same sign and length => lexicographic order.
      auto& prev = n >= 0 ? prev_pos : prev_neg;
      if (prev && prev->digits.size() == w.digits.size()) REQUIRE(prev->digits < w.digits);
      prev = w;
      // Each partial prefix length stays below the pivot prefix length.
      const Letter root = n >= 0 ? ns.right() : ns.left();
      const std::size_t k = w.digits.size();
      const BigInt offset = n >= 0 ? BigInt(n) : BigInt(sub.image_length(root, k) + n);
      const auto steps = decompose_prefix(sub, root, k, offset);
      BigInt partial = 0;
      for (std::size_t i = 0; i < k; ++i) {
        partial += sub.image_length(steps[i].prefix, i);
        Word mk = steps[i].prefix;
        mk.push_back(steps[i].pivot);
        REQUIRE(partial < sub.image_length(mk, i));
      }
    }
  }
}

TEST_CASE("descent agrees with path enumeration and the tree oracle", "[numeration][property]") {
  for (const auto& s : kSystems) {
    const auto ns = make(s.sub, s.seed, s.r);
    INFO(s.sub << " seed " << s.seed << " r=" << s.r);
    for (long long n = -60; n <= 60; ++n) {
      if (!ns.in_domain(n)) continue;
      const auto w = rep(ns, n);
      REQUIRE(oracle::enumerate_rep(ns, n) == w);
      REQUIRE(oracle_rep(ns, n) == w);
    }
  }
}

TEST_CASE("very large integers", "[numeration]") {
  const auto fib = make("a->ab,b->a", "b|a", 0);
  BigInt n = 1;
  for (int i = 0; i < 300; ++i) n *= 10;
  for (const BigInt& m : {n, BigInt(-n), BigInt(n + 12345), BigInt(-n - 1)}) {
    const auto w = rep(fib, m);
    REQUIRE(w.digits.size() > 1000);
    REQUIRE(val(fib, w) == Evaluation{m, true});
  }
}
