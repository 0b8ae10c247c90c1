#include <random>

#include "doctest.h"
#include "iwasawa/torus_characters.hpp"
#include "test_support.hpp"

using namespace iwasawa;

namespace {

long random_unit_long(std::mt19937_64& rng, int p) {
  long a;
  do a = 1 + static_cast<long>(rng() % 100000);
  while (a % p == 0);
  return a;
}

TorusCharacter random_character(std::mt19937_64& rng, const PrecisionContext& ctx) {
  const int order = ctx.p == 2 ? 2 : ctx.p - 1;
  const PadicNumber tau = torsion_generator(ctx);
  return TorusCharacter::from_images(
      ctx, {padic_pow(tau, static_cast<long>(rng() % order)), padic_pow(tau, static_cast<long>(rng() % order)),
            testing::random_principal(rng, ctx), testing::random_principal(rng, ctx)});
}

}  // namespace

TEST_CASE("char_eval: examples") {
  const auto ctx = PrecisionContext::make(5, 12, 8);
  const auto triv = TorusCharacter::trivial(ctx);
  CHECK(char_eval(triv, 7, 13).agrees_with(padic_int(ctx, 1)));

  const auto d = TorusCharacter::closed_form(ctx, 0, 1);
  for (long a : {2L, 3L, 6L, 1234L}) {
    const PadicNumber x = padic_int(ctx, a);
    CHECK(testing::agree_to(char_eval(d, x.inverse(), x), x, 10));
  }

  const PadicNumber img = pexp(padic_int(ctx, 2) * plog(padic_int(ctx, 6)));
  const auto one = padic_int(ctx, 1);
  const auto chi = TorusCharacter::from_images(ctx, {one, one, one, img});
  CHECK(testing::agree_to(char_eval(chi, 1, 6), img, 11));
  CHECK_THROWS_AS(char_eval(chi, 5, 1), PadicError);
}

TEST_CASE("closed-form characters evaluate to a^m1 d^m2 exactly") {
  std::mt19937_64 rng(4);
  for (int p : {2, 3, 5, 7}) {
    const auto ctx = PrecisionContext::make(p, 14, 8);
    for (int t = 0; t < 20; ++t) {
      const long m1 = static_cast<long>(rng() % 9) - 4;
      const long m2 = static_cast<long>(rng() % 9) - 4;
      const long a = random_unit_long(rng, p);
      const long d = random_unit_long(rng, p);
      mpq_class expected = 1;
      for (long i = 0; i < std::abs(m1); ++i) expected *= m1 > 0 ? mpq_class(a) : mpq_class(1, a);
      for (long i = 0; i < std::abs(m2); ++i) expected *= m2 > 0 ? mpq_class(d) : mpq_class(1, d);
      expected.canonicalize();
      const auto chi = TorusCharacter::closed_form(ctx, m1, m2);
      CHECK(testing::agree_to(char_eval(chi, a, d), padic_rat(ctx, expected), 14 - 3));
    }
  }
}

TEST_CASE("unit decomposition") {
  std::mt19937_64 rng(6);
  for (int p : {2, 3, 5, 11}) {
    const auto ctx = PrecisionContext::make(p, 12, 8);
    for (int t = 0; t < 30; ++t) {
      const PadicNumber a = testing::random_unit(rng, ctx);
      const UnitDecomposition d = decompose_unit(ctx, a);
      const PadicNumber rebuilt = padic_pow(torsion_generator(ctx), d.torsion_index) *
                                  pexp(d.exponent * plog(principal_generator(ctx)));
      CHECK(rebuilt.agrees_with(a));
    }
  }
}

TEST_CASE("c invariant") {
  const auto ctx = PrecisionContext::make(5, 16, 8);
  CHECK(c_of_chi(TorusCharacter::trivial(ctx)).c.is_zero());
  CHECK(c_of_chi(TorusCharacter::closed_form(ctx, 0, 1)).c.agrees_with(padic_int(ctx, 1)));
  const CInvariant c3 = c_of_chi(TorusCharacter::closed_form(ctx, 2, 5));
  CHECK(testing::agree_to(c3.c, padic_int(ctx, 3), 14));
  CHECK(c3.verified_to >= 12);

  const PadicNumber sixth = padic_rat(ctx, mpq_class(1, 6));
  CHECK(c_of_chi(TorusCharacter::from_c(ctx, sixth)).c.agrees_with(sixth));

  const auto c2 = PrecisionContext::make(2, 16, 8);
  CHECK(testing::agree_to(c_of_chi(TorusCharacter::closed_form(c2, 1, -2)).c, padic_int(c2, -3), 13));
}

TEST_CASE("w twist") {
  const auto ctx = PrecisionContext::make(3, 16, 8);
  const auto triv = TorusCharacter::trivial(ctx);
  CHECK(w_twist(triv).same_images(triv));
  const auto d = TorusCharacter::closed_form(ctx, 0, 1);
  const auto wd = w_twist(d);
  CHECK(wd.same_images(TorusCharacter::closed_form(ctx, 1, 0)));
  CHECK(c_of_chi(wd).c.agrees_with(padic_int(ctx, -1)));
  std::mt19937_64 rng(12);
  const auto chi = random_character(rng, ctx);
  CHECK(w_twist(w_twist(chi)).same_images(chi));
}

TEST_CASE("character properties on random data") {
  std::mt19937_64 rng(100);
  for (int p : {2, 3, 5}) {
    const auto ctx = PrecisionContext::make(p, 16, 8);
    for (int t = 0; t < 34; ++t) {
      const auto chi = random_character(rng, ctx);
      const auto chi2 = random_character(rng, ctx);
      const PadicNumber a = testing::random_unit(rng, ctx), d = testing::random_unit(rng, ctx);
      const PadicNumber a2 = testing::random_unit(rng, ctx), d2 = testing::random_unit(rng, ctx);
      CHECK(char_eval(chi, a * a2, d * d2).agrees_with(char_eval(chi, a, d) * char_eval(chi, a2, d2)));
      const CInvariant c = c_of_chi(chi);
      CHECK(c_of_chi(chi * chi2).c.agrees_with(c.c + c_of_chi(chi2).c));
      CHECK(c_of_chi(w_twist(chi)).c.agrees_with(-c.c));
      CHECK(central_agreement(chi, w_twist(chi)));
      CHECK(char_eval(chi, a, a).agrees_with(char_eval(w_twist(chi), a, a)));
      CHECK((chi * chi.inverse()).agrees_with(TorusCharacter::trivial(ctx)));
    }
  }
}

TEST_CASE("classify_c") {
  const auto ctx = PrecisionContext::make(3, 8, 8);
  const CInvariant three{padic_int(ctx, 3), 8, 8};
  const CClassification a = classify_c(three, 10);
  CHECK(a.verdict() == "in_N0_at 3");
  CHECK_FALSE(a.nonpositive_match);

  // 1/4 = 4921 mod 3^8; no integer in [0, 100] matches.
  const CInvariant quarter{padic_rat(ctx, mpq_class(1, 4)), 8, 8};
  CHECK(quarter.c.residue(8) == 4921);
  const CClassification b = classify_c(quarter, 100);
  CHECK(b.verdict() == "not_in_N0_within_precision");
  CHECK(b.negative_verdict() == "not_in_minus_N0_within_precision");

  const CInvariant minus_two{padic_int(ctx, -2), 8, 8};
  const CClassification c = classify_c(minus_two, 10);
  CHECK(c.verdict() == "not_in_N0_within_precision");
  CHECK(c.negative_verdict() == "in_minus_N0_at 2");

  const CInvariant zero{PadicNumber::zero(3, 8), 8, 8};
  CHECK(classify_c(zero, 5).verdict() == "in_N0_at 0");
  CHECK(classify_c(zero, 5).negative_verdict() == "in_minus_N0_at 0");

  const CInvariant vague{padic_int(ctx, 3).with_absolute_precision(2), 2, 2};
  CHECK(classify_c(vague, 10).ambiguous);
}

TEST_CASE("conductor") {
  const auto ctx = PrecisionContext::make(2, 12, 8);
  CHECK(char_conductor(TorusCharacter::trivial(ctx)).level == 0);
  // The sign of a mod 4: order 2, trivial on 1 + 4Z_2 but not on all units.
  const auto one = padic_int(ctx, 1);
  const auto sign = TorusCharacter::from_images(ctx, {padic_int(ctx, -1), one, one, one});
  CHECK(padic_pow(sign.image(TorusCharacter::torsion_1), 2).agrees_with(one));
  CHECK(char_conductor(sign).level == 2);
  const auto faithful = TorusCharacter::closed_form(ctx, 0, 1);
  CHECK_FALSE(char_conductor(faithful).level.has_value());
  CHECK(char_conductor(faithful).to_string() == "> N");

  const auto c5 = PrecisionContext::make(5, 12, 8);
  CHECK_FALSE(char_conductor(TorusCharacter::closed_form(c5, 4, 0)).level.has_value());
  const auto five = TorusCharacter::from_images(c5, {teichmuller(c5, 2), padic_int(c5, 1), padic_int(c5, 1),
                                                     padic_int(c5, 1)});
  CHECK(char_conductor(five).level == 1);
}

TEST_CASE("invalid character data is rejected") {
  const auto ctx = PrecisionContext::make(5, 10, 8);
  const auto one = padic_int(ctx, 1);
  CHECK_THROWS_AS(TorusCharacter::from_images(ctx, {padic_int(ctx, 2), one, one, one}), PadicError);
  CHECK_THROWS_AS(TorusCharacter::from_images(ctx, {one, one, padic_int(ctx, 2), one}), PadicError);
  CHECK_THROWS_AS(TorusCharacter::from_c(ctx, padic_rat(ctx, mpq_class(1, 5))), PadicError);
}

TEST_CASE("character files round-trip") {
  std::mt19937_64 rng(21);
  for (int p : {2, 3, 7}) {
    const auto ctx = PrecisionContext::make(p, 10, 8);
    const std::vector<TorusCharacter> chars{
        TorusCharacter::trivial(ctx), TorusCharacter::closed_form(ctx, -3, 7),
        TorusCharacter::from_c(ctx, padic_rat(ctx, mpq_class(1, 1 + p))), random_character(rng, ctx)};
    for (const auto& chi : chars) {
      const std::string text = chi.serialize();
      const TorusCharacter back = TorusCharacter::parse(text, ctx);
      CHECK(back.same_images(chi));
      CHECK(back.serialize() == text);
    }
  }
  const auto ctx = PrecisionContext::make(3, 10, 8);
  const auto chi = TorusCharacter::parse("# comment\np = 3\ncharacter = exp(1/4 * log)\n", ctx);
  CHECK(c_of_chi(chi).c.agrees_with(padic_rat(ctx, mpq_class(1, 4))));
  CHECK(TorusCharacter::parse("character = a^2 d^5", ctx).same_images(TorusCharacter::closed_form(ctx, 2, 5)));
  CHECK_THROWS_AS(TorusCharacter::parse("p = 5\ncharacter = a^0 d^0", ctx), PadicError);
  CHECK_THROWS_AS(TorusCharacter::parse("torsion_1 = a^0 d^0", ctx), PadicError);
  CHECK_THROWS_AS(TorusCharacter::parse("character = a^0 d^0\nbogus = 1", ctx), PadicError);
}
