#include <random>

#include "doctest.h"
#include "iwasawa/power_series.hpp"
#include "test_support.hpp"

using namespace iwasawa;

namespace {

using QPoly = std::vector<mpq_class>;

TruncatedSeries from_residues(const PrecisionContext& ctx, const std::vector<mpz_class>& c) {
  std::vector<PadicNumber> coeffs;
  for (const auto& v : c) coeffs.push_back(padic_int(ctx, v));
  return TruncatedSeries(ctx, std::move(coeffs));
}

std::vector<mpz_class> random_integers(std::mt19937_64& rng, int m, const mpz_class& mod) {
  std::vector<mpz_class> out;
  for (int i = 0; i < m; ++i) out.push_back(testing::random_residue(rng, mod));
  return out;
}

bool matches_integers(const TruncatedSeries& f, const std::vector<mpz_class>& expected, int digits) {
  for (int k = 0; k < f.length(); ++k) {
    const PadicNumber e = PadicNumber::from_integer(f.context().p, f.context().N, expected[k]);
    if (!testing::agree_to(f[k], e, digits)) return false;
  }
  return true;
}

// Euclid over Q, the oracle for the p-adic gcd.
int qdeg(const QPoly& a) {
  for (int k = static_cast<int>(a.size()) - 1; k >= 0; --k)
    if (a[k] != 0) return k;
  return -1;
}

QPoly qrem(QPoly a, const QPoly& b) {
  const int db = qdeg(b);
  for (int da = qdeg(a); da >= db; da = qdeg(a)) {
    const mpq_class q = a[da] / b[db];
    for (int i = 0; i <= db; ++i) a[da - db + i] -= q * b[i];
  }
  return a;
}

QPoly qgcd(QPoly a, QPoly b) {
  while (qdeg(b) >= 0) {
    QPoly r = qrem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  const mpq_class lc = a[qdeg(a)];
  a.resize(qdeg(a) + 1);
  for (auto& c : a) c /= lc;
  return a;
}

}  // namespace

TEST_CASE("series arithmetic: identities") {
  const auto ctx = PrecisionContext::make(5, 10, 12);
  std::mt19937_64 rng(1);
  const TruncatedSeries f = from_residues(ctx, random_integers(rng, 12, pow_p(5, 10)));
  CHECK((f * TruncatedSeries::one(ctx)).agrees_with(f));

  const auto a = TruncatedSeries::from_integers(ctx, {1, 1});
  const auto b = TruncatedSeries::from_integers(ctx, {1, -1});
  const TruncatedSeries prod = a * b;
  CHECK(prod.agrees_with(TruncatedSeries::from_integers(ctx, {1, 0, -1})));
  CHECK(prod[1].is_zero());
  CHECK(prod[5].is_exact_zero());
}

TEST_CASE("series product matches a schoolbook integer product") {
  std::mt19937_64 rng(11);
  for (int p : {2, 3, 7}) {
    const auto ctx = PrecisionContext::make(p, 9, 10);
    const mpz_class& mod = pow_p(p, 9);
    for (int t = 0; t < 20; ++t) {
      const auto ai = random_integers(rng, 10, mod);
      const auto bi = random_integers(rng, 10, mod);
      const auto ci = random_integers(rng, 10, mod);
      std::vector<mpz_class> ab(10, 0);
      for (int i = 0; i < 10; ++i)
        for (int j = 0; i + j < 10; ++j) ab[i + j] += ai[i] * bi[j];
      const auto fa = from_residues(ctx, ai);
      const auto fb = from_residues(ctx, bi);
      const auto fc = from_residues(ctx, ci);
      CHECK(matches_integers(fa * fb, ab, 9));
      CHECK((fa * fb).agrees_with(fb * fa));
      CHECK(((fa * fb) * fc).agrees_with(fa * (fb * fc)));
      CHECK((fa * (fb + fc)).agrees_with(fa * fb + fa * fc));
    }
  }
}

TEST_CASE("valuation floor propagation") {
  const auto ctx = PrecisionContext::make(3, 8, 8);
  const auto f = TruncatedSeries::from_integers(ctx, {3, 9, 1});
  const auto g = TruncatedSeries(ctx, {padic_rat(ctx, mpq_class(1, 3)), padic_int(ctx, 1)});
  CHECK(f.valuation_floor() == 0);
  CHECK(g.valuation_floor() == -1);
  CHECK((f + g).valuation_floor() == -1);
  CHECK((f * g).valuation_floor() <= (f * g).min_coefficient_valuation());
  CHECK(TruncatedSeries::zero(ctx).valuation_floor() == kInfiniteValuation);
  CHECK_THROWS(TruncatedSeries(ctx, {padic_int(ctx, 1)}, 2));
}

TEST_CASE("series inverse") {
  std::mt19937_64 rng(5);
  const auto ctx = PrecisionContext::make(5, 10, 16);
  for (int t = 0; t < 10; ++t) {
    auto c = random_integers(rng, 16, pow_p(5, 10));
    if (c[0] % 5 == 0) c[0] += 1;
    const auto f = from_residues(ctx, c);
    CHECK((f * f.inverse()).agrees_with(TruncatedSeries::one(ctx)));
  }
  CHECK_THROWS_AS(TruncatedSeries::variable(ctx).inverse(), PadicError);
}

TEST_CASE("composition") {
  const auto ctx = PrecisionContext::make(3, 10, 16);
  std::mt19937_64 rng(2);
  const auto f = from_residues(ctx, random_integers(rng, 16, pow_p(3, 10)));
  CHECK(series_compose(f, TruncatedSeries::variable(ctx)).agrees_with(f));

  const auto sq = TruncatedSeries::from_integers(ctx, {0, 0, 1});
  const auto two_x = TruncatedSeries::from_integers(ctx, {0, 2});
  CHECK(series_compose(sq, two_x).agrees_with(TruncatedSeries::from_integers(ctx, {0, 0, 4})));

  // Oracle: the coefficient of x^n in sum_k (x + x^2)^k is sum_k C(k, n - k).
  std::vector<long> ones(16, 1);
  const auto geometric = TruncatedSeries::from_integers(ctx, ones);
  const auto g = TruncatedSeries::from_integers(ctx, {0, 1, 1});
  std::vector<mpz_class> expected(16, 0);
  for (int n = 0; n < 16; ++n)
    for (int k = 0; k <= n; ++k) expected[n] += binomial(k, n - k);
  CHECK(matches_integers(series_compose(geometric, g), expected, 10));

  CHECK_THROWS_AS(series_compose(f, TruncatedSeries::from_integers(ctx, {1, 1})), PadicError);
}

TEST_CASE("omega substitution") {
  const auto ctx = PrecisionContext::make(3, 10, 12);
  CHECK(omega_sub(ctx, padic_int(ctx, 1)).agrees_with(TruncatedSeries::variable(ctx)));
  const auto w2 = omega_sub(ctx, padic_int(ctx, 2));
  CHECK(w2.agrees_with(TruncatedSeries::from_integers(ctx, {0, 2, 1})));
  CHECK(w2[0].is_exact_zero());
  CHECK(w2.valuation_floor() >= 0);

  // omega_3 mod 3: reduce every coefficient C(3, n) mod 3.
  const auto w3 = omega_sub(ctx, padic_int(ctx, 3));
  for (int n = 0; n < 12; ++n) {
    const mpz_class expected = n == 0 ? mpz_class(0) : mpz_class(binomial(3, n) % 3);
    CHECK(w3[n].residue(1) == expected);
  }
  CHECK(omega_sub_exact(ctx, 3).agrees_with(w3));
  CHECK_THROWS_AS(omega_sub(ctx, padic_rat(ctx, mpq_class(1, 3))), PadicError);
}

TEST_CASE("omega_a composed with omega_b is omega_ab") {
  std::mt19937_64 rng(50);
  for (int p : {2, 3, 5}) {
    const auto ctx = PrecisionContext::make(p, 12, 16);
    for (int t = 0; t < 50 / 3 + 1; ++t) {
      const PadicNumber a = testing::random_unit(rng, ctx);
      const PadicNumber b = testing::random_unit(rng, ctx);
      const auto lhs = series_compose(omega_sub(ctx, a), omega_sub(ctx, b));
      const auto rhs = omega_sub(ctx, a * b);
      CHECK(lhs.agrees_with(rhs));
      // Binomials of units lose at most v_p(n!) digits.
      CHECK(lhs.min_absolute_precision() >= 12 - factorial_valuation(15, p));
    }
  }
}

TEST_CASE("Frobenius: omega_(p^k) reduces to x^(p^k) mod p") {
  for (int p : {2, 3, 5}) {
    for (int k : {1, 2}) {
      const int q = p * (k == 2 ? p : 1);
      const auto ctx = PrecisionContext::make(p, 6, q + 4);
      const auto w = omega_sub(ctx, padic_int(ctx, q));
      for (int n = 0; n < ctx.M; ++n) CHECK(w[n].residue(1) == (n == q ? 1 : 0));
    }
  }
}

TEST_CASE("Weierstrass preparation: examples") {
  const auto ctx = PrecisionContext::make(3, 10, 24);
  const auto unit = weierstrass_data(TruncatedSeries::from_integers(ctx, {1, 1}));
  REQUIRE(unit.determined());
  CHECK(*unit.weierstrass_degree == 0);
  CHECK(unit.distinguished_part.size() == 1);
  CHECK(unit.distinguished_part[0].agrees_with(padic_int(ctx, 1)));

  const auto w3 = weierstrass_data(omega_sub(ctx, padic_int(ctx, 3)));
  REQUIRE(w3.determined());
  CHECK(*w3.weierstrass_degree == 3);
  const std::vector<long> expected{0, 3, 3, 1};
  for (int k = 0; k <= 3; ++k)
    CHECK(testing::agree_to(w3.distinguished_part[k], padic_int(ctx, expected[k]), 10));

  const auto lin = weierstrass_data(TruncatedSeries::from_integers(ctx, {3, 1}));
  REQUIRE(lin.determined());
  CHECK(*lin.weierstrass_degree == 1);
  CHECK(lin.distinguished_part[0].agrees_with(padic_int(ctx, 3)));

  // p is invertible, so p x^2 prepares to x^2.
  const auto px2 = weierstrass_data(TruncatedSeries::from_integers(ctx, {0, 0, 3}));
  REQUIRE(px2.determined());
  CHECK(*px2.weierstrass_degree == 2);
  // A constant known only to O(p) may hide a unit once p is divided out.
  const auto vague = TruncatedSeries(ctx, {PadicNumber::big_oh(3, 10, 1), padic_int(ctx, 3)});
  CHECK_FALSE(weierstrass_data(vague).determined());
  CHECK_FALSE(weierstrass_data(log_series_power(ctx, 1)).determined());
}

TEST_CASE("Weierstrass preparation: F = unit * P and degrees add") {
  std::mt19937_64 rng(77);
  for (int p : {2, 3, 5}) {
    const auto ctx = PrecisionContext::make(p, 10, 32);
    for (int t = 0; t < 10; ++t) {
      auto make = [&](int d) {
        auto c = random_integers(rng, 32, pow_p(p, 10));
        for (int k = 0; k < d; ++k) c[k] *= p;
        if (c[d] % p == 0) c[d] += 1;
        return from_residues(ctx, c);
      };
      const int df = static_cast<int>(rng() % 4);
      const int dg = static_cast<int>(rng() % 4);
      const auto f = make(df);
      const auto g = make(dg);
      const auto wf = weierstrass_data(f);
      const auto wg = weierstrass_data(g);
      const auto wfg = weierstrass_data(f * g);
      REQUIRE(wf.determined());
      REQUIRE(wg.determined());
      REQUIRE(wfg.determined());
      CHECK(*wf.weierstrass_degree == df);
      CHECK(*wfg.weierstrass_degree == *wf.weierstrass_degree + *wg.weierstrass_degree);
      for (int k = 0; k < df; ++k)
        CHECK((wf.distinguished_part[k].is_zero() || wf.distinguished_part[k].valuation() >= 1));
      CHECK(wf.valid_to_precision >= 10 - 2);

      // Re-multiply: unit * P agrees with F below the valid degree.
      const auto p_series = TruncatedSeries(ctx, wf.distinguished_part);
      const auto back = *wf.unit_cofactor * p_series;
      for (int k = 0; k < wf.valid_mod_degree; ++k) {
        const PadicNumber diff = back[k] - f[k];
        CHECK(diff.is_zero());
      }
    }
  }
}

TEST_CASE("gcd unit test: examples") {
  const int p = 3;
  const auto ctx = PrecisionContext::make(p, 12, 16);
  {
    const std::vector<TruncatedSeries> gens{TruncatedSeries::one(ctx)};
    CHECK(series_gcd_unit_test(gens).verdict == IdealVerdict::unit_ideal);
  }
  {
    const std::vector<TruncatedSeries> gens{TruncatedSeries::from_integers(ctx, {0, 0, 1}),
                                            TruncatedSeries::from_integers(ctx, {0, 0, 0, 1})};
    const GcdReport r = series_gcd_unit_test(gens);
    CHECK(r.verdict == IdealVerdict::common_divisor);
    REQUIRE(r.divisor.has_value());
    CHECK(*r.divisor->weierstrass_degree == 2);
    CHECK(r.divisor->distinguished_part[0].is_zero());
    CHECK(r.divisor->distinguished_part[1].is_zero());
  }
  {
    const std::vector<long> a{0, p, 1};
    const std::vector<long> b{0, 2 * p, 1};
    const QPoly oracle = qgcd({0, p, 1}, {0, 2 * p, 1});
    const std::vector<TruncatedSeries> gens{TruncatedSeries::from_integers(ctx, a),
                                            TruncatedSeries::from_integers(ctx, b)};
    const GcdReport r = series_gcd_unit_test(gens);
    CHECK(r.verdict == IdealVerdict::common_divisor);
    REQUIRE(r.divisor.has_value());
    REQUIRE(r.divisor->distinguished_part.size() == oracle.size());
    for (std::size_t k = 0; k < oracle.size(); ++k)
      CHECK(r.divisor->distinguished_part[k].agrees_with(padic_rat(ctx, oracle[k])));
  }
  {
    // x + p and x + 2p are coprime over Q_p.
    const std::vector<TruncatedSeries> gens{TruncatedSeries::from_integers(ctx, {p, 1}),
                                            TruncatedSeries::from_integers(ctx, {2 * p, 1})};
    CHECK(series_gcd_unit_test(gens).verdict == IdealVerdict::unit_ideal);
  }
  {
    const std::vector<TruncatedSeries> gens{log_series_power(ctx, 1)};
    CHECK_THROWS_AS(series_gcd_unit_test(gens), std::invalid_argument);
  }
}

TEST_CASE("gcd verdict is invariant under unit multiples") {
  std::mt19937_64 rng(31);
  const int p = 5;
  const auto ctx = PrecisionContext::make(p, 12, 20);
  for (int t = 0; t < 20; ++t) {
    // Random distinguished quadratics sharing a root with probability 1/2.
    const long r1 = p * static_cast<long>(rng() % 5);
    const long r2 = p * static_cast<long>(rng() % 5);
    const long r3 = (t % 2 == 0) ? r1 : p * static_cast<long>(5 + rng() % 5);
    const auto f = TruncatedSeries::from_integers(ctx, {r1 * r2, r1 + r2, 1});
    const auto g = TruncatedSeries::from_integers(ctx, {r1 * r3, r1 + r3, 1});
    auto c = random_integers(rng, 20, pow_p(p, 12));
    if (c[0] % p == 0) c[0] += 1;
    const auto u = from_residues(ctx, c);
    const std::vector<TruncatedSeries> plain{f, g};
    const std::vector<TruncatedSeries> twisted{u * f, g * u * u};
    const QPoly oracle = qgcd({r1 * r2, r1 + r2, 1}, {r1 * r3, r1 + r3, 1});
    const GcdReport a = series_gcd_unit_test(plain);
    const GcdReport b = series_gcd_unit_test(twisted);
    CHECK(a.verdict == b.verdict);
    CHECK((a.verdict == IdealVerdict::unit_ideal) == (qdeg(oracle) == 0));
  }
}

TEST_CASE("log powers and boundedness") {
  const auto ctx5 = PrecisionContext::make(5, 8, 30);
  const auto one = log_series_power(ctx5, 0);
  CHECK(one.agrees_with(TruncatedSeries::one(ctx5)));
  const BoundednessReport b0 = boundedness_floor(one);
  CHECK(b0.bounded);
  CHECK(b0.floor == 0);

  const auto l = log_series_power(ctx5, 1);
  CHECK_FALSE(l.is_bounded());
  CHECK(l[5].valuation() == -1);
  CHECK(l[25].valuation() == -2);
  const BoundednessReport b1 = boundedness_floor(l);
  CHECK_FALSE(b1.bounded);
  CHECK(b1.evidence == std::vector<int>{5, 25});

  const BoundednessReport b2 = boundedness_floor(omega_sub(ctx5, padic_int(ctx5, 2)));
  CHECK(b2.bounded);
  CHECK(b2.floor == 0);

  // Oracle for log^2: square the exact rational series.
  const auto ctx3 = PrecisionContext::make(3, 8, 20);
  std::vector<mpq_class> lg(20, 0);
  for (int n = 1; n < 20; ++n) lg[n] = mpq_class(n % 2 == 1 ? 1 : -1, n);
  const auto l2 = log_series_power(ctx3, 2);
  for (int n = 0; n < 20; ++n) {
    mpq_class s = 0;
    for (int i = 0; i <= n; ++i) s += lg[i] * lg[n - i];
    CHECK(l2[n].agrees_with(padic_rat(ctx3, s)));
  }
}

TEST_CASE("accumulator matches folded addition") {
  std::mt19937_64 rng(8);
  for (int p : {2, 3, 7}) {
    const auto ctx = PrecisionContext::make(p, 10, 8);
    for (int t = 0; t < 100; ++t) {
      PadicAccumulator acc(p, 10);
      PadicNumber folded = PadicNumber::zero(p, 10);
      const int n = 1 + static_cast<int>(rng() % 6);
      for (int i = 0; i < n; ++i) {
        const PadicNumber a = testing::random_padic(rng, ctx);
        const PadicNumber b = testing::random_padic(rng, ctx);
        if (i % 2 == 0) {
          acc.add(a);
          folded += a;
        } else {
          acc.add_product(a, b);
          folded += a * b;
        }
      }
      const PadicNumber r = acc.result();
      CHECK(r.agrees_with(folded));
      CHECK(r.absolute_precision() == folded.absolute_precision());
    }
  }
}

TEST_CASE("series text format") {
  const auto ctx = PrecisionContext::make(3, 4, 4);
  const auto f = TruncatedSeries::from_integers(ctx, {0, 2, 0, 1});
  CHECK(f.to_string() == "[1] 3^0 * (2 + 0*3 + 0*3^2 + 0*3^3) + O(3^4)\n[3] 3^0 * (1 + 0*3 + 0*3^2 + 0*3^3) + O(3^4)\n");
}
