#include <numeric>
#include <random>

#include "doctest.h"
#include "iwasawa/duality_finite.hpp"
#include "iwasawa/padic.hpp"

using namespace iwasawa;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long bound) {
  IntMatrix a = zero_matrix(rows, cols);
  for (auto& row : a)
    for (auto& x : row) x = static_cast<long>(rng() % static_cast<unsigned long>(2 * bound + 1)) - bound;
  return a;
}

// Cofactor expansion; independent of every elimination routine.
mpz_class det_oracle(const IntMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  mpz_class d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(row);
    }
    d += (j % 2 == 0 ? 1 : -1) * a[0][j] * det_oracle(minor);
  }
  return d;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  const auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Invariant factors as quotients of determinantal divisors (gcd of k x k minors).
std::vector<mpz_class> divisors_oracle(const IntMatrix& a) {
  const std::size_t r = a.size(), c = column_count(a);
  std::vector<mpz_class> out;
  mpz_class prev = 1;
  for (std::size_t k = 1; k <= std::min(r, c); ++k) {
    mpz_class g = 0;
    for (const auto& rows : subsets(r, k))
      for (const auto& cols : subsets(c, k)) {
        IntMatrix m;
        for (auto i : rows) {
          std::vector<mpz_class> row;
          for (auto j : cols) row.push_back(a[i][j]);
          m.push_back(row);
        }
        g = gcd(g, det_oracle(m));
      }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
  IntMatrix u = identity_matrix(n);
  for (int step = 0; step < 12; ++step) {
    const std::size_t i = rng() % n, j = rng() % n;
    if (i == j) continue;
    const long f = static_cast<long>(rng() % 7) - 3;
    for (std::size_t k = 0; k < n; ++k) u[i][k] += f * u[j][k];
  }
  return u;
}

}  // namespace

TEST_CASE("Smith normal form matches determinantal divisors") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 150; ++t) {
    const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    const IntMatrix a = random_matrix(rng, r, c, t % 3 == 0 ? 2 : 25);
    const SmithForm snf = smith_normal_form(a);
    CHECK(snf.divisors == divisors_oracle(a));
    CHECK(rational_rank(a) == snf.rank);
    for (std::size_t i = 1; i < snf.divisors.size(); ++i) CHECK(snf.divisors[i] % snf.divisors[i - 1] == 0);
  }
  CHECK(smith_normal_form(IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}).divisors ==
        std::vector<mpz_class>{2, 6, 12});
}

TEST_CASE("elementary divisors are unimodular invariants") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 60; ++t) {
    const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    const IntMatrix a = random_matrix(rng, r, c, 9);
    const IntMatrix b = multiply(multiply(random_unimodular(rng, r), a), random_unimodular(rng, c));
    CHECK(smith_normal_form(a).divisors == smith_normal_form(b).divisors);
  }
}

TEST_CASE("rank mod p") {
  CHECK(rank_mod_p(IntMatrix{{1, 0}, {0, 3}}, 3) == 1);
  CHECK(rank_mod_p(IntMatrix{{1, 0}, {0, 3}}, 2) == 2);
  CHECK(rank_mod_p(IntMatrix{{2, 4}, {1, 2}}, 5) == 1);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const IntMatrix a = random_matrix(rng, 1 + rng() % 5, 1 + rng() % 5, 20);
    // Rank mod p is the number of invariant factors prime to p.
    for (int p : {2, 3, 5}) {
      std::size_t units = 0;
      for (const auto& d : smith_normal_form(a).divisors) units += d % p != 0;
      CHECK(rank_mod_p(a, p) == units);
    }
  }
}

TEST_CASE("FpSubspace") {
  FpSubspace s(5, 3);
  CHECK(s.insert({1, 2, 3}));
  CHECK_FALSE(s.insert({2, 4, 6}));
  CHECK(s.insert({0, 1, 1}));
  CHECK(s.contains({1, 3, 4}));
  CHECK_FALSE(s.contains({0, 0, 1}));
  CHECK(s.dimension() == 2);
}

TEST_CASE("dual_map") {
  CHECK(dual_map(FreeModuleMap::identity(4)) == FreeModuleMap::identity(4));
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const std::size_t a = 1 + rng() % 5, b = 1 + rng() % 5, c = 1 + rng() % 5;
    const auto f = FreeModuleMap::from_matrix(a, random_matrix(rng, b, a, 9));
    const auto g = FreeModuleMap::from_matrix(b, random_matrix(rng, c, b, 9));
    CHECK(dual_map(dual_map(f)) == f);
    CHECK(dual_map(compose(g, f)) == compose(dual_map(f), dual_map(g)));
    for (int p : {2, 3, 5}) {
      const DualData d = dual_data(f, p);
      // Operator norms agree and never exceed 1 on integral maps.
      std::optional<int> primal, dual;
      for (const auto& v : d.column_valuations)
        if (v && (!primal || *v < *primal)) primal = v;
      for (const auto& v : d.dual_column_valuations)
        if (v && (!dual || *v < *dual)) dual = v;
      CHECK(primal == dual);
      if (primal) CHECK(*primal >= 0);
    }
  }
  CHECK_THROWS_AS(compose(FreeModuleMap::identity(2), FreeModuleMap::identity(3)), std::invalid_argument);
}

TEST_CASE("double dual") {
  for (std::size_t r : {1U, 5U}) {
    const DoubleDualReport d = double_dual_check(r);
    CHECK(d.consistent_is_identity);
    CHECK(d.evaluation == identity_matrix(r));
  }
  const DoubleDualReport d = double_dual_check(3, {2, 0, 1});
  CHECK(d.consistent_is_identity);
  CHECK(d.conjugates_by_basis);
  CHECK(d.evaluation == IntMatrix{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  CHECK_THROWS_AS(double_dual_check(3, {0, 0, 1}), std::invalid_argument);
}

TEST_CASE("exactness suite examples") {
  const auto id = exactness_suite(FreeModuleMap::identity(3), 3);
  CHECK(id.surjective);
  CHECK(id.dual_isometry);
  CHECK(id.summary() == "surjective / dual isometry");

  for (int p : {2, 3, 5}) {
    const auto f = FreeModuleMap::from_matrix(2, IntMatrix{{1, 0}, {0, p}});
    const auto r = exactness_suite(f, p);
    CHECK(r.elementary_divisors == std::vector<int>{0, 1});
    CHECK_FALSE(r.surjective);
    CHECK_FALSE(r.dual_isometry);
    CHECK(r.summary() == "not surjective / not isometry");
    CHECK(dual_data(f, p).dual_column_valuations[1] == 1);
  }

  const auto z = exactness_suite(FreeModuleMap::zero(2, 2), 5);
  CHECK(z.kernel_rank == 2);
  CHECK(z.cokernel_cot_rank == 2);
  CHECK(z.dual_kernel_rank == 2);
  CHECK(z.cokernel_identity);
  CHECK(z.kernel_identity);

  // Surjective over Z_3 but not over Z.
  const auto two = exactness_suite(FreeModuleMap::from_matrix(1, IntMatrix{{2}}), 3);
  CHECK(two.surjective);
  CHECK(two.dual_isometry);
}

TEST_CASE("exactness identities on 200 random maps") {
  std::mt19937_64 rng(2024);
  const int primes[] = {2, 3, 5};
  for (int t = 0; t < 200; ++t) {
    const int p = primes[t % 3];
    const std::size_t m = 1 + rng() % 5, n = 1 + rng() % 5;
    const auto f = FreeModuleMap::from_matrix(m, random_matrix(rng, n, m, static_cast<long>(p) * p));
    const auto r = exactness_suite(f, p);
    CHECK(r.kernel_identity);
    CHECK(r.cokernel_identity);
    CHECK(r.isometry_biconditional);
    // Oracle: surjective over Z_p iff the n x n minors have a common gcd prime to p.
    const auto divs = divisors_oracle(f.matrix);
    bool oracle = divs.size() == n;
    for (const auto& d : divs) oracle = oracle && d % p != 0;
    CHECK(r.surjective == oracle);
    CHECK(r.kernel_rank == m - divs.size());
  }
}
