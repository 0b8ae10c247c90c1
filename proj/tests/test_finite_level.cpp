#include <random>
#include <set>

#include "doctest.h"
#include "iwasawa/finite_level.hpp"
#include "iwasawa/padic_functions.hpp"

using namespace iwasawa;

namespace {

// Brute-force count of invertible 2x2 matrices mod q.
long order_oracle(long p, long q) {
  long count = 0;
  for (long a = 0; a < q; ++a)
    for (long b = 0; b < q; ++b)
      for (long c = 0; c < q; ++c)
        for (long d = 0; d < q; ++d) count += ((a * d - b * c) % p + p) % p != 0;
  return count;
}

// Two-sided ideal powers spanned by all pairwise products of basis vectors.
std::vector<std::size_t> ideal_power_dimensions_oracle(const FiniteGroup& g, const FiniteGroup& h, int max_k) {
  const int p = g.level().p;
  const std::size_t n = g.order();
  std::vector<GroupRingVector> ideal;
  FpSubspace span(p, n);
  for (std::size_t x = 0; x < n; ++x)
    for (const auto& s : h.elements()) {
      GroupRingVector v(n, 0);
      v[g.index_of(g[x] * s)] += 1;
      v[x] -= 1;
      if (span.insert(v)) ideal.push_back(v);
    }
  std::vector<std::size_t> dims{span.dimension()};
  std::vector<GroupRingVector> power = ideal;
  for (int k = 2; k <= max_k && !power.empty(); ++k) {
    FpSubspace next(p, n);
    std::vector<GroupRingVector> basis;
    for (const auto& a : power)
      for (const auto& b : ideal) {
        GroupRingVector prod = group_ring_product(g, a, b);
        for (auto& c : prod) c = ((c % p) + p) % p;
        if (next.insert(prod)) basis.push_back(prod);
      }
    dims.push_back(next.dimension());
    power = basis;
  }
  return dims;
}

bool all_divisible(const GroupRingVector& v, int p) {
  for (long c : v)
    if (c % p != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("group orders") {
  for (auto [p, n, expected] : {std::tuple{2, 1, 6L}, {2, 2, 96L}, {3, 1, 48L}, {5, 1, 480L}, {3, 2, 3888L}}) {
    const Level lv = Level::make(p, n);
    CHECK(gl2_order(lv) == expected);
    CHECK(static_cast<long>(enumerate_group(lv).order()) == expected);
    CHECK(order_oracle(p, lv.modulus) == expected);
  }
  CHECK_THROWS_AS(enumerate_group(Level::make(7, 3)), std::length_error);
  CHECK_THROWS_AS(Level::make(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(GL2ModElement::make(Level::make(3, 1), 1, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("group laws") {
  const Level lv = Level::make(3, 2);
  const FiniteGroup g = enumerate_group(lv);
  std::mt19937_64 rng(5);
  const GL2ModElement e = GL2ModElement::identity(lv);
  for (int t = 0; t < 200; ++t) {
    const auto& x = g[rng() % g.order()];
    const auto& y = g[rng() % g.order()];
    const auto& z = g[rng() % g.order()];
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * x.inverse() == e);
    CHECK((x * y).determinant() == x.determinant() * y.determinant() % lv.modulus);
  }
}

TEST_CASE("iwahori_factor examples") {
  const Level lv = Level::make(3, 2);
  const auto gamma = GL2ModElement::upper_congruence(lv);
  const auto f = iwahori_factor(gamma);
  CHECK(f.u_minus == gamma);
  CHECK(f.p_part == GL2ModElement::identity(lv));
  const auto u = GL2ModElement::lower_unipotent(lv);
  const auto fu = iwahori_factor(u);
  CHECK(fu.u_minus == GL2ModElement::identity(lv));
  CHECK(fu.p_part == u);
  CHECK_THROWS_AS(iwahori_factor(GL2ModElement::weyl(lv)), std::invalid_argument);
}

TEST_CASE("Bruhat census is exhaustive") {
  for (auto [p, n, order, cell_b] : {std::tuple{2, 1, 6L, 2L}, {3, 1, 48L, 12L}, {2, 2, 96L, 32L}, {3, 2, 3888L, 972L}}) {
    const Level lv = Level::make(p, n);
    const FiniteGroup g = enumerate_group(lv);
    const BruhatCensus c = bruhat_census(g);
    CHECK(c.order == order);
    CHECK(c.cell_b + c.cell_bwp == order);
    CHECK(c.cell_b == cell_b);
    // The Iwahori image has index p + 1.
    CHECK(c.cell_b * (p + 1) == order);
    CHECK(c.factor_failures == 0);
    // Each cell is a union of right P-cosets and B is closed under products.
    std::mt19937_64 rng(p * 10 + n);
    for (int t = 0; t < 100; ++t) {
      const auto& x = g[rng() % g.order()];
      const auto& y = g[rng() % g.order()];
      if (in_iwahori(x) && in_iwahori(y)) CHECK(in_iwahori(x * y));
    }
  }
  const Level lv = Level::make(3, 1);
  CHECK(bruhat_classify(GL2ModElement::identity(lv)) == BruhatCell::cell_B);
  CHECK(bruhat_classify(GL2ModElement::weyl(lv)) == BruhatCell::cell_BwP);
}

TEST_CASE("principal congruence subgroup") {
  for (auto [p, n] : {std::pair{2, 2}, {3, 2}, {2, 3}}) {
    const Level lv = Level::make(p, n);
    const FiniteGroup k1 = generated_subgroup(lv, principal_congruence_generators(lv));
    long expected = 1;
    for (int i = 1; i < n; ++i) expected *= static_cast<long>(p) * p * p * p;
    CHECK(static_cast<long>(k1.order()) == expected);
    for (const auto& x : k1.elements())
      CHECK((x.a() % p == 1 && x.b() % p == 0 && x.c() % p == 0 && x.d() % p == 1));
  }
}

TEST_CASE("nilpotency: cyclic group of order p") {
  for (int p : {2, 3, 5}) {
    const Level lv = Level::make(p, 1);
    const auto s = GL2ModElement::make(lv, 1, 1, 0, 1);
    const FiniteGroup cyclic = generated_subgroup(lv, {s});
    REQUIRE(cyclic.order() == static_cast<std::size_t>(p));
    const IdealData h{{s}};
    const NilpotencyReport r = ideal_power_nilpotency(cyclic, h, NilpotencyMode::char_p);
    CHECK(r.index == p);
    CHECK(r.p_subgroup);
    std::vector<std::size_t> dims;
    for (int k = 1; k <= p; ++k) dims.push_back(static_cast<std::size_t>(p - k));
    CHECK(r.power_sizes == dims);
    CHECK(ideal_power_nilpotency(cyclic, h, NilpotencyMode::pi_containment).index == p);
    // (s - 1)^p = s^p - 1 = 0 mod p, while (s - 1)^(p-1) is not.
    CHECK(all_divisible(generator_difference_product(cyclic, std::vector<GL2ModElement>(p, s)), p));
    CHECK_FALSE(all_divisible(generator_difference_product(cyclic, std::vector<GL2ModElement>(p - 1, s)), p));
  }
  const Level lv = Level::make(3, 1);
  const FiniteGroup g = enumerate_group(lv);
  const NilpotencyReport trivial = ideal_power_nilpotency(g, IdealData{}, NilpotencyMode::char_p);
  CHECK(trivial.index == 1);
}

TEST_CASE("nilpotency: principal congruence subgroup of GL2(Z/4)") {
  const Level lv = Level::make(2, 2);
  const FiniteGroup g = enumerate_group(lv);
  const IdealData k1{principal_congruence_generators(lv)};
  const NilpotencyReport r = ideal_power_nilpotency(g, k1, NilpotencyMode::char_p);
  REQUIRE(r.index.has_value());
  CHECK(r.subgroup_order == 16);
  CHECK(r.p_subgroup);
  const int m = *r.index;
  MESSAGE("nilpotency index of K1 in GL2(Z/4): " << m);

  const auto oracle = ideal_power_dimensions_oracle(g, generated_subgroup(lv, k1.subgroup_generators), m);
  REQUIRE(oracle.size() == static_cast<std::size_t>(m));
  CHECK(oracle.back() == 0);
  CHECK(oracle[m - 2] > 0);
  for (int k = 0; k < m; ++k) CHECK(oracle[k] == r.power_sizes[k]);

  const NilpotencyReport pi = ideal_power_nilpotency(g, k1, NilpotencyMode::pi_containment);
  CHECK(pi.index == m);

  // Random products of m elements of the ideal land in 2 Z[G].
  std::mt19937_64 rng(77);
  const FiniteGroup k1_group = generated_subgroup(lv, k1.subgroup_generators);
  for (int t = 0; t < 20; ++t) {
    GroupRingVector prod = group_ring_unit(g, GL2ModElement::identity(lv));
    for (int i = 0; i < m; ++i) {
      // g (h - 1) written as g h - g.
      const auto& gg = g[rng() % g.order()];
      const auto& hh = k1_group[rng() % k1_group.order()];
      GroupRingVector elt(g.order(), 0);
      elt[g.index_of(gg * hh)] += 1;
      elt[g.index_of(gg)] -= 1;
      prod = group_ring_product(g, prod, elt);
    }
    CHECK(all_divisible(prod, 2));
  }
}

TEST_CASE("nilpotency guards") {
  const Level lv = Level::make(3, 1);
  const FiniteGroup g = enumerate_group(lv);
  // Upper unipotents are not normal in GL2(Z/3).
  CHECK_THROWS_AS(ideal_power_nilpotency(g, IdealData{{GL2ModElement::make(lv, 1, 1, 0, 1)}}, NilpotencyMode::char_p),
                  std::invalid_argument);
  // SL2(Z/3) is normal but not a 3-group: the powers stabilize.
  const IdealData sl2{{GL2ModElement::make(lv, 1, 1, 0, 1), GL2ModElement::lower_unipotent(lv)}};
  const NilpotencyReport r = ideal_power_nilpotency(g, sl2, NilpotencyMode::char_p);
  CHECK_FALSE(r.index.has_value());
  CHECK_FALSE(r.p_subgroup);
  CHECK_FALSE(r.warning.empty());
  const Level other = Level::make(3, 2);
  CHECK_THROWS_AS(ideal_power_nilpotency(g, IdealData{{GL2ModElement::identity(other)}}, NilpotencyMode::char_p),
                  std::invalid_argument);
}

TEST_CASE("Nakayama rank over the whole subgroup lattice of GL2(Z/2)") {
  const Level lv = Level::make(2, 1);
  const FiniteGroup g = enumerate_group(lv);
  std::set<std::vector<GL2ModElement>> lattice;
  std::vector<std::vector<GL2ModElement>> generating_sets;
  for (const auto& x : g.elements())
    for (const auto& y : g.elements()) {
      const FiniteGroup h = generated_subgroup(lv, {x, y});
      if (lattice.insert(h.elements()).second) generating_sets.push_back({x, y});
    }
  CHECK(lattice.size() == 6);
  const FiniteModule regular = regular_module(g, g.elements());
  for (const auto& gens : generating_sets) {
    const FiniteGroup h = generated_subgroup(lv, gens);
    const NakayamaReport r = nakayama_dimension(regular, IdealData{gens});
    CHECK(r.coinvariant_rank == g.order() / h.order());
    CHECK(r.torsion_valuations.empty());
    CHECK(r.ranks_agree);
    CHECK(r.dual_corank == r.coinvariant_rank);
  }
  CHECK(nakayama_dimension(regular, IdealData{}).coinvariant_rank == g.order());
}

TEST_CASE("Nakayama rank on GL2(Z/4) and inconsistent data") {
  const Level lv = Level::make(2, 2);
  const FiniteGroup g = enumerate_group(lv);
  const auto gens = principal_congruence_generators(lv);
  const NakayamaReport r = nakayama_dimension(regular_module(g, gens), IdealData{gens});
  CHECK(r.coinvariant_rank == 6);
  CHECK(r.module_rank == 96);

  const Level l3 = Level::make(3, 1);
  const FiniteGroup g3 = enumerate_group(l3);
  FiniteModule bad = regular_module(g3, {GL2ModElement::identity(l3)});
  bad.matrices[0][0][0] = 2;
  CHECK_THROWS_AS(nakayama_dimension(bad, IdealData{{GL2ModElement::identity(l3)}}), std::invalid_argument);
  const FiniteModule ok = regular_module(g3, {GL2ModElement::weyl(l3)});
  CHECK_THROWS_AS(nakayama_dimension(ok, IdealData{{GL2ModElement::lower_unipotent(l3)}}), std::invalid_argument);
}

TEST_CASE("induced module dimensions and pairing") {
  for (auto [p, n, dim] : {std::tuple{2, 1, 3U}, {3, 1, 4U}, {5, 1, 6U}, {3, 2, 12U}, {2, 2, 6U}}) {
    const auto ctx = PrecisionContext::make(p, 12, 8);
    const InducedModule ind = build_induced(TorusCharacter::trivial(ctx), n);
    CHECK(ind.dimension() == dim);
    const PairingReport r = dual_pairing_check(ind);
    CHECK(r.induced_dimension == r.dual_dimension);
    CHECK(r.nonsingular);
    CHECK(r.invariant);
    CHECK(r.identity_acts_trivially);
    CHECK(r.homomorphism_checked);
  }
  // A character of conductor 1 at p = 5 and of conductor 2 at p = 2.
  const auto c5 = PrecisionContext::make(5, 12, 8);
  const auto one5 = padic_int(c5, 1);
  const auto chi5 = TorusCharacter::from_images(c5, {teichmuller(c5, 2), padic_pow(teichmuller(c5, 2), 3), one5, one5});
  const PairingReport r5 = dual_pairing_check(build_induced(chi5, 1));
  CHECK(r5.nonsingular);
  CHECK(r5.invariant);
  CHECK(r5.homomorphism_checked);

  const auto c2 = PrecisionContext::make(2, 12, 8);
  const auto one2 = padic_int(c2, 1);
  const auto sign = TorusCharacter::from_images(c2, {padic_int(c2, -1), one2, one2, one2});
  CHECK_THROWS_AS(build_induced(sign, 1), std::invalid_argument);
  const PairingReport r2 = dual_pairing_check(build_induced(sign, 2));
  CHECK(r2.nonsingular);
  CHECK(r2.invariant);

  CHECK_THROWS_AS(build_induced(TorusCharacter::closed_form(c5, 0, 1), 1), std::invalid_argument);
}

TEST_CASE("induced functions transform by chi inverse") {
  const auto ctx = PrecisionContext::make(5, 12, 8);
  const auto one = padic_int(ctx, 1);
  const auto chi = TorusCharacter::from_images(ctx, {teichmuller(ctx, 2), one, one, one});
  const InducedModule ind = build_induced(chi, 1);
  const Level& lv = ind.level();
  const FiniteGroup g = enumerate_group(lv);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto& x = g[rng() % g.order()];
    const long a = 1 + static_cast<long>(rng() % 4), d = 1 + static_cast<long>(rng() % 4);
    const auto q = GL2ModElement::make(lv, a, 0, static_cast<long>(rng() % 5), d);
    const std::size_t i = rng() % ind.dimension();
    CHECK(ind.evaluate(i, x * q).agrees_with(char_eval(chi, a, d).inverse() * ind.evaluate(i, x)));
  }
}

TEST_CASE("Bruhat split of the coset module") {
  for (auto [p, n, nb, nm] : {std::tuple{3, 1, 1U, 3U}, {2, 1, 1U, 2U}, {3, 2, 3U, 9U}}) {
    const auto ctx = PrecisionContext::make(p, 12, 8);
    const SplitReport s = bruhat_module_split(TorusCharacter::trivial(ctx), n);
    CHECK(s.n_block.size() == nb);
    CHECK(s.n_minus_block.size() == nm);
    CHECK(s.n_block.size() + s.n_minus_block.size() == s.dimension);
    CHECK(s.w_maps_into_minus);
    CHECK(s.identity_preserves_blocks);
    REQUIRE(s.witness.has_value());
    CHECK(bruhat_classify(*s.witness) == BruhatCell::cell_BwP);
  }
}
