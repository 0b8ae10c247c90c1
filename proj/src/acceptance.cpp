#include "iwasawa/acceptance.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

#include "iwasawa/duality_finite.hpp"
#include "iwasawa/finite_level.hpp"
#include "iwasawa/iwasawa_modules.hpp"
#include "iwasawa/padic_functions.hpp"

namespace iwasawa {

namespace {

constexpr long kLoss = 4;

struct Header {
  const char* name;
  double budget;
};

constexpr Header kHeaders[kCriterionCount] = {
    {"duality suite", 10},
    {"omega multiplicativity", 10},
    {"torus action composes", 20},
    {"finite-difference identity", 1},
    {"obstruction dichotomy", 30},
    {"simplicity probe evidence", 60},
    {"intertwiner analysis", 60},
    {"augmentation ideal nilpotency", 120},
    {"exhaustive Bruhat and Iwahori", 30},
    {"principal series at finite level", 30},
    {"determinism", 60},
};

mpz_class random_residue(std::mt19937_64& rng, const mpz_class& mod) {
  mpz_class r = 0;
  for (int i = 0; i < 3; ++i) {
    r <<= 64;
    r += mpz_class(std::to_string(rng()));
  }
  return r % mod;
}

PadicNumber random_unit(std::mt19937_64& rng, const PrecisionContext& ctx) {
  mpz_class r = random_residue(rng, pow_p(ctx.p, ctx.N));
  if (r % ctx.p == 0) r += 1;
  return padic_int(ctx, r);
}

PadicNumber random_integral(std::mt19937_64& rng, const PrecisionContext& ctx) {
  return padic_int(ctx, random_residue(rng, pow_p(ctx.p, ctx.N)));
}

TorusCharacter random_character(std::mt19937_64& rng, const PrecisionContext& ctx) {
  const long order = ctx.p == 2 ? 2 : ctx.p - 1;
  const PadicNumber tau = torsion_generator(ctx);
  const PadicNumber one = padic_int(ctx, 1);
  const PadicNumber q = padic_int(ctx, principal_modulus(ctx.p));
  return TorusCharacter::from_images(
      ctx, {padic_pow(tau, static_cast<long>(rng() % static_cast<unsigned long>(order))),
            padic_pow(tau, static_cast<long>(rng() % static_cast<unsigned long>(order))),
            one + q * random_integral(rng, ctx), one + q * random_integral(rng, ctx)});
}

/// Every coefficient of a - b vanishes to at least `digits` absolute digits.
bool agree_to(const TruncatedSeries& a, const TruncatedSeries& b, long digits, long& worst) {
  const TruncatedSeries d = a - b;
  bool ok = true;
  for (int k = 0; k < d.length(); ++k) {
    const PadicNumber& c = d[k];
    if (c.is_exact_zero()) continue;
    const long got = c.is_zero() ? c.absolute_precision() : c.valuation();
    worst = std::min(worst, got);
    if (!c.is_zero() || got < digits) ok = false;
  }
  return ok;
}

std::string worst_text(long worst) {
  return worst == kInfiniteValuation ? "exact" : std::to_string(worst);
}

// Determinant by cofactor expansion, independent of the elimination code.
mpz_class cofactor_det(const IntMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  mpz_class d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a[0][j] == 0) continue;
    IntMatrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(std::move(row));
    }
    d += (j % 2 == 0 ? 1 : -1) * a[0][j] * cofactor_det(minor);
  }
  return d;
}

// Surjective over Z_p iff the gcd of the maximal (row-count) minors is prime to p.
bool surjective_by_minors(const IntMatrix& a, std::size_t cols, int p) {
  const std::size_t rows = a.size();
  if (rows > cols) return false;
  if (rows == 0) return true;
  mpz_class g = 0;
  std::vector<std::size_t> pick(rows);
  for (std::size_t i = 0; i < rows; ++i) pick[i] = i;
  for (;;) {
    IntMatrix m(rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j : pick) m[i].push_back(a[i][j]);
    g = gcd(g, cofactor_det(m));
    std::size_t i = rows;
    while (i > 0 && pick[i - 1] == cols - rows + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t k = i; k < rows; ++k) pick[k] = pick[k - 1] + 1;
  }
  return g != 0 && g % p != 0;
}

CriterionResult start(int id) { return criterion_header(id); }

CriterionResult duality_suite(const AcceptanceConfig& cfg) {
  CriterionResult r = start(1);
  std::mt19937_64 rng(cfg.seed + 1);
  const int primes[] = {2, 3, 5};
  int identities = 0, biconditionals = 0, oracle = 0, surjective = 0;
  for (int t = 0; t < 200; ++t) {
    const int p = primes[t % 3];
    const std::size_t m = 1 + rng() % 5, n = 1 + rng() % 5;
    const long bound = static_cast<long>(p) * p;
    IntMatrix a = zero_matrix(n, m);
    for (auto& row : a)
      for (auto& x : row) x = static_cast<long>(rng() % static_cast<unsigned long>(2 * bound + 1)) - bound;
    const ExactnessReport e = exactness_suite(FreeModuleMap::from_matrix(m, a), p);
    identities += e.kernel_identity && e.cokernel_identity;
    biconditionals += e.isometry_biconditional;
    oracle += e.surjective == surjective_by_minors(a, m, p);
    surjective += e.surjective;
  }
  int double_duals = 0;
  for (std::size_t rank = 1; rank <= 5; ++rank) double_duals += double_dual_check(rank).consistent_is_identity;
  r.passed = identities == 200 && biconditionals == 200 && oracle == 200 && double_duals == 5;
  std::ostringstream s;
  s << "200 maps: rank identities " << identities << "/200, isometry biconditional " << biconditionals
    << "/200, minors oracle " << oracle << "/200 (" << surjective << " surjective); double dual identity "
    << double_duals << "/5";
  r.detail = s.str();
  return r;
}

CriterionResult omega_multiplicativity(const AcceptanceConfig& cfg) {
  CriterionResult r = start(2);
  std::mt19937_64 rng(cfg.seed + 2);
  int good = 0;
  long worst = kInfiniteValuation;
  std::ostringstream inexact;
  for (int p : {2, 3, 5}) {
    const auto ctx = PrecisionContext::make(p, 16, 64);
    for (int t = 0; t < 50; ++t) {
      // Units are drawn as exact lifts in [1, p^N); binomials are then exact.
      mpz_class a = random_residue(rng, pow_p(p, ctx.N)), b = random_residue(rng, pow_p(p, ctx.N));
      if (a % p == 0) a += 1;
      if (b % p == 0) b += 1;
      const auto lhs = series_compose(omega_sub_exact(ctx, a), omega_sub_exact(ctx, b));
      good += agree_to(lhs, omega_sub_exact(ctx, a * b), 16 - kLoss, worst);
      if (t == 0) {
        // The same pair read as p-adic numbers known to N digits: C(a, k)
        // then depends on digits of a beyond N, so this loss is inherent.
        long loose = kInfiniteValuation;
        agree_to(series_compose(omega_sub(ctx, padic_int(ctx, a)), omega_sub(ctx, padic_int(ctx, b))),
                 omega_sub(ctx, padic_int(ctx, a) * padic_int(ctx, b)), 0, loose);
        inexact << (p == 2 ? "" : ", ") << "p=" << p << ": " << worst_text(loose);
      }
    }
  }
  r.passed = good == 150;
  r.detail = "p in {2,3,5}, N = 16, M = 64, exact unit lifts: " + std::to_string(good) +
             "/150 pairs agree; worst absolute digits " + worst_text(worst) +
             "; with inputs known only to N digits the digits are " + inexact.str();
  return r;
}

CriterionResult torus_composes(const AcceptanceConfig& cfg) {
  CriterionResult r = start(3);
  std::mt19937_64 rng(cfg.seed + 3);
  int good = 0, total = 0;
  long worst = kInfiniteValuation;
  const int primes[] = {2, 3, 5};
  for (int t = 0; t < 50; ++t) {
    const auto ctx = PrecisionContext::make(primes[t % 3], 16, 32);
    std::vector<PadicNumber> c;
    for (int k = 0; k < ctx.M; ++k) c.push_back(random_integral(rng, ctx));
    const TruncatedSeries f(ctx, std::move(c));
    const auto chi = random_character(rng, ctx);
    const PadicNumber a = random_unit(rng, ctx), b = random_unit(rng, ctx);
    const Side side = t % 2 == 0 ? Side::n_chi : Side::n_chi_minus;
    const NChiElement e{f, chi, side};
    ++total;
    good += agree_to(act_torus(a, act_torus(b, e)).series, act_torus(a * b, e).series, 16 - kLoss, worst);
  }
  r.passed = good == total;
  r.detail = std::to_string(good) + "/" + std::to_string(total) +
             " triples (both cells, p in {2,3,5}, N = 16, M = 32); worst absolute digits " + worst_text(worst);
  return r;
}

CriterionResult finite_differences() {
  CriterionResult r = start(4);
  int checked = 0, good = 0;
  for (int ell = 1; ell <= 12; ++ell)
    for (int m = 0; m <= ell; ++m) {
      // Oracle: the ell-th forward difference of j^m at 0, times (-1)^ell.
      std::vector<mpz_class> row(static_cast<std::size_t>(ell) + 1);
      for (int j = 0; j <= ell; ++j) mpz_ui_pow_ui(row[j].get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(m));
      for (int level = 0; level < ell; ++level)
        for (int j = 0; j + level < ell; ++j) row[j] = row[j + 1] - row[j];
      const mpz_class oracle = ell % 2 == 0 ? row[0] : mpz_class(-row[0]);
      mpz_class expected = 0;
      if (m == ell) {
        mpz_fac_ui(expected.get_mpz_t(), static_cast<unsigned long>(ell));
        if (ell % 2 == 1) expected = -expected;
      }
      const mpz_class got = finite_difference_sum(ell, m);
      ++checked;
      good += got == expected && oracle == expected;
    }
  r.passed = good == checked;
  r.detail = std::to_string(good) + "/" + std::to_string(checked) + " pairs (0 <= m <= l <= 12) match 0 or (-1)^l l!";
  return r;
}

CriterionResult obstruction_dichotomy(const AcceptanceConfig& cfg) {
  CriterionResult r = start(5);
  std::mt19937_64 rng(cfg.seed + 5);
  int good = 0, total = 0;
  std::ostringstream s;
  for (int p : {3, 5}) {
    const auto ctx = PrecisionContext::make(p, 16, 16);
    std::vector<std::pair<std::string, PadicNumber>> cs;
    for (int m = 0; m <= 5; ++m) cs.emplace_back(std::to_string(m), padic_int(ctx, m));
    cs.emplace_back("1/" + std::to_string(1 + p), padic_rat(ctx, mpq_class(1, 1 + p)));
    cs.emplace_back("random", random_integral(rng, ctx));
    s << (p == 3 ? "" : "; ") << "p=" << p << ":";
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const bool expect_vanish = i < 4;
      const ObstructionReport o = obstruction_coefficients(cs[i].second, 4, 10, kLoss);
      ++total;
      good += o.vanishes == expect_vanish;
      s << " " << cs[i].first << (o.vanishes ? "=vanish" : "=nonzero");
    }
  }
  r.passed = good == total;
  r.detail = std::to_string(good) + "/" + std::to_string(total) + " as expected (l = 4, degree 10, N = 16); " + s.str();
  return r;
}

CriterionResult probe_evidence(const AcceptanceConfig& cfg) {
  CriterionResult r = start(6);
  const int p = cfg.p;
  const auto ctx = PrecisionContext::make(p, cfg.N, cfg.M);
  std::ostringstream s;
  bool ok = true;
  {
    ProbeConfig pc;
    pc.generator = TruncatedSeries::variable(ctx);
    const ProbeReport rep = simplicity_probe(TorusCharacter::trivial(ctx), pc);
    const bool is_x = rep.divisor && rep.divisor->weierstrass_degree == 1 && rep.divisor->distinguished_part[0].is_zero();
    ok = ok && rep.verdict == ProbeVerdict::persistent_divisor && is_x;
    s << "trivial chi, generator x: " << to_string(rep.verdict) << (is_x ? " (divisor x)" : "");
  }
  const auto chi = TorusCharacter::from_c(ctx, padic_rat(ctx, mpq_class(1, 1 + p)));
  const TruncatedSeries omega = omega_sub_exact(ctx, p);
  for (int power : {1, 2}) {
    ProbeConfig pc;
    pc.generator = power == 1 ? omega : omega * omega;
    const ProbeReport rep = simplicity_probe(chi, pc);
    ok = ok && rep.verdict == ProbeVerdict::unit_ideal_reached;
    s << "; c = 1/" << 1 + p << ", generator omega_p^" << power << ": " << to_string(rep.verdict);
  }
  r.passed = ok;
  r.detail = "p = " + std::to_string(p) + ", N = " + std::to_string(cfg.N) + ", M = " + std::to_string(cfg.M) + "; " +
             s.str();
  return r;
}

CriterionResult intertwiner_analysis(const AcceptanceConfig& cfg) {
  CriterionResult r = start(7);
  const auto ctx = PrecisionContext::make(5, 16, 32);
  std::mt19937_64 rng(cfg.seed + 7);
  const auto chi = random_character(rng, ctx);
  std::ostringstream s;
  bool ok = true;
  for (long m : {0L, 1L, 2L}) {
    const auto source = chi * TorusCharacter::closed_form(ctx, m, -m);
    const IntertwinerReport rep = intertwiner_solve(source, chi, {2, 3, 7}, kLoss);
    long worst = kInfiniteValuation;
    for (const auto& res : rep.residuals) worst = std::min(worst, res.min_valuation);
    const bool bounded = rep.boundedness && rep.boundedness->bounded;
    const bool residuals_ok = rep.log_power == m && rep.residuals_vanish && rep.residuals.size() == 3 && worst >= 16 - kLoss;
    ok = ok && residuals_ok && bounded == (m == 0) && rep.nonzero_intertwiner == (m == 0) && rep.central_match;
    s << (m ? "; " : "") << "m=" << m << ": residual digits >= " << worst_text(worst) << ", "
      << (bounded ? "bounded" : "unbounded") << ", " << rep.conclusion;
  }
  r.passed = ok;
  r.detail = "p = 5, N = 16, M = 32, a in {2,3,7}; " + s.str();
  return r;
}

CriterionResult nilpotency(const AcceptanceConfig& cfg) {
  CriterionResult r = start(8);
  std::ostringstream s;
  bool ok = true;
  for (int p : {2, 3, 5}) {
    const Level lv = Level::make(p, 1);
    const auto gen = GL2ModElement::make(lv, 1, 1, 0, 1);
    const FiniteGroup cyclic = generated_subgroup(lv, {gen});
    const NilpotencyReport rep = ideal_power_nilpotency(cyclic, IdealData{{gen}}, NilpotencyMode::char_p);
    ok = ok && rep.index == p;
    s << "Z/" << p << ": " << (rep.index ? std::to_string(*rep.index) : "none") << "; ";
  }
  const Level lv = Level::make(2, 2);
  const FiniteGroup g = enumerate_group(lv);
  const IdealData k1{principal_congruence_generators(lv)};
  const NilpotencyReport rep = ideal_power_nilpotency(g, k1, NilpotencyMode::char_p);
  const NilpotencyReport pi = ideal_power_nilpotency(g, k1, NilpotencyMode::pi_containment);
  if (!rep.index) {
    r.passed = false;
    r.detail = s.str() + "K1 in GL2(Z/4): no index";
    return r;
  }
  const int m = *rep.index;
  const FiniteGroup h = generated_subgroup(lv, k1.subgroup_generators);
  std::mt19937_64 rng(cfg.seed + 8);
  int contained = 0;
  for (int t = 0; t < 50; ++t) {
    GroupRingVector prod = group_ring_unit(g, GL2ModElement::identity(lv));
    for (int i = 0; i < m; ++i) {
      const auto& x = g[rng() % g.order()];
      const auto& y = h[rng() % h.order()];
      GroupRingVector factor(g.order(), 0);
      factor[g.index_of(x * y)] += 1;
      factor[g.index_of(x)] -= 1;
      prod = group_ring_product(g, prod, factor);
    }
    bool even = true;
    for (long c : prod) even = even && c % 2 == 0;
    contained += even;
  }
  ok = ok && pi.index == m && contained == 50 && h.order() == 16;
  s << "K1 in GL2(Z/4) (order " << h.order() << "): char_2 index " << m << ", pi_containment index "
    << (pi.index ? std::to_string(*pi.index) : "none") << ", random products in 2Z[G] " << contained << "/50";
  r.passed = ok;
  r.detail = s.str();
  return r;
}

CriterionResult bruhat(const AcceptanceConfig&) {
  CriterionResult r = start(9);
  std::ostringstream s;
  bool ok = true;
  for (auto [p, n, order] : {std::tuple{2, 1, 6L}, {3, 1, 48L}, {2, 2, 96L}}) {
    const BruhatCensus c = bruhat_census(enumerate_group(Level::make(p, n)));
    ok = ok && c.order == order && c.cell_b + c.cell_bwp == order && c.factor_failures == 0;
    s << (p == 2 && n == 1 ? "" : "; ") << "(" << p << "," << n << "): " << c.cell_b << " + " << c.cell_bwp << " = "
      << c.order << ", factor failures " << c.factor_failures;
  }
  r.passed = ok;
  r.detail = s.str();
  return r;
}

CriterionResult principal_series(const AcceptanceConfig&) {
  CriterionResult r = start(10);
  std::ostringstream s;
  bool ok = true;
  for (int p : {2, 3}) {
    const auto ctx = PrecisionContext::make(p, 16, 8);
    std::vector<TorusCharacter> chars{TorusCharacter::trivial(ctx)};
    if (p == 3) {
      const auto one = padic_int(ctx, 1);
      chars.push_back(TorusCharacter::from_images(ctx, {padic_int(ctx, -1), one, one, one}));
    }
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const InducedModule ind = build_induced(chars[i], 1);
      const PairingReport pr = dual_pairing_check(ind);
      const SplitReport sp = bruhat_module_split(chars[i], 1);
      const bool good = ind.dimension() == static_cast<std::size_t>(p + 1) && pr.nonsingular && pr.invariant &&
                        pr.dual_dimension == ind.dimension() && pr.identity_acts_trivially &&
                        sp.n_block.size() + sp.n_minus_block.size() == sp.dimension && sp.w_maps_into_minus &&
                        sp.witness.has_value();
      ok = ok && good;
      s << (s.tellp() > 0 ? "; " : "") << "p=" << p << (i == 0 ? " trivial" : " sign") << ": dim " << ind.dimension()
        << ", pairing " << (pr.nonsingular ? "nonsingular" : "singular") << (pr.invariant ? " invariant" : " not invariant")
        << ", split " << sp.n_block.size() << " + " << sp.n_minus_block.size()
        << (sp.w_maps_into_minus ? ", w(N) in N-" : ", w(N) not in N-")
        << ", witness " << (sp.witness ? sp.witness->to_string() : "none");
    }
  }
  r.passed = ok;
  r.detail = s.str();
  return r;
}

}  // namespace

CriterionResult criterion_header(int id) {
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("no criterion " + std::to_string(id));
  CriterionResult r;
  r.id = id;
  r.name = kHeaders[id - 1].name;
  r.budget_seconds = kHeaders[id - 1].budget;
  return r;
}

CriterionResult run_criterion(int id, const AcceptanceConfig& cfg) {
  switch (id) {
    case 1: return duality_suite(cfg);
    case 2: return omega_multiplicativity(cfg);
    case 3: return torus_composes(cfg);
    case 4: return finite_differences();
    case 5: return obstruction_dichotomy(cfg);
    case 6: return probe_evidence(cfg);
    case 7: return intertwiner_analysis(cfg);
    case 8: return nilpotency(cfg);
    case 9: return bruhat(cfg);
    case 10: return principal_series(cfg);
    default: throw std::out_of_range("criterion " + std::to_string(id) + " is not computational");
  }
}

}  // namespace iwasawa
