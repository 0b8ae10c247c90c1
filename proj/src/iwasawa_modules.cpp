#include "iwasawa/iwasawa_modules.hpp"

#include <algorithm>
#include <stdexcept>

namespace iwasawa {

namespace {

using Coeffs = std::vector<PadicNumber>;

// Smallest valuation of a residual series, zeros counted at their precision.
long residual_valuation(const TruncatedSeries& r, bool& exact) {
  long v = kInfiniteValuation;
  exact = true;
  for (const auto& c : r.coefficients()) {
    if (c.is_exact_zero()) continue;
    exact = false;
    v = std::min(v, c.valuation());
  }
  return v;
}

long min_over(const std::vector<long>& v) {
  long m = kInfiniteValuation;
  for (long x : v) m = std::min(m, x);
  return m;
}

}  // namespace

std::string to_string(Side s) { return s == Side::n_chi ? "N_chi" : "N_chi_minus"; }

NChiElement act_torus(const PadicNumber& a, const NChiElement& f) {
  const auto& ctx = f.series.context();
  if (!a.is_unit()) throw PadicError("torus action needs a unit, got " + a.to_string());
  const PadicNumber shift = f.side == Side::n_chi ? a : a.inverse();
  const PadicNumber scale = char_eval_ta(f.character, a);
  return {series_compose(f.series, omega_sub(ctx, shift)).scaled(scale), f.character, f.side};
}

NChiElement act_torus(long a, const NChiElement& f) {
  const auto& ctx = f.series.context();
  if (a % ctx.p == 0) throw PadicError("torus action needs a unit, got " + std::to_string(a));
  const PadicNumber scale = char_eval(f.character, a, 1);
  const TruncatedSeries w = f.side == Side::n_chi
                                ? omega_sub_exact(ctx, mpz_class(a))
                                : grouplike(ctx, mpq_class(1, a)) - TruncatedSeries::one(ctx);
  return {series_compose(f.series, w).scaled(scale), f.character, f.side};
}

TruncatedSeries grouplike(const PrecisionContext& ctx, const PadicNumber& s) { return binomial_series(ctx, s); }

TruncatedSeries grouplike(const PrecisionContext& ctx, const mpq_class& s) {
  Coeffs c(static_cast<std::size_t>(ctx.M), PadicNumber::zero(ctx.p, ctx.N));
  mpq_class b = 1;
  for (int n = 0; n < ctx.M; ++n) {
    c[static_cast<std::size_t>(n)] = padic_rat(ctx, b);
    b *= (s - n) / (n + 1);
  }
  return TruncatedSeries(ctx, std::move(c), 0);
}

NChiElement act_u(const NChiElement& f) {
  if (f.side != Side::n_chi) throw std::invalid_argument("act_u is defined on N_chi, not N_chi_minus");
  const auto& ctx = f.series.context();
  const int m = ctx.M;
  const int p = ctx.p;
  const TruncatedSeries& s = f.series;
  if (!s.is_bounded()) throw std::invalid_argument("act_u needs a bounded series");

  // F = sum_k f_k (gamma - 1)^k = sum_j g_j gamma^j.
  Coeffs g(static_cast<std::size_t>(m), PadicNumber::zero(p, ctx.N));
  for (int j = 0; j < m; ++j) {
    PadicAccumulator acc(p, ctx.N);
    for (int k = j; k < m; ++k) {
      if (s[k].is_exact_zero()) continue;
      mpz_class b = binomial(k, j);
      if ((k - j) % 2 == 1) b = -b;
      acc.add_product(s[k], padic_int(ctx, b));
    }
    g[static_cast<std::size_t>(j)] = acc.result();
  }

  std::vector<PadicAccumulator> out(static_cast<std::size_t>(m), PadicAccumulator(p, ctx.N));
  for (int j = 0; j < m; ++j) {
    const PadicNumber& gj = g[static_cast<std::size_t>(j)];
    if (gj.is_exact_zero()) continue;
    const long den = 1 + static_cast<long>(j) * p;
    const PadicNumber weight = gj * char_eval(f.character, padic_rat(ctx, mpq_class(1, den)), padic_int(ctx, den));
    const TruncatedSeries moved = grouplike(ctx, mpq_class(j, den));
    for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)].add_product(weight, moved[i]);
  }
  Coeffs res;
  res.reserve(static_cast<std::size_t>(m));
  for (const auto& a : out) res.push_back(a.result());

  const long floor = s.valuation_floor();
  TruncatedSeries r(ctx, std::move(res));
  if (floor != kInfiniteValuation)
    r = r.with_precision_caps([&](int i) { return floor + m - i; });
  return {r, f.character, f.side};
}

mpz_class finite_difference_sum(int ell, int m) {
  mpz_class sum = 0;
  for (int j = 0; j <= ell; ++j) {
    mpz_class jm;
    mpz_ui_pow_ui(jm.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(m));
    const mpz_class term = binomial(ell, j) * jm;
    if (j % 2 == 0) sum += term;
    else sum -= term;
  }
  return sum;
}

ObstructionReport obstruction_coefficients(const PadicNumber& c, int ell, int degree, long loss_budget) {
  ObstructionReport out;
  const int p = c.prime();
  const int cap = c.cap();
  for (int m = 0; m <= degree; ++m) {
    const mpz_class fd = finite_difference_sum(ell, m);
    out.finite_differences.push_back(fd);
    const PadicNumber coeff = pbinomial(c, m) * PadicNumber::from_integer(p, cap, fd);
    out.coefficients.push_back(coeff);
    if (coeff.is_exact_zero()) continue;
    const long v = coeff.valuation();
    out.min_valuation = std::min(out.min_valuation, v);
    if (!coeff.is_zero() && !out.first_nonzero) out.first_nonzero = m;
    if (!coeff.is_zero() || v < cap - loss_budget) out.vanishes = false;
  }
  return out;
}

void ProbeConfig::validate(const PrecisionContext& ctx) const {
  if (k < 1) throw std::invalid_argument("probe level k must be >= 1");
  if (ell < 1) throw std::invalid_argument("probe exponent l must be >= 1");
  if (generations < 1) throw std::invalid_argument("probe needs at least one generation");
  mpz_class pk = 1;
  for (int i = 0; i < k; ++i) pk *= ctx.p;
  if (pk * ell >= ctx.M)
    throw std::invalid_argument("p^k * l = " + mpz_class(pk * ell).get_str() +
                                " must stay below the truncation degree " + std::to_string(ctx.M));
}

std::vector<PadicNumber> default_torus_samples(const PrecisionContext& ctx) {
  std::vector<PadicNumber> out{padic_int(ctx, 1 + ctx.p), torsion_generator(ctx)};
  if (ctx.p != 2) out.push_back(padic_int(ctx, 2));
  return out;
}

std::string to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::unit_ideal_reached:
      return "unit_ideal_reached";
    case ProbeVerdict::persistent_divisor:
      return "persistent_divisor";
    case ProbeVerdict::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

ProbeReport simplicity_probe(const TorusCharacter& chi, const ProbeConfig& cfg) {
  const auto& ctx = chi.context();
  cfg.validate(ctx);
  ProbeReport report;
  report.c = c_of_chi(chi, cfg.loss_budget);
  report.classification = classify_c(report.c, cfg.classify_bound);
  report.obstruction = obstruction_coefficients(report.c.c, cfg.ell, cfg.ell + 3, cfg.loss_budget);
  report.samples = cfg.torus_samples.empty() ? default_torus_samples(ctx) : cfg.torus_samples;
  report.valid_mod_degree = ctx.M;

  TruncatedSeries current = TruncatedSeries::zero(ctx);
  if (cfg.generator) {
    current = *cfg.generator;
  } else {
    mpz_class pk = 1;
    for (int i = 0; i < cfg.k; ++i) pk *= ctx.p;
    const TruncatedSeries w = omega_sub_exact(ctx, pk);
    current = w;
    for (int i = 1; i < cfg.ell; ++i) current = current * w;
  }

  for (int gen = 0; gen < cfg.generations; ++gen) {
    const NChiElement elem{current, chi, Side::n_chi};
    std::vector<TruncatedSeries> gens{current};
    for (const auto& a : report.samples) gens.push_back(act_torus(a, elem).series);
    if (cfg.include_u) gens.push_back(act_u(elem).series);

    const GcdReport g = series_gcd_unit_test(gens);
    ProbeGeneration pg;
    pg.generator_count = static_cast<int>(gens.size());
    pg.chain_degrees = g.chain_degrees;
    pg.verdict = g.verdict;
    report.valid_mod_degree = std::min(report.valid_mod_degree, g.valid_mod_degree);
    if (g.verdict == IdealVerdict::unit_ideal) {
      pg.carried_degree = 0;
      report.generations.push_back(pg);
      report.verdict = ProbeVerdict::unit_ideal_reached;
      report.divisor = g.divisor;
      return report;
    }
    if (g.verdict == IdealVerdict::undetermined) {
      report.generations.push_back(pg);
      report.verdict = ProbeVerdict::undetermined;
      report.diagnostic = "generation " + std::to_string(gen + 1) + ": " + g.diagnostic;
      return report;
    }
    pg.carried_degree = *g.divisor->weierstrass_degree;
    report.generations.push_back(pg);
    report.divisor = g.divisor;
    current = TruncatedSeries(ctx, g.divisor->distinguished_part);
  }
  report.verdict = ProbeVerdict::persistent_divisor;
  return report;
}

IntertwinerReport intertwiner_solve(const TorusCharacter& source, const TorusCharacter& target,
                                    const std::vector<long>& samples, long loss_budget, long bound) {
  const auto& ctx = target.context();
  IntertwinerReport rep;
  rep.valid_mod_degree = ctx.M;
  rep.cross_cell =
      "Hom(N_source, N_target^-) = Hom(N_source^-, N_target) = 0: a U-invariant vector of K[[U]] is zero";
  rep.central_match = central_agreement(source, target);
  rep.c_source = c_of_chi(source, loss_budget);
  rep.c_target = c_of_chi(target, loss_budget);
  rep.stated_difference = rep.c_source.c - rep.c_target.c;
  rep.exponent_difference = rep.c_target.c - rep.c_source.c;
  CInvariant diff{rep.exponent_difference,
                  std::min(rep.c_source.derivation_precision, rep.c_target.derivation_precision), 0};
  rep.classification = classify_c(diff, 2 * bound);
  if (!rep.central_match) {
    rep.conclusion = "central characters differ: Hom = 0";
    return rep;
  }
  if (!rep.classification.nonnegative_match || *rep.classification.nonnegative_match % 2 != 0) {
    rep.conclusion = "c(target) - c(source) is not in 2N_0 within precision: no power series solution, Hom = 0";
    return rep;
  }
  const long m = *rep.classification.nonnegative_match / 2;
  rep.log_power = m;
  const TruncatedSeries f = log_series_power(ctx, static_cast<int>(m));
  rep.boundedness = boundedness_floor(f);

  std::vector<long> worst;
  rep.residuals_vanish = true;
  for (long a : samples) {
    if (a % ctx.p == 0) continue;
    const PadicNumber lhs_scale = char_eval(target, a, 1);
    const PadicNumber rhs_scale = char_eval(source, a, 1);
    const TruncatedSeries lhs = series_compose(f, omega_sub_exact(ctx, mpz_class(a))).scaled(lhs_scale);
    const TruncatedSeries rhs = f.scaled(rhs_scale);
    ResidualProfile prof;
    prof.a = a;
    prof.min_valuation = residual_valuation(lhs - rhs, prof.exact_zero);
    const TruncatedSeries r = lhs - rhs;
    if (!r.is_zero() || prof.min_valuation < ctx.N - loss_budget) rep.residuals_vanish = false;
    worst.push_back(prof.min_valuation);
    rep.residuals.push_back(prof);
  }
  if (rep.residuals.empty()) throw std::invalid_argument("no unit among the torus samples");

  const bool bounded = rep.boundedness->bounded && f.is_bounded();
  if (rep.residuals_vanish && bounded) {
    rep.nonzero_intertwiner = true;
    rep.conclusion = "F = 1 solves the equation: the characters coincide and Hom is one-dimensional";
  } else if (rep.residuals_vanish) {
    rep.conclusion = "F = log(1+x)^" + std::to_string(m) +
                     " solves the equation but is unbounded: no bounded intertwiner, Hom = 0";
  } else {
    rep.conclusion = "residual does not vanish (minimal valuation " + std::to_string(min_over(worst)) +
                     "): Hom = 0";
  }
  return rep;
}

}  // namespace iwasawa
