#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iwasawa/power_series.hpp"
#include "iwasawa/torus_characters.hpp"

namespace iwasawa {

/// Which Iwahori cell the module comes from.  On N_chi the variable is
/// gamma - 1 with gamma = [[1,p],[0,1]]; on N_chi^- it is gamma' - 1 with
/// gamma' = [[1,0],[p,1]].  Conjugation by t_a = diag(a,1) sends gamma to
/// gamma^a but gamma' to gamma'^(1/a), which is the only difference in the
/// torus action.
enum class Side { n_chi, n_chi_minus };

std::string to_string(Side s);

/// Element F(x) of N_chi (or N_chi^-) under K[[U^-]] = N_chi.
struct NChiElement {
  TruncatedSeries series;
  TorusCharacter character;
  Side side = Side::n_chi;
};

/// chi(t_a) F(omega_a(x)) on N_chi, chi(t_a) F(omega_(1/a)(x)) on N_chi^-.
NChiElement act_torus(const PadicNumber& a, const NChiElement& f);
/// Same with an exactly known integer a (no binomial precision loss).
NChiElement act_torus(long a, const NChiElement& f);

/// gamma^s = (1+x)^s.
TruncatedSeries grouplike(const PrecisionContext& ctx, const PadicNumber& s);
/// gamma^s for a p-integral rational s, with binomials formed exactly.
TruncatedSeries grouplike(const PrecisionContext& ctx, const mpq_class& s);

/// Action of u = [[1,0],[1,1]] on N_chi, through
///   u(gamma^n) = chi(diag(1/(1+np), 1+np)) gamma^(n/(1+np)).
/// F is rewritten in the gamma^j basis, each gamma^j is moved and re-expanded.
/// The dropped tail sum_{k>=M} f_k x^k maps into (p, x)^M, so coefficient i
/// is capped at floor(F) + M - i digits.
NChiElement act_u(const NChiElement& f);

/// Sum_{j=0}^{l} (-1)^j C(l,j) j^m in exact integers.
mpz_class finite_difference_sum(int ell, int m);

struct ObstructionReport {
  /// Coefficient of y^m in sum_j (-1)^j C(l,j) (1 + j y)^c, m = 0..degree.
  std::vector<PadicNumber> coefficients;
  /// Sum_j (-1)^j C(l,j) j^m, m = 0..degree.
  std::vector<mpz_class> finite_differences;
  /// Smallest absolute digit count to which a coefficient is known to vanish,
  /// or the valuation of the first nonvanishing one.
  long min_valuation = kInfiniteValuation;
  /// Every coefficient vanishes to at least N - loss digits.
  bool vanishes = true;
  /// First degree with a certified nonzero coefficient.
  std::optional<int> first_nonzero;
};

/// Coefficient of y^m is C(c, m) * Sum_j (-1)^j C(l,j) j^m.
ObstructionReport obstruction_coefficients(const PadicNumber& c, int ell, int degree, long loss_budget = 4);

struct ProbeConfig {
  int k = 1;
  int ell = 1;
  /// Empty means the default samples 1+p, tau, 2 (units only).
  std::vector<PadicNumber> torus_samples;
  bool include_u = true;
  /// Defaults to omega_(p^k)^l.
  std::optional<TruncatedSeries> generator;
  int generations = 3;
  long loss_budget = 4;
  /// Largest integer tested by the c classification.
  long classify_bound = 100;

  /// Throws std::invalid_argument unless k >= 1, l >= 1, p^k l < M.
  void validate(const PrecisionContext& ctx) const;
};

std::vector<PadicNumber> default_torus_samples(const PrecisionContext& ctx);

enum class ProbeVerdict { unit_ideal_reached, persistent_divisor, undetermined };
std::string to_string(ProbeVerdict v);

struct ProbeGeneration {
  int generator_count = 0;
  std::vector<int> chain_degrees;
  IdealVerdict verdict = IdealVerdict::undetermined;
  /// Degree of the ideal generator carried into the next generation.
  int carried_degree = -1;
};

struct ProbeReport {
  ProbeVerdict verdict = ProbeVerdict::undetermined;
  std::optional<DistinguishedData> divisor;
  std::vector<ProbeGeneration> generations;
  CInvariant c;
  CClassification classification;
  ObstructionReport obstruction;
  std::vector<PadicNumber> samples;
  int valid_mod_degree = 0;
  std::string diagnostic;
};

/// Closes the ideal generated by cfg.generator under the sampled torus
/// elements and u, folding to the gcd generator after every generation.
ProbeReport simplicity_probe(const TorusCharacter& chi, const ProbeConfig& cfg);

struct ResidualProfile {
  long a = 0;
  /// Minimal coefficient valuation of the residual, counting zeros at their
  /// known precision.
  long min_valuation = kInfiniteValuation;
  bool exact_zero = false;
};

struct IntertwinerReport {
  bool central_match = false;
  CInvariant c_source;
  CInvariant c_target;
  /// c(source) - c(target), the conventional statement of the difference.
  PadicNumber stated_difference;
  /// c(target) - c(source): log(1+x)^m solves the equation for this = 2m.
  PadicNumber exponent_difference;
  CClassification classification;
  /// m with exponent_difference = 2m, when it exists within the bound.
  std::optional<long> log_power;
  std::vector<ResidualProfile> residuals;
  bool residuals_vanish = false;
  std::optional<BoundednessReport> boundedness;
  /// Hom(N_source, N_target) contains a nonzero bounded F (then F = 1).
  bool nonzero_intertwiner = false;
  std::string conclusion;
  /// Hom between opposite cells vanishes structurally: every U-invariant of
  /// K[[U]] is zero.
  std::string cross_cell;
  int valid_mod_degree = 0;
};

/// Solves chi_target(t_a) F(omega_a) = chi_source(t_a) F over sampled a.
IntertwinerReport intertwiner_solve(const TorusCharacter& source, const TorusCharacter& target,
                                    const std::vector<long>& samples = {2, 3, 7}, long loss_budget = 4,
                                    long bound = 50);

}  // namespace iwasawa
