#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iwasawa/padic_functions.hpp"

namespace iwasawa {

/// Floor value marking a formally unbounded series such as log(1+x).
inline constexpr long kUnboundedFloor = std::numeric_limits<long>::min();

/// Element of Q_p[[x]] truncated mod x^M.  Models the bounded power series
/// ring K[[U^-]] with x = gamma - 1.
///
/// `valuation_floor` is a certificate: every coefficient has valuation at
/// least the floor.  It is propagated soundly (min under addition, sum under
/// multiplication) and is kUnboundedFloor for series known to be unbounded
/// as infinite series; such series are never fed to ideal computations.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(const PrecisionContext& ctx);
  TruncatedSeries(const PrecisionContext& ctx, std::vector<PadicNumber> coeffs);
  TruncatedSeries(const PrecisionContext& ctx, std::vector<PadicNumber> coeffs, long floor);

  static TruncatedSeries zero(const PrecisionContext& ctx) { return TruncatedSeries(ctx); }
  static TruncatedSeries constant(const PrecisionContext& ctx, const PadicNumber& c);
  static TruncatedSeries one(const PrecisionContext& ctx);
  /// The series x (= gamma - 1).
  static TruncatedSeries variable(const PrecisionContext& ctx);
  /// Polynomial with the given integer coefficients (index = degree).
  static TruncatedSeries from_integers(const PrecisionContext& ctx, const std::vector<long>& c);

  const PrecisionContext& context() const { return ctx_; }
  int length() const { return ctx_.M; }
  const PadicNumber& operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
  std::span<const PadicNumber> coefficients() const { return coeffs_; }
  long valuation_floor() const { return floor_; }
  bool is_bounded() const { return floor_ != kUnboundedFloor; }

  /// Smallest valuation among coefficients that are certified nonzero;
  /// kInfiniteValuation when none is.
  long min_coefficient_valuation() const;
  /// Smallest absolute precision over all coefficients.
  long min_absolute_precision() const;
  /// True when every coefficient is zero to its precision.
  bool is_zero() const;

  TruncatedSeries operator-() const;
  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  TruncatedSeries scaled(const PadicNumber& c) const;

  /// Coefficientwise agreement to the smaller precision.
  bool agrees_with(const TruncatedSeries& other) const;

  /// Caps every coefficient's absolute precision: coefficient k is kept to at
  /// most limit(k) digits.
  template <class F>
  TruncatedSeries with_precision_caps(F limit) const {
    TruncatedSeries out = *this;
    for (int k = 0; k < length(); ++k)
      out.coeffs_[static_cast<std::size_t>(k)] =
          coeffs_[static_cast<std::size_t>(k)].with_absolute_precision(limit(k));
    return out;
  }

  /// Multiplicative inverse mod x^M; the constant term must be certified
  /// nonzero.
  TruncatedSeries inverse() const;

  /// `[k] p^v * (...) + O(p^K)` lines, one per coefficient that is not an
  /// exact zero.
  std::string to_string() const;

 private:
  PrecisionContext ctx_;
  std::vector<PadicNumber> coeffs_;
  long floor_ = kInfiniteValuation;
};

/// Cauchy product mod x^M: coefficients are
/// a_i b_(k-i) summed with one normalization per output index.
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);

/// F(G(x)) mod x^M.  G must have a zero constant term (exact or to
/// precision; in the latter case the result's precision is capped).
TruncatedSeries series_compose(const TruncatedSeries& f, const TruncatedSeries& g);

/// omega_a(x) = (1+x)^a - 1 = sum_{n>=1} C(a,n) x^n for a in Z_p.
TruncatedSeries omega_sub(const PrecisionContext& ctx, const PadicNumber& a);
/// Same for an exactly known integer a; binomials are formed exactly.
TruncatedSeries omega_sub_exact(const PrecisionContext& ctx, const mpz_class& a);

/// (1+x)^s = sum_n C(s,n) x^n for s in Z_p.
TruncatedSeries binomial_series(const PrecisionContext& ctx, const PadicNumber& s);

/// Result of Weierstrass preparation.  F = unit_cofactor * distinguished_part
/// (after the primitive scaling F -> p^-mu F, absorbed into the cofactor).
struct DistinguishedData {
  /// nullopt: undetermined at this truncation/precision.
  std::optional<int> weierstrass_degree;
  /// Monic coefficients, index = degree, size degree + 1.
  std::vector<PadicNumber> distinguished_part;
  std::optional<TruncatedSeries> unit_cofactor;
  /// Minimal absolute precision of the non-leading coefficients.
  long valid_to_precision = kInfiniteValuation;
  /// The factorization holds mod x^valid_mod_degree.
  int valid_mod_degree = 0;
  std::string diagnostic;

  bool determined() const { return weierstrass_degree.has_value(); }
};

/// Weierstrass degree and distinguished polynomial of a bounded series via
/// iterated Weierstrass division of x^d by F.
DistinguishedData weierstrass_data(const TruncatedSeries& f);

/// Polynomial over Q_p (index = degree) helpers used by the gcd.
namespace poly {
/// Highest index with a certified nonzero coefficient, -1 if none.
int degree(std::span<const PadicNumber> a);
/// Remainder of a by b; b's leading coefficient must be certified nonzero.
std::vector<PadicNumber> remainder(std::vector<PadicNumber> a, std::span<const PadicNumber> b);
std::vector<PadicNumber> monic(std::span<const PadicNumber> a);
/// Euclidean gcd over Q_p, normalized monic.  nullopt when precision runs out.
struct GcdResult {
  std::optional<std::vector<PadicNumber>> gcd;
  std::vector<int> remainder_degrees;
  std::string diagnostic;
};
GcdResult gcd(std::span<const PadicNumber> a, std::span<const PadicNumber> b);
}  // namespace poly

enum class IdealVerdict { unit_ideal, common_divisor, undetermined };

std::string to_string(IdealVerdict v);

struct GcdReport {
  IdealVerdict verdict = IdealVerdict::undetermined;
  /// Set for common_divisor (and degree-0 for unit_ideal).
  std::optional<DistinguishedData> divisor;
  /// Degree of the running gcd after each generator is folded in.
  std::vector<int> chain_degrees;
  std::string diagnostic;
  /// Every verdict is relative to the truncation.
  int valid_mod_degree = 0;
};

/// Decides whether bounded series generate the unit ideal of
/// o[[x]] (x) Q_p by folding Euclidean gcds of their distinguished parts.
GcdReport series_gcd_unit_test(std::span<const TruncatedSeries> gens);

/// [log(1+x)]^m truncated mod x^M; floor is kUnboundedFloor for m >= 1.
TruncatedSeries log_series_power(const PrecisionContext& ctx, int m);

struct BoundednessReport {
  bool bounded = true;
  /// Minimal coefficient valuation (for bounded verdicts).
  long floor = kInfiniteValuation;
  /// Indices where the running minimum valuation strictly drops below zero.
  std::vector<int> evidence;
  /// (index, valuation) for every certified nonzero coefficient.
  std::vector<std::pair<int, long>> profile;
};

/// Scans the coefficient valuations.  A running minimum that keeps falling
/// (at least two strict drops below zero, as at x^p, x^(p^2), ... for
/// log(1+x)) is reported as unboundedness evidence.
BoundednessReport boundedness_floor(const TruncatedSeries& f);

}  // namespace iwasawa
