#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace iwasawa {

/// Raised on domain violations: division by zero, log/exp outside their
/// convergence disks, malformed serialized values.
class PadicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr long kInfiniteValuation = std::numeric_limits<long>::max();

/// Run-wide precision parameters.  `N` caps the number of trustworthy unit
/// digits of every PadicNumber, `M` is the truncation degree of power series.
struct PrecisionContext {
  int p = 3;
  int N = 16;
  int M = 64;

  /// Validates p prime, N >= 1, M >= 1.
  static PrecisionContext make(int p, int N, int M);
};

bool is_prime(long n);

/// p^k, cached per thread.
const mpz_class& pow_p(int p, int k);

/// v_p(n) for n != 0.
int valuation_of(const mpz_class& n, int p);

/// v_p(n!) by Legendre's formula.
long factorial_valuation(long n, int p);

/// An element of Q_p stored as p^v * u with u a unit known modulo p^k,
/// k <= N ("capped relative precision").
///
/// Three kinds of value exist: an exact zero (absorbing, infinite valuation),
/// an inexact zero O(p^a) which only records that the value vanishes to
/// absolute precision a, and a nonzero value.  Loss rules:
///   add/sub: absolute precision is the min of the operands' absolute
///            precisions, relative precision follows from the result's
///            valuation (and is capped at N);
///   mul/div: relative precision is the min of the operands'.
class PadicNumber {
 public:
  enum class Kind : std::uint8_t { exact_zero, inexact_zero, nonzero };

  PadicNumber() = default;  // exact zero with p = 0; only useful as a placeholder

  static PadicNumber zero(int p, int cap);
  static PadicNumber big_oh(int p, int cap, long absolute_precision);
  static PadicNumber one(int p, int cap);
  static PadicNumber from_integer(int p, int cap, const mpz_class& n);
  static PadicNumber from_integer(int p, int cap, long n) {
    return from_integer(p, cap, mpz_class(n));
  }
  static PadicNumber from_rational(int p, int cap, const mpq_class& q);
  /// p^valuation * unit + O(p^(valuation + known_precision)); `unit` must be
  /// prime to p (it is reduced mod p^known_precision).
  static PadicNumber from_parts(int p, int cap, long valuation, const mpz_class& unit,
                                int known_precision);

  int prime() const { return p_; }
  int cap() const { return cap_; }
  Kind kind() const { return kind_; }
  bool is_exact_zero() const { return kind_ == Kind::exact_zero; }
  /// True for exact zeros and for values indistinguishable from zero.
  bool is_zero() const { return kind_ != Kind::nonzero; }
  bool is_unit() const { return kind_ == Kind::nonzero && val_ == 0; }

  /// v_p of the value; kInfiniteValuation for an exact zero and the absolute
  /// precision (a lower bound) for an inexact zero.
  long valuation() const;
  /// Digits of the unit part that are trustworthy; 0 for zeros.
  int known_precision() const { return kind_ == Kind::nonzero ? prec_ : 0; }
  /// valuation + known_precision; kInfiniteValuation for an exact zero.
  long absolute_precision() const;
  const mpz_class& unit() const { return unit_; }

  /// Rational representative p^v * unit (0 for zeros).
  mpq_class lift() const;
  /// Residue modulo p^k of an integral value; requires k <= absolute precision.
  mpz_class residue(int k) const;
  /// Drops digits so that the absolute precision is at most `k`.
  PadicNumber with_absolute_precision(long k) const;

  PadicNumber operator-() const;
  PadicNumber inverse() const;

  friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);
  PadicNumber& operator+=(const PadicNumber& b) { return *this = *this + b; }
  PadicNumber& operator-=(const PadicNumber& b) { return *this = *this - b; }
  PadicNumber& operator*=(const PadicNumber& b) { return *this = *this * b; }
  PadicNumber& operator/=(const PadicNumber& b) { return *this = *this / b; }

  /// Agreement to the smaller of the two precisions; the only equality notion
  /// available for inexact values.
  bool agrees_with(const PadicNumber& b) const { return (*this - b).is_zero(); }

  /// Bit-exact identity of the stored representation (kind, valuation, digits,
  /// precision).  Used for serialization round trips, not for arithmetic.
  bool same_representation(const PadicNumber& b) const;

  /// `p^v * (d0 + d1*p + ...) + O(p^K)`; "0" for an exact zero, `O(p^K)` for
  /// an inexact one.
  std::string to_string() const;
  /// Inverse of to_string(); `p` is needed for the literal "0" and must match
  /// the base written in any other literal.
  static PadicNumber parse(std::string_view text, int p, int cap);

 private:
  friend class PadicAccumulator;
  PadicNumber(int p, int cap, Kind kind, long val, int prec, mpz_class unit)
      : p_(p), cap_(cap), kind_(kind), val_(val), prec_(prec), unit_(std::move(unit)) {}

  /// Normalizes p^base * n + O(p^abs) into a value.
  static PadicNumber normalize(int p, int cap, long base, mpz_class n, long abs);

  int p_ = 0;
  int cap_ = 0;
  Kind kind_ = Kind::exact_zero;
  long val_ = 0;  // valuation, or absolute precision for inexact zero
  int prec_ = 0;
  mpz_class unit_;
};

/// Sums many terms (or products of pairs) and normalizes once.  The result
/// equals folding operator+ over the terms.
class PadicAccumulator {
 public:
  PadicAccumulator(int p, int cap) : p_(p), cap_(cap) {}

  void add(const PadicNumber& a);
  void add_product(const PadicNumber& a, const PadicNumber& b);
  PadicNumber result() const;

 private:
  void add_scaled(long v, const mpz_class& u, long abs);

  int p_;
  int cap_;
  bool any_ = false;
  long base_ = 0;
  long abs_ = kInfiniteValuation;
  mpz_class sum_;
};

}  // namespace iwasawa
