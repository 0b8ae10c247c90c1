#pragma once

#include "iwasawa/padic.hpp"

namespace iwasawa {

/// Convenience constructors bound to a context.
inline PadicNumber padic_int(const PrecisionContext& ctx, long n) {
  return PadicNumber::from_integer(ctx.p, ctx.N, n);
}
inline PadicNumber padic_int(const PrecisionContext& ctx, const mpz_class& n) {
  return PadicNumber::from_integer(ctx.p, ctx.N, n);
}
inline PadicNumber padic_rat(const PrecisionContext& ctx, const mpq_class& q) {
  return PadicNumber::from_rational(ctx.p, ctx.N, q);
}

/// Smallest generator of (Z/p)^x; 1 for p = 2.
int primitive_root(int p);

/// The i with g^i = r mod p, g = primitive_root(p).
int discrete_log_mod_p(long r, int p);

/// Teichmuller representative of r mod p: the (p-1)-th root of unity
/// congruent to r, computed by Newton iteration on x^(p-1) - 1.
PadicNumber teichmuller(const PrecisionContext& ctx, long r);

/// q = p for odd p, q = 4 for p = 2.  1+qZ_p is the procyclic part of the
/// units with topological generator 1+q (5 for p = 2).
int principal_modulus(int p);

/// Minimal valuation of the argument of exp (and of log(a) - 1) for which the
/// series converge isometrically: 1 for odd p, 2 for p = 2.
int analytic_radius(int p);

/// p-adic logarithm on 1 + qZ_p.  log is an isometry there, so the result has
/// the same absolute precision as the argument.  Throws outside the domain.
PadicNumber plog(const PadicNumber& a);

/// p-adic exponential on qZ_p; the result is a principal unit with the
/// argument's absolute precision (capped at N).  Throws outside the domain.
PadicNumber pexp(const PadicNumber& a);

/// Generalized binomial s(s-1)...(s-n+1)/n! for s in Z_p.  Precision is the
/// one propagated by the product; integrality guarantees valuation >= 0.
PadicNumber pbinomial(const PadicNumber& s, long n);

/// Same for an exactly known rational s (p-integral): the binomial is formed in
/// Q and rounded once, so no digits are lost.
PadicNumber pbinomial_exact(const PrecisionContext& ctx, const mpq_class& s, long n);

/// x^n by repeated squaring; negative n inverts.
PadicNumber padic_pow(const PadicNumber& x, long n);

/// Exact binomial coefficient C(n, k) as an integer.
mpz_class binomial(long n, long k);

}  // namespace iwasawa
