#pragma once

#include <random>

#include "iwasawa/padic_functions.hpp"

namespace iwasawa::testing {

/// Residue of a p-integral rational modulo p^k.
inline mpz_class rational_residue(const mpq_class& q, int p, int k) {
  const mpz_class& mod = pow_p(p, k);
  mpz_class inv;
  mpz_class den = q.get_den();
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0) return -1;
  mpz_class r = q.get_num() * inv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  return r;
}

inline mpz_class random_residue(std::mt19937_64& rng, const mpz_class& mod) {
  mpz_class r = 0;
  for (int i = 0; i < 4; ++i) r = (r << 64) + mpz_class(std::to_string(rng()));
  return r % mod;
}

/// Random p-adic unit with full precision.
inline PadicNumber random_unit(std::mt19937_64& rng, const PrecisionContext& ctx) {
  mpz_class r = random_residue(rng, pow_p(ctx.p, ctx.N));
  if (r % ctx.p == 0) r += 1;
  return padic_int(ctx, r);
}

/// Random integral p-adic number (may be divisible by p).
inline PadicNumber random_integral(std::mt19937_64& rng, const PrecisionContext& ctx) {
  return padic_int(ctx, random_residue(rng, pow_p(ctx.p, ctx.N)));
}

/// Random element of Q_p with valuation in [-3, 3] and random precision.
inline PadicNumber random_padic(std::mt19937_64& rng, const PrecisionContext& ctx) {
  const long v = static_cast<long>(rng() % 7) - 3;
  const int prec = 1 + static_cast<int>(rng() % static_cast<unsigned>(ctx.N));
  mpz_class u = random_residue(rng, pow_p(ctx.p, prec));
  if (u % ctx.p == 0) u += 1;
  return PadicNumber::from_parts(ctx.p, ctx.N, v, u, prec);
}

/// Random element of 1 + qZ_p, the domain of log.
inline PadicNumber random_principal(std::mt19937_64& rng, const PrecisionContext& ctx) {
  const int q = principal_modulus(ctx.p);
  return padic_int(ctx, 1) + padic_int(ctx, q) * random_integral(rng, ctx);
}

/// a - b vanishes to at least `digits` absolute digits.
inline bool agree_to(const PadicNumber& a, const PadicNumber& b, long digits) {
  const PadicNumber d = a - b;
  return d.is_zero() && d.valuation() >= digits;
}

}  // namespace iwasawa::testing
