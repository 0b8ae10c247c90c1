#include "iwasawa/padic_functions.hpp"

#include <vector>

namespace iwasawa {

namespace {

mpz_class mod_nonneg(const mpz_class& n, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class inverse_mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw PadicError("non-invertible residue");
  return r;
}

long floor_log(long k, int p) {
  long e = 0;
  for (long q = k / p; q > 0; q /= p) ++e;
  return e;
}

// Strips p from k, returning v_p(k) and leaving the prime-to-p part in k.
int strip(long& k, int p) {
  int v = 0;
  while (k % p == 0) {
    k /= p;
    ++v;
  }
  return v;
}

PadicNumber from_residue(int p, int cap, const mpz_class& r, long abs) {
  return PadicNumber::from_integer(p, cap, r).with_absolute_precision(abs);
}

}  // namespace

int primitive_root(int p) {
  if (p == 2) return 1;
  long phi = p - 1;
  std::vector<long> factors;
  for (long d = 2, n = phi; n > 1; ++d) {
    if (d * d > n) {
      factors.push_back(n);
      break;
    }
    if (n % d == 0) {
      factors.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  for (int g = 2; g < p; ++g) {
    bool generator = true;
    for (long f : factors) {
      mpz_class r;
      mpz_class base(g), mod(p);
      mpz_powm_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(phi / f),
                  mod.get_mpz_t());
      if (r == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw PadicError("no primitive root found");
}

int discrete_log_mod_p(long r, int p) {
  r %= p;
  if (r < 0) r += p;
  if (r == 0) throw PadicError("discrete log of 0 mod p");
  const int g = primitive_root(p);
  long x = 1;
  for (int i = 0; i < p - 1; ++i) {
    if (x == r) return i;
    x = (x * g) % p;
  }
  throw PadicError("discrete log failed");
}

PadicNumber teichmuller(const PrecisionContext& ctx, long r) {
  const int p = ctx.p;
  long res = r % p;
  if (res < 0) res += p;
  if (res == 0) throw PadicError("Teichmuller lift of 0 mod p");
  const mpz_class& mod = pow_p(p, ctx.N);
  if (p == 2) return padic_int(ctx, 1);
  // Newton: x <- x - (x^(p-1) - 1) / ((p-1) x^(p-2)); precision doubles each step.
  mpz_class x = res;
  for (int known = 1; known < 2 * ctx.N; known *= 2) {
    mpz_class xp2;
    mpz_powm_ui(xp2.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(p - 2), mod.get_mpz_t());
    mpz_class f = mod_nonneg(xp2 * x - 1, mod);
    mpz_class df = mod_nonneg(xp2 * (p - 1), mod);
    x = mod_nonneg(x - f * inverse_mod(df, mod), mod);
  }
  return padic_int(ctx, x);
}

int principal_modulus(int p) { return p == 2 ? 4 : p; }

int analytic_radius(int p) { return p == 2 ? 2 : 1; }

PadicNumber plog(const PadicNumber& a) {
  const int p = a.prime();
  const int cap = a.cap();
  if (!a.is_unit()) throw PadicError("log: argument " + a.to_string() + " is not a unit");
  const long abs = a.absolute_precision();
  const mpz_class& mod = pow_p(p, static_cast<int>(abs));
  const mpz_class z = mod_nonneg(a.unit() - 1, mod);
  if (z == 0) return PadicNumber::big_oh(p, cap, abs);
  const int v = valuation_of(z, p);
  if (v < analytic_radius(p))
    throw PadicError("log: argument " + a.to_string() + " outside 1 + " +
                     std::to_string(principal_modulus(p)) + "Z_" + std::to_string(p));
  const mpz_class zu = z / pow_p(p, v);
  mpz_class sum = 0;
  mpz_class zu_pow = 1;
  // Terms z^k/k have valuation kv - v_p(k) >= kv - floor(log_p k), which is
  // nondecreasing in k; stop once it reaches the target precision.
  for (long k = 1; k * v - floor_log(k, p) < abs; ++k) {
    zu_pow = mod_nonneg(zu_pow * zu, mod);
    long kp = k;
    const int vk = strip(kp, p);
    const long e = k * v - vk;
    if (e >= abs) continue;
    mpz_class term = zu_pow * pow_p(p, static_cast<int>(e)) * inverse_mod(mpz_class(kp), mod);
    if (k % 2 == 0) term = -term;
    sum += term;
  }
  return from_residue(p, cap, mod_nonneg(sum, mod), abs);
}

PadicNumber pexp(const PadicNumber& a) {
  const int p = a.prime();
  const int cap = a.cap();
  if (a.is_exact_zero()) return PadicNumber::one(p, cap);
  const long abs = std::min<long>(a.absolute_precision(), cap);
  if (a.is_zero()) return PadicNumber::one(p, cap).with_absolute_precision(abs);
  const long v = a.valuation();
  if (v < analytic_radius(p))
    throw PadicError("exp: argument " + a.to_string() + " has valuation below " +
                     std::to_string(analytic_radius(p)));
  if (abs <= 0) return PadicNumber::big_oh(p, cap, abs);
  const mpz_class& mod = pow_p(p, static_cast<int>(abs));
  mpz_class sum = 1;
  mpz_class au_pow = 1;
  mpz_class fact_free = 1;  // prime-to-p part of k!
  long fact_val = 0;        // v_p(k!)
  // v_p(k!) <= (k-1)/(p-1), so all terms with (kv - abs)(p-1) >= k-1 vanish.
  for (long k = 1; (k * v - abs) * (p - 1) < k - 1; ++k) {
    au_pow = mod_nonneg(au_pow * a.unit(), mod);
    long kp = k;
    fact_val += strip(kp, p);
    fact_free = mod_nonneg(fact_free * kp, mod);
    const long e = k * v - fact_val;
    if (e >= abs) continue;
    sum += au_pow * pow_p(p, static_cast<int>(e)) * inverse_mod(fact_free, mod);
  }
  return from_residue(p, cap, mod_nonneg(sum, mod), abs);
}

PadicNumber pbinomial(const PadicNumber& s, long n) {
  const int p = s.prime();
  const int cap = s.cap();
  if (!s.is_exact_zero() && s.valuation() < 0)
    throw PadicError("binomial: argument " + s.to_string() + " is not in Z_p");
  PadicNumber prod = PadicNumber::one(p, cap);
  for (long t = 0; t < n; ++t) prod *= s - PadicNumber::from_integer(p, cap, t);
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(n));
  return prod / PadicNumber::from_integer(p, cap, fact);
}

PadicNumber pbinomial_exact(const PrecisionContext& ctx, const mpq_class& s, long n) {
  mpq_class prod = 1;
  for (long t = 0; t < n; ++t) prod *= (s - t);
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(n));
  prod /= fact;
  return padic_rat(ctx, prod);
}

PadicNumber padic_pow(const PadicNumber& x, long n) {
  if (n < 0) return padic_pow(x.inverse(), -n);
  PadicNumber result = PadicNumber::one(x.prime(), x.cap());
  PadicNumber base = x;
  for (; n > 0; n >>= 1) {
    if (n & 1) result *= base;
    if (n > 1) base *= base;
  }
  return result;
}

mpz_class binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace iwasawa
