#include "iwasawa/power_series.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace iwasawa {

namespace {

using Coeffs = std::vector<PadicNumber>;

long floor_of(const Coeffs& c) {
  long f = kInfiniteValuation;
  for (const auto& x : c)
    if (!x.is_exact_zero()) f = std::min(f, x.valuation());
  return f;
}

long floor_sum(long a, long b) {
  if (a == kInfiniteValuation || b == kInfiniteValuation) return kInfiniteValuation;
  if (a == kUnboundedFloor || b == kUnboundedFloor) return kUnboundedFloor;
  return a + b;
}

long floor_min(long a, long b) {
  if (a == kUnboundedFloor || b == kUnboundedFloor) return kUnboundedFloor;
  return std::min(a, b);
}

int order_of(const Coeffs& c) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_exact_zero()) return static_cast<int>(i);
  return static_cast<int>(c.size());
}

// Product mod x^m, computing only output indices >= start.
Coeffs mul_truncated(const Coeffs& a, const Coeffs& b, int m, int p, int cap, int start = 0) {
  Coeffs out(static_cast<std::size_t>(m), PadicNumber::zero(p, cap));
  const int oa = order_of(a);
  const int ob = order_of(b);
  for (int k = std::max(start, oa + ob); k < m; ++k) {
    PadicAccumulator acc(p, cap);
    for (int i = oa; i <= k - ob; ++i)
      acc.add_product(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(k - i)]);
    out[static_cast<std::size_t>(k)] = acc.result();
  }
  return out;
}

}  // namespace

TruncatedSeries::TruncatedSeries(const PrecisionContext& ctx)
    : ctx_(ctx), coeffs_(static_cast<std::size_t>(ctx.M), PadicNumber::zero(ctx.p, ctx.N)) {}

TruncatedSeries::TruncatedSeries(const PrecisionContext& ctx, std::vector<PadicNumber> coeffs)
    : ctx_(ctx), coeffs_(std::move(coeffs)) {
  coeffs_.resize(static_cast<std::size_t>(ctx.M), PadicNumber::zero(ctx.p, ctx.N));
  for (const auto& c : coeffs_)
    if (c.prime() != ctx.p && c.prime() != 0)
      throw PadicError("series coefficient over the wrong prime");
  floor_ = floor_of(coeffs_);
}

TruncatedSeries::TruncatedSeries(const PrecisionContext& ctx, std::vector<PadicNumber> coeffs,
                                 long floor)
    : TruncatedSeries(ctx, std::move(coeffs)) {
  if (floor != kUnboundedFloor && floor > floor_)
    throw std::invalid_argument("valuation floor exceeds a coefficient valuation");
  floor_ = floor;
}

TruncatedSeries TruncatedSeries::constant(const PrecisionContext& ctx, const PadicNumber& c) {
  return TruncatedSeries(ctx, {c});
}

TruncatedSeries TruncatedSeries::one(const PrecisionContext& ctx) {
  return constant(ctx, padic_int(ctx, 1));
}

TruncatedSeries TruncatedSeries::variable(const PrecisionContext& ctx) {
  return TruncatedSeries(ctx, {PadicNumber::zero(ctx.p, ctx.N), padic_int(ctx, 1)});
}

TruncatedSeries TruncatedSeries::from_integers(const PrecisionContext& ctx,
                                               const std::vector<long>& c) {
  Coeffs coeffs;
  coeffs.reserve(c.size());
  for (long v : c) coeffs.push_back(padic_int(ctx, v));
  return TruncatedSeries(ctx, std::move(coeffs));
}

long TruncatedSeries::min_coefficient_valuation() const {
  long v = kInfiniteValuation;
  for (const auto& c : coeffs_)
    if (!c.is_zero()) v = std::min(v, c.valuation());
  return v;
}

long TruncatedSeries::min_absolute_precision() const {
  long v = kInfiniteValuation;
  for (const auto& c : coeffs_) v = std::min(v, c.absolute_precision());
  return v;
}

bool TruncatedSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& c) { return c.is_zero(); });
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries out = a;
  for (int k = 0; k < a.length(); ++k)
    out.coeffs_[static_cast<std::size_t>(k)] += b[k];
  out.floor_ = floor_min(a.floor_, b.floor_);
  return out;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  const auto& ctx = a.context();
  Coeffs ac(a.coefficients().begin(), a.coefficients().end());
  Coeffs bc(b.coefficients().begin(), b.coefficients().end());
  Coeffs out = mul_truncated(ac, bc, ctx.M, ctx.p, ctx.N);
  long floor = floor_sum(a.valuation_floor(), b.valuation_floor());
  TruncatedSeries r(ctx, std::move(out));
  if (floor == kUnboundedFloor) return TruncatedSeries(ctx, Coeffs(r.coefficients().begin(), r.coefficients().end()), kUnboundedFloor);
  // The propagated bound is sound; keep it unless the series is identically zero.
  if (floor != kInfiniteValuation && floor <= r.valuation_floor())
    return TruncatedSeries(ctx, Coeffs(r.coefficients().begin(), r.coefficients().end()), floor);
  return r;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  return series_mul(a, b);
}

TruncatedSeries TruncatedSeries::scaled(const PadicNumber& c) const {
  TruncatedSeries out = *this;
  for (auto& x : out.coeffs_) x *= c;
  if (c.is_exact_zero()) {
    out.floor_ = kInfiniteValuation;
  } else if (floor_ != kUnboundedFloor && floor_ != kInfiniteValuation) {
    out.floor_ = std::min(floor_ + c.valuation(), floor_of(out.coeffs_));
  }
  return out;
}

bool TruncatedSeries::agrees_with(const TruncatedSeries& other) const {
  for (int k = 0; k < length(); ++k)
    if (!coeffs_[static_cast<std::size_t>(k)].agrees_with(other[k])) return false;
  return true;
}

TruncatedSeries TruncatedSeries::inverse() const {
  const PadicNumber& c0 = coeffs_[0];
  if (c0.is_zero()) throw PadicError("series inverse needs a nonzero constant term");
  Coeffs inv(static_cast<std::size_t>(length()), PadicNumber::zero(ctx_.p, ctx_.N));
  inv[0] = c0.inverse();
  for (int k = 1; k < length(); ++k) {
    PadicAccumulator acc(ctx_.p, ctx_.N);
    for (int i = 1; i <= k; ++i)
      acc.add_product(coeffs_[static_cast<std::size_t>(i)], inv[static_cast<std::size_t>(k - i)]);
    inv[static_cast<std::size_t>(k)] = -(acc.result() * inv[0]);
  }
  return TruncatedSeries(ctx_, std::move(inv));
}

std::string TruncatedSeries::to_string() const {
  std::ostringstream out;
  bool any = false;
  for (int k = 0; k < length(); ++k) {
    const auto& c = coeffs_[static_cast<std::size_t>(k)];
    if (c.is_exact_zero()) continue;
    out << "[" << k << "] " << c.to_string() << "\n";
    any = true;
  }
  if (!any) out << "0\n";
  return out.str();
}

TruncatedSeries series_compose(const TruncatedSeries& f, const TruncatedSeries& g) {
  const auto& ctx = f.context();
  const int m = ctx.M;
  if (!g[0].is_zero())
    throw PadicError("composition F(G) needs G with zero constant term, got " + g[0].to_string());
  Coeffs gc(g.coefficients().begin(), g.coefficients().end());
  const long g0_precision = gc[0].absolute_precision();
  gc[0] = PadicNumber::zero(ctx.p, ctx.N);

  std::vector<PadicAccumulator> acc(static_cast<std::size_t>(m), PadicAccumulator(ctx.p, ctx.N));
  acc[0].add(f[0]);
  Coeffs power = gc;  // G^j, which vanishes below degree j
  for (int j = 1; j < m; ++j) {
    const PadicNumber& fj = f[j];
    if (!fj.is_exact_zero())
      for (int k = j; k < m; ++k) acc[static_cast<std::size_t>(k)].add_product(fj, power[static_cast<std::size_t>(k)]);
    if (j + 1 < m) power = mul_truncated(power, gc, m, ctx.p, ctx.N, j + 1);
  }
  Coeffs out;
  out.reserve(static_cast<std::size_t>(m));
  for (const auto& a : acc) out.push_back(a.result());

  long floor = kUnboundedFloor;
  if (f.is_bounded() && g.is_bounded()) {
    const long gf = g.valuation_floor() == kInfiniteValuation ? 0 : std::min(0L, g.valuation_floor());
    floor = f.valuation_floor() == kInfiniteValuation ? kInfiniteValuation
                                                       : f.valuation_floor() + (m - 1) * gf;
  }
  TruncatedSeries r(ctx, std::move(out));
  if (g0_precision != kInfiniteValuation) {
    // An inexact constant term delta perturbs F(G) by about F'(G) delta.
    const long fv = f.min_coefficient_valuation();
    const long cap = g0_precision + (fv == kInfiniteValuation ? 0 : std::min(0L, fv));
    r = r.with_precision_caps([cap](int) { return cap; });
  }
  if (floor == kUnboundedFloor || (floor != kInfiniteValuation && floor <= r.valuation_floor()))
    return TruncatedSeries(ctx, Coeffs(r.coefficients().begin(), r.coefficients().end()), floor);
  return r;
}

TruncatedSeries omega_sub(const PrecisionContext& ctx, const PadicNumber& a) {
  if (!a.is_exact_zero() && a.valuation() < 0)
    throw PadicError("omega_a needs a in Z_p, got " + a.to_string());
  Coeffs c(static_cast<std::size_t>(ctx.M), PadicNumber::zero(ctx.p, ctx.N));
  if (ctx.M > 1) c[1] = a;
  for (int n = 1; n + 1 < ctx.M; ++n)
    c[static_cast<std::size_t>(n + 1)] =
        c[static_cast<std::size_t>(n)] * (a - padic_int(ctx, n)) / padic_int(ctx, n + 1);
  return TruncatedSeries(ctx, std::move(c), 0);
}

TruncatedSeries omega_sub_exact(const PrecisionContext& ctx, const mpz_class& a) {
  Coeffs c(static_cast<std::size_t>(ctx.M), PadicNumber::zero(ctx.p, ctx.N));
  mpq_class b = a;
  for (int n = 1; n < ctx.M; ++n) {
    c[static_cast<std::size_t>(n)] = padic_rat(ctx, b);
    b *= mpq_class(a - n, n + 1);
    b.canonicalize();
  }
  return TruncatedSeries(ctx, std::move(c), 0);
}

TruncatedSeries binomial_series(const PrecisionContext& ctx, const PadicNumber& s) {
  return TruncatedSeries::one(ctx) + omega_sub(ctx, s);
}

// ---------------------------------------------------------------------------
// Weierstrass preparation

DistinguishedData weierstrass_data(const TruncatedSeries& f) {
  const auto& ctx = f.context();
  const int m = ctx.M;
  DistinguishedData out;
  if (!f.is_bounded()) {
    out.diagnostic = "unbounded series are excluded from ideal computations";
    return out;
  }
  const long mu = f.min_coefficient_valuation();
  if (mu == kInfiniteValuation) {
    out.diagnostic = "every coefficient below x^" + std::to_string(m) + " vanishes to precision";
    return out;
  }
  const PadicNumber scale = PadicNumber::from_parts(ctx.p, ctx.N, mu, mpz_class(1), ctx.N);
  const TruncatedSeries g = f.scaled(scale.inverse());

  int d = -1;
  for (int k = 0; k < m; ++k) {
    const PadicNumber& c = g[k];
    if (!c.is_zero() && c.valuation() == 0) {
      d = k;
      break;
    }
    // A coefficient known only to O(p^0) might hide a unit.
    if (c.is_zero() && c.valuation() < 1) {
      out.diagnostic = "coefficient of x^" + std::to_string(k) + " lacks precision: " + c.to_string();
      return out;
    }
  }
  if (d < 0) {
    out.diagnostic = "no unit coefficient below x^" + std::to_string(m);
    return out;
  }

  // G = A + x^d B with A the low part (all valuations >= 1) and B a unit.
  Coeffs a(static_cast<std::size_t>(m), PadicNumber::zero(ctx.p, ctx.N));
  Coeffs b(static_cast<std::size_t>(m), PadicNumber::zero(ctx.p, ctx.N));
  for (int k = 0; k < d; ++k) a[static_cast<std::size_t>(k)] = g[k];
  for (int k = d; k < m; ++k) b[static_cast<std::size_t>(k - d)] = g[k];
  const TruncatedSeries b_inv = TruncatedSeries(ctx, b).inverse();
  Coeffs binv(b_inv.coefficients().begin(), b_inv.coefficients().end());

  // Divide x^d by G: R <- (R mod x^d) - q A with q = tau(R) B^-1, Q += q.
  Coeffs r(static_cast<std::size_t>(m), PadicNumber::zero(ctx.p, ctx.N));
  r[static_cast<std::size_t>(d)] = padic_int(ctx, 1);
  Coeffs q_total(static_cast<std::size_t>(m), PadicNumber::zero(ctx.p, ctx.N));
  const int max_iter = ctx.N + m + 8;
  long residual_precision = kInfiniteValuation;
  for (int iter = 0;; ++iter) {
    Coeffs high(static_cast<std::size_t>(m), PadicNumber::zero(ctx.p, ctx.N));
    bool high_zero = true;
    for (int k = d; k < m; ++k) {
      high[static_cast<std::size_t>(k - d)] = r[static_cast<std::size_t>(k)];
      if (!r[static_cast<std::size_t>(k)].is_zero()) high_zero = false;
    }
    if (high_zero) {
      for (int k = d; k < m; ++k)
        residual_precision = std::min(residual_precision, r[static_cast<std::size_t>(k)].absolute_precision());
      break;
    }
    if (iter == max_iter) {
      long v = kInfiniteValuation;
      for (int k = d; k < m; ++k) v = std::min(v, r[static_cast<std::size_t>(k)].valuation());
      residual_precision = v;
      break;
    }
    Coeffs q = mul_truncated(high, binv, m - d, ctx.p, ctx.N);
    q.resize(static_cast<std::size_t>(m), PadicNumber::zero(ctx.p, ctx.N));
    const Coeffs qa = mul_truncated(q, a, m, ctx.p, ctx.N);
    for (int k = 0; k < m; ++k) {
      const PadicNumber low = k < d ? r[static_cast<std::size_t>(k)] : PadicNumber::zero(ctx.p, ctx.N);
      r[static_cast<std::size_t>(k)] = low - qa[static_cast<std::size_t>(k)];
      q_total[static_cast<std::size_t>(k)] += q[static_cast<std::size_t>(k)];
    }
  }

  // Unknown coefficients of F beyond x^M reach the remainder only after
  // m - 2d + 1 divisions, each gaining a power of p.
  const long truncation_precision = std::max<long>(0, m - 2 * d + 1);
  const long cap = std::min(residual_precision, truncation_precision);

  out.weierstrass_degree = d;
  out.distinguished_part.assign(static_cast<std::size_t>(d + 1), PadicNumber::zero(ctx.p, ctx.N));
  out.distinguished_part[static_cast<std::size_t>(d)] = padic_int(ctx, 1);
  long precision = kInfiniteValuation;
  for (int k = 0; k < d; ++k) {
    PadicNumber c = (-r[static_cast<std::size_t>(k)]).with_absolute_precision(cap);
    precision = std::min(precision, c.absolute_precision());
    if (!c.is_zero() && c.valuation() < 1)
      out.diagnostic = "lower coefficient of x^" + std::to_string(k) + " is not divisible by p";
    out.distinguished_part[static_cast<std::size_t>(k)] = std::move(c);
  }
  out.valid_to_precision = precision;
  out.valid_mod_degree = m - d;
  // P = Q G, so F = p^mu Q^-1 P.
  out.unit_cofactor = TruncatedSeries(ctx, q_total).inverse().scaled(scale);
  return out;
}

// ---------------------------------------------------------------------------
// Polynomial gcd over Q_p

namespace poly {

int degree(std::span<const PadicNumber> a) {
  for (int k = static_cast<int>(a.size()) - 1; k >= 0; --k)
    if (!a[static_cast<std::size_t>(k)].is_zero()) return k;
  return -1;
}

std::vector<PadicNumber> remainder(std::vector<PadicNumber> a, std::span<const PadicNumber> b) {
  const int db = degree(b);
  if (db < 0) throw PadicError("polynomial division by zero");
  const PadicNumber& lc = b[static_cast<std::size_t>(db)];
  for (int da = degree(a); da >= db; da = degree(a)) {
    const PadicNumber q = a[static_cast<std::size_t>(da)] / lc;
    for (int i = 0; i <= db; ++i) {
      auto& slot = a[static_cast<std::size_t>(da - db + i)];
      slot -= q * b[static_cast<std::size_t>(i)];
    }
    auto& top = a[static_cast<std::size_t>(da)];
    if (!top.is_zero()) top = PadicNumber::big_oh(top.prime(), top.cap(), top.absolute_precision());
  }
  a.resize(static_cast<std::size_t>(std::max(db, 0)));
  return a;
}

std::vector<PadicNumber> monic(std::span<const PadicNumber> a) {
  const int d = degree(a);
  if (d < 0) throw PadicError("monic of the zero polynomial");
  const PadicNumber lc = a[static_cast<std::size_t>(d)];
  std::vector<PadicNumber> out;
  for (int k = 0; k < d; ++k) out.push_back(a[static_cast<std::size_t>(k)] / lc);
  out.push_back(PadicNumber::one(lc.prime(), lc.cap()));
  return out;
}

GcdResult gcd(std::span<const PadicNumber> a, std::span<const PadicNumber> b) {
  GcdResult res;
  std::vector<PadicNumber> x(a.begin(), a.end());
  std::vector<PadicNumber> y(b.begin(), b.end());
  if (degree(x) < degree(y)) std::swap(x, y);
  if (degree(x) < 0) {
    res.diagnostic = "gcd of two zero polynomials";
    return res;
  }
  while (true) {
    const int dy = degree(y);
    res.remainder_degrees.push_back(dy);
    if (dy < 0) {
      long prec = kInfiniteValuation;
      for (const auto& c : y) prec = std::min(prec, c.absolute_precision());
      if (prec < 1) {
        res.diagnostic = "remainder vanishes only to precision " + std::to_string(prec);
        return res;
      }
      res.gcd = monic(x);
      return res;
    }
    if (dy == 0) {
      res.gcd = std::vector<PadicNumber>{PadicNumber::one(y[0].prime(), y[0].cap())};
      return res;
    }
    std::vector<PadicNumber> r = remainder(std::move(x), y);
    x = std::move(y);
    y = std::move(r);
  }
}

}  // namespace poly

std::string to_string(IdealVerdict v) {
  switch (v) {
    case IdealVerdict::unit_ideal:
      return "unit_ideal";
    case IdealVerdict::common_divisor:
      return "common_divisor";
    case IdealVerdict::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

GcdReport series_gcd_unit_test(std::span<const TruncatedSeries> gens) {
  GcdReport report;
  if (gens.empty()) {
    report.diagnostic = "no generators";
    return report;
  }
  const auto& ctx = gens.front().context();
  report.valid_mod_degree = ctx.M;
  std::vector<DistinguishedData> parts;
  std::string pending;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const TruncatedSeries& g = gens[i];
    if (!g.is_bounded())
      throw std::invalid_argument("unbounded series cannot generate an ideal of o[[x]]");
    if (g.is_zero() && g.min_absolute_precision() >= 1) continue;
    DistinguishedData wd = weierstrass_data(g);
    if (!wd.determined()) {
      pending = "generator " + std::to_string(i) + ": " + wd.diagnostic;
      continue;
    }
    if (*wd.weierstrass_degree == 0) {
      report.verdict = IdealVerdict::unit_ideal;
      report.chain_degrees.push_back(0);
      report.divisor = std::move(wd);
      return report;
    }
    report.valid_mod_degree = std::min(report.valid_mod_degree, wd.valid_mod_degree);
    parts.push_back(std::move(wd));
  }
  if (!pending.empty()) {
    report.diagnostic = pending;
    return report;
  }
  if (parts.empty()) {
    report.diagnostic = "all generators vanish: zero ideal";
    return report;
  }
  std::vector<PadicNumber> running = parts.front().distinguished_part;
  report.chain_degrees.push_back(poly::degree(running));
  for (std::size_t i = 1; i < parts.size(); ++i) {
    poly::GcdResult g = poly::gcd(running, parts[i].distinguished_part);
    if (!g.gcd) {
      report.diagnostic = "precision exhausted in gcd chain: " + g.diagnostic;
      return report;
    }
    running = std::move(*g.gcd);
    const int deg = poly::degree(running);
    report.chain_degrees.push_back(deg);
    if (deg == 0) {
      report.verdict = IdealVerdict::unit_ideal;
      DistinguishedData unit;
      unit.weierstrass_degree = 0;
      unit.distinguished_part = running;
      unit.valid_mod_degree = report.valid_mod_degree;
      report.divisor = std::move(unit);
      return report;
    }
  }
  DistinguishedData div;
  div.weierstrass_degree = poly::degree(running);
  div.valid_mod_degree = report.valid_mod_degree;
  long prec = kInfiniteValuation;
  for (int k = 0; k + 1 < static_cast<int>(running.size()); ++k) {
    const auto& c = running[static_cast<std::size_t>(k)];
    prec = std::min(prec, c.absolute_precision());
    if (!c.is_zero() && c.valuation() < 1)
      div.diagnostic = "gcd is not distinguished at x^" + std::to_string(k);
  }
  div.valid_to_precision = prec;
  div.distinguished_part = std::move(running);
  report.verdict = IdealVerdict::common_divisor;
  report.divisor = std::move(div);
  return report;
}

TruncatedSeries log_series_power(const PrecisionContext& ctx, int m) {
  if (m < 0) throw std::invalid_argument("log_series_power needs m >= 0");
  if (m == 0) return TruncatedSeries(ctx, {padic_int(ctx, 1)}, 0);
  Coeffs c(static_cast<std::size_t>(ctx.M), PadicNumber::zero(ctx.p, ctx.N));
  for (int n = 1; n < ctx.M; ++n)
    c[static_cast<std::size_t>(n)] = padic_rat(ctx, mpq_class(n % 2 == 1 ? 1 : -1, n));
  const TruncatedSeries log1p(ctx, c, kUnboundedFloor);
  TruncatedSeries r = log1p;
  for (int i = 1; i < m; ++i) r = r * log1p;
  return r;
}

BoundednessReport boundedness_floor(const TruncatedSeries& f) {
  BoundednessReport rep;
  long running = kInfiniteValuation;
  for (int k = 0; k < f.length(); ++k) {
    const PadicNumber& c = f[k];
    if (c.is_zero()) continue;
    const long v = c.valuation();
    rep.profile.emplace_back(k, v);
    if (running != kInfiniteValuation && v < running && v < 0) rep.evidence.push_back(k);
    running = std::min(running, v);
  }
  rep.floor = running;
  rep.bounded = rep.evidence.size() < 2;
  return rep;
}

}  // namespace iwasawa
