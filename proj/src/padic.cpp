#include "iwasawa/padic.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace iwasawa {

PrecisionContext PrecisionContext::make(int p, int N, int M) {
  if (!is_prime(p)) throw PadicError("p = " + std::to_string(p) + " is not prime");
  if (N < 1) throw PadicError("precision N must be positive");
  if (M < 1) throw PadicError("truncation degree M must be positive");
  return PrecisionContext{p, N, M};
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

const mpz_class& pow_p(int p, int k) {
  thread_local std::unordered_map<int, std::deque<mpz_class>> cache;
  if (k < 0) throw PadicError("negative exponent in pow_p");
  auto& powers = cache[p];
  if (powers.empty()) powers.emplace_back(1);
  while (static_cast<int>(powers.size()) <= k) powers.push_back(powers.back() * p);
  return powers[static_cast<std::size_t>(k)];
}

int valuation_of(const mpz_class& n, int p) {
  if (n == 0) throw PadicError("valuation of zero integer");
  mpz_class rest;
  mpz_class prime(p);
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

long factorial_valuation(long n, int p) {
  long v = 0;
  for (long q = n / p; q > 0; q /= p) v += q;
  return v;
}

namespace {

mpz_class mod_nonneg(const mpz_class& n, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
  return r;
}

void check_same_prime(const PadicNumber& a, const PadicNumber& b) {
  if (a.prime() != b.prime() && a.prime() != 0 && b.prime() != 0)
    throw PadicError("mixing p-adic numbers of different primes");
}

int merged_prime(const PadicNumber& a, const PadicNumber& b) {
  return a.prime() != 0 ? a.prime() : b.prime();
}

int merged_cap(const PadicNumber& a, const PadicNumber& b) {
  if (a.prime() == 0) return b.cap();
  if (b.prime() == 0) return a.cap();
  return std::min(a.cap(), b.cap());
}

}  // namespace

PadicNumber PadicNumber::zero(int p, int cap) {
  return PadicNumber(p, cap, Kind::exact_zero, 0, 0, mpz_class(0));
}

PadicNumber PadicNumber::big_oh(int p, int cap, long absolute_precision) {
  if (absolute_precision == kInfiniteValuation) return zero(p, cap);
  return PadicNumber(p, cap, Kind::inexact_zero, absolute_precision, 0, mpz_class(0));
}

PadicNumber PadicNumber::one(int p, int cap) { return from_integer(p, cap, mpz_class(1)); }

PadicNumber PadicNumber::from_integer(int p, int cap, const mpz_class& n) {
  if (n == 0) return zero(p, cap);
  return normalize(p, cap, 0, n, valuation_of(n, p) + static_cast<long>(cap));
}

PadicNumber PadicNumber::from_rational(int p, int cap, const mpq_class& q) {
  if (q == 0) return zero(p, cap);
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  mpz_class prime(p);
  const long vn = mpz_remove(num.get_mpz_t(), num.get_mpz_t(), prime.get_mpz_t());
  const long vd = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), prime.get_mpz_t());
  const mpz_class& modulus = pow_p(p, cap);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t());
  return PadicNumber(p, cap, Kind::nonzero, vn - vd, cap, mod_nonneg(num * inv, modulus));
}

PadicNumber PadicNumber::from_parts(int p, int cap, long valuation, const mpz_class& unit,
                                    int known_precision) {
  if (known_precision <= 0) return big_oh(p, cap, valuation);
  const int prec = std::min(known_precision, cap);
  mpz_class u = mod_nonneg(unit, pow_p(p, prec));
  if (mpz_divisible_ui_p(u.get_mpz_t(), static_cast<unsigned long>(p)))
    throw PadicError("unit part must be prime to p");
  return PadicNumber(p, cap, Kind::nonzero, valuation, prec, std::move(u));
}

PadicNumber PadicNumber::normalize(int p, int cap, long base, mpz_class n, long abs) {
  if (abs == kInfiniteValuation) {
    if (n == 0) return zero(p, cap);
    abs = base + valuation_of(n, p) + cap;
  }
  const long span = abs - base;
  if (span <= 0) return big_oh(p, cap, abs);
  n = mod_nonneg(n, pow_p(p, static_cast<int>(span)));
  if (n == 0) return big_oh(p, cap, abs);
  mpz_class prime(p);
  const long w = mpz_remove(n.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t());
  const long v = base + w;
  const int prec = static_cast<int>(std::min<long>(abs - v, cap));
  if (prec < static_cast<long>(span - w)) n = mod_nonneg(n, pow_p(p, prec));
  return PadicNumber(p, cap, Kind::nonzero, v, prec, std::move(n));
}

long PadicNumber::valuation() const {
  switch (kind_) {
    case Kind::exact_zero:
      return kInfiniteValuation;
    case Kind::inexact_zero:
    case Kind::nonzero:
      return val_;
  }
  return val_;
}

long PadicNumber::absolute_precision() const {
  switch (kind_) {
    case Kind::exact_zero:
      return kInfiniteValuation;
    case Kind::inexact_zero:
      return val_;
    case Kind::nonzero:
      return val_ + prec_;
  }
  return val_;
}

mpq_class PadicNumber::lift() const {
  if (kind_ != Kind::nonzero) return mpq_class(0);
  if (val_ >= 0) return mpq_class(unit_ * pow_p(p_, static_cast<int>(val_)));
  mpq_class q(unit_, pow_p(p_, static_cast<int>(-val_)));
  q.canonicalize();
  return q;
}

mpz_class PadicNumber::residue(int k) const {
  if (k <= 0 || kind_ == Kind::exact_zero) return mpz_class(0);
  if (absolute_precision() < k)
    throw PadicError("residue mod p^" + std::to_string(k) + " exceeds known precision of " +
                     to_string());
  if (kind_ == Kind::inexact_zero) return mpz_class(0);
  if (val_ < 0) throw PadicError("residue of a non-integral value " + to_string());
  if (val_ >= k) return mpz_class(0);
  return mod_nonneg(unit_ * pow_p(p_, static_cast<int>(val_)), pow_p(p_, k));
}

PadicNumber PadicNumber::with_absolute_precision(long k) const {
  if (k >= absolute_precision()) return *this;
  if (kind_ != Kind::nonzero || k <= val_) return big_oh(p_, cap_, k);
  const int prec = static_cast<int>(k - val_);
  return PadicNumber(p_, cap_, kind_, val_, prec, mod_nonneg(unit_, pow_p(p_, prec)));
}

PadicNumber PadicNumber::operator-() const {
  if (kind_ != Kind::nonzero) return *this;
  return PadicNumber(p_, cap_, kind_, val_, prec_, mod_nonneg(-unit_, pow_p(p_, prec_)));
}

PadicNumber PadicNumber::inverse() const {
  return PadicNumber::one(p_, cap_) / *this;
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
  check_same_prime(a, b);
  if (a.is_exact_zero()) return b;
  if (b.is_exact_zero()) return a;
  const int p = merged_prime(a, b);
  const int cap = merged_cap(a, b);
  const long abs = std::min(a.absolute_precision(), b.absolute_precision());
  const bool use_a = a.kind_ == PadicNumber::Kind::nonzero && a.val_ < abs;
  const bool use_b = b.kind_ == PadicNumber::Kind::nonzero && b.val_ < abs;
  if (!use_a && !use_b) return PadicNumber::big_oh(p, cap, abs);
  long base = abs;
  if (use_a) base = std::min(base, a.val_);
  if (use_b) base = std::min(base, b.val_);
  mpz_class n = 0;
  if (use_a) n += a.unit_ * pow_p(p, static_cast<int>(a.val_ - base));
  if (use_b) n += b.unit_ * pow_p(p, static_cast<int>(b.val_ - base));
  return PadicNumber::normalize(p, cap, base, std::move(n), abs);
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
  check_same_prime(a, b);
  const int p = merged_prime(a, b);
  const int cap = merged_cap(a, b);
  if (a.is_exact_zero() || b.is_exact_zero()) return PadicNumber::zero(p, cap);
  if (a.is_zero() || b.is_zero()) return PadicNumber::big_oh(p, cap, a.valuation() + b.valuation());
  const int prec = std::min(a.prec_, b.prec_);
  mpz_class u = mod_nonneg(a.unit_ * b.unit_, pow_p(p, prec));
  return PadicNumber(p, cap, PadicNumber::Kind::nonzero, a.val_ + b.val_, prec, std::move(u));
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
  check_same_prime(a, b);
  const int p = merged_prime(a, b);
  const int cap = merged_cap(a, b);
  if (b.is_exact_zero()) throw PadicError("division by exact zero");
  if (b.is_zero()) throw PadicError("division by a value indistinguishable from zero: " + b.to_string());
  if (a.is_exact_zero()) return PadicNumber::zero(p, cap);
  if (a.is_zero()) return PadicNumber::big_oh(p, cap, a.val_ - b.val_);
  const int prec = std::min(a.prec_, b.prec_);
  const mpz_class& modulus = pow_p(p, prec);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), b.unit_.get_mpz_t(), modulus.get_mpz_t());
  return PadicNumber(p, cap, PadicNumber::Kind::nonzero, a.val_ - b.val_, prec,
                     mod_nonneg(a.unit_ * inv, modulus));
}

bool PadicNumber::same_representation(const PadicNumber& b) const {
  return p_ == b.p_ && kind_ == b.kind_ && val_ == b.val_ && prec_ == b.prec_ && unit_ == b.unit_;
}

std::string PadicNumber::to_string() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::exact_zero:
      return "0";
    case Kind::inexact_zero:
      out << "O(" << p_ << "^" << val_ << ")";
      return out.str();
    case Kind::nonzero:
      break;
  }
  out << p_ << "^" << val_ << " * (";
  mpz_class rest = unit_;
  for (int i = 0; i < prec_; ++i) {
    mpz_class digit;
    mpz_fdiv_qr_ui(rest.get_mpz_t(), digit.get_mpz_t(), rest.get_mpz_t(),
                   static_cast<unsigned long>(p_));
    if (i > 0) out << " + ";
    out << digit.get_str();
    if (i == 1) out << "*" << p_;
    if (i > 1) out << "*" << p_ << "^" << i;
  }
  out << ") + O(" << p_ << "^" << (val_ + prec_) << ")";
  return out.str();
}

namespace {

struct Cursor {
  std::string_view s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool accept(std::string_view tok) {
    skip_ws();
    if (s.substr(i, tok.size()) == tok) {
      i += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!accept(tok))
      throw PadicError("malformed p-adic literal '" + std::string(s) + "': expected '" +
                       std::string(tok) + "'");
  }
  long integer() {
    skip_ws();
    std::size_t start = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
      throw PadicError("malformed p-adic literal '" + std::string(s) + "': expected integer");
    return std::stol(std::string(s.substr(start, i - start)));
  }
  bool done() {
    skip_ws();
    return i == s.size();
  }
};

}  // namespace

PadicNumber PadicNumber::parse(std::string_view text, int expected_p, int cap) {
  Cursor c{text};
  c.skip_ws();
  if (c.accept("O(")) {
    const long p = c.integer();
    c.expect("^");
    const long k = c.integer();
    c.expect(")");
    if (!c.done()) throw PadicError("trailing text in p-adic literal");
    if (p != expected_p) throw PadicError("p-adic literal has base " + std::to_string(p));
    return big_oh(static_cast<int>(p), cap, k);
  }
  {
    Cursor probe = c;
    if (probe.accept("0") && probe.done()) return zero(expected_p, cap);
  }
  const long p = c.integer();
  if (p != expected_p) throw PadicError("p-adic literal has base " + std::to_string(p));
  c.expect("^");
  const long v = c.integer();
  c.expect("*");
  c.expect("(");
  std::vector<long> digits;
  for (int idx = 0;; ++idx) {
    const long d = c.integer();
    if (d < 0 || d >= p) throw PadicError("digit out of range in p-adic literal");
    if (idx >= 1) {
      c.expect("*");
      if (c.integer() != p) throw PadicError("inconsistent base in p-adic literal");
      if (idx >= 2) {
        c.expect("^");
        if (c.integer() != idx) throw PadicError("digit exponents out of order");
      }
    }
    digits.push_back(d);
    if (c.accept(")")) break;
    c.expect("+");
  }
  c.expect("+");
  c.expect("O(");
  if (c.integer() != p) throw PadicError("inconsistent base in p-adic literal");
  c.expect("^");
  const long k = c.integer();
  c.expect(")");
  if (!c.done()) throw PadicError("trailing text in p-adic literal");
  if (k != v + static_cast<long>(digits.size()))
    throw PadicError("O-term disagrees with digit count in p-adic literal");
  if (digits.front() == 0) throw PadicError("leading unit digit must be nonzero");
  mpz_class unit = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) unit = unit * p + *it;
  const int prec = static_cast<int>(digits.size());
  if (prec > cap) throw PadicError("literal carries more digits than the precision cap");
  return PadicNumber(static_cast<int>(p), cap, Kind::nonzero, v, prec, std::move(unit));
}

void PadicAccumulator::add_scaled(long v, const mpz_class& u, long abs) {
  abs_ = std::min(abs_, abs);
  if (v >= abs_) return;
  if (!any_) {
    any_ = true;
    base_ = v;
    sum_ = u;
    return;
  }
  if (v < base_) {
    sum_ *= pow_p(p_, static_cast<int>(base_ - v));
    base_ = v;
  }
  sum_ += u * pow_p(p_, static_cast<int>(v - base_));
}

void PadicAccumulator::add(const PadicNumber& a) {
  check_same_prime(PadicNumber::zero(p_, cap_), a);
  switch (a.kind_) {
    case PadicNumber::Kind::exact_zero:
      return;
    case PadicNumber::Kind::inexact_zero:
      abs_ = std::min(abs_, a.val_);
      return;
    case PadicNumber::Kind::nonzero:
      cap_ = std::min(cap_, a.cap_);
      add_scaled(a.val_, a.unit_, a.val_ + a.prec_);
  }
}

void PadicAccumulator::add_product(const PadicNumber& a, const PadicNumber& b) {
  if (a.is_exact_zero() || b.is_exact_zero()) return;
  if (a.is_zero() || b.is_zero()) {
    abs_ = std::min(abs_, a.valuation() + b.valuation());
    return;
  }
  cap_ = std::min({cap_, a.cap_, b.cap_});
  const long v = a.val_ + b.val_;
  const long abs = v + std::min(a.prec_, b.prec_);
  if (v >= std::min(abs_, abs)) {
    abs_ = std::min(abs_, abs);
    return;
  }
  add_scaled(v, a.unit_ * b.unit_, abs);
}

PadicNumber PadicAccumulator::result() const {
  if (!any_) return PadicNumber::big_oh(p_, cap_, abs_);
  return PadicNumber::normalize(p_, cap_, base_, sum_, abs_);
}

}  // namespace iwasawa
