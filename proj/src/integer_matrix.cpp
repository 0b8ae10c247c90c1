#include "iwasawa/integer_matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace iwasawa {

IntMatrix zero_matrix(std::size_t rows, std::size_t cols) {
  return IntMatrix(rows, std::vector<mpz_class>(cols, 0));
}

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix a = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1;
  return a;
}

std::size_t column_count(const IntMatrix& a) { return a.empty() ? 0 : a.front().size(); }

IntMatrix transpose(const IntMatrix& a) {
  const std::size_t r = a.size(), c = column_count(a);
  IntMatrix t = zero_matrix(c, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) t[j][i] = a[i][j];
  return t;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t inner = column_count(a);
  if (inner != b.size()) throw std::invalid_argument("matrix shapes do not compose");
  const std::size_t cols = column_count(b);
  IntMatrix c = zero_matrix(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

SmithForm smith_normal_form(const IntMatrix& input) {
  IntMatrix a = input;
  const std::size_t rows = a.size(), cols = column_count(a);
  SmithForm out;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pr == rows || abs(a[i][j]) < abs(a[pr][pc]))) pr = i, pc = j;
      if (pr == rows) break;
      std::swap(a[t], a[pr]);
      for (auto& row : a) std::swap(row[t], row[pc]);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        const mpz_class q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        const mpz_class q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      // The pivot must divide the whole trailing block.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) a[t][k] += a[i][k];
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a[t][t] == 0) break;
    out.divisors.push_back(abs(a[t][t]));
  }
  out.rank = out.divisors.size();
  return out;
}

std::size_t rational_rank(const IntMatrix& input) {
  IntMatrix a = input;
  const std::size_t rows = a.size(), cols = column_count(a);
  std::size_t rank = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[rank], a[pivot]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = a[i][j] * a[rank][c] - a[i][c] * a[rank][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

long mod_reduce(long a, long m) {
  const long r = a % m;
  return r < 0 ? r + m : r;
}

long mod_pow(long a, long e, long m) {
  __int128 result = 1 % m, base = mod_reduce(a, m);
  while (e > 0) {
    if (e & 1) result = result * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return static_cast<long>(result);
}

long mod_inverse(long a, long m) {
  long g = m, x = 0, r = mod_reduce(a, m), y = 1;
  while (r != 0) {
    const long q = g / r;
    g -= q * r;
    std::swap(g, r);
    x -= q * y;
    std::swap(x, y);
  }
  if (g != 1) throw std::domain_error("not a unit modulo m");
  return mod_reduce(x, m);
}

std::size_t rank_mod_p(const IntMatrix& a, long p) {
  FpSubspace span(p, column_count(a));
  for (const auto& row : a) {
    std::vector<long> v(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) v[j] = mpz_fdiv_ui(row[j].get_mpz_t(), static_cast<unsigned long>(p));
    span.insert(std::move(v));
  }
  return span.dimension();
}

FpSubspace::FpSubspace(long p, std::size_t ambient_dim) : p_(p), n_(ambient_dim) {
  if (p < 2) throw std::invalid_argument("modulus must be at least 2");
}

void FpSubspace::reduce(std::vector<long>& v) const {
  if (v.size() != n_) throw std::invalid_argument("vector length differs from ambient dimension");
  for (auto& x : v) x = mod_reduce(x, p_);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const long f = v[pivots_[r]];
    if (f == 0) continue;
    const auto& row = rows_[r];
    for (std::size_t j = pivots_[r]; j < n_; ++j)
      if (row[j] != 0) v[j] = mod_reduce(v[j] - f * row[j], p_);
  }
}

bool FpSubspace::contains(std::vector<long> v) const {
  reduce(v);
  return std::all_of(v.begin(), v.end(), [](long x) { return x == 0; });
}

bool FpSubspace::insert(std::vector<long> v) {
  reduce(v);
  const auto it = std::find_if(v.begin(), v.end(), [](long x) { return x != 0; });
  if (it == v.end()) return false;
  const std::size_t pivot = static_cast<std::size_t>(it - v.begin());
  const long inv = mod_inverse(v[pivot], p_);
  for (auto& x : v) x = x * inv % p_;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const long f = rows_[r][pivot];
    if (f == 0) continue;
    for (std::size_t j = pivot; j < n_; ++j)
      if (v[j] != 0) rows_[r][j] = mod_reduce(rows_[r][j] - f * v[j], p_);
  }
  const auto pos = static_cast<std::size_t>(std::lower_bound(pivots_.begin(), pivots_.end(), pivot) - pivots_.begin());
  rows_.insert(rows_.begin() + static_cast<long>(pos), std::move(v));
  pivots_.insert(pivots_.begin() + static_cast<long>(pos), pivot);
  return true;
}

}  // namespace iwasawa
