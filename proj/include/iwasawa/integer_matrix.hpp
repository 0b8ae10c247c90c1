#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace iwasawa {

/// Dense integer matrix, row major.  Every row has the same length.
using IntMatrix = std::vector<std::vector<mpz_class>>;

IntMatrix zero_matrix(std::size_t rows, std::size_t cols);
IntMatrix identity_matrix(std::size_t n);
IntMatrix transpose(const IntMatrix& a);
/// Throws std::invalid_argument on a shape mismatch.
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
std::size_t column_count(const IntMatrix& a);

struct SmithForm {
  /// Nonzero invariant factors d_1 | d_2 | ... | d_r, all positive.
  std::vector<mpz_class> divisors;
  std::size_t rank = 0;
};

SmithForm smith_normal_form(const IntMatrix& a);

/// Rank over Q by fraction-free (Bareiss) elimination.
std::size_t rational_rank(const IntMatrix& a);

/// Rank over Z/p.
std::size_t rank_mod_p(const IntMatrix& a, long p);

/// Incrementally grown row-reduced basis of a subspace of (Z/p)^n.
/// Rows are kept fully reduced, so the basis depends only on the span and
/// the order of insertion is irrelevant to the final result.
class FpSubspace {
 public:
  FpSubspace(long p, std::size_t ambient_dim);

  /// Adds v to the span; returns true iff the dimension grew.
  bool insert(std::vector<long> v);
  bool contains(std::vector<long> v) const;
  std::size_t dimension() const { return rows_.size(); }
  std::size_t ambient_dimension() const { return n_; }
  long prime() const { return p_; }
  const std::vector<std::vector<long>>& rows() const { return rows_; }

 private:
  void reduce(std::vector<long>& v) const;

  long p_;
  std::size_t n_;
  std::vector<std::vector<long>> rows_;
  std::vector<std::size_t> pivots_;
};

/// a^e mod m for m > 0, e >= 0.
long mod_pow(long a, long e, long m);
/// Inverse of a unit a modulo m; throws std::domain_error otherwise.
long mod_inverse(long a, long m);
/// Representative of a in [0, m).
long mod_reduce(long a, long m);

}  // namespace iwasawa
