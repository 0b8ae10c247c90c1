#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iwasawa/integer_matrix.hpp"

namespace iwasawa {

/// Z_p-linear map Z_p^m -> Z_p^n given by an exact n x m integer matrix.
struct FreeModuleMap {
  std::size_t domain_rank = 0;
  std::size_t codomain_rank = 0;
  IntMatrix matrix;

  /// Throws std::invalid_argument when the rows are ragged.
  static FreeModuleMap from_matrix(std::size_t domain_rank, IntMatrix matrix);
  static FreeModuleMap identity(std::size_t rank);
  static FreeModuleMap zero(std::size_t domain_rank, std::size_t codomain_rank);
  bool operator==(const FreeModuleMap&) const = default;
};

/// g after f.  Throws std::invalid_argument when the ranks do not match.
FreeModuleMap compose(const FreeModuleMap& g, const FreeModuleMap& f);

/// The dual map on Hom(-, Q_p) in dual bases: the transpose.
FreeModuleMap dual_map(const FreeModuleMap& f);

struct DualData {
  FreeModuleMap dual;
  /// Minimal valuation of the image of each basis vector (columns);
  /// nullopt for a zero column.
  std::vector<std::optional<int>> column_valuations;
  std::vector<std::optional<int>> dual_column_valuations;
  /// Valuations of the nonzero elementary divisors over Z_p, ascending.
  std::vector<int> elementary_divisors;
};

DualData dual_data(const FreeModuleMap& f, int p);

struct DoubleDualReport {
  std::size_t rank = 0;
  /// Matrix of the evaluation map M -> M^dd in the chosen basis of M and the
  /// double dual of the standard basis.
  IntMatrix evaluation;
  /// Evaluation matrix when M^dd also uses the double dual of the chosen basis.
  IntMatrix evaluation_consistent;
  bool consistent_is_identity = false;
  /// The evaluation matrix equals the basis change.
  bool conjugates_by_basis = false;
};

/// basis: images of the standard basis under a permutation (empty means
/// the identity).  Throws std::invalid_argument on a non-permutation.
DoubleDualReport double_dual_check(std::size_t rank, const std::vector<std::size_t>& basis = {});

struct ExactnessReport {
  int p = 2;
  std::size_t domain_rank = 0;
  std::size_t codomain_rank = 0;
  std::size_t rank = 0;
  std::vector<int> elementary_divisors;
  /// rank of ker(f).
  std::size_t kernel_rank = 0;
  /// rank of M^d / saturation(f^d(N^d)).
  std::size_t dual_quotient_rank = 0;
  bool kernel_identity = false;
  /// rank of coker(f) modulo torsion.
  std::size_t cokernel_cot_rank = 0;
  /// rank of ker(f^d).
  std::size_t dual_kernel_rank = 0;
  bool cokernel_identity = false;
  /// Surjective over Z_p: full row rank and every divisor a unit.
  bool surjective = false;
  /// f^d preserves the sup norm: its reduction mod p is injective.
  bool dual_isometry = false;
  bool isometry_biconditional = false;
  std::string summary() const;
};

ExactnessReport exactness_suite(const FreeModuleMap& f, int p);

}  // namespace iwasawa
