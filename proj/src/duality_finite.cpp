#include "iwasawa/duality_finite.hpp"

#include <algorithm>
#include <stdexcept>

#include "iwasawa/padic.hpp"

namespace iwasawa {

namespace {

std::vector<std::optional<int>> column_valuations(const IntMatrix& a, std::size_t cols, int p) {
  std::vector<std::optional<int>> out(cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (const auto& row : a) {
      if (row[j] == 0) continue;
      const int v = valuation_of(row[j], p);
      if (!out[j] || v < *out[j]) out[j] = v;
    }
  return out;
}

std::vector<int> padic_divisors(const SmithForm& snf, int p) {
  std::vector<int> out;
  for (const auto& d : snf.divisors) out.push_back(valuation_of(d, p));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

FreeModuleMap FreeModuleMap::from_matrix(std::size_t domain_rank, IntMatrix matrix) {
  for (const auto& row : matrix)
    if (row.size() != domain_rank) throw std::invalid_argument("matrix rows must have domain_rank entries");
  FreeModuleMap f;
  f.domain_rank = domain_rank;
  f.codomain_rank = matrix.size();
  f.matrix = std::move(matrix);
  return f;
}

FreeModuleMap FreeModuleMap::identity(std::size_t rank) { return from_matrix(rank, identity_matrix(rank)); }

FreeModuleMap FreeModuleMap::zero(std::size_t domain_rank, std::size_t codomain_rank) {
  return from_matrix(domain_rank, zero_matrix(codomain_rank, domain_rank));
}

FreeModuleMap compose(const FreeModuleMap& g, const FreeModuleMap& f) {
  if (g.domain_rank != f.codomain_rank) throw std::invalid_argument("maps do not compose");
  if (f.domain_rank == 0 || g.codomain_rank == 0) return FreeModuleMap::zero(f.domain_rank, g.codomain_rank);
  if (f.codomain_rank == 0) return FreeModuleMap::zero(f.domain_rank, g.codomain_rank);
  return FreeModuleMap::from_matrix(f.domain_rank, multiply(g.matrix, f.matrix));
}

FreeModuleMap dual_map(const FreeModuleMap& f) {
  IntMatrix t = zero_matrix(f.domain_rank, f.codomain_rank);
  for (std::size_t i = 0; i < f.codomain_rank; ++i)
    for (std::size_t j = 0; j < f.domain_rank; ++j) t[j][i] = f.matrix[i][j];
  return FreeModuleMap::from_matrix(f.codomain_rank, std::move(t));
}

DualData dual_data(const FreeModuleMap& f, int p) {
  DualData out;
  out.dual = dual_map(f);
  out.column_valuations = column_valuations(f.matrix, f.domain_rank, p);
  out.dual_column_valuations = column_valuations(out.dual.matrix, out.dual.domain_rank, p);
  out.elementary_divisors = padic_divisors(smith_normal_form(f.matrix), p);
  return out;
}

DoubleDualReport double_dual_check(std::size_t rank, const std::vector<std::size_t>& basis) {
  std::vector<std::size_t> perm = basis;
  if (perm.empty())
    for (std::size_t i = 0; i < rank; ++i) perm.push_back(i);
  std::vector<std::size_t> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted.size() != rank || sorted[i] != i) throw std::invalid_argument("basis must be a permutation of 0..rank-1");

  // Chosen basis b_i = e_perm[i]; evaluation sends b_i to (l -> l(b_i)).
  IntMatrix change = zero_matrix(rank, rank);
  for (std::size_t i = 0; i < rank; ++i) change[perm[i]][i] = 1;
  DoubleDualReport out;
  out.rank = rank;
  out.evaluation = zero_matrix(rank, rank);
  out.evaluation_consistent = zero_matrix(rank, rank);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j) {
      // Coordinate of ev(b_i) on e_j^** is e_j^*(b_i); on b_j^** it is b_j^*(b_i).
      out.evaluation[j][i] = change[j][i];
      out.evaluation_consistent[j][i] = perm[j] == perm[i] ? 1 : 0;
    }
  out.consistent_is_identity = out.evaluation_consistent == identity_matrix(rank);
  out.conjugates_by_basis = out.evaluation == change;
  return out;
}

ExactnessReport exactness_suite(const FreeModuleMap& f, int p) {
  ExactnessReport out;
  out.p = p;
  out.domain_rank = f.domain_rank;
  out.codomain_rank = f.codomain_rank;
  const FreeModuleMap fd = dual_map(f);
  const bool degenerate = f.domain_rank == 0 || f.codomain_rank == 0;

  const SmithForm snf = degenerate ? SmithForm{} : smith_normal_form(f.matrix);
  out.rank = snf.rank;
  out.elementary_divisors = padic_divisors(snf, p);
  out.kernel_rank = f.domain_rank - snf.rank;
  out.cokernel_cot_rank = f.codomain_rank - snf.rank;

  // The dual side goes through independent rank computations.
  const std::size_t dual_rank = degenerate ? 0 : rational_rank(fd.matrix);
  out.dual_quotient_rank = f.domain_rank - dual_rank;
  out.dual_kernel_rank = f.codomain_rank - dual_rank;
  out.kernel_identity = out.kernel_rank == out.dual_quotient_rank;
  out.cokernel_identity = out.cokernel_cot_rank == out.dual_kernel_rank;

  out.surjective = snf.rank == f.codomain_rank &&
                   std::all_of(out.elementary_divisors.begin(), out.elementary_divisors.end(),
                               [](int v) { return v == 0; });
  const std::size_t reduced_rank = degenerate ? 0 : rank_mod_p(fd.matrix, p);
  out.dual_isometry = reduced_rank == f.codomain_rank;
  out.isometry_biconditional = out.surjective == out.dual_isometry;
  return out;
}

std::string ExactnessReport::summary() const {
  std::string s = surjective ? "surjective" : "not surjective";
  s += dual_isometry ? " / dual isometry" : " / not isometry";
  return s;
}

}  // namespace iwasawa
