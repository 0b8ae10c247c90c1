#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "iwasawa/integer_matrix.hpp"
#include "iwasawa/padic.hpp"
#include "iwasawa/torus_characters.hpp"

namespace iwasawa {

/// Largest group order enumerate_group accepts.
inline constexpr long kMaxGroupOrder = 10'000'000;
/// Largest group algebra dimension the ideal-power routines accept.
inline constexpr std::size_t kMaxAlgebraDimension = 10'000;

/// Reduction level Z/p^n.
struct Level {
  int p = 2;
  int n = 1;
  long modulus = 2;

  /// Throws std::invalid_argument unless p is prime, n >= 1 and p^n fits.
  static Level make(int p, int n);
  bool operator==(const Level&) const = default;
};

/// (p^2 - 1)(p^2 - p) p^(4(n-1)).
long gl2_order(const Level& level);

/// Element [[a, b], [c, d]] of GL_2(Z/p^n), entries reduced into [0, p^n).
struct GL2ModElement {
  Level level;
  std::array<long, 4> entries{};

  /// Throws std::invalid_argument when the determinant is not a unit.
  static GL2ModElement make(const Level& level, long a, long b, long c, long d);
  static GL2ModElement identity(const Level& level);
  /// [[0, 1], [1, 0]].
  static GL2ModElement weyl(const Level& level);
  /// [[1, 0], [1, 1]].
  static GL2ModElement lower_unipotent(const Level& level);
  /// [[1, p], [0, 1]], the generator of the upper congruence unipotents.
  static GL2ModElement upper_congruence(const Level& level);
  static GL2ModElement diagonal(const Level& level, long a, long d);

  long a() const { return entries[0]; }
  long b() const { return entries[1]; }
  long c() const { return entries[2]; }
  long d() const { return entries[3]; }
  long determinant() const;
  GL2ModElement inverse() const;
  /// Injective encoding of the entries, increasing in lexicographic order.
  long key() const;
  std::string to_string() const;

  friend GL2ModElement operator*(const GL2ModElement& x, const GL2ModElement& y);
  friend bool operator==(const GL2ModElement& x, const GL2ModElement& y) { return x.entries == y.entries; }
  friend bool operator<(const GL2ModElement& x, const GL2ModElement& y) { return x.entries < y.entries; }
};

/// A finite subgroup of GL_2(Z/p^n), elements in lexicographic order.
class FiniteGroup {
 public:
  FiniteGroup(const Level& level, std::vector<GL2ModElement> elements);

  const Level& level() const { return level_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<GL2ModElement>& elements() const { return elements_; }
  const GL2ModElement& operator[](std::size_t i) const { return elements_[i]; }
  std::optional<std::size_t> find(const GL2ModElement& g) const;
  /// Throws std::invalid_argument when g is not in the group.
  std::size_t index_of(const GL2ModElement& g) const;
  bool contains(const GL2ModElement& g) const { return find(g).has_value(); }
  bool is_normal_in(const FiniteGroup& ambient) const;

 private:
  Level level_;
  std::vector<GL2ModElement> elements_;
  std::unordered_map<long, std::size_t> index_;
};

/// All of GL_2(Z/p^n).  Throws std::length_error above kMaxGroupOrder.
FiniteGroup enumerate_group(const Level& level);

/// Closure of gens under multiplication (finite, so a subgroup).
FiniteGroup generated_subgroup(const Level& level, const std::vector<GL2ModElement>& gens);

/// Kernel of reduction GL_2(Z/p^n) -> GL_2(Z/p).
std::vector<GL2ModElement> principal_congruence_generators(const Level& level);

/// Top-right entry divisible by p: the image of the Iwahori subgroup.
bool in_iwahori(const GL2ModElement& g);

struct IwahoriFactors {
  /// [[1, x], [0, 1]] with x = 0 mod p.
  GL2ModElement u_minus;
  /// Lower triangular.
  GL2ModElement p_part;
};

/// b = u_minus * p_part with x = b12 / b22.  Throws std::invalid_argument
/// when b is not in the Iwahori image.
IwahoriFactors iwahori_factor(const GL2ModElement& b);

enum class BruhatCell { cell_B, cell_BwP };
std::string to_string(BruhatCell c);
BruhatCell bruhat_classify(const GL2ModElement& g);

struct BruhatCensus {
  long order = 0;
  long cell_b = 0;
  long cell_bwp = 0;
  /// Elements of the Iwahori image whose factors fail to re-multiply or have
  /// the wrong shape.
  long factor_failures = 0;
};

BruhatCensus bruhat_census(const FiniteGroup& group);

/// A subgroup H given by generators; its augmentation ideal is generated by
/// the differences h - 1.
struct IdealData {
  std::vector<GL2ModElement> subgroup_generators;
};

enum class NilpotencyMode { char_p, pi_containment };
std::string to_string(NilpotencyMode m);

struct NilpotencyReport {
  NilpotencyMode mode = NilpotencyMode::char_p;
  std::size_t ambient_order = 0;
  std::size_t subgroup_order = 0;
  bool p_subgroup = false;
  /// Least m found; nullopt when the powers stabilized at a nonzero ideal or
  /// max_index was reached.
  std::optional<int> index;
  /// char_p: dimension of the reduced ideal powers I^1, I^2, ...
  /// pi_containment: number of distinct products of k generator differences.
  std::vector<std::size_t> power_sizes;
  std::string warning;
};

/// Nilpotency index of the augmentation ideal of H inside the group ring of
/// ambient.  char_p: least m with I^m = 0 over Z/p.  pi_containment: least m
/// with every product of m generator differences in p Z[ambient], by exact
/// integer expansion.  H must be normal in ambient.
NilpotencyReport ideal_power_nilpotency(const FiniteGroup& ambient, const IdealData& h, NilpotencyMode mode,
                                        int max_index = 64);

/// Group ring elements of Z[ambient] as coefficient vectors indexed like
/// ambient.elements().
using GroupRingVector = std::vector<long>;

GroupRingVector group_ring_unit(const FiniteGroup& ambient, const GL2ModElement& g);
GroupRingVector group_ring_product(const FiniteGroup& ambient, const GroupRingVector& x, const GroupRingVector& y);
/// (s_1 - 1)(s_2 - 1)...(s_m - 1).
GroupRingVector generator_difference_product(const FiniteGroup& ambient, const std::vector<GL2ModElement>& factors);

/// Free Z-module with the action of listed group elements.
struct FiniteModule {
  std::size_t rank = 0;
  std::vector<GL2ModElement> elements;
  std::vector<IntMatrix> matrices;
};

/// The regular module Z[group] with left multiplication by the listed elements.
FiniteModule regular_module(const FiniteGroup& group, const std::vector<GL2ModElement>& acting);

struct NakayamaReport {
  std::size_t module_rank = 0;
  /// Rank of M / I_H M over Z_p.
  std::size_t coinvariant_rank = 0;
  /// Nontrivial elementary divisors over Z_p, as p-adic valuations.
  std::vector<int> torsion_valuations;
  /// Invariant factors of the presentation over Z.
  std::vector<mpz_class> integer_divisors;
  /// Corank of Hom(M / I_H M, Q_p/Z_p), from the transposed presentation.
  std::size_t dual_corank = 0;
  bool ranks_agree = false;
};

/// Throws std::invalid_argument when an H generator has no action matrix or
/// the action data are inconsistent (wrong shape, identity acting nontrivially,
/// non-invertible matrix).
NakayamaReport nakayama_dimension(const FiniteModule& m, const IdealData& h);

using PadicMatrix = std::vector<std::vector<PadicNumber>>;

/// Determinant by elimination with maximal-unit pivoting.
PadicNumber padic_determinant(PadicMatrix a);

/// Coset representatives of the lower triangular image P in GL_2(Z/p^n):
/// [[1, x], [0, 1]] for x in Z/p^n, then [[0, 1], [1, e]] for e in pZ/p^n.
std::vector<GL2ModElement> coset_representatives(const Level& level);

/// Caches chi on the torus of GL_2(Z/p^n).
class LevelCharacter {
 public:
  /// Throws std::invalid_argument when the conductor exceeds the level or the
  /// primes differ.
  LevelCharacter(const TorusCharacter& chi, const Level& level);

  const TorusCharacter& character() const { return chi_; }
  const Level& level() const { return level_; }
  /// chi(diag(a, d)) for units mod p^n.
  const PadicNumber& eval(long a, long d) const;
  /// chi of the torus part of a lower triangular q.
  const PadicNumber& eval_lower(const GL2ModElement& q) const;
  LevelCharacter inverse() const;

 private:
  TorusCharacter chi_;
  Level level_;
  mutable std::vector<std::optional<PadicNumber>> table_;
};

/// Functions f on GL_2(Z/p^n) with f(g q) = chi(q^-1) f(g) for lower
/// triangular q, spanned by the f_i supported on g_i P with f_i(g_i) = 1.
class InducedModule {
 public:
  InducedModule(const TorusCharacter& chi, const Level& level);

  std::size_t dimension() const { return reps_.size(); }
  const Level& level() const { return chi_.level(); }
  const std::vector<GL2ModElement>& representatives() const { return reps_; }
  const LevelCharacter& character() const { return chi_; }
  /// f_i(g).
  PadicNumber evaluate(std::size_t i, const GL2ModElement& g) const;
  /// Matrix of left translation (g f)(x) = f(g^-1 x), from evaluations.
  PadicMatrix action_matrix(const GL2ModElement& g) const;
  /// g = g_j q with q lower triangular: returns (j, q).
  std::pair<std::size_t, GL2ModElement> coset_of(const GL2ModElement& g) const;

 private:
  LevelCharacter chi_;
  std::vector<GL2ModElement> reps_;
  std::unordered_map<long, std::size_t> rep_index_;
};

InducedModule build_induced(const TorusCharacter& chi, int n);

/// Coset module Z_p[G] (x) chi on the basis g_i (x) 1:
/// g g_i = g_j q gives g (g_i (x) 1) = chi(q) g_j (x) 1.
PadicMatrix coset_module_matrix(const InducedModule& basis, const LevelCharacter& twist, const GL2ModElement& g);

/// Generators of GL_2(Z/p^n): both elementary unipotents and diag(a, 1).
std::vector<GL2ModElement> gl2_generators(const Level& level);

struct PairingReport {
  std::size_t induced_dimension = 0;
  std::size_t dual_dimension = 0;
  PadicMatrix pairing;
  PadicNumber determinant;
  bool nonsingular = false;
  /// rho(g)^T Pairing sigma(g) = Pairing for every tested g.
  bool invariant = false;
  std::size_t elements_tested = 0;
  bool identity_acts_trivially = false;
  bool homomorphism_checked = false;
};

/// Pairs Ind(chi) with the coset module twisted by chi^-1 through
/// <f, g_j (x) 1> = f(g_j).
PairingReport dual_pairing_check(const InducedModule& ind);

struct SplitReport {
  std::size_t dimension = 0;
  /// Basis indices whose coset lies in the Iwahori cell.
  std::vector<std::size_t> n_block;
  std::vector<std::size_t> n_minus_block;
  bool w_maps_into_minus = false;
  bool identity_preserves_blocks = false;
  /// First group element (lexicographic) moving an n_block vector out of it.
  std::optional<GL2ModElement> witness;
  std::size_t witness_vector = 0;
};

/// Splits the coset module twisted by chi by Bruhat cell of the cosets.
SplitReport bruhat_module_split(const TorusCharacter& chi, int n);

}  // namespace iwasawa
