#include "iwasawa/finite_level.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "iwasawa/padic_functions.hpp"

namespace iwasawa {

namespace {

constexpr long kMaxModulus = 50'000;
constexpr std::size_t kMaxProducts = 200'000;
constexpr std::size_t kFullInvarianceOrder = 500;

bool is_unit_mod_p(long x, int p) { return x % p != 0; }

bool is_power_of(std::size_t n, int p) {
  while (n > 1 && n % static_cast<std::size_t>(p) == 0) n /= static_cast<std::size_t>(p);
  return n == 1;
}

PadicMatrix padic_zero_matrix(std::size_t rows, std::size_t cols, int p, int cap) {
  return PadicMatrix(rows, std::vector<PadicNumber>(cols, PadicNumber::zero(p, cap)));
}

PadicMatrix padic_multiply(const PadicMatrix& a, const PadicMatrix& b) {
  const std::size_t inner = b.size(), cols = b.empty() ? 0 : b.front().size();
  const int p = a.front().front().prime(), cap = a.front().front().cap();
  PadicMatrix c = padic_zero_matrix(a.size(), cols, p, cap);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      PadicAccumulator acc(p, cap);
      for (std::size_t k = 0; k < inner; ++k)
        if (!a[i][k].is_exact_zero() && !b[k][j].is_exact_zero()) acc.add_product(a[i][k], b[k][j]);
      c[i][j] = acc.result();
    }
  return c;
}

PadicMatrix padic_transpose(const PadicMatrix& a) {
  PadicMatrix t(a.front().size(), std::vector<PadicNumber>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

bool padic_matrices_agree(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (!a[i][j].agrees_with(b[i][j])) return false;
  }
  return true;
}

bool is_padic_identity(const PadicMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      const PadicNumber& x = a[i][j];
      if (i == j ? !(x - PadicNumber::one(x.prime(), x.cap())).is_zero() : !x.is_zero()) return false;
    }
  return true;
}

std::vector<std::size_t> right_multiplication(const FiniteGroup& g, const GL2ModElement& s) {
  std::vector<std::size_t> perm(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) perm[i] = g.index_of(g[i] * s);
  return perm;
}

std::vector<GL2ModElement> nontrivial_generators(const FiniteGroup& ambient, const IdealData& h) {
  std::vector<GL2ModElement> out;
  for (const auto& s : h.subgroup_generators) {
    if (!(s.level == ambient.level()) || !ambient.contains(s))
      throw std::invalid_argument("subgroup generator " + s.to_string() + " is not in the ambient group");
    if (!(s == GL2ModElement::identity(ambient.level())) && std::find(out.begin(), out.end(), s) == out.end())
      out.push_back(s);
  }
  return out;
}

}  // namespace

Level Level::make(int p, int n) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (n < 1) throw std::invalid_argument("level must be at least 1");
  long q = 1;
  for (int i = 0; i < n; ++i) {
    q *= p;
    if (q > kMaxModulus) throw std::invalid_argument("p^n exceeds the supported modulus");
  }
  return Level{p, n, q};
}

long gl2_order(const Level& level) {
  const long p = level.p;
  long order = (p * p - 1) * (p * p - p);
  for (int i = 1; i < level.n; ++i) order *= p * p * p * p;
  return order;
}

GL2ModElement GL2ModElement::make(const Level& level, long a, long b, long c, long d) {
  const long q = level.modulus;
  GL2ModElement g{level, {mod_reduce(a, q), mod_reduce(b, q), mod_reduce(c, q), mod_reduce(d, q)}};
  if (!is_unit_mod_p(g.determinant(), level.p)) throw std::invalid_argument("determinant is not a unit");
  return g;
}

GL2ModElement GL2ModElement::identity(const Level& level) { return make(level, 1, 0, 0, 1); }
GL2ModElement GL2ModElement::weyl(const Level& level) { return make(level, 0, 1, 1, 0); }
GL2ModElement GL2ModElement::lower_unipotent(const Level& level) { return make(level, 1, 0, 1, 1); }
GL2ModElement GL2ModElement::upper_congruence(const Level& level) { return make(level, 1, level.p, 0, 1); }
GL2ModElement GL2ModElement::diagonal(const Level& level, long a, long d) { return make(level, a, 0, 0, d); }

long GL2ModElement::determinant() const {
  return mod_reduce(entries[0] * entries[3] - entries[1] * entries[2], level.modulus);
}

GL2ModElement GL2ModElement::inverse() const {
  const long q = level.modulus;
  const long di = mod_inverse(determinant(), q);
  return make(level, entries[3] * di, -entries[1] * di, -entries[2] * di, entries[0] * di);
}

long GL2ModElement::key() const {
  const long q = level.modulus;
  return ((entries[0] * q + entries[1]) * q + entries[2]) * q + entries[3];
}

std::string GL2ModElement::to_string() const {
  return "[[" + std::to_string(entries[0]) + "," + std::to_string(entries[1]) + "],[" + std::to_string(entries[2]) +
         "," + std::to_string(entries[3]) + "]]";
}

GL2ModElement operator*(const GL2ModElement& x, const GL2ModElement& y) {
  if (!(x.level == y.level)) throw std::invalid_argument("elements live at different levels");
  const long q = x.level.modulus;
  const auto& a = x.entries;
  const auto& b = y.entries;
  return GL2ModElement{x.level,
                       {(a[0] * b[0] + a[1] * b[2]) % q, (a[0] * b[1] + a[1] * b[3]) % q,
                        (a[2] * b[0] + a[3] * b[2]) % q, (a[2] * b[1] + a[3] * b[3]) % q}};
}

FiniteGroup::FiniteGroup(const Level& level, std::vector<GL2ModElement> elements)
    : level_(level), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  index_.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i].key(), i);
}

std::optional<std::size_t> FiniteGroup::find(const GL2ModElement& g) const {
  const auto it = index_.find(g.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FiniteGroup::index_of(const GL2ModElement& g) const {
  const auto i = find(g);
  if (!i) throw std::invalid_argument("element " + g.to_string() + " is not in the group");
  return *i;
}

bool FiniteGroup::is_normal_in(const FiniteGroup& ambient) const {
  for (const auto& g : ambient.elements()) {
    const GL2ModElement gi = g.inverse();
    for (const auto& h : elements_)
      if (!contains(g * h * gi)) return false;
  }
  return true;
}

FiniteGroup enumerate_group(const Level& level) {
  const long order = gl2_order(level);
  if (order > kMaxGroupOrder)
    throw std::length_error("group order " + std::to_string(order) + " exceeds the enumeration guard");
  const long q = level.modulus;
  std::vector<GL2ModElement> out;
  out.reserve(static_cast<std::size_t>(order));
  for (long a = 0; a < q; ++a)
    for (long b = 0; b < q; ++b)
      for (long c = 0; c < q; ++c)
        for (long d = 0; d < q; ++d)
          if (is_unit_mod_p(a * d - b * c, level.p)) out.push_back(GL2ModElement{level, {a, b, c, d}});
  return FiniteGroup(level, std::move(out));
}

FiniteGroup generated_subgroup(const Level& level, const std::vector<GL2ModElement>& gens) {
  std::vector<GL2ModElement> found{GL2ModElement::identity(level)};
  std::unordered_set<long> seen{found.front().key()};
  std::deque<GL2ModElement> queue{found.front()};
  while (!queue.empty()) {
    const GL2ModElement x = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      const GL2ModElement y = x * s;
      if (seen.insert(y.key()).second) {
        if (static_cast<long>(found.size()) >= kMaxGroupOrder)
          throw std::length_error("generated subgroup exceeds the enumeration guard");
        found.push_back(y);
        queue.push_back(y);
      }
    }
  }
  return FiniteGroup(level, std::move(found));
}

std::vector<GL2ModElement> principal_congruence_generators(const Level& level) {
  const long p = level.p, q = level.modulus;
  std::vector<GL2ModElement> gens;
  if (level.n == 1) return gens;
  long kernel_order = 1;
  for (int i = 1; i < level.n; ++i) kernel_order *= p * p * p * p;
  // Greedy in lexicographic order over the kernel, starting from the four
  // elementary congruence matrices.
  std::vector<GL2ModElement> candidates{GL2ModElement::make(level, 1, p, 0, 1), GL2ModElement::make(level, 1, 0, p, 1),
                                        GL2ModElement::make(level, 1 + p, 0, 0, 1),
                                        GL2ModElement::make(level, 1, 0, 0, 1 + p)};
  for (long a = 1; a < q; a += p)
    for (long b = 0; b < q; b += p)
      for (long c = 0; c < q; c += p)
        for (long d = 1; d < q; d += p) candidates.push_back(GL2ModElement{level, {a, b, c, d}});
  FiniteGroup current = generated_subgroup(level, gens);
  for (const auto& x : candidates) {
    if (static_cast<long>(current.order()) == kernel_order) break;
    if (current.contains(x)) continue;
    gens.push_back(x);
    current = generated_subgroup(level, gens);
  }
  return gens;
}

bool in_iwahori(const GL2ModElement& g) { return g.b() % g.level.p == 0; }

IwahoriFactors iwahori_factor(const GL2ModElement& g) {
  if (!in_iwahori(g)) throw std::invalid_argument("element " + g.to_string() + " is not in the Iwahori image");
  const Level& lv = g.level;
  const long x = mod_reduce(g.b() * mod_inverse(g.d(), lv.modulus), lv.modulus);
  const GL2ModElement u = GL2ModElement::make(lv, 1, x, 0, 1);
  const GL2ModElement q = GL2ModElement::make(lv, g.a() - x * g.c(), 0, g.c(), g.d());
  return {u, q};
}

std::string to_string(BruhatCell c) { return c == BruhatCell::cell_B ? "cell_B" : "cell_BwP"; }

BruhatCell bruhat_classify(const GL2ModElement& g) {
  return in_iwahori(g) ? BruhatCell::cell_B : BruhatCell::cell_BwP;
}

BruhatCensus bruhat_census(const FiniteGroup& group) {
  BruhatCensus out;
  out.order = static_cast<long>(group.order());
  const long p = group.level().p;
  for (const auto& g : group.elements()) {
    if (bruhat_classify(g) == BruhatCell::cell_BwP) {
      ++out.cell_bwp;
      continue;
    }
    ++out.cell_b;
    const IwahoriFactors f = iwahori_factor(g);
    const bool shape = f.u_minus.a() == 1 && f.u_minus.c() == 0 && f.u_minus.d() == 1 && f.u_minus.b() % p == 0 &&
                       f.p_part.b() == 0;
    if (!shape || !(f.u_minus * f.p_part == g)) ++out.factor_failures;
  }
  return out;
}

std::string to_string(NilpotencyMode m) { return m == NilpotencyMode::char_p ? "char_p" : "pi_containment"; }

GroupRingVector group_ring_unit(const FiniteGroup& ambient, const GL2ModElement& g) {
  GroupRingVector v(ambient.order(), 0);
  v[ambient.index_of(g)] = 1;
  return v;
}

GroupRingVector group_ring_product(const FiniteGroup& ambient, const GroupRingVector& x, const GroupRingVector& y) {
  GroupRingVector out(ambient.order(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (y[j] != 0) out[ambient.index_of(ambient[i] * ambient[j])] += x[i] * y[j];
  }
  return out;
}

GroupRingVector generator_difference_product(const FiniteGroup& ambient, const std::vector<GL2ModElement>& factors) {
  GroupRingVector v = group_ring_unit(ambient, GL2ModElement::identity(ambient.level()));
  for (const auto& s : factors) {
    GroupRingVector d = group_ring_unit(ambient, s);
    d[ambient.index_of(GL2ModElement::identity(ambient.level()))] -= 1;
    v = group_ring_product(ambient, v, d);
  }
  return v;
}

NilpotencyReport ideal_power_nilpotency(const FiniteGroup& ambient, const IdealData& h, NilpotencyMode mode,
                                        int max_index) {
  if (ambient.order() > kMaxAlgebraDimension)
    throw std::length_error("group algebra dimension exceeds the ideal-power guard");
  const std::vector<GL2ModElement> gens = nontrivial_generators(ambient, h);
  const FiniteGroup sub = generated_subgroup(ambient.level(), gens);
  if (!sub.is_normal_in(ambient)) throw std::invalid_argument("subgroup is not normal in the ambient group");

  const int p = ambient.level().p;
  NilpotencyReport out;
  out.mode = mode;
  out.ambient_order = ambient.order();
  out.subgroup_order = sub.order();
  out.p_subgroup = is_power_of(sub.order(), p);
  if (!out.p_subgroup) out.warning = "subgroup is not a p-group; the ideal powers need not vanish";
  if (gens.empty()) {
    out.index = 1;
    out.power_sizes = {0};
    return out;
  }

  std::vector<std::vector<std::size_t>> right;
  for (const auto& s : gens) right.push_back(right_multiplication(ambient, s));
  const std::size_t n = ambient.order();
  const auto times_difference = [&](const GroupRingVector& v, std::size_t s) {
    GroupRingVector out_v(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (v[i] != 0) out_v[right[s][i]] += v[i], out_v[i] -= v[i];
    return out_v;
  };

  if (mode == NilpotencyMode::char_p) {
    FpSubspace power(p, n);
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t s = 0; s < gens.size(); ++s) {
        GroupRingVector v(n, 0);
        v[g] = 1;
        power.insert(times_difference(v, s));
      }
    for (int k = 1; k <= max_index; ++k) {
      out.power_sizes.push_back(power.dimension());
      if (power.dimension() == 0) {
        out.index = k;
        return out;
      }
      if (k > 1 && out.power_sizes[k - 1] == out.power_sizes[k - 2]) {
        out.warning += out.warning.empty() ? "" : "; ";
        out.warning += "ideal powers stabilized at a nonzero ideal";
        return out;
      }
      FpSubspace next(p, n);
      for (const auto& row : power.rows())
        for (std::size_t s = 0; s < gens.size(); ++s) next.insert(times_difference(row, s));
      power = std::move(next);
    }
    return out;
  }

  std::set<GroupRingVector> products;
  for (std::size_t s = 0; s < gens.size(); ++s)
    products.insert(times_difference(group_ring_unit(ambient, GL2ModElement::identity(ambient.level())), s));
  for (int k = 1; k <= max_index; ++k) {
    out.power_sizes.push_back(products.size());
    const bool contained = std::all_of(products.begin(), products.end(), [p](const GroupRingVector& v) {
      return std::all_of(v.begin(), v.end(), [p](long c) { return c % p == 0; });
    });
    if (contained) {
      out.index = k;
      return out;
    }
    std::set<GroupRingVector> next;
    for (const auto& v : products)
      for (std::size_t s = 0; s < gens.size(); ++s) {
        next.insert(times_difference(v, s));
        if (next.size() > kMaxProducts) throw std::length_error("product enumeration exceeds its guard");
      }
    products = std::move(next);
  }
  return out;
}

FiniteModule regular_module(const FiniteGroup& group, const std::vector<GL2ModElement>& acting) {
  FiniteModule m;
  m.rank = group.order();
  for (const auto& g : acting) {
    IntMatrix a = zero_matrix(m.rank, m.rank);
    for (std::size_t x = 0; x < m.rank; ++x) a[group.index_of(g * group[x])][x] = 1;
    m.elements.push_back(g);
    m.matrices.push_back(std::move(a));
  }
  return m;
}

NakayamaReport nakayama_dimension(const FiniteModule& m, const IdealData& h) {
  if (m.elements.size() != m.matrices.size()) throw std::invalid_argument("action data: element and matrix counts differ");
  const std::size_t r = m.rank;
  for (std::size_t i = 0; i < m.matrices.size(); ++i) {
    const IntMatrix& a = m.matrices[i];
    if (a.size() != r || column_count(a) != r) throw std::invalid_argument("action data: matrix has the wrong shape");
    if (m.elements[i] == GL2ModElement::identity(m.elements[i].level) && a != identity_matrix(r))
      throw std::invalid_argument("action data: identity acts nontrivially");
    if (rank_mod_p(a, m.elements[i].level.p) != r) throw std::invalid_argument("action data: matrix not invertible");
  }

  // Presentation of M / I_H M: the columns of [rho(s) - 1 ...] span I_H M.
  IntMatrix pres = zero_matrix(r, 0);
  for (const auto& s : h.subgroup_generators) {
    const auto it = std::find(m.elements.begin(), m.elements.end(), s);
    if (it == m.elements.end()) throw std::invalid_argument("no action matrix for generator " + s.to_string());
    const IntMatrix& a = m.matrices[static_cast<std::size_t>(it - m.elements.begin())];
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < r; ++i) pres[i].push_back(a[i][j] - (i == j ? 1 : 0));
  }

  NakayamaReport out;
  out.module_rank = r;
  const int p = m.elements.empty() ? 2 : m.elements.front().level.p;
  if (column_count(pres) == 0) {
    out.coinvariant_rank = out.dual_corank = r;
    out.ranks_agree = true;
    return out;
  }
  const SmithForm snf = smith_normal_form(pres);
  out.integer_divisors = snf.divisors;
  out.coinvariant_rank = r - snf.rank;
  for (const auto& d : snf.divisors) {
    const int v = valuation_of(d, p);
    if (v > 0) out.torsion_valuations.push_back(v);
  }
  out.dual_corank = r - rational_rank(transpose(pres));
  out.ranks_agree = out.coinvariant_rank == out.dual_corank;
  return out;
}

PadicNumber padic_determinant(PadicMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) throw std::invalid_argument("empty matrix");
  const int p = a[0][0].prime(), cap = a[0][0].cap();
  PadicNumber det = PadicNumber::one(p, cap);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = n;
    for (std::size_t i = c; i < n; ++i)
      if (!a[i][c].is_zero() && (best == n || a[i][c].valuation() < a[best][c].valuation())) best = i;
    if (best == n) return det * a[c][c];
    if (best != c) {
      std::swap(a[best], a[c]);
      det = -det;
    }
    det *= a[c][c];
    const PadicNumber inv = a[c][c].inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c].is_exact_zero()) continue;
      const PadicNumber f = a[i][c] * inv;
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

std::vector<GL2ModElement> coset_representatives(const Level& level) {
  std::vector<GL2ModElement> reps;
  for (long x = 0; x < level.modulus; ++x) reps.push_back(GL2ModElement::make(level, 1, x, 0, 1));
  for (long e = 0; e < level.modulus; e += level.p) reps.push_back(GL2ModElement::make(level, 0, 1, 1, e));
  return reps;
}

LevelCharacter::LevelCharacter(const TorusCharacter& chi, const Level& level) : chi_(chi), level_(level) {
  if (chi.context().p != level.p) throw std::invalid_argument("character and level have different primes");
  const ConductorReport cond = char_conductor(chi);
  if (!cond.level || *cond.level > level.n)
    throw std::invalid_argument("character conductor " + cond.to_string() + " exceeds level " +
                                std::to_string(level.n));
  table_.resize(static_cast<std::size_t>(level.modulus * level.modulus));
}

const PadicNumber& LevelCharacter::eval(long a, long d) const {
  a = mod_reduce(a, level_.modulus);
  d = mod_reduce(d, level_.modulus);
  if (!is_unit_mod_p(a, level_.p) || !is_unit_mod_p(d, level_.p))
    throw std::invalid_argument("torus entries must be units");
  auto& slot = table_[static_cast<std::size_t>(a * level_.modulus + d)];
  if (!slot) slot = char_eval(chi_, a, d);
  return *slot;
}

const PadicNumber& LevelCharacter::eval_lower(const GL2ModElement& q) const {
  if (q.b() != 0) throw std::invalid_argument("element is not lower triangular");
  return eval(q.a(), q.d());
}

LevelCharacter LevelCharacter::inverse() const { return LevelCharacter(chi_.inverse(), level_); }

InducedModule::InducedModule(const TorusCharacter& chi, const Level& level)
    : chi_(chi, level), reps_(coset_representatives(level)) {
  for (std::size_t i = 0; i < reps_.size(); ++i) rep_index_.emplace(reps_[i].key(), i);
}

std::pair<std::size_t, GL2ModElement> InducedModule::coset_of(const GL2ModElement& g) const {
  const Level& lv = g.level;
  const long q = lv.modulus;
  // The coset g P is determined by the second column up to a unit.
  std::size_t j;
  if (is_unit_mod_p(g.d(), lv.p))
    j = static_cast<std::size_t>(mod_reduce(g.b() * mod_inverse(g.d(), q), q));
  else
    j = static_cast<std::size_t>(q + mod_reduce(g.d() * mod_inverse(g.b(), q), q) / lv.p);
  const GL2ModElement rest = reps_[j].inverse() * g;
  if (rest.b() != 0) throw std::logic_error("coset decomposition failed for " + g.to_string());
  return {j, rest};
}

PadicNumber InducedModule::evaluate(std::size_t i, const GL2ModElement& g) const {
  const auto [j, rest] = coset_of(g);
  if (j != i) return PadicNumber::zero(level().p, chi_.character().context().N);
  return chi_.eval_lower(rest.inverse());
}

PadicMatrix InducedModule::action_matrix(const GL2ModElement& g) const {
  const GL2ModElement gi = g.inverse();
  const std::size_t n = dimension();
  PadicMatrix m(n, std::vector<PadicNumber>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const GL2ModElement x = gi * reps_[j];
    for (std::size_t i = 0; i < n; ++i) m[j][i] = evaluate(i, x);
  }
  return m;
}

InducedModule build_induced(const TorusCharacter& chi, int n) {
  return InducedModule(chi, Level::make(chi.context().p, n));
}

PadicMatrix coset_module_matrix(const InducedModule& basis, const LevelCharacter& twist, const GL2ModElement& g) {
  const std::size_t n = basis.dimension();
  const int p = basis.level().p, cap = twist.character().context().N;
  PadicMatrix m = padic_zero_matrix(n, n, p, cap);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [j, rest] = basis.coset_of(g * basis.representatives()[i]);
    m[j][i] = twist.eval_lower(rest);
  }
  return m;
}

std::vector<GL2ModElement> gl2_generators(const Level& level) {
  std::vector<GL2ModElement> gens{GL2ModElement::make(level, 1, 1, 0, 1), GL2ModElement::lower_unipotent(level)};
  for (long a = 2; a < level.modulus; ++a)
    if (is_unit_mod_p(a, level.p)) gens.push_back(GL2ModElement::diagonal(level, a, 1));
  return gens;
}

PairingReport dual_pairing_check(const InducedModule& ind) {
  const LevelCharacter dual = ind.character().inverse();
  const std::size_t n = ind.dimension();
  PairingReport out;
  out.induced_dimension = n;
  out.dual_dimension = coset_representatives(ind.level()).size();
  out.pairing.assign(n, std::vector<PadicNumber>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.pairing[i][j] = ind.evaluate(i, ind.representatives()[j]);
  out.determinant = padic_determinant(out.pairing);
  out.nonsingular = !out.determinant.is_zero();

  const Level& lv = ind.level();
  out.identity_acts_trivially = is_padic_identity(ind.action_matrix(GL2ModElement::identity(lv)));

  std::vector<GL2ModElement> tested;
  if (gl2_order(lv) <= static_cast<long>(kFullInvarianceOrder))
    tested = enumerate_group(lv).elements();
  else
    tested = gl2_generators(lv);
  out.invariant = true;
  for (const auto& g : tested) {
    const PadicMatrix rho = ind.action_matrix(g);
    const PadicMatrix sigma = coset_module_matrix(ind, dual, g);
    if (!padic_matrices_agree(padic_multiply(padic_multiply(padic_transpose(rho), out.pairing), sigma), out.pairing))
      out.invariant = false;
  }
  out.elements_tested = tested.size();

  const auto gens = gl2_generators(lv);
  out.homomorphism_checked = true;
  for (const auto& g : gens)
    for (const auto& h : gens)
      if (!padic_matrices_agree(ind.action_matrix(g * h), padic_multiply(ind.action_matrix(g), ind.action_matrix(h))))
        out.homomorphism_checked = false;
  return out;
}

SplitReport bruhat_module_split(const TorusCharacter& chi, int n) {
  const InducedModule basis = build_induced(chi, n);
  const Level& lv = basis.level();
  SplitReport out;
  out.dimension = basis.dimension();
  std::vector<bool> in_n(out.dimension, false);
  for (std::size_t i = 0; i < out.dimension; ++i) {
    if (bruhat_classify(basis.representatives()[i]) == BruhatCell::cell_B) {
      out.n_block.push_back(i);
      in_n[i] = true;
    } else {
      out.n_minus_block.push_back(i);
    }
  }

  const auto preserves = [&](const PadicMatrix& m, bool block_n) {
    for (std::size_t i = 0; i < out.dimension; ++i) {
      if (in_n[i] != block_n) continue;
      for (std::size_t j = 0; j < out.dimension; ++j)
        if (in_n[j] != block_n && !m[j][i].is_zero()) return false;
    }
    return true;
  };
  const PadicMatrix w = coset_module_matrix(basis, basis.character(), GL2ModElement::weyl(lv));
  out.w_maps_into_minus = true;
  for (std::size_t i : out.n_block)
    for (std::size_t j = 0; j < out.dimension; ++j)
      if (in_n[j] && !w[j][i].is_zero()) out.w_maps_into_minus = false;
  const PadicMatrix id = coset_module_matrix(basis, basis.character(), GL2ModElement::identity(lv));
  out.identity_preserves_blocks = preserves(id, true) && preserves(id, false);

  const FiniteGroup group = enumerate_group(lv);
  for (const auto& g : group.elements()) {
    for (std::size_t i : out.n_block)
      if (!in_n[basis.coset_of(g * basis.representatives()[i]).first]) {
        out.witness = g;
        out.witness_vector = i;
        break;
      }
    if (out.witness) break;
  }
  return out;
}

}  // namespace iwasawa
