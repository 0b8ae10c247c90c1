#include "iwasawa/torus_characters.hpp"

#include <map>
#include <regex>
#include <sstream>

namespace iwasawa {

namespace {

const char* const kKeys[4] = {"torsion_1", "torsion_2", "principal_1", "principal_2"};

bool is_torsion(int g) { return g == TorusCharacter::torsion_1 || g == TorusCharacter::torsion_2; }

// Order of the torsion subgroup of Z_p^x.
int torsion_order(int p) { return p == 2 ? 2 : p - 1; }

PadicNumber image_from_spec(const PrecisionContext& ctx, int g, const ImageSpec& s) {
  switch (s.kind) {
    case ImageSpec::Kind::closed: {
      const long e = (g == TorusCharacter::torsion_1 || g == TorusCharacter::principal_1) ? s.m1 : s.m2;
      const PadicNumber base = is_torsion(g) ? torsion_generator(ctx) : principal_generator(ctx);
      if (is_torsion(g)) {
        const long order = torsion_order(ctx.p);
        return padic_pow(base, ((e % order) + order) % order);
      }
      return padic_pow(base, e);
    }
    case ImageSpec::Kind::digits:
      return s.value;
    case ImageSpec::Kind::exp_c:
      if (is_torsion(g)) throw PadicError("exp(c*log) form is only valid for principal generators");
      if (!s.value.is_exact_zero() && s.value.valuation() < 0)
        throw PadicError("c must lie in Z_p, got " + s.value.to_string());
      return pexp(s.value * plog(principal_generator(ctx)));
  }
  throw PadicError("unknown image kind");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// A p-adic literal in the report format, or a rational "n/d" / integer.
PadicNumber parse_scalar(const std::string& text, const PrecisionContext& ctx) {
  if (text.find('^') != std::string::npos || text.find("O(") != std::string::npos)
    return PadicNumber::parse(text, ctx.p, ctx.N);
  try {
    mpq_class q(text);
    q.canonicalize();
    return padic_rat(ctx, q);
  } catch (const std::invalid_argument&) {
    throw PadicError("cannot parse scalar '" + text + "'");
  }
}

ImageSpec parse_spec(const std::string& text, const PrecisionContext& ctx) {
  static const std::regex closed(R"(a\^(-?\d+)\s+d\^(-?\d+))");
  std::smatch m;
  ImageSpec s;
  if (std::regex_match(text, m, closed)) {
    s.kind = ImageSpec::Kind::closed;
    s.m1 = std::stol(m[1]);
    s.m2 = std::stol(m[2]);
    return s;
  }
  const std::string prefix = "exp(";
  const std::string suffix = " * log)";
  if (text.rfind(prefix, 0) == 0) {
    if (text.size() < prefix.size() + suffix.size() ||
        text.compare(text.size() - suffix.size(), suffix.size(), suffix) != 0)
      throw PadicError("malformed exp form '" + text + "'; expected exp(<c> * log)");
    s.kind = ImageSpec::Kind::exp_c;
    s.value = parse_scalar(trim(text.substr(prefix.size(), text.size() - prefix.size() - suffix.size())), ctx);
    return s;
  }
  s.kind = ImageSpec::Kind::digits;
  s.value = parse_scalar(text, ctx);
  return s;
}

std::string render_spec(const ImageSpec& s) {
  switch (s.kind) {
    case ImageSpec::Kind::closed:
      return "a^" + std::to_string(s.m1) + " d^" + std::to_string(s.m2);
    case ImageSpec::Kind::digits:
      return s.value.to_string();
    case ImageSpec::Kind::exp_c:
      return "exp(" + s.value.to_string() + " * log)";
  }
  return "";
}

ImageSpec closed_spec(long m1, long m2) {
  ImageSpec s;
  s.kind = ImageSpec::Kind::closed;
  s.m1 = m1;
  s.m2 = m2;
  return s;
}

ImageSpec digits_spec(const PadicNumber& v) {
  ImageSpec s;
  s.kind = ImageSpec::Kind::digits;
  s.value = v;
  return s;
}

bool all_closed_with(const std::array<ImageSpec, 4>& specs, long& m1, long& m2) {
  for (const auto& s : specs)
    if (s.kind != ImageSpec::Kind::closed || s.m1 != specs[0].m1 || s.m2 != specs[0].m2) return false;
  m1 = specs[0].m1;
  m2 = specs[0].m2;
  return true;
}

bool is_one_to_precision(const PadicNumber& x) {
  return x.agrees_with(PadicNumber::one(x.prime(), x.cap()));
}

}  // namespace

PadicNumber torsion_generator(const PrecisionContext& ctx) {
  if (ctx.p == 2) return padic_int(ctx, -1);
  return teichmuller(ctx, primitive_root(ctx.p));
}

PadicNumber principal_generator(const PrecisionContext& ctx) {
  return padic_int(ctx, 1 + principal_modulus(ctx.p));
}

UnitDecomposition decompose_unit(const PrecisionContext& ctx, const PadicNumber& a) {
  if (!a.is_unit()) throw PadicError("torus entries must be units, got " + a.to_string());
  UnitDecomposition out;
  PadicNumber principal;
  if (ctx.p == 2) {
    if (a.absolute_precision() < 2) throw PadicError("need a mod 4 to split off the sign");
    out.torsion_index = a.residue(2) == 3 ? 1 : 0;
    principal = out.torsion_index == 1 ? -a : a;
  } else {
    const long r = a.residue(1).get_si();
    out.torsion_index = discrete_log_mod_p(r, ctx.p);
    principal = a / teichmuller(ctx, r);
  }
  out.exponent = plog(principal) / plog(principal_generator(ctx));
  return out;
}

TorusCharacter::TorusCharacter(const PrecisionContext& ctx, std::array<ImageSpec, 4> specs)
    : ctx_(ctx), specs_(std::move(specs)) {
  for (int g = 0; g < 4; ++g) {
    images_[g] = image_from_spec(ctx_, g, specs_[g]);
    const PadicNumber& x = images_[g];
    if (!x.is_unit())
      throw PadicError(std::string(kKeys[g]) + " image must be a unit, got " + x.to_string());
    if (is_torsion(g)) {
      if (!is_one_to_precision(padic_pow(x, torsion_order(ctx_.p))))
        throw PadicError(std::string(kKeys[g]) + " image is not a root of unity of order dividing " +
                         std::to_string(torsion_order(ctx_.p)));
    } else {
      const int q = principal_modulus(ctx_.p);
      const int digits = ctx_.p == 2 ? 2 : 1;
      if (x.absolute_precision() < digits || x.residue(digits) != 1 % q)
        throw PadicError(std::string(kKeys[g]) + " image must lie in 1 + " + std::to_string(q) + "Z_" +
                         std::to_string(ctx_.p));
    }
  }
}

TorusCharacter TorusCharacter::trivial(const PrecisionContext& ctx) { return closed_form(ctx, 0, 0); }

TorusCharacter TorusCharacter::closed_form(const PrecisionContext& ctx, long m1, long m2) {
  const ImageSpec s = closed_spec(m1, m2);
  return TorusCharacter(ctx, {s, s, s, s});
}

TorusCharacter TorusCharacter::from_c(const PrecisionContext& ctx, const PadicNumber& c) {
  ImageSpec e;
  e.kind = ImageSpec::Kind::exp_c;
  e.value = c;
  const ImageSpec one = closed_spec(0, 0);
  return TorusCharacter(ctx, {one, one, one, e});
}

TorusCharacter TorusCharacter::from_images(const PrecisionContext& ctx,
                                           const std::array<PadicNumber, 4>& images) {
  return TorusCharacter(ctx, {digits_spec(images[0]), digits_spec(images[1]), digits_spec(images[2]),
                              digits_spec(images[3])});
}

TorusCharacter TorusCharacter::operator*(const TorusCharacter& other) const {
  long a1, a2, b1, b2;
  if (all_closed_with(specs_, a1, a2) && all_closed_with(other.specs_, b1, b2))
    return closed_form(ctx_, a1 + b1, a2 + b2);
  std::array<PadicNumber, 4> imgs;
  for (int g = 0; g < 4; ++g) imgs[g] = images_[g] * other.images_[g];
  return from_images(ctx_, imgs);
}

TorusCharacter TorusCharacter::inverse() const {
  long a1, a2;
  if (all_closed_with(specs_, a1, a2)) return closed_form(ctx_, -a1, -a2);
  std::array<PadicNumber, 4> imgs;
  for (int g = 0; g < 4; ++g) imgs[g] = images_[g].inverse();
  return from_images(ctx_, imgs);
}

bool TorusCharacter::same_images(const TorusCharacter& other) const {
  for (int g = 0; g < 4; ++g)
    if (!images_[g].same_representation(other.images_[g])) return false;
  return true;
}

bool TorusCharacter::agrees_with(const TorusCharacter& other) const {
  for (int g = 0; g < 4; ++g)
    if (!images_[g].agrees_with(other.images_[g])) return false;
  return true;
}

std::string TorusCharacter::serialize() const {
  std::ostringstream out;
  out << "p = " << ctx_.p << "\n";
  for (int g = 0; g < 4; ++g) out << kKeys[g] << " = " << render_spec(specs_[g]) << "\n";
  return out.str();
}

TorusCharacter TorusCharacter::parse(std::string_view text, const PrecisionContext& ctx) {
  std::map<std::string, std::string> fields;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw PadicError("character file line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (fields.count(key))
      throw PadicError("character file: duplicate key '" + key + "'");
    fields[key] = trim(std::string_view(t).substr(eq + 1));
  }
  if (fields.count("p") && std::stol(fields["p"]) != ctx.p)
    throw PadicError("character file is for p = " + fields["p"] + " but the run uses p = " +
                     std::to_string(ctx.p));
  fields.erase("p");
  if (fields.count("character")) {
    if (fields.size() != 1)
      throw PadicError("character file: 'character' cannot be mixed with per-generator images");
    const ImageSpec s = parse_spec(fields["character"], ctx);
    if (s.kind == ImageSpec::Kind::closed) return closed_form(ctx, s.m1, s.m2);
    if (s.kind == ImageSpec::Kind::exp_c) return from_c(ctx, s.value);
    throw PadicError("character = ... takes a^m1 d^m2 or exp(<c> * log)");
  }
  std::array<ImageSpec, 4> specs;
  for (int g = 0; g < 4; ++g) {
    const auto it = fields.find(kKeys[g]);
    if (it == fields.end()) throw PadicError(std::string("character file: missing key '") + kKeys[g] + "'");
    specs[g] = parse_spec(it->second, ctx);
    fields.erase(it);
  }
  if (!fields.empty()) throw PadicError("character file: unknown key '" + fields.begin()->first + "'");
  return TorusCharacter(ctx, specs);
}

PadicNumber char_eval(const TorusCharacter& chi, const PadicNumber& a, const PadicNumber& d) {
  const auto& ctx = chi.context();
  const UnitDecomposition da = decompose_unit(ctx, a);
  const UnitDecomposition dd = decompose_unit(ctx, d);
  PadicNumber r = padic_pow(chi.image(TorusCharacter::torsion_1), da.torsion_index) *
                  padic_pow(chi.image(TorusCharacter::torsion_2), dd.torsion_index);
  r *= pexp(da.exponent * plog(chi.image(TorusCharacter::principal_1)));
  r *= pexp(dd.exponent * plog(chi.image(TorusCharacter::principal_2)));
  return r;
}

PadicNumber char_eval(const TorusCharacter& chi, long a, long d) {
  return char_eval(chi, padic_int(chi.context(), a), padic_int(chi.context(), d));
}

CInvariant c_of_chi(const TorusCharacter& chi, long loss_budget) {
  const auto& ctx = chi.context();
  const PadicNumber ratio = chi.image(TorusCharacter::principal_2) / chi.image(TorusCharacter::principal_1);
  CInvariant out;
  out.c = plog(ratio) / plog(principal_generator(ctx));
  out.derivation_precision = out.c.absolute_precision();
  const int q = principal_modulus(ctx.p);
  out.verified_to = kInfiniteValuation;
  for (long a : {1L + q, 1L + 2L * q, 1L + q + q * q}) {
    const PadicNumber x = padic_int(ctx, a);
    const PadicNumber lhs = char_eval(chi, x.inverse(), x);
    const PadicNumber rhs = pexp(out.c * plog(x));
    const PadicNumber diff = lhs - rhs;
    const long digits = diff.is_zero() ? std::min<long>(diff.valuation(), ctx.N) : diff.valuation();
    out.verified_to = std::min(out.verified_to, digits);
  }
  if (out.verified_to < ctx.N - loss_budget)
    throw PadicError("c(chi) re-substitution agrees only to " + std::to_string(out.verified_to) +
                     " digits; character data is inconsistent");
  return out;
}

TorusCharacter w_twist(const TorusCharacter& chi) {
  const auto& s = [&](TorusCharacter::Generator g) { return chi.spec(g); };
  auto swap_closed = [](ImageSpec x) {
    if (x.kind == ImageSpec::Kind::closed) std::swap(x.m1, x.m2);
    return x;
  };
  return TorusCharacter(chi.context(), {swap_closed(s(TorusCharacter::torsion_2)),
                                        swap_closed(s(TorusCharacter::torsion_1)),
                                        swap_closed(s(TorusCharacter::principal_2)),
                                        swap_closed(s(TorusCharacter::principal_1))});
}

bool central_agreement(const TorusCharacter& a, const TorusCharacter& b) {
  using G = TorusCharacter;
  return (a.image(G::torsion_1) * a.image(G::torsion_2))
             .agrees_with(b.image(G::torsion_1) * b.image(G::torsion_2)) &&
         (a.image(G::principal_1) * a.image(G::principal_2))
             .agrees_with(b.image(G::principal_1) * b.image(G::principal_2));
}

std::string CClassification::verdict() const {
  if (ambiguous) return "ambiguous: bound exceeds p^precision";
  if (nonnegative_match) return "in_N0_at " + std::to_string(*nonnegative_match);
  return "not_in_N0_within_precision";
}

std::string CClassification::negative_verdict() const {
  if (ambiguous) return "ambiguous: bound exceeds p^precision";
  if (nonpositive_match) return "in_minus_N0_at " + std::to_string(*nonpositive_match);
  return "not_in_minus_N0_within_precision";
}

CClassification classify_c(const CInvariant& ci, long bound) {
  CClassification out;
  out.bound = bound;
  const PadicNumber& c = ci.c;
  const int p = c.prime();
  out.precision = std::min<long>(c.absolute_precision(), ci.derivation_precision);
  if (out.precision <= 0) {
    out.ambiguous = true;
    return out;
  }
  // p^precision > bound guarantees at most one match on each side.
  mpz_class limit = 1;
  for (long k = 0; k < out.precision && limit <= bound; ++k) limit *= p;
  out.ambiguous = limit <= bound;
  if (out.ambiguous) return out;
  for (long m = 0; m <= bound; ++m) {
    const PadicNumber pm = PadicNumber::from_integer(p, c.cap(), m);
    if (!out.nonnegative_match && (c - pm).with_absolute_precision(out.precision).is_zero())
      out.nonnegative_match = m;
    if (!out.nonpositive_match && (c + pm).with_absolute_precision(out.precision).is_zero())
      out.nonpositive_match = m;
  }
  return out;
}

std::string ConductorReport::to_string() const {
  return level ? std::to_string(*level) : std::string("> N");
}

ConductorReport char_conductor(const TorusCharacter& chi) {
  using G = TorusCharacter;
  // 1 + qZ_p is torsion free, so a principal image is either exactly 1 (finite
  // conductor) or of infinite order (no finite level); precision decides which.
  const bool principal_trivial =
      is_one_to_precision(chi.image(G::principal_1)) && is_one_to_precision(chi.image(G::principal_2));
  const bool torsion_trivial =
      is_one_to_precision(chi.image(G::torsion_1)) && is_one_to_precision(chi.image(G::torsion_2));
  ConductorReport out;
  if (!principal_trivial) return out;
  if (torsion_trivial) {
    out.level = 0;
  } else {
    // Units = 1 mod p are exactly 1 + pZ_p; for p = 2 the sign survives until 1 + 4Z_2.
    out.level = chi.context().p == 2 ? 2 : 1;
  }
  return out;
}

}  // namespace iwasawa
