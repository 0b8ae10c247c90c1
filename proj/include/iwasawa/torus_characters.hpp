#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "iwasawa/padic_functions.hpp"

namespace iwasawa {

/// Where a generator image came from; kept so character files round-trip.
struct ImageSpec {
  enum class Kind { closed, digits, exp_c };
  Kind kind = Kind::closed;
  long m1 = 0;  // closed: a^m1 d^m2
  long m2 = 0;
  PadicNumber value;  // digits: the image itself; exp_c: the exponent c
};

/// Decomposition a = tau^index * (1+q)^exponent of a unit of Z_p, with tau
/// the Teichmuller lift of the smallest primitive root (-1 when p = 2).
struct UnitDecomposition {
  int torsion_index = 0;
  PadicNumber exponent;
};

UnitDecomposition decompose_unit(const PrecisionContext& ctx, const PadicNumber& a);

/// The torsion generator tau (Teichmuller lift of the smallest primitive
/// root; -1 for p = 2) and the principal generator 1 + q.
PadicNumber torsion_generator(const PrecisionContext& ctx);
PadicNumber principal_generator(const PrecisionContext& ctx);

/// Continuous character of the diagonal torus of GL2(Z_p), stored by its
/// values on (tau,1), (1,tau), (1+q,1), (1,1+q).
class TorusCharacter {
 public:
  enum Generator { torsion_1 = 0, torsion_2 = 1, principal_1 = 2, principal_2 = 3 };

  /// Validates torsion images (roots of unity of the right order) and
  /// principal images (in 1 + qZ_p).
  TorusCharacter(const PrecisionContext& ctx, std::array<ImageSpec, 4> specs);

  static TorusCharacter trivial(const PrecisionContext& ctx);
  /// diag(a, d) -> a^m1 d^m2.
  static TorusCharacter closed_form(const PrecisionContext& ctx, long m1, long m2);
  /// diag(a, d) -> exp(c log <d>), trivial on torsion; c(chi) = c.
  static TorusCharacter from_c(const PrecisionContext& ctx, const PadicNumber& c);
  static TorusCharacter from_images(const PrecisionContext& ctx, const std::array<PadicNumber, 4>& images);

  const PrecisionContext& context() const { return ctx_; }
  const PadicNumber& image(Generator g) const { return images_[g]; }
  const std::array<PadicNumber, 4>& images() const { return images_; }
  const ImageSpec& spec(Generator g) const { return specs_[g]; }

  TorusCharacter operator*(const TorusCharacter& other) const;
  TorusCharacter inverse() const;

  /// Bit-exact identity of images.
  bool same_images(const TorusCharacter& other) const;
  /// Images agree to precision.
  bool agrees_with(const TorusCharacter& other) const;

  std::string serialize() const;
  static TorusCharacter parse(std::string_view text, const PrecisionContext& ctx);

 private:
  PrecisionContext ctx_;
  std::array<ImageSpec, 4> specs_;
  std::array<PadicNumber, 4> images_;
};

/// chi(diag(a, d)) for units a, d.
PadicNumber char_eval(const TorusCharacter& chi, const PadicNumber& a, const PadicNumber& d);
PadicNumber char_eval(const TorusCharacter& chi, long a, long d);

/// Value on diag(a, 1).
inline PadicNumber char_eval_ta(const TorusCharacter& chi, const PadicNumber& a) {
  return char_eval(chi, a, padic_int(chi.context(), 1));
}

struct CInvariant {
  PadicNumber c;
  long derivation_precision = 0;
  /// Absolute digits to which exp(c log a) matched chi(diag(1/a, a)) at the
  /// worst sample point.
  long verified_to = 0;
};

/// c(chi) = log(chi(diag(1/(1+q), 1+q))) / log(1+q), verified by
/// re-substitution at three points.  Throws PadicError when verification
/// fails by more than `loss_budget` digits.
CInvariant c_of_chi(const TorusCharacter& chi, long loss_budget = 4);

/// (w chi)(t) = chi(w^-1 t w): swaps the two coordinates.
TorusCharacter w_twist(const TorusCharacter& chi);

/// Agreement on central elements diag(b, b).
bool central_agreement(const TorusCharacter& a, const TorusCharacter& b);

struct CClassification {
  long bound = 0;
  long precision = 0;
  /// c = m for the given m in [0, bound], to precision.
  std::optional<long> nonnegative_match;
  /// c = -m for the given m in [0, bound], to precision.
  std::optional<long> nonpositive_match;
  /// bound >= p^precision: more than one candidate could match.
  bool ambiguous = false;

  std::string verdict() const;
  std::string negative_verdict() const;
};

CClassification classify_c(const CInvariant& c, long bound);

struct ConductorReport {
  /// Least level; nullopt when it exceeds what precision can resolve.
  std::optional<int> level;
  std::string to_string() const;
};

/// Least n with chi trivial on units congruent to 1 mod p^n (level 0 for the
/// trivial character).
ConductorReport char_conductor(const TorusCharacter& chi);

}  // namespace iwasawa
