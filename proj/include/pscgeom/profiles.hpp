#pragma once

// One-dimensional profile (warping) functions.  Every warped metric in the
// library is determined by a Profile: a piecewise closed-form function with
// exact first and second derivatives.

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pscgeom {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
};

// Value of a profile together with its first two derivatives.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

enum class PieceType { Constant, Linear, Sine, Power, Quintic, LogSmoothstep };

std::string to_string(PieceType type);
PieceType piece_type_from_string(const std::string& name);

// A single closed-form piece, evaluated in the local variable s = t - origin.
//
//   Constant       value
//   Linear         value + slope * s
//   Sine           amplitude * sin(rate * s)
//   Power          coeff * s^exponent
//   Quintic        sum_k coeffs[k] * s^k
//   LogSmoothstep  exp((1 - q) ln(from) + q ln(to)), q = smoothstep(s / width)
//
// The piece value is finally raised to `outer_power` (1 by default), which is
// how a^(2/(l+1)) and sqrt(gamma) style profiles are represented.
struct Piece {
  PieceType type = PieceType::Constant;
  Interval sub_domain;
  double origin = 0.0;
  double outer_power = 1.0;

  double value = 0.0;      // Constant, Linear
  double slope = 0.0;      // Linear
  double amplitude = 0.0;  // Sine
  double rate = 0.0;       // Sine
  double coeff = 0.0;      // Power
  double exponent = 1.0;   // Power
  std::array<double, 6> coeffs{};  // Quintic
  double from = 1.0;       // LogSmoothstep
  double to = 1.0;         // LogSmoothstep
  double width = 1.0;      // LogSmoothstep

  Jet eval(double t) const;
};

enum class ProfileKind { ClosedForm, Spline, PiecewiseComposite };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

// Immutable after construction.  Pieces are sorted and contiguous: the
// sub-domains tile the profile domain without gaps.
class Profile {
 public:
  Profile() = default;
  explicit Profile(std::vector<Piece> pieces);

  const Interval& domain() const { return domain_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  ProfileKind kind() const { return kind_; }

  // Throws InvalidParameter for t outside the domain (beyond a 1e-12 slack).
  Jet eval(double t) const;
  double operator()(double t) const { return eval(t).value; }

  // Largest of the value / first / second derivative mismatches between
  // adjacent pieces at each junction.
  std::vector<double> junction_residuals() const;
  double max_junction_residual() const;

  // New profile with every piece moved by `offset` along t.
  Profile shifted(double offset) const;
  // New profile with `outer_power` multiplied by p (phi -> phi^p).
  Profile powered(double p) const;
  // Concatenate profiles whose domains abut.
  static Profile concat(const std::vector<Profile>& parts);

 private:
  const Piece& piece_at(double t) const;

  std::vector<Piece> pieces_;
  Interval domain_;
  ProfileKind kind_ = ProfileKind::ClosedForm;
};

// Quintic Hermite piece on [a, b] matching (value, d1, d2) at both ends.
Piece quintic_hermite(double a, double b, const Jet& left, const Jet& right);

// Uniform samples on [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, int points);

// ---------------------------------------------------------------------------
// Transition function a: [0,1] -> [1/2, 1] used by the attaching metric.

struct TransitionFunction {
  double eps0 = 0.0;
  double eps1 = 0.0;
  // a(t) = 1/2 + t on [0, linear_end], a = 1 on [plateau_start, 1].
  double linear_end = 0.0;
  double plateau_start = 1.0;
  Profile profile;
};

TransitionFunction make_transition(double eps0, double eps1);

// ---------------------------------------------------------------------------
// Torpedo profile: delta*sin(r/delta) cap, concave blend, constant neck.

inline constexpr double kTorpedoBend = 1.2;
inline constexpr double kTorpedoBlend = 0.3;
inline constexpr double kTorpedoCap = kTorpedoBend + kTorpedoBlend;

struct TorpedoProfile {
  double delta = 1.0;
  double lambda = 0.0;
  double bend_end = 0.0;   // delta * kTorpedoBend
  double neck_start = 0.0; // delta * kTorpedoCap
  Profile profile;         // on [0, neck_start + lambda]
};

TorpedoProfile make_torpedo_profile(double delta, double lambda);

// ---------------------------------------------------------------------------
// Fibre rescaling curve gamma: [0, b] with plateaus tau0 on [0,1] and tau on
// [b-1, b], log-linear smoothstep in between.

struct RescaleCurve {
  double tau0 = 1.0;
  double tau = 1.0;
  double b = 2.0;
  Profile profile;
};

RescaleCurve make_rescale_curve(double tau0, double tau, double b);

// ---------------------------------------------------------------------------
// Shape checks used by tests, the CLI and the acceptance suite.

struct DerivativeBounds {
  double d1_min = 0.0;
  double d1_max = 0.0;
  double d2_min = 0.0;
  double d2_max = 0.0;
};

DerivativeBounds derivative_bounds(const Profile& p, int points);

// Max |analytic - centered difference| for the first and second derivative
// over `points` samples kept 2h away from the domain ends.
struct FdConsistency {
  double max_d1_error = 0.0;
  double max_d2_error = 0.0;
};

FdConsistency fd_consistency(const Profile& p, int points, double h,
                             double margin = 0.0);

}  // namespace pscgeom
