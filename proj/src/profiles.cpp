#include "pscgeom/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pscgeom/error.hpp"

namespace pscgeom {

namespace {

// Quintic smoothstep q(x) = 10x^3 - 15x^4 + 6x^5; zero first and second
// derivatives at both ends.
Jet smoothstep(double x) {
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0, 0.0};
  const double x2 = x * x;
  return {x2 * x * (10.0 - 15.0 * x + 6.0 * x2),
          30.0 * x2 * (1.0 - x) * (1.0 - x),
          60.0 * x * (1.0 - x) * (1.0 - 2.0 * x)};
}

Jet raise(const Jet& v, double p) {
  if (p == 1.0) return v;
  if (v.value == 0.0) {
    // Only reachable at a collapsed tip; derivatives are not finite there
    // unless p >= 2, and callers never sample the tip.
    return {0.0, p == 2.0 ? 0.0 : std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }
  const double vp = std::pow(v.value, p);
  const double r1 = v.d1 / v.value;
  return {vp, p * vp * r1,
          p * vp * ((p - 1.0) * r1 * r1 + v.d2 / v.value)};
}

}  // namespace

std::string to_string(PieceType type) {
  switch (type) {
    case PieceType::Constant: return "constant";
    case PieceType::Linear: return "linear";
    case PieceType::Sine: return "sine";
    case PieceType::Power: return "power";
    case PieceType::Quintic: return "quintic";
    case PieceType::LogSmoothstep: return "log_smoothstep";
  }
  return "unknown";
}

PieceType piece_type_from_string(const std::string& name) {
  for (auto t : {PieceType::Constant, PieceType::Linear, PieceType::Sine,
                 PieceType::Power, PieceType::Quintic,
                 PieceType::LogSmoothstep}) {
    if (to_string(t) == name) return t;
  }
  fail(ErrorKind::InvalidParameter, "unknown piece type '" + name + "'");
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::ClosedForm: return "closed-form";
    case ProfileKind::Spline: return "spline";
    case ProfileKind::PiecewiseComposite: return "piecewise-composite";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  for (auto k : {ProfileKind::ClosedForm, ProfileKind::Spline,
                 ProfileKind::PiecewiseComposite}) {
    if (to_string(k) == name) return k;
  }
  fail(ErrorKind::InvalidParameter, "unknown profile kind '" + name + "'");
}

Jet Piece::eval(double t) const {
  const double s = t - origin;
  Jet v;
  switch (type) {
    case PieceType::Constant:
      v = {value, 0.0, 0.0};
      break;
    case PieceType::Linear:
      v = {value + slope * s, slope, 0.0};
      break;
    case PieceType::Sine: {
      const double x = rate * s;
      const double sn = std::sin(x);
      v = {amplitude * sn, amplitude * rate * std::cos(x),
           -amplitude * rate * rate * sn};
      break;
    }
    case PieceType::Power: {
      if (exponent == 1.0) {
        v = {coeff * s, coeff, 0.0};
      } else if (s == 0.0) {
        v = {0.0, exponent > 1.0 ? 0.0 : std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity()};
      } else {
        const double sp = std::pow(s, exponent);
        v = {coeff * sp, coeff * exponent * sp / s,
             coeff * exponent * (exponent - 1.0) * sp / (s * s)};
      }
      break;
    }
    case PieceType::Quintic: {
      const auto& c = coeffs;
      v.value = c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))));
      v.d1 = c[1] + s * (2 * c[2] + s * (3 * c[3] + s * (4 * c[4] + s * 5 * c[5])));
      v.d2 = 2 * c[2] + s * (6 * c[3] + s * (12 * c[4] + s * 20 * c[5]));
      break;
    }
    case PieceType::LogSmoothstep: {
      const Jet q = smoothstep(s / width);
      const double span = std::log(to / from);
      const double l1 = span * q.d1 / width;
      const double l2 = span * q.d2 / (width * width);
      const double g = std::exp(std::log(from) + q.value * span);
      v = {g, g * l1, g * (l2 + l1 * l1)};
      break;
    }
  }
  return raise(v, outer_power);
}

Profile::Profile(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) fail(ErrorKind::InvalidParameter, "profile has no pieces");
  std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) {
    return a.sub_domain.lo < b.sub_domain.lo;
  });
  for (const auto& p : pieces_) {
    if (!(p.sub_domain.hi >= p.sub_domain.lo))
      fail(ErrorKind::InvalidParameter, "piece sub-domain is reversed");
  }
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    const double gap = pieces_[i].sub_domain.lo - pieces_[i - 1].sub_domain.hi;
    const double scale = std::max(1.0, std::abs(pieces_[i].sub_domain.lo));
    if (std::abs(gap) > 1e-12 * scale)
      fail(ErrorKind::InvalidParameter, "profile pieces are not contiguous");
  }
  domain_ = {pieces_.front().sub_domain.lo, pieces_.back().sub_domain.hi};
  if (pieces_.size() > 1) {
    kind_ = ProfileKind::PiecewiseComposite;
  } else {
    kind_ = pieces_.front().type == PieceType::Quintic ? ProfileKind::Spline
                                                       : ProfileKind::ClosedForm;
  }
}

const Piece& Profile::piece_at(double t) const {
  const double slack = 1e-12 * std::max(1.0, domain_.length());
  if (!(t >= domain_.lo - slack && t <= domain_.hi + slack))
    fail(ErrorKind::InvalidParameter, "t = " + std::to_string(t) +
                                          " outside profile domain [" +
                                          std::to_string(domain_.lo) + ", " +
                                          std::to_string(domain_.hi) + "]");
  // A junction belongs to the right-hand piece: blends are exact at their
  // left end, closed-form pieces at both ends.
  auto it = std::upper_bound(
      pieces_.begin(), pieces_.end(), t,
      [](double x, const Piece& p) { return x < p.sub_domain.hi; });
  if (it == pieces_.end()) --it;
  return *it;
}

Jet Profile::eval(double t) const {
  const Piece& p = piece_at(t);
  return p.eval(std::clamp(t, domain_.lo, domain_.hi));
}

std::vector<double> Profile::junction_residuals() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    const double t = pieces_[i].sub_domain.lo;
    const Jet l = pieces_[i - 1].eval(t);
    const Jet r = pieces_[i].eval(t);
    out.push_back(std::max({std::abs(l.value - r.value), std::abs(l.d1 - r.d1),
                            std::abs(l.d2 - r.d2)}));
  }
  return out;
}

double Profile::max_junction_residual() const {
  const auto r = junction_residuals();
  return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

Profile Profile::shifted(double offset) const {
  auto pieces = pieces_;
  for (auto& p : pieces) {
    p.sub_domain.lo += offset;
    p.sub_domain.hi += offset;
    p.origin += offset;
  }
  return Profile(std::move(pieces));
}

Profile Profile::powered(double p) const {
  auto pieces = pieces_;
  for (auto& piece : pieces) piece.outer_power *= p;
  return Profile(std::move(pieces));
}

Profile Profile::concat(const std::vector<Profile>& parts) {
  std::vector<Piece> pieces;
  for (const auto& part : parts)
    pieces.insert(pieces.end(), part.pieces().begin(), part.pieces().end());
  return Profile(std::move(pieces));
}

Piece quintic_hermite(double a, double b, const Jet& left, const Jet& right) {
  const double h = b - a;
  if (!(h > 0.0)) fail(ErrorKind::InvalidParameter, "empty Hermite interval");
  const double r0 = right.value - (left.value + left.d1 * h + 0.5 * left.d2 * h * h);
  const double r1 = right.d1 - (left.d1 + left.d2 * h);
  const double r2 = right.d2 - left.d2;
  const double h2 = h * h;
  const double h3 = h2 * h;

  Piece p;
  p.type = PieceType::Quintic;
  p.sub_domain = {a, b};
  p.origin = a;
  p.coeffs = {left.value,
              left.d1,
              0.5 * left.d2,
              (20 * r0 - 8 * r1 * h + r2 * h2) / (2 * h3),
              (-30 * r0 + 14 * r1 * h - 2 * r2 * h2) / (2 * h3 * h),
              (12 * r0 - 6 * r1 * h + r2 * h2) / (2 * h3 * h2)};
  return p;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) fail(ErrorKind::InvalidParameter, "need at least 2 grid points");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;
  return out;
}

TransitionFunction make_transition(double eps0, double eps1) {
  // The linear piece reaches 1/2 + p at t = p, so p < 1/2 is the whole
  // feasibility condition for this construction.
  if (!(eps0 > 0.0 && eps1 > 0.0) || !(std::max(eps0, eps1) < 0.5))
    fail(ErrorKind::InvalidParameter,
         "transition needs eps0, eps1 in (0, 1/2)");

  // Using a symmetric breakpoint p = max(eps0, eps1) makes the blend rise
  // (1/2 - p) exactly half its width (1 - 2p), which is the ratio for which
  // the quintic Hermite blend reduces to a' = 1 - smoothstep3, so concave.
  const double p = std::max(eps0, eps1);

  Piece linear;
  linear.type = PieceType::Linear;
  linear.sub_domain = {0.0, p};
  linear.value = 0.5;
  linear.slope = 1.0;

  Piece plateau;
  plateau.type = PieceType::Constant;
  plateau.sub_domain = {1.0 - p, 1.0};
  plateau.value = 1.0;

  Piece blend = quintic_hermite(p, 1.0 - p, {0.5 + p, 1.0, 0.0}, {1.0, 0.0, 0.0});

  TransitionFunction a;
  a.eps0 = eps0;
  a.eps1 = eps1;
  a.linear_end = p;
  a.plateau_start = 1.0 - p;
  a.profile = Profile({linear, blend, plateau});
  return a;
}

TorpedoProfile make_torpedo_profile(double delta, double lambda) {
  if (!(delta > 0.0)) fail(ErrorKind::InvalidParameter, "torpedo delta must be > 0");
  if (!(lambda >= 0.0)) fail(ErrorKind::InvalidParameter, "torpedo lambda must be >= 0");

  TorpedoProfile tp;
  tp.delta = delta;
  tp.lambda = lambda;
  tp.bend_end = delta * kTorpedoBend;
  tp.neck_start = delta * kTorpedoCap;

  Piece cap;
  cap.type = PieceType::Sine;
  cap.sub_domain = {0.0, tp.bend_end};
  cap.amplitude = delta;
  cap.rate = 1.0 / delta;

  const Jet at_bend = cap.eval(tp.bend_end);
  std::vector<Piece> pieces{cap, quintic_hermite(tp.bend_end, tp.neck_start, at_bend,
                                                 {delta, 0.0, 0.0})};
  // Kept even when lambda = 0 so the right end evaluates to delta exactly.
  Piece neck;
  neck.type = PieceType::Constant;
  neck.sub_domain = {tp.neck_start, tp.neck_start + lambda};
  neck.value = delta;
  pieces.push_back(neck);
  tp.profile = Profile(std::move(pieces));
  return tp;
}

RescaleCurve make_rescale_curve(double tau0, double tau, double b) {
  if (!(tau0 > 0.0 && tau > 0.0))
    fail(ErrorKind::InvalidParameter, "rescale plateaus must be > 0");
  if (!(b >= 2.0)) fail(ErrorKind::InvalidParameter, "rescale length b must be >= 2");

  RescaleCurve c;
  c.tau0 = tau0;
  c.tau = tau;
  c.b = b;

  if (tau0 == tau) {
    Piece flat;
    flat.type = PieceType::Constant;
    flat.sub_domain = {0.0, b};
    flat.value = tau0;
    c.profile = Profile({flat});
    return c;
  }
  if (!(b > 2.0))
    fail(ErrorKind::InvalidParameter,
         "b = 2 leaves no room to move between distinct plateaus");

  Piece start;
  start.type = PieceType::Constant;
  start.sub_domain = {0.0, 1.0};
  start.value = tau0;

  Piece ramp;
  ramp.type = PieceType::LogSmoothstep;
  ramp.sub_domain = {1.0, b - 1.0};
  ramp.origin = 1.0;
  ramp.from = tau0;
  ramp.to = tau;
  ramp.width = b - 2.0;

  Piece end;
  end.type = PieceType::Constant;
  end.sub_domain = {b - 1.0, b};
  end.value = tau;

  c.profile = Profile({start, ramp, end});
  return c;
}

DerivativeBounds derivative_bounds(const Profile& p, int points) {
  DerivativeBounds b{std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity()};
  for (double t : linspace(p.domain().lo, p.domain().hi, points)) {
    const Jet j = p.eval(t);
    b.d1_min = std::min(b.d1_min, j.d1);
    b.d1_max = std::max(b.d1_max, j.d1);
    b.d2_min = std::min(b.d2_min, j.d2);
    b.d2_max = std::max(b.d2_max, j.d2);
  }
  return b;
}

FdConsistency fd_consistency(const Profile& p, int points, double h, double margin) {
  FdConsistency out;
  const double lo = p.domain().lo + std::max(2.0 * h, margin);
  const double hi = p.domain().hi - 2.0 * h;
  for (double t : linspace(lo, hi, points)) {
    const Jet c = p.eval(t);
    const double fp = p(t + h);
    const double fm = p(t - h);
    const Jet jp = p.eval(t + h);
    const Jet jm = p.eval(t - h);
    out.max_d1_error = std::max(out.max_d1_error, std::abs(c.d1 - (fp - fm) / (2 * h)));
    out.max_d2_error = std::max(out.max_d2_error, std::abs(c.d2 - (jp.d1 - jm.d1) / (2 * h)));
  }
  return out;
}

}  // namespace pscgeom
