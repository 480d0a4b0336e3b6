#include "pscgeom/submersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pscgeom/error.hpp"

namespace pscgeom {

namespace {

double min_of(std::span<const double> v) { return *std::min_element(v.begin(), v.end()); }
double max_of(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

void check_fields(std::span<const double> base_s, std::span<const double> a_sq) {
  if (base_s.empty()) fail(ErrorKind::EmptyBaseField, "base curvature field is empty");
  if (a_sq.empty()) fail(ErrorKind::EmptyBaseField, "A-tensor field is empty");
  for (double a : a_sq)
    if (!(a >= 0.0)) fail(ErrorKind::InvalidParameter, "|A|^2 must be >= 0");
}

}  // namespace

void validate(const SubmersionSpec& spec) {
  check_fields(spec.base_s, spec.a_norm_sq);
  if (spec.base_s.size() != spec.a_norm_sq.size())
    fail(ErrorKind::InvalidParameter, "base and A fields differ in sample count");
  if (!(spec.tau > 0.0)) fail(ErrorKind::InvalidParameter, "fibre scale tau must be > 0");
}

CurvatureReport oneill_scalar(const SubmersionSpec& spec, const Tolerances& tol) {
  validate(spec);
  std::vector<Sample> samples;
  samples.reserve(spec.base_s.size());
  double scale = spec.fibre.s / spec.tau;
  for (std::size_t i = 0; i < spec.base_s.size(); ++i) {
    const double s =
        spec.base_s[i] + spec.fibre.s / spec.tau - spec.tau * spec.a_norm_sq[i];
    scale = std::max({scale, std::abs(spec.base_s[i]), spec.tau * spec.a_norm_sq[i]});
    samples.push_back({{static_cast<double>(i)}, s});
  }
  return assemble_report({"point"}, std::move(samples), scale,
                         std::to_string(spec.base_s.size()) + " points", tol);
}

double tau_bar(std::span<const double> base_s, std::span<const double> a_norm_sq) {
  check_fields(base_s, a_norm_sq);
  const double m = min_of(base_s);
  if (!(m > 0.0))
    fail(ErrorKind::NonPositiveBase, "min of base curvature is " + std::to_string(m));
  const double ma_sq = max_of(a_norm_sq);
  if (!(ma_sq > 0.0))
    fail(ErrorKind::ZeroATensor,
         "A vanishes identically; every tau > 0 is safe (degenerate flat horizontal)");
  return m / (2.0 * ma_sq);
}

double tau_bar_min(const FamilySpec& family) {
  if (family.base_fields.empty() || family.a_fields.empty())
    fail(ErrorKind::EmptyBaseField, "family index sets must be non-empty");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& base : family.base_fields)
    for (const auto& a : family.a_fields) best = std::min(best, tau_bar(base, a));
  return best;
}

SubmersionSpec hopf_fixture(double tau, int points) {
  if (points < 1) fail(ErrorKind::InvalidParameter, "need at least one sample point");
  const auto n = static_cast<std::size_t>(points);
  return {std::vector<double>(n, 8.0), circle_link(), std::vector<double>(n, 2.0), tau};
}

namespace {

std::vector<double> field_at(const std::vector<std::vector<double>>& path,
                             const std::vector<double>& knots, double u) {
  if (path.size() == 1) return path.front();
  std::size_t k = 0;
  double w = 0.0;
  if (knots.empty()) {
    const double pos = u * static_cast<double>(path.size() - 1);
    k = std::min(static_cast<std::size_t>(pos), path.size() - 2);
    w = pos - static_cast<double>(k);
  } else {
    const auto it = std::upper_bound(knots.begin(), knots.end(), u);
    k = std::min<std::size_t>(
        static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - knots.begin() - 1, 0)),
        path.size() - 2);
    w = std::clamp((u - knots[k]) / (knots[k + 1] - knots[k]), 0.0, 1.0);
  }
  std::vector<double> out(path[k].size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (1.0 - w) * path[k][i] + w * path[k + 1][i];
  return out;
}

double path_parameter(double t, double b) {
  if (b <= 2.0) return std::clamp(t / b, 0.0, 1.0);
  return std::clamp((t - 1.0) / (b - 2.0), 0.0, 1.0);
}

}  // namespace

LiftResult lift_over_bordism(const LiftPath& path, const Link& fibre, double tau0,
                             double tau_target, const LiftOptions& options) {
  if (path.base_s.empty() || path.base_s.size() != path.a_norm_sq.size())
    fail(ErrorKind::EmptyBaseField, "lift path needs matching, non-empty base and A samples");
  const std::size_t points = path.base_s.front().size();
  for (std::size_t k = 0; k < path.base_s.size(); ++k) {
    check_fields(path.base_s[k], path.a_norm_sq[k]);
    if (path.base_s[k].size() != points || path.a_norm_sq[k].size() != points)
      fail(ErrorKind::InvalidParameter, "lift path fields differ in sample count");
    if (!(min_of(path.base_s[k]) > 0.0))
      fail(ErrorKind::NonPositiveBase, "base curvature along the path must stay positive");
  }
  if (!path.u.empty()) {
    if (path.u.size() != path.base_s.size())
      fail(ErrorKind::InvalidParameter, "one path knot per path sample");
    for (std::size_t k = 1; k < path.u.size(); ++k)
      if (!(path.u[k] > path.u[k - 1]))
        fail(ErrorKind::InvalidParameter, "path knots must be strictly ascending");
  }
  if (!(tau0 > 0.0 && tau_target > 0.0))
    fail(ErrorKind::InvalidParameter, "fibre scales must be > 0");
  if (options.t_samples < 2) fail(ErrorKind::InvalidParameter, "need >= 2 t samples");

  LiftResult out;
  // tau_bar over all (base, A) pairs met along the path; pairs with A == 0
  // impose no constraint.
  out.tau_bar_min = std::numeric_limits<double>::infinity();
  for (const auto& base : path.base_s)
    for (const auto& a : path.a_norm_sq)
      if (max_of(a) > 0.0) out.tau_bar_min = std::min(out.tau_bar_min, tau_bar(base, a));
  out.clamped = tau_target > out.tau_bar_min;
  out.tau_effective = std::min(tau_target, out.tau_bar_min);

  // The derivative terms of sqrt(gamma) only see the fibre dimension.
  const Link fibre_shape = make_link(fibre.dim, 0.0, fibre.name);
  double b = tau0 == out.tau_effective ? 2.0 : 4.0;
  for (int doubling = 0; doubling <= options.max_doublings; ++doubling, b *= 2.0) {
    const RescaleCurve curve = make_rescale_curve(tau0, out.tau_effective, b);
    Grid1D g;
    g.points = options.t_samples;
    const CurvatureReport corr = scalar_multiply_warped(
        {{0.0}, fibre_shape, curve.profile.powered(0.5)}, g, options.tolerances);

    std::vector<Sample> samples;
    samples.reserve(corr.samples.size() * points);
    double scale = fibre.s;
    for (const auto& c : corr.samples) {
      const double t = c.coords[0];
      const double gamma = curve.profile(t);
      const double u = path_parameter(t, b);
      const auto base = field_at(path.base_s, path.u, u);
      const auto a_sq = field_at(path.a_norm_sq, path.u, u);
      for (std::size_t i = 0; i < points; ++i) {
        const double s = base[i] + fibre.s / gamma - gamma * a_sq[i] + c.s;
        scale = std::max({scale, std::abs(base[i]), gamma * a_sq[i]});
        samples.push_back({{t, static_cast<double>(i)}, s});
      }
    }
    auto report = assemble_report(
        {"t", "point"}, std::move(samples), scale,
        "uniform " + std::to_string(options.t_samples) + " on [0, " + std::to_string(b) +
            "] x " + std::to_string(points) + " points",
        options.tolerances);
    if (report.verdict.kind == VerdictKind::Positive) {
      out.report = std::move(report);
      out.curve = curve;
      out.b = b;
      out.doublings = doubling;
      return out;
    }
  }
  fail(ErrorKind::SearchFailure, "no collar length up to the doubling budget is psc");
}

}  // namespace pscgeom
