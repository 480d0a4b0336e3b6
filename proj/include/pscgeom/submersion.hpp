#pragma once

// Scalar curvature of Riemannian submersions with totally geodesic fibres,
//   s_M = s_h o p + s_F / tau - tau |A|^2,
// the safe fibre scale tau_bar = m(h) / (2 M_A^2), and the fibre-rescaling
// collar used to lift psc bordisms.

#include <span>
#include <vector>

#include "pscgeom/curvature.hpp"
#include "pscgeom/profiles.hpp"

namespace pscgeom {

struct SubmersionSpec {
  std::vector<double> base_s;     // s_h o p at total-space sample points
  Link fibre;                     // s_F = fibre.s
  std::vector<double> a_norm_sq;  // |A|^2 at the same points
  double tau = 1.0;
};

void validate(const SubmersionSpec& spec);

CurvatureReport oneill_scalar(const SubmersionSpec& spec, const Tolerances& tol = {});

double tau_bar(std::span<const double> base_s, std::span<const double> a_norm_sq);

// Members are all pairs (base_fields[x], a_fields[y]).
struct FamilySpec {
  std::vector<std::vector<double>> base_fields;
  std::vector<std::vector<double>> a_fields;
  Link fibre;
};

double tau_bar_min(const FamilySpec& family);

// Hopf fibration S^3 -> S^2(1/2): base curvature 8, circle fibres, |A|^2 = 2.
// Canonical variation at tau gives the Berger sphere with s = 8 - 2 tau.
SubmersionSpec hopf_fixture(double tau = 1.0, int points = 16);

// Base and A fields sampled along a bordism parameter u in [0, 1].  Physical
// t in [0, b] maps to u = clamp((t - 1)/(b - 2)), so the fields are constant
// on the collars [0,1] and [b-1,b]; between knots they are interpolated
// linearly.
struct LiftPath {
  std::vector<std::vector<double>> base_s;
  std::vector<std::vector<double>> a_norm_sq;
  std::vector<double> u;  // ascending knots; empty means uniform on [0, 1]
};

struct LiftOptions {
  int t_samples = 64;
  int max_doublings = 20;
  Tolerances tolerances;
};

struct LiftResult {
  CurvatureReport report;
  RescaleCurve curve;
  double b = 2.0;
  double tau_effective = 1.0;
  double tau_bar_min = 0.0;  // infinity when every A field vanishes
  bool clamped = false;
  int doublings = 0;
};

LiftResult lift_over_bordism(const LiftPath& path, const Link& fibre, double tau0,
                             double tau_target, const LiftOptions& options = {});

}  // namespace pscgeom
