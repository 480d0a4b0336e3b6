#pragma once

// Torpedo, stretched-torpedo and boot metrics together with the two
// parameter searches built on them: the torpedo radius achieving a curvature
// floor, and the bending radius making a boot psc.

#include "pscgeom/curvature.hpp"
#include "pscgeom/profiles.hpp"

namespace pscgeom {

// Grid offset from a collapsed torpedo tip.
double torpedo_tip_offset(double delta);

struct TorpedoMetric {
  int n = 3;
  TorpedoProfile profile;
  WarpedMetric as_warped;  // link = unit S^(n-1), tip at r = 0
};

TorpedoMetric build_torpedo(int n, double delta, double lambda);
CurvatureReport torpedo_report(const TorpedoMetric& t, int points = 4096,
                               const Tolerances& tol = {});

// Closed-form curvature levels of the round cap and of the neck.
double torpedo_cap_value(int n, double delta);
double torpedo_neck_value(int n, double delta);

// Largest delta (to bisection precision) whose torpedo has s_min >= b.  The
// returned delta re-verifies with s_min in [b, 2b].
double delta_for_bound(int n, double b, double lambda, int points = 4096);

// Half-torpedo cap of dimension n glued to [0, lambda2] x (n-1)-torpedo.
struct StretchedTorpedo {
  int n = 4;
  double delta = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  TorpedoMetric cap;           // restricted to the upper half disk
  MultiplyWarpedMetric column; // flat segment base times (n-1)-torpedo
};

StretchedTorpedo build_stretched(int n, double delta, double lambda1, double lambda2);

struct StretchedReport {
  CurvatureReport cap;
  CurvatureReport column;
  CurvatureReport whole;
};

StretchedReport stretched_report(const StretchedTorpedo& st, int points = 4096,
                                 const Tolerances& tol = {});

// Intrinsic boot model: dx^2 + (Lambda + x)^2 dtheta^2 + f(x)^2 ds^2_(n-2),
// theta in [0, pi/2], f the (n-1)-torpedo profile with neck l1.
//
// Leg lengths l2, l3 are properties of this model, not of the boot itself:
//   l2 = (pi/2) Lambda + l1             core arc plus the toe-side leg
//   l3 = (pi/2) (Lambda + R) + l4       outer arc plus the far leg
// where R = delta * kTorpedoCap + l1 is the torpedo's radial extent.
struct BootMetric {
  int n = 4;
  double delta = 1.0;
  double Lambda = 1.0;
  double l1 = 1.0;
  double l2 = 0.0;
  double l3 = 0.0;
  double l4 = 1.0;
  TorpedoProfile torpedo;
  DoublyWarpedMetric model;
};

BootMetric build_boot(int n, double delta, double Lambda, double l1, double l4);
CurvatureReport boot_report(const BootMetric& boot, const Grid2D& grid = {},
                            const Tolerances& tol = {});

// Curvature margin a boot must clear to count as psc here:
// 0.1 * (n-2)(n-3) / delta^2.
double boot_margin(int n, double delta);

// sup_x |s_boot(x) - s_product(x)|, the product field being the Lambda -> oo
// limit of the same model.  x_min > tip offset restricts the sup to x >= x_min.
double boot_product_distance(const BootMetric& boot, int x_points = 256, double x_min = 0.0);

struct BootSearch {
  double Lambda = 0.0;
  bool hit_floor = false;
  int evaluations = 0;
};

// Doubling then bisection on Lambda for s_min >= boot_margin(n, delta).
BootSearch lambda_for_psc(int n, double delta, double l1, double l4,
                          const Grid2D& grid = {});

}  // namespace pscgeom
