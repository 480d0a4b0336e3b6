#pragma once

// Cone metrics over simple links, the attaching metric that joins a cone to
// a round cylinder, and the glued singular-fibre model built from both.

#include <optional>

#include "pscgeom/curvature.hpp"
#include "pscgeom/profiles.hpp"

namespace pscgeom {

inline constexpr double kConeLength = 0.5;

struct ConeMetric {
  Link link;
  double c_L = 1.0;
  // Cone over a finite set of points: Euclidean segments, no warped factor.
  bool euclidean = false;
  std::optional<WarpedMetric> as_warped;  // on [0, 1/2], tip at 0
};

ConeMetric build_cone(const Link& link);

// Curvature of the cone on its tip-excluded grid.  For point links this is
// the identically zero field of the Euclidean segments.
CurvatureReport cone_report(const ConeMetric& cone, const Grid1D& grid = {},
                            const Tolerances& tol = {});

// Rescaling g_L -> metric_scale * g_L that brings a psc link to the
// normalization s_L = l(l-1).  Scalar-flat links are returned unchanged.
struct NormalizedLink {
  Link link;
  double metric_scale = 1.0;
};

NormalizedLink normalize_link(const Link& link);

// dt^2 + a(t)^(4/(l+1)) g_L when s_L = 0, dt^2 + a(t)^2 g_L when s_L > 0.
WarpedMetric build_attaching(const Link& link, const TransitionFunction& a);

struct GluedFibreModel {
  Link link;               // normalized link actually used
  double link_scale = 1.0; // metric_scale applied to the input link
  double cyl_len = 0.0;
  Interval cone_span{0.0, 0.5};
  Interval attach_span{0.5, 1.5};
  Interval cylinder_span;
  Profile profile;  // composite on [0, 3/2 + cyl_len]
  WarpedMetric cone;
  WarpedMetric attaching;
  WarpedMetric cylinder;
  double junction_residual = 0.0;
};

GluedFibreModel build_glued_fibre(const Link& link, const TransitionFunction& a,
                                  double cyl_len);

struct GluedReport {
  CurvatureReport cone;
  CurvatureReport attaching;
  CurvatureReport cylinder;
  CurvatureReport whole;
};

GluedReport glued_report(const GluedFibreModel& model, const Grid1D& grid = {},
                         const Tolerances& tol = {});

}  // namespace pscgeom
