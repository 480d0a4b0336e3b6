#include "pscgeom/cones.hpp"

#include <cmath>

#include "pscgeom/error.hpp"

namespace pscgeom {

namespace {

void require_simple(const Link& link) {
  if (!is_simple(link))
    fail(ErrorKind::NotSimpleLink,
         "link '" + link.name + "' (dim " + std::to_string(link.dim) +
             ", s = " + std::to_string(link.s) + ") is not simple");
}

Piece cone_piece(const Link& link, double c_L) {
  Piece p;
  p.sub_domain = {0.0, kConeLength};
  if (link.s > 0.0) {
    p.type = PieceType::Linear;
    p.value = 0.0;
    p.slope = 1.0 / c_L;
  } else {
    // u = t, so phi = u^(2/(l+1)).
    p.type = PieceType::Power;
    p.coeff = 1.0;
    p.exponent = 2.0 / (link.dim + 1.0);
  }
  return p;
}

}  // namespace

ConeMetric build_cone(const Link& link) {
  require_simple(link);
  ConeMetric c;
  c.link = link;
  if (link.dim == 0) {
    c.euclidean = true;
    return c;
  }
  if (link.s > 0.0) c.c_L = std::sqrt(link.dim * (link.dim - 1.0) / link.s);
  c.as_warped = WarpedMetric{link, Profile({cone_piece(link, c.c_L)}), true};
  return c;
}

CurvatureReport cone_report(const ConeMetric& cone, const Grid1D& grid,
                            const Tolerances& tol) {
  if (cone.as_warped) return scalar_single_warped(*cone.as_warped, grid, tol);
  std::vector<Sample> samples;
  for (double t : linspace(grid.tip_offset, kConeLength, grid.points))
    samples.push_back({{t}, 0.0});
  return assemble_report({"t"}, std::move(samples), 1.0,
                         "euclidean segments, " + std::to_string(grid.points) + " points",
                         tol);
}

NormalizedLink normalize_link(const Link& link) {
  if (link.s == 0.0) return {link, 1.0};
  const double target = link.dim * (link.dim - 1.0);
  if (target <= 0.0)
    fail(ErrorKind::NotSimpleLink, "cannot normalize a low-dimensional psc link");
  Link out = link;
  out.s = target;
  // s scales as 1/c for g -> c g, so c = s / target.
  return {out, link.s / target};
}

WarpedMetric build_attaching(const Link& link, const TransitionFunction& a) {
  require_simple(link);
  if (link.dim < 1)
    fail(ErrorKind::DimensionError, "point links have no warped direction to attach");
  if (link.s > 0.0) {
    const double target = link.dim * (link.dim - 1.0);
    if (std::abs(link.s - target) > 1e-12 * target)
      fail(ErrorKind::NotNormalized, "attaching metric needs s_L = l(l-1) = " +
                                         std::to_string(target) + ", got " +
                                         std::to_string(link.s));
    return {link, a.profile, false};
  }
  return {link, a.profile.powered(2.0 / (link.dim + 1.0)), false};
}

GluedFibreModel build_glued_fibre(const Link& link, const TransitionFunction& a,
                                  double cyl_len) {
  if (!(cyl_len > 0.0)) fail(ErrorKind::InvalidParameter, "cylinder length must be > 0");
  require_simple(link);
  if (link.dim < 1)
    fail(ErrorKind::DimensionError, "point links have no warped direction to glue");

  const NormalizedLink norm = normalize_link(link);
  GluedFibreModel m;
  m.link = norm.link;
  m.link_scale = norm.metric_scale;
  m.cyl_len = cyl_len;
  m.cylinder_span = {m.attach_span.hi, m.attach_span.hi + cyl_len};

  const ConeMetric cone = build_cone(norm.link);
  m.cone = *cone.as_warped;

  WarpedMetric att = build_attaching(norm.link, a);
  att.profile = att.profile.shifted(m.attach_span.lo);
  m.attaching = att;

  Piece cyl;
  cyl.type = PieceType::Constant;
  cyl.sub_domain = m.cylinder_span;
  cyl.value = 1.0;
  m.cylinder = {norm.link, Profile({cyl}), false};

  m.profile = Profile::concat({m.cone.profile, m.attaching.profile, m.cylinder.profile});
  m.junction_residual = m.profile.max_junction_residual();
  if (m.junction_residual > 1e-10)
    fail(ErrorKind::JunctionMismatch,
         "glued profile is not C2 (residual " + std::to_string(m.junction_residual) + ")");
  return m;
}

GluedReport glued_report(const GluedFibreModel& model, const Grid1D& grid,
                         const Tolerances& tol) {
  GluedReport r;
  r.cone = scalar_single_warped(model.cone, grid, tol);
  r.attaching = scalar_single_warped(model.attaching, grid, tol);
  r.cylinder = scalar_single_warped(model.cylinder, grid, tol);
  r.whole = merge_reports({r.cone, r.attaching, r.cylinder}, tol);
  return r;
}

}  // namespace pscgeom
