#include "pscgeom/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pscgeom/error.hpp"

namespace pscgeom {

Link make_link(int dim, double s, std::string name) {
  if (dim < 0) fail(ErrorKind::InvalidParameter, "link dimension must be >= 0");
  if (!(s >= 0.0)) fail(ErrorKind::InvalidParameter, "link scalar curvature must be >= 0");
  if (dim <= 1 && s != 0.0)
    fail(ErrorKind::InvalidParameter, "a 0- or 1-dimensional link is scalar-flat");
  return {dim, s, std::move(name)};
}

Link unit_sphere(int dim) {
  return make_link(dim, static_cast<double>(dim) * (dim - 1), "S" + std::to_string(dim));
}

Link circle_link() { return make_link(1, 0.0, "S1"); }

Link point_link(int count) {
  return make_link(0, 0.0, std::to_string(count) + "-points");
}

bool is_simple(const Link& link) {
  if (link.dim >= 2) return link.s > 0.0;
  return link.s == 0.0;
}

Link link_from_name(const std::string& name) {
  if (name == "points") return point_link();
  if (name == "HP-like") return make_link(8, 56.0, name);
  if (name.size() >= 2 && (name[0] == 'S' || name[0] == 's')) {
    std::size_t used = 0;
    int dim = -1;
    try {
      dim = std::stoi(name.substr(1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == name.size() - 1 && dim >= 0) return unit_sphere(dim);
  }
  fail(ErrorKind::InvalidParameter, "unknown link name '" + name + "'");
}

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Flat: return "Flat";
    case VerdictKind::NonNegative: return "NonNegative";
    case VerdictKind::Positive: return "Positive";
    case VerdictKind::Indefinite: return "Indefinite";
  }
  return "unknown";
}

bool CurvatureReport::flat() const {
  return std::max(std::abs(s_min), std::abs(s_max)) <= tolerances.flat * (1.0 + scale);
}

bool CurvatureReport::non_negative() const {
  return s_min >= -tolerances.non_negative * scale;
}

bool CurvatureReport::positive(double margin) const {
  return s_min > 0.0 && s_min >= margin;
}

bool CurvatureReport::bounded_below(double b) const { return s_min >= b; }

CurvatureReport assemble_report(std::vector<std::string> coordinate_names,
                                std::vector<Sample> samples, double scale,
                                std::string grid, const Tolerances& tol) {
  if (samples.empty()) fail(ErrorKind::InvalidParameter, "report has no samples");
  CurvatureReport r;
  r.coordinate_names = std::move(coordinate_names);
  r.samples = std::move(samples);
  r.grid = std::move(grid);
  r.tolerances = tol;
  r.s_min = std::numeric_limits<double>::infinity();
  r.s_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : r.samples) {
    if (!std::isfinite(s.s))
      fail(ErrorKind::TipSampling, "non-finite scalar curvature in report");
    r.s_min = std::min(r.s_min, s.s);
    r.s_max = std::max(r.s_max, s.s);
  }
  r.scale = std::max({1.0, scale, std::abs(r.s_min), std::abs(r.s_max)});

  if (r.flat()) {
    r.verdict = {VerdictKind::Flat, tol.flat * (1.0 + r.scale), 0.0};
  } else if (r.s_min > tol.non_negative * r.scale) {
    r.verdict = {VerdictKind::Positive, 0.0, r.s_min};
  } else if (r.non_negative()) {
    r.verdict = {VerdictKind::NonNegative, tol.non_negative * r.scale, 0.0};
  } else {
    r.verdict = {VerdictKind::Indefinite, tol.non_negative * r.scale, 0.0};
  }
  return r;
}

CurvatureReport merge_reports(const std::vector<CurvatureReport>& parts,
                              const Tolerances& tol) {
  if (parts.empty()) fail(ErrorKind::InvalidParameter, "nothing to merge");
  std::vector<Sample> samples;
  double scale = 1.0;
  double crosscheck = 0.0;
  std::string grid;
  for (const auto& p : parts) {
    if (p.coordinate_names != parts.front().coordinate_names)
      fail(ErrorKind::InvalidParameter, "merging reports with different coordinates");
    samples.insert(samples.end(), p.samples.begin(), p.samples.end());
    scale = std::max(scale, p.scale);
    crosscheck = std::max(crosscheck, p.crosscheck);
    grid += (grid.empty() ? "" : "; ") + p.grid;
  }
  auto r = assemble_report(parts.front().coordinate_names, std::move(samples), scale,
                           std::move(grid), tol);
  r.crosscheck = crosscheck;
  return r;
}

double warped_scalar(const Link& link, const Jet& phi) {
  const double l = link.dim;
  // s_L/phi^2 - l(l-1) phi'^2/phi^2 grouped so the scalar-flat cone cancels
  // exactly instead of to rounding.
  return (link.s - l * (l - 1.0) * phi.d1 * phi.d1) / (phi.value * phi.value) -
         2.0 * l * phi.d2 / phi.value;
}

double warped_scalar_uform(const Link& link, const Jet& phi) {
  const double l = link.dim;
  const double e = 0.5 * (l + 1.0);
  const double u = std::pow(phi.value, e);
  const double u2 = e * ((e - 1.0) * std::pow(phi.value, e - 2.0) * phi.d1 * phi.d1 +
                         std::pow(phi.value, e - 1.0) * phi.d2);
  return -(4.0 * l / (l + 1.0)) * (u2 / u) + link.s * std::pow(u, -4.0 / (l + 1.0));
}

double warped_term_magnitude(const Link& link, const Jet& phi) {
  const double l = link.dim;
  const double p2 = phi.value * phi.value;
  return std::abs(link.s / p2) + std::abs(2.0 * l * phi.d2 / phi.value) +
         std::abs(l * (l - 1.0) * phi.d1 * phi.d1 / p2);
}

double doubly_warped_scalar(int sphere_dim, const Jet& arc, const Jet& sphere) {
  const double m = sphere_dim;
  double s = -2.0 * arc.d2 / arc.value;
  if (sphere_dim > 0) {
    s += -2.0 * m * sphere.d2 / sphere.value -
         2.0 * m * (arc.d1 * sphere.d1) / (arc.value * sphere.value) +
         m * (m - 1.0) * (1.0 - sphere.d1 * sphere.d1) / (sphere.value * sphere.value);
  }
  return s;
}

double multiply_warped_scalar(double base_s, const Link& link, const Jet& phi) {
  return base_s + warped_scalar(link, phi);
}

namespace {

std::vector<double> grid_points(const Profile& p, bool tip, const Grid1D& g,
                                std::string& description) {
  double lo = g.lo.value_or(p.domain().lo);
  const double hi = g.hi.value_or(p.domain().hi);
  if (tip && !g.lo) lo += g.tip_offset;
  std::ostringstream os;
  os.precision(17);
  os << "uniform " << g.points << " on [" << lo << ", " << hi << "]";
  description = os.str();
  return linspace(lo, hi, g.points);
}

void require_nonzero(double v, double t) {
  if (!(v > 0.0) || !std::isfinite(v))
    fail(ErrorKind::TipSampling,
         "warping function vanishes at grid point t = " + std::to_string(t));
}

}  // namespace

CurvatureReport scalar_single_warped(const WarpedMetric& w, const Grid1D& grid,
                                     const Tolerances& tol) {
  if (w.link.dim < 1)
    fail(ErrorKind::DimensionError, "warped metric needs a link of dimension >= 1");
  std::string desc;
  const auto ts = grid_points(w.profile, w.tip, grid, desc);
  std::vector<Sample> samples;
  samples.reserve(ts.size());
  double crosscheck = 0.0;
  for (double t : ts) {
    const Jet phi = w.profile.eval(t);
    require_nonzero(phi.value, t);
    const double s = warped_scalar(w.link, phi);
    const double su = warped_scalar_uform(w.link, phi);
    const double mag = std::max(warped_term_magnitude(w.link, phi), 1e-300);
    crosscheck = std::max(crosscheck, std::abs(s - su) / mag);
    samples.push_back({{t}, s});
  }
  auto r = assemble_report({"t"}, std::move(samples), w.link.s, desc, tol);
  r.crosscheck = crosscheck;
  return r;
}

CurvatureReport scalar_doubly_warped(const DoublyWarpedMetric& w, const Grid2D& grid,
                                     const Tolerances& tol) {
  if (w.sphere_dim < 0) fail(ErrorKind::DimensionError, "sphere dimension must be >= 0");
  if (!(w.theta_len > 0.0)) fail(ErrorKind::InvalidParameter, "theta_len must be > 0");
  const Interval dom{std::max(w.arc.domain().lo, w.sphere.domain().lo),
                     std::min(w.arc.domain().hi, w.sphere.domain().hi)};
  const double lo = dom.lo + (w.tip ? grid.tip_offset : 0.0);
  const auto xs = linspace(lo, dom.hi, grid.x_points);
  const auto thetas = linspace(0.0, w.theta_len, grid.theta_points);

  // s depends on x only; evaluate once per x, replicate across theta.
  std::vector<double> sx;
  sx.reserve(xs.size());
  for (double x : xs) {
    const Jet a = w.arc.eval(x);
    const Jet f = w.sphere.eval(x);
    require_nonzero(a.value, x);
    if (w.sphere_dim > 0) require_nonzero(f.value, x);
    sx.push_back(doubly_warped_scalar(w.sphere_dim, a, f));
  }
  std::vector<Sample> samples;
  samples.reserve(xs.size() * thetas.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (double th : thetas) samples.push_back({{xs[i], th}, sx[i]});

  std::ostringstream os;
  os.precision(17);
  os << "uniform " << grid.x_points << "x" << grid.theta_points << " on [" << lo << ", "
     << dom.hi << "]x[0, " << w.theta_len << "]";
  const double m = w.sphere_dim;
  return assemble_report({"x", "theta"}, std::move(samples), m * (m - 1.0), os.str(), tol);
}

CurvatureReport scalar_multiply_warped(const MultiplyWarpedMetric& w, const Grid1D& grid,
                                       const Tolerances& tol) {
  if (w.base_s.empty()) fail(ErrorKind::EmptyBaseField, "base curvature field is empty");
  if (w.link.dim < 1)
    fail(ErrorKind::DimensionError, "warped factor needs a link of dimension >= 1");
  std::string desc;
  const auto ts = grid_points(w.profile, false, grid, desc);
  std::vector<Sample> samples;
  samples.reserve(ts.size() * w.base_s.size());
  double base_scale = 0.0;
  for (double sh : w.base_s) base_scale = std::max(base_scale, std::abs(sh));
  for (std::size_t k = 0; k < w.base_s.size(); ++k) {
    for (double t : ts) {
      const Jet phi = w.profile.eval(t);
      require_nonzero(phi.value, t);
      samples.push_back({{static_cast<double>(k), t},
                         multiply_warped_scalar(w.base_s[k], w.link, phi)});
    }
  }
  // With a single base sample the report collapses to the single-warped one.
  if (w.base_s.size() == 1) {
    for (auto& s : samples) s.coords.erase(s.coords.begin());
    return assemble_report({"t"}, std::move(samples), std::max(w.link.s, base_scale),
                           desc, tol);
  }
  return assemble_report({"base_point", "t"}, std::move(samples),
                         std::max(w.link.s, base_scale), desc + " x " +
                             std::to_string(w.base_s.size()) + " base points",
                         tol);
}

}  // namespace pscgeom
