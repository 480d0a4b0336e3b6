#include "pscgeom/torpedo_boot.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pscgeom/error.hpp"

namespace pscgeom {

namespace {

constexpr int kSearchBudget = 200;

void require_dim(int n, int min_n, const char* what) {
  if (n < min_n)
    fail(ErrorKind::DimensionError, std::string(what) + " needs n >= " +
                                        std::to_string(min_n) + ", got " +
                                        std::to_string(n));
}

}  // namespace

double torpedo_tip_offset(double delta) { return std::max(1e-3, 1e-3 * delta); }

TorpedoMetric build_torpedo(int n, double delta, double lambda) {
  require_dim(n, 3, "torpedo");
  TorpedoMetric t;
  t.n = n;
  t.profile = make_torpedo_profile(delta, lambda);
  t.as_warped = {unit_sphere(n - 1), t.profile.profile, true};
  return t;
}

CurvatureReport torpedo_report(const TorpedoMetric& t, int points, const Tolerances& tol) {
  Grid1D g;
  g.points = points;
  g.tip_offset = torpedo_tip_offset(t.profile.delta);
  return scalar_single_warped(t.as_warped, g, tol);
}

double torpedo_cap_value(int n, double delta) {
  return n * (n - 1.0) / (delta * delta);
}

double torpedo_neck_value(int n, double delta) {
  return (n - 1.0) * (n - 2.0) / (delta * delta);
}

double delta_for_bound(int n, double b, double lambda, int points) {
  require_dim(n, 3, "torpedo");
  if (!(b > 0.0)) fail(ErrorKind::InvalidParameter, "curvature bound must be > 0");
  auto s_min = [&](double delta) {
    return torpedo_report(build_torpedo(n, delta, lambda), points).s_min;
  };

  int evals = 0;
  double lo = 1.0;
  double hi = 1.0;
  if (s_min(1.0) >= b) {
    while (s_min(hi) >= b) {
      lo = hi;
      hi *= 2.0;
      if (++evals > kSearchBudget) fail(ErrorKind::SearchFailure, "no upper bracket");
    }
  } else {
    while (s_min(lo) < b) {
      hi = lo;
      lo *= 0.5;
      if (++evals > kSearchBudget) fail(ErrorKind::SearchFailure, "no lower bracket");
    }
  }
  // Invariant: s_min(lo) >= b > s_min(hi).
  while (hi / lo - 1.0 > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (s_min(mid) >= b ? lo : hi) = mid;
    if (++evals > kSearchBudget) fail(ErrorKind::SearchFailure, "bisection did not converge");
  }
  if (s_min(lo) > 2.0 * b) fail(ErrorKind::SearchFailure, "bound overshoots 2b");
  return lo;
}

StretchedTorpedo build_stretched(int n, double delta, double lambda1, double lambda2) {
  // The column's cross-section is an (n-1)-torpedo whose neck is only psc
  // when n - 1 >= 3.
  require_dim(n, 4, "stretched torpedo");
  if (!(lambda2 >= 0.0)) fail(ErrorKind::InvalidParameter, "lambda2 must be >= 0");
  StretchedTorpedo st;
  st.n = n;
  st.delta = delta;
  st.lambda1 = lambda1;
  st.lambda2 = lambda2;
  st.cap = build_torpedo(n, delta, lambda1);
  const TorpedoProfile section = make_torpedo_profile(delta, lambda1);
  st.column = {{0.0}, unit_sphere(n - 2), section.profile};
  return st;
}

StretchedReport stretched_report(const StretchedTorpedo& st, int points,
                                 const Tolerances& tol) {
  StretchedReport r;
  r.cap = torpedo_report(st.cap, points, tol);
  Grid1D g;
  g.points = points;
  g.lo = torpedo_tip_offset(st.delta);
  r.column = scalar_multiply_warped(st.column, g, tol);
  r.whole = merge_reports({r.cap, r.column}, tol);
  return r;
}

BootMetric build_boot(int n, double delta, double Lambda, double l1, double l4) {
  require_dim(n, 4, "boot");
  if (!(delta > 0.0 && Lambda > 0.0 && l1 > 0.0 && l4 > 0.0))
    fail(ErrorKind::InvalidParameter, "boot needs delta, Lambda, l1, l4 > 0");
  BootMetric b;
  b.n = n;
  b.delta = delta;
  b.Lambda = Lambda;
  b.l1 = l1;
  b.l4 = l4;
  b.torpedo = make_torpedo_profile(delta, l1);
  const double radial = b.torpedo.profile.domain().hi;
  b.l2 = 0.5 * std::numbers::pi * Lambda + l1;
  b.l3 = 0.5 * std::numbers::pi * (Lambda + radial) + l4;

  Piece arc;
  arc.type = PieceType::Linear;
  arc.sub_domain = b.torpedo.profile.domain();
  arc.value = Lambda;
  arc.slope = 1.0;

  b.model.sphere_dim = n - 2;
  b.model.arc = Profile({arc});
  b.model.sphere = b.torpedo.profile;
  b.model.theta_len = 0.5 * std::numbers::pi;
  b.model.tip = true;
  return b;
}

CurvatureReport boot_report(const BootMetric& boot, const Grid2D& grid,
                            const Tolerances& tol) {
  Grid2D g = grid;
  g.tip_offset = torpedo_tip_offset(boot.delta);
  return scalar_doubly_warped(boot.model, g, tol);
}

double boot_margin(int n, double delta) {
  return 0.1 * (n - 2.0) * (n - 3.0) / (delta * delta);
}

double boot_product_distance(const BootMetric& boot, int x_points, double x_min) {
  const Profile& f = boot.model.sphere;
  const double lo = f.domain().lo + std::max(torpedo_tip_offset(boot.delta), x_min);
  double dist = 0.0;
  for (double x : linspace(lo, f.domain().hi, x_points)) {
    const Jet fj = f.eval(x);
    const double bent = doubly_warped_scalar(boot.model.sphere_dim, boot.model.arc.eval(x), fj);
    const double straight = doubly_warped_scalar(boot.model.sphere_dim, {1.0, 0.0, 0.0}, fj);
    dist = std::max(dist, std::abs(bent - straight));
  }
  return dist;
}

BootSearch lambda_for_psc(int n, double delta, double l1, double l4, const Grid2D& grid) {
  require_dim(n, 4, "boot");
  if (!(delta > 0.0)) fail(ErrorKind::InvalidParameter, "delta must be > 0");
  const double margin = boot_margin(n, delta);
  // s depends on x only, so the search runs on a two-column theta grid.
  Grid2D search_grid = grid;
  search_grid.theta_points = 2;

  BootSearch out;
  auto passes = [&](double Lambda) {
    ++out.evaluations;
    return boot_report(build_boot(n, delta, Lambda, l1, l4), search_grid).s_min >= margin;
  };

  const double floor = delta;
  const double ceiling = std::ldexp(delta, 40);
  if (passes(floor)) {
    out.Lambda = floor;
    out.hit_floor = true;
    return out;
  }
  double lo = floor;
  double hi = 2.0 * floor;
  while (!passes(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > ceiling)
      fail(ErrorKind::SearchFailure, "no Lambda up to 2^40 delta gives a psc boot");
  }
  // s_min is increasing in Lambda: the bend term -2m f'/(f (Lambda + x)) is
  // negative and shrinks in size.
  while (hi / lo - 1.0 > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? hi : lo) = mid;
    if (out.evaluations > kSearchBudget)
      fail(ErrorKind::SearchFailure, "Lambda bisection did not converge");
  }
  out.Lambda = hi;
  return out;
}

}  // namespace pscgeom
