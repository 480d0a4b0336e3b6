#include "pscgeom/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pscgeom/cones.hpp"
#include "pscgeom/curvature.hpp"
#include "pscgeom/error.hpp"
#include "pscgeom/submersion.hpp"
#include "pscgeom/torpedo_boot.hpp"

namespace pscgeom {

namespace {

using Eigen::MatrixXd;

MatrixXd eval_checked(const ChartMetric& chart, const Point& x) {
  MatrixXd g = chart.g(x);
  if (g.rows() != chart.dim || g.cols() != chart.dim)
    fail(ErrorKind::InvalidParameter, "chart metric has the wrong shape");
  Eigen::LLT<MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    fail(ErrorKind::SingularMetric, "metric is not positive definite at a stencil point");
  return g;
}

Point moved(Point x, int i, double di, int j = -1, double dj = 0.0) {
  x[static_cast<std::size_t>(i)] += di;
  if (j >= 0) x[static_cast<std::size_t>(j)] += dj;
  return x;
}

}  // namespace

double fd_scalar_curvature_at_step(const ChartMetric& chart, const Point& x, double h) {
  const int d = chart.dim;
  if (d < 2 || d > 4) fail(ErrorKind::InvalidParameter, "oracle charts have dimension 2..4");
  if (!(h > 0.0)) fail(ErrorKind::InvalidParameter, "finite-difference step must be > 0");
  if (static_cast<int>(x.size()) != d)
    fail(ErrorKind::InvalidParameter, "point dimension does not match chart");
  for (int i = 0; i < d; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (x[k] - 2 * h < chart.lo[k] || x[k] + 2 * h > chart.hi[k])
      fail(ErrorKind::InvalidParameter, "stencil leaves the chart box");
  }

  const MatrixXd g0 = eval_checked(chart, x);
  std::vector<MatrixXd> dg(d), gp(d), gm(d);
  for (int i = 0; i < d; ++i) {
    gp[i] = eval_checked(chart, moved(x, i, h));
    gm[i] = eval_checked(chart, moved(x, i, -h));
    dg[i] = (gp[i] - gm[i]) / (2 * h);
  }
  std::vector<std::vector<MatrixXd>> ddg(d, std::vector<MatrixXd>(d));
  for (int i = 0; i < d; ++i) {
    ddg[i][i] = (gp[i] - 2 * g0 + gm[i]) / (h * h);
    for (int j = i + 1; j < d; ++j) {
      const MatrixXd pp = eval_checked(chart, moved(x, i, h, j, h));
      const MatrixXd pm = eval_checked(chart, moved(x, i, h, j, -h));
      const MatrixXd mp = eval_checked(chart, moved(x, i, -h, j, h));
      const MatrixXd mm = eval_checked(chart, moved(x, i, -h, j, -h));
      ddg[i][j] = (pp - pm - mp + mm) / (4 * h * h);
      ddg[j][i] = ddg[i][j];
    }
  }

  const MatrixXd gi = g0.inverse();
  // first[k](i,j) = Gamma_{k i j}, lowered index first.
  std::vector<MatrixXd> first(d, MatrixXd::Zero(d, d));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        first[k](i, j) = 0.5 * (dg[i](k, j) + dg[j](k, i) - dg[k](i, j));

  std::vector<MatrixXd> gamma(d, MatrixXd::Zero(d, d));  // Gamma^a_{ij}
  for (int a = 0; a < d; ++a)
    for (int k = 0; k < d; ++k) gamma[a] += gi(a, k) * first[k];

  // dgamma[c][a](i,j) = d_c Gamma^a_{ij}
  std::vector<std::vector<MatrixXd>> dgamma(d, std::vector<MatrixXd>(d, MatrixXd::Zero(d, d)));
  for (int c = 0; c < d; ++c) {
    const MatrixXd dgi = -gi * dg[c] * gi;
    for (int k = 0; k < d; ++k) {
      MatrixXd dfirst(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          dfirst(i, j) = 0.5 * (ddg[c][i](k, j) + ddg[c][j](k, i) - ddg[c][k](i, j));
      for (int a = 0; a < d; ++a) dgamma[c][a] += dgi(a, k) * first[k] + gi(a, k) * dfirst;
    }
  }

  // R_ij = d_a G^a_ij - d_j G^a_ia + G^a_ab G^b_ij - G^a_jb G^b_ia
  MatrixXd ricci = MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double r = 0.0;
      for (int a = 0; a < d; ++a) {
        r += dgamma[a][a](i, j) - dgamma[j][a](i, a);
        for (int b = 0; b < d; ++b)
          r += gamma[a](a, b) * gamma[b](i, j) - gamma[a](j, b) * gamma[b](i, a);
      }
      ricci(i, j) = r;
    }
  }
  return (gi.cwiseProduct(ricci)).sum();
}

FdCurvature fd_scalar_curvature(const ChartMetric& chart, const Point& x, double h) {
  FdCurvature out;
  out.s_h = fd_scalar_curvature_at_step(chart, x, h);
  out.s_h2 = fd_scalar_curvature_at_step(chart, x, 0.5 * h);
  out.richardson = (4.0 * out.s_h2 - out.s_h) / 3.0;
  return out;
}

RichardsonEvidence richardson_ratio(const ChartMetric& chart, const Point& x, double h) {
  const double s1 = fd_scalar_curvature_at_step(chart, x, h);
  const double s2 = fd_scalar_curvature_at_step(chart, x, 0.5 * h);
  const double s4 = fd_scalar_curvature_at_step(chart, x, 0.25 * h);
  const double d1 = std::abs(s1 - s2);
  const double d2 = std::abs(s2 - s4);
  const double noise = 1e-9 * std::max(1.0, std::abs(s4));
  if (d1 < noise) return {0.0, true};
  return {d2 > 0.0 ? d1 / d2 : std::numeric_limits<double>::infinity(), false};
}

ChartMetric berger_chart(double tau) {
  ChartMetric c;
  c.dim = 3;
  c.lo = {0.05, -10.0, -10.0};
  c.hi = {3.09, 10.0, 10.0};
  c.g = [tau](const Point& x) {
    const double ct = std::cos(x[0]);
    const double st = std::sin(x[0]);
    MatrixXd g = MatrixXd::Zero(3, 3);
    g(0, 0) = 0.25;
    g(1, 1) = 0.25 * st * st + 0.25 * tau * ct * ct;
    g(1, 2) = g(2, 1) = 0.25 * tau * ct;
    g(2, 2) = 0.25 * tau;
    return g;
  };
  return c;
}

ChartMetric flat_plane_chart() {
  ChartMetric c;
  c.dim = 2;
  c.lo = {-10.0, -10.0};
  c.hi = {10.0, 10.0};
  c.g = [](const Point&) { return MatrixXd::Identity(2, 2); };
  return c;
}

ChartMetric round_sphere_chart() {
  ChartMetric c;
  c.dim = 2;
  c.lo = {0.05, -10.0};
  c.hi = {3.09, 10.0};
  c.g = [](const Point& x) {
    MatrixXd g = MatrixXd::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = std::sin(x[0]) * std::sin(x[0]);
    return g;
  };
  return c;
}

ChartMetric named_chart(const std::string& name, double tau) {
  if (name == "flat-plane") return flat_plane_chart();
  if (name == "round-s2") return round_sphere_chart();
  if (name == "berger") return berger_chart(tau);
  fail(ErrorKind::InvalidParameter, "unknown chart '" + name + "' (flat-plane, round-s2, berger)");
}

namespace {

Jet maybe_corrupt(Jet j, bool corrupt) {
  if (corrupt) j.d2 = -j.d2;
  return j;
}

// dt^2 + phi(t)^2 g_L with g_L the unit circle (l = 1) or unit S^2 (l = 2).
ChartMetric warped_chart(const Profile& phi, int l, Interval t_box) {
  ChartMetric c;
  c.dim = l + 1;
  c.lo = {t_box.lo, 0.05, -10.0};
  c.hi = {t_box.hi, 3.09, 10.0};
  c.lo.resize(static_cast<std::size_t>(c.dim));
  c.hi.resize(static_cast<std::size_t>(c.dim));
  if (l == 1) {
    c.lo[1] = -10.0;
    c.hi[1] = 10.0;
  }
  c.g = [phi, l](const Point& x) {
    const double p = phi(x[0]);
    MatrixXd g = MatrixXd::Zero(l + 1, l + 1);
    g(0, 0) = 1.0;
    g(1, 1) = p * p;
    if (l == 2) g(2, 2) = p * p * std::sin(x[1]) * std::sin(x[1]);
    return g;
  };
  return c;
}

// dx^2 + A^2 dtheta^2 + f^2 ds^2_m, m in {1, 2}; coordinates (x, theta, sphere...).
ChartMetric doubly_chart(const Profile& arc, const Profile& f, int m, Interval x_box) {
  ChartMetric c;
  c.dim = m + 2;
  c.lo = {x_box.lo, -10.0, m == 2 ? 0.05 : -10.0, -10.0};
  c.hi = {x_box.hi, 10.0, m == 2 ? 3.09 : 10.0, 10.0};
  c.lo.resize(static_cast<std::size_t>(c.dim));
  c.hi.resize(static_cast<std::size_t>(c.dim));
  c.g = [arc, f, m](const Point& x) {
    const double a = arc(x[0]);
    const double fv = f(x[0]);
    MatrixXd g = MatrixXd::Zero(m + 2, m + 2);
    g(0, 0) = 1.0;
    g(1, 1) = a * a;
    g(2, 2) = fv * fv;
    if (m == 2) g(3, 3) = fv * fv * std::sin(x[2]) * std::sin(x[2]);
    return g;
  };
  return c;
}

// Points along the first coordinate; the angular coordinates drift a little
// so the fixture is not sampled on a single geodesic.
std::vector<Point> sweep(int dim, double lo, double hi, int count = 25) {
  std::vector<Point> pts;
  const auto ts = linspace(lo, hi, count);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    Point p(static_cast<std::size_t>(dim), 0.0);
    p[0] = ts[k];
    for (std::size_t i = 1; i < p.size(); ++i)
      p[i] = 0.9 + 0.05 * static_cast<double>((k + i) % 7);
    pts.push_back(p);
  }
  return pts;
}

// Central differences lose an order across a C2 junction, so sample points
// are kept 5e-3 clear of piece boundaries.
std::vector<Point> clear_of_junctions(std::vector<Point> pts, const Profile& p,
                                      std::size_t coord = 0) {
  for (auto& pt : pts) {
    for (std::size_t k = 1; k < p.pieces().size(); ++k) {
      const double j = p.pieces()[k].sub_domain.lo;
      if (std::abs(pt[coord] - j) < 5e-3) pt[coord] = j + 1e-2;
    }
  }
  return pts;
}

std::vector<Point> at(int dim, std::initializer_list<double> firsts) {
  std::vector<Point> pts;
  for (double t : firsts) {
    Point p(static_cast<std::size_t>(dim), 1.1);
    p[0] = t;
    pts.push_back(p);
  }
  return pts;
}

OracleFixture single_fixture(std::string id, std::string desc, const Link& link,
                             const Profile& phi, Interval box, Interval sampled,
                             std::initializer_list<double> smooth_points) {
  OracleFixture f;
  f.id = std::move(id);
  f.description = std::move(desc);
  f.chart = warped_chart(phi, link.dim, box);
  f.points = clear_of_junctions(sweep(f.chart.dim, sampled.lo, sampled.hi), phi);
  f.richardson_points = at(f.chart.dim, smooth_points);
  f.engine = [link, phi](const Point& x, bool corrupt) {
    return warped_scalar(link, maybe_corrupt(phi.eval(x[0]), corrupt));
  };
  return f;
}

OracleFixture doubly_fixture(std::string id, std::string desc, int m, const Profile& arc,
                             const Profile& sphere, Interval box, Interval sampled,
                             std::initializer_list<double> smooth_points) {
  OracleFixture f;
  f.id = std::move(id);
  f.description = std::move(desc);
  f.chart = doubly_chart(arc, sphere, m, box);
  f.points = clear_of_junctions(
      clear_of_junctions(sweep(f.chart.dim, sampled.lo, sampled.hi), arc), sphere);
  f.richardson_points = at(f.chart.dim, smooth_points);
  f.engine = [m, arc, sphere](const Point& x, bool corrupt) {
    return doubly_warped_scalar(m, maybe_corrupt(arc.eval(x[0]), corrupt),
                                maybe_corrupt(sphere.eval(x[0]), corrupt));
  };
  return f;
}

Profile sine_profile(Interval dom) {
  Piece p;
  p.type = PieceType::Sine;
  p.sub_domain = dom;
  p.amplitude = 1.0;
  p.rate = 1.0;
  return Profile({p});
}

Profile bumpy_arc() {
  return Profile({quintic_hermite(0.1, 2.6, {1.0, 0.5, -0.3}, {1.5, 0.1, 0.2})});
}

OracleFixture berger_fixture(double tau) {
  OracleFixture f;
  f.id = "berger_tau" + std::to_string(static_cast<int>(tau));
  f.description = "Hopf canonical variation (Berger sphere), tau = " + std::to_string(tau);
  f.chart = berger_chart(tau);
  f.points = sweep(3, 0.3, 2.8);
  f.richardson_points = at(3, {0.7, 1.3, 2.1});
  f.engine = [tau](const Point&, bool corrupt) {
    const SubmersionSpec spec = hopf_fixture(tau, 1);
    if (!corrupt) return oneill_scalar(spec).s_min;
    // Sign hook: the A-tensor term enters with the wrong sign.
    return spec.base_s[0] + spec.fibre.s / tau + tau * spec.a_norm_sq[0];
  };
  return f;
}

}  // namespace

std::vector<OracleFixture> registered_fixtures() {
  std::vector<OracleFixture> out;

  const ConeMetric cone1 = build_cone(circle_link());
  out.push_back(single_fixture("cone_l1", "cone over the circle, 2D chart (t, theta)",
                               circle_link(), cone1.as_warped->profile, {0.02, 0.5},
                               {0.05, 0.45}, {0.1, 0.25, 0.4}));
  const ConeMetric cone2 = build_cone(unit_sphere(2));
  out.push_back(single_fixture("cone_l2", "cone over unit S^2, 3D chart (t, alpha, beta)",
                               unit_sphere(2), cone2.as_warped->profile, {0.02, 0.5},
                               {0.05, 0.45}, {0.1, 0.25, 0.4}));

  out.push_back(single_fixture("sphere_sin_l2", "dt^2 + sin^2 t g_S2 (round S^3)",
                               unit_sphere(2), sine_profile({0.1, 3.04}), {0.1, 3.04},
                               {0.3, 2.8}, {0.7, 1.5, 2.3}));

  const TransitionFunction a = make_transition(0.1, 0.1);
  out.push_back(single_fixture("attaching_l1", "attaching metric over the circle",
                               circle_link(), a.profile, {0.0, 1.0}, {0.02, 0.98},
                               {0.3, 0.5, 0.7}));
  out.push_back(single_fixture("attaching_l2", "attaching metric over unit S^2",
                               unit_sphere(2), a.profile, {0.0, 1.0}, {0.02, 0.98},
                               {0.3, 0.5, 0.7}));

  const TorpedoMetric torp = build_torpedo(3, 1.0, 1.0);
  out.push_back(single_fixture("torpedo_n3", "torpedo (n=3, delta=1, lambda=1)",
                               unit_sphere(2), torp.profile.profile, {0.0, 2.5},
                               {0.1, 2.4}, {0.4, 0.7, 1.0}));

  out.push_back(doubly_fixture("doubly_m1", "dx^2 + A^2 dtheta^2 + sin^2 x dbeta^2", 1,
                               bumpy_arc(), sine_profile({0.1, 2.6}), {0.1, 2.6},
                               {0.2, 2.5}, {0.6, 1.3, 2.0}));
  out.push_back(doubly_fixture("doubly_m2", "dx^2 + A^2 dtheta^2 + sin^2 x ds^2_2", 2,
                               bumpy_arc(), sine_profile({0.1, 2.6}), {0.1, 2.6},
                               {0.2, 2.5}, {0.6, 1.3, 2.0}));

  const BootMetric boot = build_boot(4, 1.0, 10.0, 1.0, 1.0);
  out.push_back(doubly_fixture("boot_4_1_10_1_1", "boot slice (n=4, delta=1, Lambda=10)", 2,
                               boot.model.arc, boot.model.sphere, {0.0, 2.5}, {0.1, 2.4},
                               {0.4, 0.7, 1.0}));

  {
    const RescaleCurve gamma = make_rescale_curve(1.0, 0.25, 4.0);
    const Profile phi = gamma.profile.powered(0.5);
    OracleFixture f;
    f.id = "multiply_rescale";
    f.description = "dy^2 + dt^2 + gamma(t) g_S2 over a flat 1D base, gamma 1 -> 0.25, b = 4";
    f.chart.dim = 4;
    f.chart.lo = {-10.0, 0.0, 0.05, -10.0};
    f.chart.hi = {10.0, 4.0, 3.09, 10.0};
    f.chart.g = [phi](const Point& x) {
      const double p = phi(x[1]);
      MatrixXd g = MatrixXd::Zero(4, 4);
      g(0, 0) = 1.0;
      g(1, 1) = 1.0;
      g(2, 2) = p * p;
      g(3, 3) = p * p * std::sin(x[2]) * std::sin(x[2]);
      return g;
    };
    for (auto p : sweep(4, 0.2, 3.8)) {
      std::swap(p[0], p[1]);
      f.points.push_back(p);
    }
    f.points = clear_of_junctions(std::move(f.points), phi, 1);
    for (auto p : at(4, {1.5, 2.0, 2.5})) {
      std::swap(p[0], p[1]);
      f.richardson_points.push_back(p);
    }
    const Link s2 = unit_sphere(2);
    f.engine = [phi, s2](const Point& x, bool corrupt) {
      return multiply_warped_scalar(0.0, s2, maybe_corrupt(phi.eval(x[1]), corrupt));
    };
    out.push_back(std::move(f));
  }

  for (double tau : {1.0, 2.0, 4.0}) out.push_back(berger_fixture(tau));
  return out;
}

std::vector<std::string> fixture_ids() {
  std::vector<std::string> ids;
  for (const auto& f : registered_fixtures()) ids.push_back(f.id);
  return ids;
}

namespace {

ValidationReport run_fixture(const OracleFixture& f, const ValidationOptions& opt) {
  ValidationReport r;
  r.id = f.id;
  r.description = f.description;
  r.points = static_cast<int>(f.points.size());
  for (const auto& p : f.points) {
    const double fd = fd_scalar_curvature(f.chart, p, opt.h).richardson;
    r.max_diff = std::max(r.max_diff, std::abs(fd - f.engine(p, opt.corrupt_engine)));
  }
  r.engine_ok = r.points >= 25 && r.max_diff <= opt.tolerance;

  r.min_richardson_ratio = std::numeric_limits<double>::infinity();
  for (const auto& p : f.richardson_points) {
    const auto ev = richardson_ratio(f.chart, p, opt.richardson_h);
    if (ev.exact) {
      ++r.richardson_exact;
    } else {
      r.min_richardson_ratio = std::min(r.min_richardson_ratio, ev.ratio);
    }
  }
  r.richardson_ok = r.min_richardson_ratio >= opt.richardson_min_ratio;
  return r;
}

}  // namespace

ValidationReport validate_engine(const std::string& fixture_id,
                                 const ValidationOptions& options) {
  for (const auto& f : registered_fixtures())
    if (f.id == fixture_id) return run_fixture(f, options);
  fail(ErrorKind::InvalidParameter, "unknown oracle fixture '" + fixture_id + "'");
}

std::vector<ValidationReport> validate_all(const ValidationOptions& options) {
  std::vector<ValidationReport> out;
  for (const auto& f : registered_fixtures()) out.push_back(run_fixture(f, options));
  return out;
}

}  // namespace pscgeom
