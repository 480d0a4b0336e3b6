#pragma once

// Finite-difference scalar curvature on explicit coordinate charts.  This is
// the independent ground truth the closed-form engines are checked against:
// it only ever sees the metric matrix g(x), never a warping function.

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace pscgeom {

using Point = std::vector<double>;

struct ChartMetric {
  int dim = 2;  // 2, 3 or 4
  std::function<Eigen::MatrixXd(const Point&)> g;
  Point lo;  // coordinate box
  Point hi;
};

struct FdCurvature {
  double s_h = 0.0;         // step h
  double s_h2 = 0.0;        // step h/2
  double richardson = 0.0;  // (4 s_h2 - s_h) / 3
};

// Central-difference Christoffel -> Ricci -> scalar pipeline.  Throws
// SingularMetric if a stencil matrix is not positive definite and
// InvalidParameter if the stencil leaves the chart box.
double fd_scalar_curvature_at_step(const ChartMetric& chart, const Point& x, double h);
FdCurvature fd_scalar_curvature(const ChartMetric& chart, const Point& x, double h = 1e-3);

// |s(h) - s(h/2)| / |s(h/2) - s(h/4)|; order-two truncation gives ~4.
struct RichardsonEvidence {
  double ratio = 0.0;
  bool exact = false;  // differences at rounding level: nothing to measure
};

RichardsonEvidence richardson_ratio(const ChartMetric& chart, const Point& x, double h);

// A chart together with the closed-form engine value at each point.
struct OracleFixture {
  std::string id;
  std::string description;
  ChartMetric chart;
  std::vector<Point> points;             // >= 25 interior points
  std::vector<Point> richardson_points;  // inside smooth pieces
  // corrupt = true flips the sign of the engine's second-derivative term:
  // the negative control for validate_engine.
  std::function<double(const Point&, bool corrupt)> engine;
};

std::vector<OracleFixture> registered_fixtures();
std::vector<std::string> fixture_ids();

struct ValidationOptions {
  double h = 1e-3;
  double richardson_h = 1e-2;
  double tolerance = 1e-4;
  double richardson_min_ratio = 3.0;
  bool corrupt_engine = false;
};

struct ValidationReport {
  std::string id;
  std::string description;
  int points = 0;
  double max_diff = 0.0;
  double min_richardson_ratio = 0.0;  // over non-exact Richardson points
  int richardson_exact = 0;
  bool engine_ok = false;
  bool richardson_ok = false;
  bool passed() const { return engine_ok && richardson_ok; }
};

ValidationReport validate_engine(const std::string& fixture_id,
                                 const ValidationOptions& options = {});
std::vector<ValidationReport> validate_all(const ValidationOptions& options = {});

// Berger-sphere chart of the Hopf canonical variation,
//   1/4 (dtheta^2 + sin^2 theta dphi^2) + tau/4 (dpsi + cos theta dphi)^2,
// coordinates (theta, phi, psi).
ChartMetric berger_chart(double tau);

// Euclidean plane dx^2 + dy^2 and the unit sphere dtheta^2 + sin^2 theta dphi^2.
ChartMetric flat_plane_chart();
ChartMetric round_sphere_chart();

// "flat-plane", "round-s2" or "berger" (tau used by the last only).
ChartMetric named_chart(const std::string& name, double tau = 1.0);

}  // namespace pscgeom
