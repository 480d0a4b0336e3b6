#pragma once

// Closed-form scalar curvature of the three warped shapes every construction
// reduces to:
//
//   single   dt^2 + phi(t)^2 g_L
//   doubly   dx^2 + A(x)^2 dtheta^2 + f(x)^2 ds^2_m
//   multiply h + dt^2 + phi(t)^2 g_L      (h a psc base, sampled by s_h)

#include <optional>
#include <string>
#include <vector>

#include "pscgeom/profiles.hpp"

namespace pscgeom {

// A closed fibre manifold reduced to what the curvature formulas see.
struct Link {
  int dim = 1;
  double s = 0.0;  // constant scalar curvature of g_L
  std::string name;
};

// Validates the Link invariants (s >= 0, dim <= 1 forces s = 0).
Link make_link(int dim, double s, std::string name = {});
Link unit_sphere(int dim);
Link circle_link();
Link point_link(int count = 2);

// Admissible links for the cone construction: homogeneous psc (dim >= 2,
// s > 0), the circle, or a finite set of points.
bool is_simple(const Link& link);

// Parses "S1", "S3", "points", "HP-like" into a Link.
Link link_from_name(const std::string& name);

struct WarpedMetric {
  Link link;
  Profile profile;
  bool tip = false;  // profile collapses at its left endpoint
};

struct DoublyWarpedMetric {
  int sphere_dim = 0;
  Profile arc;     // A(x), circle warping
  Profile sphere;  // f(x), unit-sphere warping
  double theta_len = 1.0;
  bool tip = false;
};

struct MultiplyWarpedMetric {
  std::vector<double> base_s;
  Link link;
  Profile profile;
};

struct Tolerances {
  double flat = 1e-8;         // |s| <= flat * (1 + scale)
  double non_negative = 1e-8; // s >= -non_negative * scale
};

struct Grid1D {
  int points = 4096;
  // Distance kept from a collapsed tip.  Builders with an intrinsic length
  // (torpedo delta) pass max(1e-3, 1e-3 * delta).
  double tip_offset = 1e-3;
  std::optional<double> lo;
  std::optional<double> hi;
};

struct Grid2D {
  int x_points = 256;
  int theta_points = 256;
  double tip_offset = 1e-3;
};

enum class VerdictKind { Flat, NonNegative, Positive, Indefinite };

std::string to_string(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::Indefinite;
  double tolerance = 0.0;  // tolerance used for Flat / NonNegative
  double margin = 0.0;     // s_min when Positive
};

struct Sample {
  std::vector<double> coords;
  double s = 0.0;
};

struct CurvatureReport {
  std::vector<std::string> coordinate_names;
  std::vector<Sample> samples;
  double s_min = 0.0;
  double s_max = 0.0;
  double scale = 1.0;
  Tolerances tolerances;
  Verdict verdict;
  std::string grid;
  // Largest relative disagreement between the two algebraic routes, when the
  // engine has two (single warped only); 0 otherwise.
  double crosscheck = 0.0;

  bool flat() const;
  bool non_negative() const;
  bool positive(double margin = 0.0) const;
  bool bounded_below(double b) const;
};

// Computes s_min/s_max and assigns the strongest verdict that holds.
CurvatureReport assemble_report(std::vector<std::string> coordinate_names,
                                std::vector<Sample> samples, double scale,
                                std::string grid, const Tolerances& tol = {});

// Concatenates samples of reports sharing coordinate names and re-derives the
// verdict with the largest scale among them.
CurvatureReport merge_reports(const std::vector<CurvatureReport>& parts,
                              const Tolerances& tol = {});

// Pointwise closed forms.
double warped_scalar(const Link& link, const Jet& phi);
// Same quantity through u = phi^((l+1)/2):
//   s = -(4l/(l+1)) u''/u + s_L u^(-4/(l+1)).
double warped_scalar_uform(const Link& link, const Jet& phi);
// Sum of absolute values of the terms of warped_scalar, the natural scale
// for relative comparisons when s itself cancels to zero.
double warped_term_magnitude(const Link& link, const Jet& phi);
double doubly_warped_scalar(int sphere_dim, const Jet& arc, const Jet& sphere);
double multiply_warped_scalar(double base_s, const Link& link, const Jet& phi);

CurvatureReport scalar_single_warped(const WarpedMetric& w, const Grid1D& grid = {},
                                     const Tolerances& tol = {});
CurvatureReport scalar_doubly_warped(const DoublyWarpedMetric& w,
                                     const Grid2D& grid = {},
                                     const Tolerances& tol = {});
CurvatureReport scalar_multiply_warped(const MultiplyWarpedMetric& w,
                                       const Grid1D& grid = {},
                                       const Tolerances& tol = {});

}  // namespace pscgeom
