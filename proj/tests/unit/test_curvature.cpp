#include <doctest.h>

#include <cmath>
#include <random>

#include "pscgeom/curvature.hpp"
#include "pscgeom/error.hpp"
#include "pscgeom/profiles.hpp"

using namespace pscgeom;

namespace {

Piece constant_piece(double lo, double hi, double v) {
  Piece p;
  p.type = PieceType::Constant;
  p.sub_domain = {lo, hi};
  p.value = v;
  return p;
}

Piece linear_piece(double lo, double hi, double v, double slope) {
  Piece p;
  p.type = PieceType::Linear;
  p.sub_domain = {lo, hi};
  p.origin = lo;
  p.value = v;
  p.slope = slope;
  return p;
}

Piece sine_piece(double lo, double hi, double amp, double rate) {
  Piece p;
  p.type = PieceType::Sine;
  p.sub_domain = {lo, hi};
  p.amplitude = amp;
  p.rate = rate;
  return p;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::ConfigError;
}

}  // namespace

TEST_CASE("links validate their invariants") {
  CHECK(kind_of([] { make_link(-1, 0.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { make_link(3, -1.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { make_link(1, 0.5); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { make_link(0, 2.0); }) == ErrorKind::InvalidParameter);
  CHECK(unit_sphere(4).s == 12.0);
  CHECK(link_from_name("S1").s == 0.0);
  CHECK(link_from_name("HP-like").dim == 8);
  CHECK(link_from_name("HP-like").s == 56.0);
  CHECK(link_from_name("points").dim == 0);
  CHECK(kind_of([] { link_from_name("torus"); }) == ErrorKind::InvalidParameter);
  CHECK(is_simple(circle_link()));
  CHECK(is_simple(point_link()));
  CHECK(is_simple(unit_sphere(3)));
  CHECK_FALSE(is_simple(make_link(2, 0.0, "T2")));
}

TEST_CASE("cone over the unit round S2 is flat") {
  const WarpedMetric w{unit_sphere(2), Profile({linear_piece(0.0, 0.5, 0.0, 1.0)}), true};
  const CurvatureReport r = scalar_single_warped(w);
  CHECK(r.verdict.kind == VerdictKind::Flat);
  CHECK(std::abs(r.s_min) <= 1e-8);
  CHECK(std::abs(r.s_max) <= 1e-8);
  CHECK(r.samples.size() == 4096);
  CHECK(r.samples.front().coords[0] == doctest::Approx(1e-3));
}

TEST_CASE("round cylinder over the circle is flat") {
  const WarpedMetric w{circle_link(), Profile({constant_piece(0.0, 1.0, 1.0)}), false};
  const CurvatureReport r = scalar_single_warped(w);
  CHECK(r.verdict.kind == VerdictKind::Flat);
  CHECK(r.s_min == 0.0);
  CHECK(r.s_max == 0.0);
}

TEST_CASE("sine profile recovers the round sphere") {
  const double eps = 1e-2;
  for (int l = 1; l <= 8; ++l) {
    const WarpedMetric w{unit_sphere(l), Profile({sine_piece(eps, M_PI - eps, 1.0, 1.0)}), false};
    const CurvatureReport r = scalar_single_warped(w);
    const double want = (l + 1.0) * l;
    CHECK(r.s_min == doctest::Approx(want).epsilon(1e-9));
    CHECK(r.s_max == doctest::Approx(want).epsilon(1e-9));
    CHECK(r.verdict.kind == VerdictKind::Positive);
    CHECK(r.crosscheck <= 1e-9);
  }
}

TEST_CASE("expanded and u-form agree on 100 random fixtures") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int l = dim(rng);
    const double s = l >= 2 ? 10.0 * unit(rng) * l * (l - 1) : 0.0;
    const Link link = make_link(l, s);
    Profile p;
    switch (i % 4) {
      case 0: p = make_transition(0.01 + 0.45 * unit(rng), 0.01 + 0.45 * unit(rng)).profile; break;
      case 1: p = make_torpedo_profile(0.1 + 3.0 * unit(rng), 2.0 * unit(rng)).profile; break;
      case 2: p = Profile({sine_piece(0.05, 3.0, 0.2 + unit(rng), 1.0)}); break;
      default: p = make_rescale_curve(0.1 + unit(rng), 0.1 + unit(rng), 4.0 + 4.0 * unit(rng)).profile.powered(0.5);
    }
    const bool tip = i % 4 == 1;
    Grid1D g;
    g.points = 512;
    if (tip) g.tip_offset = std::max(1e-3, 1e-3 * p.domain().hi);
    const CurvatureReport r = scalar_single_warped({link, p, tip}, g);
    for (const auto& smp : r.samples) {
      const Jet j = p.eval(smp.coords[0]);
      const double diff = std::abs(warped_scalar(link, j) - warped_scalar_uform(link, j));
      worst = std::max(worst, diff / std::max(1.0, warped_term_magnitude(link, j)));
    }
    CHECK(r.crosscheck <= 1e-9);
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("scaling law: c^2 s_L with c phi leaves s unchanged") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const int l = 2 + i % 6;
    const Link link = make_link(l, 0.5 + 20.0 * unit(rng));
    const double c = 0.1 + 10.0 * unit(rng);
    // phi^2 g_L = (c phi)^2 (g_L / c^2), and g_L / c^2 has scalar curvature c^2 s_L.
    const Link scaled = make_link(l, link.s * c * c);
    const Jet j{0.1 + unit(rng), 2.0 * unit(rng) - 1.0, 4.0 * unit(rng) - 2.0};
    const Jet cj{c * j.value, c * j.d1, c * j.d2};
    const double a = warped_scalar(link, j), b = warped_scalar(scaled, cj);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, warped_term_magnitude(link, j)));
  }
}

TEST_CASE("doubly warped: constant factors give the round sphere value") {
  const DoublyWarpedMetric w{2, Profile({constant_piece(0.0, 1.0, 3.0)}),
                             Profile({constant_piece(0.0, 1.0, 0.5)}), 1.0, false};
  const CurvatureReport r = scalar_doubly_warped(w);
  CHECK(r.s_min == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(r.s_max == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(r.samples.size() == 256u * 256u);
  CHECK(r.coordinate_names == std::vector<std::string>{"x", "theta"});
}

TEST_CASE("doubly warped: polar flat plane") {
  const DoublyWarpedMetric w{0, Profile({linear_piece(0.1, 2.0, 0.1, 1.0)}),
                             Profile({constant_piece(0.1, 2.0, 1.0)}), 2.0 * M_PI, false};
  const CurvatureReport r = scalar_doubly_warped(w);
  CHECK(r.verdict.kind == VerdictKind::Flat);
}

TEST_CASE("doubly warped: large bending radius approaches the product away from the cap") {
  const TorpedoProfile f = make_torpedo_profile(1.0, 1.0);
  const int m = 2;
  auto distance = [&](double Lambda, double from) {
    const Profile arc({linear_piece(0.0, f.profile.domain().hi, Lambda, 1.0)});
    double d = 0.0;
    for (double x : linspace(std::max(from, 1e-3), f.profile.domain().hi, 2048)) {
      const Jet fj = f.profile.eval(x);
      d = std::max(d, std::abs(doubly_warped_scalar(m, arc.eval(x), fj) -
                               doubly_warped_scalar(m, {1.0, 0.0, 0.0}, fj)));
    }
    return d;
  };
  CHECK(distance(1e3, f.bend_end) <= 2e-3);
  // Near the tip the cross term 2m A'f'/(A f) is O(1/(x Lambda)), so the
  // distance over the whole grid follows a 1/Lambda law instead.
  const double d1 = distance(1e3, 0.0), d2 = distance(2e3, 0.0);
  CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(1e-2));
}

TEST_CASE("multiply warped: product of base and cylinder") {
  const MultiplyWarpedMetric w{{5.0}, make_link(2, 2.0), Profile({constant_piece(0.0, 1.0, 1.0)})};
  const CurvatureReport r = scalar_multiply_warped(w);
  CHECK(r.s_min == 7.0);
  CHECK(r.s_max == 7.0);
}

TEST_CASE("multiply warped over the zero base is the single warped report") {
  const Profile p = make_transition(0.15, 0.2).profile.shifted(0.5);
  for (const Link& link : {unit_sphere(3), circle_link(), make_link(5, 3.0)}) {
    const CurvatureReport a = scalar_single_warped({link, p, false});
    const CurvatureReport b = scalar_multiply_warped({{0.0}, link, p});
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      CHECK(a.samples[i].coords == b.samples[i].coords);
      CHECK(a.samples[i].s == b.samples[i].s);
    }
    CHECK(a.verdict.kind == b.verdict.kind);
    CHECK(a.coordinate_names == b.coordinate_names);
  }
}

TEST_CASE("multiply warped: sqrt of a long rescale curve over a psc base") {
  const Profile phi = make_rescale_curve(1.0, 0.25, 16.0).profile.powered(0.5);
  const CurvatureReport r = scalar_multiply_warped({{1.0}, make_link(2, 2.0), phi});
  CHECK(r.verdict.kind == VerdictKind::Positive);
  CHECK(r.s_min > 0.0);
}

TEST_CASE("engines surface their preconditions") {
  const Profile cone({linear_piece(0.0, 1.0, 0.0, 1.0)});
  CHECK(kind_of([&] { scalar_single_warped({circle_link(), cone, false}); }) == ErrorKind::TipSampling);
  CHECK(kind_of([&] { scalar_single_warped({point_link(), cone, true}); }) == ErrorKind::DimensionError);
  CHECK(kind_of([&] { scalar_multiply_warped({{}, circle_link(), cone}); }) == ErrorKind::EmptyBaseField);
  const DoublyWarpedMetric bad{1, cone, Profile({constant_piece(0.0, 1.0, 1.0)}), 1.0, false};
  CHECK(kind_of([&] { scalar_doubly_warped(bad); }) == ErrorKind::TipSampling);
}

TEST_CASE("verdicts follow the tolerance budgets") {
  auto report = [](std::vector<double> values, double scale = 1.0) {
    std::vector<Sample> s;
    for (double v : values) s.push_back({{0.0}, v});
    return assemble_report({"t"}, std::move(s), scale, "test");
  };
  CHECK(report({0.0, 1e-9, -1e-9}).verdict.kind == VerdictKind::Flat);
  CHECK(report({-1e-9, 1.0}).verdict.kind == VerdictKind::NonNegative);
  const CurvatureReport pos = report({0.5, 2.0});
  CHECK(pos.verdict.kind == VerdictKind::Positive);
  CHECK(pos.verdict.margin == 0.5);
  CHECK(pos.positive(0.5));
  CHECK_FALSE(pos.positive(0.6));
  CHECK(pos.bounded_below(0.5));
  CHECK_FALSE(pos.bounded_below(0.51));
  CHECK(report({-1e-3, 1.0}).verdict.kind == VerdictKind::Indefinite);
  // Tolerances scale with the magnitudes involved.
  CHECK(report({-1e-6, 1e3}, 1e3).verdict.kind == VerdictKind::NonNegative);
  CHECK(report({-1e-6, 1.0}).verdict.kind == VerdictKind::Indefinite);

  const CurvatureReport merged = merge_reports({report({1.0, 2.0}), report({-5.0})});
  CHECK(merged.s_min == -5.0);
  CHECK(merged.s_max == 2.0);
  CHECK(merged.samples.size() == 3);
  CHECK(merged.verdict.kind == VerdictKind::Indefinite);
}
