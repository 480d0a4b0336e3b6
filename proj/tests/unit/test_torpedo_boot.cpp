#include <doctest.h>

#include <cmath>

#include "pscgeom/error.hpp"
#include "pscgeom/torpedo_boot.hpp"

using namespace pscgeom;

namespace {

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

TEST_CASE("torpedo grid: positive with the neck as minimum") {
  for (int n : {3, 4, 6})
    for (double delta : {0.25, 1.0, 2.0})
      for (double lambda : {0.0, 1.0, 5.0}) {
        CAPTURE(n);
        CAPTURE(delta);
        CAPTURE(lambda);
        const TorpedoMetric t = build_torpedo(n, delta, lambda);
        const CurvatureReport r = torpedo_report(t);
        CHECK(r.verdict.kind == VerdictKind::Positive);
        CHECK(r.s_min > 0.0);
        CHECK(r.s_min == doctest::Approx(torpedo_neck_value(n, delta)).epsilon(1e-6));
        for (const auto& s : r.samples) {
          if (s.coords[0] <= t.profile.bend_end)
            CHECK(s.s == doctest::Approx(torpedo_cap_value(n, delta)).epsilon(1e-6));
          if (s.coords[0] >= t.profile.neck_start)
            CHECK(s.s == doctest::Approx(torpedo_neck_value(n, delta)).epsilon(1e-6));
        }
      }
}

TEST_CASE("torpedo (3, 1, 1): cap 6, neck 2") {
  CHECK(torpedo_cap_value(3, 1.0) == 6.0);
  CHECK(torpedo_neck_value(3, 1.0) == 2.0);
  const CurvatureReport r = torpedo_report(build_torpedo(3, 1.0, 1.0));
  CHECK(r.s_min == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.samples.front().coords[0] == doctest::Approx(1e-3));
}

TEST_CASE("torpedo (4, 0.5, 1): s_min = 24") {
  CHECK(torpedo_report(build_torpedo(4, 0.5, 1.0)).s_min == doctest::Approx(24.0).epsilon(1e-12));
}

TEST_CASE("extending the neck leaves the curvature range unchanged") {
  for (int n : {3, 5}) {
    const TorpedoMetric a = build_torpedo(n, 1.0, 1.0), b = build_torpedo(n, 1.0, 2.0);
    // Sample the same r values in both so the range comparison is exact.
    double amin = INFINITY, amax = -INFINITY, bmin = INFINITY, bmax = -INFINITY;
    for (double r : linspace(1e-3, 2.5, 4001)) {
      const double sa = warped_scalar(a.as_warped.link, a.profile.profile.eval(r));
      const double sb = warped_scalar(b.as_warped.link, b.profile.profile.eval(r));
      amin = std::min(amin, sa), amax = std::max(amax, sa);
      bmin = std::min(bmin, sb), bmax = std::max(bmax, sb);
    }
    for (double r : linspace(2.5, 3.5, 101)) {
      const double sb = warped_scalar(b.as_warped.link, b.profile.profile.eval(r));
      bmin = std::min(bmin, sb), bmax = std::max(bmax, sb);
    }
    CHECK(amin == bmin);
    CHECK(amax == bmax);
  }
}

TEST_CASE("torpedo preconditions") {
  CHECK(kind_of([] { build_torpedo(2, 1.0, 1.0); }) == ErrorKind::DimensionError);
  CHECK(kind_of([] { build_torpedo(3, 0.0, 1.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { build_torpedo(3, 1.0, -1.0); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("delta_for_bound inverts the neck value and re-verifies") {
  CHECK(delta_for_bound(3, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(delta_for_bound(4, 24.0, 1.0) == doctest::Approx(0.5).epsilon(1e-6));
  for (int n : {3, 4, 6})
    for (double b : {0.5, 3.0, 40.0}) {
      const double d = delta_for_bound(n, b, 1.0);
      const CurvatureReport r = torpedo_report(build_torpedo(n, d, 1.0));
      CHECK(r.bounded_below(b));
      CHECK(r.s_min <= 2.0 * b);
    }
  CHECK(kind_of([] { delta_for_bound(3, 0.0, 1.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { delta_for_bound(2, 1.0, 1.0); }) == ErrorKind::DimensionError);
}

TEST_CASE("stretched torpedo (4, 1, 1, 1)") {
  const StretchedReport r = stretched_report(build_stretched(4, 1.0, 1.0, 1.0));
  CHECK(r.whole.verdict.kind == VerdictKind::Positive);
  CHECK(r.whole.s_min == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.column.s_min == doctest::Approx(torpedo_neck_value(3, 1.0)).epsilon(1e-9));
  for (double l2 : {0.5, 3.0, 10.0}) {
    const StretchedReport q = stretched_report(build_stretched(4, 1.0, 1.0, l2));
    CHECK(q.whole.s_min == r.whole.s_min);
    CHECK(q.whole.s_max == r.whole.s_max);
  }
  CHECK(kind_of([] { build_stretched(3, 1.0, 1.0, 1.0); }) == ErrorKind::DimensionError);
}

TEST_CASE("boot geometry and leg lengths") {
  const BootMetric b = build_boot(4, 1.0, 5.0, 1.0, 2.0);
  CHECK(b.model.sphere_dim == 2);
  CHECK(b.l2 == doctest::Approx(0.5 * M_PI * 5.0 + 1.0));
  CHECK(b.l3 == doctest::Approx(0.5 * M_PI * (5.0 + kTorpedoCap + 1.0) + 2.0));
  CHECK(b.model.arc(0.0) == 5.0);
  CHECK(b.model.arc.eval(1.0).d1 == 1.0);
  CHECK(b.model.theta_len == doctest::Approx(M_PI / 2));

  const CurvatureReport r = boot_report(b);
  CHECK(r.samples.size() == 256u * 256u);
  for (const auto& s : r.samples) CHECK(std::isfinite(s.s));
  CHECK(r.samples.front().coords[0] == doctest::Approx(1e-3));
}

TEST_CASE("boot preconditions") {
  CHECK(kind_of([] { build_boot(3, 1.0, 10.0, 1.0, 1.0); }) == ErrorKind::DimensionError);
  CHECK(kind_of([] { build_boot(4, 1.0, 0.0, 1.0, 1.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { build_boot(4, 1.0, 1.0, 0.0, 1.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { lambda_for_psc(3, 1.0, 1.0, 1.0); }) == ErrorKind::DimensionError);
}

TEST_CASE("large bending radius: the boot approaches the product field") {
  const BootMetric b = build_boot(4, 1.0, 1e6, 1.0, 1.0);
  // Away from the toe tip the bend terms are far below 1e-4.
  CHECK(boot_product_distance(b, 1024, 0.1) <= 1e-4);
  // On the whole tip-excluded grid the 2m A'f'/(A f) term is about 4/(r Lambda).
  const double full = boot_product_distance(b, 1024);
  CHECK(full * 1e6 == doctest::Approx(4.0 / 1e-3).epsilon(0.01));
}

TEST_CASE("product distance halves when Lambda doubles") {
  double prev = boot_product_distance(build_boot(4, 1.0, 100.0, 1.0, 1.0));
  for (int k = 1; k <= 4; ++k) {
    const double d = boot_product_distance(build_boot(4, 1.0, 100.0 * std::ldexp(1.0, k), 1.0, 1.0));
    CHECK(prev / d == doctest::Approx(2.0).epsilon(0.2));
    CHECK(d <= prev / 2.0 * 1.0001);
    prev = d;
  }
}

TEST_CASE("lambda_for_psc: verified, tight and monotone beyond") {
  for (int n : {4, 5, 6})
    for (double delta : {0.5, 1.0}) {
      CAPTURE(n);
      CAPTURE(delta);
      const BootSearch s = lambda_for_psc(n, delta, 1.0, 1.0);
      const double margin = boot_margin(n, delta);
      CHECK(margin == doctest::Approx(0.1 * (n - 2) * (n - 3) / (delta * delta)));
      const CurvatureReport r = boot_report(build_boot(n, delta, s.Lambda, 1.0, 1.0));
      CHECK(r.verdict.kind == VerdictKind::Positive);
      CHECK(r.s_min >= margin);
      if (!s.hit_floor) {
        const CurvatureReport half = boot_report(build_boot(n, delta, 0.5 * s.Lambda, 1.0, 1.0));
        CHECK(half.s_min < margin);
      }
      for (double k : {2.0, 4.0})
        CHECK(boot_report(build_boot(n, delta, k * s.Lambda, 1.0, 1.0)).s_min >= margin);
    }
}

TEST_CASE("halving delta does not double Lambda*") {
  const double a = lambda_for_psc(5, 1.0, 1.0, 1.0).Lambda;
  const double b = lambda_for_psc(5, 0.5, 1.0, 1.0).Lambda;
  CHECK(b <= 2.0 * a);
}
