#include <doctest.h>

#include <cmath>
#include <random>

#include "pscgeom/error.hpp"
#include "pscgeom/profiles.hpp"
#include "pscgeom/report_io.hpp"

using namespace pscgeom;

namespace {

void check_transition_invariants(const TransitionFunction& a, int points = 4096) {
  const DerivativeBounds b = derivative_bounds(a.profile, points);
  CHECK(b.d2_max <= 1e-9);
  CHECK(b.d1_min >= -1e-9);
  CHECK(b.d1_max <= 1.0 + 1e-9);
  CHECK(a.profile(0.0) == 0.5);
  CHECK(a.profile(1.0) == 1.0);
  for (double t : linspace(0.0, a.eps0, 17)) CHECK(a.profile(t) == doctest::Approx(0.5 + t).epsilon(1e-15));
  for (double t : linspace(1.0 - a.eps1, 1.0, 17)) CHECK(a.profile(t) == 1.0);
  CHECK(a.profile.max_junction_residual() <= 1e-10);
}

void check_fd(const Profile& p) {
  const FdConsistency fd = fd_consistency(p, 2048, 1e-4);
  CHECK(fd.max_d1_error <= 1e-5);
}

}  // namespace

TEST_CASE("transition (0.1, 0.1) matches the worked values") {
  const TransitionFunction a = make_transition(0.1, 0.1);
  CHECK(a.profile(0.05) == doctest::Approx(0.55).epsilon(1e-15));
  CHECK(a.profile(0.95) == 1.0);
  CHECK(a.profile(0.0) == 0.5);
  CHECK(a.profile(1.0) == 1.0);
  check_transition_invariants(a);
  check_fd(a.profile);
}

TEST_CASE("transition (0.3, 0.3) is concave on a 10^4 grid") {
  const TransitionFunction a = make_transition(0.3, 0.3);
  check_transition_invariants(a, 10000);
}

TEST_CASE("random admissible transitions satisfy every invariant") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> eps(1e-3, 0.499);
  for (int i = 0; i < 50; ++i) {
    const TransitionFunction a = make_transition(eps(rng), eps(rng));
    check_transition_invariants(a);
    // The blend has width 1 - 2p; with h fixed at 1e-4 the centered difference
    // error (h^2/6 times the third derivative) exceeds 1e-5 below width ~0.02.
    if (1.0 - 2.0 * a.linear_end >= 0.02) check_fd(a.profile);
  }
}

TEST_CASE("transition rejects infeasible budgets") {
  const std::vector<std::pair<double, double>> bad{
      {0.0, 0.1}, {0.1, 0.0}, {-0.1, 0.1}, {0.5, 0.1}, {0.1, 0.6}, {NAN, 0.1}};
  for (auto [e0, e1] : bad) {
    try {
      make_transition(e0, e1);
      FAIL("expected InvalidParameter");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidParameter);
    }
  }
}

TEST_CASE("construction is deterministic") {
  const auto a = make_transition(0.17, 0.08).profile;
  const auto b = make_transition(0.17, 0.08).profile;
  for (double t : linspace(0.0, 1.0, 1001)) {
    const Jet x = a.eval(t), y = b.eval(t);
    CHECK(x.value == y.value);
    CHECK(x.d1 == y.d1);
    CHECK(x.d2 == y.d2);
  }
  CHECK(profile_to_json(make_torpedo_profile(0.7, 1.3).profile).dump() ==
        profile_to_json(make_torpedo_profile(0.7, 1.3).profile).dump());
}

TEST_CASE("torpedo (1, 1): smooth tip and unit neck") {
  const TorpedoProfile t = make_torpedo_profile(1.0, 1.0);
  const Jet tip = t.profile.eval(0.0);
  CHECK(tip.value == 0.0);
  CHECK(tip.d1 == 1.0);
  CHECK(tip.d2 == 0.0);
  CHECK(t.profile.domain().hi == doctest::Approx(2.5));
  for (double r : linspace(1.5, 2.5, 101)) {
    const Jet j = t.profile.eval(r);
    CHECK(j.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(j.d1) <= 1e-14);
  }
}

TEST_CASE("torpedo with zero neck ends at delta") {
  const TorpedoProfile t = make_torpedo_profile(0.8, 0.0);
  CHECK(t.profile(t.profile.domain().hi) == 0.8);
  CHECK(t.profile.domain().hi == doctest::Approx(0.8 * kTorpedoCap));
  CHECK(t.profile.pieces().size() == 3);
  CHECK(t.profile.pieces().back().sub_domain.lo == t.profile.pieces().back().sub_domain.hi);
}

TEST_CASE("torpedo (0.5, 2): sine cap and maximum delta") {
  const TorpedoProfile t = make_torpedo_profile(0.5, 2.0);
  for (double r : linspace(0.0, 0.5 * kTorpedoBend, 200))
    CHECK(t.profile(r) == doctest::Approx(0.5 * std::sin(2.0 * r)).epsilon(1e-15));
  double top = 0.0;
  for (double r : linspace(0.0, t.profile.domain().hi, 4096)) top = std::max(top, t.profile(r));
  CHECK(top == 0.5);
}

TEST_CASE("random torpedoes are concave with slope in [0, 1]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> delta(0.05, 5.0), lambda(0.0, 4.0);
  for (int i = 0; i < 40; ++i) {
    const TorpedoProfile t = make_torpedo_profile(delta(rng), lambda(rng));
    const DerivativeBounds b = derivative_bounds(t.profile, 4096);
    CHECK(b.d2_max <= 1e-9);
    CHECK(b.d1_min >= -1e-9);
    CHECK(b.d1_max <= 1.0 + 1e-9);
    CHECK(t.profile.max_junction_residual() <= 1e-10);
    // The blend third derivative grows like 1/delta^2; with h fixed at 1e-4
    // the centered difference error crosses 1e-5 near delta = 0.1.
    if (t.delta >= 0.12) check_fd(t.profile);
  }
}

TEST_CASE("torpedo rejects bad parameters") {
  CHECK_THROWS_AS(make_torpedo_profile(0.0, 1.0), Error);
  CHECK_THROWS_AS(make_torpedo_profile(1.0, -1.0), Error);
}

TEST_CASE("rescale (1, 1, 2) is constant") {
  const RescaleCurve g = make_rescale_curve(1.0, 1.0, 2.0);
  for (double t : linspace(0.0, 2.0, 33)) {
    const Jet j = g.profile.eval(t);
    CHECK(j.value == 1.0);
    CHECK(j.d1 == 0.0);
    CHECK(j.d2 == 0.0);
  }
}

TEST_CASE("rescale (2, 0.5, 4): plateaus and monotone decrease") {
  const RescaleCurve g = make_rescale_curve(2.0, 0.5, 4.0);
  CHECK(g.profile(0.5) == 2.0);
  CHECK(g.profile(3.7) == 0.5);
  const DerivativeBounds b = derivative_bounds(g.profile, 4096);
  CHECK(b.d1_max <= 0.0);
  for (double t : linspace(0.0, 4.0, 513)) {
    CHECK(g.profile(t) <= 2.0);
    CHECK(g.profile(t) >= 0.5);
  }
  check_fd(g.profile);
}

TEST_CASE("longer rescale curves are gentler") {
  const auto steep = derivative_bounds(make_rescale_curve(1.0, 0.1, 4.0).profile, 4096);
  const auto gentle = derivative_bounds(make_rescale_curve(1.0, 0.1, 8.0).profile, 4096);
  CHECK(std::abs(gentle.d1_min) < std::abs(steep.d1_min));
}

TEST_CASE("rescale rejects bad parameters") {
  CHECK_THROWS_AS(make_rescale_curve(0.0, 1.0, 4.0), Error);
  CHECK_THROWS_AS(make_rescale_curve(1.0, -1.0, 4.0), Error);
  CHECK_THROWS_AS(make_rescale_curve(1.0, 2.0, 1.5), Error);
  CHECK_THROWS_AS(make_rescale_curve(1.0, 2.0, 2.0), Error);
}

TEST_CASE("profile domain and contiguity are enforced") {
  const Profile p = make_transition(0.1, 0.1).profile;
  CHECK_THROWS_AS(p.eval(-0.01), Error);
  CHECK_THROWS_AS(p.eval(1.01), Error);
  CHECK_NOTHROW(p.eval(1.0 + 1e-13));

  Piece a;
  a.type = PieceType::Constant;
  a.value = 1.0;
  a.sub_domain = {0.0, 1.0};
  Piece b = a;
  b.sub_domain = {1.5, 2.0};
  CHECK_THROWS_AS(Profile({a, b}), Error);
  CHECK_THROWS_AS(Profile(std::vector<Piece>{}), Error);
}

TEST_CASE("quintic Hermite matches both end jets") {
  const Jet l{0.3, -1.2, 0.7}, r{2.0, 0.4, -3.0};
  Piece q = quintic_hermite(1.0, 2.5, l, r);
  const Jet a = q.eval(1.0), b = q.eval(2.5);
  CHECK(a.value == doctest::Approx(l.value));
  CHECK(a.d1 == doctest::Approx(l.d1));
  CHECK(a.d2 == doctest::Approx(l.d2));
  CHECK(b.value == doctest::Approx(r.value));
  CHECK(b.d1 == doctest::Approx(r.d1));
  CHECK(b.d2 == doctest::Approx(r.d2));
}

TEST_CASE("shifted, powered and concatenated profiles") {
  const Profile p = make_transition(0.1, 0.2).profile;
  const Profile s = p.shifted(3.0);
  CHECK(s.domain().lo == 3.0);
  CHECK(s(3.4) == doctest::Approx(p(0.4)).epsilon(1e-15));

  const Profile sq = p.powered(2.0);
  const Jet j = p.eval(0.6), k = sq.eval(0.6);
  CHECK(k.value == doctest::Approx(j.value * j.value));
  CHECK(k.d1 == doctest::Approx(2.0 * j.value * j.d1));
  CHECK(k.d2 == doctest::Approx(2.0 * (j.d1 * j.d1 + j.value * j.d2)));

  const Profile c = Profile::concat({p, s.shifted(-2.0)});
  CHECK(c.domain().hi == doctest::Approx(2.0));
  CHECK(c(1.5) == doctest::Approx(p(0.5)));
}

TEST_CASE("profiles round-trip through JSON") {
  for (const Profile& p : {make_transition(0.12, 0.3).profile, make_torpedo_profile(0.4, 1.0).profile,
                           make_rescale_curve(1.0, 0.2, 6.0).profile.powered(0.5)}) {
    const Profile q = profile_from_json(profile_to_json(p));
    for (double t : linspace(p.domain().lo, p.domain().hi, 257)) {
      const Jet a = p.eval(t), b = q.eval(t);
      CHECK(a.value == b.value);
      CHECK(a.d1 == b.d1);
      CHECK(a.d2 == b.d2);
    }
  }
}
