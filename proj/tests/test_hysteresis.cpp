// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>

#include "hrd/error.hpp"
#include "hrd/hysteresis.hpp"
#include "support.hpp"

using namespace hrd;
using hrd::testing::max_abs;

namespace {

Signal grid_signal(double t0, double t1, std::size_t n, double (*fn)(double)) {
  std::vector<double> t(n), v(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = t0 + (t1 - t0) * static_cast<double>(k) / (n - 1);
    v[k] = fn(t[k]);
  }
  return Signal(t, v);
}

std::vector<double> vals(const Signal& s) { return {s.values().begin(), s.values().end()}; }

bool bitwise_equal(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

const HysteresisConfig unit{-1.0, 1.0, 0.0};

}  // namespace

TEST_CASE("signal and config validation") {
  CHECK_THROWS_AS(Signal({0.0, 0.0}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(Signal({1.0, 0.5}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(Signal({}, {}), Error);
  CHECK_THROWS_AS(Signal({0.0, 1.0}, {1.0, NAN}), Error);
  try {
    Signal({0.0, 1.0, 1.0}, {0, 0, 0});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSignal);
  }
  const Signal v({0.0, 1.0}, {0.0, 0.0});
  try {
    stop_evaluate(v, {1.0, 1.0, 1.0});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
    CHECK(e.field() == "hysteresis.a");
  }
  try {
    stop_evaluate(v, {-1.0, 1.0, 2.0});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.field() == "hysteresis.z0");
  }
}

TEST_CASE("zero input keeps an interior state") {
  const auto v = grid_signal(0.0, 1.0, 11, [](double) { return 0.0; });
  const auto out = stop_evaluate(v, unit);
  for (double z : out.stop.values()) CHECK(z == 0.0);
  for (double p : out.play.values()) CHECK(p == 0.0);
  const auto play = play_evaluate(v, unit);
  for (double p : play.values()) CHECK(p == 0.0);
}

TEST_CASE("single-point signal is degenerate") {
  const Signal v({0.0}, {3.5});
  const auto out = stop_evaluate(v, {-1.0, 1.0, 0.25});
  CHECK(out.stop.size() == 1);
  CHECK(out.stop.value(0) == 0.25);
  CHECK(out.play.value(0) == 0.0);
  const auto d = stop_directional_derivative(v, Signal({0.0}, {9.0}), unit);
  CHECK(d.derivative == std::vector<double>{0.0});
}

TEST_CASE("monotone ramp saturates at b") {
  const auto v = grid_signal(0.0, 3.0, 7, [](double t) { return t; });
  const auto out = stop_evaluate(v, unit);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double t = v.time(k);
    CHECK(std::abs(out.stop.value(k) - std::min(t, 1.0)) <= 1e-12);
    CHECK(std::abs(out.play.value(k) - std::max(t - 1.0, 0.0)) <= 1e-12);
  }
  // 10x finer grid gives the same values at shared points.
  const auto fine = stop_evaluate(hrd::testing::refine(v, 10), unit);
  for (std::size_t k = 0; k < v.size(); ++k)
    CHECK(std::abs(fine.stop.value(10 * k) - out.stop.value(k)) <= 1e-12);
}

TEST_CASE("triangle wave: hand-unrolled recursion") {
  // v = 0, .5, 1, 1.5, 2, 1.5, 1, .5, 0 on [0,2]
  const auto v = grid_signal(0.0, 2.0, 9, [](double t) { return t <= 1.0 ? 2.0 * t : 4.0 - 2.0 * t; });
  const std::vector<double> expected = {0.0, 0.5, 1.0, 1.0, 1.0, 0.5, 0.0, -0.5, -1.0};
  const auto out = stop_evaluate(v, unit);
  CHECK(max_abs(vals(out.stop), expected) <= 1e-12);
  // descending branch follows v - (v_max - 1)
  for (std::size_t k = 5; k < 9; ++k) CHECK(out.stop.value(k) == doctest::Approx(v.value(k) - 1.0));
  // exact breakpoint grid {0,1,2}
  const auto coarse = stop_evaluate(Signal({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0}), unit);
  CHECK(vals(coarse.stop) == std::vector<double>{0.0, 1.0, -1.0});
}

TEST_CASE("clamp recursion agrees with the play formula") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = hrd::testing::random_signal(rng, 60, 3.0);
    const double a = -0.5 - std::uniform_real_distribution<double>(0, 1)(rng);
    const double b = 0.2 + std::uniform_real_distribution<double>(0, 1)(rng);
    const double z0 = a + (b - a) * 0.3;
    const auto out = stop_evaluate(v, {a, b, z0});
    const auto oracle = hrd::testing::stop_via_play_formula(vals(v), a, b, z0);
    REQUIRE(max_abs(vals(out.stop), oracle) <= 1e-12);
  }
}

TEST_CASE("range, Lipschitz and growth bounds") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto v1 = hrd::testing::random_signal(rng, 100);
    std::vector<double> w(v1.size());
    std::normal_distribution<double> N(0.0, 0.5);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = v1.value(k) + N(rng);
    const Signal v2({v1.times().begin(), v1.times().end()}, w);
    const HysteresisConfig cfg{-0.7, 0.9, 0.1};
    const auto z1 = stop_evaluate(v1, cfg).stop;
    const auto z2 = stop_evaluate(v2, cfg).stop;
    double dv = 0.0, vmax = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      dv = std::max(dv, std::abs(v1.value(k) - v2.value(k)));
      vmax = std::max(vmax, std::abs(v1.value(k)));
      REQUIRE(z1.value(k) >= cfg.a);
      REQUIRE(z1.value(k) <= cfg.b);
      REQUIRE(std::abs(z1.value(k) - z2.value(k)) <= 2.0 * dv);
      REQUIRE(std::abs(z1.value(k)) <= 2.0 * vmax + std::abs(cfg.z0));
    }
  }
}

TEST_CASE("identity decomposition play + stop = v + (z0 - v0)") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = hrd::testing::random_signal(rng, 50);
    const HysteresisConfig cfg{-0.3, 0.4, 0.2};
    const auto out = stop_evaluate(v, cfg);
    CHECK(out.play.value(0) == 0.0);
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double lhs = out.play.value(k) + out.stop.value(k);
      const double rhs = v.value(k) + (cfg.z0 - v.value(0));
      REQUIRE(std::abs(lhs - rhs) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                         (std::abs(rhs) + std::abs(v.value(k)) + 1.0));
    }
  }
  // exact on the dyadic lattice
  const auto v = hrd::testing::dyadic_signal(rng, 200);
  const auto out = stop_evaluate(v, {-0.5, 0.25, 0.125});
  for (std::size_t k = 0; k < v.size(); ++k)
    CHECK(out.play.value(k) + out.stop.value(k) == v.value(k) + (0.125 - v.value(0)));
}

TEST_CASE("rate independence") {
  std::mt19937_64 rng(5);
  const HysteresisConfig cfg{-0.5, 0.75, 0.25};
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = hrd::testing::dyadic_signal(rng, 40);
    const auto base = stop_evaluate(v, cfg);
    // collinear midpoints (exact on the lattice)
    const auto fine = stop_evaluate(hrd::testing::refine(v, 2), cfg);
    for (std::size_t k = 0; k < v.size(); ++k) {
      REQUIRE(fine.stop.value(2 * k) == base.stop.value(k));
      REQUIRE(fine.play.value(2 * k) == base.play.value(k));
    }
    // monotone reparametrization of time
    std::vector<double> t(v.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = std::pow(v.time(k) + 1.0, 1.7);
    const auto warped = stop_evaluate(Signal(t, vals(v)), cfg);
    REQUIRE(bitwise_equal(warped.stop.values(), base.stop.values()));
  }
  // generic floats: still bitwise
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = hrd::testing::random_signal(rng, 40);
    const auto base = stop_evaluate(v, cfg);
    const auto fine = stop_evaluate(hrd::testing::refine(v, 3), cfg);
    for (std::size_t k = 0; k < v.size(); ++k) {
      REQUIRE(fine.stop.value(3 * k) == base.stop.value(k));
      REQUIRE(fine.play.value(3 * k) == base.play.value(k));
    }
  }
}

TEST_CASE("concatenation equals one pass") {
  std::mt19937_64 rng(9);
  const auto v = hrd::testing::random_signal(rng, 100);
  const HysteresisConfig cfg{-0.4, 0.6, -0.1};
  const auto whole = stop_evaluate(v, cfg);
  for (std::size_t s = 1; s + 1 < v.size(); ++s) {
    std::vector<double> t(v.times().begin(), v.times().end());
    std::vector<double> x = vals(v);
    const Signal head({t.begin(), t.begin() + s + 1}, {x.begin(), x.begin() + s + 1});
    const Signal tail({t.begin() + s, t.end()}, {x.begin() + s, x.end()});
    const auto joined = stop_concatenate(stop_evaluate(head, cfg), tail, cfg);
    REQUIRE(bitwise_equal(joined.stop.values(), whole.stop.values()));
    REQUIRE(bitwise_equal(joined.play.values(), whole.play.values()));
    REQUIRE(joined.stop.same_grid(whole.stop));
  }
  // empty tail returns the prefix unchanged
  const Signal last({v.time(v.size() - 1)}, {v.value(v.size() - 1)});
  const auto same = stop_concatenate(whole, last, cfg);
  CHECK(bitwise_equal(same.stop.values(), whole.stop.values()));
  // mismatched junction
  CHECK_THROWS_AS(stop_concatenate(whole, Signal({1e6, 2e6}, {0.0, 1.0}), cfg), Error);
}

TEST_CASE("directional derivative: trivial directions") {
  std::mt19937_64 rng(13);
  const auto v = hrd::testing::random_signal(rng, 30);
  const std::vector<double> zeros(v.size(), 0.0);
  const std::vector<double> t(v.times().begin(), v.times().end());
  const auto d0 = stop_directional_derivative(v, Signal(t, zeros), unit);
  for (double d : d0.derivative) CHECK(d == 0.0);

  // interior throughout: derivative is h_k - h_0
  const Signal flat(t, zeros);
  const auto h = hrd::testing::random_signal(rng, 30, 10.0);
  const Signal h_on_grid(t, vals(h));
  const auto d = stop_directional_derivative(flat, h_on_grid, unit);
  CHECK(d.derivative[0] == 0.0);
  for (std::size_t k = 0; k < t.size(); ++k)
    CHECK(d.derivative[k] == doctest::Approx(h.value(k) - h.value(0)).epsilon(1e-12));

  CHECK_THROWS_AS(stop_directional_derivative(v, Signal({0.0, 1.0}, {0.0, 1.0}), unit), Error);
}

TEST_CASE("directional derivative of a saturating ramp") {
  const auto v = grid_signal(0.0, 3.0, 7, [](double t) { return t; });
  const auto d = stop_directional_derivative(v, v, unit);
  const double lambda = 1e-6;
  std::vector<double> moved(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) moved[k] = (1.0 + lambda) * v.value(k);
  const auto z = stop_evaluate(v, unit).stop;
  const auto zl = stop_evaluate(Signal({v.times().begin(), v.times().end()}, moved), unit).stop;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double t = v.time(k);
    const double expected = t < 1.0 ? t : 0.0;
    CHECK(std::abs(d.derivative[k] - expected) <= 1e-12);
    CHECK(std::abs((zl.value(k) - z.value(k)) / lambda - d.derivative[k]) <= 1e-6);
  }
}

TEST_CASE("projection derivative at the bounds is one-sided") {
  const HysteresisConfig cfg{-1.0, 1.0, 0.0};
  // from state r = v - z = 0 the unprojected point is the next input value
  auto D = [&](double x, double d) { return stop_derivative_step(0.0, x, d, cfg); };
  CHECK(D(0.0, 2.0) == 2.0);
  CHECK(D(1.0, 2.0) == 0.0);
  CHECK(D(1.0, -2.0) == -2.0);
  CHECK(D(-1.0, -2.0) == 0.0);
  CHECK(D(-1.0, 2.0) == 2.0);
  CHECK(D(1.5, -2.0) == 0.0);
  CHECK(D(-1.5, 2.0) == 0.0);
  CHECK(stop_output(0.3, stop_advance(0.0, 0.3, cfg), cfg) == 0.3);
  CHECK(stop_output(1.5, stop_advance(0.0, 1.5, cfg), cfg) == 1.0);
  CHECK(stop_output(-2.5, stop_advance(0.0, -2.5, cfg), cfg) == -1.0);
}

TEST_CASE("derivative: homogeneity, direction-Lipschitz, difference quotients") {
  std::mt19937_64 rng(17);
  const HysteresisConfig cfg{-0.6, 0.8, 0.1};
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = hrd::testing::random_signal(rng, 80, 2.0);
    const std::vector<double> t(v.times().begin(), v.times().end());
    const auto h1 = hrd::testing::random_signal(rng, 80, 1.0);
    const auto h2 = hrd::testing::random_signal(rng, 80, 1.0);
    const Signal g1(t, vals(h1)), g2(t, vals(h2));
    const auto d1 = stop_directional_derivative(v, g1, cfg).derivative;
    const auto d2 = stop_directional_derivative(v, g2, cfg).derivative;

    // power-of-two scalings are exact
    std::vector<double> scaled = vals(h1);
    for (auto& x : scaled) x *= 4.0;
    const auto d4 = stop_directional_derivative(v, Signal(t, scaled), cfg).derivative;
    for (std::size_t k = 0; k < t.size(); ++k) REQUIRE(d4[k] == 4.0 * d1[k]);
    for (auto& x : scaled) x *= 0.7 / 4.0;
    const auto d07 = stop_directional_derivative(v, Signal(t, scaled), cfg).derivative;
    for (std::size_t k = 0; k < t.size(); ++k) REQUIRE(std::abs(d07[k] - 0.7 * d1[k]) <= 1e-12);

    double dh = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) dh = std::max(dh, std::abs(h1.value(k) - h2.value(k)));
    REQUIRE(max_abs(d1, d2) <= 2.0 * dh * (1.0 + 1e-12));

    // difference quotients decrease to the rounding floor
    const auto z = vals(stop_evaluate(v, cfg).stop);
    double previous = std::numeric_limits<double>::infinity();
    for (double lambda : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
      std::vector<double> moved = vals(v);
      for (std::size_t k = 0; k < moved.size(); ++k) moved[k] += lambda * h1.value(k);
      const auto zl = vals(stop_evaluate(Signal(t, moved), cfg).stop);
      double err = 0.0, scale = 1.0;
      for (std::size_t k = 0; k < t.size(); ++k) {
        err = std::max(err, std::abs((zl[k] - z[k]) / lambda - d1[k]));
        scale = std::max(scale, std::abs(v.value(k)));
      }
      const double floor = 1e3 * std::numeric_limits<double>::epsilon() * scale / lambda;
      REQUIRE((err <= previous || err <= floor));
      previous = std::max(err, floor);
      if (lambda == 1e-5) REQUIRE(err <= 1e-6 * scale);
    }
  }
}
