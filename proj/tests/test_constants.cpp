#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "sst/wavelet.hpp"
#include "sst/window.hpp"

using namespace sst;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("box surrogate admissibility constant is ln(1.1/0.9)", "[constants]") {
  CHECK_THAT(admissibility_constant(WaveletSpec::box_surrogate(0.1)),
             WithinRel(std::log(1.1 / 0.9), 1e-12));
  CHECK_THAT(admissibility_constant(WaveletSpec::box_surrogate(0.5)),
             WithinRel(std::log(3.0), 1e-12));
}

TEST_CASE("bump admissibility constant matches a doubled-resolution Simpson oracle",
          "[constants]") {
  for (double delta : {0.1, 0.25, 0.5, 0.9}) {
    const auto q = oracle::doubled_simpson(
        [delta](double z) { return oracle::bump_hat(z, delta) / z; }, 1.0 - delta, 1.0 + delta,
        1 << 14);
    REQUIRE(q.correction < 1e-10 * q.value);
    CHECK_THAT(admissibility_constant(WaveletSpec::bump(delta)), WithinRel(q.value, 1e-8));
  }
}

TEST_CASE("bump psi_hat is the documented closed form", "[constants][wavelet]") {
  const auto w = WaveletSpec::bump(0.25);
  CHECK_THAT(w.psi_hat(1.0), WithinAbs(1.0, 1e-15));
  for (double z : {0.74, 0.75, 0.8, 0.95, 1.1, 1.25, 1.3, -1.0}) {
    CHECK_THAT(w.psi_hat(z), WithinAbs(oracle::bump_hat(z, 0.25), 1e-15));
  }
  CHECK_THROWS_AS(WaveletSpec::bump(0.0), ParameterError);
  CHECK_THROWS_AS(WaveletSpec::bump(1.0), ParameterError);
}

TEST_CASE("bump time-domain radius holds 99.9% of |psi| mass", "[constants][wavelet]") {
  // psi(tau) = int psi_hat(xi) e^{2 pi i xi tau} d xi, evaluated directly.
  const double delta = 0.25;
  auto abs_psi = [delta](double tau) {
    const auto re = oracle::simpson(
        [&](double xi) { return oracle::bump_hat(xi, delta) * std::cos(two_pi * xi * tau); },
        1.0 - delta, 1.0 + delta, 400);
    const auto im = oracle::simpson(
        [&](double xi) { return oracle::bump_hat(xi, delta) * std::sin(two_pi * xi * tau); },
        1.0 - delta, 1.0 + delta, 400);
    return std::hypot(re, im);
  };
  const double radius = WaveletSpec::bump(delta).support_radius();
  CHECK(radius > 10.0);
  CHECK(radius < 60.0);
  const double inside = oracle::simpson(abs_psi, 0.0, radius, 8000);
  const double total = oracle::simpson(abs_psi, 0.0, 120.0, 24000);
  CHECK_THAT(inside / total, WithinAbs(0.999, 2e-4));
  CHECK_THROWS_AS(WaveletSpec::box_surrogate(0.1).support_radius(), ParameterError);
}

TEST_CASE("raised cosine energy is 3/4 on [-1, 1]", "[constants][window]") {
  const auto w = WindowSpec::raised_cosine(1.0, WindowGain::unit);
  CHECK_THAT(window_energy(w), WithinRel(0.75, 1e-12));
  CHECK_THAT(window_energy(WindowSpec::raised_cosine(2.0, WindowGain::unit)),
             WithinRel(1.5, 1e-12));
}

TEST_CASE("truncated Gaussian energy matches the oracle", "[constants][window]") {
  for (double ratio : {3.0, 5.0, 8.0}) {
    for (double hw : {0.32, 0.64, 1.28}) {
      const auto w = WindowSpec::truncated_gaussian(hw, ratio, WindowGain::unit);
      const double s2 = (hw / ratio) * (hw / ratio);
      const double edge = std::exp(-hw * hw / (2.0 * s2));
      auto g = [&](double t) {
        const double v = std::exp(-t * t / (2.0 * s2)) - edge * (1.0 + (hw * hw - t * t) / (2.0 * s2));
        return v * v;
      };
      const auto q = oracle::doubled_simpson(g, -hw, hw, 1 << 14);
      CHECK_THAT(window_energy(w), WithinRel(q.value, 1e-8));
    }
  }
}

TEST_CASE("window energy is homogeneous of degree two in the gain", "[constants][window]") {
  auto w = WindowSpec::truncated_gaussian(0.64, 8.0, WindowGain::unit);
  const double e1 = window_energy(w);
  w.gain *= 3.0;
  CHECK_THAT(window_energy(w), WithinRel(9.0 * e1, 1e-12));
}

TEST_CASE("inversion gain makes G(0) equal the window energy", "[constants][window]") {
  for (const auto& w : {WindowSpec::truncated_gaussian(), WindowSpec::truncated_gaussian(1.28, 3.0),
                        WindowSpec::raised_cosine(0.7)}) {
    CHECK_THAT(w.value(0.0), WithinRel(window_energy(w), 1e-12));
  }
}

TEST_CASE("windows are even, C1 at the support edge, with consistent derivatives",
          "[constants][window]") {
  for (const auto& w : {WindowSpec::truncated_gaussian(0.64, 8.0), WindowSpec::truncated_gaussian(1.0, 3.0),
                        WindowSpec::raised_cosine(0.5)}) {
    const double hw = w.half_width;
    CHECK(w.value(hw) == 0.0);
    CHECK(w.value(-hw - 0.1) == 0.0);
    CHECK(std::abs(w.value(hw * (1.0 - 1e-6))) < 1e-9 * w.value(0.0));
    CHECK(std::abs(w.derivative(hw * (1.0 - 1e-6))) < 1e-4 * w.value(0.0) / hw);
    const double h = 1e-6 * hw;
    for (double u = -0.95; u <= 0.95; u += 0.1) {
      const double t = u * hw;
      CHECK_THAT(w.value(t), WithinAbs(w.value(-t), 1e-15 * w.value(0.0)));
      CHECK(w.value(t) >= 0.0);
      const double fd = (w.value(t + h) - w.value(t - h)) / (2.0 * h);
      CHECK_THAT(w.derivative(t), WithinAbs(fd, 1e-6 * w.value(0.0) / hw));
    }
  }
  CHECK_THROWS_AS(WindowSpec::truncated_gaussian(0.0), ParameterError);
  CHECK_THROWS_AS(WindowSpec::truncated_gaussian(0.5, -1.0), ParameterError);
}
