#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "sst/signal_model.hpp"

using namespace sst;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ComponentSpec tone_spec(double f) { return {ConstantAmplitude{1.0}, PureTonePhase{f, 0.0}}; }

}  // namespace

TEST_CASE("SampledSignal validates and describes its grid", "[signal]") {
  const SampledSignal s({1.0, 2.0, 3.0, 4.0, 5.0}, 4.0, 1.0);
  CHECK(s.size() == 5);
  CHECK(s.duration() == 1.0);
  CHECK(s.time(2) == 1.5);
  CHECK(s.is_real());
  CHECK_THROWS_AS(SampledSignal({}, 4.0), DataError);
  CHECK_THROWS_AS(SampledSignal({1.0}, 0.0), ParameterError);
  CHECK_THROWS_AS(SampledSignal({1.0}, -1.0), ParameterError);
  CHECK_THROWS_AS(SampledSignal({1.0}, std::numeric_limits<double>::infinity()), ParameterError);
}

TEST_CASE("synthesize produces a pure tone exactly", "[signal][synthesize]") {
  const auto s = synthesize({tone_spec(5.0)}, 100.0, 2.0);
  REQUIRE(s.size() == 200);
  for (std::size_t n = 0; n < s.size(); ++n) {
    const cplx want = std::polar(1.0, two_pi * 5.0 * static_cast<double>(n) / 100.0);
    CHECK(std::abs(s.samples()[n] - want) < 1e-12);
  }
}

TEST_CASE("synthesize rejects degenerate and aliased input", "[signal][synthesize]") {
  CHECK_THROWS_WITH(synthesize({}, 100.0, 2.0), ContainsSubstring("no components"));
  // 60 Hz at rate 100 violates Nyquist; the message reports the offending IF.
  CHECK_THROWS_WITH(synthesize({tone_spec(60.0)}, 100.0, 1.0), ContainsSubstring("60"));
  CHECK_THROWS_AS(synthesize({tone_spec(60.0)}, 100.0, 1.0), DataError);
  CHECK_THROWS_AS(synthesize({{ConstantAmplitude{0.0}, PureTonePhase{5.0}}}, 100.0, 1.0), DataError);
  CHECK_THROWS_AS(synthesize({{ConstantAmplitude{1.0}, LinearChirpPhase{-1.0, 1.0}}}, 100.0, 1.0),
                  DataError);
}

TEST_CASE("synthesize is linear in the component list", "[signal][synthesize][property]") {
  const std::vector<ComponentSpec> a{presets::fig1()};
  const std::vector<ComponentSpec> b{presets::chirp(2.0, 1.5),
                                     {GaussianBumpAmplitude{1.0, 0.3, 4.0, 1.0}, PureTonePhase{7.0}}};
  auto both = a;
  both.insert(both.end(), b.begin(), b.end());
  const auto sa = synthesize(a, 100.0, 10.0);
  const auto sb = synthesize(b, 100.0, 10.0);
  const auto sab = synthesize(both, 100.0, 10.0);
  for (std::size_t n = 0; n < sab.size(); ++n) {
    CHECK(std::abs(sab.samples()[n] - (sa.samples()[n] + sb.samples()[n])) < 1e-12);
  }
}

TEST_CASE("the figure-one generator matches its closed form", "[signal][fig1]") {
  const auto s = synthesize({presets::fig1()}, 100.0, 10.0);
  REQUIRE(s.size() == 1000);
  for (std::size_t n = 0; n < s.size(); n += 37) {
    const double t = s.time(n);
    const double phase = 0.1 * std::pow(t, 2.6) + 3.0 * std::sin(2.0 * t) + 10.0 * t;
    CHECK_THAT(s.samples()[n].real(), WithinAbs(std::cos(two_pi * phase), 1e-9));
  }
}

TEST_CASE("ground_truth_if returns closed-form derivatives", "[signal][if]") {
  const std::vector<double> t{0.0, 0.5, 1.0, 2.5, 7.0, 9.99};
  const auto lin = ground_truth_if(tone_spec(5.0), t);
  for (double v : lin) CHECK(v == 5.0);

  const auto f1 = ground_truth_if(presets::fig1(), t);
  CHECK_THAT(f1[0], WithinAbs(16.0, 1e-14));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double want = 0.26 * std::pow(t[i], 1.6) + 6.0 * std::cos(2.0 * t[i]) + 10.0;
    CHECK_THAT(f1[i], WithinRel(want, 1e-14));
  }

  const ComponentSpec quad{ConstantAmplitude{1.0}, LinearChirpPhase{0.0, 3.0}};
  const auto c = ground_truth_if(quad, t);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK_THAT(c[i], WithinAbs(3.0 * t[i], 1e-14));

  const ComponentSpec tab{ConstantAmplitude{1.0}, TabulatedPhase{{0.0, 0.1, 0.2}, {}, 10.0, 0.0}};
  CHECK_THROWS_WITH(ground_truth_if(tab, t), ContainsSubstring("if_ground_truth"));
}

TEST_CASE("finite differences of the phase converge to the IF at second order",
          "[signal][if][property]") {
  const std::vector<ComponentSpec> specs{presets::fig1(), presets::chirp(2.0, 1.0),
                                         {ConstantAmplitude{1.0}, PureTonePhase{5.0, 0.25}}};
  for (const auto& spec : specs) {
    double err[2] = {0.0, 0.0};
    const double rates[2] = {50.0, 100.0};
    for (int r = 0; r < 2; ++r) {
      const double h = 1.0 / rates[r];
      // Compare at common times so the two errors see the same curve.
      for (double t = 1.0; t <= 9.0; t += 0.5) {
        const double fd = (spec.phase_at(t + h) - spec.phase_at(t - h)) / (2.0 * h);
        err[r] = std::max(err[r], std::abs(fd - spec.if_at(t)));
      }
    }
    if (err[0] < 1e-10) continue;  // exact for linear phases
    const double order = std::log2(err[0] / err[1]);
    CHECK(order >= 1.9);
  }
}

TEST_CASE("validate_class reports epsilon and d", "[signal][class]") {
  SECTION("two tones at 5 and 12") {
    const auto r = validate_class(presets::two_tone(5.0, 12.0), 0.1, 0.4, 64.0, 4.0);
    REQUIRE(r.d_measured);
    CHECK_THAT(*r.d_measured, WithinRel(7.0 / 17.0, 1e-14));
    CHECK(r.epsilon_measured == 0.0);
    CHECK(r.is_member);
    CHECK_FALSE(validate_class(presets::two_tone(5.0, 12.0), 0.1, 0.5, 64.0, 4.0).is_member);
  }
  SECTION("single tone") {
    const auto r = validate_class({tone_spec(5.0)}, 0.0, 0.0, 64.0, 4.0);
    CHECK(r.epsilon_measured == 0.0);
    CHECK_FALSE(r.d_measured);
    CHECK(r.is_member);
  }
  SECTION("crossing IF curves are non-members with a location") {
    const std::vector<ComponentSpec> specs{presets::chirp(2.0, 1.0), tone_spec(5.0)};
    const auto r = validate_class(specs, 10.0, 0.0, 64.0, 6.0);
    CHECK_FALSE(r.is_member);
    REQUIRE(r.crossing);
    CHECK(r.crossing->component == 1);
    CHECK_THAT(r.crossing->time, WithinAbs(3.0, 1.0 / 64.0));
  }
}

TEST_CASE("validate_class reproduces analytic epsilon and d", "[signal][class][property]") {
  // Chirp 2 + t: |phi''| / phi' is largest at t = 0 where it equals 1/2.
  const auto chirp = validate_class({presets::chirp(2.0, 1.0)}, 1.0, 0.0, 64.0, 10.0);
  CHECK_THAT(chirp.epsilon_measured, WithinRel(0.5, 1e-12));

  // Proportional IFs phi2' = 2.4 phi1' keep d = 1.4 / 3.4 everywhere; the
  // amplitude term h u/w e^{-u^2/2} peaks at u = 1 with value h/(w sqrt(e)).
  const double h = 0.05, w = 8.0, c = 12.0;
  const std::vector<ComponentSpec> specs{
      {GaussianBumpAmplitude{1.0, h, c, w}, LinearChirpPhase{5.0, 0.004}},
      {GaussianBumpAmplitude{1.0, h, c, w}, LinearChirpPhase{12.0, 0.0096}}};
  const auto r = validate_class(specs, 1e-3, 7.0 / 17.0, 64.0, 24.0);
  REQUIRE(r.d_measured);
  CHECK_THAT(*r.d_measured, WithinRel(7.0 / 17.0, 1e-12));
  // Oracle: maximise each ratio over the same grid independently.
  double eps = 0.0;
  for (const auto& [f0, rate] : {std::pair{5.0, 0.004}, std::pair{12.0, 0.0096}}) {
    for (std::size_t n = 0; n < 24 * 64; ++n) {
      const double t = static_cast<double>(n) / 64.0;
      const double u = (t - c) / w;
      const double da = h * std::abs(u) / w * std::exp(-0.5 * u * u);
      eps = std::max(eps, std::max(da, rate) / (f0 + rate * t));
    }
  }
  CHECK_THAT(r.epsilon_measured, WithinRel(eps, 1e-12));
  CHECK(r.epsilon_measured <= 1e-3);
  CHECK(r.is_member);
}

TEST_CASE("add_white_noise", "[signal][noise]") {
  const auto s = synthesize({tone_spec(5.0)}, 100.0, 2.0);
  SECTION("zero power is the identity") { CHECK(add_white_noise(s, 0.0, 7) == s); }
  SECTION("negative power is rejected") {
    CHECK_THROWS_AS(add_white_noise(s, -1.0, 7), ParameterError);
  }
  SECTION("seeded runs are bit-identical, different seeds differ") {
    CHECK(add_white_noise(s, 0.5, 42) == add_white_noise(s, 0.5, 42));
    CHECK_FALSE(add_white_noise(s, 0.5, 42) == add_white_noise(s, 0.5, 43));
  }
  SECTION("sample variance matches the requested power") {
    for (bool real : {true, false}) {
      std::vector<cplx> zeros(100000, cplx{0.0, 0.0});
      if (!real) zeros[0] = cplx{0.0, 1e-300};  // mark as complex
      const SampledSignal z(std::move(zeros), 1.0);
      const auto noisy = add_white_noise(z, 1.0, 2024);
      double sum2 = 0.0;
      cplx mean{0.0, 0.0};
      for (const auto& v : noisy.samples()) mean += v;
      mean /= static_cast<double>(noisy.size());
      for (const auto& v : noisy.samples()) sum2 += std::norm(v - mean);
      const double var = sum2 / static_cast<double>(noisy.size() - 1);
      CHECK_THAT(var, WithinRel(1.0, 0.02));
      CHECK(noisy.is_real() == real);
    }
  }
}

TEST_CASE("impulse_train places unit-area impulses", "[signal][impulse]") {
  const auto s = impulse_train({0.5}, {1.0}, 100.0, 1.0);
  for (std::size_t n = 0; n < s.size(); ++n) {
    CHECK(s.samples()[n] == cplx{n == 50 ? 100.0 : 0.0, 0.0});
  }
  const auto empty = impulse_train({}, {}, 100.0, 1.0);
  CHECK(max_abs(empty.samples()) == 0.0);
  CHECK_THROWS_AS(impulse_train({1.5}, {1.0}, 100.0, 1.0), DataError);
  CHECK_THROWS_AS(impulse_train({-0.1}, {1.0}, 100.0, 1.0), DataError);
  CHECK_THROWS_AS(impulse_train({0.5, 0.5}, {1.0, 1.0}, 100.0, 1.0), DataError);
  CHECK_THROWS_AS(impulse_train({0.5}, {1.0, 2.0}, 100.0, 1.0), ParameterError);
}

TEST_CASE("Gaussian bump amplitude derivative matches finite differences", "[signal]") {
  const ComponentSpec spec{GaussianBumpAmplitude{1.0, 0.4, 3.0, 0.7}, PureTonePhase{4.0}};
  const double h = 1e-5;
  for (double t = 0.0; t < 6.0; t += 0.37) {
    const double fd = (spec.amplitude_at(t + h) - spec.amplitude_at(t - h)) / (2.0 * h);
    CHECK_THAT(spec.amplitude_derivative_at(t), WithinAbs(fd, 1e-8));
  }
}
