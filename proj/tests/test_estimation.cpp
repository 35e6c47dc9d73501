#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pour/dynamics.hpp"
#include "pour/estimation.hpp"

using namespace pour;

TEST_CASE("geometric estimate inverts the retention identity") {
  PouringContainer can;

  SUBCASE("a tilt that retains everything delivered nothing") {
    // choose theta so v_stay(theta) equals the fill exactly
    double theta = theta_no_flow(can, can.nominal_fill_ml, 89.0);
    PourRecord rec{theta, can.nominal_fill_ml, 0.0, 0.0};
    CHECK(estimate_geometric(rec, can) == doctest::Approx(0.0).epsilon(1e-9));
  }

  SUBCASE("offset larger than the poured volume clamps to zero") {
    PourRecord rec{56.0, can.nominal_fill_ml, 1e4, 0.0};
    CHECK(estimate_geometric(rec, can) == 0.0);
  }

  SUBCASE("plain identity at a known angle") {
    PourRecord rec{80.0, can.nominal_fill_ml, 3.0, 0.0};
    double expected = can.nominal_fill_ml - v_stay(can, 80.0) - 3.0;
    CHECK(estimate_geometric(rec, can) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("no pour below the start angle") {
    PourRecord rec{40.0, can.nominal_fill_ml, 0.0, 0.0};
    CHECK_THROWS_AS(estimate_geometric(rec, can), std::domain_error);
  }

  SUBCASE("initial volume above the brim is rejected") {
    PourRecord rec{70.0, can.brim_volume_ml() + 10.0, 0.0, 0.0};
    CHECK_THROWS_AS(estimate_geometric(rec, can), std::domain_error);
  }
}

TEST_CASE("cubic fit recovers synthetic coefficients exactly") {
  // v(theta) = 5 + 1*t - 0.01*t^2 + 0.0002*t^3
  const double c0 = 5.0, c1 = 1.0, c2 = -0.01, c3 = 0.0002;
  std::vector<std::pair<double, double>> samples;
  for (double th = 50.0; th <= 100.0 + 1e-9; th += 5.0) {
    samples.emplace_back(th, c0 + c1 * th + c2 * th * th + c3 * th * th * th);
  }
  auto m = fit_calibration(samples);
  CHECK(m.coeff[0] == doctest::Approx(c0).epsilon(1e-9));
  CHECK(m.coeff[1] == doctest::Approx(c1).epsilon(1e-9));
  CHECK(m.coeff[2] == doctest::Approx(c2).epsilon(1e-9));
  CHECK(m.coeff[3] == doctest::Approx(c3).epsilon(1e-9));
  CHECK(m.residual_rms_ml < 1e-9);

  SUBCASE("prediction interpolates the samples") {
    for (const auto& [th, v] : samples) {
      auto p = predict_volume(m, th);
      CHECK(p.volume_ml == doctest::Approx(v).epsilon(1e-9));
      CHECK_FALSE(p.extrapolated);
    }
  }
}

TEST_CASE("constant samples fit a constant") {
  std::vector<std::pair<double, double>> samples;
  for (double th : {55.0, 65.0, 75.0, 85.0, 95.0}) {
    samples.emplace_back(th, 100.0);
  }
  auto m = fit_calibration(samples);
  CHECK(m.coeff[0] == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(std::fabs(m.coeff[1]) < 1e-9);
  CHECK(std::fabs(m.coeff[2]) < 1e-9);
  CHECK(std::fabs(m.coeff[3]) < 1e-9);
  CHECK(predict_volume(m, 60.0).volume_ml ==
        doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("four exact points interpolate exactly") {
  std::vector<std::pair<double, double>> samples = {
      {55.0, 10.0}, {65.0, 80.0}, {75.0, 180.0}, {85.0, 300.0}};
  auto m = fit_calibration(samples);
  for (const auto& [th, v] : samples) {
    CHECK(predict_volume(m, th).volume_ml == doctest::Approx(v).epsilon(1e-9));
  }
}

TEST_CASE("rank-deficient fits are rejected") {
  std::vector<std::pair<double, double>> three = {
      {55.0, 10.0}, {65.0, 80.0}, {75.0, 180.0}};
  CHECK_THROWS_AS(fit_calibration(three), std::runtime_error);
  std::vector<std::pair<double, double>> dup = {
      {55.0, 10.0}, {65.0, 80.0}, {75.0, 180.0}, {75.0, 180.0}};
  CHECK_THROWS_AS(fit_calibration(dup), std::runtime_error);
}

TEST_CASE("predictions clamp at zero and flag extrapolation") {
  CalibrationModel m;
  m.coeff = {-50.0, 0.0, 0.0, 0.0};
  auto p = predict_volume(m, 70.0);
  CHECK(p.volume_ml == 0.0);
  CHECK_FALSE(p.extrapolated);
  CHECK(predict_volume(m, 49.0).extrapolated);
  CHECK(predict_volume(m, 101.0).extrapolated);
  CHECK(predict_volume_raw(m, 70.0) == doctest::Approx(-50.0));
}

TEST_CASE("calibration files round-trip") {
  CalibrationModel m;
  m.coeff = {5.0, 1.0, -0.01, 0.0002};
  m.residual_rms_ml = 0.37;
  std::ostringstream out;
  save_calibration(m, out);
  std::istringstream in(out.str());
  auto m2 = load_calibration(in);
  for (int i = 0; i < 4; ++i) CHECK(m2.coeff[i] == m.coeff[i]);
  CHECK(m2.domain_lo_deg == m.domain_lo_deg);
  CHECK(m2.domain_hi_deg == m.domain_hi_deg);
  CHECK(m2.residual_rms_ml == m.residual_rms_ml);

  std::istringstream bad("c0=1\nc1=2\nc2=3\n");
  CHECK_THROWS_AS(load_calibration(bad), std::runtime_error);
}

TEST_CASE("sweep samples equal the retention identity on a noiseless scale") {
  PouringContainer can;
  PhysicsParams phys;
  Beverage water;
  auto samples = run_calibration_sweep(can, water, phys, 0.0, 5, 89.0);
  REQUIRE(samples.size() == 11);
  for (const auto& s : samples) {
    double expected =
        std::max(0.0, can.nominal_fill_ml - v_stay(can, s.held_theta_deg));
    CHECK(s.volume_ml == doctest::Approx(expected).epsilon(1e-6));
  }

  SUBCASE("the 50-degree pour delivers nothing") {
    CHECK(samples[0].theta_deg == 50.0);
    CHECK(samples[0].volume_ml == 0.0);
  }

  SUBCASE("angles above the ceiling are clamped and flagged") {
    for (const auto& s : samples) {
      if (s.theta_deg > 89.0) {
        CHECK(s.clamped);
        CHECK(s.held_theta_deg == 89.0);
      } else {
        CHECK_FALSE(s.clamped);
        CHECK(s.held_theta_deg == s.theta_deg);
      }
    }
  }
}

TEST_CASE("three scale reads shrink the noise by root three") {
  PouringContainer can;
  PhysicsParams phys;
  Beverage water;
  // the 80-degree sample, repeated across seeds, scatters like
  // sigma/sqrt(3) around the true delivered volume
  double expected = can.nominal_fill_ml - v_stay(can, 80.0);
  const double sigma = 0.5;
  int n = 200;
  double sum = 0.0, ss = 0.0;
  for (int seed = 0; seed < n; ++seed) {
    auto samples = run_calibration_sweep(can, water, phys, sigma, seed, 89.0);
    double v = samples[6].volume_ml;  // 50 + 6*5 = 80 degrees
    sum += v;
    ss += (v - expected) * (v - expected);
  }
  double mean = sum / n;
  double rms = std::sqrt(ss / n);
  double predicted = sigma / std::sqrt(3.0) / water.density_g_per_ml;
  CHECK(mean == doctest::Approx(expected).epsilon(0.001));
  CHECK(rms > predicted * 0.75);
  CHECK(rms < predicted * 1.25);
}

TEST_CASE("noiseless sweep fit meets the residual budget") {
  PouringContainer can;
  PhysicsParams phys;
  Beverage water;
  auto samples = run_calibration_sweep(can, water, phys, 0.0, 5, 89.0);
  std::vector<std::pair<double, double>> points;
  for (const auto& s : samples) {
    points.emplace_back(s.held_theta_deg, s.volume_ml);
  }
  auto m = fit_calibration(points);
  CHECK(m.residual_rms_ml < 2.0);
}
