#include <doctest.h>

#include <cmath>
#include <random>

#include "fidsus/error.hpp"
#include "fidsus/scaling.hpp"

using namespace fidsus;

namespace {

SizeSweep synthetic(double lo, double hi, int n, auto&& chi) {
  SizeSweep s;
  for (double L : geometric_grid(lo, hi, n)) s.samples.push_back({L, chi(L)});
  return s;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ConfigError;
}

}  // namespace

TEST_CASE("power-law fits on exact data") {
  const auto sq = synthetic(10, 1000, 8, [](double L) { return 7.0 * L * L; });
  const PowerLawFit f = fit_power_law(sq);
  CHECK(f.exponent == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(f.amplitude == doctest::Approx(7.0).epsilon(1e-11));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fit_power_law(synthetic(10, 1000, 8, [](double) { return 7.0; })).exponent == doctest::Approx(0.0));
  // Robust and OLS agree on noiseless data.
  for (double p : {0.0, 0.5, 1.0, 2.5}) {
    const auto s = synthetic(16, 4096, 9, [p](double L) { return 3.0 * std::pow(L, p); });
    CHECK(std::abs(fit_power_law(s, true).exponent - fit_power_law(s).exponent) <= 0.05);
  }
}

TEST_CASE("L^2 ln L fitted as a pure power shows curvature") {
  const auto s = synthetic(100, 2000, 10, [](double L) { return L * L * std::log(L); });
  const QadModels m = compare_qad_models(s);
  CHECK(m.power_exponent > 2.0);
  CHECK(m.power_exponent < 2.3);
  CHECK(m.curvature_t < -3.0);
  CHECK(m.log_ssr < m.power_ssr);
}

TEST_CASE("classify examples") {
  const auto lin = classify_qad(synthetic(10, 1000, 8, [](double L) { return L; }));
  CHECK(lin.exponent == doctest::Approx(1.0));
  CHECK_FALSE(lin.has_log_factor);
  CHECK(format_qad(lin) == "1");

  const auto flat = classify_qad(synthetic(10, 1000, 8, [](double) { return 7.0; }));
  CHECK(std::abs(flat.exponent) < 1e-12);
  CHECK(format_qad(flat) == "0");

  const auto withlog = classify_qad(synthetic(100, 2000, 10, [](double L) { return L * L * std::log(L); }));
  CHECK(withlog.has_log_factor);
  CHECK(withlog.exponent == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(format_qad(withlog) == "2+ln");
  CHECK(withlog.fit_r2 >= 0.0);
  CHECK(withlog.fit_r2 <= 1.0);
}

TEST_CASE("classification needs enough samples and a decade") {
  CHECK(kind_of([] { classify_qad(synthetic(10, 1000, 5, [](double L) { return L; })); }) == ErrorKind::InvalidParams);
  CHECK(kind_of([] { classify_qad(synthetic(100, 900, 8, [](double L) { return L; })); }) == ErrorKind::InvalidParams);
}

TEST_CASE("half a log factor is reported as ambiguous") {
  const auto s = synthetic(100, 10000, 12, [](double L) { return L * L * std::sqrt(std::log(L)); });
  CHECK(kind_of([&] { classify_qad(s); }) == ErrorKind::Ambiguous);
}

TEST_CASE("classification with 1% multiplicative noise") {
  std::mt19937_64 rng(123);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (double p : {0.0, 1.0, 2.0}) {
    for (bool log : {false, true}) {
      int hits = 0;
      for (int trial = 0; trial < 200; ++trial) {
        const auto s = synthetic(100, 10000, 16, [&](double L) {
          return std::pow(L, p) * (log ? std::log(L) : 1.0) * (1.0 + noise(rng));
        });
        try {
          const QadResult q = classify_qad(s);
          if (q.has_log_factor == log && std::abs(q.exponent - p) < 0.25) ++hits;
        } catch (const Error&) {
        }
      }
      CAPTURE(p);
      CAPTURE(log);
      CHECK(hits >= 190);
    }
  }
}

TEST_CASE("sweep validation") {
  SizeSweep s{{{10, 1}, {20, 2}, {20, 3}, {40, 4}}, 1, ""};
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::InvalidParams);
  s.samples[2].size = 30;
  CHECK_NOTHROW(s.validate());
  s.samples[1].chi = -1;
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::InvalidParams);
  s.samples[1].chi = 2;
  CHECK(kind_of([&] { s.validate(5); }) == ErrorKind::InvalidParams);
}

TEST_CASE("log-binned minimum keeps the lower envelope") {
  SizeSweep s;
  s.system_dim = 1;
  for (int L = 10; L <= 1000; L += 10) s.samples.push_back({double(L), L * (1.0 + (L % 30 == 0 ? 0.5 : 0.0))});
  const SizeSweep env = log_binned_minimum(s, 5);
  CHECK(env.samples.size() == 5);
  for (const auto& e : env.samples) CHECK(e.chi == doctest::Approx(e.size));
  CHECK(kind_of([&] { log_binned_minimum(s, 0); }) == ErrorKind::InvalidParams);
}

TEST_CASE("critical exponent and log-divergence fits") {
  ParamSweep ps{{}, 1.0, Side::Above};
  for (double d : geometric_grid(1e-3, 1e-1, 8)) ps.samples.push_back({1.0 + d, std::pow(d, -2.0)});
  const ExponentFit f = fit_critical_exponent(ps);
  CHECK(f.alpha == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0));

  ParamSweep lg{{}, 0.5, Side::Below};
  for (double d : geometric_grid(1e-3, 1e-1, 8)) lg.samples.push_back({0.5 - d, 3.0 * std::log(d) + 1.0});
  const LogDivergenceFit g = fit_log_divergence(lg);
  CHECK(g.slope == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(g.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.r2 == doctest::Approx(1.0).epsilon(1e-14));

  ParamSweep wrong{{{0.9, 1.0}, {1.1, 1.0}, {1.2, 1.0}}, 1.0, Side::Above};
  CHECK(kind_of([&] { wrong.validate(); }) == ErrorKind::InvalidParams);
}

TEST_CASE("a log model cannot describe a power-law divergence") {
  ParamSweep ps{{}, 1.0, Side::Above};
  for (double d : geometric_grid(1e-3, 0.5, 12)) ps.samples.push_back({1.0 + d, 0.1 * std::pow(d, -2.0)});
  CHECK(fit_critical_exponent(ps).r2 > 0.999);
  CHECK(fit_log_divergence(ps).r2 < 0.6);
}

TEST_CASE("scaling relation reproduces the reference exponent table exactly") {
  CHECK(check_scaling_relation(4.0 / 3.0, 2.0 / 3.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(check_scaling_relation(4.0 / 3.0, 2.0 / 3.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(check_scaling_relation(2.0, 1.0, 1.0) == 1.0);
  CHECK(kind_of([] { check_scaling_relation(1.0, 0.0, 1.0); }) == ErrorKind::InvalidNu);

  ExponentSet row;
  row.mu = 4.0 / 3.0;
  row.nu = 2.0 / 3.0;
  row.d_a_plus.exponent = 0.0;
  row.d_a_minus.exponent = 1.0;
  row.alpha_plus = 2.1;
  row.alpha_minus = 0.5;
  CHECK(row.residual_plus() == doctest::Approx(0.1));
  CHECK(row.residual_minus() == doctest::Approx(0.0));
}

TEST_CASE("singularity condition") {
  auto a = singularity_condition(2.5, 2.0);
  CHECK(a.singular);
  CHECK_FALSE(a.log_possible);
  a = singularity_condition(1.0, 2.0);
  CHECK_FALSE(a.singular);
  a = singularity_condition(2.0, 2.0);
  CHECK(a.singular);
  CHECK(a.log_possible);
}

TEST_CASE("validity window and geometric grid") {
  const ValidityWindow w = critical_window(4096, 2.0 / 3.0, 8.0, 0.2);
  CHECK(w.lower == doctest::Approx(8.0 / 256.0));
  CHECK(w.upper == 0.2);
  CHECK(kind_of([] { critical_window(8, 2.0 / 3.0, 8.0, 0.2); }) == ErrorKind::InvalidParams);
  const auto g = geometric_grid(1e-3, 1e-1, 3);
  CHECK(g[0] == 1e-3);
  CHECK(g[1] == doctest::Approx(1e-2));
  CHECK(g[2] == 1e-1);
}
