#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "fdident/variance.hpp"
#include "helpers.hpp"

using namespace fdident;

namespace {

Spectrum flat_reference(int n) {
  Spectrum R;
  R.n = n;
  R.values.assign(static_cast<std::size_t>(n), cdouble(1.0, 0.0));
  return R;
}

double grid_omega(int l, int n) { return 2.0 * std::numbers::pi * static_cast<double>(l) / n; }

}  // namespace

TEST_CASE("impulse responses reproduce FIR coefficients and reject divergence") {
  const auto h = impulse_response(TransferFunction({1.0, 0.5}, {1.0}), 0, 1e-12);
  REQUIRE(h.size() >= 2);
  CHECK(h[0] == 1.0);
  CHECK(h[1] == 0.5);
  for (std::size_t k = 2; k < h.size(); ++k) CHECK(h[k] == 0.0);

  const auto padded = impulse_response(TransferFunction({1.0}, {1.0}), 5, 1e-12);
  CHECK(padded.size() >= 6);

  CHECK_THROWS_AS(impulse_response(TransferFunction({1.0}, {1.0, -2.0}), 0, 1e-12),
                  NumericalError);
}

TEST_CASE("filtered autocovariances match hand values") {
  const auto white = filtered_autocovariance(TransferFunction({1.0}, {1.0}), 4);
  REQUIRE(white.size() == 4);
  CHECK(white[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 1; k < 4; ++k) CHECK(std::abs(white[static_cast<std::size_t>(k)]) <= 1e-14);

  const auto ma = filtered_autocovariance(TransferFunction({1.0, 0.5}, {1.0}), 4);
  CHECK(ma[0] == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(ma[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(ma[2]) <= 1e-14);
  CHECK(std::abs(ma[3]) <= 1e-14);
}

TEST_CASE("the zero-lag autocovariance dominates every other lag") {
  std::mt19937 rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    const TransferFunction tf = testutil::random_stable_tf(rng);
    const auto rho = filtered_autocovariance(tf, 32);
    for (std::size_t k = 1; k < rho.size(); ++k) CHECK(std::abs(rho[k]) <= rho[0] + 1e-12);
  }
}

TEST_CASE("symmetric lag layout mirrors the one-sided sequence") {
  const auto pm = symmetric_lags({3.0, 2.0, 1.0});
  CHECK(pm == std::vector<double>{1.0, 2.0, 3.0, 2.0, 1.0});
}

TEST_CASE("a unit lag spike has a flat triangular-window transform") {
  const int n = 6;
  std::vector<double> rho(static_cast<std::size_t>(2 * n - 1), 0.0);
  rho[static_cast<std::size_t>(n - 1)] = 1.0;
  const auto out = fejer_covariance(rho, n);
  REQUIRE(out.size() == static_cast<std::size_t>(n));
  for (const cdouble& v : out) {
    CHECK(v.real() == 1.0);
    CHECK(v.imag() == 0.0);
  }
}

TEST_CASE("the lag-window transform matches the dense matrix oracle") {
  const TransferFunction a({1.0, 0.5}, {1.0});
  const TransferFunction b({0.3}, {1.0, -0.4});
  const int n = 8;
  const auto fast = fejer_covariance(filtered_crosscovariance(a, b, n), n);
  const auto oracle = testutil::dft_covariance_oracle(a, b, n);
  for (int l = 0; l < n; ++l) {
    CHECK(std::abs(fast[static_cast<std::size_t>(l)] - oracle[static_cast<std::size_t>(l)]) <=
          1e-12);
  }
}

TEST_CASE("benchmark noise covariances match the dense matrix oracle") {
  const auto sys = testutil::benchmark_system();
  const int n = 16;
  const auto cov = noise_covariances(sys, n);
  REQUIRE(cov.n == n);

  const TransferFunction sh = loop_tf(sys, LoopTf::SH);
  const TransferFunction sch = loop_tf(sys, LoopTf::SCH);
  const auto o_y = testutil::dft_covariance_oracle(sh, sh, n);
  const auto o_u = testutil::dft_covariance_oracle(sch, sch, n);
  const auto o_yu = testutil::dft_covariance_oracle(sh, sch, n);
  for (int l = 0; l < n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    CHECK(std::abs(cov.sigma_y[i] - o_y[i].real()) <= 1e-10);
    CHECK(std::abs(cov.sigma_u[i] - o_u[i].real()) <= 1e-10);
    // The input DFT noise enters negated, so the cross term flips sign.
    CHECK(std::abs(cov.sigma_yu[i] - (-o_yu[i])) <= 1e-10);
  }
}

TEST_CASE("covariances satisfy the Cauchy-Schwarz bound on the benchmark grid") {
  const auto cov = noise_covariances(testutil::benchmark_system(), 127);
  for (int l = 0; l < 127; ++l) {
    const auto i = static_cast<std::size_t>(l);
    CHECK(cov.sigma_y[i] > 0.0);
    CHECK(cov.sigma_u[i] > 0.0);
    CHECK(std::norm(cov.sigma_yu[i]) <= cov.sigma_y[i] * cov.sigma_u[i] * (1.0 + 1e-12));
  }
}

TEST_CASE("without feedback the input channel carries no noise") {
  ClosedLoopSystem open = testutil::benchmark_system();
  open.controller = TransferFunction::zero();
  const auto cov = noise_covariances(open, 16);
  for (int l = 0; l < 16; ++l) {
    const auto i = static_cast<std::size_t>(l);
    CHECK(cov.sigma_u[i] == 0.0);
    CHECK(cov.sigma_yu[i] == cdouble(0.0, 0.0));
    CHECK(cov.sigma_y[i] > 0.0);
  }
}

TEST_CASE("finite-grid covariances converge to the noise spectrum") {
  const auto sys = testutil::benchmark_system();
  const auto gap = [&](int n) {
    const auto cov = noise_covariances(sys, n);
    double worst = 0.0;
    for (int l = 0; l < n; ++l) {
      const double target = std::norm(loop_response(sys, LoopTf::SH, grid_omega(l, n)));
      worst = std::max(worst,
                       std::abs(cov.sigma_y[static_cast<std::size_t>(l)] - target) / target);
    }
    return worst;
  };
  const double g127 = gap(127);
  const double g1016 = gap(1016);
  CHECK(g127 < 0.05);
  CHECK(g1016 < 0.3 * g127);
}

TEST_CASE("asymptotic profiles collapse to one expression without feedback") {
  ClosedLoopSystem open = testutil::benchmark_system();
  open.controller = TransferFunction::zero();
  const int n = 64;
  const auto cov = noise_covariances(open, n);
  const Spectrum R = flat_reference(n);
  const auto dir = asymptotic_variance(open, R, cov, ProfileKind::asymptotic_dir);
  const auto ind = asymptotic_variance(open, R, cov, ProfileKind::asymptotic_ind);
  const auto io2 = asymptotic_variance(open, R, cov, ProfileKind::asymptotic_io2);
  CHECK(dir.scale == "per_sigma2");
  for (int l = 0; l < n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    REQUIRE(dir.valid[i] == 1);
    const double expected = cov.sigma_y[i];  // |S| = 1 and |R| = 1 here
    CHECK(std::abs(dir.values[i] - expected) <= 1e-14 * expected);
    CHECK(std::abs(ind.values[i] - expected) <= 1e-14 * expected);
    CHECK(std::abs(io2.values[i] - expected) <= 1e-14 * expected);
  }
}

TEST_CASE("the profile gap identity ties the three estimators together") {
  const auto sys = testutil::benchmark_system();
  const int n = 127;
  const auto cov = noise_covariances(sys, n);
  const Spectrum R = flat_reference(n);
  const auto dir = asymptotic_variance(sys, R, cov, ProfileKind::asymptotic_dir);
  const auto io2 = asymptotic_variance(sys, R, cov, ProfileKind::asymptotic_io2);
  for (int l = 0; l < n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    const double w = grid_omega(l, n);
    const cdouble g = evaluate(sys.plant, w);
    const double sr2 = std::norm(loop_response(sys, LoopTf::S, w));
    const double gap = 2.0 * (std::conj(g) * cov.sigma_yu[i]).real() / sr2;
    CHECK(std::abs((io2.values[i] - dir.values[i]) - gap) <=
          1e-10 * std::max(1.0, io2.values[i]));
  }
}

TEST_CASE("leakage-free profiles obey the closed-form ratio") {
  const auto sys = testutil::benchmark_system();
  const int n = 127;
  const Spectrum R = flat_reference(n);
  const auto dir = no_leakage_variance(sys, R, ProfileKind::no_leakage_dir);
  const auto io2 = no_leakage_variance(sys, R, ProfileKind::no_leakage_io2);
  CHECK(dir.kind == ProfileKind::no_leakage_dir);
  for (int l = 0; l < n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    const double w = grid_omega(l, n);
    const double s2 = std::norm(loop_response(sys, LoopTf::S, w));
    const double cg2 = std::norm(evaluate(sys.controller, w) * evaluate(sys.plant, w));
    const double ratio = io2.values[i] / dir.values[i];
    CHECK(std::abs(ratio - s2 * (1.0 + cg2)) <= 1e-12 * ratio);
  }
}

TEST_CASE("the leakage gap shrinks as the grid refines") {
  const auto sys = testutil::benchmark_system();
  const auto worst_gap = [&](int n) {
    const auto cov = noise_covariances(sys, n);
    const Spectrum R = flat_reference(n);
    const auto exact = asymptotic_variance(sys, R, cov, ProfileKind::asymptotic_dir);
    const auto ideal = no_leakage_variance(sys, R, ProfileKind::no_leakage_dir);
    double worst = 0.0;
    for (int l = 0; l < n; ++l) {
      const auto i = static_cast<std::size_t>(l);
      worst = std::max(worst, std::abs(exact.values[i] - ideal.values[i]) / ideal.values[i]);
    }
    return worst;
  };
  const double g127 = worst_gap(127);
  const double g1016 = worst_gap(1016);
  CHECK(g127 < 0.10);
  CHECK(g1016 < 0.25 * g127);
}

TEST_CASE("exact ordering always agrees with the sign of the profile gap") {
  const auto sys = testutil::benchmark_system();
  const int n = 127;
  const auto cov = noise_covariances(sys, n);
  const Spectrum R = flat_reference(n);
  const auto dir = asymptotic_variance(sys, R, cov, ProfileKind::asymptotic_dir);
  const auto io2 = asymptotic_variance(sys, R, cov, ProfileKind::asymptotic_io2);
  const auto pred = ordering_predicate(sys, cov);
  REQUIRE(pred.n == n);
  for (int l = 0; l < n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    if (pred.exact[i]) {
      CHECK(io2.values[i] < dir.values[i]);
    } else {
      CHECK(io2.values[i] >= dir.values[i]);
    }
  }
}

TEST_CASE("the approximate ordering test turns on at the expected frequency") {
  const auto sys = testutil::benchmark_system();
  {
    const auto cov = noise_covariances(sys, 127);
    const auto pred = ordering_predicate(sys, cov);
    int first = -1;
    for (int l = 1; l < 127 && first < 0; ++l) {
      if (pred.approximate[static_cast<std::size_t>(l)]) first = l;
    }
    CHECK(first == 14);
  }
  {
    ClosedLoopSystem open = sys;
    open.controller = TransferFunction::zero();
    const auto cov = noise_covariances(open, 32);
    const auto pred = ordering_predicate(open, cov);
    for (int l = 0; l < 32; ++l) {
      const auto i = static_cast<std::size_t>(l);
      CHECK(pred.exact[i] == 0);
      CHECK(pred.approximate[i] == 0);
    }
  }
}

TEST_CASE("covariance construction rejects unstable configurations") {
  ClosedLoopSystem bad_loop = testutil::benchmark_system();
  bad_loop.controller = TransferFunction({-2.0}, {1.0});
  CHECK_THROWS_AS(noise_covariances(bad_loop, 16), std::invalid_argument);

  ClosedLoopSystem bad_noise = testutil::benchmark_system();
  bad_noise.noise_model = TransferFunction({1.0}, {1.0, -1.5});
  CHECK_THROWS_AS(noise_covariances(bad_noise, 16), std::invalid_argument);
}

TEST_CASE("a zero reference bin is masked with a NaN profile value") {
  const auto sys = testutil::benchmark_system();
  const int n = 16;
  const auto cov = noise_covariances(sys, n);
  Spectrum R = flat_reference(n);
  R.values[3] = cdouble(0.0, 0.0);
  const auto dir = asymptotic_variance(sys, R, cov, ProfileKind::asymptotic_dir);
  CHECK(dir.valid[3] == 0);
  CHECK(std::isnan(dir.values[3]));
  CHECK(dir.valid[2] == 1);

  const auto ideal = no_leakage_variance(sys, R, ProfileKind::no_leakage_io2);
  CHECK(ideal.valid[3] == 0);
  CHECK(std::isnan(ideal.values[3]));
}
