#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"

#include "fdident/lti.hpp"
#include "fdident/signals.hpp"
#include "helpers.hpp"

using namespace fdident;

TEST_CASE("dft of constants and impulses matches the unitary normalization") {
  {
    const Spectrum X = dft(std::vector<double>{1.0, 1.0, 1.0, 1.0});
    CHECK(X.n == 4);
    CHECK(std::abs(X.values[0] - cdouble(2.0, 0.0)) <= 1e-15);
    for (int l = 1; l < 4; ++l) CHECK(std::abs(X.values[static_cast<std::size_t>(l)]) <= 1e-15);
  }
  {
    const Spectrum X = dft(std::vector<double>{1.0, 0.0, 0.0, 0.0});
    for (const cdouble v : X.values) CHECK(std::abs(v - cdouble(0.5, 0.0)) <= 1e-15);
  }
  CHECK_THROWS_AS(dft(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("grid frequencies are uniformly spaced") {
  Spectrum X = dft(std::vector<double>(8, 1.0));
  for (int l = 0; l < 8; ++l) {
    CHECK(X.omega(l) == doctest::Approx(2.0 * std::numbers::pi * l / 8.0).epsilon(1e-15));
  }
}

TEST_CASE("dft preserves energy") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> len(1, 64);
    std::vector<double> x(static_cast<std::size_t>(len(rng)));
    for (double& v : x) v = dist(rng);
    double time_energy = 0.0;
    for (const double v : x) time_energy += v * v;
    double freq_energy = 0.0;
    for (const cdouble v : dft(x).values) freq_energy += std::norm(v);
    CHECK(freq_energy == doctest::Approx(time_energy).epsilon(1e-12));
  }
}

TEST_CASE("inverse_dft inverts dft") {
  std::mt19937 rng(22);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (const int n : {1, 2, 7, 32}) {
    Spectrum X;
    X.n = n;
    for (int l = 0; l < n; ++l) X.values.emplace_back(dist(rng), dist(rng));
    const Spectrum back = dft(inverse_dft(X));
    for (int l = 0; l < n; ++l) {
      const auto i = static_cast<std::size_t>(l);
      CHECK(std::abs(back.values[i] - X.values[i]) <= 1e-10);
    }
  }
}

TEST_CASE("dft of a real sequence is conjugate symmetric") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> x(31);
  for (double& v : x) v = dist(rng);
  const Spectrum X = dft(x);
  for (int l = 1; l < X.n; ++l) {
    const cdouble a = X.values[static_cast<std::size_t>(X.n - l)];
    const cdouble b = std::conj(X.values[static_cast<std::size_t>(l)]);
    CHECK(std::abs(a - b) <= 1e-12);
  }
}

TEST_CASE("prbs produces maximal-length binary sequences") {
  for (int reg = 2; reg <= 16; ++reg) {
    const ExcitationSignal s = prbs(reg, 1.0, 1);
    const int period = (1 << reg) - 1;
    REQUIRE(s.period() == period);
    CHECK(s.kind == "prbs");

    int plus = 0;
    for (const double v : s.samples) {
      CHECK((v == 1.0 || v == -1.0));
      if (v > 0.0) ++plus;
    }
    // Maximal-length sequences are one sample away from balanced.
    CHECK(std::abs(2 * plus - period) == 1);

    // Every cyclic window of reg consecutive samples is a distinct nonzero
    // bit pattern; only maximal-length sequences visit all 2^reg - 1 of them.
    std::set<unsigned> windows;
    for (int k = 0; k < period; ++k) {
      unsigned w = 0;
      for (int b = 0; b < reg; ++b) {
        w = (w << 1) | (s.samples[static_cast<std::size_t>((k + b) % period)] > 0.0 ? 1u : 0u);
      }
      CHECK(w != 0u);
      windows.insert(w);
    }
    CHECK(windows.size() == static_cast<std::size_t>(period));
  }
}

TEST_CASE("prbs spectrum is nonzero on the whole grid") {
  const ExcitationSignal s = prbs(7, 1.0, 127);
  CHECK(s.period() == 127);
  const Spectrum R = dft(s.samples);
  double min_mag = 1e300;
  for (const cdouble v : R.values) min_mag = std::min(min_mag, std::abs(v));
  CHECK(min_mag > 0.08);
}

TEST_CASE("prbs scales by amplitude and validates its arguments") {
  const ExcitationSignal s = prbs(5, 2.5, 1);
  for (const double v : s.samples) CHECK((v == 2.5 || v == -2.5));
  CHECK_THROWS_AS(prbs(7, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(prbs(1, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(prbs(17, 1.0, 1), std::invalid_argument);
}

TEST_CASE("custom and zero signals carry their samples") {
  const ExcitationSignal c = custom_signal({1.0, 2.0, 3.0});
  CHECK(c.kind == "custom");
  CHECK(c.period() == 3);
  CHECK_THROWS_AS(custom_signal({}), std::invalid_argument);

  const ExcitationSignal z = zero_signal(4);
  CHECK(z.period() == 4);
  for (const double v : z.samples) CHECK(v == 0.0);
}

TEST_CASE("periodic_extend concatenates whole periods") {
  const ExcitationSignal s = custom_signal({1.0, -1.0});
  CHECK(periodic_extend(s, 3) == std::vector<double>{1.0, -1.0, 1.0, -1.0, 1.0, -1.0});
  CHECK(periodic_extend(s, 5).size() == 10);

  const ExcitationSignal p = prbs(4, 1.0, 9);
  const std::vector<double> ext = periodic_extend(p, 4);
  const std::vector<double> last(ext.end() - p.period(), ext.end());
  CHECK(last == p.samples);
  CHECK_THROWS_AS(periodic_extend(s, 0), std::invalid_argument);
}

TEST_CASE("steady-state output-to-reference ratio equals the closed-loop response") {
  const auto sys = testutil::benchmark_system();
  const ExcitationSignal r = prbs(7, 1.0, 64);
  const int n = r.period();

  const TransferFunction sg = loop_tf(sys, LoopTf::SG);
  const std::vector<double> y = filter(sg, periodic_extend(r, 40));

  const Spectrum R = dft(r.samples);
  const Spectrum Y = dft(std::vector<double>(y.end() - n, y.end()));
  for (int l = 0; l < n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    const cdouble ratio = Y.values[i] / R.values[i];
    CHECK(std::abs(ratio - loop_response(sys, LoopTf::SG, R.omega(l))) <= 1e-8);
  }
}
