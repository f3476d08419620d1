#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "fdident/lti.hpp"
#include "fdident/signals.hpp"

namespace testutil {

using fdident::cdouble;

// Benchmark closed loop used throughout: resonant second-order plant, FIR
// controller with one delay, third-order ARMA noise shaping.
inline fdident::ClosedLoopSystem benchmark_system() {
  fdident::ClosedLoopSystem sys;
  sys.plant = fdident::TransferFunction({1.0}, {1.0, -1.6, 0.89});
  sys.controller = fdident::TransferFunction({0.0, 1.0, -0.8}, {1.0});
  sys.noise_model =
      fdident::TransferFunction({1.0, -1.56, 1.045, -0.3338}, {1.0, -2.35, 2.09, -0.6675});
  return sys;
}

// Long impulse response by direct simulation; independent of the truncation
// logic under test.
inline std::vector<double> long_impulse(const fdident::TransferFunction& tf, int len) {
  std::vector<double> x(static_cast<std::size_t>(len), 0.0);
  x[0] = 1.0;
  return fdident::filter(tf, x);
}

// Brute-force diagonal of E[(W a_noise)(W b_noise)^H] for two filters driven by
// the same unit white noise: builds the n-by-n time-domain covariance from long
// impulse responses and conjugates by the unitary DFT matrix, O(n^3).
inline std::vector<cdouble> dft_covariance_oracle(const fdident::TransferFunction& tf_a,
                                                  const fdident::TransferFunction& tf_b, int n,
                                                  int len = 20000) {
  const std::vector<double> a = long_impulse(tf_a, len);
  const std::vector<double> b = long_impulse(tf_b, len);

  // c(k) = E[v_a(s) v_b(s+k)] = sum_m a(m) b(m+k), lags -(n-1)..(n-1).
  std::vector<double> c(static_cast<std::size_t>(2 * n - 1), 0.0);
  for (int k = -(n - 1); k <= n - 1; ++k) {
    double s = 0.0;
    for (int m = 0; m < len; ++m) {
      const int j = m + k;
      if (j >= 0 && j < len) s += a[static_cast<std::size_t>(m)] * b[static_cast<std::size_t>(j)];
    }
    c[static_cast<std::size_t>(k + n - 1)] = s;
  }

  const double pi = std::acos(-1.0);
  std::vector<cdouble> diag(static_cast<std::size_t>(n), cdouble(0.0, 0.0));
  for (int l = 0; l < n; ++l) {
    cdouble acc(0.0, 0.0);
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        // Gamma[s][t] = E[v_a(s) v_b(t)] = c(t - s).
        const double gamma = c[static_cast<std::size_t>(t - s + n - 1)];
        const double ang = -2.0 * pi * static_cast<double>(l) * static_cast<double>(s - t) /
                           static_cast<double>(n);
        acc += gamma * cdouble(std::cos(ang), std::sin(ang));
      }
    }
    diag[static_cast<std::size_t>(l)] = acc / static_cast<double>(n);
  }
  return diag;
}

// Random strictly stable transfer function: poles drawn inside radius 0.9,
// zeros inside radius 1.4, real coefficients via conjugate pairing.
inline fdident::TransferFunction random_stable_tf(std::mt19937& rng, int max_order = 3) {
  std::uniform_int_distribution<int> order_dist(1, max_order);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto random_poly = [&](int order, double radius) {
    std::vector<double> poly{1.0};
    int remaining = order;
    while (remaining > 0) {
      if (remaining >= 2 && unit(rng) < 0.5) {
        const double r = radius * std::sqrt(unit(rng));
        const double th = 2.0 * std::acos(-1.0) * unit(rng);
        // (1 - p q^-1)(1 - conj(p) q^-1) with p = r e^{j th}.
        poly = fdident::poly_mul(poly, {1.0, -2.0 * r * std::cos(th), r * r});
        remaining -= 2;
      } else {
        const double p = radius * (2.0 * unit(rng) - 1.0);
        poly = fdident::poly_mul(poly, {1.0, -p});
        remaining -= 1;
      }
    }
    return poly;
  };

  const int order = order_dist(rng);
  std::vector<double> num = random_poly(order, 1.4);
  const double gain = 0.2 + 1.8 * unit(rng);
  for (double& c : num) c *= gain;
  return fdident::TransferFunction(num, random_poly(order, 0.9));
}

// Random G, C, H with a stable closed loop; shrinks the controller gain until
// the loop stabilizes.
inline fdident::ClosedLoopSystem random_stable_system(std::mt19937& rng) {
  for (;;) {
    fdident::ClosedLoopSystem sys;
    sys.plant = random_stable_tf(rng);
    sys.controller = random_stable_tf(rng, 2);
    sys.noise_model = random_stable_tf(rng);
    for (int shrink = 0; shrink < 12; ++shrink) {
      // A real margin keeps impulse responses short enough for the dense
      // covariance oracle's fixed truncation.
      if (fdident::closed_loop_stable(sys, 0.05)) return sys;
      for (double& c : sys.controller.num) c *= 0.5;
    }
  }
}

}  // namespace testutil
