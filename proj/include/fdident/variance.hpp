#pragma once

#include <cstdint>
#include <string>

#include "fdident/lti.hpp"
#include "fdident/signals.hpp"

namespace fdident {

// Exact finite-n covariances of the normalized noise DFTs on the grid:
// sigma_y = E[Vy Vy*], sigma_u = E[Vu Vu*], sigma_yu = E[Vy Vu*], per unit
// innovation variance. Vy is the DFT of the filtered noise on the y channel;
// Vu enters the input equation as U = S R + Vu with u = S r - v_u, so
// Vu = -DFT(v_u).
struct NoiseCovariances {
  std::vector<double> sigma_y;
  std::vector<double> sigma_u;
  std::vector<cdouble> sigma_yu;
  int n = 0;
};

enum class ProfileKind {
  asymptotic_dir,
  asymptotic_ind,
  asymptotic_io2,
  no_leakage_dir,
  no_leakage_io2,
  mc_sample,
};

const char* to_string(ProfileKind kind);

// Per-frequency nonnegative real profile; invalid frequencies hold NaN.
struct VarianceProfile {
  std::vector<double> values;
  std::vector<std::uint8_t> valid;
  ProfileKind kind = ProfileKind::mc_sample;
  std::string scale;  // "per_sigma2" for small-noise profiles, "absolute" for sample variances
  int n = 0;
};

// Truncated impulse response: computed until the remaining tail energy is below
// tail_tol of the total, then extended by pad_lags samples so lag products up to
// pad_lags keep both factors inside the computed range. Throws NumericalError if
// the response does not decay.
std::vector<double> impulse_response(const TransferFunction& tf, int pad_lags, double tail_tol);

// rho(k) = sum_m h(m) h(m+k) for k = 0..n-1, h the unit-noise impulse response.
// tail_tol bounds the discarded tail energy relative to the total; lag values
// are then accurate to about sqrt(tail_tol) of the signal scale, so the
// default keeps them near machine precision.
std::vector<double> filtered_autocovariance(const TransferFunction& tf, int n,
                                            double tail_tol = 1e-30);

// rho_ab(k) = sum_j a(j+k) b(j) over lags -(n-1)..(n-1); entry [k + n - 1].
std::vector<double> filtered_crosscovariance(const TransferFunction& tf_a,
                                             const TransferFunction& tf_b, int n,
                                             double tail_tol = 1e-30);

// Lifts a nonnegative-lag autocovariance to the symmetric two-sided layout.
std::vector<double> symmetric_lags(const std::vector<double>& rho_nonneg);

// Exact finite-n DFT covariance at each grid frequency via the triangular lag
// window: sum_{|k|<n} ((n-|k|)/n) rho(k) e^{-j omega_l k}. rho_pm spans lags
// -(n-1)..(n-1) (size 2n-1).
std::vector<cdouble> fejer_covariance(const std::vector<double>& rho_pm, int n);

// sigma_y from SH, sigma_u from SCH, sigma_yu = -Fejer(crosscovariance(SH, SCH));
// the minus sign carries Vu = -DFT(v_u).
NoiseCovariances noise_covariances(const ClosedLoopSystem& sys, int n, double tail_tol = 1e-30);

// Small-noise variance profiles per unit sigma^2:
//   dir: (sigma_y + |G|^2 sigma_u - 2 Re[G* sigma_yu]) / |S R|^2
//   ind: sigma_y / (|S|^2 |S R|^2)
//   io2: (sigma_y + |G|^2 sigma_u) / |S R|^2
VarianceProfile asymptotic_variance(const ClosedLoopSystem& sys, const Spectrum& R,
                                    const NoiseCovariances& cov, ProfileKind which);

// Leakage-free closed forms:
//   dir: |H|^2 / |S R|^2        io2: (1 + |C G|^2) |H|^2 / |R|^2
VarianceProfile no_leakage_variance(const ClosedLoopSystem& sys, const Spectrum& R,
                                    ProfileKind which);

struct OrderingPredicates {
  std::vector<std::uint8_t> exact;        // Re[G* sigma_yu] < 0
  std::vector<std::uint8_t> approximate;  // Re[C G] < 0
  int n = 0;
};

OrderingPredicates ordering_predicate(const ClosedLoopSystem& sys, const NoiseCovariances& cov);

}  // namespace fdident
