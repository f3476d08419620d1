#pragma once

#include <cstdint>
#include <utility>

#include "fdident/lti.hpp"
#include "fdident/rng.hpp"
#include "fdident/signals.hpp"

namespace fdident {

struct NoiseConfig {
  double sigma = 0.0;
  NoiseDistribution distribution = NoiseDistribution::gaussian;
  std::uint64_t seed = 0;
};

// One steady-state dataset: synchronized length-n records of the combined
// reference r = r2 + C r1, the plant input u, and the plant output y.
struct ExperimentRecord {
  std::vector<double> r, u, y;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  int experiment_id = 0;

  int n() const { return static_cast<int>(r.size()); }
};

// Simulates the feedback loop sample by sample,
//   u(k) = C(q) (r1(k) - y(k)) + r2(k),   y(k) = G(q) u(k) + v(k),   v = sigma H(q) e,
// for (settle_periods + 1) periods and keeps the last period. An empty r1 or r2
// stands for the zero signal; at least one must be non-empty.
ExperimentRecord run_experiment(const ClosedLoopSystem& sys, const ExcitationSignal& r1,
                                const ExcitationSignal& r2, const NoiseConfig& noise,
                                int settle_periods, int experiment_id = 0);

// Two records sharing the identical deterministic content (same r) with
// independent noise streams; the seeds must differ.
std::pair<ExperimentRecord, ExperimentRecord> run_paired_experiments(
    const ClosedLoopSystem& sys, const ExcitationSignal& r1, const ExcitationSignal& r2,
    const NoiseConfig& noise_a, const NoiseConfig& noise_b, int settle_periods);

// The stored reference period r = r2 + C r1 in periodic steady state.
std::vector<double> combined_reference(const TransferFunction& controller,
                                       const ExcitationSignal& r1, const ExcitationSignal& r2,
                                       int settle_periods);

}  // namespace fdident
