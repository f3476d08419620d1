#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdident/estimators.hpp"
#include "fdident/variance.hpp"

namespace fdident {

// Experiments simulated per Monte Carlo run.
enum class Pairing { single, paired, quad };

const char* to_string(Pairing pairing);
Pairing pairing_from_string(const std::string& name);
int experiments_per_run(Pairing pairing);

// Experiments a given estimator tag consumes (1, 2, or 4).
int experiments_needed(const std::string& estimator);

// Applies one estimator tag to the records of a single run; recs must hold at
// least experiments_needed(tag) entries.
PlantEstimate apply_estimator(const std::string& tag, const std::vector<ExperimentRecord>& recs,
                              const TransferFunction& controller);

struct McConfig {
  int runs = 0;
  double sigma = 0.0;
  std::uint64_t base_seed = 0;
  std::vector<std::string> estimators;
  Pairing pairing = Pairing::single;
  NoiseDistribution distribution = NoiseDistribution::gaussian;
};

// Per-frequency sample statistics for one estimator. variance holds
// E|x - mean|^2 with 1/(count-1) normalization over the runs that survived
// denominator-floor masking at that frequency; count is in validity.
struct McEstimatorStats {
  std::string estimator;
  std::vector<cdouble> mean;
  std::vector<double> variance;
  std::vector<int> validity;
  int n = 0;
};

struct McResult {
  std::vector<McEstimatorStats> stats;
  int n = 0;
  int runs = 0;
  double sigma = 0.0;
  std::uint64_t base_seed = 0;
  Pairing pairing = Pairing::single;

  const McEstimatorStats& find(const std::string& estimator) const;
};

// Runs mc.runs independent simulations (experiments_per_run(pairing) experiments
// each, seeds derive_seed(base_seed, run, experiment)), applies every requested
// estimator, and accumulates per-frequency statistics in fixed run order.
McResult run_mc(const ClosedLoopSystem& sys, const ExcitationSignal& r1,
                const ExcitationSignal& r2, const McConfig& mc, int settle_periods);

struct ComparisonRow {
  double omega = 0.0;
  double mc_var = 0.0;
  double theory_var = 0.0;
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  int validity = 0;
  bool flagged = false;
};

// Per-frequency comparison of sample variances against a theoretical profile;
// "per_sigma2" profiles are scaled by sigma^2. Rows whose rel_diff exceeds
// flag_threshold are flagged.
std::vector<ComparisonRow> compare_profiles(const McEstimatorStats& stats,
                                            const VarianceProfile& theory, double sigma,
                                            double flag_threshold = 0.25);

}  // namespace fdident
