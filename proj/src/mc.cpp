#include "fdident/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "fdident/sim.hpp"

namespace fdident {

namespace {

struct Accumulator {
  std::vector<int> count;
  std::vector<cdouble> mean;
  std::vector<double> m2;

  explicit Accumulator(int n)
      : count(static_cast<std::size_t>(n), 0),
        mean(static_cast<std::size_t>(n), cdouble(0.0, 0.0)),
        m2(static_cast<std::size_t>(n), 0.0) {}

  void add(const PlantEstimate& est) {
    for (std::size_t i = 0; i < mean.size(); ++i) {
      if (!est.valid[i]) continue;
      const cdouble x = est.values[i];
      ++count[i];
      const cdouble delta = x - mean[i];
      mean[i] += delta / static_cast<double>(count[i]);
      m2[i] += (std::conj(delta) * (x - mean[i])).real();
    }
  }
};

}  // namespace

const char* to_string(Pairing pairing) {
  switch (pairing) {
    case Pairing::single: return "single";
    case Pairing::paired: return "paired";
    case Pairing::quad: return "quad";
  }
  return "unknown";
}

Pairing pairing_from_string(const std::string& name) {
  if (name == "single") return Pairing::single;
  if (name == "paired") return Pairing::paired;
  if (name == "quad") return Pairing::quad;
  throw std::invalid_argument("pairing must be single, paired, or quad, got '" + name + "'");
}

int experiments_per_run(Pairing pairing) {
  switch (pairing) {
    case Pairing::single: return 1;
    case Pairing::paired: return 2;
    case Pairing::quad: return 4;
  }
  return 0;
}

int experiments_needed(const std::string& estimator) {
  if (estimator == "etfe_yr" || estimator == "etfe_ur" || estimator == "direct" ||
      estimator == "indirect" || estimator == "joint_io") {
    return 1;
  }
  if (estimator == "joint_io_two_exp" || estimator == "geo_direct") return 2;
  if (estimator == "geo_joint_io_two_exp") return 4;
  throw std::invalid_argument("unknown estimator tag '" + estimator + "'");
}

PlantEstimate apply_estimator(const std::string& tag, const std::vector<ExperimentRecord>& recs,
                              const TransferFunction& controller) {
  if (static_cast<int>(recs.size()) < experiments_needed(tag)) {
    throw std::invalid_argument("apply_estimator: tag '" + tag + "' needs " +
                                std::to_string(experiments_needed(tag)) + " records");
  }
  if (tag == "etfe_yr") return etfe(recs[0], 'y');
  if (tag == "etfe_ur") return etfe(recs[0], 'u');
  if (tag == "direct") return direct(recs[0]);
  if (tag == "indirect") return indirect(recs[0], controller);
  if (tag == "joint_io") return joint_io(recs[0]);
  if (tag == "joint_io_two_exp") return joint_io_two_experiments(recs[0], recs[1]);
  if (tag == "geo_direct") return geometric_average(direct(recs[0]), direct(recs[1]));
  return geometric_average(joint_io_two_experiments(recs[0], recs[1]),
                           joint_io_two_experiments(recs[2], recs[3]));
}

const McEstimatorStats& McResult::find(const std::string& estimator) const {
  for (const auto& s : stats) {
    if (s.estimator == estimator) return s;
  }
  throw std::invalid_argument("McResult: no statistics for estimator '" + estimator + "'");
}

McResult run_mc(const ClosedLoopSystem& sys, const ExcitationSignal& r1,
                const ExcitationSignal& r2, const McConfig& mc, int settle_periods) {
  if (mc.runs < 2) throw std::invalid_argument("run_mc: runs must be >= 2");
  if (!(mc.sigma > 0.0)) throw std::invalid_argument("run_mc: sigma must be > 0");
  if (mc.estimators.empty()) throw std::invalid_argument("run_mc: no estimators requested");
  {
    const std::set<std::string> unique(mc.estimators.begin(), mc.estimators.end());
    if (unique.size() != mc.estimators.size()) {
      throw std::invalid_argument("run_mc: duplicate estimator tag");
    }
  }
  const int per_run = experiments_per_run(mc.pairing);
  for (const auto& tag : mc.estimators) {
    if (experiments_needed(tag) > per_run) {
      throw std::invalid_argument("run_mc: estimator '" + tag + "' needs " +
                                  std::to_string(experiments_needed(tag)) +
                                  " experiments per run, pairing '" + to_string(mc.pairing) +
                                  "' provides " + std::to_string(per_run));
    }
  }
  if (!closed_loop_stable(sys)) throw NumericalError("run_mc: unstable loop");

  const int period = std::max(r1.period(), r2.period());
  if (period < 1) throw std::invalid_argument("run_mc: empty excitation");

  std::vector<Accumulator> acc;
  acc.reserve(mc.estimators.size());
  for (std::size_t e = 0; e < mc.estimators.size(); ++e) acc.emplace_back(period);

  std::vector<ExperimentRecord> recs(static_cast<std::size_t>(per_run));
  for (int run = 0; run < mc.runs; ++run) {
    for (int exp = 0; exp < per_run; ++exp) {
      NoiseConfig noise;
      noise.sigma = mc.sigma;
      noise.distribution = mc.distribution;
      noise.seed = derive_seed(mc.base_seed, run, exp);
      recs[static_cast<std::size_t>(exp)] = run_experiment(sys, r1, r2, noise, settle_periods, exp);
    }
    for (std::size_t e = 0; e < mc.estimators.size(); ++e) {
      acc[e].add(apply_estimator(mc.estimators[e], recs, sys.controller));
    }
  }

  McResult result;
  result.n = period;
  result.runs = mc.runs;
  result.sigma = mc.sigma;
  result.base_seed = mc.base_seed;
  result.pairing = mc.pairing;
  result.stats.reserve(mc.estimators.size());
  for (std::size_t e = 0; e < mc.estimators.size(); ++e) {
    McEstimatorStats s;
    s.estimator = mc.estimators[e];
    s.n = period;
    s.mean = acc[e].mean;
    s.validity = acc[e].count;
    s.variance.assign(static_cast<std::size_t>(period), 0.0);
    for (std::size_t i = 0; i < s.variance.size(); ++i) {
      if (acc[e].count[i] >= 2) {
        s.variance[i] = acc[e].m2[i] / static_cast<double>(acc[e].count[i] - 1);
      }
    }
    result.stats.push_back(std::move(s));
  }
  return result;
}

std::vector<ComparisonRow> compare_profiles(const McEstimatorStats& stats,
                                            const VarianceProfile& theory, double sigma,
                                            double flag_threshold) {
  if (stats.n != theory.n) throw std::invalid_argument("compare_profiles: grid mismatch");
  if (stats.n < 1) throw std::invalid_argument("compare_profiles: empty grid");

  const double scale = theory.scale == "per_sigma2" ? sigma * sigma : 1.0;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<ComparisonRow> rows(static_cast<std::size_t>(stats.n));
  for (int l = 0; l < stats.n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    ComparisonRow& row = rows[i];
    row.omega = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(stats.n);
    row.mc_var = stats.variance[i];
    row.validity = stats.validity[i];
    if (theory.valid[i]) {
      row.theory_var = scale * theory.values[i];
      row.abs_diff = std::abs(row.mc_var - row.theory_var);
      row.rel_diff = row.theory_var != 0.0 ? row.abs_diff / row.theory_var : nan;
      row.flagged = std::isfinite(row.rel_diff) && row.rel_diff > flag_threshold;
    } else {
      row.theory_var = nan;
      row.abs_diff = nan;
      row.rel_diff = nan;
      row.flagged = false;
    }
  }
  return rows;
}

}  // namespace fdident
