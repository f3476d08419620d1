#include "fdident/sim.hpp"

#include <cmath>

namespace fdident {

namespace {

struct LoopInputs {
  const std::vector<double>* r1;
  const std::vector<double>* r2;
  int n;
};

LoopInputs resolve_inputs(const ExcitationSignal& r1, const ExcitationSignal& r2) {
  static const std::vector<double> kEmpty;
  const bool h1 = !r1.samples.empty();
  const bool h2 = !r2.samples.empty();
  if (!h1 && !h2) throw std::invalid_argument("run_experiment: zero-length excitation");
  if (h1 && h2 && r1.samples.size() != r2.samples.size())
    throw std::invalid_argument("run_experiment: r1 and r2 must share one period length");
  LoopInputs in{h1 ? &r1.samples : &kEmpty, h2 ? &r2.samples : &kEmpty,
                static_cast<int>(h1 ? r1.samples.size() : r2.samples.size())};
  return in;
}

}  // namespace

ExperimentRecord run_experiment(const ClosedLoopSystem& sys, const ExcitationSignal& r1,
                                const ExcitationSignal& r2, const NoiseConfig& noise,
                                int settle_periods, int experiment_id) {
  if (settle_periods < 1) throw std::invalid_argument("run_experiment: settle_periods must be >= 1");
  if (noise.sigma < 0.0) throw std::invalid_argument("run_experiment: sigma must be >= 0");
  if (!closed_loop_stable(sys)) throw NumericalError("run_experiment: closed loop is unstable");
  if (!is_stable(sys.noise_model)) throw NumericalError("run_experiment: noise model is unstable");

  const LoopInputs in = resolve_inputs(r1, r2);
  const int n = in.n;

  Filter fG(sys.plant);
  Filter fC(sys.controller);
  Filter fH(sys.noise_model);
  Filter fCr(sys.controller);  // tracks r = r2 + C r1 alongside the loop

  const double g0 = fG.feedthrough();
  const double c0 = fC.feedthrough();
  const double loop_gain = 1.0 + g0 * c0;
  if (std::abs(loop_gain) <= 1e-12 * (1.0 + std::abs(g0 * c0)))
    throw NumericalError("run_experiment: algebraic loop has no solution");

  Rng rng(noise.seed);
  ExperimentRecord rec;
  rec.r.resize(static_cast<size_t>(n));
  rec.u.resize(static_cast<size_t>(n));
  rec.y.resize(static_cast<size_t>(n));
  rec.sigma = noise.sigma;
  rec.seed = noise.seed;
  rec.experiment_id = experiment_id;

  const int total = (settle_periods + 1) * n;
  for (int k = 0; k < total; ++k) {
    const size_t kp = static_cast<size_t>(k % n);
    const double r1k = in.r1->empty() ? 0.0 : (*in.r1)[kp];
    const double r2k = in.r2->empty() ? 0.0 : (*in.r2)[kp];
    const double v = noise.sigma * fH.step(rng.unit_variance(noise.distribution));
    // Solve the instantaneous loop for y, then keep every signal consistent
    // with the two filter equations.
    const double ypre = (g0 * (c0 * r1k + fC.partial() + r2k) + fG.partial() + v) / loop_gain;
    const double u = c0 * (r1k - ypre) + fC.partial() + r2k;
    const double y = fG.step(u) + v;
    fC.step(r1k - y);
    const double rk = r2k + fCr.step(r1k);
    if (k >= settle_periods * n) {
      const size_t idx = static_cast<size_t>(k - settle_periods * n);
      rec.r[idx] = rk;
      rec.u[idx] = u;
      rec.y[idx] = y;
    }
  }
  return rec;
}

std::pair<ExperimentRecord, ExperimentRecord> run_paired_experiments(
    const ClosedLoopSystem& sys, const ExcitationSignal& r1, const ExcitationSignal& r2,
    const NoiseConfig& noise_a, const NoiseConfig& noise_b, int settle_periods) {
  if (noise_a.seed == noise_b.seed)
    throw std::invalid_argument("run_paired_experiments: noise seeds must differ");
  ExperimentRecord a = run_experiment(sys, r1, r2, noise_a, settle_periods, 0);
  ExperimentRecord b = run_experiment(sys, r1, r2, noise_b, settle_periods, 1);
  return {std::move(a), std::move(b)};
}

std::vector<double> combined_reference(const TransferFunction& controller,
                                       const ExcitationSignal& r1, const ExcitationSignal& r2,
                                       int settle_periods) {
  const LoopInputs in = resolve_inputs(r1, r2);
  const int n = in.n;
  Filter fCr(controller);
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  const int total = (settle_periods + 1) * n;
  for (int k = 0; k < total; ++k) {
    const size_t kp = static_cast<size_t>(k % n);
    const double r1k = in.r1->empty() ? 0.0 : (*in.r1)[kp];
    const double r2k = in.r2->empty() ? 0.0 : (*in.r2)[kp];
    const double rk = r2k + fCr.step(r1k);
    if (k >= settle_periods * n) out[static_cast<size_t>(k - settle_periods * n)] = rk;
  }
  return out;
}

}  // namespace fdident
