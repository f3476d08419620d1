#include "fdident/estimators.hpp"

#include <cmath>
#include <numbers>

namespace fdident {

double denominator_floor(int n) { return 1e-12 * std::sqrt(static_cast<double>(n)); }

PlantEstimate ratio_estimate(const Spectrum& num, const Spectrum& den, std::string method,
                             std::vector<int> source_ids, double floor) {
  if (num.n != den.n) throw std::invalid_argument("ratio_estimate: grid mismatch");
  PlantEstimate out;
  out.n = num.n;
  out.method = std::move(method);
  out.source_ids = std::move(source_ids);
  out.values.assign(num.values.size(), cdouble(0.0, 0.0));
  out.valid.assign(num.values.size(), 0);
  for (size_t l = 0; l < num.values.size(); ++l) {
    if (std::abs(den.values[l]) > floor) {
      out.values[l] = num.values[l] / den.values[l];
      out.valid[l] = 1;
    }
  }
  return out;
}

PlantEstimate etfe(const ExperimentRecord& record, char channel) {
  if (channel != 'y' && channel != 'u') throw std::invalid_argument("etfe: channel must be 'y' or 'u'");
  const Spectrum R = dft(record.r);
  const Spectrum X = dft(channel == 'y' ? record.y : record.u);
  return ratio_estimate(X, R, channel == 'y' ? "etfe_yr" : "etfe_ur", {record.experiment_id},
                        denominator_floor(record.n()));
}

PlantEstimate direct(const ExperimentRecord& record) {
  const Spectrum Y = dft(record.y);
  const Spectrum U = dft(record.u);
  return ratio_estimate(Y, U, "direct", {record.experiment_id}, denominator_floor(record.n()));
}

PlantEstimate indirect(const ExperimentRecord& record, const TransferFunction& controller) {
  PlantEstimate tyr = etfe(record, 'y');
  PlantEstimate out;
  out.n = tyr.n;
  out.method = "indirect";
  out.source_ids = {record.experiment_id};
  out.values.assign(tyr.values.size(), cdouble(0.0, 0.0));
  out.valid.assign(tyr.values.size(), 0);
  for (size_t l = 0; l < tyr.values.size(); ++l) {
    if (!tyr.valid[l]) continue;
    const cdouble c = evaluate(controller, 2.0 * std::numbers::pi * static_cast<double>(l) / tyr.n);
    const cdouble d = 1.0 - tyr.values[l] * c;
    if (std::abs(d) <= 1e-12) continue;
    out.values[l] = tyr.values[l] / d;
    out.valid[l] = 1;
  }
  return out;
}

PlantEstimate joint_io(const ExperimentRecord& record) {
  PlantEstimate out = direct(record);
  out.method = "joint_io";
  return out;
}

PlantEstimate joint_io_two_experiments(const ExperimentRecord& rec_a, const ExperimentRecord& rec_b) {
  if (rec_a.r != rec_b.r)
    throw std::invalid_argument("joint_io_two_experiments: records must share the same r");
  const Spectrum Y = dft(rec_a.y);
  const Spectrum U = dft(rec_b.u);
  return ratio_estimate(Y, U, "joint_io_two_exp", {rec_a.experiment_id, rec_b.experiment_id},
                        denominator_floor(rec_a.n()));
}

PlantEstimate geometric_average(const PlantEstimate& est_a, const PlantEstimate& est_b) {
  if (est_a.n != est_b.n) throw std::invalid_argument("geometric_average: grid mismatch");
  if (est_a.method != est_b.method)
    throw std::invalid_argument("geometric_average: method tags differ");
  PlantEstimate out;
  out.n = est_a.n;
  out.method = "geo_avg";
  out.source_ids = est_a.source_ids;
  out.source_ids.insert(out.source_ids.end(), est_b.source_ids.begin(), est_b.source_ids.end());
  out.values.assign(est_a.values.size(), cdouble(0.0, 0.0));
  out.valid.assign(est_a.values.size(), 0);
  for (size_t l = 0; l < est_a.values.size(); ++l) {
    if (!est_a.valid[l] || !est_b.valid[l]) continue;
    const cdouble a = est_a.values[l];
    const cdouble b = est_b.values[l];
    const cdouble root = std::sqrt(a * b);
    const cdouble mean = 0.5 * (a + b);
    const bool mean_zero = mean.real() == 0.0 && mean.imag() == 0.0;
    const bool root_zero = root.real() == 0.0 && root.imag() == 0.0;
    if (mean_zero && !root_zero) {
      out.values[l] = root;  // both branches equidistant: keep the principal root, flag it
      continue;
    }
    out.values[l] = std::abs(root - mean) <= std::abs(-root - mean) ? root : -root;
    out.valid[l] = 1;
  }
  return out;
}

}  // namespace fdident
