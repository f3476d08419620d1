#pragma once

#include <cstdint>
#include <string>

#include "fdident/sim.hpp"

namespace fdident {

// Per-frequency plant estimate on the DFT grid. Frequencies whose denominator
// DFT falls below the magnitude floor are flagged invalid (value 0) instead of
// being returned as huge numbers.
struct PlantEstimate {
  std::vector<cdouble> values;
  std::vector<std::uint8_t> valid;
  std::string method;
  std::vector<int> source_ids;
  int n = 0;
};

// Denominator magnitude floor on the unitary DFT scale.
double denominator_floor(int n);

// Per-frequency ratio num/den with floor masking; the common core of every
// estimator, exposed so the per-frequency behaviour is testable directly.
PlantEstimate ratio_estimate(const Spectrum& num, const Spectrum& den, std::string method,
                             std::vector<int> source_ids, double floor);

// Closed-loop ETFEs: T_yr = Y/R (channel 'y') or T_ur = U/R (channel 'u').
PlantEstimate etfe(const ExperimentRecord& record, char channel);

// G_dir = Y/U.
PlantEstimate direct(const ExperimentRecord& record);

// G_ind = T_yr / (1 - T_yr C(omega)) with the known controller.
PlantEstimate indirect(const ExperimentRecord& record, const TransferFunction& controller);

// G_io = T_yr / T_ur; the shared R cancels, so this is Y/U exactly.
PlantEstimate joint_io(const ExperimentRecord& record);

// Numerator ETFE from one experiment, denominator from an independent one
// sharing the same r: Y(a)/U(b).
PlantEstimate joint_io_two_experiments(const ExperimentRecord& rec_a, const ExperimentRecord& rec_b);

// Per-frequency square root of the product, branch chosen nearest to the
// arithmetic mean; an exactly-zero mean is flagged and keeps the principal root.
PlantEstimate geometric_average(const PlantEstimate& est_a, const PlantEstimate& est_b);

}  // namespace fdident
