#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fdident/estimators.hpp"
#include "fdident/mc.hpp"
#include "fdident/sim.hpp"
#include "fdident/variance.hpp"

namespace fdident {

// Shortest round-trip decimal representation ("%.17g").
std::string format_double(double v);

// FNV-1a 64-bit hash, used to fingerprint configurations in CSV metadata.
std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

// Ordered key/value pairs emitted as "# key: value" lines ahead of the header.
using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_csv(const std::string& path, const Metadata& meta, const std::string& header,
               const std::vector<std::string>& rows);

struct CsvFile {
  Metadata meta;
  std::string header;
  std::vector<std::vector<std::string>> rows;

  // First metadata value for key; throws if absent.
  const std::string& meta_value(const std::string& key) const;
};

CsvFile read_csv(const std::string& path);

// Columns k,r,u,y with n, sigma, seed, experiment_id in the metadata block.
void write_record_csv(const std::string& path, const ExperimentRecord& rec,
                      const Metadata& extra = {});
ExperimentRecord read_record_csv(const std::string& path);

// Columns omega,re,im,valid,method.
void write_estimate_csv(const std::string& path, const PlantEstimate& est,
                        const Metadata& extra = {});
PlantEstimate read_estimate_csv(const std::string& path);

// Columns omega,value,kind.
void write_profile_csv(const std::string& path, const VarianceProfile& profile,
                       const Metadata& extra = {});

// Both predicates in one file, kinds predicate_exact / predicate_approximate.
void write_predicates_csv(const std::string& path, const OrderingPredicates& pred,
                          const Metadata& extra = {});

// Columns omega,estimator,mc_var,theory_var,abs_diff,rel_diff,validity; one
// block of rows per estimator, in the given order.
void write_comparison_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, std::vector<ComparisonRow>>>& tables,
    const Metadata& extra = {});

// Single column "sample", one value per line.
void write_signal_csv(const std::string& path, const std::vector<double>& samples);
std::vector<double> read_signal_csv(const std::string& path);

}  // namespace fdident
