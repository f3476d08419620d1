#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdident/mc.hpp"
#include "fdident/sim.hpp"

namespace fdident {

// Configuration rejected: syntax error (reported with line number) or invalid
// field (reported with its dotted path).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ClosedLoopSystem sys;

  std::string excitation_kind = "prbs";  // "prbs" | "custom"
  int register_length = 7;
  double amplitude = 1.0;
  unsigned lfsr_seed = 1;
  std::string channel = "r2";  // which reference input carries the excitation
  std::vector<double> samples;  // custom excitation only

  double sigma = 0.1;
  NoiseDistribution distribution = NoiseDistribution::gaussian;
  std::uint64_t base_seed = 1;

  int runs = 100;
  Pairing pairing = Pairing::single;

  std::vector<std::string> estimators = {"direct"};
  int settle_periods = 50;
  std::string out_dir = "out";

  ExcitationSignal excitation() const;
  // The excitation routed to its channel; the other channel is empty (zero).
  ExcitationSignal routed_r1() const;
  ExcitationSignal routed_r2() const;
  McConfig mc_config() const;
};

// Parses JSON text (// and /* */ comments allowed). origin names the source in
// diagnostics. Unknown keys are rejected; errors carry the dotted field path.
RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig parse_config_file(const std::string& path);

// The configuration with every default materialized, serialized with a
// deterministic key order; its hash fingerprints outputs.
std::string effective_config(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace fdident
