#pragma once

#include <string>
#include <vector>

#include "fdident/lti.hpp"

namespace fdident {

// Complex values on the uniform grid omega_l = 2*pi*l/n, l = 0..n-1.
struct Spectrum {
  std::vector<cdouble> values;
  int n = 0;

  double omega(int l) const;
};

// Unitary DFT: X[l] = (1/sqrt(n)) sum_k x[k] e^{-j 2 pi l k / n}.
Spectrum dft(const std::vector<double>& x);
Spectrum dft(const std::vector<cdouble>& x);

// Matching unitary inverse.
std::vector<cdouble> inverse_dft(const Spectrum& X);

// One period of a periodic excitation.
struct ExcitationSignal {
  std::vector<double> samples;
  std::string kind;  // "prbs" | "custom" | "zero"

  int period() const { return static_cast<int>(samples.size()); }
};

// Maximal-length shift-register sequence of period 2^register_length - 1 mapped
// to +/-amplitude; register_length in [2,16], seed must be nonzero in the low bits.
ExcitationSignal prbs(int register_length, double amplitude, unsigned seed);

ExcitationSignal custom_signal(std::vector<double> samples);
ExcitationSignal zero_signal(int n);

std::vector<double> periodic_extend(const ExcitationSignal& s, int periods);

}  // namespace fdident
