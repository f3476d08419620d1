#include "fdident/signals.hpp"

#include <cmath>
#include <numbers>

namespace fdident {

double Spectrum::omega(int l) const { return 2.0 * std::numbers::pi * l / n; }

namespace {

// e^{-j 2 pi m / n} for m = 0..n-1; powers are reduced mod n so every bin uses
// the identical table values.
std::vector<cdouble> twiddle(int n) {
  std::vector<cdouble> w(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double a = -2.0 * std::numbers::pi * m / n;
    w[static_cast<size_t>(m)] = cdouble(std::cos(a), std::sin(a));
  }
  return w;
}

template <typename T>
Spectrum dft_impl(const std::vector<T>& x) {
  if (x.empty()) throw std::invalid_argument("dft: empty input");
  const int n = static_cast<int>(x.size());
  const std::vector<cdouble> w = twiddle(n);
  Spectrum out;
  out.n = n;
  out.values.assign(static_cast<size_t>(n), cdouble(0.0, 0.0));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int l = 0; l < n; ++l) {
    cdouble acc(0.0, 0.0);
    for (int k = 0; k < n; ++k) {
      const long long m = (static_cast<long long>(l) * k) % n;
      acc += x[static_cast<size_t>(k)] * w[static_cast<size_t>(m)];
    }
    out.values[static_cast<size_t>(l)] = acc * scale;
  }
  return out;
}

}  // namespace

Spectrum dft(const std::vector<double>& x) { return dft_impl(x); }
Spectrum dft(const std::vector<cdouble>& x) { return dft_impl(x); }

std::vector<cdouble> inverse_dft(const Spectrum& X) {
  const int n = X.n;
  if (n <= 0 || X.values.size() != static_cast<size_t>(n))
    throw std::invalid_argument("inverse_dft: malformed spectrum");
  const std::vector<cdouble> w = twiddle(n);
  std::vector<cdouble> out(static_cast<size_t>(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) {
    cdouble acc(0.0, 0.0);
    for (int l = 0; l < n; ++l) {
      const long long m = (static_cast<long long>(l) * k) % n;
      acc += X.values[static_cast<size_t>(l)] * std::conj(w[static_cast<size_t>(m)]);
    }
    out[static_cast<size_t>(k)] = acc * scale;
  }
  return out;
}

namespace {

// Full feedback-tap exponent sets of primitive polynomials x^n + ... + 1.
const std::vector<int>& prbs_taps(int n) {
  static const std::vector<std::vector<int>> table = {
      /* 2*/ {2, 1},
      /* 3*/ {3, 2},
      /* 4*/ {4, 3},
      /* 5*/ {5, 3},
      /* 6*/ {6, 5},
      /* 7*/ {7, 6},
      /* 8*/ {8, 6, 5, 4},
      /* 9*/ {9, 5},
      /*10*/ {10, 7},
      /*11*/ {11, 9},
      /*12*/ {12, 11, 10, 4},
      /*13*/ {13, 12, 11, 8},
      /*14*/ {14, 13, 12, 2},
      /*15*/ {15, 14},
      /*16*/ {16, 15, 13, 4},
  };
  return table[static_cast<size_t>(n - 2)];
}

}  // namespace

ExcitationSignal prbs(int register_length, double amplitude, unsigned seed) {
  if (register_length < 2 || register_length > 16)
    throw std::invalid_argument("prbs: register_length must be in [2,16]");
  const unsigned mask = (1u << register_length) - 1u;
  unsigned state = seed & mask;
  if (state == 0u) throw std::invalid_argument("prbs: seed must be nonzero in the register bits");
  const std::vector<int>& taps = prbs_taps(register_length);
  const int period = static_cast<int>(mask);
  ExcitationSignal out;
  out.kind = "prbs";
  out.samples.resize(static_cast<size_t>(period));
  for (int k = 0; k < period; ++k) {
    unsigned newbit = 0u;
    for (int t : taps) newbit ^= (state >> (t - 1)) & 1u;
    out.samples[static_cast<size_t>(k)] = (state & 1u) ? amplitude : -amplitude;
    state = ((state << 1) | newbit) & mask;
  }
  return out;
}

ExcitationSignal custom_signal(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("custom_signal: empty sample array");
  ExcitationSignal out;
  out.kind = "custom";
  out.samples = std::move(samples);
  return out;
}

ExcitationSignal zero_signal(int n) {
  if (n < 1) throw std::invalid_argument("zero_signal: length must be >= 1");
  ExcitationSignal out;
  out.kind = "zero";
  out.samples.assign(static_cast<size_t>(n), 0.0);
  return out;
}

std::vector<double> periodic_extend(const ExcitationSignal& s, int periods) {
  if (periods < 1) throw std::invalid_argument("periodic_extend: periods must be >= 1");
  if (s.samples.empty()) throw std::invalid_argument("periodic_extend: empty signal");
  std::vector<double> out;
  out.reserve(s.samples.size() * static_cast<size_t>(periods));
  for (int p = 0; p < periods; ++p) out.insert(out.end(), s.samples.begin(), s.samples.end());
  return out;
}

}  // namespace fdident
