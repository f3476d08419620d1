#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace fdident {

using cdouble = std::complex<double>;

// Numerical failure: unstable loop, pole on the unit circle, non-decaying response.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rational function of the backward shift:
//   (num[0] + num[1] q^-1 + ...) / (den[0] + den[1] q^-1 + ...),  den[0] != 0.
struct TransferFunction {
  std::vector<double> num;
  std::vector<double> den;

  TransferFunction() : num{1.0}, den{1.0} {}
  TransferFunction(std::vector<double> num_, std::vector<double> den_);

  static TransferFunction identity() { return {{1.0}, {1.0}}; }
  static TransferFunction zero() { return {{0.0}, {1.0}}; }
  static TransferFunction gain(double g) { return {{g}, {1.0}}; }
  static TransferFunction delay(int k);
};

// Coefficient convolution / aligned addition; zero coefficients are never trimmed.
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> poly_add(const std::vector<double>& a, const std::vector<double>& b);

// Roots in the z-plane of c[0] z^m + c[1] z^(m-1) + ... + c[m], where c holds
// ascending backward-shift coefficients with c[0] != 0 (poles of 1/c).
std::vector<cdouble> poly_roots(const std::vector<double>& coeffs);

// num(e^{-j omega}) / den(e^{-j omega}); throws NumericalError on a pole at omega.
cdouble evaluate(const TransferFunction& tf, double omega);

// Streaming direct-form II transposed realization (coefficients normalized so den[0]=1).
class Filter {
 public:
  explicit Filter(const TransferFunction& tf);
  double step(double x);
  // Direct feedthrough coefficient and the pending state contribution, i.e.
  // step(x) returns feedthrough()*x + partial().
  double feedthrough() const { return b_[0]; }
  double partial() const { return s_.empty() ? 0.0 : s_[0]; }
  void set_state(const std::vector<double>& state);
  const std::vector<double>& state() const { return s_; }

 private:
  std::vector<double> b_, a_, s_;
};

// Difference equation den*y = num*x with the given initial DF2T state (zeros if empty).
std::vector<double> filter(const TransferFunction& tf, const std::vector<double>& input,
                           const std::vector<double>& initial_state = {});

// True iff every denominator root has modulus < 1 - margin.
bool is_stable(const TransferFunction& tf, double margin = 1e-9);

struct ClosedLoopSystem {
  TransferFunction plant;        // G
  TransferFunction controller;   // C
  TransferFunction noise_model;  // H
};

// den_G*den_C + num_G*num_C in the backward shift.
std::vector<double> closed_loop_char_poly(const ClosedLoopSystem& sys);

// All characteristic roots strictly inside the unit disc (and the loop well posed).
bool closed_loop_stable(const ClosedLoopSystem& sys, double margin = 1e-9);

enum class LoopTf { S, SG, SC, SH, SCH, GC };

// Pointwise value of the requested closed-loop map at omega; S = 1/(1 + G C).
cdouble loop_response(const ClosedLoopSystem& sys, LoopTf which, double omega);

// The same maps as explicit coefficient ratios; common factors are kept, never cancelled.
TransferFunction loop_tf(const ClosedLoopSystem& sys, LoopTf which);

}  // namespace fdident
