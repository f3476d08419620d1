#include "fdident/lti.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace fdident {

TransferFunction::TransferFunction(std::vector<double> num_, std::vector<double> den_)
    : num(std::move(num_)), den(std::move(den_)) {
  if (den.empty()) throw std::invalid_argument("transfer function: empty denominator");
  if (den[0] == 0.0) throw std::invalid_argument("transfer function: den[0] must be nonzero");
  if (num.empty()) num = {0.0};
}

TransferFunction TransferFunction::delay(int k) {
  if (k < 0) throw std::invalid_argument("delay: negative shift");
  std::vector<double> n(static_cast<size_t>(k) + 1, 0.0);
  n.back() = 1.0;
  return {std::move(n), {1.0}};
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

std::vector<double> poly_add(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

std::vector<cdouble> poly_roots(const std::vector<double>& coeffs) {
  if (coeffs.empty() || coeffs[0] == 0.0)
    throw std::invalid_argument("poly_roots: leading coefficient must be nonzero");
  const size_t m = coeffs.size() - 1;
  if (m == 0) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<long>(m), static_cast<long>(m));
  for (size_t i = 0; i < m; ++i) comp(0, static_cast<long>(i)) = -coeffs[i + 1] / coeffs[0];
  for (size_t i = 1; i < m; ++i) comp(static_cast<long>(i), static_cast<long>(i - 1)) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("poly_roots: eigensolver failed");
  std::vector<cdouble> roots(m);
  for (size_t i = 0; i < m; ++i) {
    auto ev = solver.eigenvalues()(static_cast<long>(i));
    roots[i] = cdouble(ev.real(), ev.imag());
  }
  return roots;
}

cdouble evaluate(const TransferFunction& tf, double omega) {
  const cdouble z = std::exp(cdouble(0.0, -omega));
  cdouble n = 0.0, d = 0.0, zk = 1.0;
  const size_t top = std::max(tf.num.size(), tf.den.size());
  for (size_t k = 0; k < top; ++k) {
    if (k < tf.num.size()) n += tf.num[k] * zk;
    if (k < tf.den.size()) d += tf.den[k] * zk;
    zk *= z;
  }
  double scale = 0.0;
  for (double a : tf.den) scale += std::abs(a);
  if (std::abs(d) <= 1e-14 * scale) throw NumericalError("evaluate: pole on the unit circle");
  return n / d;
}

Filter::Filter(const TransferFunction& tf) {
  const size_t m = std::max(tf.num.size(), tf.den.size());
  b_.assign(m, 0.0);
  a_.assign(m, 0.0);
  const double a0 = tf.den[0];
  for (size_t i = 0; i < tf.num.size(); ++i) b_[i] = tf.num[i] / a0;
  for (size_t i = 0; i < tf.den.size(); ++i) a_[i] = tf.den[i] / a0;
  s_.assign(m > 0 ? m - 1 : 0, 0.0);
}

double Filter::step(double x) {
  const double y = b_[0] * x + (s_.empty() ? 0.0 : s_[0]);
  for (size_t i = 0; i + 1 < s_.size(); ++i) s_[i] = b_[i + 1] * x + s_[i + 1] - a_[i + 1] * y;
  if (!s_.empty()) s_.back() = b_[s_.size()] * x - a_[s_.size()] * y;
  return y;
}

void Filter::set_state(const std::vector<double>& state) {
  if (state.empty()) {
    std::fill(s_.begin(), s_.end(), 0.0);
    return;
  }
  if (state.size() != s_.size()) throw std::invalid_argument("filter state size mismatch");
  s_ = state;
}

std::vector<double> filter(const TransferFunction& tf, const std::vector<double>& input,
                           const std::vector<double>& initial_state) {
  if (input.empty()) throw std::invalid_argument("filter: empty input");
  Filter f(tf);
  f.set_state(initial_state);
  std::vector<double> out(input.size());
  for (size_t k = 0; k < input.size(); ++k) out[k] = f.step(input[k]);
  return out;
}

bool is_stable(const TransferFunction& tf, double margin) {
  if (tf.den.size() == 1) return true;
  for (const cdouble& r : poly_roots(tf.den))
    if (std::abs(r) >= 1.0 - margin) return false;
  return true;
}

std::vector<double> closed_loop_char_poly(const ClosedLoopSystem& sys) {
  return poly_add(poly_mul(sys.plant.den, sys.controller.den),
                  poly_mul(sys.plant.num, sys.controller.num));
}

bool closed_loop_stable(const ClosedLoopSystem& sys, double margin) {
  const std::vector<double> chi = closed_loop_char_poly(sys);
  double scale = 0.0;
  for (double c : chi) scale = std::max(scale, std::abs(c));
  if (scale == 0.0 || std::abs(chi[0]) <= 1e-12 * scale) return false;  // ill-posed loop
  for (const cdouble& r : poly_roots(chi))
    if (std::abs(r) >= 1.0 - margin) return false;
  return true;
}

cdouble loop_response(const ClosedLoopSystem& sys, LoopTf which, double omega) {
  const cdouble g = evaluate(sys.plant, omega);
  const cdouble c = evaluate(sys.controller, omega);
  if (which == LoopTf::GC) return g * c;
  const cdouble d = 1.0 + g * c;
  if (std::abs(d) <= 1e-14 * (1.0 + std::abs(g * c)))
    throw NumericalError("loop_response: return difference vanishes on the unit circle");
  const cdouble s = 1.0 / d;
  switch (which) {
    case LoopTf::S:
      return s;
    case LoopTf::SG:
      return s * g;
    case LoopTf::SC:
      return s * c;
    case LoopTf::SH:
      return s * evaluate(sys.noise_model, omega);
    case LoopTf::SCH:
      return s * c * evaluate(sys.noise_model, omega);
    default:
      return g * c;
  }
}

TransferFunction loop_tf(const ClosedLoopSystem& sys, LoopTf which) {
  const auto& ng = sys.plant.num;
  const auto& dg = sys.plant.den;
  const auto& nc = sys.controller.num;
  const auto& dc = sys.controller.den;
  const auto& nh = sys.noise_model.num;
  const auto& dh = sys.noise_model.den;
  const std::vector<double> chi = closed_loop_char_poly(sys);
  switch (which) {
    case LoopTf::S:
      return {poly_mul(dg, dc), chi};
    case LoopTf::SG:
      return {poly_mul(ng, dc), chi};
    case LoopTf::SC:
      return {poly_mul(dg, nc), chi};
    case LoopTf::SH:
      return {poly_mul(poly_mul(dg, dc), nh), poly_mul(chi, dh)};
    case LoopTf::SCH:
      return {poly_mul(poly_mul(dg, nc), nh), poly_mul(chi, dh)};
    case LoopTf::GC:
      return {poly_mul(ng, nc), poly_mul(dg, dc)};
  }
  throw std::invalid_argument("loop_tf: unknown map");
}

}  // namespace fdident
