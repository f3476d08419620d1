#include "fdident/variance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fdident {

namespace {

constexpr std::size_t kMaxImpulseLength = std::size_t{1} << 22;

double tail_energy(const std::vector<double>& h, std::size_t from) {
  double s = 0.0;
  for (std::size_t i = from; i < h.size(); ++i) s += h[i] * h[i];
  return s;
}

}  // namespace

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::asymptotic_dir: return "asymptotic_dir";
    case ProfileKind::asymptotic_ind: return "asymptotic_ind";
    case ProfileKind::asymptotic_io2: return "asymptotic_io2";
    case ProfileKind::no_leakage_dir: return "no_leakage_dir";
    case ProfileKind::no_leakage_io2: return "no_leakage_io2";
    case ProfileKind::mc_sample: return "mc_sample";
  }
  return "unknown";
}

std::vector<double> impulse_response(const TransferFunction& tf, int pad_lags, double tail_tol) {
  if (pad_lags < 0) throw std::invalid_argument("impulse_response: pad_lags must be >= 0");
  if (!(tail_tol > 0.0)) throw std::invalid_argument("impulse_response: tail_tol must be > 0");

  std::size_t len = std::max<std::size_t>(64, tf.num.size() + tf.den.size());
  std::vector<double> h;
  for (;;) {
    Filter f(tf);
    h.assign(len, 0.0);
    for (std::size_t k = 0; k < len; ++k) h[k] = f.step(k == 0 ? 1.0 : 0.0);

    const double total = tail_energy(h, 0);
    if (!std::isfinite(total)) {
      throw NumericalError("impulse_response: response diverged (non-finite energy)");
    }
    if (total == 0.0) {
      h.assign(static_cast<std::size_t>(pad_lags) + 1, 0.0);
      return h;
    }
    if (tail_energy(h, len / 2) <= tail_tol * total) break;
    if (len >= kMaxImpulseLength) {
      throw NumericalError("impulse_response: no decay within maximum length");
    }
    len *= 2;
  }

  const double total = tail_energy(h, 0);
  std::size_t cut = h.size();
  double acc = 0.0;
  while (cut > 1) {
    const double next = acc + h[cut - 1] * h[cut - 1];
    if (next > tail_tol * total) break;
    acc = next;
    --cut;
  }

  std::size_t keep = cut + static_cast<std::size_t>(pad_lags);
  if (keep > h.size()) {
    Filter f(tf);
    h.assign(keep, 0.0);
    for (std::size_t k = 0; k < keep; ++k) h[k] = f.step(k == 0 ? 1.0 : 0.0);
  } else {
    h.resize(keep);
  }
  return h;
}

std::vector<double> filtered_autocovariance(const TransferFunction& tf, int n, double tail_tol) {
  if (n < 1) throw std::invalid_argument("filtered_autocovariance: n must be >= 1");
  const std::vector<double> h = impulse_response(tf, n, tail_tol);
  std::vector<double> rho(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t m = 0; m + static_cast<std::size_t>(k) < h.size(); ++m) {
      s += h[m] * h[m + static_cast<std::size_t>(k)];
    }
    rho[static_cast<std::size_t>(k)] = s;
  }
  return rho;
}

std::vector<double> filtered_crosscovariance(const TransferFunction& tf_a,
                                             const TransferFunction& tf_b, int n,
                                             double tail_tol) {
  if (n < 1) throw std::invalid_argument("filtered_crosscovariance: n must be >= 1");
  const std::vector<double> a = impulse_response(tf_a, n, tail_tol);
  const std::vector<double> b = impulse_response(tf_b, n, tail_tol);
  std::vector<double> rho(static_cast<std::size_t>(2 * n - 1), 0.0);
  for (int k = -(n - 1); k <= n - 1; ++k) {
    double s = 0.0;
    if (k >= 0) {
      for (std::size_t j = 0; j + static_cast<std::size_t>(k) < a.size() && j < b.size(); ++j) {
        s += a[j + static_cast<std::size_t>(k)] * b[j];
      }
    } else {
      for (std::size_t j = 0; j < a.size() && j + static_cast<std::size_t>(-k) < b.size(); ++j) {
        s += a[j] * b[j + static_cast<std::size_t>(-k)];
      }
    }
    rho[static_cast<std::size_t>(k + n - 1)] = s;
  }
  return rho;
}

std::vector<double> symmetric_lags(const std::vector<double>& rho_nonneg) {
  if (rho_nonneg.empty()) throw std::invalid_argument("symmetric_lags: empty input");
  const std::size_t n = rho_nonneg.size();
  std::vector<double> pm(2 * n - 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    pm[n - 1 + k] = rho_nonneg[k];
    pm[n - 1 - k] = rho_nonneg[k];
  }
  return pm;
}

std::vector<cdouble> fejer_covariance(const std::vector<double>& rho_pm, int n) {
  if (n < 1) throw std::invalid_argument("fejer_covariance: n must be >= 1");
  if (rho_pm.size() != static_cast<std::size_t>(2 * n - 1)) {
    throw std::invalid_argument("fejer_covariance: rho_pm must have 2n-1 lags");
  }
  std::vector<cdouble> w(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    w[static_cast<std::size_t>(m)] = cdouble(std::cos(ang), std::sin(ang));
  }
  std::vector<cdouble> out(static_cast<std::size_t>(n), cdouble(0.0, 0.0));
  for (int l = 0; l < n; ++l) {
    cdouble s(0.0, 0.0);
    for (int k = -(n - 1); k <= n - 1; ++k) {
      const double win = static_cast<double>(n - std::abs(k)) / static_cast<double>(n);
      const long long idx = ((static_cast<long long>(l) * k) % n + n) % n;
      s += win * rho_pm[static_cast<std::size_t>(k + n - 1)] * w[static_cast<std::size_t>(idx)];
    }
    out[static_cast<std::size_t>(l)] = s;
  }
  return out;
}

NoiseCovariances noise_covariances(const ClosedLoopSystem& sys, int n, double tail_tol) {
  if (n < 1) throw std::invalid_argument("noise_covariances: n must be >= 1");
  if (!closed_loop_stable(sys)) throw std::invalid_argument("noise_covariances: unstable loop");
  if (!is_stable(sys.noise_model)) {
    throw std::invalid_argument("noise_covariances: unstable noise model");
  }

  const TransferFunction sh = loop_tf(sys, LoopTf::SH);
  const TransferFunction sch = loop_tf(sys, LoopTf::SCH);

  const std::vector<cdouble> cy = fejer_covariance(symmetric_lags(filtered_autocovariance(sh, n, tail_tol)), n);
  const std::vector<cdouble> cu = fejer_covariance(symmetric_lags(filtered_autocovariance(sch, n, tail_tol)), n);
  const std::vector<cdouble> cyu = fejer_covariance(filtered_crosscovariance(sh, sch, n, tail_tol), n);

  NoiseCovariances cov;
  cov.n = n;
  cov.sigma_y.resize(static_cast<std::size_t>(n));
  cov.sigma_u.resize(static_cast<std::size_t>(n));
  cov.sigma_yu.resize(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    cov.sigma_y[i] = cy[i].real();
    cov.sigma_u[i] = cu[i].real();
    cov.sigma_yu[i] = -cyu[i];
  }
  return cov;
}

VarianceProfile asymptotic_variance(const ClosedLoopSystem& sys, const Spectrum& R,
                                    const NoiseCovariances& cov, ProfileKind which) {
  if (which != ProfileKind::asymptotic_dir && which != ProfileKind::asymptotic_ind &&
      which != ProfileKind::asymptotic_io2) {
    throw std::invalid_argument("asymptotic_variance: kind must be an asymptotic profile");
  }
  const int n = cov.n;
  if (R.n != n || static_cast<int>(R.values.size()) != n) {
    throw std::invalid_argument("asymptotic_variance: R grid mismatch");
  }

  const double floor = 1e-12 * std::sqrt(static_cast<double>(n));
  const double nan = std::numeric_limits<double>::quiet_NaN();

  VarianceProfile p;
  p.kind = which;
  p.scale = "per_sigma2";
  p.n = n;
  p.values.assign(static_cast<std::size_t>(n), nan);
  p.valid.assign(static_cast<std::size_t>(n), 0);

  for (int l = 0; l < n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    const double omega = R.omega(l);
    const cdouble g = evaluate(sys.plant, omega);
    const cdouble s = loop_response(sys, LoopTf::S, omega);
    const cdouble sr = s * R.values[i];
    const double denom = std::norm(sr);
    if (!(std::abs(sr) > floor)) continue;

    double v = 0.0;
    switch (which) {
      case ProfileKind::asymptotic_dir:
        v = (cov.sigma_y[i] + std::norm(g) * cov.sigma_u[i] -
             2.0 * (std::conj(g) * cov.sigma_yu[i]).real()) /
            denom;
        break;
      case ProfileKind::asymptotic_ind:
        v = cov.sigma_y[i] / (std::norm(s) * denom);
        break;
      case ProfileKind::asymptotic_io2:
        v = (cov.sigma_y[i] + std::norm(g) * cov.sigma_u[i]) / denom;
        break;
      default:
        break;
    }
    p.values[i] = v;
    p.valid[i] = 1;
  }
  return p;
}

VarianceProfile no_leakage_variance(const ClosedLoopSystem& sys, const Spectrum& R,
                                    ProfileKind which) {
  if (which != ProfileKind::no_leakage_dir && which != ProfileKind::no_leakage_io2) {
    throw std::invalid_argument("no_leakage_variance: kind must be a no-leakage profile");
  }
  const int n = R.n;
  if (n < 1 || static_cast<int>(R.values.size()) != n) {
    throw std::invalid_argument("no_leakage_variance: bad grid");
  }

  const double floor = 1e-12 * std::sqrt(static_cast<double>(n));
  const double nan = std::numeric_limits<double>::quiet_NaN();

  VarianceProfile p;
  p.kind = which;
  p.scale = "per_sigma2";
  p.n = n;
  p.values.assign(static_cast<std::size_t>(n), nan);
  p.valid.assign(static_cast<std::size_t>(n), 0);

  for (int l = 0; l < n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    const double omega = R.omega(l);
    const cdouble h = evaluate(sys.noise_model, omega);
    if (which == ProfileKind::no_leakage_dir) {
      const cdouble s = loop_response(sys, LoopTf::S, omega);
      const cdouble sr = s * R.values[i];
      if (!(std::abs(sr) > floor)) continue;
      p.values[i] = std::norm(h) / std::norm(sr);
    } else {
      const cdouble gc = loop_response(sys, LoopTf::GC, omega);
      const cdouble r = R.values[i];
      if (!(std::abs(r) > floor)) continue;
      p.values[i] = (1.0 + std::norm(gc)) * std::norm(h) / std::norm(r);
    }
    p.valid[i] = 1;
  }
  return p;
}

OrderingPredicates ordering_predicate(const ClosedLoopSystem& sys, const NoiseCovariances& cov) {
  const int n = cov.n;
  if (n < 1) throw std::invalid_argument("ordering_predicate: empty covariances");

  OrderingPredicates pred;
  pred.n = n;
  pred.exact.assign(static_cast<std::size_t>(n), 0);
  pred.approximate.assign(static_cast<std::size_t>(n), 0);

  for (int l = 0; l < n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    const double omega = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(n);
    const cdouble g = evaluate(sys.plant, omega);
    const cdouble gc = loop_response(sys, LoopTf::GC, omega);
    pred.exact[i] = (std::conj(g) * cov.sigma_yu[i]).real() < 0.0 ? 1 : 0;
    pred.approximate[i] = gc.real() < 0.0 ? 1 : 0;
  }
  return pred;
}

}  // namespace fdident
