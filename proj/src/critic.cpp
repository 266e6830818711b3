#include "fmstdp/critic.hpp"

#include <cmath>
#include <numeric>

#include "fmstdp/errors.hpp"

namespace fmstdp {

namespace {

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

void CriticConfig::validate() const {
  if (n_e < 1) throw ConfigError("critic: n_e must be at least 1");
  if (!(tau_gamma > 0.0)) throw ConfigError("critic: tau_gamma must be positive");
}

double value(std::span<const double> rates_e, std::span<const double> rates_i, const CriticConfig& cfg) {
  return cfg.alpha * (mean_of(rates_e) - mean_of(rates_i)) + cfg.beta;
}

TdError td_error(double v_now, double v_next, double reward_per_ms, double dt, double tau_gamma,
                 bool terminal) {
  const double target = terminal ? 0.0 : v_next;
  return {std::exp(-dt / tau_gamma) * target + std::exp(-dt / (2.0 * tau_gamma)) * reward_per_ms * dt -
          v_now};
}

void critic_delta_w(TdError delta, const Matrix& z, double sign, double eta, Matrix& out) {
  if (!out.same_shape(z)) out = Matrix(z.rows, z.cols);
  const double c = sign * eta * delta.delta;
  for (std::size_t k = 0; k < z.data.size(); ++k) out.data[k] = c * z.data[k];
}

void critic_delta_w(TdError delta, const Matrix& z, std::span<const double> sign, double eta, Matrix& out) {
  if (sign.size() != z.cols) throw ConfigError("critic_delta_w: sign vector does not match column count");
  if (!out.same_shape(z)) out = Matrix(z.rows, z.cols);
  const double c = eta * delta.delta;
  for (std::size_t i = 0; i < z.rows; ++i) {
    const double* zr = z.data.data() + i * z.cols;
    double* o = out.data.data() + i * z.cols;
    for (std::size_t j = 0; j < z.cols; ++j) o[j] = c * sign[j] * zr[j];
  }
}

void critic_add_delta_w(TdError delta, const Matrix& z, std::span<const double> sign, double eta, Matrix& target) {
  if (sign.size() != z.cols || !target.same_shape(z)) throw ConfigError("critic_add_delta_w: shape mismatch");
  const double c = eta * delta.delta;
  const double* __restrict sg = sign.data();
  for (std::size_t i = 0; i < z.rows; ++i) {
    const double* __restrict zr = z.data.data() + i * z.cols;
    double* __restrict o = target.data.data() + i * z.cols;
    for (std::size_t j = 0; j < z.cols; ++j) o[j] += c * sg[j] * zr[j];
  }
}

std::vector<double> population_signs(std::size_t n_e, std::size_t n_i) {
  std::vector<double> s(n_e + n_i, 1.0);
  std::fill(s.begin() + static_cast<std::ptrdiff_t>(n_e), s.end(), -1.0);
  return s;
}

}  // namespace fmstdp
