#pragma once

#include <span>
#include <vector>

#include "fmstdp/matrix.hpp"

namespace fmstdp {

struct CriticConfig {
  std::size_t n_e = 40;
  std::size_t n_i = 0;
  double alpha = 2.0;    // value scale
  double beta = -0.2;    // value offset
  double eta = 2.5e-3;   // learning rate
  double tau_gamma = 1000.0;  // discount time constant, ms

  std::size_t neurons() const { return n_e + n_i; }
  void validate() const;
};

struct TdError {
  double delta = 0.0;
};

// alpha * (mean(rates_e) - mean(rates_i)) + beta. An empty population has mean 0.
double value(std::span<const double> rates_e, std::span<const double> rates_i, const CriticConfig& cfg);

// Discrete TD error over one step with the reward discounted to mid-step:
//   delta = exp(-dt/tau) v_next + exp(-dt/(2 tau)) r dt - v_now
// A terminal step uses 0 in place of v_next.
TdError td_error(double v_now, double v_next, double reward_per_ms, double dt, double tau_gamma,
                 bool terminal);

// Writes sign * eta * delta * z into out (resized to z's shape).
void critic_delta_w(TdError delta, const Matrix& z, double sign, double eta, Matrix& out);

// Column-signed variant: column j uses sign[j] (+1 excitatory, -1 inhibitory).
void critic_delta_w(TdError delta, const Matrix& z, std::span<const double> sign, double eta, Matrix& out);

// target += the column-signed update, without a scratch matrix.
void critic_add_delta_w(TdError delta, const Matrix& z, std::span<const double> sign, double eta, Matrix& target);

// +1 for the first n_e columns, -1 for the remaining n_i.
std::vector<double> population_signs(std::size_t n_e, std::size_t n_i);

}  // namespace fmstdp
