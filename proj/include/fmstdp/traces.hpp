#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fmstdp/matrix.hpp"

namespace fmstdp {

// First-order low-pass: value <- exp(-dt/tau) * value + input.
// Equivalent to convolving the input sequence with the kernel exp(-t/tau).
class ExpTrace {
 public:
  ExpTrace(std::size_t n, double tau, double dt = 1.0);

  void update(std::span<const double> input);
  void decay();
  void reset();

  std::span<const double> value() const { return value_; }
  double tau() const { return tau_; }
  double factor() const { return factor_; }

 private:
  double tau_;
  double factor_;
  std::vector<double> value_;
};

// Exponentially filtered firing rate in spikes/ms:
//   rho <- exp(-dt/tau_n) * rho + spikes / tau_n
class RateEstimator {
 public:
  RateEstimator(std::size_t n, double tau_n, double dt = 1.0);

  void update(std::span<const std::uint8_t> spikes);
  void reset();

  std::span<const double> rho() const { return rho_; }
  double tau_n() const { return tau_n_; }
  // Mean of rho over [begin, end).
  double mean(std::size_t begin, std::size_t end) const;
  double mean() const { return mean(0, rho_.size()); }

 private:
  double tau_n_;
  double factor_;
  double increment_;
  std::vector<double> rho_;
};

struct StdpParams {
  double a_plus = 1.0;
  double a_minus = 0.0;
  double tau_p = 20.0;
  double tau_z = 20.0;
  double tau_q = 40.0;
  double dt = 1.0;
};

// Per-synapse plasticity state for one SynapseMatrix: presynaptic and
// postsynaptic spike traces, the STDP eligibility trace z and the
// feedback-gated trace q. z and q share the weight matrix shape.
class StdpTraceSet {
 public:
  StdpTraceSet(std::size_t inputs, std::size_t neurons, StdpParams params);

  // Order per step: p_post, p_pre, then z using the updated traces.
  void stdp_update(std::span<const std::uint8_t> pre, std::span<const std::uint8_t> post);

  // q <- exp(-dt/tau_q) * q + feedback_j * z_ij. feedback has one entry per
  // postsynaptic neuron.
  void feedback_gate_update(std::span<const double> feedback);

  void reset();

  const StdpParams& params() const { return params_; }
  std::span<const double> p_pre() const { return p_pre_; }
  std::span<const double> p_post() const { return p_post_; }
  const Matrix& z() const { return z_; }
  const Matrix& q() const { return q_; }
  std::size_t inputs() const { return z_.rows; }
  std::size_t neurons() const { return z_.cols; }

 private:
  StdpParams params_;
  double decay_p_;
  double decay_z_;
  double decay_q_;
  std::vector<double> p_pre_;
  std::vector<double> p_post_;
  Matrix z_;
  Matrix q_;
  std::vector<std::size_t> active_;
};

}  // namespace fmstdp
