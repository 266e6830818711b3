#include "fmstdp/traces.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fmstdp/errors.hpp"

namespace fmstdp {

namespace {

void require_len(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ConfigError(std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                      std::to_string(got));
  }
}

}  // namespace

ExpTrace::ExpTrace(std::size_t n, double tau, double dt)
    : tau_(tau), factor_(std::exp(-dt / tau)), value_(n, 0.0) {
  if (!(tau > 0.0) || !(dt > 0.0)) throw ConfigError("ExpTrace: tau and dt must be positive");
}

void ExpTrace::update(std::span<const double> input) {
  require_len(input.size(), value_.size(), "ExpTrace::update");
  for (std::size_t k = 0; k < value_.size(); ++k) value_[k] = factor_ * value_[k] + input[k];
}

void ExpTrace::decay() {
  for (auto& v : value_) v *= factor_;
}

void ExpTrace::reset() { std::fill(value_.begin(), value_.end(), 0.0); }

RateEstimator::RateEstimator(std::size_t n, double tau_n, double dt)
    : tau_n_(tau_n), factor_(std::exp(-dt / tau_n)), increment_(1.0 / tau_n), rho_(n, 0.0) {
  if (!(tau_n > 0.0) || !(dt > 0.0)) throw ConfigError("RateEstimator: tau_n and dt must be positive");
}

void RateEstimator::update(std::span<const std::uint8_t> spikes) {
  require_len(spikes.size(), rho_.size(), "RateEstimator::update");
  for (std::size_t k = 0; k < rho_.size(); ++k) {
    rho_[k] = factor_ * rho_[k] + (spikes[k] ? increment_ : 0.0);
  }
}

void RateEstimator::reset() { std::fill(rho_.begin(), rho_.end(), 0.0); }

double RateEstimator::mean(std::size_t begin, std::size_t end) const {
  if (end <= begin) return 0.0;
  double s = 0.0;
  for (std::size_t k = begin; k < end; ++k) s += rho_[k];
  return s / static_cast<double>(end - begin);
}

StdpTraceSet::StdpTraceSet(std::size_t inputs, std::size_t neurons, StdpParams params)
    : params_(params),
      decay_p_(std::exp(-params.dt / params.tau_p)),
      decay_z_(std::exp(-params.dt / params.tau_z)),
      decay_q_(std::exp(-params.dt / params.tau_q)),
      p_pre_(inputs, 0.0),
      p_post_(neurons, 0.0),
      z_(inputs, neurons),
      q_(inputs, neurons) {
  if (!(params.tau_p > 0.0) || !(params.tau_z > 0.0) || !(params.tau_q > 0.0) || !(params.dt > 0.0)) {
    throw ConfigError("StdpTraceSet: time constants must be positive");
  }
  active_.reserve(std::max(inputs, neurons));
}

void StdpTraceSet::stdp_update(std::span<const std::uint8_t> pre, std::span<const std::uint8_t> post) {
  require_len(pre.size(), p_pre_.size(), "stdp_update(pre)");
  require_len(post.size(), p_post_.size(), "stdp_update(post)");
  for (std::size_t j = 0; j < p_post_.size(); ++j) p_post_[j] = decay_p_ * p_post_[j] + (post[j] ? 1.0 : 0.0);
  for (std::size_t i = 0; i < p_pre_.size(); ++i) p_pre_[i] = decay_p_ * p_pre_[i] + (pre[i] ? 1.0 : 0.0);

  for (auto& v : z_.data) v *= decay_z_;

  const std::size_t n = z_.cols;
  const double ap = params_.a_plus;
  const double am = params_.a_minus;
  if (ap != 0.0) {
    // LTP: a postsynaptic spike picks up the presynaptic trace.
    active_.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (post[j]) active_.push_back(j);
    if (!active_.empty()) {
      for (std::size_t i = 0; i < z_.rows; ++i) {
        const double inc = ap * p_pre_[i];
        if (inc == 0.0) continue;
        double* zr = z_.data.data() + i * n;
        for (std::size_t j : active_) zr[j] += inc;
      }
    }
  }
  if (am != 0.0) {
    // LTD: a presynaptic spike picks up the postsynaptic trace.
    for (std::size_t i = 0; i < z_.rows; ++i) {
      if (!pre[i]) continue;
      double* zr = z_.data.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) zr[j] -= am * p_post_[j];
    }
  }
}

void StdpTraceSet::feedback_gate_update(std::span<const double> feedback) {
  require_len(feedback.size(), q_.cols, "feedback_gate_update");
  const std::size_t n = q_.cols;
  const double d = decay_q_;
  for (std::size_t i = 0; i < q_.rows; ++i) {
    double* __restrict qr = q_.data.data() + i * n;
    const double* __restrict zr = z_.data.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) qr[j] = d * qr[j] + feedback[j] * zr[j];
  }
}

void StdpTraceSet::reset() {
  std::fill(p_pre_.begin(), p_pre_.end(), 0.0);
  std::fill(p_post_.begin(), p_post_.end(), 0.0);
  z_.fill(0.0);
  q_.fill(0.0);
}

}  // namespace fmstdp
