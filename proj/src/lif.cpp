#include "fmstdp/lif.hpp"

#include <cmath>
#include <string>

#include "fmstdp/errors.hpp"

namespace fmstdp {

void LifParams::validate() const {
  if (!(v_thresh > e_rest)) throw ConfigError("LifParams: v_thresh must exceed e_rest");
  if (!(tau_m > 0.0) || !(dt > 0.0)) throw ConfigError("LifParams: tau_m and dt must be positive");
  if (dt > tau_m) throw ConfigError("LifParams: dt must not exceed tau_m");
}

LifPopulation::LifPopulation(LifParams params, std::size_t n)
    : params_(params),
      decay_(std::exp(-params.dt / params.tau_m)),
      gain_(params.resistance / params.tau_m),
      voltage_(n, params.e_rest),
      fired_(n, 0) {
  params_.validate();
}

std::span<const std::uint8_t> LifPopulation::step(std::span<const double> weighted_input) {
  if (weighted_input.size() != voltage_.size()) {
    throw ConfigError("lif_step: input has " + std::to_string(weighted_input.size()) +
                      " currents for " + std::to_string(voltage_.size()) + " neurons");
  }
  const double rest = params_.e_rest;
  const double thresh = params_.v_thresh;
  for (std::size_t j = 0; j < voltage_.size(); ++j) {
    const double in = weighted_input[j];
    if (!std::isfinite(in)) {
      throw SimulationFault("lif_step: non-finite input current at neuron " + std::to_string(j));
    }
    const double v = rest + (voltage_[j] - rest) * decay_ + gain_ * in;
    if (v > thresh) {
      fired_[j] = 1;
      voltage_[j] = rest;
    } else {
      fired_[j] = 0;
      voltage_[j] = v;
    }
  }
  return fired_;
}

void LifPopulation::reset() {
  std::fill(voltage_.begin(), voltage_.end(), params_.e_rest);
  std::fill(fired_.begin(), fired_.end(), std::uint8_t{0});
}

void SynapseMatrix::init_uniform(double w0, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, w0);
  for (auto& x : w.data) x = u(rng);
}

void weighted_input(const SynapseMatrix& syn, std::span<const std::uint8_t> input_spikes,
                    std::span<double> current) {
  if (input_spikes.size() != syn.inputs() || current.size() != syn.neurons()) {
    throw ConfigError("forward: spike vector of length " + std::to_string(input_spikes.size()) +
                      " does not match synapse matrix " + std::to_string(syn.inputs()) + "x" +
                      std::to_string(syn.neurons()));
  }
  std::fill(current.begin(), current.end(), 0.0);
  const std::size_t n = syn.neurons();
  for (std::size_t i = 0; i < input_spikes.size(); ++i) {
    if (!input_spikes[i]) continue;
    const double* wr = syn.w.data.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) current[j] += wr[j];
  }
}

std::span<const std::uint8_t> forward(LifPopulation& pop, const SynapseMatrix& syn,
                                      std::span<const std::uint8_t> input_spikes,
                                      std::vector<double>& scratch) {
  if (syn.neurons() != pop.size()) {
    throw ConfigError("forward: synapse matrix has " + std::to_string(syn.neurons()) +
                      " columns for a population of " + std::to_string(pop.size()));
  }
  scratch.resize(pop.size());
  weighted_input(syn, input_spikes, scratch);
  return pop.step(scratch);
}

void check_finite(const SynapseMatrix& syn, const char* what) {
  for (std::size_t k = 0; k < syn.w.data.size(); ++k) {
    if (!std::isfinite(syn.w.data[k])) {
      throw SimulationFault(std::string(what) + ": non-finite weight at (" +
                            std::to_string(k / syn.w.cols) + ", " + std::to_string(k % syn.w.cols) +
                            ")");
    }
  }
}

}  // namespace fmstdp
