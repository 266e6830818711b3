#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fmstdp/matrix.hpp"

namespace fmstdp {

// Leaky integrate-and-fire parameters. Voltages in mV, times in ms.
struct LifParams {
  double e_rest = -65.0;
  double v_thresh = -52.0;
  double tau_m = 100.0;
  double resistance = 1.0;
  double dt = 1.0;

  void validate() const;
};

// A group of LIF neurons stepped in lockstep. No refractory period.
class LifPopulation {
 public:
  LifPopulation(LifParams params, std::size_t n);

  const LifParams& params() const { return params_; }
  std::size_t size() const { return voltage_.size(); }
  std::span<const double> voltage() const { return voltage_; }
  std::span<double> voltage() { return voltage_; }
  std::span<const std::uint8_t> fired() const { return fired_; }

  // Advances one step given the summed synaptic drive sum_i w_ij * x_i per
  // neuron. Returns the spike vector (also available via fired()).
  std::span<const std::uint8_t> step(std::span<const double> weighted_input);

  // Voltages back to rest, spike flags cleared.
  void reset();

 private:
  LifParams params_;
  double decay_;
  double gain_;
  std::vector<double> voltage_;
  std::vector<std::uint8_t> fired_;
};

// Plastic feed-forward weights, inputs x neurons.
struct SynapseMatrix {
  Matrix w;

  SynapseMatrix() = default;
  SynapseMatrix(std::size_t inputs, std::size_t neurons) : w(inputs, neurons) {}

  std::size_t inputs() const { return w.rows; }
  std::size_t neurons() const { return w.cols; }

  // i.i.d. uniform on [0, w0].
  void init_uniform(double w0, std::mt19937_64& rng);
};

// current_j = sum_i w_ij * spikes_i. Only active rows are touched.
void weighted_input(const SynapseMatrix& syn, std::span<const std::uint8_t> input_spikes,
                    std::span<double> current);

// lif_step(pop, w^T * input_spikes).
std::span<const std::uint8_t> forward(LifPopulation& pop, const SynapseMatrix& syn,
                                      std::span<const std::uint8_t> input_spikes,
                                      std::vector<double>& scratch);

// Throws SimulationFault naming the offending entry if any weight is not finite.
void check_finite(const SynapseMatrix& syn, const char* what);

}  // namespace fmstdp
