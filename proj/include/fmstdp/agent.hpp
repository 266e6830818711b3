#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fmstdp/actor.hpp"
#include "fmstdp/config.hpp"
#include "fmstdp/critic.hpp"
#include "fmstdp/encoding.hpp"
#include "fmstdp/lif.hpp"
#include "fmstdp/optim.hpp"
#include "fmstdp/traces.hpp"

namespace fmstdp {

// One network head: LIF population, its input weights, rate filter and
// plasticity traces.
struct Head {
  LifPopulation pop;
  SynapseMatrix syn;
  RateEstimator rates;
  StdpTraceSet traces;
  Matrix episode_sum;   // batched mode: sum of per-ms updates this episode
  AdamState adam;
  BatchAccumulator batch;
  std::vector<double> current;

  Head(const LifParams& lif, std::size_t inputs, std::size_t neurons, const HeadConfig& h, const OptimConfig& o,
       double eta);
  void reset_state();
};

// Per-ms quantities exposed for inspection and tests.
struct MsRecord {
  double value = 0.0;
  double delta = 0.0;
  std::size_t action = 0;
  double actor_rate = 0.0;   // mean excitatory actor rate, spikes/ms
  double critic_rate = 0.0;  // mean excitatory critic rate, spikes/ms
};

// Spiking actor-critic agent. All randomness comes from the generator
// passed to each call so a run can split streams as it likes.
class Agent {
 public:
  Agent(const RunConfig& cfg, std::size_t features, std::mt19937_64& init_rng);

  // Zeroes voltages, rates and traces; forces a fresh action draw.
  void begin_episode();
  // Input-driven dynamics only: no TD error, traces or weight changes.
  void warmup(std::span<const double> features, std::size_t ms, std::mt19937_64& spike_rng);
  // Policy at the current rates; resamples or holds per the configured cadence.
  std::size_t act(std::mt19937_64& policy_rng);
  // One learning millisecond.
  MsRecord step_ms(std::span<const double> features, double reward_per_ms, bool terminal,
                   std::mt19937_64& spike_rng);
  // Batched mode: commit this episode's accumulated update.
  void end_episode();

  std::vector<double> policy() const;
  double current_value() const;
  double mean_actor_rate() const;
  double mean_critic_rate() const;

  const Head& critic() const { return critic_; }
  const Head& actor() const { return actor_; }
  Head& critic() { return critic_; }
  Head& actor() { return actor_; }
  const RunConfig& config() const { return cfg_; }
  const PolicyState& policy_state() const { return policy_; }

 private:
  void simulate(std::span<const double> features, std::mt19937_64& spike_rng);
  void commit(Head& h);

  RunConfig cfg_;
  SpikeCoder coder_;
  std::vector<std::uint8_t> input_spikes_;
  Head critic_;
  Head actor_;
  std::vector<double> critic_sign_;
  PolicyState policy_;
  std::vector<double> feedback_neuron_;
  std::vector<double> gate_;
  double v_prev_ = 0.0;
};

}  // namespace fmstdp
