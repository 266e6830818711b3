#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fmstdp/matrix.hpp"

namespace fmstdp {

// Actor neurons are laid out action-major: action k owns columns
// [k*(n_e+n_i), k*(n_e+n_i)+n_e) excitatory followed by n_i inhibitory.
struct ActorConfig {
  std::size_t k = 2;          // action count
  std::size_t n_e = 20;       // excitatory neurons per action
  std::size_t n_i = 0;        // inhibitory neurons per action
  double alpha = 25.0;        // softmax temperature
  double eta = 1e-2;
  double tau_q = 40.0;        // ms
  std::size_t resample_every = 1;  // env steps between draws
  double c_e = 0.0;           // entropy regularization
  double c_w = 0.0;           // weight decay
  double c_t = 0.0;           // target firing rate strength
  double rho_target = 0.0;    // spikes/ms

  std::size_t per_action() const { return n_e + n_i; }
  std::size_t neurons() const { return k * per_action(); }
  std::size_t action_of(std::size_t column) const { return column / per_action(); }
  bool excitatory(std::size_t column) const { return column % per_action() < n_e; }
  void validate() const;
};

struct PerActionRates {
  std::vector<double> excitatory;  // length k
  std::vector<double> inhibitory;  // length k, zeros when n_i == 0
};

// Averages neuron rates into per-action population means.
PerActionRates per_action_rates(std::span<const double> rho, const ActorConfig& cfg);

// Mean excitatory rate across all actions.
double mean_excitatory_rate(std::span<const double> rho, const ActorConfig& cfg);

// softmax(alpha * (rho_e - rho_i)), max-subtracted.
std::vector<double> action_probs(std::span<const double> rates_e, std::span<const double> rates_i, double alpha);

struct PolicyState {
  std::vector<double> s;
  std::size_t held_action = 0;
  std::size_t steps_since_resample = 0;
  bool has_action = false;

  // Forces a fresh draw on the next sample_or_hold call.
  void reset();
};

// Uniform [0,1) from 53 random bits; identical across standard libraries.
double uniform01(std::mt19937_64& rng);

// Called once per environment step: redraws from s when the hold period has
// elapsed, otherwise returns the held action.
std::size_t sample_or_hold(PolicyState& state, std::span<const double> s, std::size_t resample_every,
                           std::mt19937_64& rng);

// Component k is I{k == held_action} - s_k.
std::vector<double> feedback_signal(std::size_t held_action, std::span<const double> s);

// Entropy gradient w.r.t. the k-th softmax logit:
//   g_k = -sum_m s_m (log s_m + 1)(I{m=k} - s_k)
std::vector<double> entropy_gate(std::span<const double> s);

// Entropy of a distribution in nats.
double entropy(std::span<const double> s);

struct ActorUpdateInputs {
  double delta = 0.0;
  double rates_mean = 0.0;              // mean excitatory actor rate
  std::span<const double> gate;         // entropy gate g, length k
  bool use_feedback = true;             // false: q replaced by z (ablation)
};

// Combined actor rule, column j with action k and sign s_j:
//   eta * ( s_j delta q + s_j c_e g_k z - c_w w / 2 - c_t (rates_mean - rho_target) z )
void actor_delta_w(const ActorUpdateInputs& in, const Matrix& q, const Matrix& z, const Matrix& w,
                   const ActorConfig& cfg, double eta, Matrix& out);

// target += the same update. target may be w itself.
void actor_add_delta_w(const ActorUpdateInputs& in, const Matrix& q, const Matrix& z, const Matrix& w,
                       const ActorConfig& cfg, double eta, Matrix& target);

}  // namespace fmstdp
