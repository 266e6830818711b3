#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fmstdp/encoding.hpp"

namespace fmstdp {

struct CartPoleState {
  double x = 0.0;
  double x_dot = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;

  std::array<double, 4> as_array() const { return {x, x_dot, theta, theta_dot}; }
  bool operator==(const CartPoleState&) const = default;
};

struct CartPoleConstants {
  double gravity = 9.8;
  double mass_cart = 1.0;
  double mass_pole = 0.1;
  double half_length = 0.5;
  double force_mag = 10.0;
  double tau = 0.02;  // seconds per physics step
  double x_limit = 2.4;
  double theta_limit = 12.0 * 2.0 * 3.14159265358979323846 / 360.0;
  std::size_t max_steps = 500;
};

// One explicit Euler step of the cart-pole equations under the given horizontal force.
CartPoleState physics_step(const CartPoleState& s, double force, const CartPoleConstants& c = {});
// action 1 pushes right (+force_mag), action 0 pushes left.
CartPoleState physics_step(const CartPoleState& s, int action, const CartPoleConstants& c = {});

bool cartpole_failed(const CartPoleState& s, const CartPoleConstants& c = {});

struct EnvStep {
  std::vector<double> state;
  double reward = 0.0;
  bool terminated = false;  // failure condition reached
  bool truncated = false;   // step cap reached
  bool done() const { return terminated || truncated; }
};

// Minimal episodic environment with a discrete action set and a fixed feature encoder.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::vector<double> reset(std::mt19937_64& rng) = 0;
  virtual EnvStep step(std::size_t action) = 0;
  virtual std::size_t feature_dim() const = 0;
  virtual std::size_t action_count() const = 0;
  virtual std::size_t max_steps() const = 0;
  virtual std::vector<double> features(std::span<const double> state) const = 0;
  virtual std::string name() const = 0;
};

class CartPoleEnv final : public Environment {
 public:
  explicit CartPoleEnv(CartPoleConstants c = {});

  std::vector<double> reset(std::mt19937_64& rng) override;
  EnvStep step(std::size_t action) override;
  std::size_t feature_dim() const override { return encoder_.output_dim(); }
  std::size_t action_count() const override { return 2; }
  std::size_t max_steps() const override { return constants_.max_steps; }
  std::vector<double> features(std::span<const double> state) const override;
  std::string name() const override { return "cartpole"; }

  const CartPoleState& state() const { return state_; }
  void set_state(const CartPoleState& s) { state_ = s; }
  std::size_t steps() const { return steps_; }
  bool finished() const { return finished_; }

 private:
  CartPoleConstants constants_;
  FourierEncoder encoder_;
  CartPoleState state_;
  std::size_t steps_ = 0;
  bool finished_ = true;
};

std::unique_ptr<Environment> make_environment(const std::string& name);

// Timing and reward conventions tying SNN milliseconds to environment steps.
struct EpisodeProtocol {
  std::size_t warmup_ms = 100;
  std::size_t snn_ms_per_env_step = 20;
  double reward_scale = 0.02;
  double tau_gamma = 1000.0;  // ms
  std::size_t terminal_zero_ms = 2;
  // Whether the step cap also counts as episode end for the zero TD target.
  bool zero_target_on_truncation = true;
};

// Reward and terminal flags for each SNN millisecond of one environment step.
struct MsSchedule {
  std::vector<double> reward_per_ms;
  std::vector<std::uint8_t> terminal;
};

// Spreads the scaled environment reward evenly over the step's milliseconds
// and flags the final terminal_zero_ms of an episode.
MsSchedule ms_schedule(const EnvStep& step, const EpisodeProtocol& p);

struct EnvStepOutcome {
  MsSchedule schedule;
  std::vector<double> features;
  EnvStep step;
};

// Advances the environment once and derives the per-ms schedule and next features.
EnvStepOutcome run_env_step(Environment& env, std::size_t action, const EpisodeProtocol& p);

}  // namespace fmstdp
