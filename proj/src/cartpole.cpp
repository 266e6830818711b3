#include "fmstdp/cartpole.hpp"

#include <cmath>

#include "fmstdp/errors.hpp"

namespace fmstdp {

CartPoleState physics_step(const CartPoleState& s, double force, const CartPoleConstants& c) {
  const double total_mass = c.mass_cart + c.mass_pole;
  const double polemass_length = c.mass_pole * c.half_length;
  const double cos_t = std::cos(s.theta);
  const double sin_t = std::sin(s.theta);
  const double temp = (force + polemass_length * s.theta_dot * s.theta_dot * sin_t) / total_mass;
  const double theta_acc =
      (c.gravity * sin_t - cos_t * temp) / (c.half_length * (4.0 / 3.0 - c.mass_pole * cos_t * cos_t / total_mass));
  const double x_acc = temp - polemass_length * theta_acc * cos_t / total_mass;

  CartPoleState n;
  n.x = s.x + c.tau * s.x_dot;
  n.x_dot = s.x_dot + c.tau * x_acc;
  n.theta = s.theta + c.tau * s.theta_dot;
  n.theta_dot = s.theta_dot + c.tau * theta_acc;
  return n;
}

CartPoleState physics_step(const CartPoleState& s, int action, const CartPoleConstants& c) {
  return physics_step(s, action == 1 ? c.force_mag : -c.force_mag, c);
}

bool cartpole_failed(const CartPoleState& s, const CartPoleConstants& c) {
  return s.x < -c.x_limit || s.x > c.x_limit || s.theta < -c.theta_limit || s.theta > c.theta_limit;
}

CartPoleEnv::CartPoleEnv(CartPoleConstants c) : constants_(c), encoder_(2, cartpole_bounds(), true) {}

std::vector<double> CartPoleEnv::reset(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  state_.x = u(rng);
  state_.x_dot = u(rng);
  state_.theta = u(rng);
  state_.theta_dot = u(rng);
  steps_ = 0;
  finished_ = false;
  const auto a = state_.as_array();
  return {a.begin(), a.end()};
}

EnvStep CartPoleEnv::step(std::size_t action) {
  if (finished_) throw ProtocolFault("cartpole: step called on a finished episode");
  if (action > 1) throw ProtocolFault("cartpole: action must be 0 or 1");
  state_ = physics_step(state_, static_cast<int>(action), constants_);
  ++steps_;
  EnvStep r;
  const auto a = state_.as_array();
  r.state.assign(a.begin(), a.end());
  r.reward = 1.0;
  r.terminated = cartpole_failed(state_, constants_);
  r.truncated = !r.terminated && steps_ >= constants_.max_steps;
  finished_ = r.done();
  return r;
}

std::vector<double> CartPoleEnv::features(std::span<const double> state) const {
  return encode_cartpole(encoder_, state);
}

std::unique_ptr<Environment> make_environment(const std::string& name) {
  if (name == "cartpole") return std::make_unique<CartPoleEnv>();
  throw ConfigError("unknown environment '" + name + "'");
}

MsSchedule ms_schedule(const EnvStep& step, const EpisodeProtocol& p) {
  MsSchedule s;
  const std::size_t n = p.snn_ms_per_env_step;
  s.reward_per_ms.assign(n, step.reward * p.reward_scale / static_cast<double>(n));
  s.terminal.assign(n, 0);
  const bool ends = step.terminated || (step.truncated && p.zero_target_on_truncation);
  if (ends) {
    const std::size_t k = std::min(p.terminal_zero_ms, n);
    for (std::size_t t = n - k; t < n; ++t) s.terminal[t] = 1;
  }
  return s;
}

EnvStepOutcome run_env_step(Environment& env, std::size_t action, const EpisodeProtocol& p) {
  EnvStepOutcome out;
  out.step = env.step(action);
  out.schedule = ms_schedule(out.step, p);
  out.features = env.features(out.step.state);
  return out;
}

}  // namespace fmstdp
