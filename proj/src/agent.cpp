#include "fmstdp/agent.hpp"

#include <cmath>

#include "fmstdp/errors.hpp"

namespace fmstdp {

namespace {

StdpParams with_tau_q(StdpParams p, double tau_q) {
  p.tau_q = tau_q;
  return p;
}

}  // namespace

Head::Head(const LifParams& lif, std::size_t inputs, std::size_t neurons, const HeadConfig& h, const OptimConfig& o,
           double eta)
    : pop(lif, neurons),
      syn(inputs, neurons),
      rates(neurons, h.tau_n, lif.dt),
      traces(inputs, neurons, h.stdp),
      current(neurons, 0.0) {
  if (o.method == OptimMethod::adam) {
    episode_sum = Matrix(inputs, neurons);
    adam = AdamState(inputs, neurons, eta, o.beta1, o.beta2, o.epsilon);
    batch = BatchAccumulator(inputs, neurons, o.batch_size);
  }
}

void Head::reset_state() {
  pop.reset();
  rates.reset();
  traces.reset();
}

Agent::Agent(const RunConfig& cfg, std::size_t features, std::mt19937_64& init_rng)
    : cfg_(cfg),
      coder_(cfg.neurons_per_feature),
      input_spikes_(coder_.output_dim(features), 0),
      critic_(cfg.lif, coder_.output_dim(features), cfg.critic.neurons(), cfg.critic_head, cfg.optim, cfg.critic.eta),
      actor_(cfg.lif, coder_.output_dim(features), cfg.actor.neurons(),
             HeadConfig{cfg.actor_head.tau_n, with_tau_q(cfg.actor_head.stdp, cfg.actor.tau_q), cfg.actor_head.w0},
             cfg.optim, cfg.actor.eta),
      critic_sign_(population_signs(cfg.critic.n_e, cfg.critic.n_i)),
      feedback_neuron_(cfg.actor.neurons(), 0.0) {
  cfg_.validate();
  cfg_.critic.tau_gamma = cfg_.protocol.tau_gamma;
  critic_.syn.init_uniform(cfg.critic_head.w0, init_rng);
  actor_.syn.init_uniform(cfg.actor_head.w0, init_rng);
  policy_.s.assign(cfg.actor.k, 1.0 / static_cast<double>(cfg.actor.k));
}

void Agent::begin_episode() {
  critic_.reset_state();
  actor_.reset_state();
  policy_.reset();
  policy_.s = policy();
  v_prev_ = current_value();
  if (cfg_.optim.method == OptimMethod::adam) {
    critic_.episode_sum.fill(0.0);
    actor_.episode_sum.fill(0.0);
  }
}

void Agent::simulate(std::span<const double> features, std::mt19937_64& spike_rng) {
  coder_.spikes(features, spike_rng, input_spikes_);
  forward(critic_.pop, critic_.syn, input_spikes_, critic_.current);
  forward(actor_.pop, actor_.syn, input_spikes_, actor_.current);
  critic_.rates.update(critic_.pop.fired());
  actor_.rates.update(actor_.pop.fired());
}

void Agent::warmup(std::span<const double> features, std::size_t ms, std::mt19937_64& spike_rng) {
  for (std::size_t t = 0; t < ms; ++t) simulate(features, spike_rng);
  v_prev_ = current_value();
}

std::size_t Agent::act(std::mt19937_64& policy_rng) {
  const auto s = policy();
  const std::size_t a = sample_or_hold(policy_, s, cfg_.actor.resample_every, policy_rng);
  // Feedback stays fixed until the next env step.
  policy_.s = s;
  const auto fb = feedback_signal(policy_.held_action, s);
  for (std::size_t j = 0; j < feedback_neuron_.size(); ++j) feedback_neuron_[j] = fb[cfg_.actor.action_of(j)];
  if (cfg_.actor.c_e != 0.0) gate_ = entropy_gate(s);
  return a;
}

std::vector<double> Agent::policy() const {
  const auto r = per_action_rates(actor_.rates.rho(), cfg_.actor);
  return action_probs(r.excitatory, r.inhibitory, cfg_.actor.alpha);
}

double Agent::current_value() const {
  const auto rho = critic_.rates.rho();
  return value(rho.first(cfg_.critic.n_e), rho.subspan(cfg_.critic.n_e), cfg_.critic);
}

double Agent::mean_actor_rate() const { return mean_excitatory_rate(actor_.rates.rho(), cfg_.actor); }

double Agent::mean_critic_rate() const { return critic_.rates.mean(0, cfg_.critic.n_e); }

MsRecord Agent::step_ms(std::span<const double> features, double reward_per_ms, bool terminal,
                        std::mt19937_64& spike_rng) {
  simulate(features, spike_rng);

  MsRecord rec;
  rec.value = current_value();
  const TdError delta =
      td_error(v_prev_, rec.value, reward_per_ms, cfg_.lif.dt, cfg_.protocol.tau_gamma, terminal);
  if (!std::isfinite(delta.delta)) throw SimulationFault("non-finite TD error");
  rec.delta = delta.delta;
  v_prev_ = rec.value;


  // The update uses the traces as they stood at the start of this ms; the
  // spikes just produced enter the traces afterwards.
  const bool adam = cfg_.optim.method == OptimMethod::adam;
  // Adam receives the ascent direction without the learning rate.
  Matrix& critic_target = adam ? critic_.episode_sum : critic_.syn.w;
  Matrix& actor_target = adam ? actor_.episode_sum : actor_.syn.w;
  critic_add_delta_w(delta, critic_.traces.z(), critic_sign_, adam ? 1.0 : cfg_.critic.eta, critic_target);

  ActorUpdateInputs in;
  in.delta = delta.delta;
  rec.actor_rate = mean_actor_rate();
  rec.critic_rate = mean_critic_rate();
  in.rates_mean = rec.actor_rate;
  in.gate = gate_;
  in.use_feedback = !cfg_.ablate_feedback;
  actor_add_delta_w(in, actor_.traces.q(), actor_.traces.z(), actor_.syn.w, cfg_.actor, adam ? 1.0 : cfg_.actor.eta,
                    actor_target);

  critic_.traces.stdp_update(input_spikes_, critic_.pop.fired());
  actor_.traces.stdp_update(input_spikes_, actor_.pop.fired());
  if (!cfg_.ablate_feedback) actor_.traces.feedback_gate_update(feedback_neuron_);
  rec.action = policy_.held_action;
  return rec;
}

void Agent::commit(Head& h) {
  if (auto flushed = batch_commit(h.batch, h.episode_sum)) apply_adam(h.adam, h.syn.w, *flushed);
  h.episode_sum.fill(0.0);
}

void Agent::end_episode() {
  if (cfg_.optim.method != OptimMethod::adam) return;
  commit(critic_);
  commit(actor_);
}

}  // namespace fmstdp
