#include "fmstdp/actor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fmstdp/errors.hpp"

namespace fmstdp {

void ActorConfig::validate() const {
  if (k < 2) throw ConfigError("actor: at least two actions are required");
  if (n_e < 1) throw ConfigError("actor: n_e must be at least 1");
  if (resample_every < 1) throw ConfigError("actor: resample_every must be at least 1");
  if (c_e < 0.0 || c_w < 0.0 || c_t < 0.0) throw ConfigError("actor: regularizer strengths must be non-negative");
}

PerActionRates per_action_rates(std::span<const double> rho, const ActorConfig& cfg) {
  if (rho.size() != cfg.neurons()) throw ConfigError("per_action_rates: rate vector does not match actor layout");
  PerActionRates out{std::vector<double>(cfg.k, 0.0), std::vector<double>(cfg.k, 0.0)};
  const std::size_t per = cfg.per_action();
  for (std::size_t a = 0; a < cfg.k; ++a) {
    const double* base = rho.data() + a * per;
    double se = 0.0;
    for (std::size_t j = 0; j < cfg.n_e; ++j) se += base[j];
    out.excitatory[a] = se / static_cast<double>(cfg.n_e);
    if (cfg.n_i > 0) {
      double si = 0.0;
      for (std::size_t j = cfg.n_e; j < per; ++j) si += base[j];
      out.inhibitory[a] = si / static_cast<double>(cfg.n_i);
    }
  }
  return out;
}

double mean_excitatory_rate(std::span<const double> rho, const ActorConfig& cfg) {
  const auto r = per_action_rates(rho, cfg);
  double s = 0.0;
  for (double v : r.excitatory) s += v;
  return s / static_cast<double>(cfg.k);
}

std::vector<double> action_probs(std::span<const double> rates_e, std::span<const double> rates_i, double alpha) {
  if (rates_e.size() != rates_i.size()) throw ConfigError("action_probs: rate vectors differ in length");
  std::vector<double> logits(rates_e.size());
  for (std::size_t k = 0; k < logits.size(); ++k) logits[k] = alpha * (rates_e[k] - rates_i[k]);
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (auto& l : logits) {
    l = std::exp(l - mx);
    sum += l;
  }
  for (auto& l : logits) l /= sum;
  return logits;
}

void PolicyState::reset() {
  held_action = 0;
  steps_since_resample = 0;
  has_action = false;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t sample_or_hold(PolicyState& state, std::span<const double> s, std::size_t resample_every,
                           std::mt19937_64& rng) {
  state.s.assign(s.begin(), s.end());
  if (!state.has_action || state.steps_since_resample >= resample_every) {
    const double u = uniform01(rng);
    double acc = 0.0;
    std::size_t pick = s.size() - 1;
    for (std::size_t k = 0; k < s.size(); ++k) {
      acc += s[k];
      if (u < acc) {
        pick = k;
        break;
      }
    }
    // Never land on a zero-probability tail entry through rounding.
    while (pick > 0 && s[pick] <= 0.0) --pick;
    state.held_action = pick;
    state.has_action = true;
    state.steps_since_resample = 0;
  }
  ++state.steps_since_resample;
  return state.held_action;
}

std::vector<double> feedback_signal(std::size_t held_action, std::span<const double> s) {
  std::vector<double> f(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) f[k] = (k == held_action ? 1.0 : 0.0) - s[k];
  return f;
}

std::vector<double> entropy_gate(std::span<const double> s) {
  // sum_m s_m (log s_m + 1) I{m=k} = s_k (log s_k + 1); the second part is
  // s_k * sum_m s_m (log s_m + 1).
  double total = 0.0;
  std::vector<double> h(s.size());
  for (std::size_t m = 0; m < s.size(); ++m) {
    h[m] = s[m] > 0.0 ? s[m] * (std::log(s[m]) + 1.0) : 0.0;
    total += h[m];
  }
  std::vector<double> g(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) g[k] = -(h[k] - s[k] * total);
  return g;
}

double entropy(std::span<const double> s) {
  double h = 0.0;
  for (double p : s)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

namespace {

template <bool Add>
void actor_update(const ActorUpdateInputs& in, const Matrix& q, const Matrix& z, const Matrix& w,
                  const ActorConfig& cfg, double eta, Matrix& out) {
  if (!q.same_shape(z) || !w.same_shape(z) || z.cols != cfg.neurons()) {
    throw ConfigError("actor_delta_w: trace/weight shapes do not match actor layout");
  }
  if (cfg.c_e != 0.0 && in.gate.size() != cfg.k) throw ConfigError("actor_delta_w: gate must have one entry per action");
  if (!out.same_shape(z)) {
    if (Add) throw ConfigError("actor_add_delta_w: target shape mismatch");
    out = Matrix(z.rows, z.cols);
  }

  const std::size_t n = z.cols;
  // Per-column coefficients on the gated trace and on z.
  std::vector<double> cq(n), cz(n);
  const double target_term = cfg.c_t * (in.rates_mean - cfg.rho_target);
  for (std::size_t j = 0; j < n; ++j) {
    const double sign = cfg.excitatory(j) ? 1.0 : -1.0;
    const double gate = cfg.c_e != 0.0 ? in.gate[cfg.action_of(j)] : 0.0;
    cq[j] = eta * sign * in.delta;
    cz[j] = eta * (sign * cfg.c_e * gate - target_term);
  }
  const double decay = -0.5 * eta * cfg.c_w;
  const Matrix& credit = in.use_feedback ? q : z;
  const bool credit_only = decay == 0.0 && std::all_of(cz.begin(), cz.end(), [](double c) { return c == 0.0; });
  if (credit_only && &out != &credit) {
    for (std::size_t i = 0; i < z.rows; ++i) {
      const double* __restrict cr = credit.data.data() + i * n;
      double* __restrict o = out.data.data() + i * n;
      const double* __restrict c = cq.data();
      for (std::size_t j = 0; j < n; ++j) {
        if constexpr (Add) o[j] += c[j] * cr[j];
        else o[j] = c[j] * cr[j];
      }
    }
    return;
  }
  for (std::size_t i = 0; i < z.rows; ++i) {
    const double* cr = credit.data.data() + i * n;
    const double* zr = z.data.data() + i * n;
    const double* wr = w.data.data() + i * n;
    double* o = out.data.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = cq[j] * cr[j] + cz[j] * zr[j] + decay * wr[j];
      if constexpr (Add) o[j] += d;
      else o[j] = d;
    }
  }
}

}  // namespace

void actor_delta_w(const ActorUpdateInputs& in, const Matrix& q, const Matrix& z, const Matrix& w,
                   const ActorConfig& cfg, double eta, Matrix& out) {
  actor_update<false>(in, q, z, w, cfg, eta, out);
}

void actor_add_delta_w(const ActorUpdateInputs& in, const Matrix& q, const Matrix& z, const Matrix& w,
                       const ActorConfig& cfg, double eta, Matrix& target) {
  actor_update<true>(in, q, z, w, cfg, eta, target);
}

}  // namespace fmstdp
