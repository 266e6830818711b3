#include "fmstdp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "fmstdp/actor.hpp"
#include "fmstdp/critic.hpp"
#include "fmstdp/lif.hpp"
#include "fmstdp/traces.hpp"

namespace fmstdp {

namespace {

constexpr double kRecursionTol = 1e-9;
constexpr double kSteTol = 1e-6;
constexpr double kEntropyTol = 1e-6;
constexpr double kTdTol = 1e-12;

using Series = std::vector<double>;
using Train = std::vector<std::uint8_t>;

Train random_train(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution b(p);
  Train t(n);
  for (auto& x : t) x = b(rng) ? 1 : 0;
  return t;
}

// (x * k_tau)(t) = sum_{s <= t} x(s) exp(-(t - s) dt / tau), by direct summation.
Series convolve(const Series& x, double tau, double dt) {
  Series out(x.size(), 0.0);
  for (std::size_t t = 0; t < x.size(); ++t) {
    double acc = 0.0;
    for (std::size_t s = 0; s <= t; ++s) acc += x[s] * std::exp(-static_cast<double>(t - s) * dt / tau);
    out[t] = acc;
  }
  return out;
}

Series as_series(const Train& t) { return Series(t.begin(), t.end()); }

Series product(const Series& a, const Series& b) {
  Series out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

// max |a - b| / max |b|; zero when both are identically zero.
double rel_error(const Series& a, const Series& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num = std::max(num, std::abs(a[k] - b[k]));
    den = std::max(den, std::abs(b[k]));
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

CheckResult make(std::string family, std::string name, double err, double tol, bool relative) {
  CheckResult c;
  c.family = std::move(family);
  c.name = std::move(name);
  c.error = err;
  c.tolerance = tol;
  c.relative = relative;
  c.passed = std::isfinite(err) && err <= tol;
  return c;
}

// A frozen two-input, two-neuron spike record plus per-step feedback and TD
// error, shared by the trace and theorem checks.
struct Record {
  std::size_t length = 0;
  std::vector<Train> pre;
  std::vector<Train> post;
  Series feedback;  // applied to both neurons, sign flipped for the second
  Series delta;
};

Record make_record(std::size_t length, std::mt19937_64& rng) {
  Record r;
  r.length = length;
  r.pre = {random_train(length, 0.3, rng), random_train(length, 0.1, rng)};
  r.post = {random_train(length, 0.2, rng), random_train(length, 0.05, rng)};
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  r.feedback.resize(length);
  r.delta.resize(length);
  // Piecewise constant over 20-step blocks, like an env step.
  double fb = 0.0;
  for (std::size_t t = 0; t < length; ++t) {
    if (t % 20 == 0) fb = u(rng);
    r.feedback[t] = fb;
    r.delta[t] = 0.01 * u(rng);
  }
  return r;
}

double feedback_for(const Record& r, std::size_t t, std::size_t j) { return j == 0 ? r.feedback[t] : -r.feedback[t]; }

struct TracePaths {
  std::vector<Series> p_pre, p_post;
  std::vector<std::vector<Series>> z, q;  // [i][j]
  std::vector<Series> rho;
  std::vector<std::vector<double>> dz_acc;  // accumulated delta * z
};

TracePaths run_recursions(const Record& r, const StdpParams& p, double tau_n) {
  const std::size_t ni = r.pre.size(), nj = r.post.size();
  StdpTraceSet traces(ni, nj, p);
  RateEstimator rates(nj, tau_n, p.dt);
  TracePaths out;
  out.p_pre.assign(ni, Series(r.length));
  out.p_post.assign(nj, Series(r.length));
  out.z.assign(ni, std::vector<Series>(nj, Series(r.length)));
  out.q = out.z;
  out.rho.assign(nj, Series(r.length));
  out.dz_acc.assign(ni, std::vector<double>(nj, 0.0));
  Train pre(ni), post(nj);
  std::vector<double> fb(nj);
  for (std::size_t t = 0; t < r.length; ++t) {
    for (std::size_t i = 0; i < ni; ++i) pre[i] = r.pre[i][t];
    for (std::size_t j = 0; j < nj; ++j) {
      post[j] = r.post[j][t];
      fb[j] = feedback_for(r, t, j);
    }
    traces.stdp_update(pre, post);
    traces.feedback_gate_update(fb);
    rates.update(post);
    for (std::size_t i = 0; i < ni; ++i) out.p_pre[i][t] = traces.p_pre()[i];
    for (std::size_t j = 0; j < nj; ++j) {
      out.p_post[j][t] = traces.p_post()[j];
      out.rho[j][t] = rates.rho()[j];
    }
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t j = 0; j < nj; ++j) {
        out.z[i][j][t] = traces.z()(i, j);
        out.q[i][j][t] = traces.q()(i, j);
        out.dz_acc[i][j] += r.delta[t] * traces.z()(i, j);
      }
    }
  }
  return out;
}

void check_trace_recursions(const Record& r, VerifyReport& rep) {
  for (double tau : {20.0, 40.0}) {
    StdpParams p;
    p.tau_p = tau;
    p.tau_z = tau;
    p.tau_q = 2.0 * tau;
    const double tau_n = tau;
    const TracePaths rec = run_recursions(r, p, tau_n);
    const std::string suffix = " tau=" + std::to_string(static_cast<int>(tau));

    double err_p = 0.0, err_z = 0.0, err_q = 0.0, err_rho = 0.0;
    std::vector<Series> pre_conv;
    for (std::size_t i = 0; i < r.pre.size(); ++i) {
      pre_conv.push_back(convolve(as_series(r.pre[i]), p.tau_p, p.dt));
      err_p = std::max(err_p, rel_error(rec.p_pre[i], pre_conv[i]));
    }
    for (std::size_t j = 0; j < r.post.size(); ++j) {
      const Series post = as_series(r.post[j]);
      err_p = std::max(err_p, rel_error(rec.p_post[j], convolve(post, p.tau_p, p.dt)));
      Series scaled = post;
      for (auto& v : scaled) v /= tau_n;
      err_rho = std::max(err_rho, rel_error(rec.rho[j], convolve(scaled, tau_n, p.dt)));
      for (std::size_t i = 0; i < r.pre.size(); ++i) {
        const Series z = convolve(product(post, pre_conv[i]), p.tau_z, p.dt);
        err_z = std::max(err_z, rel_error(rec.z[i][j], z));
        Series gated(r.length);
        for (std::size_t t = 0; t < r.length; ++t) gated[t] = feedback_for(r, t, j) * z[t];
        err_q = std::max(err_q, rel_error(rec.q[i][j], convolve(gated, p.tau_q, p.dt)));
      }
    }
    rep.checks.push_back(make("trace-recursion", "P pre/post" + suffix, err_p, kRecursionTol, true));
    rep.checks.push_back(make("trace-recursion", "z" + suffix, err_z, kRecursionTol, true));
    rep.checks.push_back(make("trace-recursion", "q" + suffix, err_q, kRecursionTol, true));
    rep.checks.push_back(make("trace-recursion", "rho" + suffix, err_rho, kRecursionTol, true));
  }
}

// Theorems 1 and 2 hold when tau_p = tau_m and tau_z = tau_n. The closed form
// always uses tau_n; the recursion uses the (possibly corrupted) tau_z.
void check_theorems(const Record& r, const VerifyOptions& opt, VerifyReport& rep) {
  const LifParams lif;
  const double tau_n = 20.0;
  StdpParams p;
  p.a_plus = 1.0;
  p.a_minus = 0.0;
  p.tau_p = lif.tau_m;
  p.tau_z = opt.tau_z_override > 0.0 ? opt.tau_z_override : tau_n;
  p.tau_q = 40.0;
  p.dt = lif.dt;
  const TracePaths rec = run_recursions(r, p, tau_n);

  double err1 = 0.0, err2 = 0.0;
  for (std::size_t i = 0; i < r.pre.size(); ++i) {
    const Series kernel = convolve(as_series(r.pre[i]), lif.tau_m, lif.dt);
    for (std::size_t j = 0; j < r.post.size(); ++j) {
      const Series closed = convolve(product(as_series(r.post[j]), kernel), tau_n, lif.dt);
      double acc = 0.0;
      for (std::size_t t = 0; t < r.length; ++t) acc += r.delta[t] * closed[t];
      err1 = std::max(err1, rel_error({rec.dz_acc[i][j]}, {acc}));

      Series gated(r.length);
      for (std::size_t t = 0; t < r.length; ++t) gated[t] = feedback_for(r, t, j) * closed[t];
      err2 = std::max(err2, rel_error(rec.q[i][j], convolve(gated, p.tau_q, lif.dt)));
    }
  }
  rep.checks.push_back(make("theorem-1", "accumulated delta*z vs closed form", err1, kRecursionTol, true));
  rep.checks.push_back(make("theorem-2", "q vs nested convolution", err2, kRecursionTol, true));
}

// With the threshold out of reach no spike times move, so V is affine in
// each weight and its derivative must be (R/tau) (X_i * k_tau).
void check_ste(const Record& r, VerifyReport& rep) {
  LifParams lif;
  lif.v_thresh = 1e12;
  lif.resistance = 1.5;
  const std::size_t ni = r.pre.size();
  const double h = 1e-3;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  std::vector<double> w(ni);
  for (auto& x : w) x = u(rng);

  auto voltage_path = [&](std::size_t which, double bump) {
    LifPopulation pop(lif, 1);
    SynapseMatrix syn(ni, 1);
    for (std::size_t i = 0; i < ni; ++i) syn.w(i, 0) = w[i] + (i == which ? bump : 0.0);
    Train pre(ni);
    std::vector<double> scratch;
    Series v(r.length);
    for (std::size_t t = 0; t < r.length; ++t) {
      for (std::size_t i = 0; i < ni; ++i) pre[i] = r.pre[i][t];
      forward(pop, syn, pre, scratch);
      v[t] = pop.voltage()[0];
    }
    return v;
  };

  double err = 0.0;
  for (std::size_t i = 0; i < ni; ++i) {
    const Series up = voltage_path(i, h);
    const Series down = voltage_path(i, -h);
    const Series kernel = convolve(as_series(r.pre[i]), lif.tau_m, lif.dt);
    for (std::size_t t = 0; t < r.length; ++t) {
      const double fd = (up[t] - down[t]) / (2.0 * h);
      err = std::max(err, std::abs(fd - lif.resistance / lif.tau_m * kernel[t]));
    }
  }
  rep.checks.push_back(make("ste-derivative", "dV/dw finite difference", err, kSteTol, false));
}

double softmax_entropy(const std::vector<double>& rho, double alpha) {
  const std::vector<double> zero(rho.size(), 0.0);
  return entropy(action_probs(rho, zero, alpha));
}

void check_entropy_gate(std::mt19937_64& rng, VerifyReport& rep) {
  std::uniform_real_distribution<double> u(0.0, 0.2);
  const double alphas[] = {2.0, 15.0, 25.0};
  const double h = 1e-6;
  double err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 2 + static_cast<std::size_t>(trial % 3);
    const double alpha = alphas[trial % 3];
    std::vector<double> rho(k);
    for (auto& x : rho) x = u(rng);
    const std::vector<double> zero(k, 0.0);
    const auto s = action_probs(rho, zero, alpha);
    const auto g = entropy_gate(s);
    for (std::size_t m = 0; m < k; ++m) {
      auto up = rho, down = rho;
      up[m] += h;
      down[m] -= h;
      const double fd = (softmax_entropy(up, alpha) - softmax_entropy(down, alpha)) / (2.0 * h);
      err = std::max(err, std::abs(alpha * g[m] - fd));
    }
  }
  rep.checks.push_back(make("entropy-gate", "20 random distributions", err, kEntropyTol, false));
}

void check_td_spots(VerifyReport& rep) {
  struct Spot {
    double v_now, v_next, r, dt, tau;
    bool terminal;
  };
  const Spot spots[] = {
      {0.0, 0.0, 0.0, 1.0, 1000.0, false},
      {0.5, 0.5, 0.001, 1.0, 1000.0, false},
      {0.5, 0.7, 0.0, 1.0, 1000.0, true},
      {-0.2, 0.3, 0.02, 1.0, 1000.0, false},
      {1.0, 0.9, 0.001, 0.5, 250.0, false},
  };
  double err = 0.0;
  for (const auto& s : spots) {
    const double target = s.terminal ? 0.0 : s.v_next;
    const double expect = std::exp(-s.dt / s.tau) * target + std::exp(-s.dt / (2.0 * s.tau)) * s.r * s.dt - s.v_now;
    err = std::max(err, std::abs(td_error(s.v_now, s.v_next, s.r, s.dt, s.tau, s.terminal).delta - expect));
  }
  // Hand-evaluated reference for the standard alive step.
  err = std::max(err, std::abs(td_error(0.5, 0.5, 0.001, 1.0, 1000.0, false).delta - 4.99750041666665094e-04));
  rep.checks.push_back(make("td-error", "spot values", err, kTdTol, false));
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> VerifyReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.family + ": " + c.name);
  return out;
}

VerifyReport run_verification(const VerifyOptions& opt) {
  VerifyReport rep;
  std::mt19937_64 rng(opt.seed);
  const Record r = make_record(opt.length, rng);
  check_trace_recursions(r, rep);
  check_theorems(r, opt, rep);
  check_ste(r, rep);
  check_entropy_gate(rng, rep);
  check_td_spots(rep);
  return rep;
}

std::string format_report(const VerifyReport& r) {
  std::ostringstream os;
  char buf[64];
  for (const auto& c : r.checks) {
    std::snprintf(buf, sizeof buf, "%.3e (%s tol %.0e)", c.error, c.relative ? "rel" : "abs", c.tolerance);
    os << (c.passed ? "PASS  " : "FAIL  ") << c.family << " / " << c.name << "  " << buf << '\n';
  }
  os << (r.all_passed() ? "all checks passed" : "verification FAILED") << '\n';
  return os.str();
}

}  // namespace fmstdp
