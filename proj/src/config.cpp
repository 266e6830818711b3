#include "fmstdp/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "fmstdp/errors.hpp"

#ifndef FMSTDP_PROFILE_DIR
#define FMSTDP_PROFILE_DIR "profiles"
#endif

namespace fmstdp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("profile key '" + key + "': expected a number, got '" + v + "'");
  }
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d < 0.0 || d != static_cast<double>(static_cast<std::size_t>(d))) {
    throw ConfigError("profile key '" + key + "': expected a non-negative integer, got '" + v + "'");
  }
  return static_cast<std::size_t>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("profile key '" + key + "': expected true/false, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

template <typename F>
Setter num(F field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { field(c) = to_double(k, v); };
}

template <typename F>
Setter count(F field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { field(c) = to_count(k, v); };
}

void add_head(std::map<std::string, Setter>& t, const std::string& prefix, HeadConfig RunConfig::*head) {
  t[prefix + ".tau_n"] = num([head](RunConfig& c) -> double& { return (c.*head).tau_n; });
  t[prefix + ".tau_p"] = num([head](RunConfig& c) -> double& { return (c.*head).stdp.tau_p; });
  t[prefix + ".tau_z"] = num([head](RunConfig& c) -> double& { return (c.*head).stdp.tau_z; });
  t[prefix + ".A_plus"] = num([head](RunConfig& c) -> double& { return (c.*head).stdp.a_plus; });
  t[prefix + ".A_minus"] = num([head](RunConfig& c) -> double& { return (c.*head).stdp.a_minus; });
  t[prefix + ".w0"] = num([head](RunConfig& c) -> double& { return (c.*head).w0; });
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["env"] = [](RunConfig& c, const std::string&, const std::string& v) { c.env = v; };
    t["lif.E_rest"] = num([](RunConfig& c) -> double& { return c.lif.e_rest; });
    t["lif.theta"] = num([](RunConfig& c) -> double& { return c.lif.v_thresh; });
    t["lif.tau"] = num([](RunConfig& c) -> double& { return c.lif.tau_m; });
    t["lif.R"] = num([](RunConfig& c) -> double& { return c.lif.resistance; });
    t["lif.dt"] = num([](RunConfig& c) -> double& { return c.lif.dt; });

    t["critic.N_e"] = count([](RunConfig& c) -> std::size_t& { return c.critic.n_e; });
    t["critic.N_i"] = count([](RunConfig& c) -> std::size_t& { return c.critic.n_i; });
    t["critic.eta"] = num([](RunConfig& c) -> double& { return c.critic.eta; });
    t["critic.alpha"] = num([](RunConfig& c) -> double& { return c.critic.alpha; });
    t["critic.beta"] = num([](RunConfig& c) -> double& { return c.critic.beta; });
    add_head(t, "critic", &RunConfig::critic_head);

    t["actor.K"] = count([](RunConfig& c) -> std::size_t& { return c.actor.k; });
    t["actor.N_e"] = count([](RunConfig& c) -> std::size_t& { return c.actor.n_e; });
    t["actor.N_i"] = count([](RunConfig& c) -> std::size_t& { return c.actor.n_i; });
    t["actor.eta"] = num([](RunConfig& c) -> double& { return c.actor.eta; });
    t["actor.alpha"] = num([](RunConfig& c) -> double& { return c.actor.alpha; });
    t["actor.tau_q"] = num([](RunConfig& c) -> double& { return c.actor.tau_q; });
    t["actor.c_e"] = num([](RunConfig& c) -> double& { return c.actor.c_e; });
    t["actor.c_w"] = num([](RunConfig& c) -> double& { return c.actor.c_w; });
    t["actor.c_t"] = num([](RunConfig& c) -> double& { return c.actor.c_t; });
    t["actor.rho_target"] = num([](RunConfig& c) -> double& { return c.actor.rho_target; });
    t["actor.resample_every"] = count([](RunConfig& c) -> std::size_t& { return c.actor.resample_every; });
    add_head(t, "actor", &RunConfig::actor_head);

    t["optim.method"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      if (v == "plain") c.optim.method = OptimMethod::plain;
      else if (v == "adam") c.optim.method = OptimMethod::adam;
      else throw ConfigError("profile key '" + k + "': expected plain or adam, got '" + v + "'");
    };
    t["optim.beta1"] = num([](RunConfig& c) -> double& { return c.optim.beta1; });
    t["optim.beta2"] = num([](RunConfig& c) -> double& { return c.optim.beta2; });
    t["optim.epsilon"] = num([](RunConfig& c) -> double& { return c.optim.epsilon; });
    t["optim.batch_size"] = count([](RunConfig& c) -> std::size_t& { return c.optim.batch_size; });

    t["encoding.neurons_per_feature"] = count([](RunConfig& c) -> std::size_t& { return c.neurons_per_feature; });

    t["protocol.warmup_ms"] = count([](RunConfig& c) -> std::size_t& { return c.protocol.warmup_ms; });
    t["protocol.ms_per_env_step"] = count([](RunConfig& c) -> std::size_t& { return c.protocol.snn_ms_per_env_step; });
    t["protocol.reward_scale"] = num([](RunConfig& c) -> double& { return c.protocol.reward_scale; });
    t["protocol.tau_discount"] = num([](RunConfig& c) -> double& { return c.protocol.tau_gamma; });
    t["protocol.terminal_zero_ms"] = count([](RunConfig& c) -> std::size_t& { return c.protocol.terminal_zero_ms; });
    t["protocol.zero_target_on_truncation"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.protocol.zero_target_on_truncation = to_bool(k, v);
    };
    return t;
  }();
  return table;
}

}  // namespace

void RunConfig::validate() const {
  lif.validate();
  critic.validate();
  actor.validate();
  if (episodes < 1) throw ConfigError("episodes must be at least 1");
  if (optim.batch_size < 1) throw ConfigError("optim.batch_size must be at least 1");
  if (neurons_per_feature < 1) throw ConfigError("encoding.neurons_per_feature must be at least 1");
  if (protocol.snn_ms_per_env_step < 1) throw ConfigError("protocol.ms_per_env_step must be at least 1");
  if (!(protocol.tau_gamma > 0.0)) throw ConfigError("protocol.tau_discount must be positive");
  if (!(critic_head.tau_n > 0.0) || !(actor_head.tau_n > 0.0)) throw ConfigError("tau_n must be positive");
}

ProfileEntries parse_profile(const std::string& text) {
  ProfileEntries out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("profile line " + std::to_string(lineno) + ": missing '='");
    const auto key = trim(line.substr(0, eq));
    const auto val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("profile line " + std::to_string(lineno) + ": empty key");
    out[key] = val;
  }
  return out;
}

ProfileEntries read_profile_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open profile " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_profile(ss.str());
}

void apply_profile(RunConfig& cfg, const ProfileEntries& entries) {
  const auto& table = setters();
  for (const auto& [k, v] : entries) {
    const auto it = table.find(k);
    if (it == table.end()) throw ConfigError("unknown profile key '" + k + "'");
    it->second(cfg, k, v);
  }
  cfg.critic.tau_gamma = cfg.protocol.tau_gamma;
}

std::filesystem::path default_profile_dir() {
  if (const char* env = std::getenv("FMSTDP_PROFILE_DIR")) return env;
  return FMSTDP_PROFILE_DIR;
}

RunConfig load_profile(const std::string& name_or_path, const std::filesystem::path& dir) {
  std::filesystem::path p = name_or_path;
  if (!std::filesystem::exists(p)) p = dir / (name_or_path + ".cfg");
  if (!std::filesystem::exists(p)) {
    throw ConfigError("profile '" + name_or_path + "' not found (looked in " + dir.string() + ")");
  }
  RunConfig cfg;
  apply_profile(cfg, read_profile_file(p));
  cfg.profile = p.stem().string();
  cfg.validate();
  return cfg;
}

std::string format_profile(const RunConfig& c) {
  std::ostringstream o;
  o.precision(17);
  auto head = [&](const char* name, const HeadConfig& h) {
    o << name << ".tau_n = " << h.tau_n << '\n'
      << name << ".tau_p = " << h.stdp.tau_p << '\n'
      << name << ".tau_z = " << h.stdp.tau_z << '\n'
      << name << ".A_plus = " << h.stdp.a_plus << '\n'
      << name << ".A_minus = " << h.stdp.a_minus << '\n'
      << name << ".w0 = " << h.w0 << '\n';
  };
  o << "env = " << c.env << '\n'
    << "lif.E_rest = " << c.lif.e_rest << "\nlif.theta = " << c.lif.v_thresh << "\nlif.tau = " << c.lif.tau_m
    << "\nlif.R = " << c.lif.resistance << "\nlif.dt = " << c.lif.dt << '\n'
    << "critic.N_e = " << c.critic.n_e << "\ncritic.N_i = " << c.critic.n_i << "\ncritic.eta = " << c.critic.eta
    << "\ncritic.alpha = " << c.critic.alpha << "\ncritic.beta = " << c.critic.beta << '\n';
  head("critic", c.critic_head);
  o << "actor.K = " << c.actor.k << "\nactor.N_e = " << c.actor.n_e << "\nactor.N_i = " << c.actor.n_i
    << "\nactor.eta = " << c.actor.eta << "\nactor.alpha = " << c.actor.alpha << "\nactor.tau_q = " << c.actor.tau_q
    << "\nactor.c_e = " << c.actor.c_e << "\nactor.c_w = " << c.actor.c_w << "\nactor.c_t = " << c.actor.c_t
    << "\nactor.rho_target = " << c.actor.rho_target << "\nactor.resample_every = " << c.actor.resample_every
    << '\n';
  head("actor", c.actor_head);
  o << "optim.method = " << (c.optim.method == OptimMethod::adam ? "adam" : "plain")
    << "\noptim.beta1 = " << c.optim.beta1 << "\noptim.beta2 = " << c.optim.beta2
    << "\noptim.epsilon = " << c.optim.epsilon << "\noptim.batch_size = " << c.optim.batch_size << '\n'
    << "encoding.neurons_per_feature = " << c.neurons_per_feature << '\n'
    << "protocol.warmup_ms = " << c.protocol.warmup_ms << "\nprotocol.ms_per_env_step = "
    << c.protocol.snn_ms_per_env_step << "\nprotocol.reward_scale = " << c.protocol.reward_scale
    << "\nprotocol.tau_discount = " << c.protocol.tau_gamma << "\nprotocol.terminal_zero_ms = "
    << c.protocol.terminal_zero_ms << "\nprotocol.zero_target_on_truncation = "
    << (c.protocol.zero_target_on_truncation ? "true" : "false") << '\n';
  return o.str();
}

}  // namespace fmstdp
