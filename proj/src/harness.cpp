#include "fmstdp/harness.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include "json.hpp"
#include <sstream>

#include "fmstdp/agent.hpp"
#include "fmstdp/errors.hpp"

#ifndef FMSTDP_GIT_DESCRIBE
#define FMSTDP_GIT_DESCRIBE "unknown"
#endif

namespace fmstdp {

RunSummary compute_metrics(const std::vector<std::size_t>& steps, std::size_t perfect_steps, std::size_t window) {
  RunSummary s;
  std::size_t run = 0;
  for (std::size_t e = 0; e < steps.size(); ++e) {
    const bool perfect = steps[e] >= perfect_steps;
    if (perfect && !s.t_f) s.t_f = e + 1;
    run = perfect ? run + 1 : 0;
    if (run >= window && !s.t_s) s.t_s = e + 1;
  }
  return s;
}

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return std::mt19937_64(seq);
}

}  // namespace

RunStreams::RunStreams(std::uint64_t seed)
    : init(stream(seed, 1)), env(stream(seed, 2)), spikes(stream(seed, 3)), policy(stream(seed, 4)) {}

RunResult train(const RunConfig& cfg, const EpisodeCallback& on_episode) {
  cfg.validate();
  auto env = make_environment(cfg.env);
  if (env->action_count() != cfg.actor.k) {
    throw ConfigError("profile has " + std::to_string(cfg.actor.k) + " actions but environment '" + cfg.env +
                      "' has " + std::to_string(env->action_count()));
  }
  RunStreams rng(cfg.seed);
  Agent agent(cfg, env->feature_dim(), rng.init);
  const auto& proto = cfg.protocol;

  RunResult result;
  result.config = cfg;
  result.episodes.reserve(cfg.episodes);
  std::vector<std::size_t> steps;

  for (std::size_t ep = 1; ep <= cfg.episodes; ++ep) {
    auto state = env->reset(rng.env);
    auto features = env->features(state);
    agent.begin_episode();
    agent.warmup(features, proto.warmup_ms, rng.spikes);

    EpisodeLog log;
    log.episode = ep;
    double actor_sum = 0.0;
    double critic_sum = 0.0;
    std::size_t ms = 0;
    bool done = false;
    while (!done) {
      const std::size_t action = agent.act(rng.policy);
      auto out = run_env_step(*env, action, proto);
      for (std::size_t t = 0; t < proto.snn_ms_per_env_step; ++t) {
        const auto rec = agent.step_ms(out.features, out.schedule.reward_per_ms[t], out.schedule.terminal[t] != 0,
                                       rng.spikes);
        log.scaled_return += out.schedule.reward_per_ms[t];
        actor_sum += rec.actor_rate;
        critic_sum += rec.critic_rate;
        ++ms;
      }
      ++log.steps;
      done = out.step.done();
    }
    agent.end_episode();
    check_finite(agent.critic().syn, "critic");
    check_finite(agent.actor().syn, "actor");

    log.actor_hz = ms ? 1000.0 * actor_sum / static_cast<double>(ms) : 0.0;
    log.critic_hz = ms ? 1000.0 * critic_sum / static_cast<double>(ms) : 0.0;
    steps.push_back(log.steps);
    result.episodes.push_back(log);
    if (on_episode) on_episode(log);
  }
  result.summary = compute_metrics(steps, env->max_steps());
  return result;
}

std::string episode_csv(const std::vector<EpisodeLog>& log) {
  std::ostringstream o;
  o << "episode,steps,return,actor_hz,critic_hz\n";
  o << std::setprecision(10);
  for (const auto& e : log) {
    o << e.episode << ',' << e.steps << ',' << e.scaled_return << ',' << e.actor_hz << ',' << e.critic_hz << '\n';
  }
  return o.str();
}

std::string summary_json(const RunResult& r) {
  nlohmann::ordered_json j;
  j["profile"] = r.config.profile;
  j["seed"] = r.config.seed;
  j["t_f"] = r.summary.t_f ? nlohmann::ordered_json(*r.summary.t_f) : nlohmann::ordered_json(nullptr);
  j["t_s"] = r.summary.t_s ? nlohmann::ordered_json(*r.summary.t_s) : nlohmann::ordered_json(nullptr);
  j["episodes"] = r.episodes.size();
  j["git_describe"] = git_describe();
  j["ablate_feedback"] = r.config.ablate_feedback;
  return j.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + p.string() + " for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("write failed for " + p.string());
}

}  // namespace

void export_run(const RunResult& r, const std::filesystem::path& dir, const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / (stem + ".csv"), episode_csv(r.episodes));
  write_file(dir / (stem + ".json"), summary_json(r));
}

std::vector<EpisodeLog> read_episode_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  std::string line;
  std::getline(f, line);
  if (line != "episode,steps,return,actor_hz,critic_hz") throw IoError(path.string() + ": unexpected CSV header");
  std::vector<EpisodeLog> out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    EpisodeLog e;
    char c1, c2, c3, c4;
    if (!(ss >> e.episode >> c1 >> e.steps >> c2 >> e.scaled_return >> c3 >> e.actor_hz >> c4 >> e.critic_hz)) {
      throw IoError(path.string() + ": malformed row '" + line + "'");
    }
    out.push_back(e);
  }
  return out;
}

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd r;
  r.n = xs.size();
  if (xs.empty()) return r;
  for (double x : xs) r.mean += x;
  r.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return r;
}

std::string git_describe() { return FMSTDP_GIT_DESCRIBE; }

}  // namespace fmstdp
