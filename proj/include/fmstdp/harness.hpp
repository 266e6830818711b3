#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fmstdp/config.hpp"

namespace fmstdp {

struct EpisodeLog {
  std::size_t episode = 0;   // 1-based
  std::size_t steps = 0;     // environment steps survived
  double scaled_return = 0.0;
  double actor_hz = 0.0;     // mean excitatory actor rate over the episode
  double critic_hz = 0.0;
};

struct RunSummary {
  std::optional<std::size_t> t_f;  // first perfect episode
  std::optional<std::size_t> t_s;  // first episode closing a window of `window` perfect episodes
};

// Episodes are 1-based. t_s is the first e >= window such that episodes
// e-window+1 .. e all reached perfect_steps.
RunSummary compute_metrics(const std::vector<std::size_t>& steps, std::size_t perfect_steps = 500,
                           std::size_t window = 100);

struct RunResult {
  RunConfig config;
  std::vector<EpisodeLog> episodes;
  RunSummary summary;
};

using EpisodeCallback = std::function<void(const EpisodeLog&)>;

// Full training run: per episode reset, warm-up, then environment steps of
// 1 ms SNN updates until the episode ends.
RunResult train(const RunConfig& cfg, const EpisodeCallback& on_episode = {});

// Independent per-purpose generators derived from one run seed.
struct RunStreams {
  std::mt19937_64 init;
  std::mt19937_64 env;
  std::mt19937_64 spikes;
  std::mt19937_64 policy;
  explicit RunStreams(std::uint64_t seed);
};

std::string episode_csv(const std::vector<EpisodeLog>& log);
std::string summary_json(const RunResult& r);

// Writes <dir>/<stem>.csv and <dir>/<stem>.json.
void export_run(const RunResult& r, const std::filesystem::path& dir, const std::string& stem);

std::vector<EpisodeLog> read_episode_csv(const std::filesystem::path& path);

// Mean and sample standard deviation; std is 0 for fewer than two values.
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 0;
};
MeanStd mean_std(const std::vector<double>& xs);

std::string git_describe();

}  // namespace fmstdp
