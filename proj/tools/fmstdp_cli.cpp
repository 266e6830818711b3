// Command-line driver: train, verify, metrics.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fmstdp/config.hpp"
#include "fmstdp/errors.hpp"
#include "fmstdp/harness.hpp"
#include "fmstdp/verify.hpp"

namespace fs = std::filesystem;
using namespace fmstdp;

namespace {

std::string fmt_opt(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "none"; }

void print_aggregate(const std::vector<RunSummary>& runs, const std::vector<std::vector<EpisodeLog>>& logs) {
  std::vector<double> tf, ts;
  std::size_t solved = 0;
  for (const auto& r : runs) {
    if (r.t_f) tf.push_back(static_cast<double>(*r.t_f));
    if (r.t_s) {
      ts.push_back(static_cast<double>(*r.t_s));
      ++solved;
    }
  }
  const auto f = mean_std(tf);
  const auto s = mean_std(ts);
  std::printf("runs: %zu  solved: %zu\n", runs.size(), solved);
  std::printf("T_f: mean %.2f  std %.2f  (n=%zu)\n", f.mean, f.std, f.n);
  std::printf("T_s: mean %.2f  std %.2f  (n=%zu)\n", s.mean, s.std, s.n);
  double last100 = 0.0;
  std::size_t n = 0;
  for (const auto& log : logs) {
    const std::size_t from = log.size() > 100 ? log.size() - 100 : 0;
    for (std::size_t k = from; k < log.size(); ++k, ++n) last100 += static_cast<double>(log[k].steps);
  }
  if (n) std::printf("mean steps over final 100 episodes: %.1f\n", last100 / static_cast<double>(n));
}

int run_train(const std::string& profile, std::size_t episodes, std::size_t seeds, std::uint64_t first_seed,
              const std::string& out, bool ablate, std::size_t jobs, bool quiet,
              const std::vector<std::string>& overrides) {
  RunConfig base = load_profile(profile);
  if (!overrides.empty()) {
    std::string text;
    for (const auto& o : overrides) text += o + "\n";
    apply_profile(base, parse_profile(text));
    base.validate();
  }
  base.episodes = episodes;
  base.ablate_feedback = ablate;
  const fs::path dir = out;

  std::vector<RunSummary> summaries(seeds);
  std::vector<std::vector<EpisodeLog>> logs(seeds);
  std::atomic<std::size_t> next{0};
  std::mutex io;
  std::vector<std::string> errors;

  auto worker = [&] {
    for (std::size_t k = next++; k < seeds; k = next++) {
      RunConfig cfg = base;
      cfg.seed = first_seed + k;
      try {
        auto r = train(cfg, [&](const EpisodeLog& e) {
          if (quiet) return;
          std::lock_guard lock(io);
          std::printf("seed %llu  episode %4zu  steps %3zu  actor %.1f Hz  critic %.1f Hz\n",
                      static_cast<unsigned long long>(cfg.seed), e.episode, e.steps, e.actor_hz, e.critic_hz);
          std::fflush(stdout);
        });
        if (!out.empty()) export_run(r, dir, "seed_" + std::to_string(cfg.seed));
        std::lock_guard lock(io);
        std::printf("seed %llu: T_f %s  T_s %s\n", static_cast<unsigned long long>(cfg.seed),
                    fmt_opt(r.summary.t_f).c_str(), fmt_opt(r.summary.t_s).c_str());
        std::fflush(stdout);
        summaries[k] = r.summary;
        logs[k] = std::move(r.episodes);
      } catch (const std::exception& ex) {
        std::lock_guard lock(io);
        errors.push_back("seed " + std::to_string(cfg.seed) + ": " + ex.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::max<std::size_t>(1, std::min(jobs, seeds)); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (const auto& e : errors) std::fprintf(stderr, "error: %s\n", e.c_str());
  if (!errors.empty()) return 2;
  print_aggregate(summaries, logs);
  if (!out.empty()) {
    std::ofstream f(dir / "profile.cfg");
    f << format_profile(base);
  }
  return 0;
}

int run_metrics(const std::string& in) {
  std::vector<fs::path> csvs;
  for (const auto& entry : fs::directory_iterator(in)) {
    if (entry.path().extension() == ".csv") csvs.push_back(entry.path());
  }
  std::sort(csvs.begin(), csvs.end());
  if (csvs.empty()) throw IoError("no CSV files in " + in);
  std::vector<RunSummary> runs;
  std::vector<std::vector<EpisodeLog>> logs;
  for (const auto& p : csvs) {
    auto log = read_episode_csv(p);
    std::vector<std::size_t> steps;
    for (const auto& e : log) steps.push_back(e.steps);
    runs.push_back(compute_metrics(steps));
    std::printf("%s: T_f %s  T_s %s\n", p.filename().string().c_str(), fmt_opt(runs.back().t_f).c_str(),
                fmt_opt(runs.back().t_s).c_str());
    logs.push_back(std::move(log));
  }
  print_aggregate(runs, logs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spiking actor-critic with feedback-modulated TD-STDP"};
  app.require_subcommand(1);

  std::string profile = "cartpole-default";
  std::size_t episodes = 400;
  std::size_t seeds = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool ablate = false;
  bool quiet = false;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::string> overrides;

  auto* train_cmd = app.add_subcommand("train", "Train on an environment and write per-episode logs");
  train_cmd->add_option("--profile", profile, "Profile name or path")->capture_default_str();
  train_cmd->add_option("--episodes", episodes, "Episodes per run")->capture_default_str();
  train_cmd->add_option("--seeds", seeds, "Number of independent runs")->capture_default_str();
  train_cmd->add_option("--seed", seed, "First seed")->capture_default_str();
  train_cmd->add_option("--out", out, "Output directory for CSV/JSON");
  train_cmd->add_flag("--ablate-feedback", ablate, "Replace the feedback-gated trace by z in the actor rule");
  train_cmd->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
  train_cmd->add_flag("--quiet", quiet, "Only print per-run summaries");
  train_cmd->add_option("--set", overrides, "Override a profile entry, e.g. --set actor.eta=0.02");

  auto* verify_cmd = app.add_subcommand("verify", "Run the gradient-equivalence and trace checks");
  std::uint64_t verify_seed = 7;
  verify_cmd->add_option("--seed", verify_seed, "Seed for the random spike records")->capture_default_str();

  auto* metrics_cmd = app.add_subcommand("metrics", "Summarize T_f/T_s from a directory of CSV logs");
  std::string in;
  metrics_cmd->add_option("--in", in, "Directory written by train --out")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return run_train(profile, episodes, seeds, seed, out, ablate, jobs, quiet, overrides);
    if (*verify_cmd) {
      const auto report = run_verification(VerifyOptions{verify_seed});
      std::cout << format_report(report);
      return report.all_passed() ? 0 : 1;
    }
    if (*metrics_cmd) return run_metrics(in);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
  return 0;
}
