#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fmstdp/agent.hpp"
#include "fmstdp/cartpole.hpp"
#include "fmstdp/config.hpp"
#include "fmstdp/errors.hpp"
#include "fmstdp/harness.hpp"
#include "json.hpp"

using namespace fmstdp;

namespace {

RunConfig short_run(const std::string& profile, std::size_t episodes, std::uint64_t seed) {
  auto c = load_profile(profile);
  c.episodes = episodes;
  c.seed = seed;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("compute_metrics: windows") {
  std::vector<std::size_t> all(100, 500);
  auto s = compute_metrics(all);
  CHECK(s.t_f == 1u);
  CHECK(s.t_s == 100u);

  std::vector<std::size_t> none(300, 499);
  s = compute_metrics(none);
  CHECK_FALSE(s.t_f.has_value());
  CHECK_FALSE(s.t_s.has_value());

  std::vector<std::size_t> mid(200, 20);
  for (std::size_t e = 50; e <= 149; ++e) mid[e - 1] = 500;
  s = compute_metrics(mid);
  CHECK(s.t_f == 50u);
  CHECK(s.t_s == 149u);

  std::vector<std::size_t> broken(250, 500);
  broken[120] = 3;
  s = compute_metrics(broken);
  CHECK(s.t_f == 1u);
  CHECK(s.t_s == 100u);
  broken[50] = 3;
  s = compute_metrics(broken);
  CHECK(s.t_s == 221u);
}

TEST_CASE("mean_std: sample statistics") {
  const auto m = mean_std({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.std == doctest::Approx(1.2909944487));
  CHECK(mean_std({7.0}).std == 0.0);
}

TEST_CASE("warm-up leaves weights and environment untouched") {
  auto cfg = short_run("cartpole-default", 1, 3);
  CartPoleEnv env;
  RunStreams rng(3);
  Agent agent(cfg, env.feature_dim(), rng.init);
  const auto state = env.reset(rng.env);
  const auto before_c = agent.critic().syn.w.data;
  const auto before_a = agent.actor().syn.w.data;
  const auto env_before = env.state();
  agent.begin_episode();
  agent.warmup(env.features(state), 100, rng.spikes);
  CHECK(agent.critic().syn.w.data == before_c);
  CHECK(agent.actor().syn.w.data == before_a);
  CHECK(env.state() == env_before);
  CHECK(agent.critic().rates.mean() > 0.0);
  for (double z : agent.critic().traces.z().data) REQUIRE(z == 0.0);
}

TEST_CASE("agent: a learning millisecond changes weights in plain mode") {
  auto cfg = short_run("cartpole-default", 1, 4);
  CartPoleEnv env;
  RunStreams rng(4);
  Agent agent(cfg, env.feature_dim(), rng.init);
  const auto f = env.features(env.reset(rng.env));
  agent.begin_episode();
  agent.warmup(f, 100, rng.spikes);
  const auto before = agent.critic().syn.w.data;
  agent.act(rng.policy);
  for (int t = 0; t < 20; ++t) agent.step_ms(f, 0.001, false, rng.spikes);
  CHECK(agent.critic().syn.w.data != before);
  const auto& s = agent.policy_state().s;
  CHECK(s[0] + s[1] == doctest::Approx(1.0));
}

TEST_CASE("agent: batched Adam commits only when the batch is full") {
  auto cfg = short_run("lander-style", 1, 5);
  CartPoleEnv env;
  RunStreams rng(5);
  Agent agent(cfg, env.feature_dim(), rng.init);
  const auto start = agent.actor().syn.w.data;
  for (int ep = 0; ep < 16; ++ep) {
    env.reset(rng.env);
    const auto f = env.features(env.state().as_array());
    agent.begin_episode();
    agent.warmup(f, cfg.protocol.warmup_ms, rng.spikes);
    agent.act(rng.policy);
    for (int t = 0; t < 40; ++t) agent.step_ms(f, 0.0006, t >= 38, rng.spikes);
    agent.end_episode();
    if (ep < 15) REQUIRE(agent.actor().syn.w.data == start);
  }
  CHECK(agent.actor().syn.w.data != start);
  CHECK(agent.actor().adam.t == 1);
  // Weight change per entry is at most about lr on the first Adam step.
  double worst = 0.0;
  for (std::size_t k = 0; k < start.size(); ++k)
    worst = std::max(worst, std::abs(agent.actor().syn.w.data[k] - start[k]));
  CHECK(worst <= cfg.actor.eta * 1.0001);
}

TEST_CASE("train: short run logs one row per episode") {
  auto cfg = short_run("cartpole-default", 3, 1);
  std::size_t calls = 0;
  const auto r = train(cfg, [&](const EpisodeLog&) { ++calls; });
  CHECK(calls == 3);
  REQUIRE(r.episodes.size() == 3);
  for (std::size_t e = 0; e < 3; ++e) {
    const auto& log = r.episodes[e];
    CHECK(log.episode == e + 1);
    CHECK(log.steps >= 1);
    CHECK(log.steps <= 500);
    CHECK(log.scaled_return == doctest::Approx(0.02 * static_cast<double>(log.steps)));
    CHECK(log.actor_hz >= 0.0);
  }
}

TEST_CASE("train: same seed gives byte-identical CSV, other seeds differ") {
  const auto a = train(short_run("cartpole-default", 4, 9));
  const auto b = train(short_run("cartpole-default", 4, 9));
  const auto c = train(short_run("cartpole-default", 4, 10));
  CHECK(episode_csv(a.episodes) == episode_csv(b.episodes));
  CHECK(episode_csv(a.episodes) != episode_csv(c.episodes));
}

TEST_CASE("train: ablation flag changes the run") {
  auto cfg = short_run("cartpole-default", 4, 2);
  const auto base = train(cfg);
  cfg.ablate_feedback = true;
  const auto ablated = train(cfg);
  CHECK(episode_csv(base.episodes) != episode_csv(ablated.episodes));
}

TEST_CASE("export: CSV and JSON schema") {
  RunResult r;
  r.config = load_profile("cartpole-default");
  r.config.seed = 4;
  for (std::size_t e = 1; e <= 5; ++e) r.episodes.push_back({e, 10 * e, 0.2 * e, 42.5, 61.25});
  r.summary.t_f = 3;

  const auto dir = std::filesystem::temp_directory_path() / "fmstdp_export_test";
  std::filesystem::remove_all(dir);
  export_run(r, dir, "seed_4");
  const auto csv = slurp(dir / "seed_4.csv");
  CHECK(csv.rfind("episode,steps,return,actor_hz,critic_hz\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);

  const auto back = read_episode_csv(dir / "seed_4.csv");
  REQUIRE(back.size() == 5);
  CHECK(back[4].steps == 50);
  CHECK(back[2].scaled_return == doctest::Approx(0.6));
  CHECK(back[1].critic_hz == doctest::Approx(61.25));

  const auto j = nlohmann::json::parse(slurp(dir / "seed_4.json"));
  CHECK(j["profile"] == "cartpole-default");
  CHECK(j["seed"] == 4);
  CHECK(j["t_f"] == 3);
  CHECK(j["t_s"].is_null());
  CHECK(j["episodes"] == 5);
  CHECK(j["git_describe"].is_string());
  CHECK(nlohmann::json::parse(j.dump()) == j);

  std::ofstream(dir / "bad.csv") << "a,b\n1,2\n";
  CHECK_THROWS_AS(read_episode_csv(dir / "bad.csv"), IoError);
  CHECK_THROWS_AS(read_episode_csv(dir / "missing.csv"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("train: mismatched action count is rejected") {
  auto cfg = short_run("cartpole-default", 1, 0);
  cfg.actor.k = 3;
  CHECK_THROWS_AS(train(cfg), ConfigError);
  cfg = short_run("cartpole-default", 1, 0);
  cfg.env = "pong";
  CHECK_THROWS_AS(train(cfg), ConfigError);
}
