#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "fmstdp/config.hpp"
#include "fmstdp/errors.hpp"

using namespace fmstdp;

TEST_CASE("profile parsing: comments, whitespace and errors") {
  const auto e = parse_profile("# header\n  critic.eta = 1e-3  # trailing\n\nactor.K=3\n");
  CHECK(e.size() == 2);
  CHECK(e.at("critic.eta") == "1e-3");
  CHECK(e.at("actor.K") == "3");
  CHECK_THROWS_AS(parse_profile("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(parse_profile(" = 3\n"), ConfigError);
}

TEST_CASE("apply_profile: typed values and unknown keys") {
  RunConfig c;
  apply_profile(c, parse_profile("critic.eta = 1e-3\nactor.K = 3\noptim.method = adam\n"
                                 "protocol.zero_target_on_truncation = false\nprotocol.tau_discount = 2000\n"));
  CHECK(c.critic.eta == 1e-3);
  CHECK(c.actor.k == 3);
  CHECK(c.optim.method == OptimMethod::adam);
  CHECK_FALSE(c.protocol.zero_target_on_truncation);
  CHECK(c.critic.tau_gamma == 2000.0);
  CHECK_THROWS_AS(apply_profile(c, parse_profile("critic.etaa = 1\n")), ConfigError);
  CHECK_THROWS_AS(apply_profile(c, parse_profile("critic.eta = fast\n")), ConfigError);
  CHECK_THROWS_AS(apply_profile(c, parse_profile("actor.K = -2\n")), ConfigError);
  CHECK_THROWS_AS(apply_profile(c, parse_profile("optim.method = sgd\n")), ConfigError);
}

TEST_CASE("shipped profiles load and validate") {
  const auto def = load_profile("cartpole-default");
  CHECK(def.profile == "cartpole-default");
  CHECK(def.critic.n_e == 40);
  CHECK(def.critic.eta == 2.5e-3);
  CHECK(def.critic.alpha == 2.0);
  CHECK(def.critic.beta == -0.2);
  CHECK(def.actor.n_e == 20);
  CHECK(def.actor.eta == 1e-2);
  CHECK(def.actor.alpha == 25.0);
  CHECK(def.actor.tau_q == 40.0);
  CHECK(def.actor.resample_every == 1);
  CHECK(def.optim.method == OptimMethod::plain);
  CHECK(def.protocol.reward_scale == 0.02);
  CHECK(def.protocol.tau_gamma == 1000.0);

  const auto bio = load_profile("cartpole-bio");
  CHECK(bio.critic.alpha == 20.0);
  CHECK(bio.critic.beta == -1.0);
  CHECK(bio.critic.n_e == 80);
  CHECK(bio.actor.n_e == 40);
  CHECK(bio.actor.c_t == 5e-6);
  CHECK(bio.actor.rho_target == 5e-3);

  const auto lander = load_profile("lander-style");
  CHECK(lander.optim.method == OptimMethod::adam);
  CHECK(lander.optim.beta1 == 0.995);
  CHECK(lander.optim.beta2 == 0.99995);
  CHECK(lander.optim.batch_size == 16);
  CHECK(lander.actor.c_e == 1e-4);
  CHECK(lander.actor.c_w == 1e-8);
  CHECK(lander.neurons_per_feature == 16);
  CHECK(lander.actor.resample_every == 2);

  CHECK_THROWS_AS(load_profile("no-such-profile"), ConfigError);
}

TEST_CASE("format_profile round-trips") {
  auto c = load_profile("cartpole-bio");
  c.actor.c_e = 1.5e-4;
  c.optim.method = OptimMethod::adam;
  RunConfig back;
  apply_profile(back, parse_profile(format_profile(c)));
  CHECK(format_profile(back) == format_profile(c));
  CHECK(back.actor.c_e == 1.5e-4);
}

TEST_CASE("profiles load by path") {
  const auto dir = std::filesystem::temp_directory_path() / "fmstdp_cfg_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "mini.cfg";
  std::ofstream(path) << "critic.N_e = 5\n";
  const auto c = load_profile(path.string());
  CHECK(c.critic.n_e == 5);
  std::filesystem::remove_all(dir);
}

TEST_CASE("run config validation") {
  RunConfig c;
  c.episodes = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RunConfig{};
  c.optim.batch_size = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
