#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "fmstdp/actor.hpp"
#include "fmstdp/cartpole.hpp"
#include "fmstdp/critic.hpp"
#include "fmstdp/lif.hpp"
#include "fmstdp/traces.hpp"

namespace fmstdp {

enum class OptimMethod { plain, adam };

struct OptimConfig {
  OptimMethod method = OptimMethod::plain;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t batch_size = 1;
};

// One network head (critic or actor): rate filter, STDP constants and initial weight scale.
struct HeadConfig {
  double tau_n = 20.0;
  StdpParams stdp;
  double w0 = 1.0;  // weights start i.i.d. uniform on [0, w0]
};

struct RunConfig {
  std::string profile = "custom";
  std::string env = "cartpole";
  std::size_t episodes = 400;
  std::uint64_t seed = 0;
  bool ablate_feedback = false;

  LifParams lif;
  CriticConfig critic;
  HeadConfig critic_head;
  ActorConfig actor;
  HeadConfig actor_head;
  OptimConfig optim;
  std::size_t neurons_per_feature = 1;
  EpisodeProtocol protocol;

  void validate() const;
};

// Flat key/value view of a profile file. Lines are `key = value`; `#` starts a comment.
using ProfileEntries = std::map<std::string, std::string>;

ProfileEntries parse_profile(const std::string& text);
ProfileEntries read_profile_file(const std::filesystem::path& path);

// Applies entries on top of cfg. Unknown keys throw ConfigError.
void apply_profile(RunConfig& cfg, const ProfileEntries& entries);

// Directory holding the shipped *.cfg profiles (FMSTDP_PROFILE_DIR overrides).
std::filesystem::path default_profile_dir();

// Resolves a profile by name (`<dir>/<name>.cfg`) or by path.
RunConfig load_profile(const std::string& name_or_path, const std::filesystem::path& dir = default_profile_dir());

// Serializes every tunable field back to the profile format.
std::string format_profile(const RunConfig& cfg);

}  // namespace fmstdp
