#pragma once

#include <stdexcept>
#include <string>

namespace fmstdp {

// Non-finite voltage, current or weight inside the simulation.
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched dimensions or invalid parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Feature value outside [0, 1] handed to the spike coder.
class EncodingFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Environment used outside its episode protocol (e.g. stepping a finished episode).
class ProtocolFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fmstdp
