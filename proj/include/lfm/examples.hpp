#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

namespace lfm {

class ReactionContext;

/// Bundled programs: `timing` (the modal local-time showcase) and `furuta`
/// (inverted-pendulum swing-up with a native forward-Euler plant).
const char* timing_example_source();
const char* furuta_example_source();

/// Rotary inverted pendulum integrated by forward Euler at a fixed 1 msec
/// step. State: arm angle/velocity and pendulum angle (from upright, so 0 is
/// the balanced position) with its velocity. The commanded arm acceleration
/// is held between samples (zero-order hold).
struct FurutaPlant {
  double theta_a{0.0};
  double omega_a{0.0};
  double theta_p{3.0};  // starts hanging nearly straight down
  double omega_p{0.0};
  double u{0.0};
  std::int64_t sim_time_ns{0};

  static constexpr double kGravity = 9.81;
  static constexpr double kPendulumLength = 0.5;
  static constexpr double kArmRadius = 0.5;
  static constexpr std::int64_t kStepNs = 1'000'000;  // 1 msec Euler step

  void advance_to(std::int64_t t_ns);
};

/// Handlers for the furuta program's extern reactions, bound to `plant`
/// (which must outlive the engine): "furuta_sensor" advances the plant to
/// the current tag and publishes the state vector, "furuta_actuator" latches
/// the commanded arm acceleration for the next integration window.
std::map<std::string, std::function<void(ReactionContext&)>> furuta_handlers(FurutaPlant* plant);

}  // namespace lfm
