#include "lfm/examples.hpp"

#include <algorithm>
#include <cmath>

#include "lfm/engine.hpp"

namespace lfm {

// Two mutually exclusive modes producing on a shared output, each driven by
// its own timer through a delayed action. Mode One is left by reset (so Two
// restarts its timer from the entry tag) and re-entered by history (so One's
// pending action and timer resume where they stopped).
const char* timing_example_source() {
  return R"(target script;

reactor Modal {
  input next: real
  output out: real

  initial mode One {
    timer T1(100 msec, 750 msec)
    logical action delayed1(500 msec)
    reaction(T1) -> delayed1 {=
      schedule(delayed1, 0);
    =}
    reaction(delayed1) -> out {=
      set(out, 1);
    =}
    reaction(next) -> reset(Two) {=
      set_mode(Two);
    =}
  }

  mode Two {
    timer T2(100 msec, 750 msec)
    logical action delayed2(500 msec)
    reaction(T2) -> delayed2 {=
      schedule(delayed2, 0);
    =}
    reaction(delayed2) -> out {=
      set(out, 2);
    =}
    reaction(next) -> history(One) {=
      set_mode(One);
    =}
  }
}

main reactor {
  timer T(1 sec, 1 sec)
  m = new Modal()
  reaction(T) -> m.next {=
    set(m.next, 1);
  =}
}
)";
}

// Swing-up / catch / stabilize controller for a rotary inverted pendulum,
// wired as a sensor -> controller -> actuator chain. Sensor and actuator are
// native (extern reactions bound to one shared forward-Euler model); the
// control laws are scripts. SwingUp pumps the pendulum energy toward the
// upright level, Catch kills the remaining motion with stiff feedback,
// Stabilize holds the balance with softer gains plus arm damping.
const char* furuta_example_source() {
  return R"(target script;

reactor Sensor {
  output angles: real[4]
  timer sample(0 msec, 5 msec)
  reaction(sample) -> angles extern "furuta_sensor"
}

reactor Actuator {
  input u: real
  reaction(u) extern "furuta_actuator"
}

reactor Controller(
    k_e: real = 30.0,
    u_max: real = 18.0,
    catch_p: real = 140.0,
    catch_d: real = 22.0,
    stab_p: real = 70.0,
    stab_d: real = 14.0,
    arm_d: real = 0.3,
    theta_catch: real = 0.4,
    theta_stab: real = 0.12,
    omega_stab: real = 1.5) {
  input angles: real[4]
  output u: real
  state th: real = 0
  state om: real = 0
  state e: real = 0

  initial mode SwingUp {
    reaction(angles) -> u, reset(Catch) {=
      th = get(angles, 2);
      om = get(angles, 3);
      e = 0.5 * (0.5 * om) * (0.5 * om) + 9.81 * 0.5 * (cos(th) - 1);
      set(u, sat(k_e * e * sign(om * cos(th)), -u_max, u_max));
      if (abs(th) < theta_catch) {
        set_mode(Catch);
      }
    =}
  }

  mode Catch {
    reaction(angles) -> u, reset(Stabilize), reset(SwingUp) {=
      th = get(angles, 2);
      om = get(angles, 3);
      set(u, sat(catch_p * th + catch_d * om, -u_max, u_max));
      if (abs(th) < theta_stab && abs(om) < omega_stab) {
        set_mode(Stabilize);
      }
      if (abs(th) > 2.0 * theta_catch) {
        set_mode(SwingUp);
      }
    =}
  }

  mode Stabilize {
    reaction(angles) -> u {=
      th = get(angles, 2);
      om = get(angles, 3);
      set(u, sat(stab_p * th + stab_d * om - arm_d * get(angles, 1), -u_max, u_max));
    =}
  }
}

main reactor {
  sensor = new Sensor()
  ctrl = new Controller()
  act = new Actuator()
  sensor.angles -> ctrl.angles
  ctrl.u -> act.u
}
)";
}

void FurutaPlant::advance_to(std::int64_t t_ns) {
  while (sim_time_ns < t_ns) {
    const std::int64_t dt_ns = std::min(kStepNs, t_ns - sim_time_ns);
    const double dt = static_cast<double>(dt_ns) * 1e-9;
    const double acc_p = (kGravity / kPendulumLength) * std::sin(theta_p) -
                         (kArmRadius * u / kPendulumLength) * std::cos(theta_p);
    theta_a += omega_a * dt;
    omega_a += u * dt;
    theta_p += omega_p * dt;
    omega_p += acc_p * dt;
    sim_time_ns += dt_ns;
  }
}

std::map<std::string, std::function<void(ReactionContext&)>> furuta_handlers(FurutaPlant* plant) {
  std::map<std::string, std::function<void(ReactionContext&)>> handlers;
  handlers["furuta_sensor"] = [plant](ReactionContext& ctx) {
    plant->advance_to(ctx.now().time_ns);
    ctx.set("angles", 0, plant->theta_a);
    ctx.set("angles", 1, plant->omega_a);
    ctx.set("angles", 2, plant->theta_p);
    ctx.set("angles", 3, plant->omega_p);
  };
  handlers["furuta_actuator"] = [plant](ReactionContext& ctx) {
    plant->advance_to(ctx.now().time_ns);
    plant->u = ctx.get("u");
  };
  return handlers;
}

}  // namespace lfm
