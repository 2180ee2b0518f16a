#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lfm/instance.hpp"
#include "lfm/trace.hpp"

namespace lfm {

/// Raised on conditions the runtime treats as fatal: writing an undeclared
/// effect, scheduling a physical action from a reaction, vector index out of
/// range, unbound native handler.
class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A queued occurrence. Exactly one of timer/action/connection/special_mode/
/// global_startup identifies the trigger; `mode` is the innermost enclosing
/// mode governing suspension, and `suspend_tag` records when the event was
/// moved into the suspended store.
struct Event {
  Tag tag;
  int ordinal{0};
  TimerInstance* timer{nullptr};
  ActionInstance* action{nullptr};
  ConnectionInstance* connection{nullptr};
  ModeInstance* special_mode{nullptr};
  bool is_reset_trigger{false};
  bool is_global_startup{false};
  ModeInstance* mode{nullptr};
  Value payload;
  Tag suspend_tag{};
};

/// Key (tag, trigger ordinal): total order, at most one event per trigger
/// per tag, and pop order independent of insertion order.
using QueueKey = std::pair<Tag, int>;
using EventQueue = std::map<QueueKey, Event>;

enum class RunMode { Fast, Realtime };

class Engine;

/// Facade handed to reaction bodies (interpreted scripts and bound native
/// handlers). All side effects flow through here, which is where the runtime
/// re-checks the declared signature.
class ReactionContext {
 public:
  ReactionContext(Engine& engine, ReactionInstance& reaction)
      : engine_(engine), reaction_(reaction) {}

  [[nodiscard]] double get(const std::string& port, int index = -1) const;
  [[nodiscard]] bool is_present(const std::string& name) const;
  [[nodiscard]] double read_name(const std::string& name) const;  // state or parameter
  /// Exact nanoseconds when `name` is a time parameter.
  [[nodiscard]] const Duration* time_param(const std::string& name) const;
  void write_state(const std::string& name, double v);

  void set(const std::string& port, double v);
  void set(const std::string& port, int index, double v);
  void schedule(const std::string& action, std::int64_t extra_ns);
  void set_mode(const std::string& mode);

  [[nodiscard]] Tag now() const;
  [[nodiscard]] double time_seconds() const;
  [[nodiscard]] ReactionInstance& reaction() { return reaction_; }
  /// Embedder-owned object shared with native handlers (e.g. a plant model).
  [[nodiscard]] void* user_data() const;

 private:
  PortInstance* writable_port(const std::string& port) const;
  Engine& engine_;
  ReactionInstance& reaction_;
};

/// Executes an interpreted reaction body against the context.
void eval_reaction(const Script& script, ReactionContext& ctx);

/// Binds `extern "<key>"` reactions to registered handlers; reports any
/// reaction whose key has no handler.
DiagList bind_natives(InstanceTree& tree,
                      const std::map<std::string, std::function<void(ReactionContext&)>>& handlers);

/// Single-threaded deterministic executor. `inject_physical` is the only
/// entry point that may be called from other threads.
class Engine {
 public:
  explicit Engine(InstanceTree tree) : tree_(std::move(tree)) {}

  /// Runs startup, ticks until the earliest tag passes `stop`, then performs
  /// the shutdown sweep at (stop, last microstep at stop + 1).
  Trace run(Duration stop, RunMode mode = RunMode::Fast);

  /// Thread-safe: enqueues a physical action occurrence. The event is tagged
  /// when the engine drains its inbox: with current physical time, or one
  /// microstep after the last processed tag if the clock reads stale.
  void inject_physical(ActionInstance* action, Value payload);

  [[nodiscard]] InstanceTree& tree() { return tree_; }
  void set_user_data(void* p) { user_data_ = p; }

  // --- internals shared with transition processing and the context ---
  [[nodiscard]] Tag now() const { return now_; }
  void enqueue(Event e);
  void write_port(PortInstance* port, const Value& v);
  void write_port_element(PortInstance* port, int index, double v);
  void schedule_action(ActionInstance* action, std::int64_t extra_ns, Value payload);
  void request_mode(ReactionInstance& reaction, const ModeEffect& effect);
  [[nodiscard]] bool trigger_fired(int ordinal) const { return fired_.count(ordinal) > 0; }
  [[nodiscard]] bool port_present(const PortInstance* p) const { return p->value_tag == now_; }

  EventQueue queue;
  std::vector<Event> suspended;
  Trace trace;
  void* user_data_{nullptr};

 private:
  friend void process_transitions(Engine&);

  struct PendingKey {
    int level;
    std::string qname;
    int index;
    bool operator<(const PendingKey& o) const {
      if (level != o.level) return level < o.level;
      if (qname != o.qname) return qname < o.qname;
      return index < o.index;
    }
  };

  void seed_initial_events();
  void drain_inbox();
  void tick(Tag tau);
  void pop_events(Tag tau);
  void dispatch_event(const Event& e);
  void trigger_reaction(ReactionInstance* r, const char* special_cause);
  void execute_pending();
  void execute_reaction(ReactionInstance* r, const std::set<std::string>& specials);
  void run_global_startup();
  void emit_outputs(Tag tau);
  void propagate_port(PortInstance* port);
  void wait_for(Tag tau);
  [[nodiscard]] std::int64_t physical_now_ns() const;

  InstanceTree tree_;
  Tag now_{0, 0};
  Tag last_processed_{-1, 0};
  bool shutdown_phase_{false};
  RunMode run_mode_{RunMode::Fast};
  std::chrono::steady_clock::time_point run_start_{};

  std::set<int> fired_;
  std::map<PendingKey, std::pair<ReactionInstance*, std::set<std::string>>> pending_;
  std::set<ReactionInstance*> queued_or_done_;

  std::mutex inbox_mutex_;
  std::vector<std::pair<ActionInstance*, Value>> inbox_;
};

}  // namespace lfm
