#include "lfm/engine.hpp"

#include <algorithm>
#include <thread>

#include "lfm/modal.hpp"

namespace lfm {

// ---------------------------------------------------------------------------
// ReactionContext
// ---------------------------------------------------------------------------

double ReactionContext::get(const std::string& port, int index) const {
  auto it = reaction_.readable.find(port);
  if (it == reaction_.readable.end()) {
    throw EngineError(reaction_.qualified_name() + ": reads port '" + port +
                      "' that is not a declared trigger or source");
  }
  const PortInstance* p = it->second;
  if (!engine_.port_present(p)) {
    return 0.0;  // absent ports read as zero; guard with is_present()
  }
  if (p->decl->type.is_vector()) {
    const auto* vec = std::get_if<std::vector<double>>(&p->value);
    if (vec == nullptr || index < 0 || index >= static_cast<int>(vec->size())) {
      throw EngineError(reaction_.qualified_name() + ": element index " +
                        std::to_string(index) + " out of range for port '" + port +
                        "' of length " + std::to_string(p->decl->type.vector_length));
    }
    return (*vec)[static_cast<std::size_t>(index)];
  }
  if (index >= 0) {
    throw EngineError(reaction_.qualified_name() + ": scalar port '" + port +
                      "' read with an element index");
  }
  const double* d = std::get_if<double>(&p->value);
  return d != nullptr ? *d : 0.0;
}

bool ReactionContext::is_present(const std::string& name) const {
  auto it = reaction_.presence.find(name);
  if (it == reaction_.presence.end()) {
    throw EngineError(reaction_.qualified_name() + ": is_present('" + name +
                      "') names no declared trigger or source");
  }
  const PresenceRef& ref = it->second;
  if (ref.port != nullptr) {
    return engine_.port_present(ref.port);
  }
  if (ref.timer != nullptr) {
    return engine_.trigger_fired(ref.timer->ordinal);
  }
  if (ref.action != nullptr) {
    return engine_.trigger_fired(ref.action->ordinal);
  }
  return false;
}

double ReactionContext::read_name(const std::string& name) const {
  const ReactorInstance& r = *reaction_.reactor;
  if (auto it = r.state.find(name); it != r.state.end()) {
    return it->second;
  }
  if (auto it = r.real_params.find(name); it != r.real_params.end()) {
    return it->second;
  }
  if (auto it = r.time_params.find(name); it != r.time_params.end()) {
    return static_cast<double>(it->second.nanos) * 1e-9;
  }
  throw EngineError(reaction_.qualified_name() + ": unknown name '" + name + "'");
}

const Duration* ReactionContext::time_param(const std::string& name) const {
  const auto& params = reaction_.reactor->time_params;
  auto it = params.find(name);
  return it == params.end() ? nullptr : &it->second;
}

void ReactionContext::write_state(const std::string& name, double v) {
  auto& state = reaction_.reactor->state;
  auto it = state.find(name);
  if (it == state.end()) {
    throw EngineError(reaction_.qualified_name() + ": assignment to unknown state variable '" +
                      name + "'");
  }
  it->second = v;
}

PortInstance* ReactionContext::writable_port(const std::string& port) const {
  auto it = reaction_.writable.find(port);
  if (it == reaction_.writable.end()) {
    throw EngineError(reaction_.qualified_name() + ": writes port '" + port +
                      "' that is not a declared effect");
  }
  return it->second;
}

void ReactionContext::set(const std::string& port, double v) {
  PortInstance* p = writable_port(port);
  if (p->decl->type.is_vector()) {
    throw EngineError(reaction_.qualified_name() + ": vector port '" + port +
                      "' written without an element index");
  }
  engine_.write_port(p, Value{v});
}

void ReactionContext::set(const std::string& port, int index, double v) {
  PortInstance* p = writable_port(port);
  const int len = p->decl->type.vector_length;
  if (len == 0) {
    throw EngineError(reaction_.qualified_name() + ": scalar port '" + port +
                      "' written with an element index");
  }
  if (index < 0 || index >= len) {
    throw EngineError(reaction_.qualified_name() + ": element index " + std::to_string(index) +
                      " out of range for port '" + port + "' of length " + std::to_string(len));
  }
  engine_.write_port_element(p, index, v);
}

void ReactionContext::schedule(const std::string& action, std::int64_t extra_ns) {
  auto it = reaction_.schedulable.find(action);
  if (it == reaction_.schedulable.end()) {
    throw EngineError(reaction_.qualified_name() + ": schedules action '" + action +
                      "' that is not a declared effect");
  }
  engine_.schedule_action(it->second, extra_ns, Value{});
}

void ReactionContext::set_mode(const std::string& mode) {
  auto it = reaction_.mode_targets.find(mode);
  if (it == reaction_.mode_targets.end()) {
    throw EngineError(reaction_.qualified_name() + ": switches to mode '" + mode +
                      "' that is not a declared effect");
  }
  engine_.request_mode(reaction_, it->second);
}

Tag ReactionContext::now() const { return engine_.now(); }

double ReactionContext::time_seconds() const {
  return static_cast<double>(engine_.now().time_ns) * 1e-9;
}

void* ReactionContext::user_data() const { return engine_.user_data_; }

// ---------------------------------------------------------------------------
// Native binding
// ---------------------------------------------------------------------------

DiagList bind_natives(InstanceTree& tree,
                      const std::map<std::string, std::function<void(ReactionContext&)>>& handlers) {
  DiagList diags;
  for (ReactionInstance* r : tree.reactions) {
    if (r->decl->native_key.empty()) {
      continue;
    }
    auto it = handlers.find(r->decl->native_key);
    if (it == handlers.end()) {
      diags.error("NATIVE_UNBOUND",
                  r->qualified_name() + ": no handler registered for extern \"" +
                      r->decl->native_key + "\"",
                  r->decl->pos);
      continue;
    }
    r->native = it->second;
  }
  return diags;
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

void Engine::enqueue(Event e) {
  // One event per trigger per tag: rescheduling replaces the payload.
  queue[QueueKey{e.tag, e.ordinal}] = std::move(e);
}

void Engine::seed_initial_events() {
  // The program-start trigger owns ordinal 0, so it pops first at (0,0).
  Event start;
  start.tag = Tag{0, 0};
  start.ordinal = tree_.startup_ordinal;
  start.is_global_startup = true;
  enqueue(start);

  // Timers fire first at (offset, 0). Timers of initially inactive modes are
  // parked in the suspended store as if they had been swept at program start.
  for (TimerInstance* t : tree_.timers) {
    Event e;
    e.tag = Tag{t->decl->offset.nanos, 0};
    e.ordinal = t->ordinal;
    e.timer = t;
    e.mode = t->mode;
    if (is_active(t->mode)) {
      enqueue(e);
    } else {
      e.suspend_tag = Tag{0, 0};
      suspended.push_back(std::move(e));
    }
  }
}

Trace Engine::run(Duration stop, RunMode mode) {
  run_mode_ = mode;
  run_start_ = std::chrono::steady_clock::now();
  now_ = Tag{0, 0};
  last_processed_ = Tag{-1, 0};
  shutdown_phase_ = false;
  seed_initial_events();

  const std::int64_t stop_ns = stop.nanos;
  std::uint64_t last_microstep_at_stop = 0;

  for (;;) {
    drain_inbox();
    if (queue.empty()) {
      // In realtime mode an empty queue just means no logical work yet;
      // physical actions may still arrive until the stop time passes.
      if (run_mode_ == RunMode::Realtime && physical_now_ns() < stop_ns) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
        continue;
      }
      break;
    }
    const Tag tau = queue.begin()->first.first;
    if (tau.time_ns > stop_ns) {
      // Realtime keeps accepting physical actions until the stop time passes,
      // even when all queued work lies beyond it.
      if (run_mode_ == RunMode::Realtime && physical_now_ns() < stop_ns) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
        continue;
      }
      break;
    }
    wait_for(tau);
    tick(tau);
    if (tau.time_ns == stop_ns) {
      last_microstep_at_stop = std::max(last_microstep_at_stop, tau.microstep);
    }
    last_processed_ = tau;
  }

  // Shutdown sweep one microstep past the last tag processed at the stop
  // time. Modal scopes participate iff they ever became active.
  const Tag final_tag{stop_ns, last_microstep_at_stop + 1};
  now_ = final_tag;
  shutdown_phase_ = true;
  wait_for(final_tag);
  fired_.clear();
  pending_.clear();
  queued_or_done_.clear();
  for (ReactionInstance* r : tree_.reactions) {
    if (!r->has_shutdown) {
      continue;
    }
    if (r->mode != nullptr && !r->mode->had_startup) {
      continue;
    }
    trigger_reaction(r, "shutdown");
  }
  execute_pending();
  emit_outputs(final_tag);

  TraceRecord rec;
  rec.tag = final_tag;
  rec.kind = TraceKind::Shutdown;
  rec.qualified_name = tree_.main->qualified_name;
  rec.detail = "mode=-";
  trace.add(std::move(rec));
  return std::move(trace);
}

void Engine::tick(Tag tau) {
  now_ = tau;
  fired_.clear();
  pending_.clear();
  queued_or_done_.clear();
  pop_events(tau);
  execute_pending();
  emit_outputs(tau);
  process_transitions(*this);
}

void Engine::pop_events(Tag tau) {
  std::vector<Event> popped;
  while (!queue.empty() && queue.begin()->first.first == tau) {
    popped.push_back(std::move(queue.begin()->second));
    queue.erase(queue.begin());
  }
  for (const Event& e : popped) {
    dispatch_event(e);
  }
}

void Engine::dispatch_event(const Event& e) {
  if (e.is_global_startup) {
    run_global_startup();
    return;
  }
  if (e.timer != nullptr) {
    fired_.insert(e.ordinal);
    TraceRecord rec;
    rec.tag = now_;
    rec.kind = TraceKind::Timer;
    rec.qualified_name = e.timer->reactor->qualified_name;
    rec.detail = "name=" + e.timer->decl->name;
    trace.add(std::move(rec));
    for (ReactionInstance* r : e.timer->reactions) {
      if (is_active(r->mode)) {
        trigger_reaction(r, nullptr);
      }
    }
    if (e.timer->decl->period.nanos > 0) {
      Event next;
      next.tag = shift(now_, Tag{e.timer->decl->period.nanos, 0});
      next.ordinal = e.ordinal;
      next.timer = e.timer;
      next.mode = e.mode;
      enqueue(std::move(next));
    }
    return;
  }
  if (e.action != nullptr) {
    fired_.insert(e.ordinal);
    TraceRecord rec;
    rec.tag = now_;
    rec.kind = TraceKind::Action;
    rec.qualified_name = e.action->reactor->qualified_name;
    rec.detail = "name=" + e.action->decl->name;
    trace.add(std::move(rec));
    for (ReactionInstance* r : e.action->reactions) {
      if (is_active(r->mode)) {
        trigger_reaction(r, nullptr);
      }
    }
    return;
  }
  if (e.connection != nullptr) {
    // Delayed delivery: the destination sees the value snapshot taken when
    // the source side was written.
    write_port(e.connection->to, e.payload);
    return;
  }
  if (e.special_mode != nullptr) {
    ModeInstance* m = e.special_mode;
    TraceRecord rec;
    rec.tag = now_;
    rec.kind = e.is_reset_trigger ? TraceKind::Reset : TraceKind::Startup;
    rec.qualified_name = m->reactor->qualified_name;
    rec.detail = "mode=" + m->name();
    trace.add(std::move(rec));
    const auto& reactions = e.is_reset_trigger ? m->reset_reactions : m->startup_reactions;
    const char* cause = e.is_reset_trigger ? "reset" : "startup";
    for (ReactionInstance* r : reactions) {
      if (is_active(r->mode)) {
        trigger_reaction(r, cause);
      }
    }
    return;
  }
}

void Engine::run_global_startup() {
  TraceRecord rec;
  rec.tag = Tag{0, 0};
  rec.kind = TraceKind::Startup;
  rec.qualified_name = tree_.main->qualified_name;
  rec.detail = "mode=-";
  trace.add(std::move(rec));

  // Initially active modes have been alive since program start: they start
  // up here rather than via a deferred trigger.
  for (ModeInstance* m : tree_.modes) {
    if (is_active(m)) {
      m->had_startup = true;
      TraceRecord mrec;
      mrec.tag = Tag{0, 0};
      mrec.kind = TraceKind::Startup;
      mrec.qualified_name = m->reactor->qualified_name;
      mrec.detail = "mode=" + m->name();
      trace.add(std::move(mrec));
    }
  }
  for (ReactionInstance* r : tree_.reactions) {
    if (r->has_startup && is_active(r->mode)) {
      trigger_reaction(r, "startup");
    }
  }
}

void Engine::trigger_reaction(ReactionInstance* r, const char* special_cause) {
  PendingKey key{r->level, r->qualified_name(), r->decl->index};
  if (queued_or_done_.count(r) > 0) {
    // Already queued (or executed): at most note an additional special cause
    // so the via= list stays faithful.
    if (special_cause != nullptr) {
      auto it = pending_.find(key);
      if (it != pending_.end()) {
        it->second.second.insert(special_cause);
      }
    }
    return;
  }
  queued_or_done_.insert(r);
  auto& entry = pending_[key];
  entry.first = r;
  if (special_cause != nullptr) {
    entry.second.insert(special_cause);
  }
}

void Engine::execute_pending() {
  while (!pending_.empty()) {
    auto it = pending_.begin();
    ReactionInstance* r = it->second.first;
    std::set<std::string> specials = std::move(it->second.second);
    pending_.erase(it);
    execute_reaction(r, specials);
  }
}

void Engine::execute_reaction(ReactionInstance* r, const std::set<std::string>& specials) {
  // via= lists the declared triggers that are present, in declaration order.
  std::string via;
  for (const TriggerRef& t : r->decl->triggers) {
    bool present = false;
    std::string name;
    switch (t.kind) {
      case TriggerKind::Startup:
        present = specials.count("startup") > 0;
        name = "startup";
        break;
      case TriggerKind::Shutdown:
        present = specials.count("shutdown") > 0;
        name = "shutdown";
        break;
      case TriggerKind::Reset:
        present = specials.count("reset") > 0;
        name = "reset";
        break;
      default: {
        name = t.name.text();
        auto it = r->presence.find(name);
        if (it != r->presence.end()) {
          const PresenceRef& ref = it->second;
          if (ref.port != nullptr) {
            present = port_present(ref.port);
          } else if (ref.timer != nullptr) {
            present = trigger_fired(ref.timer->ordinal);
          } else if (ref.action != nullptr) {
            present = trigger_fired(ref.action->ordinal);
          }
        }
        break;
      }
    }
    if (present) {
      if (!via.empty()) {
        via += ',';
      }
      via += name;
    }
  }

  TraceRecord rec;
  rec.tag = now_;
  rec.kind = TraceKind::Reaction;
  rec.qualified_name = r->qualified_name();
  rec.detail = "n=" + std::to_string(r->decl->index) +
               " mode=" + (r->mode != nullptr ? r->mode->name() : std::string("-")) +
               " via=" + via;
  trace.add(std::move(rec));

  ReactionContext ctx(*this, *r);
  if (r->native) {
    r->native(ctx);
  } else if (r->decl->script != nullptr) {
    eval_reaction(*r->decl->script, ctx);
  }
}

void Engine::emit_outputs(Tag tau) {
  // Final values only: one record per output port (per element for vectors)
  // per tag, emitted after all reactions at the tag have run.
  for (PortInstance* p : tree_.ports) {
    if (p->decl->direction != PortDirection::Output || !(p->value_tag == tau)) {
      continue;
    }
    const std::string& qname = p->reactor->qualified_name;
    if (p->decl->type.is_vector()) {
      const auto* vec = std::get_if<std::vector<double>>(&p->value);
      if (vec == nullptr) {
        continue;
      }
      for (std::size_t i = 0; i < vec->size(); ++i) {
        TraceRecord rec;
        rec.tag = tau;
        rec.kind = TraceKind::Output;
        rec.qualified_name = qname;
        rec.csv_port = p->decl->name + "[" + std::to_string(i) + "]";
        rec.csv_value = (*vec)[i];
        rec.detail = "port=" + rec.csv_port + " value=" + format_real(rec.csv_value);
        trace.add(std::move(rec));
      }
    } else {
      const double* d = std::get_if<double>(&p->value);
      TraceRecord rec;
      rec.tag = tau;
      rec.kind = TraceKind::Output;
      rec.qualified_name = qname;
      rec.csv_port = p->decl->name;
      rec.csv_value = d != nullptr ? *d : 0.0;
      rec.detail = "port=" + rec.csv_port + " value=" + format_real(rec.csv_value);
      trace.add(std::move(rec));
    }
  }
}

void Engine::write_port(PortInstance* port, const Value& v) {
  port->value = v;
  propagate_port(port);
}

void Engine::write_port_element(PortInstance* port, int index, double v) {
  // The first element write at a tag starts from a zero-filled vector.
  auto* vec = std::get_if<std::vector<double>>(&port->value);
  if (!(port->value_tag == now_) || vec == nullptr) {
    port->value = std::vector<double>(static_cast<std::size_t>(port->decl->type.vector_length), 0.0);
    vec = &std::get<std::vector<double>>(port->value);
  }
  (*vec)[static_cast<std::size_t>(index)] = v;
  propagate_port(port);
}

void Engine::propagate_port(PortInstance* port) {
  port->value_tag = now_;
  for (ReactionInstance* r : port->reactions) {
    if (is_active(r->mode)) {
      trigger_reaction(r, nullptr);
    }
  }
  for (ConnectionInstance* c : port->outgoing) {
    if (!is_active(c->mode)) {
      continue;
    }
    if (c->has_delay) {
      Event e;
      e.tag = shift(now_, Tag{c->delay.nanos, 0});
      e.ordinal = c->ordinal;
      e.connection = c;
      e.mode = c->mode;
      e.payload = port->value;
      enqueue(std::move(e));
    } else {
      c->to->value = port->value;
      propagate_port(c->to);
    }
  }
}

void Engine::schedule_action(ActionInstance* action, std::int64_t extra_ns, Value payload) {
  if (action->decl->kind == ActionKind::Physical) {
    throw EngineError(action->reactor->qualified_name + ": physical action '" +
                      action->decl->name + "' cannot be scheduled from a reaction");
  }
  if (extra_ns < 0) {
    throw EngineError(action->reactor->qualified_name + ": negative delay scheduling action '" +
                      action->decl->name + "'");
  }
  Event e;
  e.tag = shift(now_, Tag{action->decl->min_delay.nanos + extra_ns, 0});
  e.ordinal = action->ordinal;
  e.action = action;
  e.mode = action->mode;
  e.payload = std::move(payload);
  enqueue(std::move(e));
}

void Engine::request_mode(ReactionInstance& reaction, const ModeEffect& effect) {
  if (shutdown_phase_) {
    throw EngineError(reaction.qualified_name() + ": mode switches are not allowed at shutdown");
  }
  // Within one tag the last writer in execution order wins.
  ReactorInstance* r = effect.target->reactor;
  r->next_mode = effect.target;
  r->transition =
      effect.kind == TransitionKind::Reset ? Transition::Reset : Transition::History;
}

void Engine::inject_physical(ActionInstance* action, Value payload) {
  if (action->decl->kind != ActionKind::Physical) {
    throw EngineError(action->reactor->qualified_name + ": logical action '" + action->decl->name +
                      "' cannot be injected from outside; schedule it from a reaction");
  }
  std::lock_guard<std::mutex> lock(inbox_mutex_);
  inbox_.emplace_back(action, std::move(payload));
}

void Engine::drain_inbox() {
  std::vector<std::pair<ActionInstance*, Value>> batch;
  {
    std::lock_guard<std::mutex> lock(inbox_mutex_);
    batch.swap(inbox_);
  }
  for (auto& [action, payload] : batch) {
    // Tag with the physical clock, but never earlier than work already done:
    // a stale clock falls back to one microstep past the last processed tag.
    const std::int64_t phys = physical_now_ns();
    Event e;
    e.tag = phys > last_processed_.time_ns ? Tag{phys, 0}
                                           : Tag{last_processed_.time_ns, last_processed_.microstep + 1};
    e.ordinal = action->ordinal;
    e.action = action;
    e.mode = action->mode;
    e.payload = std::move(payload);
    enqueue(std::move(e));
  }
}

void Engine::wait_for(Tag tau) {
  if (run_mode_ != RunMode::Realtime) {
    return;
  }
  std::this_thread::sleep_until(run_start_ + std::chrono::nanoseconds(tau.time_ns));
}

std::int64_t Engine::physical_now_ns() const {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                              run_start_)
      .count();
}

}  // namespace lfm
