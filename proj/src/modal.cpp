#include "lfm/modal.hpp"

#include <set>
#include <vector>

#include "lfm/engine.hpp"

namespace lfm {

bool is_active(const ModeInstance* mode) {
  while (mode != nullptr) {
    if (mode->reactor->current_mode != mode) {
      return false;
    }
    mode = mode->reactor->enclosing_mode;
  }
  return true;
}

namespace {

std::vector<Event> extract_queue_events_of(Engine& eng, const ModeInstance* mode) {
  std::vector<Event> out;
  for (auto it = eng.queue.begin(); it != eng.queue.end();) {
    if (it->second.mode == mode) {
      out.push_back(std::move(it->second));
      it = eng.queue.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

std::vector<Event> extract_suspended_events_of(Engine& eng, const ModeInstance* mode) {
  std::vector<Event> out;
  for (auto it = eng.suspended.begin(); it != eng.suspended.end();) {
    if (it->mode == mode) {
      out.push_back(std::move(*it));
      it = eng.suspended.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

/// A reset entry restores every reset-marked state variable whose innermost
/// enclosing mode is the entered one (this covers nested non-modal reactors).
void restore_reset_state(InstanceTree& tree, const ModeInstance* m) {
  for (ReactorInstance* r : tree.reactors) {
    for (const StateVarDecl& s : r->cls->state_vars) {
      if (!s.reset_marked) {
        continue;
      }
      const ModeInstance* scope =
          s.mode_index >= 0 ? r->modes[static_cast<std::size_t>(s.mode_index)].get()
                            : r->enclosing_mode;
      if (scope == m) {
        r->state[s.name] = s.initial;
      }
    }
  }
}

}  // namespace

void process_transitions(Engine& eng) {
  InstanceTree& tree = eng.tree();
  const Tag tau = eng.now();

  // Pass 1 (cascade): a reset transition anywhere in a reactor forces every
  // modal reactor living inside any of its modes back to its initial mode.
  // Pre-order guarantees ancestors are final before descendants are checked,
  // so one sweep settles arbitrarily deep nesting.
  std::set<const ReactorInstance*> cascaded;
  for (ReactorInstance* r : tree.reactors) {
    if (!r->is_modal()) {
      continue;
    }
    const ModeInstance* enclosing = r->enclosing_mode;
    if (enclosing != nullptr && enclosing->reactor->transition == Transition::Reset) {
      r->next_mode = r->initial_mode;
      r->transition = Transition::Reset;
      cascaded.insert(r);
    }
  }

  // Pass 2 (switch): apply every pending transition top-down.
  for (ReactorInstance* r : tree.reactors) {
    if (r->transition == Transition::None) {
      continue;
    }
    ModeInstance* target = r->next_mode;
    const Transition kind = r->transition;

    if (kind == Transition::Reset) {
      // Restart scope: the entered mode — or, for a cascaded reset, the whole
      // reactor, since the reactor as such is being re-initialized and must
      // not keep history in any of its modes. Events of the entered mode may
      // sit in the suspended store (normal entry) or still in the live queue
      // (re-entry of the active mode), so both are swept.
      std::vector<const ModeInstance*> scope;
      if (cascaded.count(r) > 0) {
        for (const auto& m : r->modes) {
          scope.push_back(m.get());
        }
      } else {
        scope.push_back(target);
      }
      for (const ModeInstance* m : scope) {
        extract_suspended_events_of(eng, m);
        extract_queue_events_of(eng, m);
      }
      // Every timer of the restarted scope awaits its initial offset again,
      // whether its old event was suspended, still queued, or already spent
      // (a fire-once timer fires once more). This reproduces the scope's
      // from-start schedule relative to the entry tag.
      std::set<const ModeInstance*> in_scope(scope.begin(), scope.end());
      for (TimerInstance* t : tree.timers) {
        if (in_scope.count(t->mode) == 0) {
          continue;
        }
        Event fresh;
        fresh.tag = shift(tau, Tag{t->decl->offset.nanos, 0});
        fresh.ordinal = t->ordinal;
        fresh.timer = t;
        fresh.mode = t->mode;
        eng.enqueue(std::move(fresh));
      }
    } else {
      // History: stored events resume shifted by exactly the time the event
      // spent suspended; re-entering the still-active mode leaves live queue
      // events untouched (suspend immediately followed by resume is the
      // identity).
      for (const Event& e : extract_suspended_events_of(eng, target)) {
        Event back = e;
        back.tag = shift(tau, tag_delta(e.tag, e.suspend_tag));
        back.suspend_tag = Tag{0, 0};
        eng.enqueue(std::move(back));
      }
    }

    if (kind == Transition::Reset) {
      target->reset_pending = true;
    }
    ModeInstance* from = r->current_mode;
    from->leave_time = tau;

    TraceRecord rec;
    rec.tag = tau;
    rec.kind = TraceKind::ModeSwitch;
    rec.qualified_name = r->qualified_name;
    rec.detail = "from=" + from->name() + " to=" + target->name() +
                 " kind=" + (kind == Transition::Reset ? "reset" : "history");
    eng.trace.add(std::move(rec));

    r->current_mode = target;
    r->next_mode = nullptr;
    r->transition = Transition::None;
  }

  // Pass 2b (deep resume): after all switches, any stored event whose whole
  // mode chain is active again resumes. This is how nested modal reactors
  // preserved across an ancestor's history entry get their events back.
  {
    std::vector<Event> resume;
    for (auto it = eng.suspended.begin(); it != eng.suspended.end();) {
      if (is_active(it->mode)) {
        resume.push_back(std::move(*it));
        it = eng.suspended.erase(it);
      } else {
        ++it;
      }
    }
    for (const Event& e : resume) {
      Event back = e;
      back.tag = shift(tau, tag_delta(e.tag, e.suspend_tag));
      back.suspend_tag = Tag{0, 0};
      eng.enqueue(std::move(back));
    }
  }

  // Pass 3 (activation triggers): newly active modes start up, freshly reset
  // modes get their reset trigger, both one microstep later. Reset-marked
  // state restores immediately so the very next reactions already see it.
  for (ReactorInstance* r : tree.reactors) {
    if (!r->is_modal()) {
      continue;
    }
    ModeInstance* m = r->current_mode;
    if (!is_active(m)) {
      continue;
    }
    if (!m->had_startup) {
      m->had_startup = true;
      Event e;
      e.tag = shift(tau, Tag{0, 0});
      e.ordinal = m->startup_ordinal;
      e.special_mode = m;
      e.mode = m;
      eng.enqueue(std::move(e));
    }
    if (m->reset_pending) {
      m->reset_pending = false;
      Event e;
      e.tag = shift(tau, Tag{0, 0});
      e.ordinal = m->reset_ordinal;
      e.special_mode = m;
      e.is_reset_trigger = true;
      e.mode = m;
      eng.enqueue(std::move(e));
      restore_reset_state(tree, m);
    }
  }

  // Pass 4 (sweep): live events whose scope went inactive are parked in the
  // suspended store, stamped with the tag at which they stopped ticking.
  for (auto it = eng.queue.begin(); it != eng.queue.end();) {
    if (!is_active(it->second.mode)) {
      Event e = std::move(it->second);
      e.suspend_tag = tau;
      eng.suspended.push_back(std::move(e));
      it = eng.queue.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace lfm
