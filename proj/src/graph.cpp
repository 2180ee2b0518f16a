#include "lfm/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

namespace lfm {

namespace {

/// Mode chain of a scope, innermost first, as (reactor, mode) pairs.
std::vector<std::pair<const ReactorInstance*, const ModeInstance*>> mode_chain(
    const ModeInstance* mode) {
  std::vector<std::pair<const ReactorInstance*, const ModeInstance*>> chain;
  while (mode != nullptr) {
    chain.emplace_back(mode->reactor, mode);
    mode = mode->reactor->enclosing_mode;
  }
  return chain;
}

std::string display_port(const PortInstance* p, const std::string& root) {
  std::string q = p->qualified_name();
  const std::string prefix = root + ".";
  if (q.rfind(prefix, 0) == 0) {
    return q.substr(prefix.size());
  }
  return q;
}

}  // namespace

bool mutually_exclusive(const ModeInstance* a, const ModeInstance* b) {
  if (a == nullptr || b == nullptr) {
    return false;
  }
  auto chain_a = mode_chain(a);
  for (const auto& [reactor_b, mode_b] : mode_chain(b)) {
    for (const auto& [reactor_a, mode_a] : chain_a) {
      if (reactor_a == reactor_b) {
        if (mode_a != mode_b) {
          return true;
        }
        // Same mode of the shared reactor: the rest of both chains is the
        // common ancestry, never exclusive.
        break;
      }
    }
  }
  return false;
}

bool mutually_exclusive(const ReactionInstance& a, const ReactionInstance& b) {
  return mutually_exclusive(a.mode, b.mode);
}

namespace {

struct Edge {
  int from{0};
  int to{0};
  const PortInstance* from_port{nullptr};  // null for intra-reactor precedence
  const PortInstance* to_port{nullptr};
};

class Analysis {
 public:
  explicit Analysis(InstanceTree& tree) : tree_(tree) {}

  DiagList run() {
    index_reactions();
    check_multi_writer();
    check_port_cycles();
    if (!diags_.has("CAUSALITY")) {
      build_edges();
      assign_levels();
    }
    return std::move(diags_);
  }

 private:
  void index_reactions() {
    for (std::size_t i = 0; i < tree_.reactions.size(); ++i) {
      index_[tree_.reactions[i]] = static_cast<int>(i);
    }
  }

  // Ports reachable from `start` through zero or more non-delayed
  // connections, including `start` itself.
  std::vector<const PortInstance*> closure(const PortInstance* start) const {
    std::vector<const PortInstance*> out{start};
    std::set<const PortInstance*> seen{start};
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (const ConnectionInstance* c : out[i]->outgoing) {
        if (c->has_delay) {
          continue;
        }
        if (seen.insert(c->to).second) {
          out.push_back(c->to);
        }
      }
    }
    return out;
  }

  void check_multi_writer() {
    // Writer of a port: a reaction listing it as effect, or a connection
    // targeting it. Multiple writers are legal only if pairwise exclusive.
    struct Writer {
      const ModeInstance* mode;
      std::string label;
    };
    std::map<const PortInstance*, std::vector<Writer>> writers;
    for (const ReactionInstance* r : tree_.reactions) {
      for (const PortInstance* p : r->effect_ports) {
        writers[p].push_back({r->mode, r->qualified_name() + " reaction " +
                                           std::to_string(r->decl->index)});
      }
    }
    for (const ConnectionInstance* c : tree_.connections) {
      writers[c->to].push_back({c->mode, "connection from " + c->from->qualified_name()});
    }
    // Deterministic port order for diagnostics.
    for (const PortInstance* p : tree_.ports) {
      auto it = writers.find(p);
      if (it == writers.end() || it->second.size() < 2) {
        continue;
      }
      const auto& ws = it->second;
      bool all_exclusive = true;
      for (std::size_t i = 0; i < ws.size() && all_exclusive; ++i) {
        for (std::size_t j = i + 1; j < ws.size() && all_exclusive; ++j) {
          if (!mutually_exclusive(ws[i].mode, ws[j].mode)) {
            all_exclusive = false;
          }
        }
      }
      if (!all_exclusive) {
        std::string list;
        for (std::size_t i = 0; i < ws.size(); ++i) {
          if (i > 0) {
            list += ", ";
          }
          list += ws[i].label;
        }
        diags_.error("MULTIWRITER", "port " + p->qualified_name() + " fed by " + list);
      }
    }
  }

  // Pure pass-through loops carry no reaction, so Kahn over reactions cannot
  // see them — but value propagation at runtime would ring forever. They are
  // causality cycles all the same.
  void check_port_cycles() {
    std::map<const PortInstance*, int> color;  // 0 new, 1 on path, 2 done
    std::vector<const PortInstance*> path;
    for (const PortInstance* p : tree_.ports) {
      if (color[p] == 0 && dfs_port(p, color, path)) {
        return;  // report the first cycle only
      }
    }
  }

  bool dfs_port(const PortInstance* p, std::map<const PortInstance*, int>& color,
                std::vector<const PortInstance*>& path) {
    color[p] = 1;
    path.push_back(p);
    for (const ConnectionInstance* c : p->outgoing) {
      if (c->has_delay) {
        continue;
      }
      const PortInstance* q = c->to;
      const int col = color[q];
      if (col == 0) {
        if (dfs_port(q, color, path)) {
          return true;
        }
      } else if (col == 1) {
        const std::string root = tree_.main->qualified_name;
        std::string text;
        auto it = std::find(path.begin(), path.end(), q);
        for (; it != path.end(); ++it) {
          if (!text.empty()) {
            text += " -- ";
          }
          text += display_port(*it, root);
        }
        text += " -- " + display_port(q, root);
        diags_.error("CAUSALITY", text);
        return true;
      }
    }
    path.pop_back();
    color[p] = 2;
    return false;
  }

  void add_edge(const ReactionInstance* from, const ReactionInstance* to,
                const PortInstance* from_port, const PortInstance* to_port) {
    if (mutually_exclusive(*from, *to)) {
      return;  // pruned: the pair can never co-execute
    }
    edges_.push_back({index_.at(from), index_.at(to), from_port, to_port});
  }

  void build_edges() {
    // Intra-reactor precedence by declaration index. Exclusive pairs are
    // pruned, so later reactions additionally link to every earlier
    // non-exclusive one to keep declaration order enforced across gaps.
    for (const ReactorInstance* reactor : tree_.reactors) {
      const auto& rs = reactor->reactions;
      for (std::size_t i = 0; i < rs.size(); ++i) {
        for (std::size_t j = i + 1; j < rs.size(); ++j) {
          add_edge(rs[i].get(), rs[j].get(), nullptr, nullptr);
        }
      }
    }
    // Dataflow: writer -> readers of every port reachable without delay.
    for (const ReactionInstance* w : tree_.reactions) {
      for (const PortInstance* p : w->effect_ports) {
        for (const PortInstance* q : closure(p)) {
          for (const ReactionInstance* reader : q->reactions) {
            add_edge(w, reader, p, q);
          }
          for (const ReactionInstance* reader : readers_via_sources(q)) {
            add_edge(w, reader, p, q);
          }
        }
      }
    }
  }

  std::vector<const ReactionInstance*> readers_via_sources(const PortInstance* q) const {
    std::vector<const ReactionInstance*> out;
    for (const ReactionInstance* r : tree_.reactions) {
      for (const PortInstance* s : r->sources) {
        if (s == q) {
          out.push_back(r);
          break;
        }
      }
    }
    return out;
  }

  void assign_levels() {
    const int n = static_cast<int>(tree_.reactions.size());
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
    std::vector<int> indegree(static_cast<std::size_t>(n), 0);
    std::set<std::pair<int, int>> dedup;
    for (const Edge& e : edges_) {
      if (e.from == e.to || !dedup.insert({e.from, e.to}).second) {
        continue;
      }
      succ[static_cast<std::size_t>(e.from)].push_back(e.to);
      ++indegree[static_cast<std::size_t>(e.to)];
    }

    // Kahn's algorithm; longest path depth doubles as the level.
    std::vector<int> order;
    std::vector<int> level(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      if (indegree[static_cast<std::size_t>(i)] == 0) {
        order.push_back(i);
      }
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
      const int u = order[head];
      for (int v : succ[static_cast<std::size_t>(u)]) {
        level[static_cast<std::size_t>(v)] =
            std::max(level[static_cast<std::size_t>(v)], level[static_cast<std::size_t>(u)] + 1);
        if (--indegree[static_cast<std::size_t>(v)] == 0) {
          order.push_back(v);
        }
      }
    }
    if (static_cast<int>(order.size()) != n) {
      report_cycle(indegree);
      return;
    }
    for (int i = 0; i < n; ++i) {
      tree_.reactions[static_cast<std::size_t>(i)]->level = level[static_cast<std::size_t>(i)];
    }
  }

  void report_cycle(const std::vector<int>& indegree) {
    // Every node with indegree > 0 after Kahn sits on or behind a cycle;
    // walk predecessors-of-remaining until a node repeats.
    const int n = static_cast<int>(tree_.reactions.size());
    std::map<int, std::vector<const Edge*>> in_edges;
    for (const Edge& e : edges_) {
      if (indegree[static_cast<std::size_t>(e.from)] > 0 &&
          indegree[static_cast<std::size_t>(e.to)] > 0 && e.from != e.to) {
        in_edges[e.to].push_back(&e);
      }
    }
    int start = -1;
    for (int i = 0; i < n; ++i) {
      if (indegree[static_cast<std::size_t>(i)] > 0) {
        start = i;
        break;
      }
    }
    // Prefer dataflow edges over bare precedence edges so the reported path
    // names the ports that close the loop.
    auto pick = [&](int to) {
      for (const Edge* e : in_edges[to]) {
        if (e->from_port != nullptr) {
          return e;
        }
      }
      return in_edges[to].front();
    };
    std::vector<const Edge*> path;  // walked backwards
    std::map<int, int> seen_at;     // node -> position in path, for cycle cut
    int node = start;
    seen_at[node] = 0;
    while (true) {
      const Edge* e = pick(node);
      path.push_back(e);
      node = e->from;
      auto it = seen_at.find(node);
      if (it != seen_at.end()) {
        path.erase(path.begin(), path.begin() + it->second);
        break;
      }
      seen_at[node] = static_cast<int>(path.size());
    }
    // path holds the cycle's edges in reverse direction; flip to forward.
    std::reverse(path.begin(), path.end());

    const std::string root = tree_.main->qualified_name;
    std::vector<std::string> names;
    for (const Edge* e : path) {
      if (e->from_port == nullptr) {
        continue;  // intra-reactor hop, no port to show
      }
      names.push_back(display_port(e->from_port, root));
      if (e->to_port != e->from_port) {
        names.push_back(display_port(e->to_port, root));
      }
    }
    std::string text;
    if (names.empty()) {
      // Cycle made only of precedence edges cannot happen (indices ascend),
      // but keep the message meaningful.
      for (const Edge* e : path) {
        if (!text.empty()) {
          text += " -- ";
        }
        text += tree_.reactions[static_cast<std::size_t>(e->from)]->qualified_name();
      }
    } else {
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0) {
          text += " -- ";
        }
        text += names[i];
      }
      text += " -- " + names.front();
    }
    diags_.error("CAUSALITY", text);
  }

  InstanceTree& tree_;
  DiagList diags_;
  std::map<const ReactionInstance*, int> index_;
  std::vector<Edge> edges_;
};

}  // namespace

DiagList analyze_graph(InstanceTree& tree) {
  Analysis a(tree);
  return a.run();
}

}  // namespace lfm
