#include "knotworks/async_sim.hpp"

#include <algorithm>
#include <random>

namespace knotworks {

namespace {

struct LocalAction {
  int process;
  const char* type;  // "start" | "compute" | "cleanup"
};

class Simulator {
 public:
  Simulator(const ResourceSystem& sys, const PolicySpec& policy, const Workload& workload,
            std::uint64_t seed, std::int64_t max_events, const SimObserver& observer)
      : sys_(sys),
        policy_(policy),
        workload_(workload),
        observer_(observer),
        max_events_(max_events),
        rng_(seed) {
    validate();
    init_state();
  }

  SimTrace run() {
    bool quiescent = false;
    while (state_.event_count < max_events_) {
      auto deliverable = deliverable_channels();
      auto actions = ready_actions();
      std::size_t total = deliverable.size() + actions.size();
      if (total == 0) {
        quiescent = true;
        break;
      }
      std::size_t pick = rng_() % total;
      if (pick < deliverable.size())
        deliver(deliverable[pick]);
      else
        perform(actions[pick - deliverable.size()]);
      check_mutual_exclusion();
      if (observer_) observer_(state_, trace_.events.back());
    }

    trace_.event_count = state_.event_count;
    bool anyone_pending = false;
    for (int p = 0; p < n(); ++p)
      if (state_.phase[p] != Phase::idle || !script_done(p)) anyone_pending = true;
    if (!anyone_pending)
      trace_.outcome = "completed";
    else if (quiescent)
      trace_.outcome = "deadlock";
    else
      trace_.outcome = "max_events";
    trace_.final_wfg = snapshot_wfg(state_);
    return std::move(trace_);
  }

 private:
  int n() const { return static_cast<int>(sys_.process_count()); }
  int m() const { return static_cast<int>(sys_.resource_count()); }

  void validate() {
    state_.conflict_graph = build_conflict_graph(sys_);
    if (!state_.conflict_graph.is_connected())
      throw InputError("the conflict graph must be connected");
    if (policy_.kind == PolicyKind::edge_reversal) {
      if (!policy_.process_priorities)
        throw InputError("edge_reversal policy needs process priorities");
      if (!(policy_.process_priorities->graph() == state_.conflict_graph))
        throw InputError("process priorities are not over the conflict graph");
    }
    if (policy_.kind == PolicyKind::acquisition_order) {
      if (!policy_.resource_priorities)
        throw InputError("acquisition_order policy needs resource priorities");
      if (!(policy_.resource_priorities->graph() == build_resource_graph(sys_)))
        throw InputError("resource priorities are not over the resource graph");
    }
    if (workload_.episodes.size() != static_cast<std::size_t>(n()))
      throw InputError("workload must script every process");
    for (int p = 0; p < n(); ++p)
      for (const auto& episode : workload_.episodes[p]) {
        if (episode.empty())
          throw InputError("empty episode for process " + sys_.processes()[p]);
        for (int r : episode) {
          const auto& needs = sys_.needs(p);
          if (!std::binary_search(needs.begin(), needs.end(), r))
            throw InputError("process " + sys_.processes()[p] +
                             " scripted to acquire a resource outside its set");
        }
      }
  }

  void init_state() {
    state_.sys = &sys_;
    state_.policy = policy_.kind;
    state_.phase.assign(n(), Phase::idle);
    state_.episode_cursor.assign(n(), 0);
    state_.demand.resize(n());
    state_.episode_started_at.assign(n(), 0);
    state_.chain_knowledge.resize(n());
    state_.has_grant.assign(n(), std::vector<char>(m(), 0));
    state_.requested.assign(n(), std::vector<char>(m(), 0));
    state_.request_order.resize(n());
    state_.next_request.assign(n(), 0);
    state_.deferred.resize(n());
    trace_.episodes_completed.assign(n(), 0);

    state_.arbiters.resize(m());
    for (int r = 0; r < m(); ++r) state_.arbiters[r].home = sys_.sharers(r).front();

    if (policy_.kind == PolicyKind::edge_reversal) {
      state_.priority_bits = policy_.process_priorities->toward_hi();
      // One token per (resource, sharer pair); it starts at the end the
      // orientation points to, so initial sinks can compute at once.
      for (int r = 0; r < m(); ++r) {
        const auto& sharers = sys_.sharers(r);
        for (std::size_t a = 0; a < sharers.size(); ++a)
          for (std::size_t b = a + 1; b < sharers.size(); ++b) {
            int e = state_.conflict_graph.edge_index(sharers[a], sharers[b]);
            SimState::Token token;
            token.resource = r;
            token.edge = e;
            token.at = policy_.process_priorities->head_of(e);
            state_.token_of[{r, e}] = static_cast<int>(state_.tokens.size());
            state_.tokens.push_back(token);
          }
      }
      state_.outstanding.assign(n(), std::vector<char>(state_.tokens.size(), 0));
    }

    if (policy_.kind == PolicyKind::acquisition_order) {
      // A topological rank of the oriented resource graph; any linear
      // extension induces the same order inside each totally ordered
      // per-process resource set.
      Digraph d = policy_.resource_priorities->as_digraph();
      std::vector<int> indegree(m(), 0);
      for (const auto& [from, to] : d.arcs()) ++indegree[to];
      ao_rank_.assign(m(), 0);
      std::vector<int> ready;
      for (int r = m() - 1; r >= 0; --r)
        if (indegree[r] == 0) ready.push_back(r);
      int next_rank = 0;
      while (!ready.empty()) {
        int r = ready.back();
        ready.pop_back();
        ao_rank_[r] = next_rank++;
        for (int u : d.out_neighbors(r))
          if (--indegree[u] == 0) ready.push_back(u);
      }
    }
  }

  bool script_done(int p) const {
    return !workload_.loop &&
           state_.episode_cursor[p] >= workload_.episodes[p].size();
  }

  const std::vector<int>& episode_of(int p) const {
    const auto& script = workload_.episodes[p];
    return script[state_.episode_cursor[p] % script.size()];
  }

  bool all_satisfied(int p) const {
    if (policy_.kind == PolicyKind::edge_reversal) {
      for (int r : state_.demand[p])
        for (int other : sys_.sharers(r)) {
          if (other == p) continue;
          const auto& token = state_.tokens[token_index(r, p, other)];
          if (token.at != p || token.in_transit) return false;
        }
      return true;
    }
    for (int r : state_.demand[p])
      if (!state_.has_grant[p][r]) return false;
    return true;
  }

  int token_index(int resource, int a, int b) const {
    int e = state_.conflict_graph.edge_index(a, b);
    return state_.token_of.at({resource, e});
  }

  std::vector<std::pair<int, int>> deliverable_channels() const {
    std::vector<std::pair<int, int>> keys;
    for (const auto& [key, queue] : state_.channels)
      if (!queue.empty()) keys.push_back(key);
    return keys;
  }

  std::vector<LocalAction> ready_actions() const {
    std::vector<LocalAction> actions;
    for (int p = 0; p < n(); ++p) {
      switch (state_.phase[p]) {
        case Phase::idle:
          if (!script_done(p) && !workload_.episodes[p].empty())
            actions.push_back({p, "start"});
          break;
        case Phase::acquiring:
          if (all_satisfied(p)) actions.push_back({p, "compute"});
          break;
        case Phase::computing:
          actions.push_back({p, "cleanup"});
          break;
      }
    }
    return actions;
  }

  static constexpr std::size_t kMaxChainTracked = 256;

  // Pointwise max of nonincreasing suffix-time vectors.
  void absorb_chain(int process, const std::vector<std::int64_t>& times) {
    auto& mine = state_.chain_knowledge[process];
    if (times.size() > mine.size()) mine.resize(times.size(), -1);
    for (std::size_t i = 0; i < times.size(); ++i)
      mine[i] = std::max(mine[i], times[i]);
  }

  // One more grant, stamped now, on top of the given chains.
  std::vector<std::int64_t> extended_chain(const std::vector<std::int64_t>& base,
                                           std::int64_t stamp) const {
    std::vector<std::int64_t> out;
    out.reserve(std::min(base.size() + 1, kMaxChainTracked));
    out.push_back(stamp);
    for (std::size_t i = 0; i + 1 < kMaxChainTracked && i < base.size(); ++i)
      out.push_back(base[i]);
    return out;
  }

  int windowed_chain(int process) const {
    const auto& mine = state_.chain_knowledge[process];
    int length = 0;
    for (std::size_t i = 0; i < mine.size(); ++i)
      if (mine[i] > state_.episode_started_at[process])
        length = static_cast<int>(i) + 1;
    return length;
  }

  SimEvent& record(const char* type, int process) {
    SimEvent event;
    event.index = state_.event_count++;
    event.type = type;
    event.process = process;
    trace_.events.push_back(std::move(event));
    return trace_.events.back();
  }

  void send(MessageKind kind, int from, int to, int resource) {
    if (from == to) throw std::logic_error("message to self");
    if (!state_.conflict_graph.has_edge(from, to))
      throw std::logic_error("message outside the conflict graph");
    Message message;
    message.kind = kind;
    message.sender = from;
    message.receiver = to;
    message.resource = resource;
    message.send_index = state_.event_count;
    message.chain_times = state_.chain_knowledge[from];
    state_.channels[{from, to}].push_back(std::move(message));
  }

  // --- home arbitration (naive, acquisition_order) ---

  void arbiter_request(int q, int resource) {
    auto& arbiter = state_.arbiters[resource];
    if (arbiter.holder < 0) {
      arbiter.holder = q;
      issue_grant(q, resource);
    } else {
      arbiter.queue.push_back(q);
    }
  }

  void arbiter_release(int resource) {
    auto& arbiter = state_.arbiters[resource];
    arbiter.holder = -1;
    if (!arbiter.queue.empty()) {
      int q = arbiter.queue.front();
      arbiter.queue.pop_front();
      arbiter.holder = q;
      issue_grant(q, resource);
    }
  }

  // The chain counts grant messages. Remote grants get their extension on
  // delivery; a grant handled locally at the home sends nothing, so it only
  // enables without lengthening any chain.
  void issue_grant(int q, int resource) {
    int home = state_.arbiters[resource].home;
    if (home == q)
      apply_grant(q, resource);
    else
      send(MessageKind::grant, home, q, resource);
  }

  void apply_grant(int q, int resource) {
    state_.has_grant[q][resource] = 1;
    if (policy_.kind == PolicyKind::acquisition_order) send_next_request(q);
  }

  void route_request(int p, int resource) {
    state_.requested[p][resource] = 1;
    int home = state_.arbiters[resource].home;
    if (home == p)
      arbiter_request(p, resource);
    else
      send(MessageKind::request, p, home, resource);
  }

  void send_next_request(int p) {
    if (state_.next_request[p] >= state_.request_order[p].size()) return;
    int resource = state_.request_order[p][state_.next_request[p]++];
    route_request(p, resource);
  }

  // --- edge reversal ---

  bool has_priority_over(int p, int q) const {
    // The edge points toward the holder of priority.
    int e = state_.conflict_graph.edge_index(p, q);
    auto [lo, hi] = state_.conflict_graph.edges()[e];
    int head = state_.priority_bits[e] ? hi : lo;
    return head == p;
  }

  bool demands(int p, int resource) const {
    const auto& d = state_.demand[p];
    return std::binary_search(d.begin(), d.end(), resource);
  }

  void grant_token(int from, int to, int token_id) {
    auto& token = state_.tokens[token_id];
    token.at = to;
    token.in_transit = true;
    send(MessageKind::grant, from, to, token.resource);
  }

  void er_receive_request(int s, const Message& message) {
    int q = message.sender;
    int token_id = token_index(message.resource, q, s);
    const auto& token = state_.tokens[token_id];
    if (token.at != s || token.in_transit)
      throw std::logic_error("token request reached a non-owner");
    bool wants = demands(s, message.resource);
    if (wants && (state_.phase[s] == Phase::computing ||
                  (state_.phase[s] == Phase::acquiring && has_priority_over(s, q)))) {
      state_.deferred[s].push_back({token_id, q});
      return;
    }
    grant_token(s, q, token_id);
    if (wants && state_.phase[s] == Phase::acquiring && !state_.outstanding[s][token_id]) {
      state_.outstanding[s][token_id] = 1;
      send(MessageKind::request, s, q, message.resource);
    }
  }

  // --- event execution ---

  void deliver(const std::pair<int, int>& channel) {
    Message message = state_.channels[channel].front();
    state_.channels[channel].pop_front();
    if (state_.channels[channel].empty()) state_.channels.erase(channel);

    SimEvent& event = record("deliver", message.receiver);
    event.message = message;

    // Causal knowledge rides on every message; a grant additionally extends
    // the chain by itself.
    absorb_chain(message.receiver, message.chain_times);
    if (message.kind == MessageKind::grant)
      absorb_chain(message.receiver,
                   extended_chain(message.chain_times, message.send_index));

    if (policy_.kind == PolicyKind::edge_reversal) {
      if (message.kind == MessageKind::request) {
        er_receive_request(message.receiver, message);
      } else if (message.kind == MessageKind::grant) {
        int token_id = token_index(message.resource, message.sender, message.receiver);
        state_.tokens[token_id].in_transit = false;
        state_.outstanding[message.receiver][token_id] = 0;
      } else {
        throw std::logic_error("edge_reversal sends no release messages");
      }
      return;
    }

    switch (message.kind) {
      case MessageKind::request:
        arbiter_request(message.sender, message.resource);
        break;
      case MessageKind::grant:
        apply_grant(message.receiver, message.resource);
        break;
      case MessageKind::release:
        arbiter_release(message.resource);
        break;
    }
  }

  void start_episode(int p) {
    SimEvent& event = record("start", p);
    event.episode = static_cast<int>(state_.episode_cursor[p]);
    state_.demand[p] = episode_of(p);
    state_.phase[p] = Phase::acquiring;
    state_.episode_started_at[p] = event.index;

    switch (policy_.kind) {
      case PolicyKind::naive:
        for (int r : state_.demand[p]) route_request(p, r);
        break;
      case PolicyKind::acquisition_order: {
        state_.request_order[p] = state_.demand[p];
        std::sort(state_.request_order[p].begin(), state_.request_order[p].end(),
                  [&](int a, int b) { return ao_rank_[a] < ao_rank_[b]; });
        state_.next_request[p] = 0;
        send_next_request(p);
        break;
      }
      case PolicyKind::edge_reversal:
        for (int r : state_.demand[p])
          for (int other : sys_.sharers(r)) {
            if (other == p) continue;
            int token_id = token_index(r, p, other);
            const auto& token = state_.tokens[token_id];
            bool held = token.at == p && !token.in_transit;
            if (!held && !state_.outstanding[p][token_id]) {
              state_.outstanding[p][token_id] = 1;
              send(MessageKind::request, p, other, r);
            }
          }
        break;
    }
  }

  void compute(int p) {
    SimEvent& event = record("compute", p);
    event.episode = static_cast<int>(state_.episode_cursor[p]);
    int chain = windowed_chain(p);
    event.chain = chain;
    trace_.waits.push_back(
        {p, static_cast<std::int64_t>(state_.episode_cursor[p]), chain});
    state_.phase[p] = Phase::computing;
  }

  void cleanup(int p) {
    SimEvent& event = record("cleanup", p);
    event.episode = static_cast<int>(state_.episode_cursor[p]);

    if (policy_.kind == PolicyKind::edge_reversal) {
      // Reverse every priority edge currently pointing here; validated to
      // stay acyclic. Then honor the deferred requests under the new, lower
      // priority.
      const Graph& g = state_.conflict_graph;
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        auto [lo, hi] = g.edges()[e];
        int head = state_.priority_bits[e] ? hi : lo;
        if (head == p) state_.priority_bits[e] = !state_.priority_bits[e];
      }
      AcyclicOrientation check(std::make_shared<const Graph>(g), state_.priority_bits);
      (void)check;
      for (const auto& entry : state_.deferred[p])
        grant_token(p, entry.requester, entry.token);
      state_.deferred[p].clear();
    } else {
      for (int r : state_.demand[p]) {
        state_.has_grant[p][r] = 0;
        state_.requested[p][r] = 0;
        int home = state_.arbiters[r].home;
        if (home == p)
          arbiter_release(r);
        else
          send(MessageKind::release, p, home, r);
      }
    }

    state_.demand[p].clear();
    state_.phase[p] = Phase::idle;
    ++state_.episode_cursor[p];
    ++trace_.episodes_completed[p];
  }

  void perform(const LocalAction& action) {
    if (action.type == std::string("start"))
      start_episode(action.process);
    else if (action.type == std::string("compute"))
      compute(action.process);
    else
      cleanup(action.process);
  }

  void check_mutual_exclusion() const {
    if (policy_.kind == PolicyKind::edge_reversal) {
      for (int p = 0; p < n(); ++p) {
        if (state_.phase[p] != Phase::computing) continue;
        for (int q = p + 1; q < n(); ++q) {
          if (state_.phase[q] != Phase::computing) continue;
          std::vector<int> common;
          std::set_intersection(state_.demand[p].begin(), state_.demand[p].end(),
                                state_.demand[q].begin(), state_.demand[q].end(),
                                std::back_inserter(common));
          if (!common.empty())
            throw std::logic_error("two processes computing on a shared resource");
        }
      }
      return;
    }
    for (int r = 0; r < m(); ++r) {
      int holders = 0;
      for (int p = 0; p < n(); ++p) holders += state_.has_grant[p][r];
      if (holders > 1) throw std::logic_error("resource granted to two processes");
    }
  }

  const ResourceSystem& sys_;
  const PolicySpec& policy_;
  const Workload& workload_;
  const SimObserver& observer_;
  std::int64_t max_events_;
  std::mt19937_64 rng_;
  SimState state_;
  SimTrace trace_;
  std::vector<int> ao_rank_;
};

}  // namespace

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::naive: return "naive";
    case PolicyKind::edge_reversal: return "edge_reversal";
    case PolicyKind::acquisition_order: return "acquisition_order";
  }
  return "?";
}

SimTrace run_simulation(const ResourceSystem& sys, const PolicySpec& policy,
                        const Workload& workload, std::uint64_t seed,
                        std::int64_t max_events, const SimObserver& observer) {
  return Simulator(sys, policy, workload, seed, max_events, observer).run();
}

WaitForGraph snapshot_wfg(const SimState& state) {
  Digraph w(state.sys->processes());
  const int n = static_cast<int>(state.sys->process_count());

  if (state.policy == PolicyKind::edge_reversal) {
    // A process waits exactly on whoever is sitting on its deferred request.
    for (int holder = 0; holder < n; ++holder)
      for (const auto& entry : state.deferred[holder])
        if (!w.has_arc(entry.requester, holder))
          w.add_arc_by_index(entry.requester, holder);
    return WaitForGraph(std::move(w));
  }

  for (int p = 0; p < n; ++p) {
    if (state.phase[p] != Phase::acquiring) continue;
    for (int r : state.demand[p]) {
      if (!state.requested[p][r] || state.has_grant[p][r]) continue;
      int holder = state.arbiters[r].holder;
      // Waits are attributed to a process that still possesses the grant; a
      // holder whose release is in flight no longer blocks anyone.
      if (holder >= 0 && holder != p && state.has_grant[holder][r] &&
          !w.has_arc(p, holder))
        w.add_arc_by_index(p, holder);
    }
  }
  return WaitForGraph(std::move(w));
}

WaitStats measure_waits(const SimTrace& trace) {
  WaitStats stats;
  std::size_t processes = trace.episodes_completed.size();
  stats.per_process.resize(processes);
  for (const auto& wait : trace.waits) {
    auto& per = stats.per_process.at(wait.process);
    ++per.episodes;
    per.max_chain = std::max(per.max_chain, wait.chain);
    per.total_chain += wait.chain;
    stats.max_chain = std::max(stats.max_chain, wait.chain);
  }
  return stats;
}

AcyclicOrientation default_process_priorities(const Graph& conflict_graph) {
  std::vector<bool> toward_hi(conflict_graph.edge_count(), true);
  return AcyclicOrientation(std::make_shared<const Graph>(conflict_graph),
                            std::move(toward_hi));
}

AcyclicOrientation default_resource_priorities(const Graph& resource_graph) {
  return orient_by_coloring(resource_graph, color_graph_greedy(resource_graph));
}

}  // namespace knotworks
