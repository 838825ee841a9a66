#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "knotworks/detection.hpp"
#include "knotworks/orientation.hpp"
#include "knotworks/resource_order.hpp"
#include "knotworks/wait_models.hpp"

namespace knotworks {

enum class PolicyKind { naive, edge_reversal, acquisition_order };

const char* policy_name(PolicyKind kind);

// Naive: requests are queued FIFO at each resource's home process (its
//   lowest-index sharer) and granted whenever the resource is free. The
//   textbook deadlock-prone baseline.
// EdgeReversal: pairwise priority tokens ordered by an acyclic orientation of
//   the conflict graph; a process that finishes computing reverses all its
//   incident priority edges.
// AcquisitionOrder: naive arbitration, but each process requests resources
//   one at a time following an acyclic orientation of the resource graph.
struct PolicySpec {
  PolicyKind kind = PolicyKind::naive;
  // Required for edge_reversal: acyclic orientation of the conflict graph.
  std::optional<AcyclicOrientation> process_priorities;
  // Required for acquisition_order: acyclic orientation of the resource graph.
  std::optional<AcyclicOrientation> resource_priorities;
};

// Finite scripted demand: each episode is the set of resources the process
// acquires, computes on, then releases. With loop set, scripts repeat until
// the event budget runs out (the heavy-load regime).
struct Workload {
  std::vector<std::vector<std::vector<int>>> episodes;  // [process][episode] -> sorted resource indices
  bool loop = false;
};

enum class MessageKind { request, grant, release };

struct Message {
  MessageKind kind = MessageKind::request;
  int sender = -1;
  int receiver = -1;
  int resource = -1;
  std::int64_t send_index = -1;  // event count when the message was sent
  // Causal bookkeeping for wait measurement: entry L-1 is the latest possible
  // send time of the L-th-from-last grant over all causally known grant
  // chains. Nonincreasing; piggybacks on every message.
  std::vector<std::int64_t> chain_times;
};

enum class Phase { idle, acquiring, computing };

// Full simulation state. The engine owns mutation; observers and
// snapshot_wfg read it between atomic events.
struct SimState {
  const ResourceSystem* sys = nullptr;
  Graph conflict_graph;
  PolicyKind policy = PolicyKind::naive;

  std::vector<Phase> phase;
  std::vector<std::size_t> episode_cursor;
  std::vector<std::vector<int>> demand;  // current episode, sorted; empty when idle
  std::vector<std::int64_t> episode_started_at;    // event index of the start
  std::vector<std::vector<std::int64_t>> chain_knowledge;  // per process, as in Message

  // Home arbitration (naive, acquisition_order).
  struct Arbiter {
    int home = -1;
    int holder = -1;           // process index, -1 when free
    std::deque<int> queue;     // waiting processes, FIFO
  };
  std::vector<Arbiter> arbiters;               // per resource
  std::vector<std::vector<char>> has_grant;    // [process][resource]
  std::vector<std::vector<char>> requested;    // [process][resource]
  std::vector<std::vector<int>> request_order; // acquisition_order: demand sorted by precedence
  std::vector<std::size_t> next_request;       // cursor into request_order

  // Pairwise priority tokens (edge_reversal): one per (resource, G-edge
  // between two of its sharers).
  struct Token {
    int resource = -1;
    int edge = -1;  // conflict-graph edge index
    int at = -1;    // owning endpoint
    bool in_transit = false;
  };
  std::vector<Token> tokens;
  std::map<std::pair<int, int>, int> token_of;  // (resource, edge) -> token index
  std::vector<bool> priority_bits;              // current orientation of G
  struct Deferred {
    int token = -1;
    int requester = -1;
  };
  std::vector<std::vector<Deferred>> deferred;     // held at the deciding process
  std::vector<std::vector<char>> outstanding;      // [process][token] request pending

  std::map<std::pair<int, int>, std::deque<Message>> channels;  // FIFO per ordered pair
  std::int64_t event_count = 0;
};

struct SimEvent {
  std::int64_t index = -1;
  std::string type;  // "start" | "deliver" | "compute" | "cleanup"
  int process = -1;
  std::optional<Message> message;  // deliveries only
  int episode = -1;
  int chain = -1;  // compute events: causal grant-chain length of the episode
};

struct SimTrace {
  std::vector<SimEvent> events;
  std::int64_t event_count = 0;
  std::string outcome;  // "completed" | "deadlock" | "max_events"
  std::optional<WaitForGraph> final_wfg;
  std::vector<std::int64_t> episodes_completed;  // per process
  struct EpisodeWait {
    int process = -1;
    std::int64_t episode = -1;
    int chain = 0;
  };
  std::vector<EpisodeWait> waits;  // one entry per compute event
};

using SimObserver = std::function<void(const SimState&, const SimEvent&)>;

// Runs the scripted computation under the given policy. Deterministic for a
// fixed seed: the scheduler repeatedly picks uniformly among the deliverable
// channel heads and the ready local actions, so every sent message is
// delivered after finite delay. Stops at quiescence or after max_events.
SimTrace run_simulation(const ResourceSystem& sys, const PolicySpec& policy,
                        const Workload& workload, std::uint64_t seed,
                        std::int64_t max_events, const SimObserver& observer = {});

// AND-model wait-for graph of the instantaneous state: an arc from each
// waiting process to the process whose clean-up must happen for the wait to
// end (the current holder under home arbitration, the deferring process
// under edge reversal).
WaitForGraph snapshot_wfg(const SimState& state);

struct WaitStats {
  struct PerProcess {
    std::int64_t episodes = 0;
    int max_chain = 0;
    std::int64_t total_chain = 0;
  };
  std::vector<PerProcess> per_process;
  int max_chain = 0;
};

// Grant-chain statistics per acquisition episode, from the compute events.
WaitStats measure_waits(const SimTrace& trace);

// Deterministic default orientations for scenario files that do not pin one:
// conflict-graph edges lo -> hi; resource graph oriented by greedy coloring.
AcyclicOrientation default_process_priorities(const Graph& conflict_graph);
AcyclicOrientation default_resource_priorities(const Graph& resource_graph);

}  // namespace knotworks
