#include "gdt/sim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "gdt/dist/rng.hpp"
#include "gdt/dist/sampler.hpp"
#include "gdt/error.hpp"
#include "gdt/flexscript/number.hpp"
#include "gdt/flexscript/parser.hpp"
#include "gdt/sim/event_queue.hpp"

namespace gdt::sim {

namespace {

using flexscript::is_machine;
using flexscript::is_transporter;

struct Item {
  std::uint64_t id = 0;
};

enum class EventKind : std::uint8_t { arrival, finish, conveyor_exit, transport_done, retry };

struct Event {
  EventKind kind;
  std::size_t node;
};

struct Transfer {
  Item item;
  std::size_t from;
  std::size_t to;
  double distance;
};

// Raised inside event handlers; ends the run with Failure(RuntimeError).
struct RuntimeFault {
  std::string message;
};

enum SamplerSlot : std::uint64_t { kArrivalSlot = 0, kProcessSlot = 1, kSetupSlot = 2 };

struct Node {
  const ModelObject* obj = nullptr;
  std::optional<dist::Sampler> arrival, process, setup;

  std::deque<Item> outbox;                       // ready to leave
  std::deque<std::pair<Item, double>> transit;   // conveyor: item, exit time
  std::optional<Item> working;                   // machine: item in service
  bool reserved = false;                         // machine: next item already on its way
  std::size_t incoming = 0;                      // buffers/sinks: items on their way

  // combiner
  std::optional<Item> container;
  bool collecting = false;
  std::vector<std::size_t> remaining;  // per input port
  std::vector<Item> components;
  std::size_t components_incoming = 0;

  // transporters and dispatchers
  std::deque<Transfer> requests;
  std::optional<Transfer> carrying;

  bool retry_pending = false;

  ObjectStats stats;
  double busy_since = -1.0;
  double blocked_since = -1.0;
  double conveyor_delay = 0.0;

  std::size_t held() const {
    return outbox.size() + transit.size() + (working ? 1 : 0) + (container ? 1 : 0) +
           components.size() + requests.size() + (carrying ? 1 : 0);
  }
};

double distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

class Engine {
 public:
  Engine(const SimModel& model, const RunOptions& options) : opts_(options) {
    nodes_.resize(model.objects.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      Node& n = nodes_[i];
      const ModelObject& o = model.objects[i];
      n.obj = &o;
      n.stats.name = o.name;
      const std::uint64_t stream = dist::derive_seed(options.seed, i);
      if (o.inter_arrival) n.arrival.emplace(*o.inter_arrival, dist::derive_seed(stream, kArrivalSlot));
      if (o.process_time) n.process.emplace(*o.process_time, dist::derive_seed(stream, kProcessSlot));
      if (o.setup_time) n.setup.emplace(*o.setup_time, dist::derive_seed(stream, kSetupSlot));
      n.remaining.assign(o.inputs.size(), 0);
      if (o.type == ObjectType::conveyor) {
        const double length = (o.inputs.empty() || o.outputs.empty())
                                  ? 0.0
                                  : distance(model.objects[o.inputs.front()].position,
                                             model.objects[o.outputs.front()].position);
        n.conveyor_delay = length / o.convey_speed;
      }
    }
  }

  RunResult run() {
    RunResult result;
    try {
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].obj->type == ObjectType::source) schedule_arrival(i);
      }
      std::size_t same_instant = 0;
      while (!queue_.empty() && queue_.top().time <= opts_.horizon) {
        auto entry = queue_.pop();
        same_instant = entry.time == now_ ? same_instant + 1 : 0;
        if (same_instant > opts_.max_events_per_instant) {
          throw RuntimeFault{"no progress: too many events at t=" +
                             flexscript::format_number(now_)};
        }
        now_ = entry.time;
        dispatch(entry.payload);
        ++stats_.events_processed;
        verify();
      }
      if (queue_.empty() && in_system_ > 0) {
        result.outcome = ExecOutcome::failure(
            FailureReason::DeadlockDetected,
            "no pending events at t=" + flexscript::format_number(now_) + " with " +
                std::to_string(in_system_) + " item(s) in system");
        stats_.simulated_horizon = now_;
      } else {
        stats_.simulated_horizon = opts_.horizon;
      }
    } catch (const RuntimeFault& f) {
      result.outcome = ExecOutcome::failure(FailureReason::RuntimeError, f.message);
      stats_.simulated_horizon = now_;
    }
    finish_stats();
    result.stats = std::move(stats_);
    return result;
  }

 private:
  // -- scheduling ---------------------------------------------------------

  double draw(dist::Sampler& s, const Node& n, const char* what) {
    const double v = s.next();
    if (!std::isfinite(v)) {
      throw RuntimeFault{n.obj->name + ": " + what + " sample is not finite"};
    }
    return v;
  }

  void schedule(double delay, EventKind kind, std::size_t node) {
    const double t = now_ + delay;
    if (!std::isfinite(t)) throw RuntimeFault{nodes_[node].obj->name + ": event time overflow"};
    queue_.schedule(t, Event{kind, node});
  }

  void schedule_arrival(std::size_t i) {
    Node& n = nodes_[i];
    schedule(draw(*n.arrival, n, "InterArrivalTime"), EventKind::arrival, i);
  }

  void request_retry(std::size_t i) {
    Node& n = nodes_[i];
    if (n.retry_pending) return;
    n.retry_pending = true;
    queue_.schedule(now_, Event{EventKind::retry, i});
  }

  void notify_upstream(std::size_t i) {
    for (std::size_t u : nodes_[i].obj->inputs) {
      if (!nodes_[u].outbox.empty()) request_retry(u);
    }
  }

  void trace(std::size_t node, const char* kind, std::optional<std::uint64_t> item) {
    if (!opts_.trace) return;
    *opts_.trace << flexscript::format_number(now_) << '\t' << nodes_[node].obj->name << '\t'
                 << kind << '\t';
    if (item) *opts_.trace << *item;
    else *opts_.trace << '-';
    *opts_.trace << '\n';
  }

  void start_busy(Node& n) {
    if (n.busy_since < 0) n.busy_since = now_;
  }
  void end_busy(Node& n) {
    if (n.busy_since >= 0) {
      n.stats.busy_time += now_ - n.busy_since;
      n.busy_since = -1.0;
    }
  }

  // -- routing ------------------------------------------------------------

  std::size_t port_of(const Node& n, std::size_t from) const {
    const auto& in = n.obj->inputs;
    return static_cast<std::size_t>(std::find(in.begin(), in.end(), from) - in.begin());
  }

  bool can_accept(std::size_t to, std::size_t from) const {
    const Node& n = nodes_[to];
    switch (n.obj->type) {
      case ObjectType::sink:
        return true;
      case ObjectType::queue:
        return n.outbox.size() + n.incoming < n.obj->capacity;
      case ObjectType::conveyor:
        return n.transit.size() + n.outbox.size() + n.incoming < n.obj->capacity;
      case ObjectType::processor:
      case ObjectType::multiprocessor:
      case ObjectType::separator:
        return !n.working && !n.reserved && n.outbox.empty();
      case ObjectType::combiner: {
        const std::size_t port = port_of(n, from);
        if (port == 0) {
          return !n.reserved && !n.container && !n.collecting && !n.working && n.outbox.empty();
        }
        return n.collecting && port < n.remaining.size() && n.remaining[port] > 0;
      }
      default:
        return false;
    }
  }

  // Commits the slot at `to`, then hands the item over directly or through
  // the bound carrier.
  void accept(std::size_t to, Item item, std::size_t from) {
    Node& n = nodes_[to];
    switch (n.obj->type) {
      case ObjectType::processor:
      case ObjectType::multiprocessor:
      case ObjectType::separator:
        n.reserved = true;
        break;
      case ObjectType::combiner: {
        const std::size_t port = port_of(n, from);
        if (port == 0) {
          n.reserved = true;
        } else {
          --n.remaining[port];
          ++n.components_incoming;
        }
        break;
      }
      default:
        ++n.incoming;
        break;
    }
    if (n.obj->carrier) {
      submit_transfer(Transfer{item, from, to,
                               distance(nodes_[from].obj->position, n.obj->position)});
    } else {
      deliver(to, item, from);
    }
  }

  void deliver(std::size_t to, Item item, std::size_t from) {
    Node& n = nodes_[to];
    ++n.stats.entered;
    trace(to, "enter", item.id);
    switch (n.obj->type) {
      case ObjectType::sink:
        --n.incoming;
        ++stats_.sink_absorbed;
        ++stats_.items_departed;
        --in_system_;
        ++n.stats.exited;
        break;
      case ObjectType::queue:
        --n.incoming;
        n.outbox.push_back(item);
        n.stats.max_content = std::max(n.stats.max_content, n.outbox.size());
        request_retry(to);
        break;
      case ObjectType::conveyor:
        --n.incoming;
        n.transit.emplace_back(item, now_ + n.conveyor_delay);
        n.stats.max_content = std::max(n.stats.max_content, n.transit.size() + n.outbox.size());
        schedule(n.conveyor_delay, EventKind::conveyor_exit, to);
        break;
      case ObjectType::processor:
      case ObjectType::multiprocessor:
      case ObjectType::separator:
        n.reserved = false;
        start_work(to, item);
        break;
      case ObjectType::combiner:
        if (port_of(n, from) == 0) {
          n.reserved = false;
          n.container = item;
          n.collecting = true;
          for (std::size_t p = 1; p < n.remaining.size(); ++p) {
            n.remaining[p] = n.obj->component_quantity;
          }
          n.stats.max_content = std::max<std::size_t>(n.stats.max_content, 1);
          notify_upstream(to);
        } else {
          --n.components_incoming;
          n.components.push_back(item);
          n.stats.max_content = std::max(n.stats.max_content, 1 + n.components.size());
        }
        try_assemble(to);
        break;
      default:
        throw RuntimeFault{n.obj->name + " cannot hold items"};
    }
  }

  void start_work(std::size_t i, Item item) {
    Node& n = nodes_[i];
    n.working = item;
    n.stats.max_content = std::max<std::size_t>(n.stats.max_content, 1);
    double d = 0.0;
    if (n.setup) d += draw(*n.setup, n, "SetupTime");
    d += draw(*n.process, n, "ProcessTime");
    start_busy(n);
    trace(i, "start", item.id);
    schedule(d, EventKind::finish, i);
  }

  void try_assemble(std::size_t i) {
    Node& n = nodes_[i];
    // A combiner without component ports never completes a set.
    if (!n.collecting || n.remaining.size() < 2 || n.components_incoming > 0) return;
    for (std::size_t p = 1; p < n.remaining.size(); ++p) {
      if (n.remaining[p] > 0) return;
    }
    n.collecting = false;
    Item c = *n.container;
    n.container.reset();
    start_work(i, c);
  }

  void try_send(std::size_t i) {
    Node& n = nodes_[i];
    bool sent = false;
    while (!n.outbox.empty()) {
      std::optional<std::size_t> target;
      for (std::size_t t : n.obj->outputs) {
        if (can_accept(t, i)) {
          target = t;
          break;
        }
      }
      if (!target) {
        if (n.blocked_since < 0) n.blocked_since = now_;
        break;
      }
      Item item = n.outbox.front();
      n.outbox.pop_front();
      ++n.stats.exited;
      trace(i, "exit", item.id);
      accept(*target, item, i);
      sent = true;
    }
    if (n.outbox.empty() && n.blocked_since >= 0) {
      n.stats.blocked_time += now_ - n.blocked_since;
      n.blocked_since = -1.0;
    }
    if (!sent || !n.outbox.empty()) return;
    if (n.obj->type == ObjectType::source) {
      schedule_arrival(i);
    } else {
      notify_upstream(i);
    }
  }

  // -- transport ----------------------------------------------------------

  void submit_transfer(Transfer t) {
    const std::size_t c = *nodes_[t.to].obj->carrier;
    Node& carrier = nodes_[c];
    if (carrier.obj->type != ObjectType::dispatcher) {
      carrier.requests.push_back(t);
      start_transfer(c);
      return;
    }
    const auto& fleet = carrier.obj->fleet;
    if (fleet.empty()) {
      // Parked for good: nobody can carry it.
      carrier.requests.push_back(t);
      return;
    }
    std::size_t best = fleet.front();
    for (std::size_t f : fleet) {
      const Node& cand = nodes_[f];
      if (!cand.carrying && cand.requests.empty()) {
        best = f;
        break;
      }
      if (cand.requests.size() < nodes_[best].requests.size()) best = f;
    }
    nodes_[best].requests.push_back(t);
    start_transfer(best);
  }

  void start_transfer(std::size_t c) {
    Node& n = nodes_[c];
    if (n.carrying || n.requests.empty()) return;
    n.carrying = n.requests.front();
    n.requests.pop_front();
    ++n.stats.entered;
    start_busy(n);
    trace(c, "load", n.carrying->item.id);
    schedule(n.carrying->distance / n.obj->travel_speed, EventKind::transport_done, c);
  }

  // -- event handlers -----------------------------------------------------

  void dispatch(const Event& e) {
    Node& n = nodes_[e.node];
    switch (e.kind) {
      case EventKind::arrival: {
        Item item{next_item_++};
        ++stats_.items_created;
        ++stats_.source_created;
        ++in_system_;
        ++n.stats.entered;
        trace(e.node, "create", item.id);
        n.outbox.push_back(item);
        try_send(e.node);
        break;
      }
      case EventKind::finish: {
        end_busy(n);
        Item item = *n.working;
        n.working.reset();
        trace(e.node, "finish", item.id);
        n.outbox.push_back(item);
        if (n.obj->type == ObjectType::separator) {
          for (std::size_t k = 1; k < n.obj->split_quantity; ++k) {
            Item extra{next_item_++};
            ++stats_.items_created;
            ++stats_.separator_spawned;
            ++in_system_;
            trace(e.node, "split", extra.id);
            n.outbox.push_back(extra);
          }
        } else if (n.obj->type == ObjectType::combiner) {
          for (const Item& c : n.components) trace(e.node, "combine", c.id);
          stats_.combiner_consumed += n.components.size();
          stats_.items_departed += n.components.size();
          in_system_ -= n.components.size();
          n.components.clear();
        }
        try_send(e.node);
        break;
      }
      case EventKind::conveyor_exit: {
        auto [item, t] = n.transit.front();
        n.transit.pop_front();
        n.outbox.push_back(item);
        try_send(e.node);
        break;
      }
      case EventKind::transport_done: {
        Transfer t = *n.carrying;
        n.carrying.reset();
        end_busy(n);
        ++n.stats.exited;
        trace(e.node, "unload", t.item.id);
        deliver(t.to, t.item, t.from);
        start_transfer(e.node);
        break;
      }
      case EventKind::retry:
        n.retry_pending = false;
        try_send(e.node);
        break;
    }
  }

  // Conservation and capacity, re-derived from object contents.
  void verify() {
    std::size_t counted = 0;
    for (const Node& n : nodes_) {
      counted += n.held();
      const ObjectType t = n.obj->type;
      if (t == ObjectType::queue && n.outbox.size() + n.incoming > n.obj->capacity) {
        throw RuntimeFault{n.obj->name + " exceeds its capacity"};
      }
      if (t == ObjectType::conveyor &&
          n.transit.size() + n.outbox.size() + n.incoming > n.obj->capacity) {
        throw RuntimeFault{n.obj->name + " exceeds its capacity"};
      }
    }
    if (counted != in_system_ || stats_.items_created != stats_.items_departed + counted) {
      throw RuntimeFault{"item conservation violated at t=" + flexscript::format_number(now_)};
    }
    if (opts_.observer) {
      opts_.observer(Observation{now_, stats_.items_created, stats_.items_departed, counted});
    }
  }

  void finish_stats() {
    const double end = stats_.simulated_horizon;
    for (Node& n : nodes_) {
      if (n.busy_since >= 0) n.stats.busy_time += end - n.busy_since;
      if (n.blocked_since >= 0) n.stats.blocked_time += end - n.blocked_since;
      n.stats.utilization = end > 0 ? n.stats.busy_time / end : 0.0;
      stats_.objects.push_back(n.stats);
    }
    stats_.items_in_system = in_system_;
  }

  const RunOptions& opts_;
  std::vector<Node> nodes_;
  EventQueue<Event> queue_;
  RunStats stats_;
  double now_ = 0.0;
  std::size_t in_system_ = 0;
  std::uint64_t next_item_ = 1;
};

}  // namespace

RunResult run(const SimModel& model, const RunOptions& options) {
  if (!(options.horizon > 0.0) || !std::isfinite(options.horizon)) {
    throw Error(ErrorCode::InvalidArgument, "horizon must be positive and finite");
  }
  return Engine(model, options).run();
}

RunResult execute(std::string_view script_text, const RunOptions& options) {
  const auto script = flexscript::parse(script_text);
  RunResult r;
  if (script.empty()) {
    r.outcome = ExecOutcome::failure(FailureReason::ParseEmpty, "no statements");
    return r;
  }
  if (!script.parse_errors.empty()) {
    const auto& e = script.parse_errors.front();
    r.outcome = ExecOutcome::failure(FailureReason::ParseError,
                                     "line " + std::to_string(e.line) + ": " + e.message);
    return r;
  }
  SimModel model;
  try {
    model = build_model(script);
  } catch (const ModelError& e) {
    r.outcome = ExecOutcome::failure(e.reason(), e.what());
    return r;
  }
  return run(model, options);
}

ExecOutcome exec_outcome(std::string_view script_text, double horizon, std::uint64_t seed) {
  RunOptions opts;
  opts.horizon = horizon;
  opts.seed = seed;
  return execute(script_text, opts).outcome;
}

std::string stats_json(const RunResult& result) {
  nlohmann::ordered_json j;
  j["outcome"] = result.outcome.label();
  if (!result.outcome.success) j["detail"] = result.outcome.detail;
  const auto& s = result.stats;
  nlohmann::ordered_json st;
  st["items_created"] = s.items_created;
  st["source_created"] = s.source_created;
  st["separator_spawned"] = s.separator_spawned;
  st["items_departed"] = s.items_departed;
  st["sink_absorbed"] = s.sink_absorbed;
  st["combiner_consumed"] = s.combiner_consumed;
  st["items_in_system"] = s.items_in_system;
  st["events_processed"] = s.events_processed;
  st["simulated_horizon"] = s.simulated_horizon;
  st["throughput"] = s.throughput();
  auto& objs = st["objects"] = nlohmann::ordered_json::array();
  for (const auto& o : s.objects) {
    objs.push_back({{"name", o.name},
                    {"entered", o.entered},
                    {"exited", o.exited},
                    {"max_content", o.max_content},
                    {"busy_time", o.busy_time},
                    {"blocked_time", o.blocked_time},
                    {"utilization", o.utilization}});
  }
  j["stats"] = std::move(st);
  return j.dump(2) + "\n";
}

}  // namespace gdt::sim
