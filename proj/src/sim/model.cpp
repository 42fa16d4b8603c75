#include "gdt/sim/model.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "gdt/flexscript/number.hpp"

namespace gdt::sim {

using flexscript::is_machine;
using flexscript::is_transporter;
using flexscript::ParamValue;
using flexscript::PortKind;

std::optional<std::size_t> SimModel::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].name == name) return i;
  }
  return std::nullopt;
}

namespace {

bool is_buffer(ObjectType t) { return t == ObjectType::queue || t == ObjectType::conveyor; }

[[noreturn]] void invalid(const std::string& object, const std::string& param,
                          const std::string& why) {
  throw ModelError(FailureReason::RuntimeError,
                   object + "." + param + ": " + why);
}

DistributionExpr as_timing(const ParamValue& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    return DistributionExpr{flexscript::Family::constant, {*d}};
  }
  return std::get<DistributionExpr>(v);
}

double as_scalar(const ParamValue& v, const std::string& object, const std::string& param) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  const auto& e = std::get<DistributionExpr>(v);
  if (e.family == flexscript::Family::constant) return e.args[0];
  invalid(object, param, "expects a number, got " + flexscript::to_string(e));
}

std::size_t as_count(const ParamValue& v, const std::string& object, const std::string& param) {
  const double x = as_scalar(v, object, param);
  if (!(x >= 1.0) || x != std::floor(x) || x > 1e9) {
    invalid(object, param, "expects a positive integer, got " + flexscript::to_string(v));
  }
  return static_cast<std::size_t>(x);
}

double as_speed(const ParamValue& v, const std::string& object, const std::string& param) {
  const double x = as_scalar(v, object, param);
  if (!(x > 0.0)) invalid(object, param, "expects a positive speed, got " + flexscript::to_string(v));
  return x;
}

void apply_param(ModelObject& obj, const flexscript::ParamAssignment& p,
                 std::vector<std::string>& diagnostics) {
  const ObjectType t = obj.type;
  auto not_applicable = [&] {
    diagnostics.push_back(obj.name + ": parameter " + p.name + " does not apply to " +
                          std::string(flexscript::type_path(t)) + "; ignored");
  };
  if (p.name == "InterArrivalTime") {
    if (t == ObjectType::source) obj.inter_arrival = as_timing(p.value);
    else not_applicable();
  } else if (p.name == "ProcessTime") {
    if (is_machine(t)) obj.process_time = as_timing(p.value);
    else not_applicable();
  } else if (p.name == "SetupTime") {
    if (is_machine(t)) obj.setup_time = as_timing(p.value);
    else not_applicable();
  } else if (p.name == "Capacity") {
    if (is_buffer(t)) obj.capacity = as_count(p.value, obj.name, p.name);
    else not_applicable();
  } else if (p.name == "ComponentQuantity") {
    if (t == ObjectType::combiner) obj.component_quantity = as_count(p.value, obj.name, p.name);
    else not_applicable();
  } else if (p.name == "SplitQuantity") {
    if (t == ObjectType::separator) obj.split_quantity = as_count(p.value, obj.name, p.name);
    else not_applicable();
  } else if (p.name == "ConveySpeed") {
    if (t == ObjectType::conveyor) obj.convey_speed = as_speed(p.value, obj.name, p.name);
    else not_applicable();
  } else if (p.name == "TravelSpeed") {
    if (is_transporter(t)) obj.travel_speed = as_speed(p.value, obj.name, p.name);
    else not_applicable();
  } else {
    diagnostics.push_back(obj.name + ": unknown parameter " + p.name + " ignored");
  }
}

void note_defaults(const ModelObject& obj, const std::set<std::string>& assigned,
                   std::vector<std::string>& diagnostics) {
  auto note = [&](const char* param, const std::string& value) {
    if (!assigned.count(param)) {
      diagnostics.push_back(obj.name + ": " + param + " defaults to " + value);
    }
  };
  using flexscript::format_number;
  const ObjectType t = obj.type;
  if (is_buffer(t)) note("Capacity", std::to_string(kDefaultQueueCapacity));
  if (t == ObjectType::conveyor) note("ConveySpeed", format_number(kDefaultConveySpeed));
  if (is_machine(t)) note("SetupTime", "0");
  if (t == ObjectType::combiner) note("ComponentQuantity", std::to_string(kDefaultComponentQuantity));
  if (t == ObjectType::separator) note("SplitQuantity", std::to_string(kDefaultSplitQuantity));
  if (is_transporter(t)) note("TravelSpeed", format_number(kDefaultTravelSpeed));
}

}  // namespace

SimModel build_model(const flexscript::Script& script) {
  for (const auto& d : script.diagnostics) {
    if (d.kind == flexscript::DiagnosticKind::DanglingReference) {
      throw ModelError(FailureReason::DanglingReference, d.message);
    }
  }

  SimModel model;
  std::map<std::string, std::size_t> index;
  for (const auto& d : script.decls) {
    index.emplace(d.name, model.objects.size());
    ModelObject obj;
    obj.name = d.name;
    obj.type = d.type;
    obj.position = d.position;
    model.objects.push_back(std::move(obj));
  }

  std::map<std::size_t, std::set<std::string>> assigned;
  for (const auto& p : script.params) {
    const std::size_t i = index.at(p.object);
    apply_param(model.objects[i], p, model.diagnostics);
    assigned[i].insert(p.name);
  }

  std::set<std::tuple<std::size_t, std::size_t, PortKind>> seen;
  for (const auto& c : script.connections) {
    const std::size_t from = index.at(c.from);
    const std::size_t to = index.at(c.to);
    if (!seen.emplace(from, to, c.port).second) continue;
    auto& a = model.objects[from];
    auto& b = model.objects[to];
    auto ignore = [&](const std::string& why) {
      model.diagnostics.push_back("connection " + c.from + " -> " + c.to + " (" +
                                  std::string(flexscript::port_code(c.port)) + ") ignored: " + why);
    };
    if (c.port == PortKind::flow) {
      if (!flexscript::is_flow_object(a.type) || !flexscript::is_flow_object(b.type)) {
        ignore("task executers and dispatchers have no flow ports");
      } else if (a.type == ObjectType::sink) {
        ignore("sinks have no output ports");
      } else if (b.type == ObjectType::source) {
        ignore("sources have no input ports");
      } else {
        a.outputs.push_back(to);
        b.inputs.push_back(from);
      }
      continue;
    }
    // Center port bindings, accepted in either direction.
    auto is_carrier = [](ObjectType t) { return is_transporter(t) || t == ObjectType::dispatcher; };
    std::size_t station = from, carrier = to;
    if (is_carrier(a.type) && !is_carrier(b.type)) std::swap(station, carrier);
    auto& st = model.objects[station];
    auto& ca = model.objects[carrier];
    if (flexscript::is_flow_object(st.type) && is_carrier(ca.type)) {
      if (st.type == ObjectType::source) {
        ignore("sources create items in place and need no carrier");
      } else if (st.carrier) {
        ignore(st.name + " already bound to " + model.objects[*st.carrier].name);
      } else {
        st.carrier = carrier;
      }
    } else if (a.type == ObjectType::dispatcher && is_transporter(b.type)) {
      a.fleet.push_back(to);
    } else if (b.type == ObjectType::dispatcher && is_transporter(a.type)) {
      b.fleet.push_back(from);
    } else {
      ignore("center ports link stations to task executers or dispatchers");
    }
  }

  // Every source must reach some sink.
  bool any_source = false;
  for (std::size_t s = 0; s < model.objects.size(); ++s) {
    if (model.objects[s].type != ObjectType::source) continue;
    any_source = true;
    std::vector<bool> visited(model.objects.size(), false);
    std::deque<std::size_t> frontier{s};
    visited[s] = true;
    bool reached = false;
    while (!frontier.empty() && !reached) {
      const std::size_t u = frontier.front();
      frontier.pop_front();
      for (std::size_t v : model.objects[u].outputs) {
        if (model.objects[v].type == ObjectType::sink) reached = true;
        if (!visited[v]) {
          visited[v] = true;
          frontier.push_back(v);
        }
      }
    }
    if (!reached) {
      throw ModelError(FailureReason::NoPathToSink,
                       "source " + model.objects[s].name + " has no flow path to a sink");
    }
  }
  if (!any_source) throw ModelError(FailureReason::NoPathToSink, "model has no source");

  for (std::size_t i = 0; i < model.objects.size(); ++i) {
    const auto& obj = model.objects[i];
    if (obj.type == ObjectType::source && !obj.inter_arrival) {
      throw ModelError(FailureReason::MissingRequiredParam,
                       obj.name + " has no InterArrivalTime");
    }
    if (is_machine(obj.type) && !obj.process_time) {
      throw ModelError(FailureReason::MissingRequiredParam, obj.name + " has no ProcessTime");
    }
    note_defaults(obj, assigned[i], model.diagnostics);
  }
  return model;
}

}  // namespace gdt::sim
