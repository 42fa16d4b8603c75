#include "gdt/gen/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "gdt/dist/rng.hpp"
#include "gdt/flexscript/emit.hpp"
#include "gdt/flexscript/number.hpp"

namespace gdt::gen {

using flexscript::Connection;
using flexscript::ObjectDecl;
using flexscript::ObjectType;
using flexscript::ParamAssignment;
using flexscript::PortKind;
using flexscript::Position;
using flexscript::Script;

namespace {

constexpr std::uint64_t kPromptStream = 1;

struct Element {
  ObjectType type;
  std::string name;
};

class Namer {
 public:
  Element make(ObjectType type) {
    const auto i = static_cast<std::size_t>(type);
    return {type, std::string(stem(type)) + std::to_string(++counts_[i])};
  }

  static std::string_view stem(ObjectType type) {
    switch (type) {
      case ObjectType::source: return "Source";
      case ObjectType::queue: return "Queue";
      case ObjectType::processor: return "Processor";
      case ObjectType::conveyor: return "Conveyor";
      case ObjectType::combiner: return "Combiner";
      case ObjectType::sink: return "Sink";
      case ObjectType::operator_: return "Operator";
      case ObjectType::robot: return "Robot";
      case ObjectType::agv: return "AGV";
      case ObjectType::taskexecuter: return "TaskExecuter";
      default: return "Object";
    }
  }

 private:
  std::array<std::size_t, 16> counts_{};
};

// Buffers and machines of one chain segment: buffer, processor, buffer,
// processor, ... A conveyor layout type follows every processor with a
// conveyor unless the next element already is one.
std::vector<Element> machine_run(Namer& namer, const GenSpec& spec, std::size_t machines,
                                 ObjectType buffer, bool leading_buffer_is_queue) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < machines; ++i) {
    const ObjectType b = (i == 0 && leading_buffer_is_queue) ? ObjectType::queue : buffer;
    if (out.empty() || out.back().type != ObjectType::conveyor || b != ObjectType::conveyor) {
      out.push_back(namer.make(b));
    }
    out.push_back(namer.make(ObjectType::processor));
    if (spec.layout_type == LayoutType::conveyor) {
      const bool next_is_conveyor = i + 1 < machines && buffer == ObjectType::conveyor;
      if (!next_is_conveyor) out.push_back(namer.make(ObjectType::conveyor));
    }
  }
  return out;
}

std::optional<ObjectType> transporter_type(Automation a) {
  switch (a) {
    case Automation::manual: return std::nullopt;
    case Automation::operator_: return ObjectType::operator_;
    case Automation::robot: return ObjectType::robot;
    case Automation::agv: return ObjectType::agv;
    case Automation::task_executor: return ObjectType::taskexecuter;
  }
  return std::nullopt;
}

void add_decl(Script& s, const Element& e, Position p) {
  s.decls.push_back(ObjectDecl{e.type, e.name, p, 0});
}

void add_flow(Script& s, const std::string& from, const std::string& to) {
  s.connections.push_back(Connection{from, to, PortKind::flow, 0});
}

void add_chain_flows(Script& s, const std::vector<Element>& chain) {
  for (std::size_t i = 1; i < chain.size(); ++i) add_flow(s, chain[i - 1].name, chain[i].name);
}

std::string fmt(double v) { return flexscript::format_number(std::round(v * 100.0) / 100.0); }

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Script build_script(const GenSpec& spec) {
  Script s;
  Namer namer;
  const Element source = namer.make(ObjectType::source);
  std::vector<std::string> capacity_two;
  double x_extent = 0.0;

  if (spec.layout_category != LayoutCategory::parallel) {
    const ObjectType buffer = spec.layout_category == LayoutCategory::conveyor_form
                                  ? ObjectType::conveyor
                                  : ObjectType::queue;
    std::vector<Element> chain{source};
    for (auto& e : machine_run(namer, spec, spec.n_machines, buffer, false)) chain.push_back(e);
    chain.push_back(namer.make(ObjectType::sink));

    const std::size_t len = chain.size();
    const std::size_t fold = (len + 1) / 2;
    for (std::size_t i = 0; i < len; ++i) {
      Position p{kGridSpacing * static_cast<double>(i), 0.0, 0.0};
      if (spec.layout_category == LayoutCategory::u_shaped && i >= fold) {
        p = {kGridSpacing * static_cast<double>(len - 1 - i), 2.0 * kGridSpacing, 0.0};
      }
      add_decl(s, chain[i], p);
      x_extent = std::max(x_extent, p.x);
    }
    add_chain_flows(s, chain);
  } else {
    const std::size_t n_a = (spec.n_machines + 1) / 2;
    const std::size_t n_b = spec.n_machines - n_a;
    auto branch = [&](std::size_t machines) {
      std::vector<Element> b;
      if (machines == 0) {
        b.push_back(namer.make(ObjectType::queue));
      } else {
        b = machine_run(namer, spec, machines, ObjectType::queue, true);
      }
      capacity_two.push_back(b.front().name);
      return b;
    };
    const auto a = branch(n_a);
    const auto b = branch(n_b);
    const Element combiner = namer.make(ObjectType::combiner);
    const Element sink = namer.make(ObjectType::sink);

    add_decl(s, source, {0.0, 0.0, 0.0});
    for (std::size_t k = 0; k < a.size(); ++k) {
      add_decl(s, a[k], {kGridSpacing * static_cast<double>(k + 1), kGridSpacing, 0.0});
    }
    for (std::size_t k = 0; k < b.size(); ++k) {
      add_decl(s, b[k], {kGridSpacing * static_cast<double>(k + 1), -kGridSpacing, 0.0});
    }
    const double cx = kGridSpacing * static_cast<double>(std::max(a.size(), b.size()) + 1);
    add_decl(s, combiner, {cx, 0.0, 0.0});
    add_decl(s, sink, {cx + kGridSpacing, 0.0, 0.0});
    x_extent = cx + kGridSpacing;

    add_flow(s, source.name, a.front().name);
    add_flow(s, source.name, b.front().name);
    add_chain_flows(s, a);
    add_chain_flows(s, b);
    // The combiner takes its container from the first inbound edge.
    add_flow(s, a.back().name, combiner.name);
    add_flow(s, b.back().name, combiner.name);
    add_flow(s, combiner.name, sink.name);
  }

  std::optional<Element> transporter;
  if (const auto t = transporter_type(spec.automation)) {
    transporter = namer.make(*t);
    const double y = spec.layout_category == LayoutCategory::u_shaped ? kGridSpacing
                     : spec.layout_category == LayoutCategory::parallel ? -2.0 * kGridSpacing
                                                                         : -kGridSpacing;
    add_decl(s, *transporter, {std::round(x_extent / 2.0), y, 0.0});
  }

  // Parameters in declaration order.
  std::size_t machine = 0;
  for (const auto& d : s.decls) {
    switch (d.type) {
      case ObjectType::source:
        s.params.push_back({d.name, "InterArrivalTime", spec.source_dist, 0});
        break;
      case ObjectType::processor:
        s.params.push_back({d.name, "ProcessTime", spec.machine_dists.at(machine++), 0});
        break;
      case ObjectType::queue:
        if (std::find(capacity_two.begin(), capacity_two.end(), d.name) != capacity_two.end()) {
          s.params.push_back({d.name, "Capacity", kParallelBufferCapacity, 0});
        }
        break;
      case ObjectType::combiner:
        s.params.push_back(
            {d.name, "ProcessTime", flexscript::make_distribution(flexscript::Family::constant, {1.0}), 0});
        break;
      case ObjectType::conveyor:
        s.params.push_back({d.name, "ConveySpeed", spec.convey_speed, 0});
        break;
      case ObjectType::operator_:
      case ObjectType::robot:
      case ObjectType::agv:
      case ObjectType::taskexecuter:
        s.params.push_back({d.name, "TravelSpeed", spec.travel_speed, 0});
        break;
      default:
        break;
    }
  }

  if (transporter) {
    for (const auto& d : s.decls) {
      if (d.type == ObjectType::processor) {
        s.connections.push_back(Connection{d.name, transporter->name, PortKind::center, 0});
      }
    }
  }
  s.recognized_statements = s.decls.size() + s.params.size() + s.connections.size();
  return s;
}

std::string emit_code(const GenSpec& spec) { return flexscript::emit_canonical(build_script(spec)); }

std::string render_sketch(const GenSpec& spec) {
  const Script s = build_script(spec);
  constexpr double kScale = 30.0;
  constexpr double kMargin = 70.0;
  constexpr double kTitle = 50.0;
  constexpr double kBoxW = 96.0;
  constexpr double kBoxH = 40.0;

  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (const auto& d : s.decls) {
    min_x = std::min(min_x, d.position.x);
    max_x = std::max(max_x, d.position.x);
    min_y = std::min(min_y, d.position.y);
    max_y = std::max(max_y, d.position.y);
  }
  auto px = [&](const Position& p) { return kMargin + (p.x - min_x) * kScale; };
  auto py = [&](const Position& p) { return kTitle + kMargin + (max_y - p.y) * kScale; };
  const double width = 2 * kMargin + (max_x - min_x) * kScale;
  const double height = kTitle + 2 * kMargin + (max_y - min_y) * kScale;

  // Segment between two boxes, trimmed to their borders.
  auto segment = [&](const Position& a, const Position& b) {
    const double x1 = px(a), y1 = py(a), x2 = px(b), y2 = py(b);
    const double dx = x2 - x1, dy = y2 - y1;
    double t = 0.0;
    if (dx != 0.0 || dy != 0.0) {
      const double tx = dx != 0.0 ? (kBoxW / 2.0) / std::abs(dx) : 1e9;
      const double ty = dy != 0.0 ? (kBoxH / 2.0) / std::abs(dy) : 1e9;
      t = std::min({tx, ty, 0.5});
    }
    std::ostringstream o;
    o << "x1=\"" << fmt(x1 + dx * t) << "\" y1=\"" << fmt(y1 + dy * t) << "\" x2=\""
      << fmt(x2 - dx * t) << "\" y2=\"" << fmt(y2 - dy * t) << "\"";
    return o.str();
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\">\n";
  out << "  <defs>\n"
         "    <marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" "
         "markerHeight=\"8\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#333\"/></marker>\n"
         "  </defs>\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  out << "  <text class=\"title\" x=\"" << fmt(kMargin / 2) << "\" y=\"32\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << xml_escape(kIndustries[spec.industry].label) << " | " << xml_escape(label(spec.automation))
      << " handling | " << xml_escape(label(spec.layout_category)) << ", "
      << xml_escape(label(spec.layout_type)) << "</text>\n";

  for (const auto& c : s.connections) {
    const auto* a = s.find(c.from);
    const auto* b = s.find(c.to);
    if (c.port == PortKind::flow) {
      out << "  <line class=\"flow\" data-from=\"" << xml_escape(c.from) << "\" data-to=\""
          << xml_escape(c.to) << "\" " << segment(a->position, b->position)
          << " stroke=\"#333\" stroke-width=\"2\" marker-end=\"url(#arrow)\"/>\n";
    } else {
      out << "  <line class=\"binding\" data-from=\"" << xml_escape(c.from) << "\" data-to=\""
          << xml_escape(c.to) << "\" " << segment(a->position, b->position)
          << " stroke=\"#888\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
    }
  }
  for (const auto& d : s.decls) {
    const double cx = px(d.position), cy = py(d.position);
    out << "  <g class=\"object\">\n"
        << "    <rect data-name=\"" << xml_escape(d.name) << "\" data-type=\""
        << flexscript::type_path(d.type) << "\" x=\"" << fmt(cx - kBoxW / 2) << "\" y=\""
        << fmt(cy - kBoxH / 2) << "\" width=\"" << fmt(kBoxW) << "\" height=\"" << fmt(kBoxH)
        << "\" rx=\"4\" fill=\"#f4f4f4\" stroke=\"#333\"/>\n"
        << "    <text x=\"" << fmt(cx) << "\" y=\"" << fmt(cy - 3)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << xml_escape(d.name) << "</text>\n"
        << "    <text x=\"" << fmt(cx) << "\" y=\"" << fmt(cy + 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\" fill=\"#666\">"
        << flexscript::type_path(d.type) << "</text>\n"
        << "  </g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

namespace {

template <std::size_t N>
std::string_view choose(dist::Xoshiro256& rng, const std::array<std::string_view, N>& options) {
  return options[rng.below(N)];
}

std::string mention(dist::Xoshiro256& rng, const ParamAssignment& p) {
  const std::string v = flexscript::to_string(p.value);
  switch (rng.below(4)) {
    case 0: {
      const bool vowel = std::string_view("AEIOU").find(p.name.front()) != std::string_view::npos;
      return p.object + (vowel ? " has an " : " has a ") + p.name + " of " + v;
    }
    case 1: return p.object + " uses " + p.name + " " + v;
    case 2: return p.object + " gets " + p.name + " = " + v;
    default: return "for " + p.object + ", set " + p.name + " to " + v;
  }
}

// Lowercase labels only; "U-shaped" keeps "a".
std::string_view article(std::string_view word) {
  return std::string_view("aeiou").find(word.front()) != std::string_view::npos ? "an" : "a";
}

}  // namespace

std::string render_prompt(const GenSpec& spec) {
  const Script s = build_script(spec);
  dist::Xoshiro256 rng(dist::derive_seed(spec.seed, kPromptStream));

  const std::size_t family = rng.below(4);
  const auto plant = choose(rng, std::array<std::string_view, 3>{"plant", "factory", "facility"});
  const auto machines =
      choose(rng, std::array<std::string_view, 3>{"machines", "workstations", "processing stations"});
  const auto lead = choose(rng, std::array<std::string_view, 3>{
                                    "Parameters", "Use these settings", "Timing and resources"});

  std::string list;
  for (std::size_t i = 0; i < s.params.size(); ++i) {
    if (i > 0) list += "; ";
    list += mention(rng, s.params[i]);
  }

  const std::string industry(kIndustries[spec.industry].label);
  const std::string automation(label(spec.automation));
  const std::string category(label(spec.layout_category));
  const std::string layout(label(spec.layout_type));
  const std::string n = std::to_string(spec.n_machines);

  std::ostringstream out;
  switch (family) {
    case 0:
      out << "Create a " << layout << " " << category << " production line for "
          << article(industry) << " " << industry << " " << plant << " with " << n << " "
          << machines << " and " << automation << " material handling. " << lead << ": "
          << list << ".";
      break;
    case 1:
      out << "Build a simulation model of " << article(industry) << " " << industry << " "
          << plant << ". The layout is " << category << " and " << layout << ", with " << n
          << " " << machines << " and " << automation << " handling. " << lead << ": " << list
          << ".";
      break;
    case 2:
      out << "I need a " << category << " " << industry << " line (" << layout << ") containing "
          << n << " " << machines << ", with material moved by " << automation << " handling. "
          << lead << ": " << list << ".";
      break;
    default:
      out << "Generate FlexScript for " << article(industry) << " " << industry << " " << plant
          << " laid out as a " << category << " " << layout << " line of " << n << " "
          << machines << " under " << automation << " handling. " << lead << ": " << list
          << ".";
      break;
  }
  return out.str();
}

}  // namespace gdt::gen
