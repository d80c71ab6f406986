#include <fmt/format.h>

#include "crala/parser.hpp"

namespace crala {

namespace {

std::string quote(std::string_view value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c; break;
    }
  }
  out += '"';
  return out;
}

// Bare when the word lexes as an identifier, quoted otherwise.
std::string word(std::string_view value) {
  return is_identifier(value) ? std::string(value) : quote(value);
}

class Writer {
 public:
  void line(int depth, std::string_view text) {
    out_.append(static_cast<std::size_t>(depth) * 2, ' ');
    out_ += text;
    out_ += '\n';
  }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

void write_interfaces(Writer& w, int depth, const std::vector<InterfaceRef>& interfaces) {
  for (const auto& i : interfaces) {
    w.line(depth, fmt::format("{} {}", i.direction == Direction::provided ? "provides" : "requires", i.name));
  }
}

void write_annotations(Writer& w, int depth, const Annotations& annotations) {
  for (const auto& [key, value] : annotations) {
    w.line(depth, fmt::format("annotate {} = {}", key, quote(value)));
  }
}

void write_devices(Writer& w, int depth, const std::vector<DeviceSpec>& sensors,
                   const std::vector<DeviceSpec>& actuators) {
  for (const auto& d : sensors) w.line(depth, fmt::format("sensor {}: {}", d.name, word(d.kind)));
  for (const auto& d : actuators) w.line(depth, fmt::format("actuator {}: {}", d.name, word(d.kind)));
}

void write_connections(Writer& w, int depth, const std::vector<Connection>& connections) {
  for (const auto& c : connections) {
    std::string text = fmt::format("connect {} {} {}", c.from.dotted(),
                                   c.op == ConnectionOp::directed ? "->" : "~", c.to.dotted());
    if (c.protocol) text += " via " + word(*c.protocol);
    w.line(depth, text);
  }
}

void write_cloud(Writer& w, int depth, const CloudDescription& cloud) {
  w.line(depth, fmt::format("cloud {} {{", cloud.name));
  w.line(depth + 1, fmt::format("network = {}", to_string(cloud.network)));
  w.line(depth + 1, fmt::format("scheduler = {}", to_string(cloud.scheduler)));
  for (const auto& pm : cloud.machines) {
    w.line(depth + 1, fmt::format("machine {} {{", pm.name));
    w.line(depth + 2, fmt::format("cpu_cores = {}", pm.cpu_cores));
    w.line(depth + 2, fmt::format("ram_mb = {}", pm.ram_mb));
    w.line(depth + 1, "}");
  }
  w.line(depth, "}");
}

struct DocumentWriter {
  Writer& w;

  void operator()(const Specification& spec) const {
    w.line(0, fmt::format("specification {} {{", spec.name));
    for (const auto& role : spec.roles) {
      w.line(1, fmt::format("role {} {{", role.name));
      write_interfaces(w, 2, role.interfaces);
      write_annotations(w, 2, role.annotations);
      w.line(1, "}");
    }
    for (const auto& robot : spec.robots) {
      w.line(1, fmt::format("concept_robot {} {{", robot.name));
      write_devices(w, 2, robot.sensors, robot.actuators);
      w.line(1, "}");
    }
    write_connections(w, 1, spec.connections);
    w.line(0, "}");
  }

  void operator()(const Configuration& config) const {
    w.line(0, fmt::format("configuration {} implements {} {{", config.name, config.implements));
    for (const auto& robot : config.robots) {
      w.line(1, fmt::format("robot {}: {} realizes {} {{", robot.name, word(robot.model), robot.realizes));
      write_devices(w, 2, robot.sensors, robot.actuators);
      w.line(1, "}");
    }
    for (const auto& vm : config.vms) {
      w.line(1, fmt::format("vm {} {{", vm.name));
      if (vm.os) w.line(2, fmt::format("os = {}", quote(*vm.os)));
      w.line(2, fmt::format("cpu_cores = {}", vm.cpu_cores));
      w.line(2, fmt::format("ram_mb = {}", vm.ram_mb));
      if (vm.subnet) w.line(2, fmt::format("subnet = {}", quote(*vm.subnet)));
      w.line(1, "}");
    }
    for (const auto& impl : config.impls) {
      w.line(1, fmt::format("{} {} realizes {} on {} {{",
                            impl.variant == ImplVariant::web_service ? "service" : "component", impl.name,
                            impl.realizes, impl.host));
      write_interfaces(w, 2, impl.interfaces);
      write_annotations(w, 2, impl.annotations);
      w.line(1, "}");
    }
    write_connections(w, 1, config.connections);
    w.line(0, "}");
  }

  void operator()(const Assembly& assembly) const {
    w.line(0, fmt::format("assembly {} deploys {} {{", assembly.name, assembly.deploys));
    for (const auto& cloud : assembly.clouds) write_cloud(w, 1, cloud);
    for (const auto& p : assembly.placements) {
      w.line(1, fmt::format("place {} on {}.{}", p.vm, p.cloud, p.machine));
    }
    for (const auto& inst : assembly.instances) {
      w.line(1, fmt::format("instance {} of {}{}", inst.name, inst.of,
                            inst.state == InstanceState::failed ? " state failed" : ""));
    }
    w.line(0, "}");
  }
};

}  // namespace

std::string format(const Document& document) {
  Writer w;
  std::visit(DocumentWriter{w}, document);
  return w.take();
}

std::string format(const CloudDescription& cloud) {
  Writer w;
  write_cloud(w, 0, cloud);
  return w.take();
}

}  // namespace crala
