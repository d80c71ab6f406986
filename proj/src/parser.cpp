#include "crala/parser.hpp"

#include <algorithm>
#include <charconv>
#include <fmt/format.h>
#include <initializer_list>
#include <set>

#include "crala/lexer.hpp"

namespace crala {

namespace {

const std::initializer_list<std::string_view> kDocumentKeywords = {"specification", "configuration", "assembly",
                                                                  "cloud"};

// Thrown after a diagnostic has been recorded; caught by the enclosing block loop.
struct SyntaxError {};

std::string join(std::initializer_list<std::string_view> words) {
  std::string out;
  for (auto w : words) {
    if (!out.empty()) out += ", ";
    out += w;
  }
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file, std::vector<Diagnostic>& diagnostics)
      : tokens_(std::move(tokens)), file_(std::move(file)), diagnostics_(diagnostics) {}

  void run(ParseResult& result) {
    while (!at(TokenKind::end)) {
      const std::size_t before = pos_;
      try {
        parse_top_level(result);
      } catch (const SyntaxError&) {
        recover_top_level();
      }
      if (pos_ == before) advance();
    }
  }

 private:
  // -- token helpers --------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at(TokenKind kind) const { return peek().kind == kind; }
  bool at_keyword(std::string_view word) const {
    return peek().kind == TokenKind::identifier && peek().text == word;
  }
  bool at_any_keyword(std::initializer_list<std::string_view> words) const {
    return std::ranges::any_of(words, [&](std::string_view w) { return at_keyword(w); });
  }
  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    last_end_ = t.end;
    return t;
  }

  SourceSpan span(std::size_t start, std::size_t end) const { return SourceSpan{file_, start, end}; }
  SourceSpan token_span(const Token& t) const { return span(t.start, t.end); }
  DeclSpan decl_from(std::size_t start) const { return DeclSpan{span(start, last_end_)}; }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokenKind::identifier:
      case TokenKind::integer: return fmt::format("'{}'", t.text);
      case TokenKind::string: return "string literal";
      default: return std::string(to_string(t.kind));
    }
  }

  [[noreturn]] void fail(const Token& at_token, std::string message) {
    error("E-PARSE-01", std::move(message), token_span(at_token));
    throw SyntaxError{};
  }

  void error(std::string_view code, std::string message, SourceSpan where) {
    diagnostics_.push_back(make_diagnostic(code, std::move(message), std::move(where)));
  }

  const Token& expect(TokenKind kind, std::string_view context) {
    if (!at(kind)) {
      fail(peek(), fmt::format("expected {} {}, found {}", to_string(kind), context, describe(peek())));
    }
    return advance();
  }

  void expect_keyword(std::string_view word) {
    if (!at_keyword(word)) {
      fail(peek(), fmt::format("expected '{}', found {}", word, describe(peek())));
    }
    advance();
  }

  Identifier expect_identifier(std::string_view what) {
    if (!at(TokenKind::identifier)) {
      fail(peek(), fmt::format("expected {} name, found {}", what, describe(peek())));
    }
    return advance().text;
  }

  // An identifier or a string literal (robot model, device kind, protocol).
  std::string expect_word(std::string_view what) {
    if (!at(TokenKind::identifier) && !at(TokenKind::string)) {
      fail(peek(), fmt::format("expected {}, found {}", what, describe(peek())));
    }
    return advance().text;
  }

  std::vector<Identifier> parse_path() {
    std::vector<Identifier> path{expect_identifier("element")};
    while (at(TokenKind::dot)) {
      advance();
      path.push_back(expect_identifier("element"));
    }
    return path;
  }

  // -- recovery -------------------------------------------------------------

  // Skips to the next item keyword of the current block, or to its closing
  // brace (left unconsumed).
  void recover_in_block(std::initializer_list<std::string_view> item_keywords) {
    int depth = 0;
    while (!at(TokenKind::end)) {
      if (depth == 0 && at(TokenKind::rbrace)) return;
      if (depth == 0 && at_any_keyword(item_keywords)) return;
      if (at(TokenKind::lbrace)) ++depth;
      if (at(TokenKind::rbrace)) --depth;
      advance();
    }
  }

  void recover_top_level() {
    while (!at(TokenKind::end)) {
      if (at_any_keyword(kDocumentKeywords) && peek(1).kind == TokenKind::identifier) return;
      advance();
    }
  }

  // Parses `{ item* }`, recovering per item.
  template <typename ItemFn>
  void parse_block(std::initializer_list<std::string_view> item_keywords, std::string_view owner,
                   ItemFn&& item) {
    expect(TokenKind::lbrace, fmt::format("to open {}", owner));
    while (!at(TokenKind::rbrace)) {
      if (at(TokenKind::end)) {
        fail(peek(), fmt::format("unterminated {}: expected '}}'", owner));
      }
      const std::size_t before = pos_;
      try {
        if (!at_any_keyword(item_keywords)) {
          fail(peek(), fmt::format("unexpected {} in {}; expected one of {}", describe(peek()), owner,
                                   join(item_keywords)));
        }
        item();
      } catch (const SyntaxError&) {
        if (pos_ == before) advance();
        recover_in_block(item_keywords);
      }
    }
    advance();
  }

  template <typename T>
  bool add_unique(std::vector<T>& items, T item, std::string_view kind) {
    if (find_named(items, item.name) != nullptr) {
      error("E-PARSE-02", fmt::format("{} '{}' is already declared", kind, item.name), item.span.value);
      return false;
    }
    items.push_back(std::move(item));
    return true;
  }

  // -- shared items ---------------------------------------------------------

  void parse_interface(std::vector<InterfaceRef>& interfaces) {
    const Token& kw = advance();
    InterfaceRef ref{expect_identifier("interface"),
                     kw.text == "provides" ? Direction::provided : Direction::required};
    if (std::ranges::find(interfaces, ref) != interfaces.end()) {
      error("E-PARSE-02", fmt::format("interface '{} {}' is already declared", kw.text, ref.name),
            span(kw.start, last_end_));
      return;
    }
    interfaces.push_back(std::move(ref));
  }

  void parse_annotation(Annotations& annotations) {
    const Token& kw = advance();
    auto key = expect_identifier("annotation");
    expect(TokenKind::equals, "after annotation key");
    auto value = expect(TokenKind::string, "as annotation value").text;
    if (!annotations.emplace(key, std::move(value)).second) {
      error("E-PARSE-02", fmt::format("annotation '{}' is already set", key), span(kw.start, last_end_));
    }
  }

  void parse_device(std::vector<DeviceSpec>& sensors, std::vector<DeviceSpec>& actuators) {
    const Token& kw = advance();
    const std::size_t start = kw.start;
    const bool sensor = kw.text == "sensor";
    DeviceSpec device;
    device.name = expect_identifier(sensor ? "sensor" : "actuator");
    expect(TokenKind::colon, "before device kind");
    device.kind = expect_word("device kind");
    device.span = decl_from(start);
    if (device.kind.empty()) {
      error("E-PARSE-03", "device kind must not be empty", device.span.value);
      return;
    }
    if (find_named(sensors, device.name) || find_named(actuators, device.name)) {
      error("E-PARSE-02", fmt::format("device '{}' is already declared in this robot", device.name),
            device.span.value);
      return;
    }
    (sensor ? sensors : actuators).push_back(std::move(device));
  }

  Connection parse_connection() {
    const std::size_t start = advance().start;
    Connection c;
    c.from.path = parse_path();
    if (at(TokenKind::arrow)) {
      c.op = ConnectionOp::directed;
    } else if (at(TokenKind::tilde)) {
      c.op = ConnectionOp::abstract;
    } else {
      fail(peek(), fmt::format("expected '->' or '~' in connection, found {}", describe(peek())));
    }
    advance();
    c.to.path = parse_path();
    if (at_keyword("via")) {
      advance();
      c.protocol = expect_word("protocol");
    }
    c.span = decl_from(start);
    return c;
  }

  std::int64_t parse_positive(std::string_view attribute) {
    const Token& t = expect(TokenKind::integer, fmt::format("as value of '{}'", attribute));
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc{} || value < 1) {
      error("E-PARSE-03", fmt::format("'{}' must be a positive integer, got {}", attribute, t.text),
            token_span(t));
      return 1;
    }
    return value;
  }

  // Records `attribute = ...` once; a repeat is reported and still consumed.
  bool first_time(std::set<std::string>& seen, const Token& kw) {
    if (seen.insert(kw.text).second) return true;
    error("E-PARSE-03", fmt::format("attribute '{}' is given twice", kw.text), token_span(kw));
    return false;
  }

  void require_attributes(const std::set<std::string>& seen,
                          std::initializer_list<std::string_view> required, std::string_view owner,
                          const SourceSpan& where) {
    for (auto attr : required) {
      if (!seen.contains(std::string(attr))) {
        error("E-PARSE-03", fmt::format("{} is missing required attribute '{}'", owner, attr), where);
      }
    }
  }

  // -- documents ------------------------------------------------------------

  void parse_top_level(ParseResult& result) {
    if (at_keyword("specification")) {
      result.documents.emplace_back(parse_specification());
    } else if (at_keyword("configuration")) {
      result.documents.emplace_back(parse_configuration());
    } else if (at_keyword("assembly")) {
      result.documents.emplace_back(parse_assembly());
    } else if (at_keyword("cloud")) {
      auto cloud = parse_cloud();
      add_unique(result.clouds, std::move(cloud), "cloud");
    } else {
      fail(peek(), fmt::format("unexpected {}; expected one of {}", describe(peek()),
                               join(kDocumentKeywords)));
    }
  }

  // Runs a document body; an unterminated body still yields the partial document.
  template <typename Fn>
  void document_body(Fn&& body) {
    try {
      body();
    } catch (const SyntaxError&) {
      recover_top_level();
    }
  }

  Specification parse_specification() {
    const std::size_t start = advance().start;
    Specification spec;
    spec.name = expect_identifier("specification");
    document_body([&] {
      parse_block({"role", "concept_robot", "connect"}, "specification", [&] {
        if (at_keyword("role")) {
          add_unique(spec.roles, parse_role(), "role");
        } else if (at_keyword("concept_robot")) {
          add_unique(spec.robots, parse_concept_robot(), "concept robot");
        } else {
          spec.connections.push_back(parse_connection());
        }
      });
    });
    spec.span = decl_from(start);
    resolve_connections(spec);
    return spec;
  }

  ComponentRole parse_role() {
    const std::size_t start = advance().start;
    ComponentRole role;
    role.name = expect_identifier("role");
    parse_block({"provides", "requires", "annotate"}, "role", [&] {
      if (at_keyword("annotate")) {
        parse_annotation(role.annotations);
      } else {
        parse_interface(role.interfaces);
      }
    });
    role.span = decl_from(start);
    return role;
  }

  ConceptRobot parse_concept_robot() {
    const std::size_t start = advance().start;
    ConceptRobot robot;
    robot.name = expect_identifier("concept robot");
    parse_block({"sensor", "actuator"}, "concept robot",
                [&] { parse_device(robot.sensors, robot.actuators); });
    robot.span = decl_from(start);
    return robot;
  }

  Configuration parse_configuration() {
    const std::size_t start = advance().start;
    Configuration config;
    config.name = expect_identifier("configuration");
    expect_keyword("implements");
    config.implements = expect_identifier("specification");
    document_body([&] {
      parse_block({"robot", "vm", "component", "service", "connect"}, "configuration", [&] {
        if (at_keyword("robot")) {
          add_unique(config.robots, parse_robot_model(), "robot");
        } else if (at_keyword("vm")) {
          add_unique(config.vms, parse_vm(), "vm");
        } else if (at_keyword("connect")) {
          config.connections.push_back(parse_connection());
        } else {
          add_unique(config.impls, parse_implementation(), "implementation");
        }
      });
    });
    config.span = decl_from(start);
    resolve_connections(config);
    return config;
  }

  RobotModel parse_robot_model() {
    const std::size_t start = advance().start;
    RobotModel robot;
    robot.name = expect_identifier("robot");
    expect(TokenKind::colon, "before robot model");
    robot.model = expect_word("robot model");
    expect_keyword("realizes");
    robot.realizes = expect_identifier("concept robot");
    parse_block({"sensor", "actuator"}, "robot", [&] { parse_device(robot.sensors, robot.actuators); });
    robot.span = decl_from(start);
    return robot;
  }

  VirtualMachine parse_vm() {
    const std::size_t start = advance().start;
    VirtualMachine vm;
    vm.name = expect_identifier("vm");
    std::set<std::string> seen;
    parse_block({"os", "cpu_cores", "ram_mb", "subnet"}, "vm", [&] {
      const Token kw = advance();
      expect(TokenKind::equals, fmt::format("after '{}'", kw.text));
      if (kw.text == "os" || kw.text == "subnet") {
        auto value = expect(TokenKind::string, fmt::format("as value of '{}'", kw.text)).text;
        if (!first_time(seen, kw)) return;
        (kw.text == "os" ? vm.os : vm.subnet) = std::move(value);
      } else {
        auto value = parse_positive(kw.text);
        if (!first_time(seen, kw)) return;
        (kw.text == "cpu_cores" ? vm.cpu_cores : vm.ram_mb) = value;
      }
    });
    vm.span = decl_from(start);
    require_attributes(seen, {"cpu_cores", "ram_mb"}, fmt::format("vm '{}'", vm.name), vm.span.value);
    return vm;
  }

  ComponentImplementation parse_implementation() {
    const Token& kw = advance();
    const std::size_t start = kw.start;
    ComponentImplementation impl;
    impl.variant = kw.text == "service" ? ImplVariant::web_service : ImplVariant::component_class;
    impl.name = expect_identifier(kw.text);
    expect_keyword("realizes");
    impl.realizes = expect_identifier("role");
    expect_keyword("on");
    impl.host = expect_identifier("host");
    parse_block({"provides", "requires", "annotate"}, kw.text == "service" ? "service" : "component",
                [&] {
                  if (at_keyword("annotate")) {
                    parse_annotation(impl.annotations);
                  } else {
                    parse_interface(impl.interfaces);
                  }
                });
    impl.span = decl_from(start);
    return impl;
  }

  Assembly parse_assembly() {
    const std::size_t start = advance().start;
    Assembly assembly;
    assembly.name = expect_identifier("assembly");
    expect_keyword("deploys");
    assembly.deploys = expect_identifier("configuration");
    document_body([&] {
      parse_block({"cloud", "place", "instance"}, "assembly", [&] {
        if (at_keyword("cloud")) {
          add_unique(assembly.clouds, parse_cloud(), "cloud");
        } else if (at_keyword("place")) {
          assembly.placements.push_back(parse_placement());
        } else {
          add_unique(assembly.instances, parse_instance(), "instance");
        }
      });
    });
    assembly.span = decl_from(start);
    return assembly;
  }

  CloudDescription parse_cloud() {
    const std::size_t start = advance().start;
    CloudDescription cloud;
    cloud.name = expect_identifier("cloud");
    std::set<std::string> seen;
    parse_block({"network", "scheduler", "machine"}, "cloud", [&] {
      if (at_keyword("machine")) {
        add_unique(cloud.machines, parse_machine(), "machine");
        return;
      }
      const Token kw = advance();
      expect(TokenKind::equals, fmt::format("after '{}'", kw.text));
      const Token& value = expect(TokenKind::identifier, fmt::format("as value of '{}'", kw.text));
      if (kw.text == "network") {
        if (value.text != "flat" && value.text != "sdn") {
          error("E-PARSE-03", fmt::format("network must be 'flat' or 'sdn', got '{}'", value.text),
                token_span(value));
          return;
        }
        if (first_time(seen, kw)) cloud.network = value.text == "flat" ? NetworkMode::flat : NetworkMode::sdn;
      } else {
        if (value.text != "spread" && value.text != "pack") {
          error("E-PARSE-03", fmt::format("scheduler must be 'spread' or 'pack', got '{}'", value.text),
                token_span(value));
          return;
        }
        if (first_time(seen, kw)) {
          cloud.scheduler = value.text == "spread" ? SchedulingPolicy::spread : SchedulingPolicy::pack;
        }
      }
    });
    cloud.span = decl_from(start);
    require_attributes(seen, {"network", "scheduler"}, fmt::format("cloud '{}'", cloud.name),
                       cloud.span.value);
    return cloud;
  }

  PhysicalMachine parse_machine() {
    const std::size_t start = advance().start;
    PhysicalMachine pm;
    pm.name = expect_identifier("machine");
    std::set<std::string> seen;
    parse_block({"cpu_cores", "ram_mb"}, "machine", [&] {
      const Token kw = advance();
      expect(TokenKind::equals, fmt::format("after '{}'", kw.text));
      auto value = parse_positive(kw.text);
      if (!first_time(seen, kw)) return;
      (kw.text == "cpu_cores" ? pm.cpu_cores : pm.ram_mb) = value;
    });
    pm.span = decl_from(start);
    require_attributes(seen, {"cpu_cores", "ram_mb"}, fmt::format("machine '{}'", pm.name), pm.span.value);
    return pm;
  }

  VmPlacement parse_placement() {
    const std::size_t start = advance().start;
    VmPlacement p;
    p.vm = expect_identifier("vm");
    expect_keyword("on");
    p.cloud = expect_identifier("cloud");
    expect(TokenKind::dot, "between cloud and machine");
    p.machine = expect_identifier("machine");
    p.span = decl_from(start);
    return p;
  }

  ComponentInstance parse_instance() {
    const std::size_t start = advance().start;
    ComponentInstance inst;
    inst.name = expect_identifier("instance");
    expect_keyword("of");
    inst.of = expect_identifier("implementation");
    if (at_keyword("state")) {
      advance();
      const Token& value = expect(TokenKind::identifier, "as instance state");
      if (value.text == "running") {
        inst.state = InstanceState::running;
      } else if (value.text == "failed") {
        inst.state = InstanceState::failed;
      } else {
        error("E-PARSE-03", fmt::format("state must be 'running' or 'failed', got '{}'", value.text),
              token_span(value));
      }
    }
    inst.span = decl_from(start);
    return inst;
  }

  // -- connection endpoints -------------------------------------------------

  template <typename Robot>
  static void device_candidates(const std::vector<Robot>& robots, const std::vector<Identifier>& path,
                                std::vector<EndKind>& out) {
    if (path.size() != 2) return;
    const auto* robot = find_named(robots, path[0]);
    if (robot == nullptr) return;
    if (find_named(robot->sensors, path[1])) out.push_back(EndKind::sensor);
    if (find_named(robot->actuators, path[1])) out.push_back(EndKind::actuator);
  }

  template <typename Doc, typename CandidatesFn>
  void resolve_ends(Doc& doc, CandidatesFn&& candidates) {
    std::vector<Connection> kept;
    for (auto& c : doc.connections) {
      bool ok = true;
      for (ConnectionEnd* end : {&c.from, &c.to}) {
        std::vector<EndKind> found;
        candidates(end->path, found);
        if (found.size() == 1) {
          end->kind = found.front();
          continue;
        }
        ok = false;
        error("E-NAME-01",
              fmt::format("connection endpoint '{}' {}", end->dotted(),
                          found.empty() ? "does not name an element" : "is ambiguous"),
              c.span.value);
        break;
      }
      if (ok) kept.push_back(std::move(c));
    }
    doc.connections = std::move(kept);
  }

  void resolve_connections(Specification& spec) {
    resolve_ends(spec, [&](const std::vector<Identifier>& path, std::vector<EndKind>& out) {
      if (path.size() == 1) {
        if (find_named(spec.roles, path[0])) out.push_back(EndKind::role);
        if (find_named(spec.robots, path[0])) out.push_back(EndKind::robot);
      }
      device_candidates(spec.robots, path, out);
    });
  }

  void resolve_connections(Configuration& config) {
    resolve_ends(config, [&](const std::vector<Identifier>& path, std::vector<EndKind>& out) {
      if (path.size() == 1) {
        if (const auto* impl = find_named(config.impls, path[0])) {
          out.push_back(impl->variant == ImplVariant::web_service ? EndKind::service : EndKind::component);
        }
        if (find_named(config.robots, path[0])) out.push_back(EndKind::robot_model);
      }
      device_candidates(config.robots, path, out);
    });
  }

  std::vector<Token> tokens_;
  std::string file_;
  std::vector<Diagnostic>& diagnostics_;
  std::size_t pos_ = 0;
  std::size_t last_end_ = 0;
};

}  // namespace

ParseResult parse(std::string_view text, std::string_view file_name) {
  ParseResult result;
  std::string file(file_name);
  auto tokens = tokenize(text, file, result.diagnostics);
  Parser(std::move(tokens), file, result.diagnostics).run(result);
  sort_diagnostics(result.diagnostics);
  result.partial = has_errors(result.diagnostics);
  return result;
}

}  // namespace crala
