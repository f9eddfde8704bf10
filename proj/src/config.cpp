#include "monoslice/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "monoslice/json_codec.hpp"
#include "monoslice/render.hpp"

namespace monoslice {

namespace {

constexpr std::string_view kSocket = "socket://";
constexpr std::string_view kLocal = "local://";

bool name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
         c == '-' || c == '_';
}

bool valid_name(std::string_view s) { return !s.empty() && std::all_of(s.begin(), s.end(), name_char); }

[[noreturn]] void bad_location(std::string_view text) {
  throw ConfigError("BadLocationSyntax", std::string(text),
                    "malformed location '" + std::string(text) + "' (expected socket://host:port or local://name)");
}

}  // namespace

Location Location::parse(std::string_view text) {
  if (text.substr(0, kLocal.size()) == kLocal) {
    std::string_view name = text.substr(kLocal.size());
    if (!valid_name(name)) bad_location(text);
    return local(std::string(name));
  }
  if (text.substr(0, kSocket.size()) != kSocket) bad_location(text);
  std::string_view rest = text.substr(kSocket.size());
  auto colon = rest.rfind(':');
  if (colon == std::string_view::npos) bad_location(text);
  std::string_view host = rest.substr(0, colon);
  std::string_view digits = rest.substr(colon + 1);
  if (!valid_name(host) || digits.empty() || digits.size() > 5 || digits.front() == '0') bad_location(text);
  int port = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || port < 1 || port > 65535) bad_location(text);
  return socket(std::string(host), port);
}

std::string Location::str() const {
  if (scheme == Scheme::Local) return std::string(kLocal) + name;
  return std::string(kSocket) + host + ":" + std::to_string(port);
}

ConfigTree config_from_text(std::string text) {
  ConfigTree c;
  try {
    c.root = decode_json(text);
  } catch (const JsonError& e) {
    throw ConfigError("JsonError", std::to_string(e.line()) + ":" + std::to_string(e.column()),
                      "invalid JSON at " + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                          e.what());
  }
  c.raw = std::move(text);
  return c;
}

ConfigTree load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("IoError", path.string(), "cannot open configuration file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_text(buf.str());
}

Location resolve_location(const ConfigTree& config, const Expr& location_expr, std::string_view config_param) {
  if (const auto* lit = std::get_if<LiteralExpr>(&location_expr.node)) {
    if (const auto* s = std::get_if<std::string>(&lit->value)) return Location::parse(*s);
  }
  const auto* path_expr = std::get_if<PathExpr>(&location_expr.node);
  if (!path_expr || config_param.empty() || path_expr->path.root_name() != config_param) {
    throw ConfigError("BadLocationSyntax", render(location_expr),
                      "location expression '" + render(location_expr) + "' is not a configuration path");
  }
  const auto& steps = path_expr->path.steps;
  std::string key;
  const ValueTree* node = &config.root;
  for (std::size_t i = 1; i < steps.size(); ++i) {
    std::size_t index = 0;
    if (steps[i].index) {
      const auto* lit = std::get_if<LiteralExpr>(&(*steps[i].index)->node);
      const auto* n = lit ? std::get_if<std::int32_t>(&lit->value) : nullptr;
      if (!n || *n < 0) {
        throw ConfigError("BadLocationSyntax", render(location_expr),
                          "configuration paths may only use non-negative integer indices");
      }
      index = static_cast<std::size_t>(*n);
    }
    if (!key.empty()) key += '.';
    key += steps[i].name;
    if (steps[i].index) key += "[" + std::to_string(index) + "]";
    node = node ? node->get(steps[i].name, index) : nullptr;
  }
  if (!node || !node->has_root()) {
    throw ConfigError("MissingConfigPath", key, "configuration has no value at '" + key + "'");
  }
  const auto* text = std::get_if<std::string>(&*node->root());
  if (!text) {
    throw ConfigError("BadLocationSyntax", to_display(*node->root()),
                      "configuration value at '" + key + "' is not a string");
  }
  return Location::parse(*text);
}

Location resolve_port_location(const ConfigTree& config, const ServiceDecl& service, const PortDecl& port) {
  return resolve_location(config, port.location, service.config ? std::string_view(service.config->name) : "");
}

std::string to_string(const ConfigIssue& issue) {
  return issue.code + ": " + issue.service + "." + issue.port + ": " + issue.detail;
}

std::vector<ConfigIssue> validate_config(const CheckedProgram& checked, const ConfigTree& config,
                                         const std::vector<std::string>& services) {
  std::vector<ConfigIssue> issues;
  std::map<std::string, std::string> bound;  // socket location -> "Service.Port"
  for (const ServiceDecl* s : checked.program().services()) {
    if (!services.empty() && std::find(services.begin(), services.end(), s->name) == services.end()) continue;
    for (const auto& p : s->ports) {
      try {
        Location loc = resolve_port_location(config, *s, p);
        if (p.kind == PortKind::Input && loc.is_socket()) {
          auto [it, inserted] = bound.emplace(loc.str(), s->name + "." + p.name);
          if (!inserted) {
            issues.push_back({"LocationCollision", s->name, p.name, loc.str() + " is already bound by " + it->second});
          }
        }
      } catch (const ConfigError& e) {
        issues.push_back({e.code(), s->name, p.name, e.what()});
      }
    }
  }
  return issues;
}

}  // namespace monoslice
