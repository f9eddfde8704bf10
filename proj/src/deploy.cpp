#include "monoslice/deploy.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "monoslice/render.hpp"

namespace monoslice {

namespace fs = std::filesystem;

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string dockerfile_text(const std::string& service, const DeploymentOptions& options) {
  std::ostringstream out;
  out << "FROM " << options.base_image << '\n';
  out << "COPY " << service << ".ol .\n";
  out << "COPY " << kConfigFile << " .\n";
  out << "CMD [\"" << options.runner_cmd << "\", \"--config\", \"" << kConfigFile << "\", \"--service\", \""
      << service << "\", \"" << service << ".ol\"]\n";
  return out.str();
}

namespace {

std::string compose_text(const std::vector<ServiceDeployment>& entries, bool expose_ports) {
  std::ostringstream out;
  out << "services:\n";
  for (const auto& e : entries) {
    out << "  " << e.folder << ":\n";
    out << "    build: ./" << e.folder << '\n';
    out << "    deploy:\n";
    out << "      replicas: 1\n";
    if (expose_ports && e.exposed_port) {
      out << "    ports:\n";
      out << "      - \"" << *e.exposed_port << ':' << *e.exposed_port << "\"\n";
    }
  }
  return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DeployError("IoError", "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw DeployError("IoError", "failed writing '" + path.string() + "'");
}

}  // namespace

DeploymentPlan plan_deployment(const SliceSet& slices, const ConfigTree& config, const DeploymentOptions& options) {
  DeploymentPlan plan;
  plan.output_root = options.output_root;
  plan.config_text = config.raw;
  std::map<std::string, std::string> folders;
  for (const auto& s : slices.slices) {
    if (std::find(options.exclude.begin(), options.exclude.end(), s.service) != options.exclude.end()) continue;
    ServiceDeployment e;
    e.service = s.service;
    e.folder = ascii_lower(s.service);
    auto [it, inserted] = folders.emplace(e.folder, s.service);
    if (!inserted) {
      throw DeployError("FolderNameCollision",
                        "services '" + it->second + "' and '" + s.service + "' both map to folder '" + e.folder + "'");
    }
    e.program_file = s.service + ".ol";
    e.program_text = render(s.program);
    e.dockerfile = dockerfile_text(s.service, options);

    const ServiceDecl* decl = nullptr;
    for (const ServiceDecl* d : s.program.services()) {
      if (d->name == s.service) decl = d;
    }
    for (const auto& p : decl->ports) {
      if (p.kind != PortKind::Input) continue;
      Location loc;
      try {
        loc = resolve_port_location(config, *decl, p);
      } catch (const ConfigError& err) {
        throw DeployError("MissingLocation", "service '" + s.service + "': " + err.what());
      }
      if (!loc.is_socket()) continue;
      if (!e.exposed_port) e.exposed_port = loc.port;
      if (loc.host != e.folder) {
        plan.warnings.push_back("service '" + s.service + "' listens on host '" + loc.host +
                                "' but its compose service is named '" + e.folder + "'");
      }
    }
    plan.entries.push_back(std::move(e));
  }
  if (plan.entries.empty()) throw DeployError("NoServices", "no services left to deploy");
  plan.compose = compose_text(plan.entries, options.expose_ports);
  return plan;
}

std::vector<ManifestEntry> write_deployment(const DeploymentPlan& plan, bool force) {
  if (plan.entries.empty()) throw DeployError("NoServices", "no services left to deploy");
  const fs::path& root = plan.output_root;
  std::error_code ec;
  if (fs::exists(root, ec)) {
    if (!fs::is_directory(root, ec)) {
      throw DeployError("RefusingToOverwrite", "'" + root.string() + "' exists and is not a directory");
    }
    if (!fs::is_empty(root, ec)) {
      if (!force) {
        throw DeployError("RefusingToOverwrite",
                          "output directory '" + root.string() + "' is not empty (use --force to replace it)");
      }
      for (const auto& entry : fs::directory_iterator(root)) fs::remove_all(entry.path());
    }
  }
  fs::create_directories(root, ec);
  if (ec) throw DeployError("IoError", "cannot create '" + root.string() + "': " + ec.message());

  std::vector<ManifestEntry> manifest;
  auto emit = [&](const fs::path& rel, const std::string& content) {
    write_file(root / rel, content);
    manifest.push_back({rel, content.size()});
  };
  emit(kComposeFile, plan.compose);
  for (const auto& e : plan.entries) {
    fs::create_directories(root / e.folder, ec);
    if (ec) throw DeployError("IoError", "cannot create '" + (root / e.folder).string() + "': " + ec.message());
    emit(fs::path(e.folder) / e.program_file, e.program_text);
    emit(fs::path(e.folder) / kConfigFile, plan.config_text);
    emit(fs::path(e.folder) / kDockerfile, e.dockerfile);
  }
  return manifest;
}

}  // namespace monoslice
