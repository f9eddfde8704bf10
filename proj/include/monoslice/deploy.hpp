#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "monoslice/config.hpp"
#include "monoslice/slicer.hpp"

namespace monoslice {

class DeployError : public std::runtime_error {
 public:
  /// code: FolderNameCollision | MissingLocation | NoServices | IoError | RefusingToOverwrite
  DeployError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct DeploymentOptions {
  std::filesystem::path output_root;
  std::vector<std::string> exclude;
  std::string base_image = "monoslice/runtime";
  std::string runner_cmd = "monoslice-run";
  bool expose_ports = false;
};

struct ServiceDeployment {
  std::string service;
  std::string folder;        // ASCII-lowercased service name
  std::string program_file;  // <Service>.ol
  std::string program_text;
  std::string dockerfile;
  std::optional<int> exposed_port;
};

struct DeploymentPlan {
  std::filesystem::path output_root;
  std::vector<ServiceDeployment> entries;
  std::string config_text;  // written verbatim as deploy.json in every folder
  std::string compose;
  std::vector<std::string> warnings;
};

inline constexpr const char* kComposeFile = "docker-compose.yml";
inline constexpr const char* kConfigFile = "deploy.json";
inline constexpr const char* kDockerfile = "Dockerfile";

std::string ascii_lower(std::string_view s);

std::string dockerfile_text(const std::string& service, const DeploymentOptions& options);

DeploymentPlan plan_deployment(const SliceSet& slices, const ConfigTree& config, const DeploymentOptions& options);

struct ManifestEntry {
  std::filesystem::path path;  // relative to the output root
  std::uintmax_t bytes = 0;
};

/// Writes the plan. An existing non-empty output root is replaced only when
/// `force` is set.
std::vector<ManifestEntry> write_deployment(const DeploymentPlan& plan, bool force);

}  // namespace monoslice
