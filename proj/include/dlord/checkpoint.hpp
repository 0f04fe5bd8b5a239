#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dlord/motion.hpp"
#include "dlord/networks.hpp"
#include "dlord/tensor.hpp"

namespace dlord {

/// Versioned bundle of named tensors plus run metadata. On disk: an 8-byte
/// magic, a length-prefixed JSON header (version, stage, arch, seed,
/// draw_count, epoch, normalization, extras, tensor manifest with
/// shapes/offsets/checksums), then the raw little-endian float64 payload in
/// manifest order. save/load round-trips bit-exactly.
class Checkpoint {
 public:
  int version = 1;
  std::string stage;  // "stage1" | "stage2a" | "stage2b"
  nets::ArchConfig arch;
  std::uint64_t seed = 0;
  std::uint64_t draw_count = 0;
  std::int64_t epoch = 0;
  bool has_normalization = false;
  motion::NormalizationParams normalization;
  nlohmann::json extra = nlohmann::json::object();

  void add(const std::string& name, const ad::TensorPtr& tensor);
  bool has(const std::string& name) const;
  const ad::TensorPtr& require(const std::string& name) const;
  const std::vector<std::pair<std::string, ad::TensorPtr>>& tensors() const { return tensors_; }

  /// Copy values into an existing same-shape tensor (keeps requires_grad).
  void load_into(const std::string& name, const ad::TensorPtr& dst) const;

  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

  /// Throws CheckpointError unless the stage tag matches.
  void expect_stage(const std::string& expected) const;

 private:
  std::vector<std::pair<std::string, ad::TensorPtr>> tensors_;
};

nlohmann::json arch_to_json(const nets::ArchConfig& arch);
nets::ArchConfig arch_from_json(const nlohmann::json& j);

}  // namespace dlord
