#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dlord/motion.hpp"

namespace dlord::motion {

/// Motion file: JSON {version:1, id, fps, marker_names, skeleton{edges, root,
/// pelvis_pair, front_marker}, frames:[[ [x,y,z] x J ] x T]}. Numbers are
/// serialized with round-trip precision, so write/read is lossless.
void write_motion(const std::filesystem::path& path, const MotionSequence& seq,
                  const Skeleton& skeleton);

struct MotionFile {
  MotionSequence sequence;
  Skeleton skeleton;
};
MotionFile read_motion(const std::filesystem::path& path);

/// Dataset manifest: CSV `path,class_label,content_label`, paths relative to
/// the manifest location. Writing places motions under `<dir>/motions/`.
void write_dataset(const std::filesystem::path& dir, const LabeledDataset& dataset,
                   const std::string& manifest_name = "manifest.csv");
LabeledDataset load_dataset(const std::filesystem::path& manifest_path);

void write_normalization(const std::filesystem::path& path, const NormalizationParams& params);
NormalizationParams read_normalization(const std::filesystem::path& path);

}  // namespace dlord::motion
