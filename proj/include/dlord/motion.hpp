#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dlord/mat.hpp"

namespace dlord::motion {

/// Marker trajectory of T frames by J markers, coordinates in meters,
/// laid out [t][j][axis] with z up.
struct MotionSequence {
  std::string id;
  double fps = 30.0;
  std::vector<std::string> marker_names;  // J entries
  std::int64_t num_frames = 0;
  std::vector<double> positions;  // T*J*3

  std::int64_t marker_count() const { return static_cast<std::int64_t>(marker_names.size()); }

  double& at(std::int64_t t, std::int64_t j, int axis) {
    return positions[static_cast<std::size_t>((t * marker_count() + j) * 3 + axis)];
  }
  double at(std::int64_t t, std::int64_t j, int axis) const {
    return positions[static_cast<std::size_t>((t * marker_count() + j) * 3 + axis)];
  }

  /// T >= 2, J >= 2, finite coordinates, consistent buffer size.
  void validate() const;
};

/// Bone topology plus the marker designations that drive normalization:
/// the root for first-pose centering and the pelvis pair / front marker for
/// the facing rotation.
struct Skeleton {
  std::vector<std::pair<int, int>> edges;  // (parent, child)
  int root = 0;
  std::pair<int, int> pelvis = {1, 2};  // (left, right)
  int front = 3;

  std::int64_t bone_count() const { return static_cast<std::int64_t>(edges.size()); }

  /// Indices in range, edges acyclic and connected over the markers they use.
  void validate(std::int64_t marker_count) const;

  bool operator==(const Skeleton&) const = default;
};

/// Per-axis extremes over a training set; the forward map sends them to [0,1].
struct NormalizationParams {
  std::array<double, 3> min_coord{0.0, 0.0, 0.0};
  std::array<double, 3> max_coord{1.0, 1.0, 1.0};

  void validate() const;  // max > min per axis
  bool operator==(const NormalizationParams&) const = default;
};

struct LabeledDataset {
  std::vector<MotionSequence> sequences;
  std::vector<int> class_labels;
  std::vector<int> content_labels;
  int num_classes = 0;
  int num_contents = 0;
  Skeleton skeleton;
  NormalizationParams normalization;

  std::size_t size() const { return sequences.size(); }
  /// Labels dense in [0, N), every label used, sizes aligned, shared J and T.
  void validate() const;
};

/// Linear interpolation over normalized time; endpoints preserved exactly.
MotionSequence resample(const MotionSequence& seq, std::int64_t target_frames);

/// Subtract the first-frame root position from every marker in every frame.
MotionSequence root_normalize(const MotionSequence& seq, const Skeleton& skeleton);

/// Rotate about the vertical (z) axis, from frame 1, so the subject faces +x
/// with the pelvis line parallel to y. Throws DegeneratePose on coincident
/// pelvis markers.
MotionSequence orient_normalize(const MotionSequence& seq, const Skeleton& skeleton);

enum class ScaleDirection { Forward, Inverse };

/// Per-axis min-max map to [0,1] (forward) or back to meters (inverse).
/// Forward inputs outside the recorded range are clamped; the count of
/// clamped coordinates is added to *clamped_count when provided.
MotionSequence minmax_scale(const MotionSequence& seq, const NormalizationParams& params,
                            ScaleDirection direction, std::int64_t* clamped_count = nullptr);

/// Extremes per axis over a set of sequences.
NormalizationParams compute_normalization(const std::vector<MotionSequence>& sequences);

/// T x B matrix of Euclidean bone lengths.
Mat bone_lengths(const MotionSequence& seq, const Skeleton& skeleton);

/// resample -> root_normalize -> orient_normalize, the per-sequence part of
/// the preprocessing chain (min-max scaling needs set-level statistics).
MotionSequence preprocess_sequence(const MotionSequence& seq, const Skeleton& skeleton,
                                   std::int64_t target_frames);

}  // namespace dlord::motion
