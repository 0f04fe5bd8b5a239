#include "dlord/motion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "dlord/errors.hpp"

namespace dlord::motion {

void MotionSequence::validate() const {
  if (num_frames < 2) throw InvalidArgument("motion sequence needs at least 2 frames");
  if (marker_count() < 2) throw InvalidArgument("motion sequence needs at least 2 markers");
  if (static_cast<std::int64_t>(positions.size()) != num_frames * marker_count() * 3)
    throw InvalidArgument("motion sequence buffer does not match T*J*3");
  if (fps <= 0.0) throw InvalidArgument("motion sequence fps must be positive");
  for (double v : positions)
    if (!std::isfinite(v)) throw InvalidArgument("motion sequence contains non-finite coordinates");
}

void Skeleton::validate(std::int64_t marker_count) const {
  auto in_range = [marker_count](int i) { return i >= 0 && i < marker_count; };
  if (!in_range(root) || !in_range(pelvis.first) || !in_range(pelvis.second) || !in_range(front))
    throw InvalidArgument("skeleton marker designation out of range");
  if (pelvis.first == pelvis.second)
    throw InvalidArgument("skeleton pelvis pair must name two distinct markers");

  // Union-find over edges: joins must never close a cycle, and all used
  // markers must end up in one component.
  std::vector<int> parent(static_cast<std::size_t>(marker_count));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& px = parent[static_cast<std::size_t>(x)];
      px = parent[static_cast<std::size_t>(px)];
      x = px;
    }
    return x;
  };
  std::set<int> used;
  for (const auto& [p, c] : edges) {
    if (!in_range(p) || !in_range(c)) throw InvalidArgument("skeleton edge index out of range");
    if (p == c) throw InvalidArgument("skeleton edge connects a marker to itself");
    used.insert(p);
    used.insert(c);
    const int rp = find(p), rc = find(c);
    if (rp == rc) throw InvalidArgument("skeleton edges contain a cycle");
    parent[static_cast<std::size_t>(rp)] = rc;
  }
  if (!used.empty()) {
    const int r0 = find(*used.begin());
    for (int m : used)
      if (find(m) != r0) throw InvalidArgument("skeleton edges are not connected");
  }
}

void NormalizationParams::validate() const {
  for (int a = 0; a < 3; ++a)
    if (!(max_coord[static_cast<std::size_t>(a)] > min_coord[static_cast<std::size_t>(a)]))
      throw InvalidArgument("normalization params need max > min on every axis");
}

void LabeledDataset::validate() const {
  if (sequences.empty()) throw InvalidArgument("dataset is empty");
  if (class_labels.size() != sequences.size() || content_labels.size() != sequences.size())
    throw InvalidArgument("dataset label counts do not match sequence count");
  std::vector<bool> class_seen(static_cast<std::size_t>(num_classes), false);
  std::vector<bool> content_seen(static_cast<std::size_t>(num_contents), false);
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    const int x = class_labels[i];
    const int y = content_labels[i];
    if (x < 0 || x >= num_classes) throw InvalidArgument("class label out of range");
    if (y < 0 || y >= num_contents) throw InvalidArgument("content label out of range");
    class_seen[static_cast<std::size_t>(x)] = true;
    content_seen[static_cast<std::size_t>(y)] = true;
  }
  for (bool b : class_seen)
    if (!b) throw InvalidArgument("some class label never occurs in the dataset");
  for (bool b : content_seen)
    if (!b) throw InvalidArgument("some content label never occurs in the dataset");
  const auto j = sequences.front().marker_count();
  const auto t = sequences.front().num_frames;
  for (const auto& s : sequences) {
    s.validate();
    if (s.marker_count() != j || s.num_frames != t)
      throw InvalidArgument("dataset sequences do not share J and T");
  }
  skeleton.validate(j);
}

MotionSequence resample(const MotionSequence& seq, std::int64_t target_frames) {
  seq.validate();
  if (target_frames < 2) throw InvalidArgument("resample target must be >= 2 frames");
  if (target_frames == seq.num_frames) return seq;

  MotionSequence out;
  out.id = seq.id;
  out.fps = seq.fps * static_cast<double>(target_frames - 1) /
            static_cast<double>(seq.num_frames - 1);
  out.marker_names = seq.marker_names;
  out.num_frames = target_frames;
  out.positions.resize(static_cast<std::size_t>(target_frames * seq.marker_count() * 3));

  const std::int64_t j_count = seq.marker_count();
  for (std::int64_t t = 0; t < target_frames; ++t) {
    // position in source frame coordinates
    const double u = static_cast<double>(t) * static_cast<double>(seq.num_frames - 1) /
                     static_cast<double>(target_frames - 1);
    const auto lo = static_cast<std::int64_t>(std::floor(u));
    const std::int64_t hi = std::min(lo + 1, seq.num_frames - 1);
    const double w = u - static_cast<double>(lo);
    for (std::int64_t j = 0; j < j_count; ++j)
      for (int axis = 0; axis < 3; ++axis)
        out.at(t, j, axis) = (1.0 - w) * seq.at(lo, j, axis) + w * seq.at(hi, j, axis);
  }
  // exact endpoints regardless of rounding in u
  for (std::int64_t j = 0; j < j_count; ++j)
    for (int axis = 0; axis < 3; ++axis) {
      out.at(0, j, axis) = seq.at(0, j, axis);
      out.at(target_frames - 1, j, axis) = seq.at(seq.num_frames - 1, j, axis);
    }
  return out;
}

MotionSequence root_normalize(const MotionSequence& seq, const Skeleton& skeleton) {
  seq.validate();
  skeleton.validate(seq.marker_count());
  MotionSequence out = seq;
  const double rx = seq.at(0, skeleton.root, 0);
  const double ry = seq.at(0, skeleton.root, 1);
  const double rz = seq.at(0, skeleton.root, 2);
  for (std::int64_t t = 0; t < out.num_frames; ++t)
    for (std::int64_t j = 0; j < out.marker_count(); ++j) {
      out.at(t, j, 0) -= rx;
      out.at(t, j, 1) -= ry;
      out.at(t, j, 2) -= rz;
    }
  return out;
}

MotionSequence orient_normalize(const MotionSequence& seq, const Skeleton& skeleton) {
  seq.validate();
  skeleton.validate(seq.marker_count());

  const auto [left, right] = skeleton.pelvis;
  // pelvis line in the horizontal plane, frame 1
  const double px = seq.at(0, left, 0) - seq.at(0, right, 0);
  const double py = seq.at(0, left, 1) - seq.at(0, right, 1);
  if (std::hypot(px, py) < 1e-12)
    throw DegeneratePose("pelvis markers coincide in frame 1; facing direction undefined");

  // horizontal normal to the pelvis line, sign picked so it points toward the
  // declared front marker
  double fx = py;
  double fy = -px;
  const double mx = 0.5 * (seq.at(0, left, 0) + seq.at(0, right, 0));
  const double my = 0.5 * (seq.at(0, left, 1) + seq.at(0, right, 1));
  const double toward =
      fx * (seq.at(0, skeleton.front, 0) - mx) + fy * (seq.at(0, skeleton.front, 1) - my);
  if (toward < 0.0) {
    fx = -fx;
    fy = -fy;
  }

  const double theta = std::atan2(fy, fx);  // rotate by -theta to land on +x
  const double c = std::cos(-theta);
  const double s = std::sin(-theta);

  MotionSequence out = seq;
  for (std::int64_t t = 0; t < out.num_frames; ++t)
    for (std::int64_t j = 0; j < out.marker_count(); ++j) {
      const double x = out.at(t, j, 0);
      const double y = out.at(t, j, 1);
      out.at(t, j, 0) = c * x - s * y;
      out.at(t, j, 1) = s * x + c * y;
    }
  return out;
}

MotionSequence minmax_scale(const MotionSequence& seq, const NormalizationParams& params,
                            ScaleDirection direction, std::int64_t* clamped_count) {
  seq.validate();
  params.validate();
  MotionSequence out = seq;
  for (std::int64_t t = 0; t < out.num_frames; ++t)
    for (std::int64_t j = 0; j < out.marker_count(); ++j)
      for (int axis = 0; axis < 3; ++axis) {
        const double lo = params.min_coord[static_cast<std::size_t>(axis)];
        const double hi = params.max_coord[static_cast<std::size_t>(axis)];
        const double v = out.at(t, j, axis);
        if (direction == ScaleDirection::Forward) {
          double u = (v - lo) / (hi - lo);
          if (u < 0.0 || u > 1.0) {
            u = std::clamp(u, 0.0, 1.0);
            if (clamped_count) ++*clamped_count;
          }
          out.at(t, j, axis) = u;
        } else {
          out.at(t, j, axis) = v * (hi - lo) + lo;
        }
      }
  return out;
}

NormalizationParams compute_normalization(const std::vector<MotionSequence>& sequences) {
  if (sequences.empty()) throw InvalidArgument("cannot compute normalization of an empty set");
  NormalizationParams p;
  for (int a = 0; a < 3; ++a) {
    p.min_coord[static_cast<std::size_t>(a)] = std::numeric_limits<double>::infinity();
    p.max_coord[static_cast<std::size_t>(a)] = -std::numeric_limits<double>::infinity();
  }
  for (const auto& s : sequences) {
    s.validate();
    for (std::int64_t t = 0; t < s.num_frames; ++t)
      for (std::int64_t j = 0; j < s.marker_count(); ++j)
        for (int axis = 0; axis < 3; ++axis) {
          const double v = s.at(t, j, axis);
          auto ai = static_cast<std::size_t>(axis);
          p.min_coord[ai] = std::min(p.min_coord[ai], v);
          p.max_coord[ai] = std::max(p.max_coord[ai], v);
        }
  }
  p.validate();
  return p;
}

Mat bone_lengths(const MotionSequence& seq, const Skeleton& skeleton) {
  seq.validate();
  skeleton.validate(seq.marker_count());
  Mat out(seq.num_frames, skeleton.bone_count());
  for (std::int64_t t = 0; t < seq.num_frames; ++t)
    for (std::int64_t b = 0; b < skeleton.bone_count(); ++b) {
      const auto [p, c] = skeleton.edges[static_cast<std::size_t>(b)];
      const double dx = seq.at(t, p, 0) - seq.at(t, c, 0);
      const double dy = seq.at(t, p, 1) - seq.at(t, c, 1);
      const double dz = seq.at(t, p, 2) - seq.at(t, c, 2);
      out.at(t, b) = std::sqrt(dx * dx + dy * dy + dz * dz);
    }
  return out;
}

MotionSequence preprocess_sequence(const MotionSequence& seq, const Skeleton& skeleton,
                                   std::int64_t target_frames) {
  return orient_normalize(root_normalize(resample(seq, target_frames), skeleton), skeleton);
}

}  // namespace dlord::motion
