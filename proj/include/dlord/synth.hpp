#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dlord/motion.hpp"

namespace dlord::motion {

/// Desk-scale labeled motion generator. Classes differ by skeleton (a uniform
/// limb scale plus an arm-rest posture angle), contents by trajectory family
/// (walk / jump / wave / bend), repetitions by small seeded phase, amplitude
/// and speed jitter. Limb motion is built from rotations about the joint
/// pivots, so every bone length is constant over time by construction.
struct SynthConfig {
  int num_classes = 4;
  int num_contents = 3;  // families used in order: walk, jump, wave, bend
  int repetitions = 5;
  std::int64_t markers = 8;  // >= 8; extras become spine markers
  std::int64_t frames = 64;
  double fps = 30.0;
  double jitter = 0.1;  // relative size of the AU perturbations
};

struct SequenceJitter {
  double amplitude = 1.0;  // multiplier
  double speed = 1.0;      // multiplier
  double phase = 0.0;      // radians
};

struct SynthGroundTruth {
  std::vector<double> class_scales;       // per class
  std::vector<double> class_arm_rest;     // per class, radians
  std::vector<std::string> content_names;
  std::vector<SequenceJitter> jitter;     // per sequence
};

struct SynthResult {
  LabeledDataset dataset;
  SynthGroundTruth truth;
};

/// Deterministic for a given (config, seed).
SynthResult generate_synthetic(const SynthConfig& config, std::uint64_t seed);

}  // namespace dlord::motion
