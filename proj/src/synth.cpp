#include "dlord/synth.hpp"

#include <array>
#include <cmath>

#include "dlord/errors.hpp"
#include "dlord/rng.hpp"

namespace dlord::motion {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using Vec3 = std::array<double, 3>;

Vec3 scale3(const Vec3& v, double s) { return {v[0] * s, v[1] * s, v[2] * s}; }

Vec3 add3(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

/// Rotation about the y axis (pitch): +angle swings +z offsets toward +x.
Vec3 rot_y(const Vec3& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]};
}

/// Rotation about the x axis (roll): +angle swings +z offsets toward +y.
Vec3 rot_x(const Vec3& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {v[0], c * v[1] - s * v[2], s * v[1] + c * v[2]};
}

// Base offsets for unit scale; every limb vector is rotated, never stretched.
const Vec3 kHipL{0.0, 0.12, -0.05};
const Vec3 kHipR{0.0, -0.12, -0.05};
const Vec3 kHeadOff{0.05, 0.0, 0.70};   // slight forward lean disambiguates facing
const Vec3 kArmL{0.05, 0.35, -0.55};    // relative to head
const Vec3 kArmR{0.05, -0.35, -0.55};
const Vec3 kLegL{0.0, 0.03, -0.80};     // relative to hip
const Vec3 kLegR{0.0, -0.03, -0.80};
constexpr double kRootHeight = 0.90;

const char* kContentNames[4] = {"walk", "jump", "wave", "bend"};

}  // namespace

SynthResult generate_synthetic(const SynthConfig& config, std::uint64_t seed) {
  if (config.num_classes < 1) throw InvalidArgument("synthetic: need at least one class");
  if (config.num_contents < 1 || config.num_contents > 4)
    throw InvalidArgument("synthetic: between 1 and 4 content families supported");
  if (config.repetitions < 1) throw InvalidArgument("synthetic: need at least one repetition");
  if (config.markers < 8) throw InvalidArgument("synthetic: need at least 8 markers");
  if (config.frames < 2) throw InvalidArgument("synthetic: need at least 2 frames");
  if (config.fps <= 0.0) throw InvalidArgument("synthetic: fps must be positive");

  Rng rng(seed);
  SynthResult result;
  auto& ds = result.dataset;
  auto& truth = result.truth;

  ds.num_classes = config.num_classes;
  ds.num_contents = config.num_contents;

  // class geometry: evenly spaced limb scales in [0.7, 1.3] and a fixed
  // arm-rest angle per class
  for (int k = 0; k < config.num_classes; ++k) {
    const double frac = config.num_classes == 1
                            ? 0.5
                            : static_cast<double>(k) / static_cast<double>(config.num_classes - 1);
    truth.class_scales.push_back(0.7 + 0.6 * frac);
    truth.class_arm_rest.push_back(0.1 * static_cast<double>(k));
  }
  for (int m = 0; m < config.num_contents; ++m) truth.content_names.emplace_back(kContentNames[m]);

  const std::int64_t j_count = config.markers;
  const std::int64_t extra = j_count - 8;

  std::vector<std::string> names{"root", "hip_l", "hip_r", "head",
                                 "hand_l", "hand_r", "foot_l", "foot_r"};
  for (std::int64_t i = 0; i < extra; ++i) names.push_back("spine" + std::to_string(i + 1));

  ds.skeleton.root = 0;
  ds.skeleton.pelvis = {1, 2};
  ds.skeleton.front = 3;
  ds.skeleton.edges = {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {3, 5}, {1, 6}, {2, 7}};
  for (std::int64_t i = 0; i < extra; ++i)
    ds.skeleton.edges.emplace_back(0, static_cast<int>(8 + i));

  for (int k = 0; k < config.num_classes; ++k) {
    const double s = truth.class_scales[static_cast<std::size_t>(k)];
    const double rest = truth.class_arm_rest[static_cast<std::size_t>(k)];
    for (int m = 0; m < config.num_contents; ++m) {
      for (int r = 0; r < config.repetitions; ++r) {
        SequenceJitter jit;
        jit.amplitude = 1.0 + config.jitter * rng.uniform(-1.0, 1.0);
        jit.speed = 1.0 + config.jitter * rng.uniform(-1.0, 1.0);
        jit.phase = config.jitter * kTwoPi * rng.uniform(-1.0, 1.0);
        truth.jitter.push_back(jit);

        MotionSequence seq;
        seq.id = "c" + std::to_string(k) + "_e" + std::to_string(m) + "_r" + std::to_string(r);
        seq.fps = config.fps;
        seq.marker_names = names;
        seq.num_frames = config.frames;
        seq.positions.resize(static_cast<std::size_t>(config.frames * j_count * 3));

        for (std::int64_t t = 0; t < config.frames; ++t) {
          const double time = static_cast<double>(t) / config.fps;

          Vec3 root{0.0, 0.0, kRootHeight * s};
          double leg_l = 0.0, leg_r = 0.0;    // pitch about hips
          double arm_pitch = 0.0;             // walk swing, antisymmetric
          double arm_roll_l = rest, arm_roll_r = rest;  // outward raise
          double torso_pitch = 0.0;

          switch (m) {
            case 0: {  // walk: translating root, swinging limbs
              const double w = kTwoPi * 1.5 * jit.speed;
              const double ph = w * time + jit.phase;
              root[0] += 0.5 * s * jit.speed * time;
              root[2] += 0.02 * s * (1.0 - std::cos(2.0 * ph)) * 0.5;
              leg_l = 0.5 * jit.amplitude * std::sin(ph);
              leg_r = -leg_l;
              arm_pitch = 0.3 * jit.amplitude * std::sin(ph);
              break;
            }
            case 1: {  // jump: root pulse, arms raising with it
              const double w = kTwoPi * 1.0 * jit.speed;
              const double pulse = std::max(0.0, std::sin(w * time + jit.phase));
              root[2] += 0.15 * s * pulse * pulse;
              arm_roll_l += 0.8 * jit.amplitude * pulse * pulse;
              arm_roll_r += 0.8 * jit.amplitude * pulse * pulse;
              break;
            }
            case 2: {  // wave: right arm oscillation, body at rest
              const double w = kTwoPi * 2.0 * jit.speed;
              arm_roll_r += 0.9 + 0.5 * jit.amplitude * std::sin(w * time + jit.phase);
              break;
            }
            case 3: {  // bend: upper body pitches forward and back
              const double w = kTwoPi * 0.8 * jit.speed;
              torso_pitch = 0.25 * jit.amplitude * (1.0 - std::cos(w * time + jit.phase));
              break;
            }
            default:
              break;
          }

          const Vec3 hip_l = add3(root, scale3(kHipL, s));
          const Vec3 hip_r = add3(root, scale3(kHipR, s));
          // upper body rotates rigidly about the root so torso and arm bones
          // keep their lengths
          const Vec3 head_off = rot_y(scale3(kHeadOff, s), torso_pitch);
          const Vec3 head = add3(root, head_off);
          const Vec3 arm_l =
              rot_y(rot_x(rot_y(scale3(kArmL, s), arm_pitch), arm_roll_l), torso_pitch);
          const Vec3 arm_r =
              rot_y(rot_x(rot_y(scale3(kArmR, s), -arm_pitch), -arm_roll_r), torso_pitch);
          const Vec3 hand_l = add3(head, arm_l);
          const Vec3 hand_r = add3(head, arm_r);
          const Vec3 foot_l = add3(hip_l, rot_y(scale3(kLegL, s), leg_l));
          const Vec3 foot_r = add3(hip_r, rot_y(scale3(kLegR, s), leg_r));

          std::vector<Vec3> frame{root, hip_l, hip_r, head, hand_l, hand_r, foot_l, foot_r};
          for (std::int64_t i = 0; i < extra; ++i) {
            const double frac = static_cast<double>(i + 1) / static_cast<double>(extra + 1);
            frame.push_back(add3(root, rot_y(scale3(kHeadOff, s * frac), torso_pitch)));
          }

          for (std::int64_t j = 0; j < j_count; ++j)
            for (int axis = 0; axis < 3; ++axis)
              seq.at(t, j, axis) = frame[static_cast<std::size_t>(j)][static_cast<std::size_t>(axis)];
        }

        ds.sequences.push_back(std::move(seq));
        ds.class_labels.push_back(k);
        ds.content_labels.push_back(m);
      }
    }
  }

  ds.validate();
  return result;
}

}  // namespace dlord::motion
