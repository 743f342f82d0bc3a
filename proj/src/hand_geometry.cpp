#include "gripkit/hand_geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gripkit/energy.hpp"

namespace grip {

namespace {

constexpr double kPi = std::numbers::pi;

// Base-circle azimuths at phi = 0, indexed per FingerIndex. The left pair
// sits across the hand from the right pair; B mounts lead their locking
// partner's azimuth by phi_max.
constexpr std::array<double, 4> kRestAzimuth = {kPi, kPi / 2.0, 0.0, 3.0 * kPi / 2.0};

bool is_b_finger(int finger) { return finger == kBLeft || finger == kBRight; }

}  // namespace

double finger_azimuth(const HandConfig& hand, int finger) {
  double azimuth = kRestAzimuth[finger];
  if (is_b_finger(finger)) azimuth += hand.palm_rotation;
  return azimuth;
}

FingerFrame finger_frame(const HandConfig& hand, int finger) {
  const double azimuth = finger_azimuth(hand, finger);
  const Eigen::Vector3d radial(std::cos(azimuth), std::sin(azimuth), 0.0);
  const Eigen::Vector3d tangent(-std::sin(azimuth), std::cos(azimuth), 0.0);
  const double side = is_b_finger(finger) ? -1.0 : 1.0;
  FingerFrame frame;
  frame.base = 0.5 * hand.palm_diameter * radial + side * hand.lateral_offset * tangent;
  frame.inward = -radial;
  frame.normal = tangent;
  // Chain offset placing the rest pose (q1 at its lower limit) half the
  // rest splay outward, so joint coordinates stay in the design's limit box.
  frame.base_tilt =
      -0.5 * hand.finger_rest_splay - hand.fingers[finger].joint_limits[0].lo;
  return frame;
}

std::array<Eigen::Vector3d, 3> finger_chain(const HandConfig& hand, int finger,
                                            const JointState& state) {
  const FingerFrame frame = finger_frame(hand, finger);
  const FingerDesign& design = hand.fingers[finger];
  const Eigen::Vector3d down(0.0, 0.0, -1.0);
  // Link direction angle measured from straight down, positive closing
  // inward.
  const double a1 = state.q1 + frame.base_tilt;
  const double a2 = a1 + state.q2;
  const Eigen::Vector3d joint2 =
      frame.base + design.proximal_length * (std::sin(a1) * frame.inward + std::cos(a1) * down);
  const Eigen::Vector3d tip =
      joint2 + design.distal_length * (std::sin(a2) * frame.inward + std::cos(a2) * down);
  return {frame.base, joint2, tip};
}

Eigen::Vector3d fingertip(const HandConfig& hand, int finger, const JointState& state) {
  return finger_chain(hand, finger, state)[2];
}

std::array<Eigen::Vector3d, 4> fingertip_positions(const HandPose& pose) {
  std::array<Eigen::Vector3d, 4> tips;
  for (int f = 0; f < 4; ++f) {
    if (!within_limits(pose.hand.fingers[f], pose.joints[f])) {
      throw std::domain_error("fingertip_positions: joint state outside limits");
    }
    tips[f] = fingertip(pose.hand, f, pose.joints[f]);
  }
  return tips;
}

HandConfig sweep_palm(const HandConfig& hand, double phi) {
  if (phi < 0.0 || phi > hand.phi_max + 1e-12) {
    throw std::domain_error("palm rotation outside [0, phi_max]");
  }
  HandConfig swept = hand;
  swept.palm_rotation = phi;
  if (std::abs(phi - hand.phi_max) > 1e-9) swept.lock_state = LockState::Unlocked;
  return swept;
}

double meeting_height(const HandConfig& hand, PalmMode mode) {
  HandConfig cfg = sweep_palm(hand, mode == PalmMode::Spherical ? 0.0 : hand.phi_max);
  const double contact_distance = cfg.fingers[0].thickness;

  // All four fingers share tendon retraction while closing unhindered, but
  // the A and B designs map retraction to joint states independently.
  const int steps = 4000;
  std::array<std::vector<TrajectoryPoint>, 4> paths;
  for (int f = 0; f < 4; ++f) paths[f] = min_energy_trajectory(cfg.fingers[f], steps);

  // Pairs already within contact distance at rest are adjacent partners,
  // not converging tips.
  std::array<Eigen::Vector3d, 4> rest_tips;
  for (int f = 0; f < 4; ++f) rest_tips[f] = fingertip(cfg, f, paths[f][0].state);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if ((rest_tips[i] - rest_tips[j]).norm() > contact_distance) pairs.emplace_back(i, j);
    }
  }

  for (int s = 0; s < steps; ++s) {
    std::array<Eigen::Vector3d, 4> tips;
    for (int f = 0; f < 4; ++f) tips[f] = fingertip(cfg, f, paths[f][s].state);
    for (auto [i, j] : pairs) {
      if ((tips[i] - tips[j]).norm() <= contact_distance) {
        return 0.5 * (tips[i].z() + tips[j].z()) + cfg.table_clearance;
      }
    }
  }
  throw SimulationError("fingertip trajectories never meet");
}

double project_locked_distal(const HandConfig& hand, double q2_requested, double q2_at_lock) {
  const double play = std::abs(hand.lock_compliance);
  return std::clamp(q2_requested, q2_at_lock - play, q2_at_lock + play);
}

}  // namespace grip
