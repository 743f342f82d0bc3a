#pragma once

#include <Eigen/Dense>
#include <array>

#include "gripkit/types.hpp"

namespace grip {

// Forward kinematics of the four-finger hand. The hand frame has the palm
// axis along +z with fingers extending toward -z; the table plane sits at
// z = -table_clearance. A fingers mount on the static palm section, B
// fingers on the rotating section, all on a circle of palm_diameter at
// 90 degree spacing, each shifted sideways from its sagittal plane by
// lateral_offset (A toward +tangent, B toward -tangent) so that A/B pairs
// become laterally adjacent at palm_rotation = phi_max.

struct FingerFrame {
  Eigen::Vector3d base = Eigen::Vector3d::Zero();    // proximal joint, mm
  Eigen::Vector3d inward = Eigen::Vector3d::Zero();  // in-plane closing direction
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();  // flexion plane normal
  // Chain angle offset: the proximal link points at q1 + base_tilt from
  // straight down (positive inward), putting the rest pose half the rest
  // splay outward.
  double base_tilt = 0.0;
};

// Azimuth of a finger's mount on the base circle at the current palm
// rotation.
double finger_azimuth(const HandConfig& hand, int finger);

FingerFrame finger_frame(const HandConfig& hand, int finger);

struct HandPose {
  HandConfig hand;
  std::array<JointState, 4> joints{};
};

// In-plane link endpoints of one finger: {proximal joint, distal joint, tip}.
std::array<Eigen::Vector3d, 3> finger_chain(const HandConfig& hand, int finger,
                                            const JointState& state);

Eigen::Vector3d fingertip(const HandConfig& hand, int finger, const JointState& state);

std::array<Eigen::Vector3d, 4> fingertip_positions(const HandPose& pose);

// Returns a config with the rotating palm section at phi; lock_state is
// forced Unlocked unless phi = phi_max. Throws std::domain_error for phi
// outside [0, phi_max].
HandConfig sweep_palm(const HandConfig& hand, double phi);

enum class PalmMode { Precision, Cylindrical, Spherical };

// Height above the table plane at which converging fingertips first come
// within contact distance (finger thickness between centrelines) while the
// hand closes along the minimum-energy trajectory. Pairs that already sit
// within contact distance at rest (laterally adjacent partners) do not
// count. Throws SimulationError when the trajectories never meet.
double meeting_height(const HandConfig& hand, PalmMode mode);

// Enforces the locked-pair constraint on a requested distal angle: the
// raised locking features pin q2 to its value at lock, up to the design's
// lock_compliance play.
double project_locked_distal(const HandConfig& hand, double q2_requested, double q2_at_lock);

}  // namespace grip
