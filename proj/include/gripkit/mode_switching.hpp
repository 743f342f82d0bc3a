#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "gripkit/types.hpp"

namespace grip {

// Displacement-subgroup algebra for the rotating-palm locking mechanism.
// Each finger's motion group is a product of two 1-D rotation subgroups
// about its joint axes; locking combines adjacent fingers by intersecting
// their groups.

// {R(point, axis)}: all rotations about the spatial line through `point`
// with unit direction `axis`.
struct RotationSubgroup {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();  // mm
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();  // unit

  RotationSubgroup() = default;
  RotationSubgroup(const Eigen::Vector3d& p, const Eigen::Vector3d& a);
};

// Ordered product of rotation subgroups; an empty factor list is the
// identity group {I}.
struct MotionGroup {
  std::vector<RotationSubgroup> factors;
  // Set when an intersection degenerates (e.g. distal axes coincide and a
  // second factor survives).
  bool degenerate = false;

  bool is_identity() const { return factors.empty(); }
};

// True when the two subgroups rotate about the same spatial line
// (directions parallel within angle_tol, mutual offset parallel to the
// axis within position_tol).
bool same_axis_line(const RotationSubgroup& g, const RotationSubgroup& h,
                    double angle_tol = 1e-9, double position_tol = 1e-9);

// {R(g)} ∩ {R(h)}: the subgroup itself when both act about the same line,
// otherwise only the identity displacement survives (parallel-but-offset,
// intersecting, or skew axes share no common rotation).
MotionGroup intersect_rotation_subgroups(const RotationSubgroup& g, const RotationSubgroup& h);

// Two-factor product of the finger's proximal and distal joint rotations
// at the hand's current palm rotation, evaluated at the given joint state
// (straight pose by default).
MotionGroup finger_motion_group(const HandConfig& hand, int finger,
                                const JointState& state = {});

// Motion group of a locked A+B pair: the shared proximal rotation when the
// proximal axes align and the distal axes are offset. Requires
// lock_state = Locked at palm_rotation = phi_max; throws ModeError
// otherwise.
MotionGroup combined_finger_group(const HandConfig& hand, int finger_a, int finger_b);

// True when the palm has reached phi_max and both fingers of each locking
// pair hold matching joint states, so the raised features can seat.
bool lock_feasible(const HandConfig& hand, const std::array<JointState, 4>& joints,
                   double angle_tol = 1e-6);
bool lock_feasible(const HandConfig& hand);  // all fingers at rest

// The two locking pairs {A finger, B finger} at phi_max.
std::array<std::array<int, 2>, 2> locking_pairs();

}  // namespace grip
