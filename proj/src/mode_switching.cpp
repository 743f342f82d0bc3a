#include "gripkit/mode_switching.hpp"

#include <cmath>
#include <stdexcept>

#include "gripkit/hand_geometry.hpp"

namespace grip {

RotationSubgroup::RotationSubgroup(const Eigen::Vector3d& p, const Eigen::Vector3d& a)
    : point(p), axis(a.normalized()) {
  if (a.norm() < 1e-12) throw std::invalid_argument("rotation axis must be nonzero");
}

bool same_axis_line(const RotationSubgroup& g, const RotationSubgroup& h, double angle_tol,
                    double position_tol) {
  // Parallel directions (either orientation).
  const double cross = g.axis.cross(h.axis).norm();
  if (cross > angle_tol) return false;
  // Offset between the lines must be parallel to the axis.
  const Eigen::Vector3d delta = h.point - g.point;
  return (delta - delta.dot(g.axis) * g.axis).norm() <= position_tol;
}

MotionGroup intersect_rotation_subgroups(const RotationSubgroup& g, const RotationSubgroup& h) {
  MotionGroup result;
  if (same_axis_line(g, h)) {
    result.factors.push_back(g);
  }
  // Parallel-but-offset, intersecting, or skew axes: only the identity
  // displacement is shared.
  return result;
}

namespace {

JointState rest_state(const FingerDesign& design) {
  return {design.joint_limits[0].lo, design.joint_limits[1].lo};
}

}  // namespace

MotionGroup finger_motion_group(const HandConfig& hand, int finger, const JointState& state) {
  const FingerFrame frame = finger_frame(hand, finger);
  const auto chain = finger_chain(hand, finger, state);
  MotionGroup group;
  group.factors.emplace_back(chain[0], frame.normal);  // proximal joint axis
  group.factors.emplace_back(chain[1], frame.normal);  // distal joint axis
  return group;
}

MotionGroup combined_finger_group(const HandConfig& hand, int finger_a, int finger_b) {
  if (hand.lock_state != LockState::Locked ||
      std::abs(hand.palm_rotation - hand.phi_max) > 1e-9) {
    throw ModeError("cannot combine unlocked fingers");
  }
  // Both fingers of a seated pair hold the same joint state.
  const JointState shared = rest_state(hand.fingers[finger_a]);
  const MotionGroup group_a = finger_motion_group(hand, finger_a, shared);
  const MotionGroup group_b = finger_motion_group(hand, finger_b, shared);

  if (!same_axis_line(group_a.factors[0], group_b.factors[0])) {
    throw ModeError("locked pair has misaligned proximal axes");
  }
  // S_A+B = {R(A1,a1)} * ({R(A2,a2)} ∩ {R(B2,b2)}); the distal factors
  // survive only if their axes coincide, which flags a degenerate design.
  MotionGroup combined;
  combined.factors.push_back(group_a.factors[0]);
  const MotionGroup distal =
      intersect_rotation_subgroups(group_a.factors[1], group_b.factors[1]);
  if (!distal.is_identity()) {
    combined.factors.push_back(distal.factors[0]);
    combined.degenerate = true;
  }
  return combined;
}

std::array<std::array<int, 2>, 2> locking_pairs() {
  return {{{kALeft, kBLeft}, {kARight, kBRight}}};
}

bool lock_feasible(const HandConfig& hand, const std::array<JointState, 4>& joints,
                   double angle_tol) {
  if (std::abs(hand.palm_rotation - hand.phi_max) > 1e-6) return false;
  for (const auto& pair : locking_pairs()) {
    const JointState& a = joints[pair[0]];
    const JointState& b = joints[pair[1]];
    // Raised features seat only when the adjacent links are posed alike.
    if (std::abs(a.q1 - b.q1) > angle_tol || std::abs(a.q2 - b.q2) > angle_tol) return false;
  }
  return true;
}

bool lock_feasible(const HandConfig& hand) {
  std::array<JointState, 4> joints;
  for (int f = 0; f < 4; ++f) joints[f] = rest_state(hand.fingers[f]);
  return lock_feasible(hand, joints);
}

}  // namespace grip
