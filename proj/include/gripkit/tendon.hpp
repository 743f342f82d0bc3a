#pragma once

#include <array>

#include "gripkit/types.hpp"

namespace grip {

// Cable geometry of one finger joint. The flexion tendon spans routing
// points at perpendicular offsets on the two links with an angular offset,
// so its length follows the cosine rule in the joint angle; the elastic
// extension cord uses the same construction with equal offsets and no
// angular offset.

// Raw formula evaluations, no limit checks. Used by the design overloads
// below and directly by tests that probe the formulas outside the
// reachable range.
double tendon_length(double d_prev, double d_next, double offset_angle, double q);
double cord_length(double d_elastic, double q);
double tendon_moment_arm(double d_prev, double d_next, double offset_angle, double q);
double elastic_moment_arm(double d_elastic, double q);
// sin of the angle between the following-link offset and the tendon.
double tendon_alpha_sin(double d_prev, double d_next, double offset_angle, double q);

// Limit-checked evaluations for a joint (0 = proximal, 1 = distal) of a
// design. Throw std::domain_error for q outside the joint limits.
double tendon_length(const FingerDesign& design, int joint, double q);
double cord_length(const FingerDesign& design, int joint, double q);
double tendon_moment_arm(const FingerDesign& design, int joint, double q);
double elastic_moment_arm(const FingerDesign& design, int joint, double q);

struct CableState {
  std::array<double, 2> retractable_tendon_length{};  // mm
  std::array<double, 2> extendable_cord_length{};     // mm
  std::array<double, 2> tendon_moment_arm{};          // mm
  std::array<double, 2> elastic_moment_arm{};         // mm
  std::array<double, 2> tendon_alpha{};               // rad
};

CableState cable_state(const FingerDesign& design, const JointState& state);

}  // namespace grip
