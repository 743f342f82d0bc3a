#include "gripkit/tendon.hpp"

#include <cmath>
#include <stdexcept>

namespace grip {

namespace {

void check_limits(const FingerDesign& design, int joint, double q) {
  const auto& lim = design.joint_limits[joint];
  if (q < lim.lo - 1e-12 || q > lim.hi + 1e-12) {
    throw std::domain_error("joint angle outside joint limits");
  }
}

}  // namespace

double tendon_length(double d_prev, double d_next, double offset_angle, double q) {
  const double spanned = offset_angle - q;
  const double sq =
      d_prev * d_prev + d_next * d_next - 2.0 * d_prev * d_next * std::cos(spanned);
  return std::sqrt(std::max(sq, 0.0));
}

double cord_length(double d_elastic, double q) {
  return d_elastic * std::sqrt(std::max(2.0 * (1.0 - std::cos(q)), 0.0));
}

double tendon_alpha_sin(double d_prev, double d_next, double offset_angle, double q) {
  const double length = tendon_length(d_prev, d_next, offset_angle, q);
  if (length <= 0.0) {
    throw std::domain_error("tendon triangle is degenerate (zero tendon length)");
  }
  return d_next / length * std::sin(offset_angle - q);
}

double tendon_moment_arm(double d_prev, double d_next, double offset_angle, double q) {
  const double length = tendon_length(d_prev, d_next, offset_angle, q);
  if (length <= 0.0) {
    throw std::domain_error("tendon triangle is degenerate (zero tendon length)");
  }
  // Triangle altitude through the joint; reduces to d^2 sin(.)/L for equal
  // offsets.
  return d_prev * d_next * std::sin(offset_angle - q) / length;
}

double elastic_moment_arm(double d_elastic, double q) {
  // d^2 sin(q) / L has a removable 0/0 at q = 0 with limit d; the closed
  // form d cos(q/2) is exact for all q.
  return d_elastic * std::cos(q / 2.0);
}

double tendon_length(const FingerDesign& design, int joint, double q) {
  check_limits(design, joint, q);
  return tendon_length(design.tendon_offsets[joint][0], design.tendon_offsets[joint][1],
                       design.tendon_offset_angle[joint], q);
}

double cord_length(const FingerDesign& design, int joint, double q) {
  check_limits(design, joint, q);
  return cord_length(design.elastic_offset[joint], q);
}

double tendon_moment_arm(const FingerDesign& design, int joint, double q) {
  check_limits(design, joint, q);
  return tendon_moment_arm(design.tendon_offsets[joint][0], design.tendon_offsets[joint][1],
                           design.tendon_offset_angle[joint], q);
}

double elastic_moment_arm(const FingerDesign& design, int joint, double q) {
  check_limits(design, joint, q);
  return elastic_moment_arm(design.elastic_offset[joint], q);
}

CableState cable_state(const FingerDesign& design, const JointState& state) {
  CableState cables;
  for (int j = 0; j < 2; ++j) {
    const double q = state[j];
    cables.retractable_tendon_length[j] = tendon_length(design, j, q);
    cables.extendable_cord_length[j] = cord_length(design, j, q);
    cables.tendon_moment_arm[j] = tendon_moment_arm(design, j, q);
    cables.elastic_moment_arm[j] = elastic_moment_arm(design, j, q);
    cables.tendon_alpha[j] = std::asin(std::clamp(
        tendon_alpha_sin(design.tendon_offsets[j][0], design.tendon_offsets[j][1],
                         design.tendon_offset_angle[j], q),
        -1.0, 1.0));
  }
  return cables;
}

}  // namespace grip
