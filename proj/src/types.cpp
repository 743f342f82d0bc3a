#include "gripkit/types.hpp"

#include <cmath>
#include <numbers>

namespace grip {

namespace {

constexpr double kPi = std::numbers::pi;

FingerDesign make_finger(FingerType type, double proximal, double distal) {
  FingerDesign f;
  f.type = type;
  f.proximal_length = proximal;
  f.distal_length = distal;
  f.width = 20.0;
  f.thickness = 20.0;
  f.tendon_offsets = {{{4.0, 4.0}, {4.0, 4.0}}};
  f.tendon_offset_angle = {2.4, 2.4};
  f.elastic_offset = {5.0, 5.0};
  f.spring_constant = 0.1;
  f.joint_limits = {{{-kPi / 6.0, kPi / 3.0}, {0.0, kPi / 2.0}}};
  f.elastic_rest_angle = {f.joint_limits[0].lo, f.joint_limits[1].lo};
  return f;
}

}  // namespace

HandConfig default_hand() {
  HandConfig hand;
  hand.fingers[kALeft] = make_finger(FingerType::A, 50.0, 45.0);
  hand.fingers[kARight] = make_finger(FingerType::A, 50.0, 45.0);
  hand.fingers[kBLeft] = make_finger(FingerType::B, 40.0, 55.0);
  hand.fingers[kBRight] = make_finger(FingerType::B, 40.0, 55.0);
  hand.palm_diameter = 60.0;
  hand.finger_rest_splay = kPi / 6.0;
  hand.palm_rotation = 0.0;
  // Finger bases sit at 90 deg spacing, so a quarter turn brings each B
  // base into lateral adjacency with an A base.
  hand.phi_max = kPi / 2.0;
  hand.lateral_offset = 10.0;
  hand.table_clearance = 100.0;
  hand.lock_state = LockState::Unlocked;
  hand.lock_compliance = 0.0;
  hand.muscle_pairing = {{{kALeft, kARight}, {kBLeft, kBRight}}};
  return hand;
}

bool within_limits(const FingerDesign& design, const JointState& state, double tol) {
  for (int j = 0; j < 2; ++j) {
    const auto& lim = design.joint_limits[j];
    const double q = state[j];
    if (q < lim.lo - tol || q > lim.hi + tol) return false;
  }
  return true;
}

void validate(const FingerDesign& design) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string(name) + " must be > 0");
    }
  };
  positive(design.proximal_length, "proximal_length");
  positive(design.distal_length, "distal_length");
  positive(design.width, "width");
  positive(design.thickness, "thickness");
  positive(design.spring_constant, "spring_constant");
  for (int j = 0; j < 2; ++j) {
    positive(design.tendon_offsets[j][0], "tendon_offset (preceding link)");
    positive(design.tendon_offsets[j][1], "tendon_offset (following link)");
    if (!(design.elastic_offset[j] >= 0.0)) {
      throw ValidationError("elastic_offset must be >= 0");
    }
    const auto& lim = design.joint_limits[j];
    if (!(lim.lo < lim.hi)) {
      throw ValidationError("joint_limits must satisfy lo < hi");
    }
    // Keeps the tendon triangle angle positive over the reachable range.
    if (!(design.tendon_offset_angle[j] > lim.hi)) {
      throw ValidationError("tendon_offset_angle must exceed the joint upper limit");
    }
    if (design.elastic_rest_angle[j] < lim.lo - 1e-12 ||
        design.elastic_rest_angle[j] > lim.hi + 1e-12) {
      throw ValidationError("elastic_rest_angle must lie within joint limits");
    }
  }
}

void validate(const HandConfig& hand) {
  for (const auto& finger : hand.fingers) validate(finger);
  if (hand.fingers[kALeft].type != FingerType::A || hand.fingers[kARight].type != FingerType::A ||
      hand.fingers[kBLeft].type != FingerType::B || hand.fingers[kBRight].type != FingerType::B) {
    throw ValidationError("finger roles must be A-left, B-left, A-right, B-right");
  }
  if (!(hand.palm_diameter > 0.0)) throw ValidationError("palm_diameter must be > 0");
  if (!(hand.phi_max > 0.0)) throw ValidationError("phi_max must be > 0");
  if (hand.palm_rotation < 0.0 || hand.palm_rotation > hand.phi_max + 1e-12) {
    throw ValidationError("palm_rotation must lie in [0, phi_max]");
  }
  if (hand.lateral_offset < 0.0) throw ValidationError("lateral_offset must be >= 0");
  if (!(hand.table_clearance > 0.0)) throw ValidationError("table_clearance must be > 0");
  if (hand.lock_state == LockState::Locked &&
      std::abs(hand.palm_rotation - hand.phi_max) > 1e-9) {
    throw ValidationError("lock_state = Locked requires palm_rotation = phi_max");
  }
  std::array<int, 4> seen{};
  for (const auto& pair : hand.muscle_pairing) {
    for (int idx : pair) {
      if (idx < 0 || idx > 3) throw ValidationError("muscle_pairing index out of range");
      ++seen[idx];
    }
  }
  for (int count : seen) {
    if (count != 1) throw ValidationError("each finger must appear in exactly one muscle pairing");
  }
  if (hand.lock_state == LockState::Locked) {
    // Each combined finger pairs an A with a B, so it must draw one finger
    // from each muscle.
    for (const auto& pair : hand.muscle_pairing) {
      const bool a0 = hand.fingers[pair[0]].type == FingerType::A;
      const bool a1 = hand.fingers[pair[1]].type == FingerType::A;
      if (a0 != a1) {
        throw ValidationError(
            "locked mode requires each muscle to drive fingers of one type");
      }
    }
  }
}

}  // namespace grip
