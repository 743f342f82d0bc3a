#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace grip {

// Thrown when a config or trial log violates a documented invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an operation is requested in the wrong hand mode.
class ModeError : public std::runtime_error {
 public:
  explicit ModeError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a quasi-static simulation fails to converge or stalls.
class SimulationError : public std::runtime_error {
 public:
  explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

enum class FingerType { A, B };

struct JointLimits {
  double lo = 0.0;  // rad
  double hi = 0.0;  // rad
};

// Geometric and elastic parameters of one two-joint finger.
// Lengths in mm, angles in rad, spring constant in N/mm.
struct FingerDesign {
  FingerType type = FingerType::A;
  double proximal_length = 0.0;
  double distal_length = 0.0;
  double width = 0.0;
  double thickness = 0.0;

  // Perpendicular tendon routing offsets per joint: [joint][0] on the
  // preceding link, [joint][1] on the following link.
  std::array<std::array<double, 2>, 2> tendon_offsets{};
  // Tendon angular offset per joint; must exceed the joint upper limit.
  std::array<double, 2> tendon_offset_angle{};
  // Elastic cord routing offset per joint (identical on both links).
  std::array<double, 2> elastic_offset{};
  // Joint angle at which the elastic cord carries zero extension. The
  // stored elastic energy is measured from this angle, which for the
  // default design coincides with the joint's lower limit (the rest pose).
  std::array<double, 2> elastic_rest_angle{};
  double spring_constant = 0.0;
  std::array<JointLimits, 2> joint_limits{};
};

// Proximal/distal flexion angles of one finger, rad.
struct JointState {
  double q1 = 0.0;
  double q2 = 0.0;

  double operator[](int joint) const { return joint == 0 ? q1 : q2; }
  bool operator==(const JointState&) const = default;
};

enum class LockState { Unlocked, Locked };

// Index of each finger in HandConfig::fingers.
enum FingerIndex : int { kALeft = 0, kBLeft = 1, kARight = 2, kBRight = 3 };

struct HandConfig {
  std::array<FingerDesign, 4> fingers{};  // order per FingerIndex
  double palm_diameter = 0.0;             // mm
  double finger_rest_splay = 0.0;         // rad, between opposing fingers at rest
  double palm_rotation = 0.0;             // rad, current B-section angle in [0, phi_max]
  double phi_max = 0.0;                   // rad, rotation at which A/B pairs align
  double lateral_offset = 0.0;            // mm, finger base offset from its sagittal plane
  double table_clearance = 0.0;           // mm, palm plane to table plane
  LockState lock_state = LockState::Unlocked;
  double lock_compliance = 0.0;           // rad, residual distal play when locked
  // muscle_pairing[m] lists the two finger indices driven by muscle m.
  std::array<std::array<int, 2>, 2> muscle_pairing{};
};

// Reference design: A fingers (50, 45) mm, B fingers (40, 55) mm,
// 20 mm wide/thick, 60 mm palm, 30 deg rest splay, joint limits
// q1 in [-pi/6, pi/3] and q2 in [0, pi/2].
HandConfig default_hand();

bool within_limits(const FingerDesign& design, const JointState& state, double tol = 1e-12);

// Throw ValidationError naming the violated invariant.
void validate(const FingerDesign& design);
void validate(const HandConfig& hand);

}  // namespace grip
