#pragma once

#include <Eigen/Dense>
#include <optional>
#include <variant>
#include <vector>

#include "gripkit/actuation.hpp"
#include "gripkit/energy.hpp"
#include "gripkit/hand_geometry.hpp"
#include "gripkit/types.hpp"

namespace grip {

// Quasi-static grasp closure. Each finger flexes in its own plane, so a
// solid primitive is reduced to one planar cross-section per finger and
// closure is solved as a set of coupled planar problems: at each volume
// step a finger moves to the minimum-energy, penetration-free point on its
// current tendon level set that is reachable from its previous state.
// Phalanges are capsules of radius thickness/2 in the plane.

struct Circle {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;
};

// Counterclockwise convex polygon.
struct ConvexPolygon {
  std::vector<Eigen::Vector2d> vertices;
};

using PlanarObject = std::variant<Circle, ConvexPolygon>;

struct Sphere {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.0;
};

// Axis-aligned with the palm axis.
struct VerticalCylinder {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();  // mid-height
  double radius = 0.0;
  double height = 0.0;
};

// Thin free-sliding box for precision-pinch scenarios: square footprint of
// `width`, vertical extent `height`, free to translate horizontally when
// pushed, held at its initial height by the support under it.
struct FlatSlab {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();  // mid-height
  double width = 0.0;
  double height = 0.0;
};

using SolidObject = std::variant<Sphere, VerticalCylinder, FlatSlab>;

// Cross-section of a solid in one finger's flexion plane. Plane coordinates:
// origin at the finger base, x along the inward closing direction, y up
// (along the palm axis). Empty when the plane misses the solid.
std::optional<PlanarObject> planar_section(const SolidObject& object, const FingerFrame& frame);

// Separation between a capsule (segment a-b inflated by `radius`) and a
// planar object; negative when they overlap.
double capsule_clearance(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double radius,
                         const PlanarObject& object);

// In-plane link endpoints {base, distal joint, tip}; the proximal link
// points at q1 + base_tilt from straight down.
std::array<Eigen::Vector2d, 3> planar_chain(const FingerDesign& design, double base_tilt,
                                            const JointState& state);

// Smallest clearance over both links of a finger, or +inf with no object.
double finger_clearance(const FingerDesign& design, double base_tilt, const JointState& state,
                        const std::optional<PlanarObject>& object);

struct FingerClosureState {
  JointState state;
  double retracted = 0.0;  // mm of tendon taken up from rest
  bool blocked = false;    // contact leaves no reachable level-set motion
  bool exhausted = false;  // tendon fully retracted
};

// Retract `dr` more tendon: move to the minimum-energy feasible point on
// the new level set reachable from the current state. Contact on one link
// narrows the feasible interval rather than stopping the finger, which is
// what lets a blocked proximal joint hand its motion to the distal one.
FingerClosureState advance_finger(const FingerDesign& design, double base_tilt,
                                  const std::optional<PlanarObject>& object,
                                  const FingerClosureState& current, double dr);

struct Contact {
  int finger = 0;
  int link = 0;          // 0 proximal, 1 distal
  double link_param = 0.0;  // closest point parameter along the link, 0..1
  Eigen::Vector2d point = Eigen::Vector2d::Zero();   // in-plane, on the capsule surface
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();  // from link toward object
};

enum class GraspClass { Miss, FingertipPinch, Enveloping, Caged };

struct GraspOutcome {
  GraspClass classification = GraspClass::Miss;
  std::vector<Contact> contacts;
  std::array<JointState, 4> final_states{};
  std::array<double, 4> final_tendon_length{};  // mm, per finger
  Eigen::Vector3d object_center = Eigen::Vector3d::Zero();  // final (slabs slide)
  HydraulicCircuit circuit;
  int steps = 0;
};

// Closes the hand around the object by injecting pump volume in increments
// sized for at most `step` mm of tendon motion. The two muscles share one
// supply line; a muscle whose fingers are blocked carries infinite load, so
// the remaining volume flows to the other pair. Precision mode runs the
// locked two-finger pinch with distal joints pinned; the slab slides
// horizontally when pushed off-centre.
GraspOutcome close_grasp(const HandPose& pose, const SolidObject& object, PalmMode mode,
                         double step = 0.1);

// Miss without contacts; FingertipPinch when every contact sits on the
// outer quarter of a distal link; Enveloping for >= 3 contacts spanning
// >= 2 links; upgraded to Caged when a dense translation-direction scan
// finds no planar escape path in any finger plane.
GraspClass classify_outcome(const std::vector<Contact>& contacts, const HandPose& pose,
                            const std::array<JointState, 4>& final_states,
                            const SolidObject& object, PalmMode mode);

}  // namespace grip
