#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gripkit/energy.hpp"
#include "gripkit/grasp.hpp"
#include "gripkit/hand_geometry.hpp"
#include "gripkit/types.hpp"

using namespace grip;
using Eigen::Vector2d;
using Eigen::Vector3d;

namespace {

constexpr double kPi = std::numbers::pi;

HandPose rest_pose(const HandConfig& hand) {
  HandPose pose{hand, {}};
  for (int f = 0; f < 4; ++f) {
    pose.joints[f] = {hand.fingers[f].joint_limits[0].lo, hand.fingers[f].joint_limits[1].lo};
  }
  return pose;
}

// A sphere resting on the table under the palm centre.
Sphere table_sphere(const HandConfig& hand, double diameter) {
  return Sphere{Vector3d(0.0, 0.0, -hand.table_clearance + 0.5 * diameter), 0.5 * diameter};
}

// Worst capsule penetration over all fingers and links at the final pose.
double worst_clearance(const GraspOutcome& out, const HandConfig& hand,
                       const SolidObject& object) {
  double worst = std::numeric_limits<double>::infinity();
  for (int f = 0; f < 4; ++f) {
    const FingerFrame frame = finger_frame(hand, f);
    const auto section = planar_section(object, frame);
    worst = std::min(worst,
                     finger_clearance(hand.fingers[f], frame.base_tilt, out.final_states[f],
                                      section));
  }
  return worst;
}

}  // namespace

TEST_CASE("planar sections of the solid primitives") {
  const HandConfig hand = default_hand();
  const FingerFrame frame = finger_frame(hand, kARight);  // plane y = 10 (lateral offset)

  SUBCASE("sphere: chord circle, shrunk by the offset from its centre") {
    const Sphere s{Vector3d(0.0, 0.0, -80.0), 20.0};
    const auto section = planar_section(SolidObject{s}, frame);
    REQUIRE(section.has_value());
    const auto* circle = std::get_if<Circle>(&*section);
    REQUIRE(circle != nullptr);
    // Plane passes 10 mm from the centre: r = sqrt(20^2 - 10^2).
    CHECK(circle->radius == doctest::Approx(std::sqrt(300.0)).epsilon(1e-12));
    // Centre at x = 30 inward of the finger base, y = 20 above the sphere
    // centre's offset from the palm plane.
    CHECK(circle->center.x() == doctest::Approx(30.0));
    CHECK(circle->center.y() == doctest::Approx(-80.0));
    // A plane beyond the radius misses entirely.
    CHECK_FALSE(planar_section(SolidObject{Sphere{Vector3d(0, 40, -80), 20.0}}, frame));
  }

  SUBCASE("vertical cylinder: full-width rectangle at any lateral offset inside") {
    const VerticalCylinder cyl{Vector3d(0.0, 0.0, -70.0), 25.0, 60.0};
    const auto section = planar_section(SolidObject{cyl}, frame);
    REQUIRE(section.has_value());
    const auto* poly = std::get_if<ConvexPolygon>(&*section);
    REQUIRE(poly != nullptr);
    REQUIRE(poly->vertices.size() == 4);
    double min_x = 1e9, max_x = -1e9, min_y = 1e9, max_y = -1e9;
    for (const auto& v : poly->vertices) {
      min_x = std::min(min_x, v.x());
      max_x = std::max(max_x, v.x());
      min_y = std::min(min_y, v.y());
      max_y = std::max(max_y, v.y());
    }
    // Chord half-width sqrt(25^2 - 10^2) about x = 30; full height.
    const double half = std::sqrt(25.0 * 25.0 - 10.0 * 10.0);
    CHECK(min_x == doctest::Approx(30.0 - half));
    CHECK(max_x == doctest::Approx(30.0 + half));
    CHECK(min_y == doctest::Approx(-100.0));
    CHECK(max_y == doctest::Approx(-40.0));
  }
}

TEST_CASE("capsule clearance against hand-computed distances") {
  const Circle circle{Vector2d(10.0, 0.0), 3.0};
  // Segment parallel to the circle, closest approach 10 - 3 - 2 = 5.
  CHECK(capsule_clearance(Vector2d(0, -5), Vector2d(0, 5), 2.0, circle) ==
        doctest::Approx(5.0).epsilon(1e-12));
  // Overlapping: negative by the penetration depth.
  CHECK(capsule_clearance(Vector2d(6, 0), Vector2d(6, 5), 2.0, circle) ==
        doctest::Approx(-1.0).epsilon(1e-12));

  ConvexPolygon box;
  box.vertices = {Vector2d(5, -1), Vector2d(7, -1), Vector2d(7, 1), Vector2d(5, 1)};
  CHECK(capsule_clearance(Vector2d(0, 0), Vector2d(1, 0), 2.0, box) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(capsule_clearance(Vector2d(4.5, 0), Vector2d(4.6, 0), 1.0, box) < 0.0);
  // No object: finger_clearance reports unbounded room.
  CHECK(finger_clearance(default_hand().fingers[0], 0.1, {0.0, 0.0}, std::nullopt) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("planar chain agrees with the spatial chain") {
  const HandConfig hand = default_hand();
  const JointState state{0.2, 0.7};
  for (int f = 0; f < 4; ++f) {
    const FingerFrame frame = finger_frame(hand, f);
    const auto flat = planar_chain(hand.fingers[f], frame.base_tilt, state);
    const auto solid = finger_chain(hand, f, state);
    for (int i = 0; i < 3; ++i) {
      const Vector3d lifted =
          frame.base + flat[i].x() * frame.inward + flat[i].y() * Vector3d::UnitZ();
      CHECK((lifted - solid[i]).norm() < 1e-9);
    }
    CHECK(flat[0] == Vector2d::Zero());
  }
}

TEST_CASE("advance_finger in free space tracks the minimum-energy path") {
  const HandConfig hand = default_hand();
  const FingerDesign& d = hand.fingers[kARight];
  const double tilt = finger_frame(hand, kARight).base_tilt;
  const auto [lo, hi] = tendon_length_range(d);

  FingerClosureState fcs;
  fcs.state = {d.joint_limits[0].lo, d.joint_limits[1].lo};
  for (int i = 0; i < 30; ++i) {
    const FingerClosureState next = advance_finger(d, tilt, std::nullopt, fcs, 0.2);
    CHECK(next.retracted == doctest::Approx(fcs.retracted + 0.2));
    CHECK_FALSE(next.blocked);
    fcs = next;
  }
  const auto [expect, energy] = min_energy_on_contour(d, hi - fcs.retracted);
  CHECK(fcs.state.q1 == doctest::Approx(expect.q1).epsilon(1e-6));
  CHECK(fcs.state.q2 == doctest::Approx(expect.q2).epsilon(1e-6));

  // Retraction past the full range exhausts the tendon.
  FingerClosureState drained = fcs;
  for (int i = 0; i < 400 && !drained.exhausted; ++i) {
    drained = advance_finger(d, tilt, std::nullopt, drained, 0.2);
  }
  CHECK(drained.exhausted);
  CHECK(drained.retracted <= hi - lo + 1e-9);
}

TEST_CASE("advance_finger stops on the obstacle at tangency") {
  const HandConfig hand = default_hand();
  const FingerDesign& d = hand.fingers[kARight];
  const double tilt = finger_frame(hand, kARight).base_tilt;
  const PlanarObject wall = Circle{Vector2d(40.0, -80.0), 25.0};

  FingerClosureState fcs;
  fcs.state = {d.joint_limits[0].lo, d.joint_limits[1].lo};
  REQUIRE(finger_clearance(d, tilt, fcs.state, wall) > 0.0);
  double prev_retracted = 0.0;
  for (int i = 0; i < 2000 && !fcs.blocked; ++i) {
    fcs = advance_finger(d, tilt, wall, fcs, 0.1);
    CHECK(fcs.retracted >= prev_retracted);  // monotone take-up
    // Never through the object.
    CHECK(finger_clearance(d, tilt, fcs.state, wall) >= -1e-6);
    prev_retracted = fcs.retracted;
  }
  REQUIRE(fcs.blocked);
  // Blocked exactly at tangency, not a step short of it.
  CHECK(finger_clearance(d, tilt, fcs.state, wall) ==
        doctest::Approx(0.0).scale(1.0).epsilon(2e-3));
}

TEST_CASE("small sphere lands in a fingertip pinch") {
  const HandConfig hand = default_hand();
  const SolidObject ball{table_sphere(hand, 43.0)};
  const GraspOutcome out = close_grasp(rest_pose(hand), ball, PalmMode::Spherical);
  CHECK(out.classification == GraspClass::FingertipPinch);
  REQUIRE(out.contacts.size() >= 3);
  for (const auto& c : out.contacts) {
    CHECK(c.link == 1);
    CHECK(c.link_param >= 0.75);
  }
  CHECK(worst_clearance(out, hand, ball) >= -1e-6);
  // Mirror symmetry of the centred grasp.
  CHECK(out.final_states[kALeft].q1 == doctest::Approx(out.final_states[kARight].q1).epsilon(1e-9));
  CHECK(out.final_states[kALeft].q2 == doctest::Approx(out.final_states[kARight].q2).epsilon(1e-9));
  CHECK(out.final_states[kBLeft].q1 == doctest::Approx(out.final_states[kBRight].q1).epsilon(1e-9));
}

TEST_CASE("palm-sized sphere is enveloped") {
  const HandConfig hand = default_hand();
  const SolidObject ball{table_sphere(hand, 60.0)};
  const GraspOutcome out = close_grasp(rest_pose(hand), ball, PalmMode::Spherical);
  CHECK(out.classification == GraspClass::Enveloping);
  CHECK(out.contacts.size() >= 3);
  CHECK(worst_clearance(out, hand, ball) >= -1e-6);
}

TEST_CASE("missing the object entirely") {
  const HandConfig hand = default_hand();
  // Far outside the finger sweep.
  const SolidObject tiny{Sphere{Vector3d(200.0, 0.0, -90.0), 5.0}};
  const GraspOutcome out = close_grasp(rest_pose(hand), tiny, PalmMode::Spherical);
  CHECK(out.classification == GraspClass::Miss);
  CHECK(out.contacts.empty());
}

TEST_CASE("precision pinch centres an off-centre slab") {
  HandConfig hand = default_hand();
  hand.palm_rotation = hand.phi_max;
  hand.lock_state = LockState::Locked;
  const SolidObject slab{FlatSlab{Vector3d(10.0, 0.0, -94.0), 5.0, 2.0}};
  HandPose pose = rest_pose(hand);
  const GraspOutcome out = close_grasp(pose, slab, PalmMode::Precision, 0.01);
  CHECK(out.classification == GraspClass::FingertipPinch);
  REQUIRE(out.contacts.size() == 2);
  for (const auto& c : out.contacts) {
    CHECK(c.link == 1);
    CHECK(c.link_param >= 0.75);
  }
  // The free-sliding slab ends up balanced between the locked fingertips.
  CHECK(std::abs(out.object_center.x()) < 1e-6);
  CHECK(out.object_center.z() == doctest::Approx(-94.0));
  // Locked distal joints are rigid: q2 never leaves its seated value.
  CHECK(out.final_states[kALeft].q2 == pose.joints[kALeft].q2);
  CHECK(out.final_states[kARight].q2 == pose.joints[kARight].q2);
}

TEST_CASE("classification rules on synthetic contact sets") {
  const HandConfig hand = default_hand();
  const HandPose pose = rest_pose(hand);
  const SolidObject ball{table_sphere(hand, 43.0)};
  const std::array<JointState, 4> states = pose.joints;

  CHECK(classify_outcome({}, pose, states, ball, PalmMode::Spherical) == GraspClass::Miss);

  auto contact = [](int finger, int link, double t) {
    Contact c;
    c.finger = finger;
    c.link = link;
    c.link_param = t;
    return c;
  };
  // All contacts on outer distal quarters: pinch, regardless of count.
  CHECK(classify_outcome({contact(0, 1, 0.9), contact(2, 1, 1.0)}, pose, states, ball,
                         PalmMode::Spherical) == GraspClass::FingertipPinch);
  // A single mid-link graze holds nothing.
  CHECK(classify_outcome({contact(0, 0, 0.4)}, pose, states, ball, PalmMode::Spherical) ==
        GraspClass::Miss);
  // Three contacts over two distinct links: enveloping (escape exists here,
  // so it is not upgraded to caged).
  const auto cls = classify_outcome(
      {contact(0, 0, 0.5), contact(0, 1, 0.5), contact(2, 1, 0.5)}, pose, states, ball,
      PalmMode::Spherical);
  CHECK(cls == GraspClass::Enveloping);
}

TEST_CASE("paired fingers share one muscle: equal take-up on both sides") {
  const HandConfig hand = default_hand();
  const SolidObject ball{table_sphere(hand, 50.0)};
  const GraspOutcome out = close_grasp(rest_pose(hand), ball, PalmMode::Spherical);
  // Muscle 0 drives both A fingers, muscle 1 both B fingers.
  CHECK(out.final_tendon_length[kALeft] ==
        doctest::Approx(out.final_tendon_length[kARight]).epsilon(1e-9));
  CHECK(out.final_tendon_length[kBLeft] ==
        doctest::Approx(out.final_tendon_length[kBRight]).epsilon(1e-9));
  CHECK(out.circuit.pumped_volume > 0.0);
  CHECK(out.steps > 0);
}
