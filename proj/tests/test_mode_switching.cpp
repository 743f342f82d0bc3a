#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "gripkit/hand_geometry.hpp"
#include "gripkit/mode_switching.hpp"
#include "gripkit/types.hpp"

using namespace grip;
using Eigen::Vector3d;

namespace {

HandConfig locked_hand() {
  HandConfig hand = default_hand();
  hand.palm_rotation = hand.phi_max;
  hand.lock_state = LockState::Locked;
  return hand;
}

bool same_line_both_orders(const RotationSubgroup& g, const RotationSubgroup& h) {
  const bool gh = same_axis_line(g, h);
  CHECK(gh == same_axis_line(h, g));
  return gh;
}

}  // namespace

TEST_CASE("rotation subgroup construction") {
  RotationSubgroup g(Vector3d(1, 2, 3), Vector3d(0, 0, 5));
  CHECK(g.axis.isApprox(Vector3d::UnitZ()));
  CHECK_THROWS_AS(RotationSubgroup(Vector3d::Zero(), Vector3d::Zero()), std::invalid_argument);
}

TEST_CASE("same_axis_line recognises lines, not just axis vectors") {
  const RotationSubgroup g(Vector3d(1, 0, 0), Vector3d::UnitZ());
  // Same line: point shifted along the axis, direction flipped.
  CHECK(same_axis_line(g, {Vector3d(1, 0, 7), -Vector3d::UnitZ()}));
  // Parallel but offset lines differ.
  CHECK_FALSE(same_axis_line(g, {Vector3d(2, 0, 0), Vector3d::UnitZ()}));
  // Intersecting but non-parallel lines differ.
  CHECK_FALSE(same_axis_line(g, {Vector3d(1, 0, 0), Vector3d::UnitX()}));
}

TEST_CASE("intersection keeps the subgroup only on a shared line") {
  const RotationSubgroup g(Vector3d(0, 1, 0), Vector3d::UnitX());
  SUBCASE("identical lines") {
    const MotionGroup k = intersect_rotation_subgroups(g, {Vector3d(5, 1, 0), Vector3d::UnitX()});
    REQUIRE(k.factors.size() == 1);
    CHECK(same_axis_line(k.factors[0], g));
  }
  SUBCASE("parallel offset lines share only the identity") {
    CHECK(intersect_rotation_subgroups(g, {Vector3d(0, 2, 0), Vector3d::UnitX()}).is_identity());
  }
  SUBCASE("skew lines share only the identity") {
    CHECK(intersect_rotation_subgroups(g, {Vector3d(0, 0, 1), Vector3d::UnitY()}).is_identity());
  }
}

TEST_CASE("intersection is idempotent and commutative over random pairs") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  std::uniform_int_distribution<int> coin(0, 3);
  auto random_subgroup = [&] {
    Vector3d axis;
    do {
      axis = Vector3d(coord(rng), coord(rng), coord(rng));
    } while (axis.norm() < 1e-6);
    return RotationSubgroup(Vector3d(coord(rng), coord(rng), coord(rng)), axis);
  };
  for (int i = 0; i < 1000; ++i) {
    RotationSubgroup g = random_subgroup();
    RotationSubgroup h;
    switch (coin(rng)) {
      case 0:  // same line, shifted and possibly flipped
        h = RotationSubgroup(g.point + coord(rng) * g.axis, (i % 2 ? 1.0 : -1.0) * g.axis);
        break;
      case 1:  // parallel offset
        h = RotationSubgroup(g.point + g.axis.unitOrthogonal(), g.axis);
        break;
      default:  // generic
        h = random_subgroup();
        break;
    }
    const MotionGroup gg = intersect_rotation_subgroups(g, g);
    REQUIRE(gg.factors.size() == 1);  // idempotent
    CHECK(same_axis_line(gg.factors[0], g));

    const MotionGroup gh = intersect_rotation_subgroups(g, h);
    const MotionGroup hg = intersect_rotation_subgroups(h, g);
    CHECK(gh.is_identity() == hg.is_identity());  // commutative
    if (!gh.is_identity()) {
      CHECK(same_line_both_orders(gh.factors[0], hg.factors[0]));
      CHECK(same_line_both_orders(gh.factors[0], g));
      CHECK(same_line_both_orders(gh.factors[0], h));
    }
  }
}

TEST_CASE("a free finger is a two-factor rotation product") {
  const HandConfig hand = default_hand();
  for (int f = 0; f < 4; ++f) {
    const MotionGroup group = finger_motion_group(hand, f);
    REQUIRE(group.factors.size() == 2);
    const FingerFrame frame = finger_frame(hand, f);
    const auto chain = finger_chain(hand, f, {});
    for (int j = 0; j < 2; ++j) {
      CHECK(group.factors[j].axis.cross(frame.normal).norm() < 1e-12);
      CHECK((group.factors[j].point - chain[j]).norm() < 1e-12);
    }
    // The two joint axes are parallel but offset: no shared rotation.
    CHECK(intersect_rotation_subgroups(group.factors[0], group.factors[1]).is_identity());
  }
}

TEST_CASE("locked pairs collapse to one shared proximal rotation") {
  const HandConfig hand = locked_hand();
  for (const auto& pair : locking_pairs()) {
    CHECK(hand.fingers[pair[0]].type == FingerType::A);
    CHECK(hand.fingers[pair[1]].type == FingerType::B);
    const MotionGroup combined = combined_finger_group(hand, pair[0], pair[1]);
    REQUIRE(combined.factors.size() == 1);
    CHECK_FALSE(combined.degenerate);
    // The surviving factor is the shared proximal axis line of the pair.
    const JointState rest{hand.fingers[pair[0]].joint_limits[0].lo,
                          hand.fingers[pair[0]].joint_limits[1].lo};
    const MotionGroup ga = finger_motion_group(hand, pair[0], rest);
    const MotionGroup gb = finger_motion_group(hand, pair[1], rest);
    CHECK(same_axis_line(combined.factors[0], ga.factors[0]));
    CHECK(same_axis_line(combined.factors[0], gb.factors[0]));
  }
}

TEST_CASE("combining requires the locked mode") {
  HandConfig hand = default_hand();
  CHECK_THROWS_AS(combined_finger_group(hand, kALeft, kBLeft), ModeError);
  hand.palm_rotation = hand.phi_max;  // rotated but not locked
  CHECK_THROWS_AS(combined_finger_group(hand, kALeft, kBLeft), ModeError);
}

TEST_CASE("coincident distal axes flag a degenerate combined group") {
  HandConfig hand = locked_hand();
  // Equal proximal lengths and no lateral offset put the distal joints of a
  // seated pair on the same spatial line.
  hand.lateral_offset = 0.0;
  for (auto& f : hand.fingers) f.proximal_length = 50.0;
  const MotionGroup combined = combined_finger_group(hand, kALeft, kBLeft);
  CHECK(combined.degenerate);
  REQUIRE(combined.factors.size() == 2);
}

TEST_CASE("lock feasibility") {
  HandConfig hand = default_hand();
  CHECK_FALSE(lock_feasible(hand));  // palm not rotated
  hand.palm_rotation = hand.phi_max;
  CHECK(lock_feasible(hand));  // all fingers at rest

  std::array<JointState, 4> joints{};
  for (int f = 0; f < 4; ++f) {
    joints[f] = {hand.fingers[f].joint_limits[0].lo, hand.fingers[f].joint_limits[1].lo};
  }
  CHECK(lock_feasible(hand, joints));
  joints[kBLeft].q2 += 0.01;  // one finger out of pose
  CHECK_FALSE(lock_feasible(hand, joints));
  CHECK(lock_feasible(hand, joints, 0.02));  // within an explicit tolerance
}
