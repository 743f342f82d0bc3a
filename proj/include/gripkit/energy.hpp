#pragma once

#include <utility>
#include <vector>

#include "gripkit/types.hpp"

namespace grip {

// Elastic energy landscape of one underactuated finger over its joint box,
// level sets of total retractable tendon length, and the constrained
// minimum-energy states that govern unhindered closing.

// Elastic cord extension of one joint, measured from the design's
// elastic_rest_angle (zero extension at the rest pose).
double cord_extension(const FingerDesign& design, int joint, double q);

// E = 1/2 k (e1 + e2)^2; one shared cord, so extensions sum before squaring.
double elastic_energy(const FingerDesign& design, const JointState& state);

double total_tendon_length(const FingerDesign& design, const JointState& state);

// [min, max] of total tendon length over the joint-limit box.
std::pair<double, double> tendon_length_range(const FingerDesign& design);

struct EnergySample {
  JointState state;
  double total_tendon_length = 0.0;  // mm
  double elastic_energy = 0.0;       // N*mm
};

// Row-major n1 x n2 grid over the joint-limit box (q1 on rows).
std::vector<EnergySample> energy_grid(const FingerDesign& design, int n1, int n2);

struct Contour {
  double target_total_tendon_length = 0.0;
  std::vector<JointState> samples;  // ordered by ascending q2
};

// Level set of total tendon length, traced by bisection per sample.
// Throws std::range_error for targets outside the achievable range.
Contour contour(const FingerDesign& design, double target_length, int resolution);

// Parameterised form of one level set: q1 is a monotone function of q2
// over [q2_lo, q2_hi], with the endpoints landing exactly on the q1 joint
// limits whenever the level set touches them.
struct ContourCurve {
  double target_total_tendon_length = 0.0;
  double q2_lo = 0.0;
  double q2_hi = 0.0;
};

// Throws std::range_error for targets outside the achievable range.
ContourCurve contour_curve(const FingerDesign& design, double target_length);

JointState contour_state(const FingerDesign& design, const ContourCurve& curve, double q2);

// Minimum-energy state on the level set, ties broken toward smaller q1
// then smaller q2. Returns the state and its energy.
std::pair<JointState, double> min_energy_on_contour(const FingerDesign& design,
                                                    double target_length);

struct TrajectoryPoint {
  double retracted_tendon = 0.0;  // mm, cumulative retraction from rest
  JointState state;
  double elastic_energy = 0.0;  // N*mm
};

// Minimum-energy states as tendon retraction sweeps linearly from zero to
// the full range.
std::vector<TrajectoryPoint> min_energy_trajectory(const FingerDesign& design, int steps);

struct BistabilityReport {
  bool bistable = false;
  // True when the energy landscape is identically zero (no elastic cord).
  bool degenerate = false;
  // Representative local minima on the contour with the most basins.
  std::vector<JointState> basins;
};

// Counts separated local energy minima along each of `contours` level
// sets; bistable when any contour carries two minima split by a barrier
// above 1e-3 of the maximum energy over the box.
BistabilityReport detect_bistability(const FingerDesign& design, int contours = 40,
                                     int scan_resolution = 500);

}  // namespace grip
