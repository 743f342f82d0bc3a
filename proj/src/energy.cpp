#include "gripkit/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gripkit/tendon.hpp"

namespace grip {

namespace {

// Tendon length is strictly decreasing in q, so level-set queries reduce to
// bisection on one joint angle.
double solve_joint_for_tendon(const FingerDesign& design, int joint, double target) {
  const auto& lim = design.joint_limits[joint];
  const double at_lo = tendon_length(design, joint, lim.lo);
  const double at_hi = tendon_length(design, joint, lim.hi);
  if (target >= at_lo) return lim.lo;
  if (target <= at_hi) return lim.hi;
  double lo = lim.lo;
  double hi = lim.hi;
  for (int it = 0; it < 90; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tendon_length(design, joint, mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double cord_extension(const FingerDesign& design, int joint, double q) {
  return cord_length(design.elastic_offset[joint], q - design.elastic_rest_angle[joint]);
}

double elastic_energy(const FingerDesign& design, const JointState& state) {
  if (!within_limits(design, state)) {
    throw std::domain_error("joint state outside joint limits");
  }
  const double total =
      cord_extension(design, 0, state.q1) + cord_extension(design, 1, state.q2);
  return 0.5 * design.spring_constant * total * total;
}

double total_tendon_length(const FingerDesign& design, const JointState& state) {
  return tendon_length(design, 0, state.q1) + tendon_length(design, 1, state.q2);
}

std::pair<double, double> tendon_length_range(const FingerDesign& design) {
  const JointState at_lo{design.joint_limits[0].lo, design.joint_limits[1].lo};
  const JointState at_hi{design.joint_limits[0].hi, design.joint_limits[1].hi};
  return {total_tendon_length(design, at_hi), total_tendon_length(design, at_lo)};
}

std::vector<EnergySample> energy_grid(const FingerDesign& design, int n1, int n2) {
  if (n1 < 2 || n2 < 2) throw std::invalid_argument("energy_grid requires n1, n2 >= 2");
  std::vector<EnergySample> grid;
  grid.reserve(static_cast<std::size_t>(n1) * n2);
  const auto& l1 = design.joint_limits[0];
  const auto& l2 = design.joint_limits[1];
  for (int i = 0; i < n1; ++i) {
    const double q1 = l1.lo + (l1.hi - l1.lo) * i / (n1 - 1);
    for (int j = 0; j < n2; ++j) {
      const double q2 = l2.lo + (l2.hi - l2.lo) * j / (n2 - 1);
      const JointState state{q1, q2};
      grid.push_back({state, total_tendon_length(design, state), elastic_energy(design, state)});
    }
  }
  return grid;
}

namespace {

}  // namespace

// Both joint lengths decrease in their angles, so the level set is a single
// monotone curve (q1 decreasing in q2) clipped to the joint box.
ContourCurve contour_curve(const FingerDesign& design, double target) {
  const auto [total_min, total_max] = tendon_length_range(design);
  if (target < total_min - 1e-9 || target > total_max + 1e-9) {
    throw std::range_error("target tendon length outside achievable range");
  }
  const double t = std::clamp(target, total_min, total_max);
  const auto& l1 = design.joint_limits[0];
  ContourCurve arc;
  arc.target_total_tendon_length = t;
  // q2 low end: q1 pinned at its upper limit when the remainder undershoots.
  arc.q2_lo = solve_joint_for_tendon(design, 1, t - tendon_length(design, 0, l1.hi));
  // q2 high end: q1 lands exactly on its lower limit.
  arc.q2_hi = solve_joint_for_tendon(design, 1, t - tendon_length(design, 0, l1.lo));
  return arc;
}

JointState contour_state(const FingerDesign& design, const ContourCurve& arc, double q2) {
  const double remainder = arc.target_total_tendon_length - tendon_length(design, 1, q2);
  return {solve_joint_for_tendon(design, 0, remainder), q2};
}

Contour contour(const FingerDesign& design, double target_length, int resolution) {
  if (resolution < 2) throw std::invalid_argument("contour resolution must be >= 2");
  const ContourCurve arc = contour_curve(design, target_length);
  Contour result;
  result.target_total_tendon_length = arc.target_total_tendon_length;
  result.samples.reserve(resolution);
  for (int i = 0; i < resolution; ++i) {
    const double q2 = arc.q2_lo + (arc.q2_hi - arc.q2_lo) * i / (resolution - 1);
    result.samples.push_back(contour_state(design, arc, q2));
  }
  return result;
}

namespace {

struct ContourMin {
  JointState state;
  double energy = 0.0;
};

// Prefer lower energy; on ties (within eps) prefer smaller q1, then q2.
bool better(const ContourMin& a, const ContourMin& b, double eps) {
  if (a.energy < b.energy - eps) return true;
  if (a.energy > b.energy + eps) return false;
  if (a.state.q1 < b.state.q1 - 1e-15) return true;
  if (a.state.q1 > b.state.q1 + 1e-15) return false;
  return a.state.q2 < b.state.q2;
}

ContourMin minimise_on_arc(const FingerDesign& design, const ContourCurve& arc,
                           int samples = 1024) {
  auto eval = [&](double q2) -> ContourMin {
    const JointState s = contour_state(design, arc, q2);
    return {s, elastic_energy(design, s)};
  };
  const double span = arc.q2_hi - arc.q2_lo;
  ContourMin best = eval(arc.q2_hi);  // q1 lower-limit end
  if (span <= 0.0) return best;
  const double eps = 1e-12 * std::max(1.0, best.energy);
  int best_idx = samples;
  for (int i = 0; i <= samples; ++i) {
    const double q2 = arc.q2_lo + span * i / samples;
    ContourMin cand = eval(q2);
    if (better(cand, best, eps)) {
      best = cand;
      best_idx = i;
    }
  }
  // Golden-section refinement in the bracket around the best sample; the
  // exact arc endpoints stay in play via the comparison above.
  if (best_idx > 0 && best_idx < samples) {
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = arc.q2_lo + span * (best_idx - 1) / samples;
    double hi = arc.q2_lo + span * (best_idx + 1) / samples;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = eval(x1).energy;
    double f2 = eval(x2).energy;
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = eval(x1).energy;
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = eval(x2).energy;
      }
    }
    ContourMin refined = eval(0.5 * (lo + hi));
    if (better(refined, best, eps)) best = refined;
  }
  return best;
}

}  // namespace

std::pair<JointState, double> min_energy_on_contour(const FingerDesign& design,
                                                    double target_length) {
  const ContourCurve arc = contour_curve(design, target_length);
  const ContourMin best = minimise_on_arc(design, arc);
  return {best.state, best.energy};
}

std::vector<TrajectoryPoint> min_energy_trajectory(const FingerDesign& design, int steps) {
  if (steps < 2) throw std::invalid_argument("trajectory requires steps >= 2");
  const auto [total_min, total_max] = tendon_length_range(design);
  std::vector<TrajectoryPoint> traj;
  traj.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double retracted = (total_max - total_min) * i / (steps - 1);
    const auto [state, energy] = min_energy_on_contour(design, total_max - retracted);
    traj.push_back({retracted, state, energy});
  }
  return traj;
}

BistabilityReport detect_bistability(const FingerDesign& design, int contours,
                                     int scan_resolution) {
  BistabilityReport report;
  // Energy is maximal at a joint-box corner (extensions grow with the
  // distance from the elastic rest angle).
  double max_energy = 0.0;
  for (double q1 : {design.joint_limits[0].lo, design.joint_limits[0].hi}) {
    for (double q2 : {design.joint_limits[1].lo, design.joint_limits[1].hi}) {
      max_energy = std::max(max_energy, elastic_energy(design, {q1, q2}));
    }
  }
  if (max_energy < 1e-15) {
    report.degenerate = true;
    return report;
  }
  const double barrier_eps = 1e-3 * max_energy;
  const auto [total_min, total_max] = tendon_length_range(design);
  std::size_t best_count = 0;
  for (int c = 1; c < contours - 1; ++c) {
    const double target = total_max + (total_min - total_max) * c / (contours - 1);
    const ContourCurve arc = contour_curve(design, target);
    if (arc.q2_hi - arc.q2_lo <= 0.0) continue;
    std::vector<double> energies(scan_resolution);
    std::vector<JointState> states(scan_resolution);
    for (int i = 0; i < scan_resolution; ++i) {
      const double q2 = arc.q2_lo + (arc.q2_hi - arc.q2_lo) * i / (scan_resolution - 1);
      states[i] = contour_state(design, arc, q2);
      energies[i] = elastic_energy(design, states[i]);
    }
    // Local minima along the 1-D contour, end samples included.
    std::vector<int> minima;
    for (int i = 0; i < scan_resolution; ++i) {
      const bool left_ok = i == 0 || energies[i] <= energies[i - 1];
      const bool right_ok = i == scan_resolution - 1 || energies[i] <= energies[i + 1];
      const bool strict = (i > 0 && energies[i] < energies[i - 1]) ||
                          (i < scan_resolution - 1 && energies[i] < energies[i + 1]) ||
                          scan_resolution == 1;
      if (left_ok && right_ok && strict) minima.push_back(i);
    }
    // Keep minima separated by a barrier above threshold.
    std::vector<int> basins;
    for (int idx : minima) {
      if (basins.empty()) {
        basins.push_back(idx);
        continue;
      }
      double barrier = 0.0;
      for (int i = basins.back(); i <= idx; ++i) barrier = std::max(barrier, energies[i]);
      if (barrier - std::max(energies[basins.back()], energies[idx]) > barrier_eps) {
        basins.push_back(idx);
      } else if (energies[idx] < energies[basins.back()]) {
        basins.back() = idx;
      }
    }
    if (basins.size() > best_count) {
      best_count = basins.size();
      report.basins.clear();
      for (int idx : basins) report.basins.push_back(states[idx]);
    }
  }
  report.bistable = best_count >= 2;
  return report;
}

}  // namespace grip
