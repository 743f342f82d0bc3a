#include "gripkit/grasp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <numbers>
#include <set>

#include "gripkit/tendon.hpp"

namespace grip {

namespace {

constexpr double kFeasTol = 1e-6;     // mm, allowed constraint violation
constexpr double kContactTol = 1e-3;  // mm, clearance below which a link counts as touching
constexpr double kJumpTol = 0.35;     // rad, max level-set jump per volume step
constexpr int kMaxSteps = 20000;

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

Eigen::Vector2d closest_on_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                                   const Eigen::Vector2d& b, double* t_out = nullptr) {
  const Eigen::Vector2d ab = b - a;
  const double len_sq = ab.squaredNorm();
  double t = len_sq > 0.0 ? (p - a).dot(ab) / len_sq : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (t_out) *t_out = t;
  return a + t * ab;
}

bool segments_intersect(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                        const Eigen::Vector2d& c, const Eigen::Vector2d& d) {
  const double d1 = cross2(b - a, c - a);
  const double d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c);
  const double d4 = cross2(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

// Closest points between segments ab and cd; returns distance, fills the
// points and the parameter on ab.
double seg_seg_closest(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                       const Eigen::Vector2d& c, const Eigen::Vector2d& d,
                       Eigen::Vector2d* on_ab = nullptr, Eigen::Vector2d* on_cd = nullptr,
                       double* t_ab = nullptr) {
  if (segments_intersect(a, b, c, d)) {
    // Crossing point (segments are non-parallel here).
    const double t = cross2(c - a, d - c) / cross2(b - a, d - c);
    const Eigen::Vector2d p = a + t * (b - a);
    if (on_ab) *on_ab = p;
    if (on_cd) *on_cd = p;
    if (t_ab) *t_ab = t;
    return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const Eigen::Vector2d& p, const Eigen::Vector2d& sa,
                      const Eigen::Vector2d& sb, bool p_on_ab) {
    double t = 0.0;
    const Eigen::Vector2d q = closest_on_segment(p, sa, sb, &t);
    const double dist = (p - q).norm();
    if (dist < best) {
      best = dist;
      if (p_on_ab) {
        if (on_ab) *on_ab = p;
        if (on_cd) *on_cd = q;
        if (t_ab) *t_ab = (p - a).norm() / std::max((b - a).norm(), 1e-300);
      } else {
        if (on_ab) *on_ab = q;
        if (on_cd) *on_cd = p;
        if (t_ab) *t_ab = t;
      }
    }
  };
  consider(a, c, d, true);
  consider(b, c, d, true);
  consider(c, a, b, false);
  consider(d, a, b, false);
  return best;
}

bool point_in_convex(const Eigen::Vector2d& p, const ConvexPolygon& poly) {
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = poly.vertices[i];
    const Eigen::Vector2d& b = poly.vertices[(i + 1) % n];
    if (cross2(b - a, p - a) < 0.0) return false;
  }
  return true;
}

}  // namespace

double capsule_clearance(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double radius,
                         const PlanarObject& object) {
  if (const Circle* c = std::get_if<Circle>(&object)) {
    double t = 0.0;
    const Eigen::Vector2d q = closest_on_segment(c->center, a, b, &t);
    return (c->center - q).norm() - c->radius - radius;
  }
  const ConvexPolygon& poly = std::get<ConvexPolygon>(object);
  const std::size_t n = poly.vertices.size();
  if (point_in_convex(a, poly) || point_in_convex(b, poly)) return -(radius + 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& c = poly.vertices[i];
    const Eigen::Vector2d& d = poly.vertices[(i + 1) % n];
    if (segments_intersect(a, b, c, d)) return -(radius + 1.0);
    best = std::min(best, seg_seg_closest(a, b, c, d));
  }
  return best - radius;
}

std::array<Eigen::Vector2d, 3> planar_chain(const FingerDesign& design, double base_tilt,
                                            const JointState& state) {
  const double a1 = state.q1 + base_tilt;
  const double a2 = a1 + state.q2;
  const Eigen::Vector2d base = Eigen::Vector2d::Zero();
  const Eigen::Vector2d joint2 =
      base + design.proximal_length * Eigen::Vector2d(std::sin(a1), -std::cos(a1));
  const Eigen::Vector2d tip =
      joint2 + design.distal_length * Eigen::Vector2d(std::sin(a2), -std::cos(a2));
  return {base, joint2, tip};
}

double finger_clearance(const FingerDesign& design, double base_tilt, const JointState& state,
                        const std::optional<PlanarObject>& object) {
  if (!object) return std::numeric_limits<double>::infinity();
  const auto chain = planar_chain(design, base_tilt, state);
  const double cap = 0.5 * design.thickness;
  return std::min(capsule_clearance(chain[0], chain[1], cap, *object),
                  capsule_clearance(chain[1], chain[2], cap, *object));
}

std::optional<PlanarObject> planar_section(const SolidObject& object, const FingerFrame& frame) {
  const Eigen::Vector3d up(0.0, 0.0, 1.0);
  auto in_plane = [&](const Eigen::Vector3d& p) {
    const Eigen::Vector3d rel = p - frame.base;
    return Eigen::Vector2d(rel.dot(frame.inward), rel.dot(up));
  };
  auto off_plane = [&](const Eigen::Vector3d& p) {
    return std::abs((p - frame.base).dot(frame.normal));
  };
  if (const Sphere* s = std::get_if<Sphere>(&object)) {
    const double d = off_plane(s->center);
    if (d >= s->radius) return std::nullopt;
    return PlanarObject{Circle{in_plane(s->center), std::sqrt(s->radius * s->radius - d * d)}};
  }
  auto rect = [&](const Eigen::Vector3d& center, double radius, double height)
      -> std::optional<PlanarObject> {
    const double d = off_plane(center);
    if (d >= radius) return std::nullopt;
    const double hw = std::sqrt(radius * radius - d * d);
    const Eigen::Vector2d c = in_plane(center);
    ConvexPolygon poly;
    poly.vertices = {c + Eigen::Vector2d(-hw, -0.5 * height),
                     c + Eigen::Vector2d(hw, -0.5 * height),
                     c + Eigen::Vector2d(hw, 0.5 * height),
                     c + Eigen::Vector2d(-hw, 0.5 * height)};
    return PlanarObject{poly};
  };
  if (const VerticalCylinder* cyl = std::get_if<VerticalCylinder>(&object)) {
    return rect(cyl->center, cyl->radius, cyl->height);
  }
  const FlatSlab& slab = std::get<FlatSlab>(object);
  return rect(slab.center, 0.5 * slab.width, slab.height);
}

namespace {

// Penetration-free q2 intervals of one level set, boundaries refined by
// bisection so tangency-width intervals survive (a wrapping finger's
// feasible set can collapse far below any fixed sampling pitch).
std::vector<std::pair<double, double>> feasible_intervals(
    const FingerDesign& design, double base_tilt, const std::optional<PlanarObject>& object,
    const ContourCurve& arc, double q2_seed) {
  if (!object || arc.q2_hi <= arc.q2_lo)
    return {{arc.q2_lo, std::max(arc.q2_hi, arc.q2_lo)}};
  auto clear = [&](double q2) {
    return finger_clearance(design, base_tilt, contour_state(design, arc, q2), object);
  };
  constexpr int kSamples = 256;
  const double span = arc.q2_hi - arc.q2_lo;
  std::array<double, kSamples + 1> c{};
  for (int i = 0; i <= kSamples; ++i) c[i] = clear(arc.q2_lo + span * i / kSamples);

  auto refine = [&](double lo, double hi, bool lo_feasible) {
    // Bisect to the feasibility boundary between a feasible and an
    // infeasible point.
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((clear(mid) >= -kFeasTol) == lo_feasible)
        lo = mid;
      else
        hi = mid;
    }
    return lo_feasible ? lo : hi;
  };

  std::vector<std::pair<double, double>> intervals;
  int i = 0;
  while (i <= kSamples) {
    if (c[i] < -kFeasTol) {
      ++i;
      continue;
    }
    int j = i;
    while (j < kSamples && c[j + 1] >= -kFeasTol) ++j;
    double lo = arc.q2_lo + span * i / kSamples;
    double hi = arc.q2_lo + span * j / kSamples;
    if (i > 0) lo = refine(arc.q2_lo + span * (i - 1) / kSamples, lo, false);
    if (j < kSamples) hi = refine(hi, arc.q2_lo + span * (j + 1) / kSamples, true);
    intervals.emplace_back(lo, hi);
    i = j + 1;
  }
  if (!intervals.empty()) return intervals;

  // No sample cleared: hunt for a collapsed interval near the previous
  // state by maximizing clearance locally, then growing outward.
  double lo = std::max(arc.q2_lo, q2_seed - 2.0 * span / kSamples);
  double hi = std::min(arc.q2_hi, q2_seed + 2.0 * span / kSamples);
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = clear(x1);
  double f2 = clear(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = clear(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = clear(x2);
    }
  }
  const double peak = 0.5 * (lo + hi);
  if (clear(peak) < -kFeasTol) return {};
  const double left = peak > arc.q2_lo && clear(arc.q2_lo) < -kFeasTol
                          ? refine(arc.q2_lo, peak, false)
                          : arc.q2_lo;
  const double right = peak < arc.q2_hi && clear(arc.q2_hi) < -kFeasTol
                           ? refine(peak, arc.q2_hi, true)
                           : arc.q2_hi;
  return {{left, right}};
}

}  // namespace

namespace {

// One attempted retraction step; nullopt when no feasible reachable point
// exists on the new level set.
std::optional<FingerClosureState> try_advance(const FingerDesign& design, double base_tilt,
                                              const std::optional<PlanarObject>& object,
                                              const FingerClosureState& current, double dr) {
  const auto [total_min, total_max] = tendon_length_range(design);
  double retracted = current.retracted + dr;
  bool exhausted = false;
  if (retracted >= total_max - total_min - 1e-12) {
    retracted = total_max - total_min;
    exhausted = true;
  }
  const ContourCurve arc = contour_curve(design, total_max - retracted);
  const double q2_prev = std::clamp(current.state.q2, arc.q2_lo, arc.q2_hi);
  const auto intervals = feasible_intervals(design, base_tilt, object, arc, q2_prev);

  if (intervals.empty()) return std::nullopt;

  // Nearest feasible interval to the previous state.
  double best_gap = std::numeric_limits<double>::infinity();
  std::pair<double, double> iv = intervals.front();
  for (const auto& cand : intervals) {
    const double gap = q2_prev < cand.first    ? cand.first - q2_prev
                       : q2_prev > cand.second ? q2_prev - cand.second
                                               : 0.0;
    if (gap < best_gap) {
      best_gap = gap;
      iv = cand;
    }
  }
  const double q2_entry = std::clamp(q2_prev, iv.first, iv.second);
  const JointState entry = contour_state(design, arc, q2_entry);
  if (std::max(std::abs(entry.q1 - current.state.q1), std::abs(entry.q2 - current.state.q2)) >
      kJumpTol) {
    return std::nullopt;
  }

  // Local energy descent along the interval from the entry point: the
  // tendon settles the finger into the nearest basin, not the global one.
  constexpr int kM = 256;
  auto q2_at = [&](int i) { return iv.first + (iv.second - iv.first) * i / kM; };
  auto energy_at = [&](double q2) {
    return elastic_energy(design, contour_state(design, arc, q2));
  };
  int idx = static_cast<int>(std::lround((q2_entry - iv.first) /
                                         std::max(iv.second - iv.first, 1e-300) * kM));
  idx = std::clamp(idx, 0, kM);
  double e_idx = energy_at(q2_at(idx));
  while (idx < kM && energy_at(q2_at(idx + 1)) < e_idx) e_idx = energy_at(q2_at(++idx));
  while (idx > 0 && energy_at(q2_at(idx - 1)) < e_idx) e_idx = energy_at(q2_at(--idx));
  double lo = q2_at(std::max(idx - 1, 0));
  double hi = q2_at(std::min(idx + 1, kM));
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = energy_at(x1);
  double f2 = energy_at(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = energy_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = energy_at(x2);
    }
  }
  double q2_best = 0.5 * (lo + hi);
  if (energy_at(q2_at(idx)) < energy_at(q2_best)) q2_best = q2_at(idx);

  FingerClosureState next;
  next.state = contour_state(design, arc, q2_best);
  next.retracted = retracted;
  next.exhausted = exhausted;
  return next;
}

}  // namespace

FingerClosureState advance_finger(const FingerDesign& design, double base_tilt,
                                  const std::optional<PlanarObject>& object,
                                  const FingerClosureState& current, double dr) {
  if (current.blocked || current.exhausted || dr <= 0.0) return current;
  if (auto next = try_advance(design, base_tilt, object, current, dr)) return *next;
  // The full step has no feasible landing point: bisect the increment so
  // the finger advances to the tangency before it reports blocked, leaving
  // the contact resolvable instead of a step-sized gap.
  FingerClosureState best = current;
  double lo = 0.0;
  double hi = dr;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (auto next = try_advance(design, base_tilt, object, current, mid)) {
      best = *next;
      lo = mid;
    } else {
      hi = mid;
    }
  }
  best.blocked = true;
  return best;
}

namespace {

// Elastic tendon tension along the constrained closing path, estimated by
// finite difference of the settled energy per unit retraction.
double path_tension(const FingerDesign& design, double base_tilt,
                    const std::optional<PlanarObject>& object, const FingerClosureState& s) {
  constexpr double kDelta = 0.01;  // mm
  const FingerClosureState probe = advance_finger(design, base_tilt, object, s, kDelta);
  if (probe.blocked || probe.retracted <= s.retracted) return 0.0;
  const double de =
      elastic_energy(design, probe.state) - elastic_energy(design, s.state);
  return std::max(de / (probe.retracted - s.retracted), 0.0);
}

void collect_contacts(int finger, const FingerDesign& design, double base_tilt,
                      const JointState& state, const std::optional<PlanarObject>& object,
                      std::vector<Contact>* out) {
  if (!object) return;
  const auto chain = planar_chain(design, base_tilt, state);
  const double cap = 0.5 * design.thickness;
  for (int link = 0; link < 2; ++link) {
    const Eigen::Vector2d& a = chain[link];
    const Eigen::Vector2d& b = chain[link + 1];
    if (capsule_clearance(a, b, cap, *object) > kContactTol) continue;
    Contact contact;
    contact.finger = finger;
    contact.link = link;
    Eigen::Vector2d on_link;
    Eigen::Vector2d on_obj;
    if (const Circle* c = std::get_if<Circle>(&*object)) {
      on_link = closest_on_segment(c->center, a, b, &contact.link_param);
      on_obj = c->center;
    } else {
      const ConvexPolygon& poly = std::get<ConvexPolygon>(*object);
      double best = std::numeric_limits<double>::infinity();
      const std::size_t n = poly.vertices.size();
      for (std::size_t i = 0; i < n; ++i) {
        Eigen::Vector2d p;
        Eigen::Vector2d q;
        double t = 0.0;
        const double dist =
            seg_seg_closest(a, b, poly.vertices[i], poly.vertices[(i + 1) % n], &p, &q, &t);
        if (dist < best) {
          best = dist;
          on_link = p;
          on_obj = q;
          contact.link_param = t;
        }
      }
    }
    const Eigen::Vector2d dir = (on_obj - on_link).norm() > 1e-12
                                    ? (on_obj - on_link).normalized()
                                    : Eigen::Vector2d(0.0, 1.0);
    contact.normal = dir;
    contact.point = on_link + cap * dir;
    out->push_back(contact);
  }
}

bool object_overlaps(const PlanarObject& object, const Eigen::Vector2d& a,
                     const Eigen::Vector2d& b, double radius) {
  return capsule_clearance(a, b, radius, object) < 0.0;
}

double object_bottom(const PlanarObject& object) {
  if (const Circle* c = std::get_if<Circle>(&object)) return c->center.y() - c->radius;
  const ConvexPolygon& poly = std::get<ConvexPolygon>(object);
  double y = std::numeric_limits<double>::infinity();
  for (const auto& v : poly.vertices) y = std::min(y, v.y());
  return y;
}

PlanarObject translated(const PlanarObject& object, const Eigen::Vector2d& d) {
  if (const Circle* c = std::get_if<Circle>(&object)) return Circle{c->center + d, c->radius};
  ConvexPolygon poly = std::get<ConvexPolygon>(object);
  for (auto& v : poly.vertices) v += d;
  return poly;
}

// Dense translation-direction scan in one finger plane: can the section
// slide to infinity past the finger capsules, the palm chord, and the
// table line?
bool plane_has_escape(const HandConfig& hand, int finger, const JointState& state,
                      const PlanarObject& section) {
  const FingerDesign& design = hand.fingers[finger];
  const FingerFrame frame = finger_frame(hand, finger);
  const auto chain = planar_chain(design, frame.base_tilt, state);
  const double cap = 0.5 * design.thickness;
  // Palm disc cut by the plane: a chord at y = 0.
  const double axis_x = 0.5 * hand.palm_diameter;  // palm axis, in-plane
  const double off = hand.lateral_offset;
  const double half_chord =
      std::sqrt(std::max(0.25 * hand.palm_diameter * hand.palm_diameter - off * off, 0.0));
  const Eigen::Vector2d palm_a(axis_x - half_chord, 0.0);
  const Eigen::Vector2d palm_b(axis_x + half_chord, 0.0);
  const double table_y = -hand.table_clearance;

  constexpr int kDirections = 360;
  constexpr double kStep = 1.0;
  constexpr double kEscapeDistance = 500.0;
  for (int d = 0; d < kDirections; ++d) {
    const double theta = 2.0 * std::numbers::pi * d / kDirections;
    const Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
    bool clear = true;
    for (double t = kStep; t <= kEscapeDistance && clear; t += kStep) {
      const PlanarObject moved = translated(section, t * dir);
      if (object_bottom(moved) < table_y - 1e-9 ||
          object_overlaps(moved, chain[0], chain[1], cap) ||
          object_overlaps(moved, chain[1], chain[2], cap) ||
          object_overlaps(moved, palm_a, palm_b, 0.0)) {
        clear = false;
      }
    }
    if (clear) return true;
  }
  return false;
}

}  // namespace

GraspClass classify_outcome(const std::vector<Contact>& contacts, const HandPose& pose,
                            const std::array<JointState, 4>& final_states,
                            const SolidObject& object, PalmMode mode) {
  if (contacts.empty()) return GraspClass::Miss;
  bool all_tip = true;
  std::set<std::pair<int, int>> links;
  for (const Contact& c : contacts) {
    links.insert({c.finger, c.link});
    if (c.link != 1 || c.link_param < 0.75) all_tip = false;
  }
  if (all_tip) return GraspClass::FingertipPinch;
  if (contacts.size() >= 3 && links.size() >= 2) {
    bool caged = mode != PalmMode::Precision;
    for (int f = 0; f < 4 && caged; ++f) {
      const auto section = planar_section(object, finger_frame(pose.hand, f));
      if (!section) continue;
      if (plane_has_escape(pose.hand, f, final_states[f], *section)) caged = false;
    }
    return caged ? GraspClass::Caged : GraspClass::Enveloping;
  }
  // Too few contact sites to restrain the object: a grazing touch.
  return GraspClass::Miss;
}

namespace {

GraspOutcome close_power_grasp(const HandPose& start, const SolidObject& object, PalmMode mode,
                               double step) {
  HandPose pose = start;
  pose.hand = sweep_palm(start.hand, mode == PalmMode::Spherical ? 0.0 : start.hand.phi_max);
  validate(pose.hand);

  std::array<FingerFrame, 4> frames;
  std::array<std::optional<PlanarObject>, 4> sections;
  std::array<FingerClosureState, 4> fingers;
  for (int f = 0; f < 4; ++f) {
    frames[f] = finger_frame(pose.hand, f);
    sections[f] = planar_section(object, frames[f]);
    const FingerDesign& design = pose.hand.fingers[f];
    fingers[f].state = pose.joints[f];
    const auto [total_min, total_max] = tendon_length_range(design);
    fingers[f].retracted = total_max - total_tendon_length(design, pose.joints[f]);
    if (finger_clearance(design, frames[f].base_tilt, fingers[f].state, sections[f]) <
        -kFeasTol) {
      throw std::domain_error("close_grasp: object initially penetrates the hand");
    }
  }

  GraspOutcome outcome;
  outcome.circuit = HydraulicCircuit{};
  outcome.object_center = std::visit([](const auto& o) { return o.center; }, object);
  const MuscleDesign& md = outcome.circuit.design;

  auto pair_active = [&](int m) {
    for (int f : pose.hand.muscle_pairing[m]) {
      if (fingers[f].blocked || fingers[f].exhausted) return false;
    }
    return true;
  };

  while (outcome.steps < kMaxSteps) {
    std::array<double, 2> loads{};
    double dv = 0.0;
    bool any_active = false;
    for (int m = 0; m < 2; ++m) {
      if (!pair_active(m)) {
        loads[m] = kBlockedLoad;
        continue;
      }
      any_active = true;
      double load = 0.0;
      for (int f : pose.hand.muscle_pairing[m]) {
        load = std::max(load, path_tension(pose.hand.fingers[f], frames[f].base_tilt,
                                           sections[f], fingers[f]));
      }
      loads[m] = load;
      const double ratio = outcome.circuit.muscles[m].contraction_ratio(md);
      const double next_ratio =
          std::min(ratio + step / md.length, md.max_contraction_ratio);
      dv += muscle_volume(md, next_ratio) - muscle_volume(md, ratio);
    }
    if (!any_active || dv <= 0.0) break;

    HydraulicCircuit next_circuit;
    try {
      next_circuit = distribute_volume(outcome.circuit, loads, dv);
    } catch (const OverpressureError&) {
      break;
    }
    for (int m = 0; m < 2; ++m) {
      const double dr =
          next_circuit.muscles[m].contraction - outcome.circuit.muscles[m].contraction;
      if (dr <= 1e-15) continue;
      for (int f : pose.hand.muscle_pairing[m]) {
        fingers[f] = advance_finger(pose.hand.fingers[f], frames[f].base_tilt, sections[f],
                                    fingers[f], dr);
      }
    }
    for (int m = 0; m < 2; ++m) {
      if (!pair_active(m)) next_circuit.muscles[m].blocked = true;
    }
    outcome.circuit = next_circuit;
    ++outcome.steps;
    bool all_done = true;
    for (const auto& f : fingers) all_done = all_done && (f.blocked || f.exhausted);
    if (all_done) break;
  }
  if (outcome.steps >= kMaxSteps) {
    throw SimulationError("close_grasp: no convergence after max steps");
  }

  for (int f = 0; f < 4; ++f) {
    outcome.final_states[f] = fingers[f].state;
    outcome.final_tendon_length[f] =
        total_tendon_length(pose.hand.fingers[f], fingers[f].state);
    collect_contacts(f, pose.hand.fingers[f], frames[f].base_tilt, fingers[f].state,
                     sections[f], &outcome.contacts);
  }
  pose.joints = outcome.final_states;
  outcome.classification =
      classify_outcome(outcome.contacts, pose, outcome.final_states, object, mode);
  return outcome;
}

// Locked two-finger pinch in the shared A/B plane (projected to the palm
// axis plane; the paired fingers straddle it symmetrically). Distal joints
// stay pinned; the slab slides horizontally when one side reaches it first.
GraspOutcome close_precision_grasp(const HandPose& start, const SolidObject& object,
                                   double step) {
  HandPose pose = start;
  pose.hand = sweep_palm(start.hand, start.hand.phi_max);
  pose.hand.lock_state = LockState::Locked;
  validate(pose.hand);

  const FlatSlab* slab = std::get_if<FlatSlab>(&object);
  if (!slab) {
    throw std::domain_error("precision closure expects a flat slab object");
  }
  const int sides[2] = {kALeft, kARight};
  const double side_sign[2] = {1.0, -1.0};  // inward x direction per side

  std::array<double, 2> base_x{};
  std::array<double, 2> tilt{};
  std::array<double, 2> q2_lock{};
  std::array<FingerClosureState, 2> state{};
  for (int s = 0; s < 2; ++s) {
    const int f = sides[s];
    const FingerFrame frame = finger_frame(pose.hand, f);
    base_x[s] = frame.base.x();
    tilt[s] = frame.base_tilt;
    q2_lock[s] = project_locked_distal(pose.hand, pose.joints[f].q2, pose.joints[f].q2);
    state[s].state = {pose.joints[f].q1, q2_lock[s]};
    const auto [total_min, total_max] = tendon_length_range(pose.hand.fingers[f]);
    state[s].retracted =
        total_max - total_tendon_length(pose.hand.fingers[f], state[s].state);
  }

  // Object in the palm-axis plane: x horizontal, y along the palm axis.
  double slab_x = slab->center.x();
  const double slab_y = slab->center.z();
  auto slab_section = [&](double x) {
    ConvexPolygon poly;
    const double hw = 0.5 * slab->width;
    const double hh = 0.5 * slab->height;
    poly.vertices = {Eigen::Vector2d(x - hw, slab_y - hh), Eigen::Vector2d(x + hw, slab_y - hh),
                     Eigen::Vector2d(x + hw, slab_y + hh), Eigen::Vector2d(x - hw, slab_y + hh)};
    return poly;
  };
  auto world_chain = [&](int s) {
    const int f = sides[s];
    auto local = planar_chain(pose.hand.fingers[f], tilt[s], state[s].state);
    for (auto& p : local) p.x() = base_x[s] + side_sign[s] * p.x();
    return local;
  };
  auto side_clearance = [&](int s, double x) {
    const auto chain = world_chain(s);
    const PlanarObject section{slab_section(x)};
    const double cap = 0.5 * pose.hand.fingers[sides[s]].thickness;
    return std::min(capsule_clearance(chain[0], chain[1], cap, section),
                    capsule_clearance(chain[1], chain[2], cap, section));
  };

  GraspOutcome outcome;
  outcome.circuit = HydraulicCircuit{};
  const MuscleDesign& md = outcome.circuit.design;
  bool pinched = false;

  while (outcome.steps < kMaxSteps && !pinched) {
    // Both A fingers hang off one muscle: equal retraction by construction.
    bool moved = false;
    for (int s = 0; s < 2; ++s) {
      const int f = sides[s];
      const FingerDesign& design = pose.hand.fingers[f];
      if (state[s].exhausted || state[s].state.q1 >= design.joint_limits[0].hi - 1e-12) {
        continue;
      }
      const double retracted = state[s].retracted + step;
      const auto [total_min, total_max] = tendon_length_range(design);
      if (retracted >= total_max - total_min) {
        state[s].exhausted = true;
        continue;
      }
      const ContourCurve arc = contour_curve(design, total_max - retracted);
      state[s].state = contour_state(design, arc, q2_lock[s]);
      state[s].retracted = retracted;
      moved = true;
    }
    if (!moved) break;

    // Resolve penetration by sliding the slab away from every violating
    // side; if no horizontal position clears both, the slab is pinched.
    for (int attempt = 0; attempt < 4; ++attempt) {
      int violator = -1;
      for (int s = 0; s < 2; ++s) {
        if (side_clearance(s, slab_x) < -kFeasTol) violator = s;
      }
      if (violator < 0) break;
      const double push = side_sign[violator];
      double lo = 0.0;
      double hi = 0.0;
      bool cleared = false;
      // A tendon step gears up to millimetres of tip motion, so probe the
      // slide distance on its own scale.
      for (double probe = 0.25; probe <= 30.0 + 1e-12; probe += 0.25) {
        if (side_clearance(violator, slab_x + push * probe) >= -kFeasTol) {
          hi = probe;
          cleared = true;
          break;
        }
        lo = probe;
      }
      if (!cleared) {
        pinched = true;
        break;
      }
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (side_clearance(violator, slab_x + push * mid) >= -kFeasTol)
          hi = mid;
        else
          lo = mid;
      }
      slab_x += push * hi;
      const int other = 1 - violator;
      if (side_clearance(other, slab_x) < -kFeasTol) {
        pinched = true;  // pushing one side in violates the other: held
      }
    }
    ++outcome.steps;
  }

  if (pinched) {
    // Settle the held slab where both sides press equally: maximize the
    // smaller of the two clearances over the slide axis.
    auto min_clearance = [&](double x) {
      return std::min(side_clearance(0, x), side_clearance(1, x));
    };
    double lo = slab_x - 10.0;
    double hi = slab_x + 10.0;
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = min_clearance(x1);
    double f2 = min_clearance(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = min_clearance(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = min_clearance(x2);
      }
    }
    slab_x = 0.5 * (lo + hi);
  }

  const PlanarObject section{slab_section(slab_x)};
  for (int s = 0; s < 2; ++s) {
    const int f = sides[s];
    outcome.final_states[f] = state[s].state;
    outcome.final_tendon_length[f] =
        total_tendon_length(pose.hand.fingers[f], state[s].state);
    // The paired B finger mirrors its A partner under the lock.
    const int partner = (f == kALeft) ? kBLeft : kBRight;
    outcome.final_states[partner] = pose.joints[partner];
    outcome.final_tendon_length[partner] =
        total_tendon_length(pose.hand.fingers[partner], pose.joints[partner]);
    const auto chain = world_chain(s);
    const double cap = 0.5 * pose.hand.fingers[f].thickness;
    for (int link = 0; link < 2; ++link) {
      if (capsule_clearance(chain[link], chain[link + 1], cap, section) > kContactTol + step)
        continue;
      Contact contact;
      contact.finger = f;
      contact.link = link;
      const ConvexPolygon& poly = std::get<ConvexPolygon>(section);
      double best = std::numeric_limits<double>::infinity();
      Eigen::Vector2d on_link;
      Eigen::Vector2d on_obj;
      const std::size_t n = poly.vertices.size();
      for (std::size_t i = 0; i < n; ++i) {
        Eigen::Vector2d p;
        Eigen::Vector2d q;
        double t = 0.0;
        const double dist = seg_seg_closest(chain[link], chain[link + 1], poly.vertices[i],
                                            poly.vertices[(i + 1) % n], &p, &q, &t);
        if (dist < best) {
          best = dist;
          on_link = p;
          on_obj = q;
          contact.link_param = t;
        }
      }
      const Eigen::Vector2d dir =
          (on_obj - on_link).norm() > 1e-12 ? (on_obj - on_link).normalized()
                                            : Eigen::Vector2d(-side_sign[s], 0.0);
      contact.normal = dir;
      contact.point = on_link + cap * dir;
      outcome.contacts.push_back(contact);
    }
  }

  outcome.object_center = Eigen::Vector3d(slab_x, slab->center.y(), slab_y);
  pose.joints = outcome.final_states;
  outcome.classification = classify_outcome(outcome.contacts, pose, outcome.final_states,
                                            object, PalmMode::Precision);
  return outcome;
}

}  // namespace

GraspOutcome close_grasp(const HandPose& pose, const SolidObject& object, PalmMode mode,
                         double step) {
  if (step <= 0.0) throw std::domain_error("close_grasp: step must be positive");
  if (mode == PalmMode::Precision) return close_precision_grasp(pose, object, step);
  return close_power_grasp(pose, object, mode, step);
}

}  // namespace grip
