#include "gripkit/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace grip {

namespace {

constexpr double kPi = std::numbers::pi;

double braid_a(const MuscleDesign& d) {
  const double t = std::tan(d.initial_braid_angle);
  return 3.0 / (t * t);
}

double braid_b(const MuscleDesign& d) {
  const double s = std::sin(d.initial_braid_angle);
  return 1.0 / (s * s);
}

}  // namespace

double muscle_force(const MuscleDesign& design, double pressure_kpa, double contraction_ratio) {
  if (pressure_kpa < 0.0) throw std::domain_error("muscle_force: negative pressure");
  if (contraction_ratio < 0.0 || contraction_ratio >= 1.0)
    throw std::domain_error("muscle_force: contraction ratio outside [0,1)");
  const double s = 1.0 - contraction_ratio;
  // kPa * mm^2 = 1e-3 N
  const double f = pressure_kpa * design.nominal_area * 1e-3 *
                   (braid_a(design) * s * s - braid_b(design));
  return std::max(f, 0.0);
}

double lockup_ratio(const MuscleDesign& design) {
  return 1.0 - std::sqrt(braid_b(design) / braid_a(design));
}

double muscle_volume(const MuscleDesign& design, double contraction_ratio) {
  if (contraction_ratio < 0.0 || contraction_ratio >= 1.0)
    throw std::domain_error("muscle_volume: contraction ratio outside [0,1)");
  const double s = 1.0 - contraction_ratio;
  const double c = std::cos(design.initial_braid_angle);
  const double sn = std::sin(design.initial_braid_angle);
  // Constant fibre length: radius grows as the shell shortens.
  const double r0_sq = design.nominal_area / kPi;
  const double v_mm3 = design.length * s * kPi * r0_sq * (1.0 - s * s * c * c) / (sn * sn);
  return v_mm3 * 1e-3;  // mL
}

namespace {

// Contraction ratio at which the muscle's force capacity meets `load`
// under pressure `p`, clamped to [current, max]. A blocked muscle or an
// infinite load pins the ratio at its current value.
double equilibrium_ratio(const MuscleDesign& d, const MuscleState& m, double p, double load) {
  const double current = m.contraction_ratio(d);
  if (m.blocked || std::isinf(load) || p <= 0.0) return current;
  const double s_sq = (load / (p * d.nominal_area * 1e-3) + braid_b(d)) / braid_a(d);
  const double target = 1.0 - std::sqrt(std::max(s_sq, 0.0));
  return std::clamp(target, current, d.max_contraction_ratio);
}

double invert_volume(const MuscleDesign& d, double lo, double hi, double target_volume) {
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (muscle_volume(d, mid) < target_volume)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

HydraulicCircuit distribute_volume(const HydraulicCircuit& circuit,
                                   const std::array<double, 2>& loads, double dv) {
  if (dv < 0.0) throw std::domain_error("distribute_volume: negative volume step");
  HydraulicCircuit out = circuit;
  if (dv == 0.0) return out;

  const MuscleDesign& d = circuit.design;
  std::array<double, 2> v0{};
  double capacity = 0.0;
  for (int i = 0; i < 2; ++i) {
    const MuscleState& m = circuit.muscles[i];
    v0[i] = muscle_volume(d, m.contraction_ratio(d));
    if (!m.blocked && !std::isinf(loads[i]))
      capacity += muscle_volume(d, d.max_contraction_ratio) - v0[i];
  }
  if (capacity < dv - 1e-12)
    throw OverpressureError("distribute_volume: no muscle can absorb the injected volume");

  auto absorbed = [&](double p) {
    double total = 0.0;
    for (int i = 0; i < 2; ++i)
      total += muscle_volume(d, equilibrium_ratio(d, circuit.muscles[i], p, loads[i])) - v0[i];
    return total;
  };

  // Absorbed volume is nondecreasing in pressure and reaches `capacity`
  // in the limit; bracket upward then bisect.
  double p_hi = std::max(circuit.shared_pressure, 1.0);
  while (absorbed(p_hi) < dv && p_hi < 1e12) p_hi *= 2.0;
  double p_lo = 0.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (p_lo + p_hi);
    if (absorbed(mid) < dv)
      p_lo = mid;
    else
      p_hi = mid;
  }
  const double p = p_hi;

  // At zero load the absorbed volume jumps discontinuously with pressure
  // (the muscle runs straight to its stop), so the converged pressure can
  // overshoot the demand; rescale the per-muscle increments to conserve
  // volume exactly.
  std::array<double, 2> delta{};
  double total = 0.0;
  for (int i = 0; i < 2; ++i) {
    delta[i] = muscle_volume(d, equilibrium_ratio(d, circuit.muscles[i], p, loads[i])) - v0[i];
    total += delta[i];
  }
  const double scale = total > 0.0 ? std::min(dv / total, 1.0) : 0.0;
  for (int i = 0; i < 2; ++i) {
    if (delta[i] <= 0.0) continue;
    const double ratio0 = circuit.muscles[i].contraction_ratio(d);
    const double r =
        invert_volume(d, ratio0, d.max_contraction_ratio, v0[i] + scale * delta[i]);
    out.muscles[i].contraction = r * d.length;
  }
  out.shared_pressure = p;
  out.pumped_volume += dv;
  return out;
}

}  // namespace grip
