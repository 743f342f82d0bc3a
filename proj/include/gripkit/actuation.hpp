#pragma once

#include <array>
#include <limits>

#include "gripkit/types.hpp"

namespace grip {

// Hydraulic actuation chain: one pump feeds two braided McKibben muscles
// on a shared supply line, each muscle retracting the tendons of one
// finger pair. Water is treated as incompressible, so pumped volume maps
// directly to muscle volume change.

class OverpressureError : public std::runtime_error {
 public:
  explicit OverpressureError(const std::string& what) : std::runtime_error(what) {}
};

struct MuscleDesign {
  double initial_braid_angle = 0.3490658503988659;  // rad (20 deg)
  double nominal_area = 100.0;                      // mm^2
  double length = 100.0;                            // mm
  double max_contraction_ratio = 0.25;
};

// Ideal braided-muscle law: F = P A0 (a (1-eps)^2 - b) with a = 3/tan^2(t0)
// and b = 1/sin^2(t0), clamped at zero. Pressure in kPa, force in N.
double muscle_force(const MuscleDesign& design, double pressure_kpa, double contraction_ratio);

// Contraction ratio at which the force law reaches zero at any pressure.
double lockup_ratio(const MuscleDesign& design);

// Internal volume (mL) of the braided shell at a contraction ratio,
// constant-fibre-length cylinder model. Strictly increasing in contraction.
double muscle_volume(const MuscleDesign& design, double contraction_ratio);

struct MuscleState {
  double contraction = 0.0;  // mm
  bool blocked = false;

  double contraction_ratio(const MuscleDesign& design) const {
    return contraction / design.length;
  }
};

struct HydraulicCircuit {
  MuscleDesign design;
  std::array<MuscleState, 2> muscles{};
  double pumped_volume = 0.0;    // mL
  double shared_pressure = 0.0;  // kPa
};

constexpr double kBlockedLoad = std::numeric_limits<double>::infinity();

// Quasi-static balance: raises the shared pressure until the injected
// volume is absorbed. Each free muscle contracts to where its force
// capacity meets its external load; a blocked muscle (or infinite load)
// absorbs nothing. Volume conservation is exact: pumped_volume increases
// by the volume actually absorbed. Throws OverpressureError when dV > 0
// and no muscle can absorb it.
HydraulicCircuit distribute_volume(const HydraulicCircuit& circuit,
                                   const std::array<double, 2>& loads, double dv);

}  // namespace grip
