#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gripkit/hand_geometry.hpp"
#include "gripkit/types.hpp"

namespace grip {

// Scoring rules for the rigid-object gripper assessment protocol and the
// soft-object benchmarks A (edge drag), C (lift) and D (flat-region
// grasp). Trials are ingested from logs; nothing here simulates.

enum class YcbPosition { Origin, Dx, Dy, Dz };

struct YcbTrial {
  std::string object_id;
  PalmMode mode = PalmMode::Precision;
  YcbPosition position = YcbPosition::Origin;  // ignored for articulated objects
  // Rigid objects: 4 sequential protocol cells (grasp-vertical, static-3s,
  // held-rotated, static-rotated). Articulated objects: one bool per attempt.
  std::vector<bool> cells;
};

// The per-cell / per-attempt point schedule. Stored as data so alternate
// protocol revisions can be loaded from `ycb_weights.json`.
struct YcbWeightTable {
  struct ObjectSpec {
    std::string id;
    bool articulated = false;
    int positions = 4;   // rigid: number of scored placements
    int attempts = 20;   // articulated: attempts per mode
  };
  double cell_weight = 1.0;
  double articulated_attempt_weight = 0.5;
  std::vector<ObjectSpec> objects;

  double max_score() const;
  const ObjectSpec* find(const std::string& id) const;
};

// Built-in schedule: 18 rigid objects scored in 4 placements plus 8 in 3
// (96 placements, 4 cells each) and 2 articulated objects at 20 half-point
// attempts, for a 404-point maximum over 136 attempts per mode.
YcbWeightTable default_ycb_weights();

YcbWeightTable parse_ycb_weights(const std::string& json_text);

struct ScoreReport {
  // Indexed by PalmMode order {Precision, Cylindrical, Spherical}.
  std::array<double, 3> mode_totals{};
  double combined = 0.0;  // per object, best mode wins
  double max_score = 0.0;
  std::map<std::string, std::array<double, 3>> per_object;
};

// Throws ValidationError on unknown objects, duplicate (object, mode,
// position) trials, wrong cell counts, or a later protocol cell marked
// successful after an earlier failure.
ScoreReport score_ycb(const std::vector<YcbTrial>& trials, const YcbWeightTable& weights);

// Markdown table of the report: objects as rows, modes as columns, cells
// rendered as pass/fail characters.
std::string format_score_report(const ScoreReport& report);

enum class SoftBenchmark { A, C, D };
enum class EdgeType { Single, Double, Folded };

struct SoftTrial {
  SoftBenchmark benchmark = SoftBenchmark::A;
  std::string garment_id;
  EdgeType edge_type = EdgeType::Single;         // benchmark A only
  bool success = false;
  std::optional<double> placement_error;  // mm, A, present iff success
  std::optional<double> lift_height;      // mm, C, present iff success
};

// Lower median: for an even count the smaller of the two middle values.
// The deterministic convention used throughout the soft-benchmark reports.
double lower_median(std::vector<double> values);

struct SoftAEdgeReport {
  int attempts = 0;
  double success_rate = 0.0;
  std::optional<double> median_error;  // over successes only
};

struct SoftCReport {
  int attempts = 0;
  double success_rate = 0.0;
  std::optional<double> median_lift;  // over successful lifts only
};

std::map<EdgeType, SoftAEdgeReport> score_soft_A(const std::vector<SoftTrial>& trials);
std::map<std::string, SoftCReport> score_soft_C(const std::vector<SoftTrial>& trials);
std::map<std::string, double> score_soft_D(const std::vector<SoftTrial>& trials);

}  // namespace grip
