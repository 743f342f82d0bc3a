#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gripkit/benchmark.hpp"
#include "gripkit/grasp.hpp"
#include "gripkit/types.hpp"

namespace grip {

// Shortest decimal form that round-trips to the same double. Keeps golden
// files diffable and reruns byte-identical.
std::string format_double(double value);

std::string read_file(const std::filesystem::path& path);

// Write to a sibling temp file, then rename over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Hand configs serialize field-for-field; "default" is accepted wherever a
// path is, and maps to default_hand(). Parse errors and invariant
// violations surface as ValidationError.
HandConfig hand_from_json(const std::string& text);
std::string hand_to_json(const HandConfig& hand);
HandConfig load_hand(const std::string& path_or_default);

PalmMode parse_mode(const std::string& name);
std::string mode_name(PalmMode mode);

struct GraspScenario {
  HandConfig hand;
  SolidObject object;
  PalmMode mode = PalmMode::Spherical;
  double step = 0.1;
};

// Scenario JSON: {"hand": "default"|path, "object": {...}, "mode": ...,
// "step": ...}. An object without an explicit center rests on the table
// under the palm axis, shifted by the optional "offset" [dx, dy, dz].
GraspScenario scenario_from_json(const std::string& text,
                                 const std::filesystem::path& base_dir = {});

std::string grasp_outcome_to_json(const GraspOutcome& outcome);

// Line-delimited trial logs; each line carries a "benchmark" tag of
// "ycb", "A", "C" or "D".
struct TrialLog {
  std::vector<YcbTrial> ycb;
  std::vector<SoftTrial> soft_a;
  std::vector<SoftTrial> soft_c;
  std::vector<SoftTrial> soft_d;
};
TrialLog trials_from_jsonl(const std::string& text);

std::string score_trials_to_json(const TrialLog& log, const YcbWeightTable& weights);

}  // namespace grip
