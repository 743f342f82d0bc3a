#include "gripkit/benchmark.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace grip {

double YcbWeightTable::max_score() const {
  double total = 0.0;
  for (const auto& obj : objects) {
    if (obj.articulated) {
      total += obj.attempts * articulated_attempt_weight;
    } else {
      total += obj.positions * 4 * cell_weight;
    }
  }
  return total;
}

const YcbWeightTable::ObjectSpec* YcbWeightTable::find(const std::string& id) const {
  for (const auto& obj : objects) {
    if (obj.id == id) return &obj;
  }
  return nullptr;
}

YcbWeightTable default_ycb_weights() {
  YcbWeightTable table;
  // 18 rigid objects in all four placements.
  for (const char* id :
       {"cracker_box", "sugar_box", "tomato_soup_can", "mustard_bottle", "pudding_box",
        "potted_meat_can", "banana", "apple", "peach", "pear", "orange", "pitcher",
        "bleach_cleanser", "bowl", "mug", "plate", "power_drill", "sponge"}) {
    table.objects.push_back({id, false, 4, 0});
  }
  // 8 small rigid objects scored in three placements.
  for (const char* id : {"tuna_fish_can", "gelatin_box", "lemon", "plum", "golf_ball", "fork",
                         "spoon", "spatula"}) {
    table.objects.push_back({id, false, 3, 0});
  }
  for (const char* id : {"scissors", "clamp"}) {
    table.objects.push_back({id, true, 0, 20});
  }
  return table;
}

YcbWeightTable parse_ycb_weights(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  YcbWeightTable table;
  table.cell_weight = j.at("cell_weight").get<double>();
  table.articulated_attempt_weight = j.at("articulated_attempt_weight").get<double>();
  for (const auto& obj : j.at("objects")) {
    YcbWeightTable::ObjectSpec spec;
    spec.id = obj.at("id").get<std::string>();
    spec.articulated = obj.value("articulated", false);
    if (spec.articulated) {
      spec.positions = 0;
      spec.attempts = obj.at("attempts").get<int>();
    } else {
      spec.positions = obj.at("positions").get<int>();
      spec.attempts = 0;
    }
    table.objects.push_back(std::move(spec));
  }
  return table;
}

namespace {

int mode_index(PalmMode mode) { return static_cast<int>(mode); }

}  // namespace

ScoreReport score_ycb(const std::vector<YcbTrial>& trials, const YcbWeightTable& weights) {
  ScoreReport report;
  report.max_score = weights.max_score();
  std::set<std::tuple<std::string, int, int>> seen;
  for (const YcbTrial& trial : trials) {
    const YcbWeightTable::ObjectSpec* spec = weights.find(trial.object_id);
    if (!spec) throw ValidationError("unknown object id: " + trial.object_id);
    const int pos = spec->articulated ? 0 : static_cast<int>(trial.position);
    if (!spec->articulated && pos >= spec->positions) {
      throw ValidationError("object " + trial.object_id + " is not scored at this placement");
    }
    if (!seen.insert({trial.object_id, mode_index(trial.mode), pos}).second) {
      throw ValidationError("duplicate trial for " + trial.object_id);
    }
    double score = 0.0;
    if (spec->articulated) {
      if (static_cast<int>(trial.cells.size()) != spec->attempts) {
        throw ValidationError("articulated trial for " + trial.object_id + " needs " +
                              std::to_string(spec->attempts) + " attempt entries");
      }
      for (bool ok : trial.cells) {
        if (ok) score += weights.articulated_attempt_weight;
      }
    } else {
      if (trial.cells.size() != 4) {
        throw ValidationError("rigid trial for " + trial.object_id + " needs 4 cells");
      }
      for (std::size_t i = 1; i < 4; ++i) {
        if (trial.cells[i] && !trial.cells[i - 1]) {
          throw ValidationError("protocol cells are sequential; trial for " + trial.object_id +
                                " marks a later cell after a failure");
        }
      }
      for (bool ok : trial.cells) {
        if (ok) score += weights.cell_weight;
      }
    }
    report.per_object[trial.object_id][mode_index(trial.mode)] += score;
  }
  for (const auto& [id, per_mode] : report.per_object) {
    for (int m = 0; m < 3; ++m) report.mode_totals[m] += per_mode[m];
    report.combined += *std::max_element(per_mode.begin(), per_mode.end());
  }
  return report;
}

std::string format_score_report(const ScoreReport& report) {
  std::ostringstream out;
  out << "| object | precision | cylindrical | spherical | best |\n";
  out << "|---|---|---|---|---|\n";
  for (const auto& [id, per_mode] : report.per_object) {
    out << "| " << id;
    for (int m = 0; m < 3; ++m) out << " | " << per_mode[m];
    out << " | " << *std::max_element(per_mode.begin(), per_mode.end()) << " |\n";
  }
  out << "| total";
  for (int m = 0; m < 3; ++m) out << " | " << report.mode_totals[m];
  out << " | " << report.combined << " |\n";
  return out.str();
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

namespace {

void require_benchmark(const SoftTrial& trial, SoftBenchmark expected, const char* name) {
  if (trial.benchmark != expected) {
    throw ValidationError(std::string("trial for garment ") + trial.garment_id +
                          " does not belong to benchmark " + name);
  }
}

}  // namespace

std::map<EdgeType, SoftAEdgeReport> score_soft_A(const std::vector<SoftTrial>& trials) {
  std::map<EdgeType, SoftAEdgeReport> report;
  std::map<EdgeType, std::vector<double>> errors;
  std::map<EdgeType, int> successes;
  for (const SoftTrial& trial : trials) {
    require_benchmark(trial, SoftBenchmark::A, "A");
    if (trial.success != trial.placement_error.has_value()) {
      throw ValidationError("placement_error must be present exactly on success");
    }
    SoftAEdgeReport& r = report[trial.edge_type];
    r.attempts += 1;
    if (trial.success) {
      successes[trial.edge_type] += 1;
      errors[trial.edge_type].push_back(*trial.placement_error);
    }
  }
  for (auto& [edge, r] : report) {
    r.success_rate = static_cast<double>(successes[edge]) / r.attempts;
    if (!errors[edge].empty()) r.median_error = lower_median(errors[edge]);
  }
  return report;
}

std::map<std::string, SoftCReport> score_soft_C(const std::vector<SoftTrial>& trials) {
  std::map<std::string, SoftCReport> report;
  std::map<std::string, std::vector<double>> lifts;
  std::map<std::string, int> successes;
  for (const SoftTrial& trial : trials) {
    require_benchmark(trial, SoftBenchmark::C, "C");
    if (trial.success != trial.lift_height.has_value()) {
      throw ValidationError("lift_height must be present exactly on success");
    }
    SoftCReport& r = report[trial.garment_id];
    r.attempts += 1;
    if (trial.success) {
      successes[trial.garment_id] += 1;
      lifts[trial.garment_id].push_back(*trial.lift_height);
    }
  }
  for (auto& [garment, r] : report) {
    r.success_rate = static_cast<double>(successes[garment]) / r.attempts;
    if (!lifts[garment].empty()) r.median_lift = lower_median(lifts[garment]);
  }
  return report;
}

std::map<std::string, double> score_soft_D(const std::vector<SoftTrial>& trials) {
  std::map<std::string, std::pair<int, int>> counts;  // successes, attempts
  for (const SoftTrial& trial : trials) {
    require_benchmark(trial, SoftBenchmark::D, "D");
    auto& [ok, total] = counts[trial.garment_id];
    total += 1;
    if (trial.success) ok += 1;
  }
  std::map<std::string, double> report;
  for (const auto& [garment, c] : counts) {
    report[garment] = static_cast<double>(c.first) / c.second;
  }
  return report;
}

}  // namespace grip
