#include "gripkit/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace grip {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

namespace {

ordered_json finger_to_json(const FingerDesign& f) {
  ordered_json j;
  j["type"] = f.type == FingerType::A ? "A" : "B";
  j["proximal_length"] = f.proximal_length;
  j["distal_length"] = f.distal_length;
  j["width"] = f.width;
  j["thickness"] = f.thickness;
  j["tendon_offsets"] = {{f.tendon_offsets[0][0], f.tendon_offsets[0][1]},
                         {f.tendon_offsets[1][0], f.tendon_offsets[1][1]}};
  j["tendon_offset_angle"] = {f.tendon_offset_angle[0], f.tendon_offset_angle[1]};
  j["elastic_offset"] = {f.elastic_offset[0], f.elastic_offset[1]};
  j["elastic_rest_angle"] = {f.elastic_rest_angle[0], f.elastic_rest_angle[1]};
  j["spring_constant"] = f.spring_constant;
  j["joint_limits"] = {{f.joint_limits[0].lo, f.joint_limits[0].hi},
                       {f.joint_limits[1].lo, f.joint_limits[1].hi}};
  return j;
}

FingerDesign finger_from_json(const ordered_json& j) {
  FingerDesign f;
  const std::string type = j.at("type").get<std::string>();
  if (type != "A" && type != "B") throw ValidationError("finger type must be A or B");
  f.type = type == "A" ? FingerType::A : FingerType::B;
  f.proximal_length = j.at("proximal_length").get<double>();
  f.distal_length = j.at("distal_length").get<double>();
  f.width = j.at("width").get<double>();
  f.thickness = j.at("thickness").get<double>();
  for (int joint = 0; joint < 2; ++joint) {
    for (int side = 0; side < 2; ++side) {
      f.tendon_offsets[joint][side] = j.at("tendon_offsets").at(joint).at(side).get<double>();
    }
    f.tendon_offset_angle[joint] = j.at("tendon_offset_angle").at(joint).get<double>();
    f.elastic_offset[joint] = j.at("elastic_offset").at(joint).get<double>();
    f.elastic_rest_angle[joint] = j.at("elastic_rest_angle").at(joint).get<double>();
    f.joint_limits[joint].lo = j.at("joint_limits").at(joint).at(0).get<double>();
    f.joint_limits[joint].hi = j.at("joint_limits").at(joint).at(1).get<double>();
  }
  f.spring_constant = j.at("spring_constant").get<double>();
  return f;
}

}  // namespace

std::string hand_to_json(const HandConfig& hand) {
  ordered_json j;
  j["palm_diameter"] = hand.palm_diameter;
  j["finger_rest_splay"] = hand.finger_rest_splay;
  j["palm_rotation"] = hand.palm_rotation;
  j["phi_max"] = hand.phi_max;
  j["lateral_offset"] = hand.lateral_offset;
  j["table_clearance"] = hand.table_clearance;
  j["lock_state"] = hand.lock_state == LockState::Locked ? "locked" : "unlocked";
  j["lock_compliance"] = hand.lock_compliance;
  j["muscle_pairing"] = {{hand.muscle_pairing[0][0], hand.muscle_pairing[0][1]},
                         {hand.muscle_pairing[1][0], hand.muscle_pairing[1][1]}};
  j["fingers"] = ordered_json::array();
  for (const FingerDesign& f : hand.fingers) j["fingers"].push_back(finger_to_json(f));
  return j.dump(2) + "\n";
}

HandConfig hand_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("hand config is not valid JSON: ") + e.what());
  }
  HandConfig hand;
  try {
    hand.palm_diameter = j.at("palm_diameter").get<double>();
    hand.finger_rest_splay = j.at("finger_rest_splay").get<double>();
    hand.palm_rotation = j.at("palm_rotation").get<double>();
    hand.phi_max = j.at("phi_max").get<double>();
    hand.lateral_offset = j.at("lateral_offset").get<double>();
    hand.table_clearance = j.at("table_clearance").get<double>();
    const std::string lock = j.at("lock_state").get<std::string>();
    if (lock != "locked" && lock != "unlocked") {
      throw ValidationError("lock_state must be locked or unlocked");
    }
    hand.lock_state = lock == "locked" ? LockState::Locked : LockState::Unlocked;
    hand.lock_compliance = j.at("lock_compliance").get<double>();
    for (int m = 0; m < 2; ++m) {
      for (int s = 0; s < 2; ++s) {
        hand.muscle_pairing[m][s] = j.at("muscle_pairing").at(m).at(s).get<int>();
      }
    }
    const auto& fingers = j.at("fingers");
    if (fingers.size() != 4) throw ValidationError("hand config needs exactly 4 fingers");
    for (int f = 0; f < 4; ++f) hand.fingers[f] = finger_from_json(fingers.at(f));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("hand config is missing fields: ") + e.what());
  }
  validate(hand);
  return hand;
}

HandConfig load_hand(const std::string& path_or_default) {
  if (path_or_default == "default") return default_hand();
  return hand_from_json(read_file(path_or_default));
}

PalmMode parse_mode(const std::string& name) {
  if (name == "precision") return PalmMode::Precision;
  if (name == "cylindrical") return PalmMode::Cylindrical;
  if (name == "spherical") return PalmMode::Spherical;
  throw ValidationError("unknown mode: " + name);
}

std::string mode_name(PalmMode mode) {
  switch (mode) {
    case PalmMode::Precision:
      return "precision";
    case PalmMode::Cylindrical:
      return "cylindrical";
    default:
      return "spherical";
  }
}

GraspScenario scenario_from_json(const std::string& text,
                                 const std::filesystem::path& base_dir) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
  }
  GraspScenario scenario;
  try {
    const std::string hand = j.value("hand", std::string("default"));
    scenario.hand = hand == "default"
                        ? default_hand()
                        : hand_from_json(read_file(base_dir / hand));
    scenario.mode = parse_mode(j.at("mode").get<std::string>());
    scenario.step = j.value("step", 0.1);

    const auto& obj = j.at("object");
    const std::string type = obj.at("type").get<std::string>();
    Eigen::Vector3d offset = Eigen::Vector3d::Zero();
    if (obj.contains("offset")) {
      for (int i = 0; i < 3; ++i) offset[i] = obj.at("offset").at(i).get<double>();
    }
    auto center_or_resting = [&](double half_height) {
      if (obj.contains("center")) {
        Eigen::Vector3d c;
        for (int i = 0; i < 3; ++i) c[i] = obj.at("center").at(i).get<double>();
        return Eigen::Vector3d(c + offset);
      }
      // Rest on the table under the palm axis.
      return Eigen::Vector3d(offset +
                             Eigen::Vector3d(0, 0, -scenario.hand.table_clearance + half_height));
    };
    if (type == "sphere") {
      const double r = 0.5 * obj.at("diameter").get<double>();
      scenario.object = Sphere{center_or_resting(r), r};
    } else if (type == "cylinder") {
      const double r = 0.5 * obj.at("diameter").get<double>();
      const double h = obj.at("height").get<double>();
      scenario.object = VerticalCylinder{center_or_resting(0.5 * h), r, h};
    } else if (type == "slab") {
      const double w = obj.at("width").get<double>();
      const double h = obj.at("height").get<double>();
      scenario.object = FlatSlab{center_or_resting(0.5 * h), w, h};
    } else {
      throw ValidationError("unknown object type: " + type);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("scenario is missing fields: ") + e.what());
  }
  return scenario;
}

std::string grasp_outcome_to_json(const GraspOutcome& outcome) {
  ordered_json j;
  switch (outcome.classification) {
    case GraspClass::Miss:
      j["classification"] = "Miss";
      break;
    case GraspClass::FingertipPinch:
      j["classification"] = "FingertipPinch";
      break;
    case GraspClass::Enveloping:
      j["classification"] = "Enveloping";
      break;
    case GraspClass::Caged:
      j["classification"] = "Caged";
      break;
  }
  j["contacts"] = ordered_json::array();
  for (const Contact& c : outcome.contacts) {
    ordered_json jc;
    jc["finger"] = c.finger;
    jc["link"] = c.link;
    jc["link_param"] = c.link_param;
    jc["point"] = {c.point.x(), c.point.y()};
    jc["normal"] = {c.normal.x(), c.normal.y()};
    j["contacts"].push_back(jc);
  }
  j["final_states"] = ordered_json::array();
  for (const JointState& s : outcome.final_states) {
    j["final_states"].push_back({s.q1, s.q2});
  }
  j["final_tendon_length"] = {outcome.final_tendon_length[0], outcome.final_tendon_length[1],
                              outcome.final_tendon_length[2], outcome.final_tendon_length[3]};
  j["object_center"] = {outcome.object_center.x(), outcome.object_center.y(),
                        outcome.object_center.z()};
  j["pumped_volume"] = outcome.circuit.pumped_volume;
  j["shared_pressure"] = outcome.circuit.shared_pressure;
  j["steps"] = outcome.steps;
  return j.dump(2) + "\n";
}

namespace {

YcbPosition parse_position(const std::string& name) {
  if (name == "O") return YcbPosition::Origin;
  if (name == "dx") return YcbPosition::Dx;
  if (name == "dy") return YcbPosition::Dy;
  if (name == "dz") return YcbPosition::Dz;
  throw ValidationError("unknown placement: " + name);
}

EdgeType parse_edge(const std::string& name) {
  if (name == "single") return EdgeType::Single;
  if (name == "double") return EdgeType::Double;
  if (name == "folded") return EdgeType::Folded;
  throw ValidationError("unknown edge type: " + name);
}

}  // namespace

TrialLog trials_from_jsonl(const std::string& text) {
  TrialLog log;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
      const std::string bench = j.at("benchmark").get<std::string>();
      if (bench == "ycb") {
        YcbTrial trial;
        trial.object_id = j.at("object").get<std::string>();
        trial.mode = parse_mode(j.at("mode").get<std::string>());
        if (j.contains("position")) {
          trial.position = parse_position(j.at("position").get<std::string>());
        }
        for (const auto& cell : j.at("cells")) trial.cells.push_back(cell.get<bool>());
        log.ycb.push_back(std::move(trial));
      } else if (bench == "A" || bench == "C" || bench == "D") {
        SoftTrial trial;
        trial.benchmark = bench == "A"   ? SoftBenchmark::A
                          : bench == "C" ? SoftBenchmark::C
                                         : SoftBenchmark::D;
        trial.garment_id = j.at("garment").get<std::string>();
        trial.success = j.at("success").get<bool>();
        if (bench == "A") {
          trial.edge_type = parse_edge(j.at("edge").get<std::string>());
          if (j.contains("placement_error")) {
            trial.placement_error = j.at("placement_error").get<double>();
          }
          log.soft_a.push_back(std::move(trial));
        } else if (bench == "C") {
          if (j.contains("lift_height")) {
            trial.lift_height = j.at("lift_height").get<double>();
          }
          log.soft_c.push_back(std::move(trial));
        } else {
          log.soft_d.push_back(std::move(trial));
        }
      } else {
        throw ValidationError("unknown benchmark tag: " + bench);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("trial log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return log;
}

std::string score_trials_to_json(const TrialLog& log, const YcbWeightTable& weights) {
  ordered_json j;
  if (!log.ycb.empty()) {
    const ScoreReport report = score_ycb(log.ycb, weights);
    ordered_json jy;
    jy["mode_totals"] = {report.mode_totals[0], report.mode_totals[1], report.mode_totals[2]};
    jy["combined"] = report.combined;
    jy["max_score"] = report.max_score;
    ordered_json per_object;
    for (const auto& [id, scores] : report.per_object) {
      per_object[id] = {scores[0], scores[1], scores[2]};
    }
    jy["per_object"] = per_object;
    j["ycb"] = jy;
  }
  if (!log.soft_a.empty()) {
    ordered_json ja;
    for (const auto& [edge, r] : score_soft_A(log.soft_a)) {
      const char* name = edge == EdgeType::Single   ? "single"
                         : edge == EdgeType::Double ? "double"
                                                    : "folded";
      ja[name]["attempts"] = r.attempts;
      ja[name]["success_rate"] = r.success_rate;
      if (r.median_error) ja[name]["median_error"] = *r.median_error;
    }
    j["soft_A"] = ja;
  }
  if (!log.soft_c.empty()) {
    ordered_json jc;
    for (const auto& [garment, r] : score_soft_C(log.soft_c)) {
      jc[garment]["attempts"] = r.attempts;
      jc[garment]["success_rate"] = r.success_rate;
      if (r.median_lift) jc[garment]["median_lift"] = *r.median_lift;
    }
    j["soft_C"] = jc;
  }
  if (!log.soft_d.empty()) {
    ordered_json jd;
    for (const auto& [garment, rate] : score_soft_D(log.soft_d)) jd[garment] = rate;
    j["soft_D"] = jd;
  }
  return j.dump(2) + "\n";
}

}  // namespace grip
