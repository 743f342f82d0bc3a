// Command-line front end: emits energy landscapes, tendon contours,
// closing trajectories, mode-group reports, grasp simulations and
// benchmark scores as plot-ready CSV/JSON.

#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gripkit/benchmark.hpp"
#include "gripkit/energy.hpp"
#include "gripkit/grasp.hpp"
#include "gripkit/hand_geometry.hpp"
#include "gripkit/io.hpp"
#include "gripkit/mode_switching.hpp"
#include "gripkit/types.hpp"
#include "json.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitSimulation = 4;

using grip::format_double;
using ordered_json = nlohmann::ordered_json;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    grip::write_file_atomic(out_path, content);
  }
}

ordered_json vec3(const Eigen::Vector3d& v) {
  return ordered_json{v.x(), v.y(), v.z()};
}

ordered_json group_to_json(const grip::MotionGroup& group) {
  ordered_json j;
  j["factors"] = ordered_json::array();
  for (const grip::RotationSubgroup& g : group.factors) {
    j["factors"].push_back({{"point", vec3(g.point)}, {"axis", vec3(g.axis)}});
  }
  j["degenerate"] = group.degenerate;
  j["identity"] = group.is_identity();
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"Reconfigurable four-finger gripper analysis toolkit"};
  app.require_subcommand(1);

  std::string hand_arg = "default";
  std::string out_path;
  app.add_option("--hand", hand_arg, "hand config JSON path, or 'default'")->capture_default_str();

  auto* energy_map = app.add_subcommand("energy-map", "elastic energy and tendon length grid");
  int map_n = 200;
  int map_finger = grip::kALeft;
  std::string map_out;
  energy_map->add_option("--n", map_n, "grid resolution per joint")->check(CLI::Range(2, 5000));
  energy_map->add_option("--finger", map_finger, "finger index 0..3")->check(CLI::Range(0, 3));
  energy_map->add_option("--out", map_out, "output CSV path");

  auto* contour_cmd = app.add_subcommand("contour", "one level set of total tendon length");
  double contour_length = 0.0;
  int contour_res = 200;
  int contour_finger = grip::kALeft;
  std::string contour_out;
  contour_cmd->add_option("--length", contour_length, "target total tendon length, mm")
      ->required();
  contour_cmd->add_option("--resolution", contour_res)->check(CLI::Range(2, 100000));
  contour_cmd->add_option("--finger", contour_finger)->check(CLI::Range(0, 3));
  contour_cmd->add_option("--out", contour_out, "output CSV path");

  auto* traj = app.add_subcommand("trajectory", "minimum-energy closing trajectory");
  int traj_steps = 100;
  int traj_finger = grip::kALeft;
  std::string traj_out;
  traj->add_option("--steps", traj_steps)->check(CLI::Range(2, 1000000));
  traj->add_option("--finger", traj_finger)->check(CLI::Range(0, 3));
  traj->add_option("--out", traj_out, "output CSV path");

  auto* bist = app.add_subcommand("bistability", "basin count along tendon level sets");
  int bist_finger = grip::kALeft;
  std::string bist_out;
  bist->add_option("--finger", bist_finger)->check(CLI::Range(0, 3));
  bist->add_option("--out", bist_out, "output JSON path");

  auto* groups = app.add_subcommand("mode-group", "finger and combined motion groups");
  double groups_phi = -1.0;
  bool groups_locked = false;
  std::string groups_out;
  groups->add_option("--phi", groups_phi, "palm rotation, rad (default: current)");
  groups->add_flag("--locked", groups_locked, "lock at phi_max and report combined groups");
  groups->add_option("--out", groups_out, "output JSON path");

  auto* meeting = app.add_subcommand("meeting-height", "fingertip convergence height");
  std::string meeting_mode = "spherical";
  std::string meeting_out;
  meeting->add_option("--mode", meeting_mode, "spherical or cylindrical");
  meeting->add_option("--out", meeting_out, "output JSON path");

  auto* grasp_cmd = app.add_subcommand("grasp", "quasi-static closure on a primitive object");
  std::string grasp_scenario;
  std::string grasp_mode_override;
  std::string grasp_out;
  grasp_cmd->add_option("--scenario", grasp_scenario, "scenario JSON path")->required();
  grasp_cmd->add_option("--mode", grasp_mode_override, "override the scenario's mode");
  grasp_cmd->add_option("--out", grasp_out, "output JSON path");

  auto* score = app.add_subcommand("score", "score a line-delimited trial log");
  std::string score_trials;
  std::string score_weights;
  bool score_markdown = false;
  std::string score_out;
  score->add_option("--trials", score_trials, "trials.jsonl path")->required();
  score->add_option("--weights", score_weights, "ycb weight table JSON (default: built-in)");
  score->add_flag("--markdown", score_markdown, "emit the report as a markdown table");
  score->add_option("--out", score_out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const grip::HandConfig hand = grip::load_hand(hand_arg);

  if (*energy_map) {
    const auto grid = grip::energy_grid(hand.fingers[map_finger], map_n, map_n);
    std::ostringstream csv;
    csv << "q1,q2,L_total,E\n";
    for (const auto& sample : grid) {
      csv << format_double(sample.state.q1) << ',' << format_double(sample.state.q2) << ','
          << format_double(sample.total_tendon_length) << ','
          << format_double(sample.elastic_energy) << '\n';
    }
    emit(map_out, csv.str());
  } else if (*contour_cmd) {
    const grip::Contour c =
        grip::contour(hand.fingers[contour_finger], contour_length, contour_res);
    std::ostringstream csv;
    csv << "q1,q2\n";
    for (const auto& s : c.samples) {
      csv << format_double(s.q1) << ',' << format_double(s.q2) << '\n';
    }
    emit(contour_out, csv.str());
  } else if (*traj) {
    const auto path = grip::min_energy_trajectory(hand.fingers[traj_finger], traj_steps);
    std::ostringstream csv;
    csv << "retracted,q1,q2,E\n";
    for (const auto& p : path) {
      csv << format_double(p.retracted_tendon) << ',' << format_double(p.state.q1) << ','
          << format_double(p.state.q2) << ',' << format_double(p.elastic_energy) << '\n';
    }
    emit(traj_out, csv.str());
  } else if (*bist) {
    const grip::BistabilityReport report = grip::detect_bistability(hand.fingers[bist_finger]);
    ordered_json j;
    j["bistable"] = report.bistable;
    j["degenerate"] = report.degenerate;
    j["basins"] = ordered_json::array();
    for (const auto& s : report.basins) j["basins"].push_back({s.q1, s.q2});
    emit(bist_out, j.dump(2) + "\n");
  } else if (*groups) {
    grip::HandConfig configured = hand;
    if (groups_locked) {
      configured = grip::sweep_palm(hand, hand.phi_max);
      configured.lock_state = grip::LockState::Locked;
    } else if (groups_phi >= 0.0) {
      configured = grip::sweep_palm(hand, groups_phi);
    }
    ordered_json j;
    j["palm_rotation"] = configured.palm_rotation;
    j["locked"] = configured.lock_state == grip::LockState::Locked;
    j["fingers"] = ordered_json::array();
    for (int f = 0; f < 4; ++f) {
      j["fingers"].push_back(group_to_json(grip::finger_motion_group(configured, f)));
    }
    if (configured.lock_state == grip::LockState::Locked) {
      j["combined"] = ordered_json::array();
      for (const auto& [a, b] : grip::locking_pairs()) {
        j["combined"].push_back(group_to_json(grip::combined_finger_group(configured, a, b)));
      }
    }
    emit(groups_out, j.dump(2) + "\n");
  } else if (*meeting) {
    const grip::PalmMode mode = grip::parse_mode(meeting_mode);
    if (mode == grip::PalmMode::Precision) {
      throw grip::ValidationError("meeting-height applies to the power modes");
    }
    const double height = grip::meeting_height(hand, mode);
    ordered_json j;
    j["mode"] = grip::mode_name(mode);
    j["meeting_height"] = height;
    emit(meeting_out, j.dump(2) + "\n");
  } else if (*grasp_cmd) {
    grip::GraspScenario scenario = grip::scenario_from_json(
        grip::read_file(grasp_scenario),
        std::filesystem::path(grasp_scenario).parent_path());
    if (!grasp_mode_override.empty()) scenario.mode = grip::parse_mode(grasp_mode_override);
    grip::HandPose pose;
    pose.hand = scenario.hand;
    for (int f = 0; f < 4; ++f) {
      const auto& limits = scenario.hand.fingers[f].joint_limits;
      pose.joints[f] = {limits[0].lo, limits[1].lo};
    }
    const grip::GraspOutcome outcome =
        grip::close_grasp(pose, scenario.object, scenario.mode, scenario.step);
    emit(grasp_out, grip::grasp_outcome_to_json(outcome));
  } else if (*score) {
    const grip::TrialLog log = grip::trials_from_jsonl(grip::read_file(score_trials));
    const grip::YcbWeightTable weights =
        score_weights.empty() ? grip::default_ycb_weights()
                              : grip::parse_ycb_weights(grip::read_file(score_weights));
    if (score_markdown) {
      emit(score_out, grip::format_score_report(grip::score_ycb(log.ycb, weights)));
    } else {
      emit(score_out, grip::score_trials_to_json(log, weights));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const grip::SimulationError& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kExitSimulation;
  } catch (const grip::ModeError& e) {
    std::cerr << "mode error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const grip::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::range_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSimulation;
  }
}
