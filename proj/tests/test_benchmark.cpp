#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "gripkit/benchmark.hpp"

using namespace grip;

namespace {

YcbTrial rigid_trial(const std::string& id, PalmMode mode, YcbPosition pos,
                     std::vector<bool> cells) {
  return YcbTrial{id, mode, pos, std::move(cells)};
}

// Every placement of every object fully succeeding in one mode.
std::vector<YcbTrial> perfect_mode(const YcbWeightTable& weights, PalmMode mode) {
  std::vector<YcbTrial> trials;
  for (const auto& obj : weights.objects) {
    if (obj.articulated) {
      trials.push_back({obj.id, mode, YcbPosition::Origin,
                        std::vector<bool>(static_cast<std::size_t>(obj.attempts), true)});
    } else {
      for (int p = 0; p < obj.positions; ++p) {
        trials.push_back(
            {obj.id, mode, static_cast<YcbPosition>(p), {true, true, true, true}});
      }
    }
  }
  return trials;
}

SoftTrial soft(SoftBenchmark bench, const std::string& garment, bool success,
               std::optional<double> value = std::nullopt) {
  SoftTrial t;
  t.benchmark = bench;
  t.garment_id = garment;
  t.success = success;
  if (bench == SoftBenchmark::A) t.placement_error = value;
  if (bench == SoftBenchmark::C) t.lift_height = value;
  return t;
}

}  // namespace

TEST_CASE("built-in rigid-object schedule") {
  const YcbWeightTable w = default_ycb_weights();
  REQUIRE(w.objects.size() == 28);
  int four_pos = 0;
  int three_pos = 0;
  int articulated = 0;
  for (const auto& o : w.objects) {
    if (o.articulated) {
      ++articulated;
      CHECK(o.attempts == 20);
    } else if (o.positions == 4) {
      ++four_pos;
    } else if (o.positions == 3) {
      ++three_pos;
    }
  }
  CHECK(four_pos == 18);
  CHECK(three_pos == 8);
  CHECK(articulated == 2);
  // 96 placements * 4 cells + 2 * 20 half-point attempts.
  CHECK(w.max_score() == doctest::Approx(404.0));
  REQUIRE(w.find("golf_ball") != nullptr);
  CHECK(w.find("golf_ball")->positions == 3);
  CHECK(w.find("no_such_object") == nullptr);
}

TEST_CASE("a flawless run collects every point in every mode") {
  const YcbWeightTable w = default_ycb_weights();
  std::vector<YcbTrial> trials;
  for (PalmMode mode : {PalmMode::Precision, PalmMode::Cylindrical, PalmMode::Spherical}) {
    auto block = perfect_mode(w, mode);
    trials.insert(trials.end(), block.begin(), block.end());
  }
  const ScoreReport report = score_ycb(trials, w);
  CHECK(report.max_score == doctest::Approx(404.0));
  for (double total : report.mode_totals) CHECK(total == doctest::Approx(404.0));
  CHECK(report.combined == doctest::Approx(404.0));
  CHECK(report.per_object.size() == 28);
  // The summary table carries one row per object plus the totals row.
  const std::string table = format_score_report(report);
  CHECK(std::count(table.begin(), table.end(), '\n') == 31);
}

TEST_CASE("an object's best mode feeds the combined score") {
  const YcbWeightTable w = default_ycb_weights();
  std::vector<YcbTrial> trials = {
      rigid_trial("apple", PalmMode::Precision, YcbPosition::Origin, {true, false, false, false}),
      rigid_trial("apple", PalmMode::Spherical, YcbPosition::Origin, {true, true, true, false}),
      rigid_trial("apple", PalmMode::Spherical, YcbPosition::Dx, {true, true, false, false}),
      rigid_trial("mug", PalmMode::Cylindrical, YcbPosition::Origin, {true, true, true, true}),
  };
  const ScoreReport report = score_ycb(trials, w);
  CHECK(report.per_object.at("apple")[0] == doctest::Approx(1.0));
  CHECK(report.per_object.at("apple")[2] == doctest::Approx(5.0));
  CHECK(report.mode_totals[1] == doctest::Approx(4.0));
  // apple counts its spherical 5, mug its cylindrical 4.
  CHECK(report.combined == doctest::Approx(9.0));
}

TEST_CASE("articulated objects score half a point per successful attempt") {
  const YcbWeightTable w = default_ycb_weights();
  std::vector<bool> attempts(20, false);
  for (int i = 0; i < 7; ++i) attempts[i] = true;
  const ScoreReport report =
      score_ycb({{"scissors", PalmMode::Precision, YcbPosition::Origin, attempts}}, w);
  CHECK(report.per_object.at("scissors")[0] == doctest::Approx(3.5));
}

TEST_CASE("trial log validation") {
  const YcbWeightTable w = default_ycb_weights();
  CHECK_THROWS_AS(
      score_ycb({rigid_trial("brick", PalmMode::Precision, YcbPosition::Origin,
                             {true, true, true, true})},
                w),
      ValidationError);
  // golf_ball is only scored in three placements.
  CHECK_THROWS_AS(
      score_ycb({rigid_trial("golf_ball", PalmMode::Precision, YcbPosition::Dz,
                             {true, true, true, true})},
                w),
      ValidationError);
  CHECK_THROWS_AS(
      score_ycb({rigid_trial("apple", PalmMode::Precision, YcbPosition::Origin, {true, true})},
                w),
      ValidationError);
  // Later cell succeeding after an earlier failure breaks the protocol order.
  CHECK_THROWS_AS(
      score_ycb({rigid_trial("apple", PalmMode::Precision, YcbPosition::Origin,
                             {true, false, true, false})},
                w),
      ValidationError);
  const YcbTrial dup =
      rigid_trial("apple", PalmMode::Precision, YcbPosition::Origin, {true, true, true, true});
  CHECK_THROWS_AS(score_ycb({dup, dup}, w), ValidationError);
  CHECK_THROWS_AS(
      score_ycb({{"scissors", PalmMode::Precision, YcbPosition::Origin, {true, true}}}, w),
      ValidationError);
}

TEST_CASE("weight tables load from JSON") {
  const std::string text = R"({
    "cell_weight": 2.0,
    "articulated_attempt_weight": 0.25,
    "objects": [
      {"id": "apple", "positions": 4},
      {"id": "clamp", "articulated": true, "attempts": 8}
    ]
  })";
  const YcbWeightTable w = parse_ycb_weights(text);
  CHECK(w.cell_weight == 2.0);
  CHECK(w.articulated_attempt_weight == 0.25);
  REQUIRE(w.objects.size() == 2);
  CHECK(w.find("apple")->positions == 4);
  CHECK(w.find("clamp")->articulated);
  CHECK(w.max_score() == doctest::Approx(4 * 4 * 2.0 + 8 * 0.25));
}

TEST_CASE("lower median against a sort oracle") {
  CHECK(lower_median({3.0}) == 3.0);
  CHECK(lower_median({5.0, 1.0, 3.0}) == 3.0);
  // Even count: the smaller of the two middle values, deterministically.
  CHECK(lower_median({4.0, 1.0, 3.0, 2.0}) == 2.0);
  CHECK(lower_median({2.0, 2.0, 9.0, 9.0}) == 2.0);
  CHECK_THROWS_AS(lower_median({}), std::invalid_argument);
}

TEST_CASE("edge-drag scoring groups by edge type") {
  std::vector<SoftTrial> trials;
  for (double err : {4.0, 6.0, 2.0}) {
    auto t = soft(SoftBenchmark::A, "towel", true, err);
    t.edge_type = EdgeType::Single;
    trials.push_back(t);
  }
  auto fail = soft(SoftBenchmark::A, "towel", false);
  fail.edge_type = EdgeType::Single;
  trials.push_back(fail);
  auto folded = soft(SoftBenchmark::A, "towel", false);
  folded.edge_type = EdgeType::Folded;
  trials.push_back(folded);

  const auto report = score_soft_A(trials);
  CHECK(report.at(EdgeType::Single).attempts == 4);
  CHECK(report.at(EdgeType::Single).success_rate == doctest::Approx(0.75));
  CHECK(report.at(EdgeType::Single).median_error == doctest::Approx(4.0));
  CHECK(report.at(EdgeType::Folded).attempts == 1);
  CHECK(report.at(EdgeType::Folded).success_rate == 0.0);
  CHECK_FALSE(report.at(EdgeType::Folded).median_error.has_value());

  // placement_error must accompany success and only success.
  auto broken = soft(SoftBenchmark::A, "towel", true);
  CHECK_THROWS_AS(score_soft_A({broken}), ValidationError);
  auto extra = soft(SoftBenchmark::A, "towel", false, 3.0);
  CHECK_THROWS_AS(score_soft_A({extra}), ValidationError);
  CHECK_THROWS_AS(score_soft_A({soft(SoftBenchmark::D, "towel", true)}), ValidationError);
}

TEST_CASE("lift scoring per garment") {
  std::vector<SoftTrial> trials;
  trials.push_back(soft(SoftBenchmark::C, "jeans", true, 120.0));
  trials.push_back(soft(SoftBenchmark::C, "jeans", true, 80.0));
  for (int i = 0; i < 3; ++i) trials.push_back(soft(SoftBenchmark::C, "jeans", false));
  const auto report = score_soft_C(trials);
  CHECK(report.at("jeans").attempts == 5);
  CHECK(report.at("jeans").success_rate == doctest::Approx(0.4));
  // Lower median of {80, 120}.
  CHECK(report.at("jeans").median_lift == doctest::Approx(80.0));
  CHECK_THROWS_AS(score_soft_C({soft(SoftBenchmark::C, "jeans", true)}), ValidationError);
}

TEST_CASE("flat-region grasp rate per garment") {
  std::vector<SoftTrial> trials;
  for (int i = 0; i < 5; ++i) trials.push_back(soft(SoftBenchmark::D, "socks", true));
  for (int i = 0; i < 4; ++i) trials.push_back(soft(SoftBenchmark::D, "tshirt", true));
  trials.push_back(soft(SoftBenchmark::D, "tshirt", false));
  for (int i = 0; i < 5; ++i) trials.push_back(soft(SoftBenchmark::D, "jeans", false));
  const auto report = score_soft_D(trials);
  CHECK(report.at("socks") == doctest::Approx(1.0));
  CHECK(report.at("tshirt") == doctest::Approx(0.8));
  CHECK(report.at("jeans") == doctest::Approx(0.0));
  CHECK_THROWS_AS(score_soft_D({soft(SoftBenchmark::A, "socks", true)}), ValidationError);
}
