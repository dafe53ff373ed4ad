#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"
#include "stiler/report.hpp"
#include "stiler/svg.hpp"

using namespace stiler;
using nlohmann::json;

namespace {

// Elements in the lines group; a diameter renders as <line>, an arc as <path>.
int stroked_line_elements(const std::string& svg) {
  const auto open = svg.find("<g id=\"lines\">");
  REQUIRE(open != std::string::npos);
  const auto close = svg.find("</g>", open);
  int n = 0;
  for (auto pos = open; pos < close;) {
    const auto p = svg.find("<path", pos), l = svg.find("<line", pos);
    const auto hit = std::min(p, l);
    if (hit >= close) break;
    ++n;
    pos = hit + 5;
  }
  return n;
}

LineFamily one_line_family() {
  LineFamily fam;
  fam.lines = {Geodesic(BoundaryPoint::at(-1.0), BoundaryPoint::at(1.0))};
  fam.witnesses = {Word{}};
  fam.sig = classify_signature(4, 5, 2);
  fam.center = {0.0, 1.0};
  fam.region_radius = 1.5;
  fam.stabilized = true;
  return fam;
}

}  // namespace

TEST_CASE("per-signature default radii and word-length scaling") {
  auto radius_of = [](int p, int q, int r) {
    return default_radius(role_normalize(classify_signature(p, q, r)));
  };
  CHECK(radius_of(3, 4, 5) == 6.0);
  CHECK(radius_of(3, 7, 2) == 7.5);
  CHECK(radius_of(3, 8, 2) == 6.5);
  CHECK(radius_of(4, 5, 2) == 6.5);
  CHECK(radius_of(4, 5, 6) == 7.5);
  CHECK(radius_of(4, 7, 2) == 6.5);
  CHECK(radius_of(5, 5, 5) == 6.5);
  CHECK(radius_of(6, 6, 6) == 6.5);  // fallback bucket
  CHECK(radius_of(2, 5, 4) == 6.5);  // role permutation of (4,5,2)

  CHECK(default_max_wordlen(3.0) == 14);
  CHECK(default_max_wordlen(3.5) == 14);
  CHECK(default_max_wordlen(6.5) == 26);
  CHECK(default_max_wordlen(7.5) == 30);
}

TEST_CASE("analysis report for a small case-2 run") {
  AnalysisOptions opt;
  opt.radius = 4.5;
  const AnalysisReport rep = analyze(4, 5, 2, opt);

  CHECK(rep.signature.p == 4);
  CHECK(rep.signature.q == 5);
  CHECK(rep.signature.r == 2);
  CHECK(rep.signature.geometry == "hyperbolic");
  CHECK(rep.signature.case_label == "case2");
  CHECK(rep.scott.word == "x y^-1");
  CHECK(rep.scott.trace == doctest::Approx(2.288245611270738).epsilon(1e-12));
  CHECK(rep.scott.cls == "hyperbolic");
  CHECK(rep.scott.translation_length == doctest::Approx(1.0612750619050368).epsilon(1e-12));
  CHECK(rep.family.num_lines == 138);
  CHECK(rep.family.stabilized);
  CHECK(rep.axioms.triple_points == 0);
  CHECK(rep.axioms.vertex_degree_ok);
  CHECK(rep.axioms.euler_ok);
  CHECK(rep.axioms.max_pair_intersections == 1);
  CHECK(rep.census.observed == std::map<int, int>{{5, 4}});
  CHECK(rep.census.expected == std::vector<int>{5});
  CHECK(rep.census.match);
  CHECK(rep.planes.k4_pass);
  CHECK(rep.planes.k3_pass);
  CHECK(rep.coloring.bound == 5);
  CHECK(rep.coloring.colors_used <= 5);
  CHECK(rep.coloring.proper);
  CHECK(rep.coloring.within_bound);
  CHECK(rep.growth.all_convex);
  CHECK(rep.growth.fixups == 0);
  CHECK(rep.growth.fixups_ok);
  CHECK(rep.warnings.empty());
  CHECK(rep.timings.count("total") == 1);
  CHECK(report_exit_code(rep) == 0);
}

TEST_CASE("report json round-trip is lossless") {
  AnalysisOptions opt;
  opt.radius = 3.5;
  const AnalysisReport rep = analyze(3, 7, 2, opt);
  const std::string text = report_to_json(rep);
  const AnalysisReport back = report_from_json(text);
  CHECK(back == rep);
  CHECK(report_to_json(back) == text);

  const json j = json::parse(text);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("scott").contains("class"));
  CHECK(j.at("census").at("observed") == json{{"3", 22}, {"7", 6}});
}

TEST_CASE("exit code reflects failed checks and stabilization warnings") {
  AnalysisOptions opt;
  opt.radius = 4.5;
  AnalysisReport rep = analyze(4, 5, 2, opt);
  REQUIRE(report_exit_code(rep) == 0);

  AnalysisReport broken = rep;
  broken.census.match = false;
  CHECK(report_exit_code(broken) == 1);

  broken = rep;
  broken.coloring.within_bound = false;
  CHECK(report_exit_code(broken) == 1);

  broken = rep;
  broken.warnings.push_back("NotStabilized: family still growing at word length 14");
  CHECK(report_exit_code(broken) == 1);

  broken = rep;
  broken.warnings.push_back("ConeIncidenceAmbiguous: orbit Y");
  CHECK(report_exit_code(broken) == 0);  // ambiguity is surfaced but does not gate
}

TEST_CASE("explicit word-length cap is honored verbatim") {
  // (3,8,2) needs ball radius 18 at R = 6.5; capping at 14 must be reported,
  // not silently overridden.
  AnalysisOptions opt;
  opt.radius = 6.5;
  opt.max_wordlen = 14;
  const AnalysisReport rep = analyze(3, 8, 2, opt);
  CHECK_FALSE(rep.family.stabilized);
  bool has_stab_warning = false;
  for (const auto& w : rep.warnings)
    if (w.find("NotStabilized") != std::string::npos) has_stab_warning = true;
  CHECK(has_stab_warning);
  CHECK(report_exit_code(rep) == 1);
}

TEST_CASE("non-hyperbolic signatures are rejected with exit code 2") {
  CHECK_THROWS_WITH_AS(analyze(2, 4, 4), doctest::Contains("euclidean"), Error);
  CHECK_THROWS_WITH_AS(analyze(2, 3, 5), doctest::Contains("spherical"), Error);
  try {
    analyze(2, 3, 5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonHyperbolicSignature);
    CHECK(exit_code_for(e.code()) == 2);
    const json j = json::parse(error_to_json(e));
    CHECK(j.at("error").at("code") == "NonHyperbolicSignature");
  }
}

TEST_CASE("fatal codes map to exit 3, recoverable ones to exit 2") {
  CHECK(exit_code_for(ErrorCode::InvalidArgument) == 2);
  CHECK(exit_code_for(ErrorCode::WordSyntax) == 2);
  CHECK(exit_code_for(ErrorCode::NoCompleteTiles) == 2);
  CHECK(exit_code_for(ErrorCode::NoWitnessFound) == 2);
  CHECK(exit_code_for(ErrorCode::BallTooLarge) == 2);
  CHECK(exit_code_for(ErrorCode::Io) == 2);
  CHECK(exit_code_for(ErrorCode::TriplePointDetected) == 3);
  CHECK(exit_code_for(ErrorCode::ConsistencyFailure) == 3);
  CHECK(exit_code_for(ErrorCode::NotADisk) == 3);
}

TEST_CASE("algebra grid covers every signature up to the index bound") {
  bool all_pass = false;
  const json j = json::parse(algebra_grid_json(9, &all_pass));
  CHECK(all_pass);
  CHECK(j.at("count") == 106);
  CHECK(j.at("all_pass") == true);

  bool found_372 = false, found_334 = false;
  for (const auto& row : j.at("signatures")) {
    if (row.at("p") == 3 && row.at("q") == 7 && row.at("r") == 2) {
      found_372 = true;
      CHECK(row.at("word") == "x y^-2");
      CHECK(row.at("case_label") == "case3");
      CHECK(row.at("trace").get<double>() ==
            doctest::Approx(2.2469796037174676).epsilon(1e-12));
      CHECK(row.at("infinite_order") == true);
      CHECK(row.at("oracle_delta").get<double>() <= 1e-9);
      CHECK(row.at("relations_max_err").get<double>() <= 1e-9);
      CHECK(row.at("pass") == true);
    }
    if (row.at("p") == 3 && row.at("q") == 3 && row.at("r") == 4) {
      found_334 = true;
      CHECK(row.at("trace").get<double>() ==
            doctest::Approx(2.414213562373096).epsilon(1e-12));
    }
  }
  CHECK(found_372);
  CHECK(found_334);

  // Only (3,3,4), (3,4,4), (4,4,4) are hyperbolic with indices <= 4.
  const json small = json::parse(algebra_grid_json(4));
  CHECK(small.at("count") == 3);
}

TEST_CASE("atomic writer replaces files and cleans up on failure") {
  const std::string path = "report_writer_probe.txt";
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "second");
  in.close();
  std::remove(path.c_str());
  std::remove((path + ".tmp").c_str());

  CHECK_THROWS_AS(write_file_atomic("/nonexistent-dir/out.txt", "x"), Error);
}

TEST_CASE("growth accepts an explicit seed tile") {
  const AnalysisBundle bundle = [] {
    AnalysisOptions opt;
    opt.radius = 4.5;
    return analyze_full(4, 5, 2, opt);
  }();
  const Arrangement& A = bundle.arrangement;
  const int auto_seed = seed_tile(A);

  const GrowthResult by_default = polygon_growth(A, 8);
  const GrowthResult by_choice = polygon_growth(A, 8, auto_seed, Tolerances{});
  CHECK(by_choice.generation == by_default.generation);
  CHECK(by_choice.states.size() == by_default.states.size());

  // Growing from a different complete tile starts there.
  int other = -1;
  for (int fi : A.complete_tiles())
    if (fi != auto_seed) other = fi;
  REQUIRE(other >= 0);
  const GrowthResult moved = polygon_growth(A, 8, other, Tolerances{});
  CHECK(moved.states.front().polygon == std::vector<int>{other});

  CHECK_THROWS_AS(polygon_growth(A, 8, A.outer_face(), Tolerances{}), Error);
  CHECK_THROWS_AS(polygon_growth(A, 8, 1 << 28, Tolerances{}), Error);
}

TEST_CASE("svg lines group carries one stroked element per line") {
  const AnalysisBundle bundle = [] {
    AnalysisOptions opt;
    opt.radius = 4.5;
    return analyze_full(4, 5, 2, opt);
  }();
  const std::string svg =
      render_svg(bundle.arrangement, &bundle.coloring, &bundle.growth);
  CHECK(stroked_line_elements(svg) == 138);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg == render_svg(bundle.arrangement, &bundle.coloring, &bundle.growth));

  // Grayscale fallback without a coloring.
  const std::string gray = render_svg(bundle.arrangement, nullptr, nullptr);
  CHECK(stroked_line_elements(gray) == 138);
  CHECK(gray.find("#444444") != std::string::npos);

  RenderSpec growth_on;
  growth_on.toggles.growth_polygon = true;
  const std::string overlay =
      render_svg(bundle.arrangement, &bundle.coloring, &bundle.growth, growth_on);
  CHECK(overlay.find("<g id=\"growth\">") != std::string::npos);
}

TEST_CASE("svg renders a single-line family as one element") {
  const Arrangement A = build_arrangement(one_line_family(), Tolerances{});
  const std::string svg = render_svg(A, nullptr, nullptr);
  CHECK(stroked_line_elements(svg) == 1);
}

TEST_CASE("render palette is validated") {
  const Arrangement A = build_arrangement(one_line_family(), Tolerances{});
  RenderSpec spec;
  spec.palette = {"#000000", "#111111"};
  CHECK_THROWS_AS(render_svg(A, nullptr, nullptr, spec), Error);
  spec.palette = {"#e6194b", "#3cb44b", "#b8a500", "#4363d8", "#f58231", "#911eb4", "#e6194b"};
  CHECK_THROWS_AS(render_svg(A, nullptr, nullptr, spec), Error);
}
