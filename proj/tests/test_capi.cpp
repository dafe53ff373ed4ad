#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "json.hpp"
#include "scott_tiler.h"

using nlohmann::json;

namespace {

std::string tmp_path(const char* name) {
  return std::string("capi_") + name;  // test binary runs in its own build dir
}

std::string slurp(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  REQUIRE(f != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  std::fclose(f);
  return out;
}

}  // namespace

TEST_CASE("version and defaults") {
  CHECK(std::string(st_version()) == "1.0.0");
  const st_options o = st_default_options();
  CHECK(o.radius == 0.0);
  CHECK(o.max_wordlen == 0);
  CHECK(o.tol_point == 1e-7);
  CHECK(o.tol_matrix == 1e-9);
  CHECK(o.ball_cap == 200000);
  CHECK(o.seed_tile == -1);
  const st_render_options r = st_default_render_options();
  CHECK(r.width == 900);
  CHECK(r.show_lines == 1);
  CHECK(r.show_vertices == 0);
  CHECK(r.show_tiles == 1);
}

TEST_CASE("word order entry point") {
  long order = 0;
  double trace = 0.0;

  CHECK(st_word_order(3, 4, 5, "x y^-1", &order, &trace) == ST_OK);
  CHECK(order == -1);
  CHECK(trace == doctest::Approx(3.0322475511229907).epsilon(1e-12));

  CHECK(st_word_order(3, 4, 5, "x", &order, &trace) == ST_OK);
  CHECK(order == 3);
  CHECK(trace == doctest::Approx(1.0));
  CHECK(st_word_order(3, 4, 5, "z^-1", &order, nullptr) == ST_OK);
  CHECK(order == 5);
  CHECK(st_word_order(3, 4, 5, "x x^-1", &order, &trace) == ST_OK);
  CHECK(order == 1);

  CHECK(st_word_order(2, 3, 5, "x", &order, &trace) == ST_USAGE_ERROR);
  CHECK(std::strstr(st_last_error(), "NonHyperbolicSignature") != nullptr);
  CHECK(st_word_order(3, 4, 5, "x w", &order, &trace) == ST_USAGE_ERROR);
  CHECK(std::strstr(st_last_error(), "offset 2") != nullptr);
  CHECK(st_word_order(3, 4, 5, "y^0", &order, &trace) == ST_USAGE_ERROR);
  CHECK(st_word_order(3, 4, 5, nullptr, &order, &trace) == ST_USAGE_ERROR);
}

TEST_CASE("witness search entry point") {
  char* w = nullptr;
  double trace = 0.0;

  CHECK(st_witness_search(3, 7, 2, "x", "y", &w, &trace) == ST_OK);
  REQUIRE(w != nullptr);
  CHECK(std::string(w) == "x y^-2");
  CHECK(trace == doctest::Approx(2.2469796037174676).epsilon(1e-12));
  st_free(w);
  w = nullptr;

  CHECK(st_witness_search(3, 3, 4, "x", "y", &w, &trace) == ST_OK);
  REQUIRE(w != nullptr);
  CHECK(std::fabs(trace) > 2.0);
  st_free(w);
  w = nullptr;

  CHECK(st_witness_search(4, 5, 2, "x", "y", nullptr, &trace) == ST_OK);
  CHECK(std::fabs(trace) > 2.0);

  CHECK(st_witness_search(3, 4, 5, "x", "x", &w, &trace) == ST_USAGE_ERROR);
  CHECK(w == nullptr);
  CHECK(std::strstr(st_last_error(), "NoWitnessFound") != nullptr);
}

TEST_CASE("grid entry point") {
  char* text = nullptr;
  int all_pass = -1;
  REQUIRE(st_grid_json(9, &text, &all_pass) == ST_OK);
  REQUIRE(text != nullptr);
  CHECK(all_pass == 1);
  const json j = json::parse(text);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("count") == 106);
  CHECK(j.at("all_pass") == true);
  CHECK(j.at("signatures").size() == 106);
  st_free(text);

  text = nullptr;
  CHECK(st_grid_json(1, &text, &all_pass) == ST_USAGE_ERROR);
  CHECK(text == nullptr);
  CHECK(std::strstr(st_last_error(), "InvalidArgument") != nullptr);
}

TEST_CASE("analyze handle lifecycle") {
  st_analysis* a = nullptr;
  st_options opt = st_default_options();
  opt.radius = 4.5;  // small family keeps this fast
  REQUIRE(st_analyze(4, 5, 2, &opt, &a) == ST_OK);
  REQUIRE(a != nullptr);

  CHECK(st_analysis_exit_code(a) == 0);
  const char* text = st_analysis_json(a);
  REQUIRE(text != nullptr);
  CHECK(st_analysis_json(a) == text);  // cached, stable pointer
  const json j = json::parse(text);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("signature").at("case_label") == "case2");
  CHECK(j.at("family").at("num_lines") == 138);
  CHECK(j.at("census").at("observed") == json{{"5", 4}});
  CHECK(j.at("census").at("match") == true);

  const st_render_options ropt = st_default_render_options();
  const char* svg = st_analysis_svg(a, &ropt);
  REQUIRE(svg != nullptr);
  CHECK(std::strstr(svg, "</svg>") != nullptr);

  const std::string jpath = tmp_path("report.json"), spath = tmp_path("render.svg");
  CHECK(st_analysis_write_json(a, jpath.c_str()) == ST_OK);
  CHECK(st_analysis_write_svg(a, spath.c_str(), &ropt) == ST_OK);
  CHECK(slurp(jpath) == text);
  CHECK(slurp(spath) == svg);
  CHECK(st_analysis_write_json(a, "/nonexistent-dir/x.json") == ST_USAGE_ERROR);
  CHECK(std::strstr(st_last_error(), "Io") != nullptr);

  st_analysis_free(a);
  std::remove(jpath.c_str());
  std::remove(spath.c_str());
}

TEST_CASE("analyze error paths") {
  st_analysis* a = reinterpret_cast<st_analysis*>(1);
  CHECK(st_analyze(2, 4, 4, nullptr, &a) == ST_USAGE_ERROR);
  CHECK(a == nullptr);
  CHECK(std::strstr(st_last_error(), "euclidean") != nullptr);
  const json err = json::parse(st_last_error_json());
  CHECK(err.at("error").at("code") == "NonHyperbolicSignature");

  CHECK(st_analyze(2, 3, 5, nullptr, &a) == ST_USAGE_ERROR);
  CHECK(std::strstr(st_last_error(), "spherical") != nullptr);

  st_options opt = st_default_options();
  opt.radius = 4.5;
  opt.seed_tile = 999999;
  CHECK(st_analyze(4, 5, 2, &opt, &a) == ST_USAGE_ERROR);
  CHECK(std::strstr(st_last_error(), "InvalidIndex") != nullptr);

  CHECK(st_analyze(4, 5, 2, nullptr, nullptr) == ST_USAGE_ERROR);
}

TEST_CASE("null tolerance of accessors") {
  st_free(nullptr);
  st_analysis_free(nullptr);
  CHECK(st_analysis_json(nullptr) == nullptr);
  CHECK(st_analysis_svg(nullptr, nullptr) == nullptr);
  CHECK(st_analysis_exit_code(nullptr) == ST_USAGE_ERROR);
  CHECK(st_analysis_write_json(nullptr, "x") == ST_USAGE_ERROR);
  CHECK(st_write_text(nullptr, "x") == ST_USAGE_ERROR);
}

TEST_CASE("atomic text writer") {
  const std::string path = tmp_path("writer.txt");
  CHECK(st_write_text(path.c_str(), "hello\n") == ST_OK);
  CHECK(slurp(path) == "hello\n");
  CHECK(st_write_text(path.c_str(), "replaced\n") == ST_OK);
  CHECK(slurp(path) == "replaced\n");
  std::remove(path.c_str());
}
