// Command-line front end.  All computation goes through the shared-library
// C interface; this file only parses flags, formats output, and maps
// statuses to process exit codes.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "scott_tiler.h"

namespace {

using nlohmann::json;

// Exit codes: 0 all checks pass, 1 a verified claim failed, 2 usage or
// configuration error, 3 internal consistency failure.
int fail(const std::string& json_path, st_status status) {
  std::fprintf(stderr, "error: %s\n", st_last_error());
  if (!json_path.empty()) st_write_text(json_path.c_str(), st_last_error_json());
  return static_cast<int>(status);
}

bool parse_seed(const std::string& text, int* seed) {
  if (text == "auto") {
    *seed = -1;
    return true;
  }
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || v < 0 || v > 1000000000L) return false;
  *seed = static_cast<int>(v);
  return true;
}

std::string census_line(const json& census) {
  std::string out = "census {";
  bool first = true;
  for (const auto& [sides, count] : census.at("observed").items()) {
    if (!first) out += ", ";
    out += sides + "-gon: " + count.dump();
    first = false;
  }
  out += census.at("match").get<bool>() ? "} matches {" : "} EXPECTED {";
  bool f2 = true;
  for (const auto& v : census.at("expected")) {
    if (!f2) out += ", ";
    out += v.dump();
    f2 = false;
  }
  out += "}";
  return out;
}

void print_summary(const char* text) {
  const json j = json::parse(text);
  const auto& sig = j.at("signature");
  std::printf("signature (%d,%d,%d)  %s  %s\n", sig.at("p").get<int>(), sig.at("q").get<int>(),
              sig.at("r").get<int>(), sig.at("geometry").get<std::string>().c_str(),
              sig.at("case_label").get<std::string>().c_str());
  std::printf("word %s  trace %.12g  %s  translation length %.12g\n",
              j.at("scott").at("word").get<std::string>().c_str(),
              j.at("scott").at("trace").get<double>(),
              j.at("scott").at("class").get<std::string>().c_str(),
              j.at("scott").at("translation_length").get<double>());
  const auto& fam = j.at("family");
  std::printf("lines %d  radius %.3g  word length %d  stabilized %s\n",
              fam.at("num_lines").get<int>(), fam.at("region_radius").get<double>(),
              fam.at("word_length").get<int>(),
              fam.at("stabilized").get<bool>() ? "yes" : "NO");
  std::printf("%s\n", census_line(j.at("census")).c_str());
  const auto& col = j.at("coloring");
  std::printf("colors %d of bound %d  max backward conflicts %d  proper %s\n",
              col.at("colors_used").get<int>(), col.at("bound").get<int>(),
              col.at("max_backward_conflicts").get<int>(),
              col.at("proper").get<bool>() ? "yes" : "NO");
  const auto& growth = j.at("growth");
  std::printf("growth generations %d  fixups %d  convex %s\n",
              growth.at("generations").get<int>(), growth.at("fixups").get<int>(),
              growth.at("all_convex").get<bool>() ? "yes" : "NO");
  const auto& cone = j.at("cone_incidence");
  std::printf("cone orbits  X %s  Y %s  Z %s\n", cone.at("X").get<std::string>().c_str(),
              cone.at("Y").get<std::string>().c_str(), cone.at("Z").get<std::string>().c_str());
  for (const auto& w : j.at("warnings"))
    std::printf("warning: %s\n", w.get<std::string>().c_str());
}

int run_analyze(int p, int q, int r, const st_options& opt, const std::string& json_path,
                const std::string& svg_path) {
  st_analysis* a = nullptr;
  const st_status status = st_analyze(p, q, r, &opt, &a);
  if (status != ST_OK) return fail(json_path, status);

  const char* text = st_analysis_json(a);
  if (text == nullptr) {
    std::fprintf(stderr, "error: %s\n", st_last_error());
    st_analysis_free(a);
    return ST_INTERNAL_ERROR;
  }
  print_summary(text);

  if (!json_path.empty()) {
    const st_status ws = st_analysis_write_json(a, json_path.c_str());
    if (ws != ST_OK) {
      std::fprintf(stderr, "error: %s\n", st_last_error());
      st_analysis_free(a);
      return static_cast<int>(ws);
    }
  }
  if (!svg_path.empty()) {
    const st_render_options ropt = st_default_render_options();
    const st_status ws = st_analysis_write_svg(a, svg_path.c_str(), &ropt);
    if (ws != ST_OK) {
      std::fprintf(stderr, "error: %s\n", st_last_error());
      st_analysis_free(a);
      return static_cast<int>(ws);
    }
  }

  const int code = st_analysis_exit_code(a);
  std::printf(code == 0 ? "all checks pass\n" : "CHECK FAILED (exit %d)\n", code);
  st_analysis_free(a);
  return code;
}

int run_order(int p, int q, int r, const std::string& word) {
  long order = 0;
  double trace = 0.0;
  const st_status status = st_word_order(p, q, r, word.c_str(), &order, &trace);
  if (status != ST_OK) return fail("", status);
  if (order < 0)
    std::printf("order INFINITE\n");
  else
    std::printf("order %ld\n", order);
  std::printf("trace %.15g\n", trace);
  return 0;
}

int run_witness(int p, int q, int r, const std::string& a, const std::string& b) {
  char* witness = nullptr;
  double trace = 0.0;
  const st_status status = st_witness_search(p, q, r, a.c_str(), b.c_str(), &witness, &trace);
  if (status != ST_OK) return fail("", status);
  std::printf("witness %s\n", witness);
  std::printf("trace %.15g\n", trace);
  st_free(witness);
  return 0;
}

int run_grid(int max_index, const std::string& json_path) {
  char* text = nullptr;
  int all_pass = 0;
  const st_status status = st_grid_json(max_index, &text, &all_pass);
  if (status != ST_OK) return fail(json_path, status);
  const json j = json::parse(text);
  std::printf("signatures %d  all pass %s\n", j.at("count").get<int>(),
              all_pass ? "yes" : "NO");
  if (!json_path.empty()) {
    const st_status ws = st_write_text(json_path.c_str(), text);
    if (ws != ST_OK) {
      std::fprintf(stderr, "error: %s\n", st_last_error());
      st_free(text);
      return static_cast<int>(ws);
    }
  }
  st_free(text);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangle-group line arrangements: censuses, colorings, growth"};
  app.require_subcommand(1);
  app.set_version_flag("--version", st_version());

  int p = 0, q = 0, r = 0;
  std::string word, word_a, word_b;
  std::string json_path, svg_path;
  std::string seed_text = "auto";
  int max_index = 9;
  st_options opt = st_default_options();

  auto add_signature = [&](CLI::App* cmd) {
    cmd->add_option("--p", p, "first rotation order")->required();
    cmd->add_option("--q", q, "second rotation order")->required();
    cmd->add_option("--r", r, "third rotation order")->required();
  };

  CLI::App* analyze = app.add_subcommand(
      "analyze", "run the full pipeline for one signature and report every check");
  add_signature(analyze);
  analyze->add_option("--radius", opt.radius,
                      "hyperbolic clip radius (default: per-signature value)");
  analyze->add_option("--max-wordlen", opt.max_wordlen,
                      "family stabilization word-length cap (default: scales with radius)");
  analyze->add_option("--json", json_path, "write the JSON report here");
  analyze->add_option("--svg", svg_path, "write an SVG render here");
  analyze->add_option("--tol-point", opt.tol_point, "point coincidence tolerance")
      ->default_val(1e-7);
  analyze->add_option("--tol-matrix", opt.tol_matrix, "matrix coincidence tolerance")
      ->default_val(1e-9);
  analyze->add_option("--seed-tile", seed_text,
                      "growth seed: 'auto' or a complete-tile face id")
      ->default_val("auto");
  analyze->add_option("--ball-cap", opt.ball_cap,
                      "line enumeration cap (guards memory at large radii)");

  CLI::App* order = app.add_subcommand("order", "order and trace of a word in the group");
  add_signature(order);
  order->add_option("--word", word, "word over x, y, z, e.g. \"x y^-2\"")->required();

  CLI::App* witness = app.add_subcommand(
      "witness", "search for an infinite-order product of two words");
  add_signature(witness);
  witness->add_option("--a", word_a, "first word")->required();
  witness->add_option("--b", word_b, "second word")->required();

  CLI::App* grid = app.add_subcommand(
      "grid", "algebra battery over all covered signatures up to an index bound");
  grid->add_option("--max-index", max_index, "largest rotation order")->default_val(9);
  grid->add_option("--json", json_path, "write the JSON table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ST_USAGE_ERROR;
  }

  if (analyze->parsed()) {
    if (!parse_seed(seed_text, &opt.seed_tile)) {
      std::fprintf(stderr, "error: --seed-tile wants 'auto' or a face id, got '%s'\n",
                   seed_text.c_str());
      return ST_USAGE_ERROR;
    }
    return run_analyze(p, q, r, opt, json_path, svg_path);
  }
  if (order->parsed()) return run_order(p, q, r, word);
  if (witness->parsed()) return run_witness(p, q, r, word_a, word_b);
  return run_grid(max_index, json_path);
}
