#include "scott_tiler.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "stiler/report.hpp"
#include "stiler/svg.hpp"
#include "stiler/trigroup.hpp"

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_error_json;

void clear_error() {
  g_last_error.clear();
  g_last_error_json.clear();
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

st_status status_of(const stiler::Error& e) {
  g_last_error = e.what();
  g_last_error_json = stiler::error_to_json(e);
  return stiler::exit_code_for(e.code()) == 2 ? ST_USAGE_ERROR : ST_INTERNAL_ERROR;
}

st_status status_of(const std::exception& e) {
  g_last_error = e.what();
  g_last_error_json =
      stiler::error_to_json(stiler::Error(stiler::ErrorCode::ConsistencyFailure, e.what()));
  return ST_INTERNAL_ERROR;
}

stiler::AnalysisOptions to_options(const st_options* opt) {
  stiler::AnalysisOptions o;
  if (opt == nullptr) return o;
  o.radius = opt->radius;
  o.max_wordlen = opt->max_wordlen;
  if (opt->tol_point > 0.0) o.tol.point = opt->tol_point;
  if (opt->tol_matrix > 0.0) o.tol.matrix = opt->tol_matrix;
  if (opt->ball_cap > 0) o.ball_cap = opt->ball_cap;
  if (opt->seed_tile >= 0) o.seed_tile = opt->seed_tile;
  return o;
}

stiler::RenderSpec to_render_spec(const st_render_options* r) {
  stiler::RenderSpec s;
  if (r == nullptr) return s;
  if (r->width > 0) s.width = r->width;
  if (r->height > 0) s.height = r->height;
  s.toggles.lines = r->show_lines != 0;
  s.toggles.vertices = r->show_vertices != 0;
  s.toggles.tiles = r->show_tiles != 0;
  s.toggles.cone_points = r->show_cone_points != 0;
  s.toggles.growth_polygon = r->show_growth_polygon != 0;
  return s;
}

// The word subcommands act on the rotations in the order the caller gave
// them: x has order p, y order q, z order r.  Role permutation is an
// internal concern of the analysis pipeline.
stiler::TriangleGroup group_as_given(int p, int q, int r) {
  return stiler::build_generators(stiler::classify_signature(p, q, r));
}

}  // namespace

struct st_analysis {
  stiler::AnalysisBundle bundle;
  std::string json_cache;
  std::string svg_cache;
};

extern "C" {

const char* st_version(void) { return "1.0.0"; }

const char* st_last_error(void) { return g_last_error.c_str(); }

const char* st_last_error_json(void) { return g_last_error_json.c_str(); }

void st_free(char* s) { std::free(s); }

st_options st_default_options(void) {
  st_options o;
  o.radius = 0.0;
  o.max_wordlen = 0;
  o.tol_point = 1e-7;
  o.tol_matrix = 1e-9;
  o.ball_cap = 200000;
  o.seed_tile = -1;
  return o;
}

st_render_options st_default_render_options(void) {
  st_render_options r;
  r.width = 900;
  r.height = 900;
  r.show_lines = 1;
  r.show_vertices = 0;
  r.show_tiles = 1;
  r.show_cone_points = 1;
  r.show_growth_polygon = 0;
  return r;
}

st_status st_analyze(int p, int q, int r, const st_options* opt, st_analysis** out) {
  if (out == nullptr) {
    g_last_error = "InvalidArgument: output handle is null";
    return ST_USAGE_ERROR;
  }
  *out = nullptr;
  try {
    auto* a = new st_analysis{stiler::analyze_full(p, q, r, to_options(opt)), {}, {}};
    *out = a;
    clear_error();
    return ST_OK;
  } catch (const stiler::Error& e) {
    return status_of(e);
  } catch (const std::exception& e) {
    return status_of(e);
  }
}

void st_analysis_free(st_analysis* a) { delete a; }

const char* st_analysis_json(st_analysis* a) {
  if (a == nullptr) return nullptr;
  try {
    if (a->json_cache.empty()) a->json_cache = stiler::report_to_json(a->bundle.report);
    return a->json_cache.c_str();
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

int st_analysis_exit_code(const st_analysis* a) {
  if (a == nullptr) return ST_USAGE_ERROR;
  return stiler::report_exit_code(a->bundle.report);
}

const char* st_analysis_svg(st_analysis* a, const st_render_options* ropt) {
  if (a == nullptr) return nullptr;
  try {
    a->svg_cache = stiler::render_svg(a->bundle.arrangement, &a->bundle.coloring,
                                      &a->bundle.growth, to_render_spec(ropt));
    return a->svg_cache.c_str();
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

st_status st_analysis_write_json(st_analysis* a, const char* path) {
  if (a == nullptr || path == nullptr) {
    g_last_error = "InvalidArgument: null handle or path";
    return ST_USAGE_ERROR;
  }
  try {
    if (a->json_cache.empty()) a->json_cache = stiler::report_to_json(a->bundle.report);
    stiler::write_file_atomic(path, a->json_cache);
    clear_error();
    return ST_OK;
  } catch (const stiler::Error& e) {
    return status_of(e);
  } catch (const std::exception& e) {
    return status_of(e);
  }
}

st_status st_analysis_write_svg(st_analysis* a, const char* path,
                                const st_render_options* ropt) {
  if (a == nullptr || path == nullptr) {
    g_last_error = "InvalidArgument: null handle or path";
    return ST_USAGE_ERROR;
  }
  try {
    stiler::render_svg_file(path, a->bundle.arrangement, &a->bundle.coloring,
                            &a->bundle.growth, to_render_spec(ropt));
    clear_error();
    return ST_OK;
  } catch (const stiler::Error& e) {
    return status_of(e);
  } catch (const std::exception& e) {
    return status_of(e);
  }
}

st_status st_word_order(int p, int q, int r, const char* word, long* order, double* trace) {
  try {
    if (word == nullptr)
      throw stiler::Error(stiler::ErrorCode::InvalidArgument, "word is null");
    const auto G = group_as_given(p, q, r);
    const auto w = stiler::Word::parse(word);
    const auto g = stiler::evaluate_word(G, w);
    const auto n = stiler::element_order(G, g, stiler::default_order_cap(G.sig));
    if (trace != nullptr) *trace = g.trace();
    if (order != nullptr) *order = n.has_value() ? *n : -1;
    clear_error();
    return ST_OK;
  } catch (const stiler::Error& e) {
    return status_of(e);
  } catch (const std::exception& e) {
    return status_of(e);
  }
}

st_status st_witness_search(int p, int q, int r, const char* a, const char* b,
                            char** witness, double* trace) {
  if (witness != nullptr) *witness = nullptr;
  try {
    if (a == nullptr || b == nullptr)
      throw stiler::Error(stiler::ErrorCode::InvalidArgument, "word is null");
    const auto G = group_as_given(p, q, r);
    const auto wa = stiler::Word::parse(a);
    const auto wb = stiler::Word::parse(b);
    const auto w = stiler::lemma25_search(G, wa, wb, stiler::default_order_cap(G.sig));
    if (trace != nullptr) *trace = stiler::evaluate_word(G, w).trace();
    if (witness != nullptr) {
      *witness = dup_string(w.str());
      if (*witness == nullptr)
        throw stiler::Error(stiler::ErrorCode::Io, "allocation failed");
    }
    clear_error();
    return ST_OK;
  } catch (const stiler::Error& e) {
    return status_of(e);
  } catch (const std::exception& e) {
    return status_of(e);
  }
}

st_status st_write_text(const char* path, const char* text) {
  try {
    if (path == nullptr || text == nullptr)
      throw stiler::Error(stiler::ErrorCode::InvalidArgument, "null path or text");
    stiler::write_file_atomic(path, text);
    clear_error();
    return ST_OK;
  } catch (const stiler::Error& e) {
    return status_of(e);
  } catch (const std::exception& e) {
    return status_of(e);
  }
}

st_status st_grid_json(int max_index, char** json, int* all_pass) {
  if (json != nullptr) *json = nullptr;
  try {
    if (max_index < 2)
      throw stiler::Error(stiler::ErrorCode::InvalidArgument,
                          "max index must be at least 2, got " + std::to_string(max_index));
    bool ok = false;
    const std::string text = stiler::algebra_grid_json(max_index, &ok);
    if (json != nullptr) {
      *json = dup_string(text);
      if (*json == nullptr)
        throw stiler::Error(stiler::ErrorCode::Io, "allocation failed");
    }
    if (all_pass != nullptr) *all_pass = ok ? 1 : 0;
    clear_error();
    return ST_OK;
  } catch (const stiler::Error& e) {
    return status_of(e);
  } catch (const std::exception& e) {
    return status_of(e);
  }
}

}  // extern "C"
