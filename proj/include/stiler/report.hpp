#pragma once

// One-call pipeline: generators -> distinguished axis -> line family ->
// arrangement -> verification scans -> polygon growth -> coloring, with
// every check aggregated into a flat report that serializes to JSON with
// stable field names (schema_version 1).

#include <map>
#include <string>
#include <vector>

#include "stiler/coloring.hpp"

namespace stiler {

struct AnalysisOptions {
  // <= 0 picks the per-signature default that provides a usable census
  // (complete tiles exist well inside the region).
  double radius = 0.0;
  // <= 0 scales the enumeration depth cap with the radius; an explicit cap
  // is honored verbatim and may end in a NotStabilized warning.
  int max_wordlen = 0;
  std::size_t ball_cap = 200000;
  double cone_separation = 1e-3;  // separated/ambiguous threshold
  int growth_steps = 64;          // growth exhausts the trusted sub-disk first
  int seed_tile = -1;             // growth seed face id; -1 picks the nearest tile
  Tolerances tol{};
};

// Region radius used when AnalysisOptions.radius is unset.
double default_radius(const RoleAssignment& roles);
// Enumeration depth cap used when AnalysisOptions.max_wordlen is unset.
int default_max_wordlen(double radius);

struct AnalysisReport {
  int schema_version = 1;
  struct {
    int p = 0, q = 0, r = 0;
    std::string geometry;
    std::string case_label;  // "case1" | "case2" | "case3"
  } signature;
  struct {
    std::string word;
    double trace = 0.0;
    std::string cls;  // JSON key "class"
    double translation_length = 0.0;
  } scott;
  struct {
    int num_lines = 0;
    int word_length = 0;
    bool stabilized = false;
    double region_radius = 0.0;
  } family;
  struct {
    int triple_points = 0;  // nonzero never survives construction
    bool vertex_degree_ok = false;
    bool euler_ok = false;
    int max_pair_intersections = 0;
    bool separation_ok = false;
    double min_vertex_separation = 0.0;
  } axioms;
  struct {
    std::string X, Y, Z;  // "incident" | "separated" | "ambiguous"
    double min_distance_x = 0.0, min_distance_y = 0.0, min_distance_z = 0.0;
  } cone_incidence;
  struct {
    std::map<int, int> observed;  // side count -> complete tiles
    std::vector<int> expected;
    bool match = false;  // subset rule in case 1, exact support otherwise
  } census;
  struct {
    bool obs2_ok = false;
    bool obs3_ok = false;
    bool case3_edge_rule_ok = false;
  } adjacency;
  struct {
    bool k4_pass = false;
    bool k3_pass = false;  // outcome equals the census prediction
  } planes;
  struct {
    bool seed_degree_ok = false;
    int max_seed_degree = 0;
    bool cliques_bound_triangles = false;
  } local;
  struct {
    int colors_used = 0;
    int bound = 0;  // 5 or 7 by case
    bool proper = false;
    int max_backward_conflicts = 0;
    bool within_bound = false;  // colors_used <= bound and conflicts < bound
    int colors_used_total = 0;
    int unassigned_lines = 0;
  } coloring;
  struct {
    int generations = 0;
    int fixups = 0;
    bool all_convex = false;
    bool fixups_ok = false;  // zero fix-ups whenever no triangle tiles exist
    bool exhausted = false;
  } growth;
  std::map<std::string, double> timings;  // stage -> seconds
  std::vector<std::string> warnings;

  bool operator==(const AnalysisReport& o) const;
};

// Everything analyze computed, for rendering and further queries.
struct AnalysisBundle {
  AnalysisReport report;
  RoleAssignment roles;
  TriangleGroup group;
  Arrangement arrangement;
  GrowthResult growth;
  Coloring coloring;
};

// Throws Error (NonHyperbolicSignature, UncoveredSignature, ...) when the
// pipeline cannot run; every other outcome lands in the report.
AnalysisBundle analyze_full(int p, int q, int r, const AnalysisOptions& opt = {});
AnalysisReport analyze(int p, int q, int r, const AnalysisOptions& opt = {});

// Canonical serialization: fixed key order, two-space indent, trailing
// newline.  parse(emit(r)) == r including timings.
std::string report_to_json(const AnalysisReport& rep);
AnalysisReport report_from_json(const std::string& text);

// 0 when every boolean check holds and no NotStabilized warning is present,
// 1 otherwise.
int report_exit_code(const AnalysisReport& rep);

// Algebra battery over every covered hyperbolic signature with sorted
// indices <= max_index: group relations hold, the distinguished element has
// |trace| > 2 + 1e-6 and infinite order, and the matrix trace agrees with
// the two-rotation identity within 1e-9.  Returns a JSON document; all_pass
// (optional out) reports whether every row passed.
std::string algebra_grid_json(int max_index, bool* all_pass = nullptr);

// Machine-readable error object (schema_version + error.code/message).
std::string error_to_json(const Error& e);
// Usage/configuration errors exit 2, internal consistency failures exit 3.
int exit_code_for(ErrorCode code);

// Whole-file atomic write (temp file + rename); Io errors are thrown.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace stiler
