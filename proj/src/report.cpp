#include "stiler/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace stiler {

namespace {

using ordered_json = nlohmann::ordered_json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double default_radius(const RoleAssignment& roles) {
  const std::array<int, 3> key{roles.p, roles.q, roles.r};
  static const std::map<std::array<int, 3>, double> table = {
      {{3, 4, 5}, 6.0}, {{3, 7, 2}, 7.5}, {{3, 8, 2}, 6.5}, {{4, 5, 2}, 6.5},
      {{4, 5, 6}, 7.5}, {{4, 7, 2}, 6.5}, {{5, 5, 5}, 6.5},
  };
  const auto it = table.find(key);
  return it != table.end() ? it->second : 6.5;
}

int default_max_wordlen(double radius) {
  return std::max(14, static_cast<int>(std::ceil(4.0 * radius)));
}

AnalysisBundle analyze_full(int p, int q, int r, const AnalysisOptions& opt) {
  const auto t_total = std::chrono::steady_clock::now();
  const RoleAssignment roles = role_normalize(classify_signature(p, q, r));
  const double R = opt.radius > 0.0 ? opt.radius : default_radius(roles);
  const int N_max = opt.max_wordlen > 0 ? opt.max_wordlen : default_max_wordlen(R);

  const TriangleGroup G = build_generators(roles.role_signature());
  const Word w = scott_word(G.sig);
  const Isometry g = evaluate_word(G, w);
  const IsometryClass cls = classify_isometry(g, opt.tol);
  const Geodesic axis = scott_axis(G, w);

  AnalysisReport rep;
  rep.signature.p = roles.p;
  rep.signature.q = roles.q;
  rep.signature.r = roles.r;
  rep.signature.geometry = geometry_name(G.sig.geometry);
  rep.signature.case_label = "case" + std::to_string(roles.case_label);
  rep.scott.word = w.str();
  rep.scott.trace = g.trace();
  rep.scott.cls = kind_name(cls.kind);
  rep.scott.translation_length = cls.translation_length;

  auto t = std::chrono::steady_clock::now();
  const Point center{0.0, 1.0};
  const LineFamily fam = build_line_family(G, axis, R, N_max, center, opt.ball_cap, opt.tol);
  rep.timings["family"] = seconds_since(t);
  rep.family.num_lines = static_cast<int>(fam.lines.size());
  rep.family.word_length = fam.word_length;
  rep.family.stabilized = fam.stabilized;
  rep.family.region_radius = fam.region_radius;
  rep.warnings = fam.warnings;

  t = std::chrono::steady_clock::now();
  Arrangement A = build_arrangement(fam, opt.tol);
  rep.timings["arrangement"] = seconds_since(t);

  t = std::chrono::steady_clock::now();
  const AxiomReport ax = verify_crossing_axioms(A, opt.tol);
  rep.axioms.triple_points = 0;  // construction throws on any concurrence
  rep.axioms.vertex_degree_ok = ax.vertex_degree_ok;
  rep.axioms.euler_ok = ax.euler_ok;
  rep.axioms.max_pair_intersections = ax.max_pair_intersections;
  rep.axioms.separation_ok = ax.separation_ok;
  rep.axioms.min_vertex_separation = ax.min_vertex_separation;

  const ConeIncidenceReport cone =
      cone_point_incidence(G, fam.lines, center, R, opt.tol, opt.cone_separation);
  rep.cone_incidence.X = incidence_name(cone.X.status);
  rep.cone_incidence.Y = incidence_name(cone.Y.status);
  rep.cone_incidence.Z = incidence_name(cone.Z.status);
  rep.cone_incidence.min_distance_x = cone.X.min_distance;
  rep.cone_incidence.min_distance_y = cone.Y.min_distance;
  rep.cone_incidence.min_distance_z = cone.Z.min_distance;
  for (const auto& [name, st] :
       {std::pair{"X", cone.X.status}, {"Y", cone.Y.status}, {"Z", cone.Z.status}})
    if (st == IncidenceStatus::Ambiguous)
      rep.warnings.push_back(std::string("ConeIncidenceAmbiguous: orbit ") + name);

  rep.census.observed = tile_census(A);
  rep.census.expected = expected_census(roles);
  {
    std::vector<int> support;
    for (const auto& [sides, count] : rep.census.observed)
      if (count > 0) support.push_back(sides);
    if (roles.case_label == 1) {
      rep.census.match = !support.empty() &&
                         std::includes(rep.census.expected.begin(), rep.census.expected.end(),
                                       support.begin(), support.end());
    } else {
      rep.census.match = support == rep.census.expected;
    }
  }
  const bool triangles = rep.census.observed.count(3) > 0;

  const AdjacencyReport adj = adjacency_observations(A, roles);
  rep.adjacency.obs2_ok = adj.obs2_ok;
  rep.adjacency.obs3_ok = adj.obs3_ok;
  rep.adjacency.case3_edge_rule_ok = adj.case3_edge_rule_ok;

  const IntersectionGraph graph = intersection_graph(fam, opt.tol);
  rep.planes.k4_pass = check_k_plane(graph, 4).pass;
  rep.planes.k3_pass = check_k_plane(graph, 3).pass == !triangles;

  const LocalChecks local = local_degree_and_clique_checks(A, graph, opt.tol);
  rep.local.seed_degree_ok = local.seed_degree_ok;
  rep.local.max_seed_degree = local.max_seed_degree;
  rep.local.cliques_bound_triangles = local.cliques_bound_triangles;
  rep.timings["verification"] = seconds_since(t);

  t = std::chrono::steady_clock::now();
  GrowthResult growth = polygon_growth(A, opt.growth_steps, opt.seed_tile, opt.tol);
  rep.timings["growth"] = seconds_since(t);
  rep.growth.generations = growth.reached;
  rep.growth.fixups = growth.fixup_total;
  rep.growth.all_convex = std::all_of(growth.states.begin(), growth.states.end(),
                                      [](const GrowthState& s) { return s.convex; });
  rep.growth.fixups_ok = triangles || growth.fixup_total == 0;
  rep.growth.exhausted = growth.exhausted;

  t = std::chrono::steady_clock::now();
  Coloring coloring = greedy_color(A, growth.generation, graph);
  rep.coloring.colors_used = coloring.colors_used;
  rep.coloring.bound = roles.color_bound;
  rep.coloring.proper = verify_coloring(A, coloring, graph).pass;
  rep.coloring.max_backward_conflicts = coloring.max_backward_conflicts;
  rep.coloring.within_bound = coloring.colors_used <= roles.color_bound &&
                              coloring.max_backward_conflicts < roles.color_bound;
  rep.coloring.colors_used_total = coloring.colors_used_total;
  rep.coloring.unassigned_lines = coloring.unassigned_lines;
  rep.timings["coloring"] = seconds_since(t);
  rep.timings["total"] = seconds_since(t_total);

  return AnalysisBundle{std::move(rep), roles,           G,
                        std::move(A),   std::move(growth), std::move(coloring)};
}

AnalysisReport analyze(int p, int q, int r, const AnalysisOptions& opt) {
  return analyze_full(p, q, r, opt).report;
}

bool AnalysisReport::operator==(const AnalysisReport& o) const {
  return schema_version == o.schema_version && signature.p == o.signature.p &&
         signature.q == o.signature.q && signature.r == o.signature.r &&
         signature.geometry == o.signature.geometry &&
         signature.case_label == o.signature.case_label && scott.word == o.scott.word &&
         scott.trace == o.scott.trace && scott.cls == o.scott.cls &&
         scott.translation_length == o.scott.translation_length &&
         family.num_lines == o.family.num_lines && family.word_length == o.family.word_length &&
         family.stabilized == o.family.stabilized &&
         family.region_radius == o.family.region_radius &&
         axioms.triple_points == o.axioms.triple_points &&
         axioms.vertex_degree_ok == o.axioms.vertex_degree_ok &&
         axioms.euler_ok == o.axioms.euler_ok &&
         axioms.max_pair_intersections == o.axioms.max_pair_intersections &&
         axioms.separation_ok == o.axioms.separation_ok &&
         axioms.min_vertex_separation == o.axioms.min_vertex_separation &&
         cone_incidence.X == o.cone_incidence.X && cone_incidence.Y == o.cone_incidence.Y &&
         cone_incidence.Z == o.cone_incidence.Z &&
         cone_incidence.min_distance_x == o.cone_incidence.min_distance_x &&
         cone_incidence.min_distance_y == o.cone_incidence.min_distance_y &&
         cone_incidence.min_distance_z == o.cone_incidence.min_distance_z &&
         census.observed == o.census.observed && census.expected == o.census.expected &&
         census.match == o.census.match && adjacency.obs2_ok == o.adjacency.obs2_ok &&
         adjacency.obs3_ok == o.adjacency.obs3_ok &&
         adjacency.case3_edge_rule_ok == o.adjacency.case3_edge_rule_ok &&
         planes.k4_pass == o.planes.k4_pass && planes.k3_pass == o.planes.k3_pass &&
         local.seed_degree_ok == o.local.seed_degree_ok &&
         local.max_seed_degree == o.local.max_seed_degree &&
         local.cliques_bound_triangles == o.local.cliques_bound_triangles &&
         coloring.colors_used == o.coloring.colors_used && coloring.bound == o.coloring.bound &&
         coloring.proper == o.coloring.proper &&
         coloring.max_backward_conflicts == o.coloring.max_backward_conflicts &&
         coloring.within_bound == o.coloring.within_bound &&
         coloring.colors_used_total == o.coloring.colors_used_total &&
         coloring.unassigned_lines == o.coloring.unassigned_lines &&
         growth.generations == o.growth.generations && growth.fixups == o.growth.fixups &&
         growth.all_convex == o.growth.all_convex && growth.fixups_ok == o.growth.fixups_ok &&
         growth.exhausted == o.growth.exhausted && timings == o.timings &&
         warnings == o.warnings;
}

std::string report_to_json(const AnalysisReport& rep) {
  ordered_json j;
  j["schema_version"] = rep.schema_version;
  j["signature"] = {{"p", rep.signature.p},
                    {"q", rep.signature.q},
                    {"r", rep.signature.r},
                    {"geometry", rep.signature.geometry},
                    {"case_label", rep.signature.case_label}};
  j["scott"] = {{"word", rep.scott.word},
                {"trace", rep.scott.trace},
                {"class", rep.scott.cls},
                {"translation_length", rep.scott.translation_length}};
  j["family"] = {{"num_lines", rep.family.num_lines},
                 {"word_length", rep.family.word_length},
                 {"stabilized", rep.family.stabilized},
                 {"region_radius", rep.family.region_radius}};
  j["axioms"] = {{"triple_points", rep.axioms.triple_points},
                 {"vertex_degree_ok", rep.axioms.vertex_degree_ok},
                 {"euler_ok", rep.axioms.euler_ok},
                 {"max_pair_intersections", rep.axioms.max_pair_intersections},
                 {"separation_ok", rep.axioms.separation_ok},
                 {"min_vertex_separation", rep.axioms.min_vertex_separation}};
  j["cone_incidence"] = {{"X", rep.cone_incidence.X},
                         {"Y", rep.cone_incidence.Y},
                         {"Z", rep.cone_incidence.Z},
                         {"min_distance_x", rep.cone_incidence.min_distance_x},
                         {"min_distance_y", rep.cone_incidence.min_distance_y},
                         {"min_distance_z", rep.cone_incidence.min_distance_z}};
  ordered_json observed = ordered_json::object();
  for (const auto& [sides, count] : rep.census.observed)
    observed[std::to_string(sides)] = count;
  j["census"] = {
      {"observed", observed}, {"expected", rep.census.expected}, {"match", rep.census.match}};
  j["adjacency"] = {{"obs2_ok", rep.adjacency.obs2_ok},
                    {"obs3_ok", rep.adjacency.obs3_ok},
                    {"case3_edge_rule_ok", rep.adjacency.case3_edge_rule_ok}};
  j["planes"] = {{"k4_pass", rep.planes.k4_pass}, {"k3_pass", rep.planes.k3_pass}};
  j["local"] = {{"seed_degree_ok", rep.local.seed_degree_ok},
                {"max_seed_degree", rep.local.max_seed_degree},
                {"cliques_bound_triangles", rep.local.cliques_bound_triangles}};
  j["coloring"] = {{"colors_used", rep.coloring.colors_used},
                   {"bound", rep.coloring.bound},
                   {"proper", rep.coloring.proper},
                   {"max_backward_conflicts", rep.coloring.max_backward_conflicts},
                   {"within_bound", rep.coloring.within_bound},
                   {"colors_used_total", rep.coloring.colors_used_total},
                   {"unassigned_lines", rep.coloring.unassigned_lines}};
  j["growth"] = {{"generations", rep.growth.generations},
                 {"fixups", rep.growth.fixups},
                 {"all_convex", rep.growth.all_convex},
                 {"fixups_ok", rep.growth.fixups_ok},
                 {"exhausted", rep.growth.exhausted}};
  j["timings"] = rep.timings;
  j["warnings"] = rep.warnings;
  return j.dump(2) + "\n";
}

AnalysisReport report_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  AnalysisReport rep;
  rep.schema_version = j.at("schema_version").get<int>();
  const auto& sig = j.at("signature");
  rep.signature.p = sig.at("p").get<int>();
  rep.signature.q = sig.at("q").get<int>();
  rep.signature.r = sig.at("r").get<int>();
  rep.signature.geometry = sig.at("geometry").get<std::string>();
  rep.signature.case_label = sig.at("case_label").get<std::string>();
  const auto& sc = j.at("scott");
  rep.scott.word = sc.at("word").get<std::string>();
  rep.scott.trace = sc.at("trace").get<double>();
  rep.scott.cls = sc.at("class").get<std::string>();
  rep.scott.translation_length = sc.at("translation_length").get<double>();
  const auto& fam = j.at("family");
  rep.family.num_lines = fam.at("num_lines").get<int>();
  rep.family.word_length = fam.at("word_length").get<int>();
  rep.family.stabilized = fam.at("stabilized").get<bool>();
  rep.family.region_radius = fam.at("region_radius").get<double>();
  const auto& ax = j.at("axioms");
  rep.axioms.triple_points = ax.at("triple_points").get<int>();
  rep.axioms.vertex_degree_ok = ax.at("vertex_degree_ok").get<bool>();
  rep.axioms.euler_ok = ax.at("euler_ok").get<bool>();
  rep.axioms.max_pair_intersections = ax.at("max_pair_intersections").get<int>();
  rep.axioms.separation_ok = ax.at("separation_ok").get<bool>();
  rep.axioms.min_vertex_separation = ax.at("min_vertex_separation").get<double>();
  const auto& cone = j.at("cone_incidence");
  rep.cone_incidence.X = cone.at("X").get<std::string>();
  rep.cone_incidence.Y = cone.at("Y").get<std::string>();
  rep.cone_incidence.Z = cone.at("Z").get<std::string>();
  rep.cone_incidence.min_distance_x = cone.at("min_distance_x").get<double>();
  rep.cone_incidence.min_distance_y = cone.at("min_distance_y").get<double>();
  rep.cone_incidence.min_distance_z = cone.at("min_distance_z").get<double>();
  const auto& cen = j.at("census");
  for (const auto& [key, value] : cen.at("observed").items())
    rep.census.observed[std::stoi(key)] = value.get<int>();
  rep.census.expected = cen.at("expected").get<std::vector<int>>();
  rep.census.match = cen.at("match").get<bool>();
  const auto& adj = j.at("adjacency");
  rep.adjacency.obs2_ok = adj.at("obs2_ok").get<bool>();
  rep.adjacency.obs3_ok = adj.at("obs3_ok").get<bool>();
  rep.adjacency.case3_edge_rule_ok = adj.at("case3_edge_rule_ok").get<bool>();
  const auto& pl = j.at("planes");
  rep.planes.k4_pass = pl.at("k4_pass").get<bool>();
  rep.planes.k3_pass = pl.at("k3_pass").get<bool>();
  const auto& lo = j.at("local");
  rep.local.seed_degree_ok = lo.at("seed_degree_ok").get<bool>();
  rep.local.max_seed_degree = lo.at("max_seed_degree").get<int>();
  rep.local.cliques_bound_triangles = lo.at("cliques_bound_triangles").get<bool>();
  const auto& col = j.at("coloring");
  rep.coloring.colors_used = col.at("colors_used").get<int>();
  rep.coloring.bound = col.at("bound").get<int>();
  rep.coloring.proper = col.at("proper").get<bool>();
  rep.coloring.max_backward_conflicts = col.at("max_backward_conflicts").get<int>();
  rep.coloring.within_bound = col.at("within_bound").get<bool>();
  rep.coloring.colors_used_total = col.at("colors_used_total").get<int>();
  rep.coloring.unassigned_lines = col.at("unassigned_lines").get<int>();
  const auto& gr = j.at("growth");
  rep.growth.generations = gr.at("generations").get<int>();
  rep.growth.fixups = gr.at("fixups").get<int>();
  rep.growth.all_convex = gr.at("all_convex").get<bool>();
  rep.growth.fixups_ok = gr.at("fixups_ok").get<bool>();
  rep.growth.exhausted = gr.at("exhausted").get<bool>();
  rep.timings = j.at("timings").get<std::map<std::string, double>>();
  rep.warnings = j.at("warnings").get<std::vector<std::string>>();
  return rep;
}

int report_exit_code(const AnalysisReport& rep) {
  const bool checks_ok =
      rep.axioms.triple_points == 0 && rep.axioms.vertex_degree_ok && rep.axioms.euler_ok &&
      rep.axioms.separation_ok && rep.census.match && rep.adjacency.obs2_ok &&
      rep.adjacency.obs3_ok && rep.adjacency.case3_edge_rule_ok && rep.planes.k4_pass &&
      rep.planes.k3_pass && rep.local.seed_degree_ok && rep.local.cliques_bound_triangles &&
      rep.coloring.proper && rep.coloring.within_bound && rep.growth.all_convex &&
      rep.growth.fixups_ok;
  const bool stab_warning =
      std::any_of(rep.warnings.begin(), rep.warnings.end(), [](const std::string& w) {
        return w.find("NotStabilized") != std::string::npos;
      });
  return checks_ok && !stab_warning ? 0 : 1;
}

namespace {

Isometry isometry_pow(const Isometry& g, int n) {
  Isometry acc = Isometry::identity();
  for (int i = 0; i < n; ++i) acc = acc * g;
  return acc;
}

}  // namespace

std::string algebra_grid_json(int max_index, bool* all_pass) {
  if (max_index < 3)
    throw Error(ErrorCode::InvalidArgument, "grid needs a maximum index of at least 3");
  ordered_json rows = ordered_json::array();
  bool every = true;
  int count = 0;
  for (int a = 2; a <= max_index; ++a)
    for (int b = a; b <= max_index; ++b)
      for (int c = b; c <= max_index; ++c) {
        const Signature sig = classify_signature(a, b, c);
        if (sig.geometry != GeometryType::Hyperbolic) continue;
        const RoleAssignment roles = role_normalize(sig);
        const TriangleGroup G = build_generators(roles.role_signature());

        double rel_err = 0.0;
        rel_err = std::max(rel_err, matrix_distance(isometry_pow(G.x, roles.p),
                                                    Isometry::identity()));
        rel_err = std::max(rel_err, matrix_distance(isometry_pow(G.y, roles.q),
                                                    Isometry::identity()));
        rel_err = std::max(rel_err, matrix_distance(isometry_pow(G.z, roles.r),
                                                    Isometry::identity()));
        rel_err = std::max(rel_err, matrix_distance(G.x * G.y * G.z, Isometry::identity()));
        const bool relations_ok = rel_err <= 1e-9;

        const Word w = scott_word(G.sig);
        const Isometry g = evaluate_word(G, w);
        const double trace = g.trace();
        const bool trace_ok = std::abs(trace) > 2.0 + 1e-6;
        const bool infinite =
            !element_order(G, g, default_order_cap(G.sig)).has_value();

        const double oracle = scott_trace_identity(roles);
        const double oracle_delta = std::abs(std::abs(trace) - std::abs(oracle));
        const bool oracle_ok = oracle_delta <= 1e-9;

        const bool pass = relations_ok && trace_ok && infinite && oracle_ok;
        every = every && pass;
        ++count;
        rows.push_back({{"p", roles.p},
                        {"q", roles.q},
                        {"r", roles.r},
                        {"case_label", "case" + std::to_string(roles.case_label)},
                        {"word", w.str()},
                        {"trace", trace},
                        {"trace_ok", trace_ok},
                        {"relations_max_err", rel_err},
                        {"relations_ok", relations_ok},
                        {"infinite_order", infinite},
                        {"oracle_trace", oracle},
                        {"oracle_delta", oracle_delta},
                        {"oracle_ok", oracle_ok},
                        {"pass", pass}});
      }
  ordered_json j;
  j["schema_version"] = 1;
  j["max_index"] = max_index;
  j["count"] = count;
  j["all_pass"] = every;
  j["signatures"] = std::move(rows);
  if (all_pass) *all_pass = every;
  return j.dump(2) + "\n";
}

std::string error_to_json(const Error& e) {
  ordered_json j;
  j["schema_version"] = 1;
  j["error"] = {{"code", error_code_name(e.code())}, {"message", e.what()}};
  return j.dump(2) + "\n";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidIndex:
    case ErrorCode::WordSyntax:
    case ErrorCode::NonHyperbolicSignature:
    case ErrorCode::UncoveredSignature:
    case ErrorCode::OrderExceedsCap:
    case ErrorCode::BallTooLarge:
    case ErrorCode::NoCompleteTiles:
    case ErrorCode::NoWitnessFound:
    case ErrorCode::Io:
      return 2;
    case ErrorCode::NonHyperbolicElement:
    case ErrorCode::IdenticalGeodesics:
    case ErrorCode::PointNotOnBoth:
    case ErrorCode::TriplePointDetected:
    case ErrorCode::NonConvexUnfixable:
    case ErrorCode::NotADisk:
    case ErrorCode::ConsistencyFailure:
      return 3;
  }
  return 3;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write to " + tmp + " failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::Io, "rename to " + path + " failed");
  }
}

}  // namespace stiler
