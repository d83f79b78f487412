#include "cproj/io.hpp"

#include "cproj/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace capprox {

namespace {

using json = nlohmann::json;

json vec_json(const Vec& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

json vecs_json(const std::vector<Vec>& vs) {
  json j = json::array();
  for (const auto& v : vs) j.push_back(vec_json(v));
  return j;
}

Vec json_vec(const json& j) {
  if (!j.is_array()) throw ParseError("expected a numeric array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError("non-numeric vector entry");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

std::vector<Vec> json_vecs(const json& j, int dim) {
  if (!j.is_array()) throw ParseError("expected an array of vectors");
  std::vector<Vec> out;
  for (const auto& e : j) {
    out.push_back(json_vec(e));
    if (dim >= 0 && out.back().size() != dim) throw DimensionMismatch("vector of wrong length");
  }
  return out;
}

json halfspaces_json(const PolyhedronH& H) {
  json j = json::array();
  for (const auto& h : H.halfspaces) j.push_back({{"w", vec_json(h.w)}, {"alpha", h.alpha}});
  return j;
}

PolyhedronH json_h(const json& j, int dim) {
  PolyhedronH H;
  H.dim = dim;
  for (const auto& e : j) {
    Halfspace h{json_vec(e.at("w")), e.at("alpha").get<double>()};
    if (h.w.size() != dim) throw DimensionMismatch("halfspace of wrong length");
    H.halfspaces.push_back(std::move(h));
  }
  return H;
}

std::string source_name(CutSource s) {
  switch (s) {
    case CutSource::WeightedSum: return "weighted_sum";
    case CutSource::PascolettiSerafini: return "pascoletti_serafini";
    case CutSource::NormMin: return "norm_min";
  }
  return "weighted_sum";
}

CutSource parse_source(const std::string& s) {
  if (s == "weighted_sum") return CutSource::WeightedSum;
  if (s == "pascoletti_serafini") return CutSource::PascolettiSerafini;
  if (s == "norm_min") return CutSource::NormMin;
  throw ParseError("unknown cut source '" + s + "'");
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string bundle_to_json(const SolutionBundle& b) {
  json j;
  j["n"] = b.n;
  j["a"] = b.a;
  j["termination"] = to_string(b.termination);
  j["X_bar"] = vecs_json(b.X_bar);
  j["Y_in"] = vecs_json(b.Y_in);
  j["Y_out"] = vecs_json(b.Y_out);
  j["A0"] = {{"halfspaces", halfspaces_json(b.A0_h)},
             {"vertices", vecs_json(b.A0_v.vertices)},
             {"rays", vecs_json(b.A0_v.rays)}};
  j["stats"] = {{"n_scalarizations", b.stats.n_scalarizations},
                {"n_polyhedron_evals", b.stats.n_polyhedron_evals},
                {"n_iterations", b.stats.n_iterations},
                {"cache_hits", b.stats.cache_hits},
                {"wall_time", b.stats.wall_time}};
  const Tolerances& t = b.tolerances;
  j["tolerances"] = {{"epsilon", t.epsilon},
                     {"delta", t.delta},
                     {"solver_tol", t.solver_tol},
                     {"unbounded_cap", t.unbounded_cap},
                     {"dedup_tol", t.dedup_tol}};
  json cuts = json::array();
  for (const auto& c : b.cuts)
    cuts.push_back({{"w", vec_json(c.halfspace.w)},
                    {"alpha", c.halfspace.alpha},
                    {"source", source_name(c.source)},
                    {"shift", c.shift},
                    {"x", vec_json(c.generator_x)}});
  j["cuts"] = std::move(cuts);
  json delta = json::array();
  for (const auto& d : b.delta) delta.push_back({{"d", vec_json(d.d)}, {"witness", vec_json(d.witness)}});
  j["delta"] = std::move(delta);
  j["v"] = vec_json(b.v);
  return j.dump(1);
}

SolutionBundle bundle_from_json(const std::string& text) {
  const json j = parse_text(text);
  SolutionBundle b;
  try {
    b.n = j.at("n").get<int>();
    b.a = j.at("a").get<int>();
    b.termination = parse_termination(j.at("termination").get<std::string>());
    b.X_bar = json_vecs(j.at("X_bar"), b.n);
    b.Y_in = json_vecs(j.at("Y_in"), b.a);
    b.Y_out = json_vecs(j.at("Y_out"), b.a);
    const json& A0 = j.at("A0");
    b.A0_h = json_h(A0.at("halfspaces"), b.a);
    b.A0_v.dim = b.a;
    b.A0_v.vertices = json_vecs(A0.at("vertices"), b.a);
    b.A0_v.rays = json_vecs(A0.at("rays"), b.a);
    const json& s = j.at("stats");
    b.stats.n_scalarizations = s.at("n_scalarizations").get<long>();
    b.stats.n_polyhedron_evals = s.at("n_polyhedron_evals").get<long>();
    b.stats.n_iterations = s.at("n_iterations").get<long>();
    b.stats.cache_hits = s.value("cache_hits", 0L);
    b.stats.wall_time = s.value("wall_time", 0.0);
    const json& t = j.at("tolerances");
    b.tolerances.epsilon = t.at("epsilon").get<double>();
    b.tolerances.delta = t.at("delta").get<double>();
    b.tolerances.solver_tol = t.at("solver_tol").get<double>();
    b.tolerances.unbounded_cap = t.at("unbounded_cap").get<double>();
    b.tolerances.dedup_tol = t.at("dedup_tol").get<double>();
    for (const auto& c : j.value("cuts", json::array())) {
      Cut cut;
      cut.halfspace = Halfspace{json_vec(c.at("w")), c.at("alpha").get<double>()};
      cut.source = parse_source(c.at("source").get<std::string>());
      cut.shift = c.at("shift").get<double>();
      cut.generator_x = json_vec(c.at("x"));
      b.cuts.push_back(std::move(cut));
    }
    for (const auto& d : j.value("delta", json::array()))
      b.delta.push_back(DeltaEntry{json_vec(d.at("d")), json_vec(d.at("witness"))});
    b.v = json_vec(j.at("v"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed bundle: ") + e.what());
  }
  return b;
}

void save_bundle(const SolutionBundle& b, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << bundle_to_json(b) << "\n";
  if (!out) throw ParseError("write failed for " + path.string());
}

SolutionBundle load_bundle(const std::filesystem::path& path) { return bundle_from_json(read_file(path)); }

std::string polyhedron_to_json(const PolyhedronH& H, const PolyhedronV* V) {
  json j;
  j["dim"] = H.dim;
  j["halfspaces"] = halfspaces_json(H);
  if (V) {
    j["vertices"] = vecs_json(V->vertices);
    j["rays"] = vecs_json(V->rays);
  }
  return j.dump(1);
}

PolyhedronH polyhedron_h_from_json(const std::string& text) {
  const json j = parse_text(text);
  try {
    return json_h(j.at("halfspaces"), j.at("dim").get<int>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed polyhedron: ") + e.what());
  }
}

PolyhedronV polyhedron_v_from_json(const std::string& text) {
  const json j = parse_text(text);
  try {
    PolyhedronV V;
    V.dim = j.at("dim").get<int>();
    V.vertices = json_vecs(j.at("vertices"), V.dim);
    V.rays = json_vecs(j.at("rays"), V.dim);
    return V;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed polyhedron: ") + e.what());
  }
}

}  // namespace capprox
