#include "cproj/problem.hpp"

#include "cproj/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace capprox {

namespace {

using json = nlohmann::json;

constexpr double kSocGuard = 1e-12;

double soc_norm(const SocConstraint& s, const Vec& x) {
  return (s.C * x + s.e).norm();
}

Vec read_vec(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string("expected array for ") + what);
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(std::string("non-numeric entry in ") + what);
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

// Accepts nested rows or a flat row-major array of rows*cols numbers.
Mat read_mat(const json& j, int rows, int cols, const char* what) {
  if (!j.is_array()) throw ParseError(std::string("expected array for ") + what);
  if (!j.empty() && j[0].is_array()) {
    Mat m(static_cast<Eigen::Index>(j.size()), j[0].size());
    for (std::size_t r = 0; r < j.size(); ++r) {
      if (!j[r].is_array() || j[r].size() != j[0].size())
        throw ParseError(std::string("ragged matrix ") + what);
      for (std::size_t c = 0; c < j[r].size(); ++c) {
        if (!j[r][c].is_number()) throw ParseError(std::string("non-numeric entry in ") + what);
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
      }
    }
    return m;
  }
  if (cols <= 0 || j.size() % static_cast<std::size_t>(cols) != 0)
    throw DimensionMismatch(std::string("cannot infer shape of flat matrix ") + what);
  const auto nrows = static_cast<Eigen::Index>(j.size() / static_cast<std::size_t>(cols));
  if (rows > 0 && nrows != rows)
    throw DimensionMismatch(std::string("wrong number of entries in ") + what);
  Mat m(nrows, cols);
  for (Eigen::Index r = 0; r < nrows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = j[static_cast<std::size_t>(r * cols + c)];
      if (!e.is_number()) throw ParseError(std::string("non-numeric entry in ") + what);
      m(r, c) = e.get<double>();
    }
  return m;
}

json write_vec(const Vec& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

json write_mat(const Mat& m) {
  json j = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(std::move(row));
  }
  return j;
}

double get_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ParseError(std::string("missing numeric field '") + key + "'");
  return j[key].get<double>();
}

}  // namespace

int constraint_dim(const Constraint& c) {
  return std::visit(
      [](const auto& k) -> int {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LinearConstraint>) return static_cast<int>(k.a.size());
        else if constexpr (std::is_same_v<T, QuadraticConstraint>) return static_cast<int>(k.q.size());
        else return static_cast<int>(k.f.size());
      },
      c);
}

double constraint_value(const Constraint& c, const Vec& x) {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LinearConstraint>) {
          return k.a.dot(x) - k.b;
        } else if constexpr (std::is_same_v<T, QuadraticConstraint>) {
          return 0.5 * x.dot(k.P * x) + k.q.dot(x) + k.r;
        } else {
          return soc_norm(k, x) - k.f.dot(x) - k.g;
        }
      },
      c);
}

Vec constraint_gradient(const Constraint& c, const Vec& x) {
  return std::visit(
      [&](const auto& k) -> Vec {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LinearConstraint>) {
          return k.a;
        } else if constexpr (std::is_same_v<T, QuadraticConstraint>) {
          return k.P * x + k.q;
        } else {
          const Vec u = k.C * x + k.e;
          const double nu = std::sqrt(u.squaredNorm() + kSocGuard * kSocGuard);
          return k.C.transpose() * u / nu - k.f;
        }
      },
      c);
}

double max_violation(const std::vector<Constraint>& cons, const Vec& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& c : cons) worst = std::max(worst, constraint_value(c, x));
  return worst;
}

bool satisfies_all(const std::vector<Constraint>& cons, const Vec& x, double tol) {
  for (const auto& c : cons)
    if (!(constraint_value(c, x) <= tol)) return false;
  return true;
}

void Tolerances::validate() const {
  if (!(epsilon > 0) || !(delta > 0) || !(solver_tol > 0) || !(dedup_tol > 0))
    throw std::invalid_argument("tolerances must be positive");
  if (solver_tol > std::min(epsilon, delta) / 100)
    throw std::invalid_argument("solver_tol must not exceed min(epsilon, delta)/100");
  if (unbounded_cap < 1e4) throw std::invalid_argument("unbounded_cap must be at least 1e4");
}

void validate_instance(const ProblemInstance& inst, double feas_tol) {
  if (inst.n < 1 || inst.a < 1) throw DimensionMismatch("n and a must be positive");
  if (inst.A.rows() != inst.a || inst.A.cols() != inst.n)
    throw DimensionMismatch("A must be a x n");
  if (!inst.A.allFinite()) throw ParseError("A has non-finite entries");
  for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
    const auto& c = inst.constraints[i];
    const std::string where = "constraint " + std::to_string(i);
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, LinearConstraint>) {
            if (k.a.size() != inst.n) throw DimensionMismatch(where + ": a has wrong length");
          } else if constexpr (std::is_same_v<T, QuadraticConstraint>) {
            if (k.P.rows() != inst.n || k.P.cols() != inst.n || k.q.size() != inst.n)
              throw DimensionMismatch(where + ": P/q have wrong size");
            if ((k.P - k.P.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + k.P.norm()))
              throw NotConvex(where + ": P is not symmetric");
            Eigen::SelfAdjointEigenSolver<Mat> es(k.P, Eigen::EigenvaluesOnly);
            const double floor = -1e-9 * k.P.norm();
            if (es.eigenvalues().minCoeff() < floor)
              throw NotConvex(where + ": P has a negative eigenvalue");
          } else {
            if (k.C.cols() != inst.n || k.f.size() != inst.n || k.e.size() != k.C.rows())
              throw DimensionMismatch(where + ": C/e/f have wrong size");
          }
        },
        c);
  }
  if (inst.known_point) {
    if (inst.known_point->size() != inst.n)
      throw DimensionMismatch("known_point has wrong length");
    if (!satisfies_all(inst.constraints, *inst.known_point, feas_tol))
      throw DimensionMismatch("known_point violates the constraints");
  }
}

ProblemInstance parse_instance(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  ProblemInstance inst;
  inst.name = j.value("name", std::string("unnamed"));
  inst.n = static_cast<int>(get_number(j, "n"));
  inst.a = static_cast<int>(get_number(j, "a"));
  if (inst.n < 1 || inst.a < 1) throw DimensionMismatch("n and a must be positive");
  if (!j.contains("A")) throw ParseError("missing field 'A'");
  inst.A = read_mat(j["A"], inst.a, inst.n, "A");
  if (!j.contains("constraints") || !j["constraints"].is_array())
    throw ParseError("missing array 'constraints'");
  for (const auto& c : j["constraints"]) {
    const std::string type = c.value("type", std::string());
    if (type == "linear") {
      inst.constraints.push_back(LinearConstraint{read_vec(c.at("a"), "a"), get_number(c, "b")});
    } else if (type == "quadratic") {
      QuadraticConstraint q;
      q.P = read_mat(c.at("P"), inst.n, inst.n, "P");
      q.q = c.contains("q") ? read_vec(c["q"], "q") : Vec::Zero(inst.n);
      q.r = c.contains("r") ? get_number(c, "r") : 0.0;
      inst.constraints.push_back(std::move(q));
    } else if (type == "soc") {
      SocConstraint s;
      s.C = read_mat(c.at("C"), -1, inst.n, "C");
      s.e = c.contains("e") ? read_vec(c["e"], "e") : Vec::Zero(s.C.rows());
      s.f = c.contains("f") ? read_vec(c["f"], "f") : Vec::Zero(inst.n);
      s.g = c.contains("g") ? get_number(c, "g") : 0.0;
      inst.constraints.push_back(std::move(s));
    } else {
      throw ParseError("unknown constraint type '" + type + "'");
    }
  }
  if (j.contains("known_point") && !j["known_point"].is_null())
    inst.known_point = read_vec(j["known_point"], "known_point");
  validate_instance(inst);
  return inst;
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string instance_to_json(const ProblemInstance& inst) {
  json j;
  j["name"] = inst.name;
  j["n"] = inst.n;
  j["a"] = inst.a;
  j["A"] = write_mat(inst.A);
  json cons = json::array();
  for (const auto& c : inst.constraints) {
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          json o;
          if constexpr (std::is_same_v<T, LinearConstraint>) {
            o["type"] = "linear";
            o["a"] = write_vec(k.a);
            o["b"] = k.b;
          } else if constexpr (std::is_same_v<T, QuadraticConstraint>) {
            o["type"] = "quadratic";
            o["P"] = write_mat(k.P);
            o["q"] = write_vec(k.q);
            o["r"] = k.r;
          } else {
            o["type"] = "soc";
            o["C"] = write_mat(k.C);
            o["e"] = write_vec(k.e);
            o["f"] = write_vec(k.f);
            o["g"] = k.g;
          }
          cons.push_back(std::move(o));
        },
        c);
  }
  j["constraints"] = std::move(cons);
  if (inst.known_point) j["known_point"] = write_vec(*inst.known_point);
  return j.dump(2);
}

ProblemInstance from_projection_form(std::vector<Constraint> s_constraints, int k,
                                     std::string name) {
  if (k < 1) throw DimensionMismatch("k must be at least 1");
  if (s_constraints.empty()) throw DimensionMismatch("no constraints to infer m + k from");
  const int total = constraint_dim(s_constraints.front());
  for (const auto& c : s_constraints)
    if (constraint_dim(c) != total) throw DimensionMismatch("constraints disagree on dimension");
  if (total < k) throw DimensionMismatch("k exceeds the number of variables");
  ProblemInstance inst;
  inst.name = std::move(name);
  inst.n = total;
  inst.a = k;
  inst.A = Mat::Zero(k, total);
  inst.A.rightCols(k).setIdentity();
  inst.constraints = std::move(s_constraints);
  validate_instance(inst);
  return inst;
}

RecessionCone recession_cone(const ProblemInstance& inst) {
  RecessionCone rc;
  std::vector<Vec> eq_rows;
  for (const auto& c : inst.constraints) {
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, LinearConstraint>) {
            if (k.a.template lpNorm<Eigen::Infinity>() > 0)
              rc.inequalities.push_back(LinearConstraint{k.a, 0.0});
          } else if constexpr (std::is_same_v<T, QuadraticConstraint>) {
            Eigen::SelfAdjointEigenSolver<Mat> es(k.P);
            const double cut = 1e-9 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
              if (es.eigenvalues()(i) > cut) eq_rows.push_back(es.eigenvectors().col(i));
            if (k.q.template lpNorm<Eigen::Infinity>() > 0)
              rc.inequalities.push_back(LinearConstraint{k.q, 0.0});
          } else {
            if (k.f.template lpNorm<Eigen::Infinity>() == 0) {
              for (Eigen::Index r = 0; r < k.C.rows(); ++r)
                if (k.C.row(r).template lpNorm<Eigen::Infinity>() > 0) eq_rows.push_back(k.C.row(r).transpose());
            } else {
              rc.inequalities.push_back(
                  SocConstraint{k.C, Vec::Zero(k.C.rows()), k.f, 0.0});
            }
          }
        },
        c);
  }
  rc.equalities.resize(static_cast<Eigen::Index>(eq_rows.size()), inst.n);
  for (std::size_t i = 0; i < eq_rows.size(); ++i)
    rc.equalities.row(static_cast<Eigen::Index>(i)) = eq_rows[i].transpose();
  return rc;
}

std::vector<Constraint> recession_constraints(const ProblemInstance& inst) {
  RecessionCone rc = recession_cone(inst);
  std::vector<Constraint> out = rc.inequalities;
  for (Eigen::Index r = 0; r < rc.equalities.rows(); ++r) {
    const Vec row = rc.equalities.row(r).transpose();
    out.push_back(LinearConstraint{row, 0.0});
    out.push_back(LinearConstraint{-row, 0.0});
  }
  return out;
}

double ray_exit(const std::vector<Constraint>& cons, const Vec& x, const Vec& dir, double t_max,
                double tol) {
  if (satisfies_all(cons, x + t_max * dir, 0.0)) return t_max;
  double lo = 0.0;
  double hi = t_max;
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (satisfies_all(cons, x + mid * dir, 0.0)) lo = mid;
    else hi = mid;
  }
  return lo;
}

std::vector<Vec> sample_feasible(const ProblemInstance& inst, const Vec& interior, int count,
                                 std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vec dir(inst.n);
    for (int k = 0; k < inst.n; ++k) dir(k) = gauss(rng);
    dir /= std::max(dir.norm(), 1e-300);
    const double t = ray_exit(inst.constraints, interior, dir, radius);
    // Every other sample sits on the boundary, where cuts are tight.
    const double s = (i % 2 == 0) ? t : t * unif(rng);
    out.push_back(interior + s * dir);
  }
  return out;
}

}  // namespace capprox
