#include "cproj/polyhedron.hpp"

#include "cproj/barrier.hpp"
#include "cproj/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace capprox {

namespace {

using Bits = std::vector<std::uint64_t>;

struct Generator {
  Vec z;
  Bits zero;
};

void set_bit(Bits& b, int i) { b[static_cast<std::size_t>(i >> 6)] |= (1ULL << (i & 63)); }

Bits bits_and(const Bits& a, const Bits& b) {
  Bits r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] & b[i];
  return r;
}

int popcount(const Bits& b) {
  int c = 0;
  for (auto w : b) c += std::popcount(w);
  return c;
}

bool is_subset(const Bits& sub, const Bits& sup) {
  for (std::size_t i = 0; i < sub.size(); ++i)
    if ((sub[i] & ~sup[i]) != 0) return false;
  return true;
}

void normalize2(Vec& v) {
  const double n = v.norm();
  if (n > 0) v /= n;
}

bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

void check_dim(int dim, const KernelOptions& opts) {
  if (dim < 1) throw DimensionMismatch("polyhedron dimension must be positive");
  if (dim > opts.max_dim)
    throw DimensionGuardExceeded("dimension " + std::to_string(dim) + " exceeds guard " +
                                 std::to_string(opts.max_dim));
}

}  // namespace

Halfspace make_halfspace(const Vec& w, double alpha) {
  const double n1 = w.lpNorm<1>();
  if (!(n1 > 0) || !std::isfinite(n1)) throw std::invalid_argument("halfspace normal must be nonzero");
  return Halfspace{w / n1, alpha / n1};
}

ConeGenerators cone_generators(const Mat& B, double zero_tol) {
  const auto m = B.cols();
  const int nrows = static_cast<int>(B.rows());
  const std::size_t words = static_cast<std::size_t>((nrows + 63) / 64 + 1);

  std::vector<Vec> lines;
  for (Eigen::Index i = 0; i < m; ++i) lines.push_back(Vec::Unit(m, i));
  std::vector<Generator> rays;

  int processed = 0;
  for (int r = 0; r < nrows; ++r) {
    Vec b = B.row(r).transpose();
    const double bn = b.norm();
    if (!(bn > 1e-14)) continue;
    b /= bn;
    const int idx = processed++;

    // A line not orthogonal to b turns into a ray.
    int best = -1;
    double best_val = zero_tol;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const double v = std::abs(b.dot(lines[i]));
      if (v > best_val) {
        best_val = v;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0) {
      const Vec lstar = lines[static_cast<std::size_t>(best)];
      const double bl = b.dot(lstar);
      lines.erase(lines.begin() + best);
      for (auto& l : lines) {
        l -= (b.dot(l) / bl) * lstar;
        normalize2(l);
      }
      for (auto& g : rays) {
        g.z -= (b.dot(g.z) / bl) * lstar;
        normalize2(g.z);
        set_bit(g.zero, idx);
      }
      Generator ng;
      ng.z = (bl > 0 ? -1.0 : 1.0) * lstar;
      normalize2(ng.z);
      ng.zero.assign(words, 0);
      for (int i = 0; i < idx; ++i) set_bit(ng.zero, i);
      rays.push_back(std::move(ng));
      continue;
    }

    std::vector<double> s(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      s[i] = b.dot(rays[i].z);
      if (s[i] > zero_tol) pos.push_back(i);
      else if (s[i] < -zero_tol) neg.push_back(i);
      else set_bit(rays[i].zero, idx);
    }
    if (pos.empty()) continue;

    const int dpointed = static_cast<int>(m) - static_cast<int>(lines.size());
    std::vector<Generator> fresh;
    for (auto p : pos) {
      for (auto q : neg) {
        Bits common = bits_and(rays[p].zero, rays[q].zero);
        if (popcount(common) < dpointed - 2) continue;
        bool adjacent = true;
        for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
          if (k == p || k == q) continue;
          if (is_subset(common, rays[k].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        Generator ng;
        ng.z = s[p] * rays[q].z - s[q] * rays[p].z;
        normalize2(ng.z);
        ng.zero = std::move(common);
        set_bit(ng.zero, idx);
        fresh.push_back(std::move(ng));
      }
    }
    std::vector<Generator> kept;
    kept.reserve(rays.size() - pos.size() + fresh.size());
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (!(s[i] > zero_tol)) kept.push_back(std::move(rays[i]));
    for (auto& g : fresh) kept.push_back(std::move(g));
    rays = std::move(kept);
  }

  ConeGenerators out;
  out.lines = std::move(lines);
  for (auto& g : rays) out.rays.push_back(std::move(g.z));
  return out;
}

std::vector<Vec> dedup_points(std::vector<Vec> pts, double tol) {
  std::sort(pts.begin(), pts.end(), lex_less);
  std::vector<Vec> out;
  for (auto& p : pts) {
    bool dup = false;
    for (const auto& q : out) {
      if ((p - q).lpNorm<1>() <= tol * (1.0 + q.lpNorm<1>())) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(p));
  }
  return out;
}

PolyhedronV dd_convert(const PolyhedronH& P, const KernelOptions& opts) {
  check_dim(P.dim, opts);
  const int d = P.dim;
  Mat B(static_cast<Eigen::Index>(P.halfspaces.size()) + 1, d + 1);
  B.row(0).setZero();
  B(0, d) = -1.0;
  for (std::size_t i = 0; i < P.halfspaces.size(); ++i) {
    const auto& h = P.halfspaces[i];
    if (h.w.size() != d) throw DimensionMismatch("halfspace has wrong dimension");
    B.row(static_cast<Eigen::Index>(i) + 1).head(d) = h.w.transpose();
    B(static_cast<Eigen::Index>(i) + 1, d) = -h.alpha;
  }
  const ConeGenerators cg = cone_generators(B, opts.zero_tol);

  std::vector<Vec> verts, rays;
  for (const auto& z : cg.rays) {
    const double t = z(d);
    if (t > 1e-12) verts.push_back(z.head(d) / t);
    else rays.push_back(z.head(d));
  }
  if (verts.empty()) throw EmptyPolyhedron("polyhedron is empty");

  PolyhedronV V;
  V.dim = d;
  if (!cg.lines.empty()) {
    Mat L(d, static_cast<Eigen::Index>(cg.lines.size()));
    for (std::size_t i = 0; i < cg.lines.size(); ++i)
      L.col(static_cast<Eigen::Index>(i)) = cg.lines[i].head(d);
    Eigen::HouseholderQR<Mat> qr(L);
    const Mat Q = qr.householderQ() * Mat::Identity(d, L.cols());
    for (auto& v : verts) v -= Q * (Q.transpose() * v);
    for (auto& r : rays) r -= Q * (Q.transpose() * r);
    for (Eigen::Index i = 0; i < Q.cols(); ++i) {
      Vec q = Q.col(i);
      // Fix the sign so the pair is reproducible.
      Eigen::Index arg = 0;
      q.cwiseAbs().maxCoeff(&arg);
      if (q(arg) < 0) q = -q;
      rays.push_back(q);
      rays.push_back(-q);
    }
  }
  std::vector<Vec> nrays;
  for (auto& r : rays) {
    const double n1 = r.lpNorm<1>();
    if (n1 > 1e-9) nrays.push_back(r / n1);
  }
  V.vertices = dedup_points(std::move(verts), opts.dedup_tol);
  V.rays = dedup_points(std::move(nrays), opts.dedup_tol);
  return V;
}

PolyhedronH hull_h(int dim, const std::vector<Vec>& points, const std::vector<Vec>& rays,
                   const KernelOptions& opts) {
  check_dim(dim, opts);
  if (points.empty()) throw EmptyPolyhedron("hull of no points");
  Mat B(static_cast<Eigen::Index>(points.size() + rays.size()), dim + 1);
  Eigen::Index row = 0;
  for (const auto& p : points) {
    B.row(row).head(dim) = p.transpose();
    B(row++, dim) = -1.0;
  }
  for (const auto& r : rays) {
    B.row(row).head(dim) = r.transpose();
    B(row++, dim) = 0.0;
  }
  const ConeGenerators cg = cone_generators(B, opts.zero_tol);
  PolyhedronH H;
  H.dim = dim;
  std::vector<Halfspace> cuts;
  for (const auto& z : cg.rays) {
    const Vec w = z.head(dim);
    if (w.lpNorm<1>() <= 1e-9) continue;
    cuts.push_back(make_halfspace(w, z(dim)));
  }
  for (const auto& z : cg.lines) {
    const Vec w = z.head(dim);
    if (w.lpNorm<1>() <= 1e-9) continue;
    cuts.push_back(make_halfspace(w, z(dim)));
    cuts.push_back(make_halfspace(-w, -z(dim)));
  }
  return intersect(H, cuts, opts.dedup_tol);
}

PolyhedronH recession_cone_h(const PolyhedronH& P) {
  PolyhedronH C;
  C.dim = P.dim;
  C.halfspaces.reserve(P.halfspaces.size());
  for (const auto& h : P.halfspaces) C.halfspaces.push_back(Halfspace{h.w, 0.0});
  return C;
}

PolyhedronH unit_l1_ball(int dim, const KernelOptions& opts) {
  check_dim(dim, opts);
  PolyhedronH B;
  B.dim = dim;
  const unsigned count = 1u << dim;
  for (unsigned mask = 0; mask < count; ++mask) {
    Vec s(dim);
    for (int i = 0; i < dim; ++i) s(i) = (mask >> i) & 1u ? -1.0 : 1.0;
    B.halfspaces.push_back(make_halfspace(s, 1.0));
  }
  return B;
}

std::vector<Vec> cone_cap_directions(const PolyhedronH& C, const KernelOptions& opts) {
  PolyhedronH capped = recession_cone_h(C);
  const PolyhedronH ball = unit_l1_ball(C.dim, opts);
  capped.halfspaces.insert(capped.halfspaces.end(), ball.halfspaces.begin(), ball.halfspaces.end());
  const PolyhedronV V = dd_convert(capped, opts);
  std::vector<Vec> out;
  for (const auto& v : V.vertices) {
    const double n1 = v.lpNorm<1>();
    if (n1 > 1e-7) out.push_back(v / n1);
  }
  return dedup_points(std::move(out), opts.dedup_tol);
}

double diameter(const std::vector<Vec>& D) {
  double best = 0.0;
  for (std::size_t i = 0; i < D.size(); ++i)
    for (std::size_t j = i + 1; j < D.size(); ++j) best = std::max(best, (D[i] - D[j]).lpNorm<1>());
  return best;
}

double point_polytope_distance(const Vec& y, const std::vector<Vec>& points,
                               const std::vector<Vec>& rays, double tol) {
  if (points.empty()) return std::numeric_limits<double>::infinity();
  const int a = static_cast<int>(y.size());
  for (const auto& p : points)
    if ((p - y).lpNorm<1>() == 0.0) return 0.0;
  ConvexProgram lp;
  lp.n = a + 1;
  lp.c = Vec::Zero(a + 1);
  lp.c.head(a) = -y;
  lp.c(a) = 1.0;
  for (const auto& p : points) {
    Vec row(a + 1);
    row.head(a) = p;
    row(a) = -1.0;
    lp.ineq.push_back(LinearConstraint{row, 0.0});
  }
  // Opposite ray pairs span a lineality space; u is orthogonal to it.
  std::vector<Vec> lines, pointed;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    bool paired = false;
    for (std::size_t j = 0; j < rays.size(); ++j)
      if (j != i && (rays[i] + rays[j]).lpNorm<1>() <= 1e-9) paired = true;
    if (!paired) pointed.push_back(rays[i]);
    else if (std::none_of(lines.begin(), lines.end(), [&](const Vec& l) { return (l + rays[i]).lpNorm<1>() <= 1e-9; }))
      lines.push_back(rays[i]);
  }
  Mat Q = Mat::Zero(a, 0);
  if (!lines.empty()) {
    lp.G = Mat::Zero(static_cast<Eigen::Index>(lines.size()), a + 1);
    Mat L(a, static_cast<Eigen::Index>(lines.size()));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      lp.G.row(static_cast<Eigen::Index>(i)).head(a) = lines[i].transpose();
      L.col(static_cast<Eigen::Index>(i)) = lines[i];
    }
    lp.h = Vec::Zero(static_cast<Eigen::Index>(lines.size()));
    Q = L.householderQr().householderQ() * Mat::Identity(a, L.cols());
  }
  // Tiny slack keeps an interior when the polar of cone(rays) is thin.
  Vec s = Vec::Zero(a);
  for (const auto& r : pointed) {
    Vec row = Vec::Zero(a + 1);
    row.head(a) = r;
    lp.ineq.push_back(LinearConstraint{row, 1e-12});
    s += r;
  }
  for (int k = 0; k < a; ++k) {
    Vec row = Vec::Zero(a + 1);
    row(k) = 1.0;
    lp.ineq.push_back(LinearConstraint{row, 1.0});
    row(k) = -1.0;
    lp.ineq.push_back(LinearConstraint{row, 1.0});
  }
  Vec u0 = Vec::Zero(a);
  s -= Q * (Q.transpose() * s);
  if (s.lpNorm<Eigen::Infinity>() > 1e-12) {
    u0 = -0.5 * s / s.lpNorm<Eigen::Infinity>();
    for (const auto& r : pointed)
      if (r.dot(u0) >= 0.0) u0.setZero();
  }
  Vec start(a + 1);
  start.head(a) = u0;
  double tmax = 0.0;
  for (const auto& p : points) tmax = std::max(tmax, p.dot(u0));
  start(a) = tmax + 1.0;
  BarrierOptions opts;
  // The gap is relative to the data; an absolute 1e-10 on coordinates in the
  // hundreds is below round-off.
  double scale = y.lpNorm<Eigen::Infinity>();
  for (const auto& p : points) scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
  opts.tol = tol * (1.0 + scale);
  opts.cap = 1e12;
  const SolveResult r = solve(lp, start, opts);
  if (r.status != SolveStatus::Optimal) throw NumericalFailure("distance LP failed");
  return std::max(0.0, -r.objective_value);
}

double hausdorff(const PolyhedronV& P, const PolyhedronV& Q) {
  if (!P.rays.empty() || !Q.rays.empty()) throw UnboundedInput("hausdorff needs bounded polyhedra");
  if (P.vertices.empty() && Q.vertices.empty()) return 0.0;
  if (P.vertices.empty() || Q.vertices.empty()) return std::numeric_limits<double>::infinity();
  double h = 0.0;
  for (const auto& v : P.vertices) h = std::max(h, point_polytope_distance(v, Q.vertices));
  for (const auto& v : Q.vertices) h = std::max(h, point_polytope_distance(v, P.vertices));
  return h;
}

PolyhedronH intersect(const PolyhedronH& P, const std::vector<Halfspace>& cuts, double dedup_tol,
                      int* added) {
  PolyhedronH out = P;
  int count = 0;
  for (const auto& c : cuts) {
    if (c.w.size() != P.dim) throw DimensionMismatch("cut has wrong dimension");
    bool dup = false;
    for (const auto& h : out.halfspaces) {
      if (std::max((h.w - c.w).lpNorm<1>(), std::abs(h.alpha - c.alpha)) <= dedup_tol) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      out.halfspaces.push_back(c);
      ++count;
    }
  }
  if (added) *added = count;
  return out;
}

bool contains(const PolyhedronH& P, const Vec& y, double tol) {
  for (const auto& h : P.halfspaces)
    if (!(h.w.dot(y) <= h.alpha + tol)) return false;
  return true;
}

}  // namespace capprox
