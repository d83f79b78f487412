#include "cproj/plot.hpp"

#include "cproj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace capprox {

double truncation_radius(const SolutionBundle& b, const ProblemInstance& inst) {
  double m = 0.0;
  for (const auto& v : b.A0_v.vertices) m = std::max(m, v.norm());
  if (b.A0_v.vertices.empty())
    for (const auto& x : b.X_bar) m = std::max(m, (inst.A * x).norm());
  return std::max(5.0, 2.0 * m);
}

PlotSets plot_sets(const SolutionBundle& b, const ProblemInstance& inst) {
  PlotSets s;
  s.radius = truncation_radius(b, inst);
  const double R = s.radius;
  const double eps = b.tolerances.epsilon;

  std::vector<Vec> images;
  for (const auto& x : b.X_bar) images.push_back(inst.A * x);
  if (b.a == 2) images = convex_hull_2d(images);
  else if (b.a == 3 && images.size() > 3) {
    try {
      images = convex_hull_3d(images).vertices;
    } catch (const DimensionMismatch&) {
    }
  }

  for (const auto& p : images) {
    s.inner.push_back(p);
    for (const auto& y : b.Y_in) s.inner.push_back(p + R * y);
  }
  for (const auto& v : b.A0_v.vertices) {
    s.outer.push_back(v);
    for (const auto& r : b.A0_v.rays) s.outer.push_back(v + R * r);
  }
  for (const auto& p : images) {
    std::vector<Vec> base{p};
    for (const auto& y : b.Y_out) base.push_back(p + R * y);
    for (const auto& q : base)
      for (int i = 0; i < b.a; ++i) {
        s.eps.push_back(q + eps * Vec::Unit(b.a, i));
        s.eps.push_back(q - eps * Vec::Unit(b.a, i));
      }
  }
  return s;
}

std::vector<Vec> convex_hull_2d(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a(0) < b(0) || (a(0) == b(0) && a(1) < b(1));
  });
  if (pts.size() < 3) return pts;
  auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
    return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
  };
  std::vector<Vec> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

Mesh convex_hull_3d(const std::vector<Vec>& input) {
  double scale = 1.0;
  for (const auto& p : input) scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
  const std::vector<Vec> pts = dedup_points(input, 1e-8 * scale);
  if (pts.size() < 4) throw DimensionMismatch("point set is flat");
  Mat D(3, static_cast<Eigen::Index>(pts.size()) - 1);
  for (std::size_t i = 1; i < pts.size(); ++i) D.col(static_cast<Eigen::Index>(i) - 1) = pts[i] - pts[0];
  const Eigen::JacobiSVD<Mat> svd(D);
  if (svd.singularValues()(2) <= 1e-8 * scale) throw DimensionMismatch("point set is flat");
  KernelOptions kopts;
  kopts.dedup_tol = 1e-10;
  const PolyhedronH H = hull_h(3, pts, {}, kopts);
  const PolyhedronV V = dd_convert(H, kopts);
  if (!V.rays.empty()) throw DimensionMismatch("point set is flat");
  Mesh m;
  m.vertices = V.vertices;
  for (const auto& h : H.halfspaces) {
    std::vector<int> face;
    Vec c = Vec::Zero(3);
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
      if (std::abs(h.w.dot(m.vertices[i]) - h.alpha) <= 1e-9 * (1.0 + std::abs(h.alpha))) {
        face.push_back(static_cast<int>(i));
        c += m.vertices[i];
      }
    }
    if (face.size() < 3) continue;
    c /= static_cast<double>(face.size());
    const Eigen::Vector3d nrm = Eigen::Vector3d(h.w(0), h.w(1), h.w(2)).normalized();
    Eigen::Vector3d u = Eigen::Vector3d(m.vertices[static_cast<std::size_t>(face[0])] - c);
    u = (u - u.dot(nrm) * nrm).normalized();
    const Eigen::Vector3d w = nrm.cross(u);
    std::sort(face.begin(), face.end(), [&](int a, int b) {
      const Eigen::Vector3d pa = m.vertices[static_cast<std::size_t>(a)] - c;
      const Eigen::Vector3d pb = m.vertices[static_cast<std::size_t>(b)] - c;
      return std::atan2(pa.dot(w), pa.dot(u)) < std::atan2(pb.dot(w), pb.dot(u));
    });
    m.faces.push_back(std::move(face));
  }
  return m;
}

void write_svg(std::ostream& out, const PlotSets& sets, const std::string& title) {
  const std::vector<Vec> polys[3] = {convex_hull_2d(sets.eps), convex_hull_2d(sets.outer),
                                     convex_hull_2d(sets.inner)};
  const char* ids[3] = {"outer_eps", "outer", "inner"};
  const char* colors[3] = {"#8e44ad", "#f1c40f", "#2e86c1"};
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  for (const auto& p : polys)
    for (const auto& v : p)
      for (int i = 0; i < 2; ++i) {
        lo[i] = std::min(lo[i], v(i));
        hi[i] = std::max(hi[i], v(i));
      }
  if (lo[0] > hi[0]) lo[0] = lo[1] = -1, hi[0] = hi[1] = 1;
  const double pad = 0.05 * std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-6});
  const double x0 = lo[0] - pad, y0 = lo[1] - pad;
  const double w = hi[0] - lo[0] + 2 * pad, h = hi[1] - lo[1] + 2 * pad;

  out.precision(17);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<!-- " << title << " truncation_radius=" << sets.radius << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"600\" "
      << "viewBox=\"" << x0 << " " << -(y0 + h) << " " << w << " " << h << "\" "
      << "data-truncation-radius=\"" << sets.radius << "\">\n";
  out << "<g transform=\"scale(1,-1)\">\n";
  for (int k = 0; k < 3; ++k) {
    out << "<polygon id=\"" << ids[k] << "\" fill=\"" << colors[k] << "\" fill-opacity=\"0.6\" "
        << "stroke=\"black\" stroke-width=\"" << 0.002 * std::max(w, h) << "\" points=\"";
    for (std::size_t i = 0; i < polys[k].size(); ++i)
      out << (i ? " " : "") << polys[k][i](0) << "," << polys[k][i](1);
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void write_off(std::ostream& out, const Mesh& mesh, double radius, const std::string& title) {
  out.precision(17);
  out << "OFF\n# " << title << " truncation_radius=" << radius << "\n";
  out << mesh.vertices.size() << " " << mesh.faces.size() << " 0\n";
  for (const auto& v : mesh.vertices) out << v(0) << " " << v(1) << " " << v(2) << "\n";
  for (const auto& f : mesh.faces) {
    out << f.size();
    for (int i : f) out << " " << i;
    out << "\n";
  }
}

}  // namespace capprox
