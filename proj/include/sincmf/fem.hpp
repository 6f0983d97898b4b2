#pragma once

// P1 finite elements for the acoustic wave equation u_tt - Laplace u = f
// on a triangulated planar domain: mesh I/O, mass/stiffness assembly,
// Dirichlet elimination by a null-space basis (a column selector), and
// the reduction M_c u'' + K_c u = F_c to y'' + A y = f with
// A = L^{-1} K_c L^{-T}, M_c = L L^T.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sincmf/error.hpp"
#include "sincmf/integrators.hpp"
#include "sincmf/sparse.hpp"

namespace sincmf {

struct TriMesh {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::set<int> dirichlet;

  int num_vertices() const noexcept { return static_cast<int>(vertices.size()); }
  int num_triangles() const noexcept { return static_cast<int>(triangles.size()); }

  double signed_area(int t) const {
    const auto& tri = triangles.at(static_cast<std::size_t>(t));
    const auto& a = vertices[static_cast<std::size_t>(tri[0])];
    const auto& b = vertices[static_cast<std::size_t>(tri[1])];
    const auto& c = vertices[static_cast<std::size_t>(tri[2])];
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
  }

  double area() const {
    double s = 0.0;
    for (int t = 0; t < num_triangles(); ++t) s += signed_area(t);
    return s;
  }

  double max_edge_length() const {
    double m = 0.0;
    for (const auto& tri : triangles)
      for (int e = 0; e < 3; ++e) {
        const auto& p = vertices[static_cast<std::size_t>(tri[e])];
        const auto& q = vertices[static_cast<std::size_t>(tri[(e + 1) % 3])];
        m = std::max(m, std::hypot(p[0] - q[0], p[1] - q[1]));
      }
    return m;
  }
};

inline constexpr double kMinElementArea = 1e-14;

/// Checks index ranges and element areas. Clockwise elements are fixed in
/// place by swapping two vertices; a warning is appended for each.
inline void validate_mesh(TriMesh& mesh, std::vector<std::string>* warnings = nullptr) {
  const int nv = mesh.num_vertices();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    for (int v : tri)
      detail::require(v >= 0 && v < nv, ErrorCategory::parse_error,
                      "mesh: triangle " + std::to_string(t) + " has vertex index " + std::to_string(v) +
                          " outside [0, " + std::to_string(nv) + ")");
    double a = mesh.signed_area(t);
    if (a < 0.0) {
      std::swap(tri[1], tri[2]);
      a = -a;
      if (warnings) warnings->push_back("triangle " + std::to_string(t) + " was clockwise; orientation fixed");
    }
    detail::require(a >= kMinElementArea, ErrorCategory::invalid_argument,
                    "mesh: triangle " + std::to_string(t) + " is degenerate (area " + std::to_string(a) + ")");
  }
  for (int v : mesh.dirichlet)
    detail::require(v >= 0 && v < nv, ErrorCategory::parse_error,
                    "mesh: Dirichlet vertex " + std::to_string(v) + " out of range");
}

/// Uniform triangulation of [-1, 1]^2 with m cells per side, each cell
/// split along its (bottom-left, top-right) diagonal. All boundary
/// vertices are Dirichlet.
inline TriMesh structured_mesh(int m) {
  detail::require_arg(m >= 1, "structured_mesh: need at least one division per side");
  TriMesh mesh;
  const double step = 2.0 / m;
  auto id = [m](int i, int j) { return j * (m + 1) + i; };
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i) {
      mesh.vertices.push_back({-1.0 + i * step, -1.0 + j * step});
      if (i == 0 || j == 0 || i == m || j == m) mesh.dirichlet.insert(id(i, j));
    }
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  return mesh;
}

/// Plain-text mesh: "nv nt nb", nv lines "x y", nt lines "i j k"
/// (0-based), nb lines "i" listing Dirichlet vertices.
inline void save_mesh(const TriMesh& mesh, std::ostream& os) {
  os.precision(17);
  os << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' ' << mesh.dirichlet.size() << '\n';
  for (const auto& v : mesh.vertices) os << v[0] << ' ' << v[1] << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (int v : mesh.dirichlet) os << v << '\n';
}

inline void save_mesh(const TriMesh& mesh, const std::string& path) {
  std::ofstream os(path);
  detail::require(static_cast<bool>(os), ErrorCategory::invalid_argument, "save_mesh: cannot open " + path);
  save_mesh(mesh, os);
}

inline TriMesh load_mesh(std::istream& is, std::vector<std::string>* warnings = nullptr) {
  std::string line;
  int lineno = 0;
  auto next = [&](const char* what) -> std::istringstream {
    while (std::getline(is, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
    }
    throw Error(ErrorCategory::parse_error,
                "mesh: unexpected end of file at line " + std::to_string(lineno + 1) + " (expected " + what + ")");
  };
  auto fail = [&](const char* what) {
    throw Error(ErrorCategory::parse_error, "mesh: line " + std::to_string(lineno) + ": malformed " + what);
  };
  TriMesh mesh;
  long nv = 0, nt = 0, nb = 0;
  {
    auto ss = next("header");
    if (!(ss >> nv >> nt >> nb) || nv < 0 || nt < 0 || nb < 0) fail("header 'nv nt nb'");
  }
  mesh.vertices.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    auto ss = next("vertex");
    double x, y;
    if (!(ss >> x >> y)) fail("vertex 'x y'");
    mesh.vertices.push_back({x, y});
  }
  for (long i = 0; i < nt; ++i) {
    auto ss = next("triangle");
    int a, b, c;
    if (!(ss >> a >> b >> c)) fail("triangle 'i j k'");
    mesh.triangles.push_back({a, b, c});
  }
  for (long i = 0; i < nb; ++i) {
    auto ss = next("boundary vertex");
    int v;
    if (!(ss >> v)) fail("boundary vertex index");
    mesh.dirichlet.insert(v);
  }
  validate_mesh(mesh, warnings);
  return mesh;
}

inline TriMesh load_mesh(const std::string& path, std::vector<std::string>* warnings = nullptr) {
  std::ifstream is(path);
  detail::require(static_cast<bool>(is), ErrorCategory::parse_error, "load_mesh: cannot open " + path);
  return load_mesh(is, warnings);
}

/// Element mass (area/12)[[2,1,1],[1,2,1],[1,1,2]] and stiffness
/// area * G G^T, G the constant barycentric gradients.
struct ElementMatrices {
  Eigen::Matrix3d mass;
  Eigen::Matrix3d stiffness;
};

inline ElementMatrices p1_element(const std::array<double, 2>& a, const std::array<double, 2>& b,
                                  const std::array<double, 2>& c) {
  const double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
  const double area = 0.5 * std::abs(det);
  detail::require(area >= kMinElementArea, ErrorCategory::invalid_argument, "p1_element: degenerate element");
  Eigen::Matrix<double, 3, 2> g;
  g << b[1] - c[1], c[0] - b[0],  //
      c[1] - a[1], a[0] - c[0],   //
      a[1] - b[1], b[0] - a[0];
  g /= det;
  ElementMatrices e;
  e.mass << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  e.mass *= area / 12.0;
  e.stiffness = area * g * g.transpose();
  return e;
}

struct P1Matrices {
  SparseSymMatrix M;
  SparseSymMatrix K;
};

inline P1Matrices assemble_p1(const TriMesh& mesh) {
  std::vector<Eigen::Triplet<double>> mt, kt;
  mt.reserve(9 * mesh.triangles.size());
  kt.reserve(9 * mesh.triangles.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    detail::require(mesh.signed_area(t) >= kMinElementArea, ErrorCategory::invalid_argument,
                    "assemble_p1: triangle " + std::to_string(t) + " is degenerate or clockwise");
    const auto e = p1_element(mesh.vertices[static_cast<std::size_t>(tri[0])],
                              mesh.vertices[static_cast<std::size_t>(tri[1])],
                              mesh.vertices[static_cast<std::size_t>(tri[2])]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        mt.emplace_back(tri[i], tri[j], e.mass(i, j));
        kt.emplace_back(tri[i], tri[j], e.stiffness(i, j));
      }
  }
  return {SparseSymMatrix::from_triplets(mesh.num_vertices(), mt),
          SparseSymMatrix::from_triplets(mesh.num_vertices(), kt)};
}

/// Boundary-eliminated system. Z is the selector of the free DoFs, so
/// M_c = Z^T M Z and K_c = Z^T K Z are principal submatrices.
struct FemSystem {
  SparseSymMatrix M, K;
  SparseSymMatrix Mc, Kc;
  std::vector<int> free_dofs;                 // free index -> vertex
  std::function<Vec(double)> dirichlet_values;  // g_D(t), full length, zero off the boundary

  Eigen::Index num_free() const noexcept { return static_cast<Eigen::Index>(free_dofs.size()); }

  Vec restrict(const Vec& full) const {
    Vec r(num_free());
    for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = full(free_dofs[static_cast<std::size_t>(i)]);
    return r;
  }

  /// Full vector with `free` on the free DoFs and g_D(t) elsewhere.
  Vec extend(const Vec& free, double t) const {
    Vec full = dirichlet_values ? dirichlet_values(t) : Vec::Zero(M.order());
    for (Eigen::Index i = 0; i < free.size(); ++i) full(free_dofs[static_cast<std::size_t>(i)]) = free(i);
    return full;
  }

  /// F_c(t) = Z^T (F(t) + G(t) - K g_D(t)).
  Vec restricted_load(const Vec& F, const Vec& G, double t) const {
    Vec rhs = F + G;
    if (dirichlet_values) rhs -= K * dirichlet_values(t);
    return restrict(rhs);
  }
};

namespace detail {

inline SparseSymMatrix select_principal(const SparseSymMatrix& a, const std::vector<int>& keep) {
  std::vector<int> pos(static_cast<std::size_t>(a.order()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) pos[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> t;
  const SpMat& m = a.matrix();
  for (int r = 0; r < m.outerSize(); ++r) {
    if (pos[static_cast<std::size_t>(r)] < 0) continue;
    for (SpMat::InnerIterator it(m, r); it; ++it) {
      const int c = pos[static_cast<std::size_t>(it.col())];
      if (c >= 0) t.emplace_back(pos[static_cast<std::size_t>(r)], c, it.value());
    }
  }
  return SparseSymMatrix::from_triplets(static_cast<Eigen::Index>(keep.size()), t);
}

}  // namespace detail

inline FemSystem apply_dirichlet_nullspace(const SparseSymMatrix& M, const SparseSymMatrix& K, const TriMesh& mesh,
                                           std::function<Vec(double)> g_D = {}) {
  FemSystem sys;
  sys.M = M;
  sys.K = K;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (!mesh.dirichlet.count(v)) sys.free_dofs.push_back(v);
  detail::require_arg(!sys.free_dofs.empty(), "apply_dirichlet_nullspace: every vertex is Dirichlet");
  sys.Mc = detail::select_principal(M, sys.free_dofs);
  sys.Kc = detail::select_principal(K, sys.free_dofs);
  sys.dirichlet_values = std::move(g_D);
  return sys;
}

/// y'' + A y = f obtained from M_c u'' + K_c u = F_c via M_c = L L^T,
/// A = L^{-1} K_c L^{-T}, y = L^T u.
struct ReducedWaveSystem {
  SecondOrderIVP ivp;
  Eigen::SparseMatrix<double> L;  // lower Cholesky factor of M_c (natural ordering)

  /// u = L^{-T} y on the free DoFs.
  Vec to_nodal(const Vec& y) const {
    return L.transpose().triangularView<Eigen::Upper>().solve(y);
  }
  Vec from_nodal(const Vec& u) const { return L.transpose() * u; }
};

inline ReducedWaveSystem reduce_to_standard_form(const FemSystem& sys, const Vec& u0, const Vec& v0,
                                                 std::function<Vec(double)> load = {}) {
  using ColSp = Eigen::SparseMatrix<double>;
  const ColSp mc = sys.Mc.matrix();
  Eigen::SimplicialLLT<ColSp, Eigen::Lower, Eigen::NaturalOrdering<int>> llt(mc);
  detail::require(llt.info() == Eigen::Success, ErrorCategory::convergence,
                  "reduce_to_standard_form: Cholesky of the mass matrix failed (not SPD)");
  ReducedWaveSystem red;
  red.L = llt.matrixL();
  const auto lower = red.L.triangularView<Eigen::Lower>();
  const Eigen::MatrixXd kc = sys.Kc.to_dense();
  Eigen::MatrixXd x = lower.solve(kc);                     // L^{-1} K_c
  Eigen::MatrixXd a = lower.solve(Eigen::MatrixXd(x.transpose()));  // L^{-1} (L^{-1} K_c)^T
  a = 0.5 * (a + a.transpose()).eval();
  red.ivp.A = SparseSymMatrix::from_dense(a);
  red.ivp.y0 = red.from_nodal(u0);
  red.ivp.y1 = red.from_nodal(v0);
  if (load) {
    const ColSp lcopy = red.L;
    red.ivp.forcing = [lcopy, load](double t) -> Vec {
      return lcopy.triangularView<Eigen::Lower>().solve(load(t));
    };
  }
  return red;
}

/// Gaussian bump 0.8 exp(-((x+0.3)^2 + (y+0.3)^2)/0.06).
inline double wave_demo_initial(double x, double y) {
  return 0.8 * std::exp(-((x + 0.3) * (x + 0.3)) / 0.06 - ((y + 0.3) * (y + 0.3)) / 0.06);
}

struct WaveDemo {
  TriMesh mesh;
  FemSystem system;
  ReducedWaveSystem reduced;
  Vec u0_nodal;  // interpolated initial displacement at every vertex
};

/// Homogeneous Dirichlet walls, zero forcing, zero initial velocity and
/// the Gaussian bump as initial displacement (interpolated at vertices).
inline WaveDemo wave_demo_problem(TriMesh mesh, double t_final = 1.0) {
  WaveDemo demo;
  demo.mesh = std::move(mesh);
  auto [M, K] = assemble_p1(demo.mesh);
  demo.system = apply_dirichlet_nullspace(M, K, demo.mesh);
  demo.u0_nodal = Vec(demo.mesh.num_vertices());
  for (int v = 0; v < demo.mesh.num_vertices(); ++v) {
    const auto& p = demo.mesh.vertices[static_cast<std::size_t>(v)];
    demo.u0_nodal(v) = demo.mesh.dirichlet.count(v) ? 0.0 : wave_demo_initial(p[0], p[1]);
  }
  const Vec u0 = demo.system.restrict(demo.u0_nodal);
  const Vec v0 = Vec::Zero(demo.system.num_free());
  demo.reduced = reduce_to_standard_form(demo.system, u0, v0);
  demo.reduced.ivp.t0 = 0.0;
  demo.reduced.ivp.tf = t_final;
  return demo;
}

/// 1/2 |v|^2 + 1/2 y^T A y.
inline double discrete_energy(const SparseSymMatrix& a, const Vec& y, const Vec& v) {
  return 0.5 * v.squaredNorm() + 0.5 * y.dot(a * y);
}

}  // namespace sincmf
