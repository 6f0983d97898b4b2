#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "sincmf/fem.hpp"
#include "sincmf/integrators.hpp"

using sincmf::TriMesh;
using sincmf::Vec;

namespace {

// Sum of area/3 over the triangles incident to each vertex.
Vec patch_area_thirds(const TriMesh& mesh) {
  Vec r = Vec::Zero(mesh.num_vertices());
  for (int t = 0; t < mesh.num_triangles(); ++t)
    for (int v : mesh.triangles[static_cast<std::size_t>(t)]) r(v) += mesh.signed_area(t) / 3.0;
  return r;
}

TriMesh jittered_mesh(int m, std::mt19937_64& gen) {
  auto mesh = sincmf::structured_mesh(m);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  const double step = 2.0 / m;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (!mesh.dirichlet.count(v)) {
      mesh.vertices[static_cast<std::size_t>(v)][0] += u(gen) * step;
      mesh.vertices[static_cast<std::size_t>(v)][1] += u(gen) * step;
    }
  return mesh;
}

double rel(const Vec& a, const Vec& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST(P1Element, UnitRightTriangle) {
  const auto e = sincmf::p1_element({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0});
  Eigen::Matrix3d m, k;
  m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  m /= 24.0;
  k << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  k *= 0.5;
  EXPECT_LE((e.mass - m).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((e.stiffness - k).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(sincmf::p1_element({0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}), sincmf::Error);
}

TEST(StructuredMesh, SmallestMesh) {
  const auto mesh = sincmf::structured_mesh(1);
  EXPECT_EQ(mesh.num_vertices(), 4);
  EXPECT_EQ(mesh.num_triangles(), 2);
  EXPECT_EQ(mesh.dirichlet.size(), 4u);
  EXPECT_DOUBLE_EQ(mesh.area(), 4.0);
  EXPECT_THROW(sincmf::structured_mesh(0), sincmf::Error);
}

TEST(StructuredMesh, Counts) {
  for (int m : {2, 5, 16, 32}) {
    const auto mesh = sincmf::structured_mesh(m);
    EXPECT_EQ(mesh.num_vertices(), (m + 1) * (m + 1));
    EXPECT_EQ(mesh.num_triangles(), 2 * m * m);
    EXPECT_EQ(mesh.dirichlet.size(), static_cast<std::size_t>(4 * m));
    EXPECT_NEAR(mesh.area(), 4.0, 1e-13);
    for (int t = 0; t < mesh.num_triangles(); ++t) EXPECT_GT(mesh.signed_area(t), 0.0);
  }
  EXPECT_NEAR(sincmf::structured_mesh(32).max_edge_length(), 2.0 * std::sqrt(2.0) / 32.0, 1e-15);
  EXPECT_NEAR(sincmf::structured_mesh(32).max_edge_length(), 0.0884, 1e-4);
}

TEST(MeshIo, RoundTrip) {
  const auto mesh = sincmf::structured_mesh(4);
  std::stringstream ss;
  sincmf::save_mesh(mesh, ss);
  const auto back = sincmf::load_mesh(ss);
  EXPECT_EQ(back.vertices, mesh.vertices);
  EXPECT_EQ(back.triangles, mesh.triangles);
  EXPECT_EQ(back.dirichlet, mesh.dirichlet);
}

TEST(MeshIo, ClockwiseTriangleFixedWithWarning) {
  std::istringstream is("3 1 0\n0 0\n1 0\n0 1\n0 2 1\n");
  std::vector<std::string> warnings;
  const auto mesh = sincmf::load_mesh(is, &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("triangle 0"), std::string::npos);
  EXPECT_NEAR(mesh.signed_area(0), 0.5, 1e-15);
}

TEST(MeshIo, OutOfRangeIndexNamesTriangle) {
  std::istringstream is("3 2 0\n0 0\n1 0\n0 1\n0 1 2\n0 1 7\n");
  try {
    sincmf::load_mesh(is);
    FAIL();
  } catch (const sincmf::Error& e) {
    EXPECT_EQ(e.category(), sincmf::ErrorCategory::parse_error);
    EXPECT_NE(std::string(e.what()).find("triangle 1"), std::string::npos) << e.what();
  }
}

TEST(MeshIo, MalformedLineReportsLineNumber) {
  std::istringstream is("3 1 0\n0 0\n1 zero\n0 1\n0 1 2\n");
  try {
    sincmf::load_mesh(is);
    FAIL();
  } catch (const sincmf::Error& e) {
    EXPECT_EQ(e.category(), sincmf::ErrorCategory::parse_error);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(MeshIo, DegenerateElementRejected) {
  std::istringstream is("3 1 0\n0 0\n1 1\n2 2\n0 1 2\n");
  EXPECT_THROW(sincmf::load_mesh(is), sincmf::Error);
}

TEST(Assembly, PartitionOfUnityAndKernel) {
  std::mt19937_64 gen(1);
  for (int m : {1, 3, 8, 20}) {
    const auto mesh = m % 2 ? sincmf::structured_mesh(m) : jittered_mesh(m, gen);
    const auto [M, K] = sincmf::assemble_p1(mesh);
    const Vec ones = Vec::Ones(mesh.num_vertices());
    EXPECT_NEAR(ones.dot(M * ones), mesh.area(), 1e-10 * mesh.area());
    EXPECT_LE((M * ones - patch_area_thirds(mesh)).norm(), 1e-13);
    EXPECT_LE((K * ones).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Assembly, MassIsPositiveDefinite) {
  const auto [M, K] = sincmf::assemble_p1(sincmf::structured_mesh(6));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(M.to_dense()), ek(K.to_dense());
  EXPECT_GT(em.eigenvalues()(0), 0.0);
  EXPECT_GT(ek.eigenvalues()(0), -1e-12);
}

TEST(AssemblyProperty, PatchTest) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mesh = jittered_mesh(4 + trial, gen);
    const auto [M, K] = sincmf::assemble_p1(mesh);
    const double a = c(gen), b = c(gen), d = c(gen);
    Vec u(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v)
      u(v) = a + b * mesh.vertices[static_cast<std::size_t>(v)][0] + d * mesh.vertices[static_cast<std::size_t>(v)][1];
    const Vec ku = K * u;
    // interior rows carry no flux
    for (int v = 0; v < mesh.num_vertices(); ++v)
      if (!mesh.dirichlet.count(v)) {
        EXPECT_NEAR(ku(v), 0.0, 1e-10);
      }
    // boundary rows: flux of grad u through the boundary
    EXPECT_NEAR(ku.sum(), 0.0, 1e-10);
  }
}

TEST(Dirichlet, TwoByTwoPatch) {
  const auto mesh = sincmf::structured_mesh(2);
  const auto [M, K] = sincmf::assemble_p1(mesh);
  const auto sys = sincmf::apply_dirichlet_nullspace(M, K, mesh);
  ASSERT_EQ(sys.num_free(), 1);
  EXPECT_EQ(sys.free_dofs[0], 4);
  // the centre touches six triangles of area 1/2: self-mass 2 * area / 12 each
  EXPECT_NEAR(sys.Mc.to_dense()(0, 0), 6.0 * 2.0 * 0.5 / 12.0, 1e-15);
  EXPECT_NEAR(sys.Kc.to_dense()(0, 0), K.to_dense()(4, 4), 0.0);
}

TEST(Dirichlet, HomogeneousLoadRestriction) {
  const auto mesh = sincmf::structured_mesh(3);
  const auto [M, K] = sincmf::assemble_p1(mesh);
  const auto sys = sincmf::apply_dirichlet_nullspace(M, K, mesh);
  const Vec F = Vec::LinSpaced(16, 0.0, 1.0), G = Vec::Constant(16, 0.25);
  EXPECT_EQ(sys.restricted_load(F, G, 0.0), sys.restrict(F + G));
}

TEST(Dirichlet, InhomogeneousBoundaryData) {
  const auto mesh = sincmf::structured_mesh(3);
  const auto [M, K] = sincmf::assemble_p1(mesh);
  Vec g = Vec::Zero(16);
  for (int v : mesh.dirichlet) g(v) = 1.0;
  const auto sys = sincmf::apply_dirichlet_nullspace(M, K, mesh, [g](double) { return g; });
  // the constant 1 is a discrete harmonic function: K_c 1 = restricted K g_D term
  const Vec ones_free = Vec::Ones(sys.num_free());
  const Vec zero = Vec::Zero(16);
  EXPECT_LE((sys.Kc * ones_free - sys.restricted_load(zero, zero, 0.0)).norm(), 1e-12);
  EXPECT_LE((sys.extend(ones_free, 0.0) - Vec::Ones(16)).norm(), 0.0);
}

TEST(Dirichlet, AllDirichletRejected) {
  const auto mesh = sincmf::structured_mesh(1);
  const auto [M, K] = sincmf::assemble_p1(mesh);
  EXPECT_THROW(sincmf::apply_dirichlet_nullspace(M, K, mesh), sincmf::Error);
}

TEST(Dirichlet, GeneralizedSpectrumBounds) {
  const auto mesh = sincmf::structured_mesh(32);
  const auto [M, K] = sincmf::assemble_p1(mesh);
  const auto sys = sincmf::apply_dirichlet_nullspace(M, K, mesh);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.Kc.to_dense(), sys.Mc.to_dense());
  ASSERT_EQ(es.info(), Eigen::Success);
  // conforming Galerkin bounds the first Dirichlet eigenvalue pi^2/2 of [-1,1]^2 from above
  const double first = std::numbers::pi * std::numbers::pi / 2.0;
  EXPECT_GE(es.eigenvalues()(0), first);
  EXPECT_LE(es.eigenvalues()(0), 1.01 * first);
  // the largest eigenvalue is capped by the largest element eigenvalue
  double cap = 0.0;
  for (const auto& t : mesh.triangles) {
    const auto e = sincmf::p1_element(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> el(e.stiffness, e.mass);
    cap = std::max(cap, el.eigenvalues().maxCoeff());
  }
  EXPECT_LE(es.eigenvalues().maxCoeff(), cap * (1.0 + 1e-12));
  EXPECT_GE(es.eigenvalues().maxCoeff(), 0.5 * cap);
}

TEST(WaveDemo, InitialData) {
  EXPECT_EQ(sincmf::wave_demo_initial(-0.3, -0.3), 0.8);
  const auto demo = sincmf::wave_demo_problem(sincmf::structured_mesh(20));
  // vertex (-0.3, -0.3) sits at grid index (7, 7)
  const int peak = 7 * 21 + 7;
  EXPECT_NEAR(demo.mesh.vertices[peak][0], -0.3, 1e-15);
  EXPECT_NEAR(demo.u0_nodal(peak), 0.8, 1e-15);
  EXPECT_EQ(demo.reduced.ivp.y1, Vec::Zero(demo.system.num_free()));
  EXPECT_FALSE(static_cast<bool>(demo.reduced.ivp.forcing));
  const Vec u0 = demo.reduced.to_nodal(demo.reduced.ivp.y0);
  EXPECT_LE((u0 - demo.system.restrict(demo.u0_nodal)).norm(), 1e-13);
}

TEST(WaveDemo, ReducedMatrixSymmetricPsdAndCongruent) {
  const auto demo = sincmf::wave_demo_problem(sincmf::structured_mesh(8));
  const Eigen::MatrixXd a = demo.reduced.ivp.A.to_dense();
  EXPECT_LE((a - a.transpose()).cwiseAbs().maxCoeff(), 1e-10 * a.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  EXPECT_GE(es.eigenvalues()(0), -1e-10);
  // same spectrum as the pencil (K_c, M_c)
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gs(demo.system.Kc.to_dense(), demo.system.Mc.to_dense());
  EXPECT_LE((es.eigenvalues() - gs.eigenvalues()).cwiseAbs().maxCoeff(), 1e-9 * gs.eigenvalues().maxCoeff());
}

TEST(WaveDemo, EnergyAndBackendAgreement) {
  const auto demo = sincmf::wave_demo_problem(sincmf::structured_mesh(16), 1.0);
  const auto& ivp = demo.reduced.ivp;
  const double h = 1e-2;
  sincmf::DenseBackend dense;
  const auto tr = sincmf::gautschi_integrate(ivp, h, dense, {.sample_every = 1, .store_velocity = true});
  // velocity at integer times: mean of the neighbouring half-step velocities
  const Vec v0 = ivp.y1;
  const double e0 = sincmf::discrete_energy(ivp.A, ivp.y0, v0);
  double lo = 1.0, hi = 1.0;
  for (std::size_t n = 1; n < tr.y.size(); ++n) {
    const Vec v = 0.5 * (tr.v_half[n - 1] + tr.v_half[n]);
    const double r = sincmf::discrete_energy(ivp.A, tr.y[n], v) / e0;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  EXPECT_GE(lo, 0.98);
  EXPECT_LE(hi, 1.02);

  sincmf::RationalKrylovBackend rk(sincmf::PoleFamily::E, sincmf::RationalKrylovBackend::Fixed{4});
  const auto trk = sincmf::gautschi_integrate(ivp, h, rk, {.sample_every = 0});
  const Vec ud = demo.reduced.to_nodal(tr.final_state.y), uk = demo.reduced.to_nodal(trk.final_state.y);
  EXPECT_LE(rel(uk, ud), 1e-5);
}
