// sincmf command-line harness: pole tables, test matrices and the
// benchmark sweeps, all written as CSV.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sincmf/sincmf.hpp"

using namespace sincmf;

namespace {

struct Common {
  unsigned long seed = 42;
  std::string out;
  bool small = false;
  bool quiet = false;
  bool no_timing = false;
  std::string gnuplot;
};

// RFC-4180 field quoting.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string num(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits, x);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      detail::require(static_cast<bool>(file_), ErrorCategory::invalid_argument, "cannot open output file " + path);
    }
  }
  void row(const std::vector<std::string>& fields) {
    std::ostream& os = file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout;
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
    os << '\n';
    os.flush();
  }

 private:
  std::ofstream file_;
};

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_;
};

std::string timing(const Common& c, double s) { return c.no_timing ? "0" : num(s, 3); }

void progress(const Common& c, const std::string& msg) {
  if (!c.quiet) std::cerr << msg << '\n';
}

Vec random_vector(Eigen::Index n, unsigned long seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  Vec v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

void write_gnuplot(const std::string& path, const std::string& data, const std::string& xcol, const std::string& ycol,
                   const std::string& group_col, bool logx) {
  if (path.empty()) return;
  std::ofstream os(path);
  detail::require(static_cast<bool>(os), ErrorCategory::invalid_argument, "cannot open gnuplot script " + path);
  os << "set datafile separator ','\n"
     << "set key outside\n"
     << "set logscale y\n"
     << (logx ? "set logscale x\n" : "") << "set xlabel '" << xcol << "'\n"
     << "set ylabel '" << ycol << "'\n";
  if (group_col.empty()) {
    os << "plot '" << data << "' using '" << xcol << "':'" << ycol << "' with linespoints title '" << ycol << "'\n";
  } else {
    os << "groups = system(\"tail -n +2 " << data << " | cut -d, -f1 | uniq\")\n"
       << "plot for [g in groups] '" << data << "' using (strcol('" << group_col << "') eq g ? column('" << xcol
       << "') : NaN):'" << ycol << "' with linespoints title g\n";
  }
}

// ---- matrices -------------------------------------------------------------

SparseSymMatrix fem_matrix(int m) { return wave_demo_problem(structured_mesh(m)).reduced.ivp.A; }

SparseSymMatrix bench_matrix(const std::string& name, const Common& c, int n_override) {
  if (name == "lap1d") return laplacian_1d(n_override > 0 ? n_override : (c.small ? 256 : 2048));
  if (name == "lap2d") return laplacian_2d(n_override > 0 ? n_override : (c.small ? 256 : 4096));
  if (name == "fem") return fem_matrix(n_override > 0 ? n_override : (c.small ? 8 : 33));
  throw Error(ErrorCategory::invalid_argument, "unknown matrix '" + name + "' (use lap1d, lap2d or fem)");
}

void write_matrix_market(const SparseSymMatrix& a, const std::string& path) {
  std::ofstream file;
  if (!path.empty() && path != "-") {
    file.open(path);
    detail::require(static_cast<bool>(file), ErrorCategory::invalid_argument, "cannot open output file " + path);
  }
  std::ostream& os = file.is_open() ? static_cast<std::ostream&>(file) : std::cout;
  os.precision(17);
  const SpMat& m = a.matrix();
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.order() << ' ' << a.order() << ' ' << m.nonZeros() << '\n';
  for (int r = 0; r < m.outerSize(); ++r)
    for (SpMat::InnerIterator it(m, r); it; ++it) os << r + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

// ---- backend descriptors ---------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(s, &pos);
    if (pos == s.size()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCategory::parse_error, "cannot parse " + what + " '" + s + "' as a number");
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(s, &pos);
    if (pos == s.size()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCategory::parse_error, "cannot parse " + what + " '" + s + "' as an integer");
}

bool is_integer_literal(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

// dense | ratkrylov:FAMILY:TOL | ratkrylov:FAMILY:N | expsum:NU:K | expsum:NU:dense
std::unique_ptr<FilterBackend> make_backend(const std::string& desc, PoleMapping mapping) {
  const auto parts = split(desc, ':');
  detail::require(!parts.empty(), ErrorCategory::parse_error, "empty backend descriptor");
  if (parts[0] == "dense" && parts.size() == 1) return std::make_unique<DenseBackend>();
  if (parts[0] == "verlet" && parts.size() == 1) return std::make_unique<IdentityBackend>();
  if (parts[0] == "ratkrylov" && parts.size() == 3) {
    const PoleFamily fam = parse_pole_family(parts[1]);
    if (is_integer_literal(parts[2]))
      return std::make_unique<RationalKrylovBackend>(fam, RationalKrylovBackend::Fixed{parse_int(parts[2], "pole count")},
                                                     mapping);
    const double tol = parse_double(parts[2], "tolerance");
    detail::require_arg(tol > 0.0, "backend tolerance must be positive");
    return std::make_unique<RationalKrylovBackend>(fam, RationalKrylovBackend::Tolerance{tol}, mapping);
  }
  if (parts[0] == "expsum" && parts.size() == 3) {
    const int nu = parse_int(parts[1], "quadrature size");
    if (parts[2] == "dense") return std::make_unique<ExpSumBackend>(nu, ExpSumInner::dense);
    return std::make_unique<ExpSumBackend>(nu, ExpSumInner::rational_krylov, parse_int(parts[2], "pole count"));
  }
  throw Error(ErrorCategory::parse_error,
              "unknown backend '" + desc +
                  "' (use dense, verlet, ratkrylov:FAMILY:TOL, ratkrylov:FAMILY:N, expsum:NU:K or expsum:NU:dense)");
}

PoleMapping parse_mapping(const std::string& s) {
  if (s == "squared") return PoleMapping::squared;
  if (s == "direct") return PoleMapping::direct;
  throw Error(ErrorCategory::parse_error, "unknown pole mapping '" + s + "' (use squared or direct)");
}

// ---- subcommands -------------------------------------------------------------

struct PolesArgs {
  std::string family = "E";
  int n = 1;
};

void cmd_poles(const Common& c, const PolesArgs& a) {
  const PoleSet ps = make_poles(parse_pole_family(a.family), a.n);
  CsvWriter w(c.out);
  w.row({"re", "im"});
  for (const auto& z : ps.poles) w.row({num(z.real(), 16), num(z.imag(), 16)});
}

struct MatrixArgs {
  std::string name = "lap1d";
  int n = 8;
};

void cmd_matrix(const Common& c, const MatrixArgs& a) {
  SparseSymMatrix m;
  if (a.name == "lap1d") m = laplacian_1d(a.n);
  else if (a.name == "lap2d") m = laplacian_2d(a.n);
  else if (a.name == "rutishauser") m = rutishauser(a.n);
  else throw Error(ErrorCategory::invalid_argument, "unknown matrix '" + a.name + "' (use lap1d, lap2d or rutishauser)");
  write_matrix_market(m, c.out);
}

struct PolesBenchArgs {
  std::string matrix = "lap1d";
  int size = 0;
  int n_max = 10;
  std::string families = "E,L,Lbar,pade-sinc";
  double stagnation_ratio = 0.9;
};

void cmd_poles_bench(const Common& c, const PolesBenchArgs& a) {
  const SparseSymMatrix m = bench_matrix(a.matrix, c, a.size);
  detail::require(m.order() <= kDenseOracleMaxOrder, ErrorCategory::scale_guard,
                  "poles-bench: dense oracle limited to order 5000");
  progress(c, "poles-bench: " + a.matrix + " of order " + std::to_string(m.order()) + ", computing dense oracle");
  const Vec v = random_vector(m.order(), c.seed);
  const Vec ref = sinc_apply_dense(DenseSymMatrix(m), v);
  const double ref_norm = ref.norm();
  CsvWriter w(c.out);
  w.row({"family", "n", "k", "rel_error", "seconds", "stagnated"});
  for (const auto& fname : split(a.families, ',')) {
    const PoleFamily fam = parse_pole_family(fname);
    double best = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= a.n_max; ++n) {
      if (fam == PoleFamily::PadeSinc && (n % 2 != 0 || n > 10)) continue;
      const PoleSet ps = make_poles(fam, n);
      const int k = default_dimension(ps);
      Stopwatch sw;
      const Vec y = sinc_apply(m, v, ps, k);
      const double secs = sw.seconds();
      const double err = (y - ref).norm() / ref_norm;
      const bool stagnated = std::isfinite(best) && err > a.stagnation_ratio * best;
      best = std::min(best, err);
      w.row({std::string(to_string(fam)), std::to_string(n), std::to_string(k), num(err), timing(c, secs),
             stagnated ? "1" : "0"});
    }
  }
  write_gnuplot(c.gnuplot, c.out, "n", "rel_error", "family", false);
}

struct ExpSumBenchArgs {
  std::string matrix = "lap1d";
  int size = 0;
  int nu_max = 15;
  std::string inner = "krylov";
  int k = 0;
};

void cmd_expsum_bench(const Common& c, const ExpSumBenchArgs& a) {
  const SparseSymMatrix m = bench_matrix(a.matrix, c, a.size);
  detail::require(m.order() <= kDenseOracleMaxOrder, ErrorCategory::scale_guard,
                  "expsum-bench: dense oracle limited to order 5000");
  ExpSumInner inner;
  if (a.inner == "dense") inner = ExpSumInner::dense;
  else if (a.inner == "krylov") inner = ExpSumInner::rational_krylov;
  else throw Error(ErrorCategory::parse_error, "unknown inner method '" + a.inner + "' (use dense or krylov)");
  const int k = a.k > 0 ? a.k : (a.matrix == "lap1d" ? 15 : 20);
  progress(c, "expsum-bench: " + a.matrix + " of order " + std::to_string(m.order()) + ", computing dense oracle");
  const Vec v = random_vector(m.order(), c.seed);
  const Vec ref = sinc_apply_dense(DenseSymMatrix(m), v);
  const PoleSet poles = expsum_default_poles(k);
  CsvWriter w(c.out);
  w.row({"nu", "rel_error", "seconds"});
  for (int nu = 1; nu <= a.nu_max; ++nu) {
    const auto plan = make_expsum_plan(ExpSumTarget::sinc, nu, inner, poles);
    Stopwatch sw;
    const Vec y = expsum_sinc(m, v, plan);
    const double secs = sw.seconds();
    w.row({std::to_string(nu), num((y - ref).norm() / ref.norm()), timing(c, secs)});
  }
  write_gnuplot(c.gnuplot, c.out, "nu", "rel_error", "", false);
}

struct ConvergeArgs {
  std::string problem = "synthetic";
  int N = 20;
  std::string h_list = "1e-1,1e-2,1e-3";
  std::string backend = "dense";
  std::string mapping = "squared";
  double T = 1.0;
};

void cmd_converge(const Common& c, const ConvergeArgs& a) {
  detail::require(a.problem == "synthetic", ErrorCategory::invalid_argument,
                  "unknown problem '" + a.problem + "' (only synthetic is available)");
  const SyntheticProblem p = synthetic_problem(a.N);
  const SyntheticReference reference(p);
  const Vec ref = reference(a.T);
  const SecondOrderIVP ivp = to_ivp(p, a.T);
  const PoleMapping mapping = parse_mapping(a.mapping);
  CsvWriter w(c.out);
  w.row({"h", "n_poles", "rel_error", "observed_order", "seconds"});
  double prev_h = 0.0, prev_err = 0.0;
  for (const auto& hs : split(a.h_list, ',')) {
    const double h = parse_double(hs, "step size");
    auto backend = make_backend(a.backend, mapping);
    progress(c, "converge: h = " + hs + " with " + backend->name());
    Stopwatch sw;
    const auto tr = gautschi_integrate(ivp, h, *backend, TrajectoryOptions{0, false});
    const double secs = sw.seconds();
    const double err = (tr.final_state.y - ref).norm() / ref.norm();
    std::string order = "";
    if (prev_h > 0.0 && err > 0.0 && prev_err > 0.0) order = num(std::log(prev_err / err) / std::log(prev_h / h), 4);
    w.row({num(h, 4), std::to_string(tr.poles_used), num(err), order, timing(c, secs)});
    prev_h = h;
    prev_err = err;
  }
  write_gnuplot(c.gnuplot, c.out, "h", "rel_error", "", true);
}

struct WaveArgs {
  int m = 32;
  std::string mesh;
  double h = 1e-2;
  double T = 1.0;
  std::string backend = "dense";
  std::string mapping = "squared";
  std::string out_prefix = "wave";
  long energy_every = 1;
};

void cmd_wave(const Common& c, const WaveArgs& a) {
  TriMesh mesh;
  if (!a.mesh.empty()) {
    std::vector<std::string> warnings;
    mesh = load_mesh(a.mesh, &warnings);
    for (const auto& msg : warnings) std::cerr << "warning: " << a.mesh << ": " << msg << '\n';
  } else {
    mesh = structured_mesh(c.small ? 8 : a.m);
  }
  const WaveDemo demo = wave_demo_problem(std::move(mesh), a.T);
  progress(c, "wave: " + std::to_string(demo.system.num_free()) + " free DoFs");
  auto backend = make_backend(a.backend, parse_mapping(a.mapping));
  const auto& ivp = demo.reduced.ivp;
  const long steps = detail::step_count(ivp, a.h);

  CsvWriter energy(a.out_prefix + "_energy.csv");
  energy.row({"t", "E"});
  // Velocity at t_n is the mean of the neighbouring half-step velocities.
  IntegratorState s = gautschi_init(ivp, a.h, *backend);
  Vec v_prev = ivp.y1;
  for (long n = 0;; ++n) {
    const Vec v_n = n == 0 ? ivp.y1 : Vec(0.5 * (v_prev + s.v_half));
    if (n == 0 || n == steps || (a.energy_every > 0 && n % a.energy_every == 0))
      energy.row({num(s.time(), 8), num(discrete_energy(ivp.A, s.y, v_n), 12)});
    if (n == steps) break;
    v_prev = s.v_half;
    s = gautschi_step(s, ivp, *backend);
  }

  const Vec u = demo.system.extend(demo.reduced.to_nodal(s.y), s.time());
  CsvWriter sol(a.out_prefix + "_solution.csv");
  sol.row({"vertex", "x", "y", "u"});
  for (int i = 0; i < demo.mesh.num_vertices(); ++i) {
    const auto& p = demo.mesh.vertices[static_cast<std::size_t>(i)];
    sol.row({std::to_string(i), num(p[0], 10), num(p[1], 10), num(u(i), 12)});
  }
  if (!c.gnuplot.empty()) write_gnuplot(c.gnuplot, a.out_prefix + "_energy.csv", "t", "E", "", false);
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Seed for random vectors")->capture_default_str();
  sub->add_option("--out", c.out, "Output CSV file (stdout if omitted)");
  sub->add_flag("--small", c.small, "Scaled-down default sizes");
  sub->add_flag("--quiet", c.quiet, "No progress messages on stderr");
  sub->add_flag("--no-timing", c.no_timing, "Write 0 in timing columns");
  sub->add_option("--gnuplot", c.gnuplot, "Also write a gnuplot script to this file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sincmf: sinc-type matrix functions and Gautschi integrators"};
  app.require_subcommand(1);
  Common common;

  PolesArgs poles_args;
  auto* poles = app.add_subcommand("poles", "Print a pole set as CSV rows re,im");
  add_common(poles, common);
  poles->add_option("--family", poles_args.family, "E, L, Lbar, pade-sinc or pade-exp")->required();
  poles->add_option("--n", poles_args.n, "Generating degree")->required();

  MatrixArgs matrix_args;
  auto* matrix = app.add_subcommand("matrix", "Write a test matrix in Matrix Market coordinate format");
  add_common(matrix, common);
  matrix->add_option("--name", matrix_args.name, "lap1d, lap2d or rutishauser")->required();
  matrix->add_option("--n", matrix_args.n, "Order")->required();

  PolesBenchArgs pb_args;
  auto* pb = app.add_subcommand("poles-bench", "Rational Krylov sinc(A)v error for each pole family");
  add_common(pb, common);
  pb->add_option("--matrix", pb_args.matrix, "lap1d, lap2d or fem")->capture_default_str();
  pb->add_option("--size", pb_args.size, "Order (lap1d, lap2d) or mesh divisions (fem)");
  pb->add_option("--n-max", pb_args.n_max, "Largest family degree")->capture_default_str();
  pb->add_option("--families", pb_args.families, "Comma-separated families")->capture_default_str();

  ExpSumBenchArgs eb_args;
  auto* eb = app.add_subcommand("expsum-bench", "Exponential-sum sinc(A)v error versus quadrature size");
  add_common(eb, common);
  eb->add_option("--matrix", eb_args.matrix, "lap1d, lap2d or fem")->capture_default_str();
  eb->add_option("--size", eb_args.size, "Order (lap1d, lap2d) or mesh divisions (fem)");
  eb->add_option("--nu-max", eb_args.nu_max, "Largest number of quadrature nodes")->capture_default_str();
  eb->add_option("--inner", eb_args.inner, "dense or krylov")->capture_default_str();
  eb->add_option("--k", eb_args.k, "Exponential Pade poles (default 15 for lap1d, 20 otherwise)");

  ConvergeArgs cv_args;
  auto* cv = app.add_subcommand("converge", "Step-size sweep on the synthetic problem");
  add_common(cv, common);
  cv->add_option("--problem", cv_args.problem, "Problem name")->capture_default_str();
  cv->add_option("--N", cv_args.N, "Matrix size")->capture_default_str();
  cv->add_option("--h-list", cv_args.h_list, "Comma-separated step sizes")->capture_default_str();
  cv->add_option("--backend", cv_args.backend, "dense, ratkrylov:FAMILY:TOL|N, expsum:NU:K|dense")
      ->capture_default_str();
  cv->add_option("--mapping", cv_args.mapping, "squared or direct")->capture_default_str();
  cv->add_option("--T", cv_args.T, "Final time")->capture_default_str();

  WaveArgs wv_args;
  auto* wv = app.add_subcommand("wave", "P1 wave demo on [-1,1]^2");
  wv->set_help_flag("--help", "Print this help message and exit");
  add_common(wv, common);
  wv->add_option("--m", wv_args.m, "Divisions per side of the structured mesh")->capture_default_str();
  wv->add_option("--mesh", wv_args.mesh, "Mesh file instead of the structured mesh");
  wv->add_option("--h", wv_args.h, "Time step")->capture_default_str();
  wv->add_option("--T", wv_args.T, "Final time")->capture_default_str();
  wv->add_option("--backend", wv_args.backend, "dense, ratkrylov:FAMILY:TOL|N, expsum:NU:K|dense")
      ->capture_default_str();
  wv->add_option("--mapping", wv_args.mapping, "squared or direct")->capture_default_str();
  wv->add_option("--out-prefix", wv_args.out_prefix, "Prefix of the two output files")->capture_default_str();
  wv->add_option("--energy-every", wv_args.energy_every, "Energy sampling stride")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error[" << to_string(ErrorCategory::parse_error) << "]: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*poles) cmd_poles(common, poles_args);
    else if (*matrix) cmd_matrix(common, matrix_args);
    else if (*pb) cmd_poles_bench(common, pb_args);
    else if (*eb) cmd_expsum_bench(common, eb_args);
    else if (*cv) cmd_converge(common, cv_args);
    else if (*wv) cmd_wave(common, wv_args);
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.category()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
