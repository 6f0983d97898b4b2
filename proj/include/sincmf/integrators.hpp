#pragma once

// Gautschi-type trigonometric integrator for y'' + A y = f(t) in its
// staggered one-step form
//
//   v_{1/2}   = sigma(h^2 A) y'(t0) + h/2 psi(h^2 A) (-A y_0 + f_0)
//   y_{n+1}   = y_n + h v_{n+1/2}
//   v_{n+1/2} = v_{n-1/2} + h psi(h^2 A) (-A y_n + f_n)
//
// with psi(z) = sinc(sqrt(z)/2)^2 and sigma(z) = sinc(sqrt(z)), and the
// Stormer-Verlet leapfrog obtained with psi = sigma = 1. How the filter
// products are computed is delegated to a FilterBackend.

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sincmf/bounds.hpp"
#include "sincmf/dense.hpp"
#include "sincmf/error.hpp"
#include "sincmf/expsum.hpp"
#include "sincmf/poles.hpp"
#include "sincmf/ratkrylov.hpp"
#include "sincmf/sparse.hpp"

namespace sincmf {

struct SecondOrderIVP {
  SparseSymMatrix A;
  std::function<Vec(double)> forcing;  // empty means f = 0
  Vec y0;
  Vec y1;  // initial velocity
  double t0 = 0.0;
  double tf = 1.0;

  Vec f(double t) const { return forcing ? forcing(t) : Vec::Zero(A.order()); }

  void validate() const {
    detail::require(y0.size() == A.order() && y1.size() == A.order(), ErrorCategory::dimension_mismatch,
                    "SecondOrderIVP: initial data does not match the order of A");
    detail::require_arg(tf > t0, "SecondOrderIVP: tf must exceed t0");
  }
};

struct IntegratorState {
  long n = 0;
  Vec y;       // y_n
  Vec v_half;  // v_{n+1/2}
  double h = 0.0;
  double t0 = 0.0;

  double time() const noexcept { return t0 + static_cast<double>(n) * h; }
};

/// Computes psi(h^2 A) v and sigma(h^2 A) v for a fixed (A, h).
class FilterBackend {
 public:
  virtual ~FilterBackend() = default;
  virtual void prepare(const SparseSymMatrix& a, double h) = 0;
  virtual Vec psi(const Vec& v) = 0;
  virtual Vec sigma(const Vec& v) = 0;
  virtual std::string name() const = 0;
  /// Pole count driving the backend (0 for pole-free backends).
  virtual int poles_used() const { return 0; }
};

/// psi = sigma = identity: reduces the scheme to Stormer-Verlet.
class IdentityBackend final : public FilterBackend {
 public:
  void prepare(const SparseSymMatrix&, double) override {}
  Vec psi(const Vec& v) override { return v; }
  Vec sigma(const Vec& v) override { return v; }
  std::string name() const override { return "identity"; }
};

/// Exact filters from a dense eigendecomposition of h^2 A.
class DenseBackend final : public FilterBackend {
 public:
  void prepare(const SparseSymMatrix& a, double h) override {
    eig_.emplace(DenseSymMatrix(a.scaled(h * h)));
  }
  Vec psi(const Vec& v) override { return eig().apply([](double x) { return sincmf::psi(x); }, v); }
  Vec sigma(const Vec& v) override { return eig().apply([](double x) { return sincmf::sigma(x); }, v); }
  std::string name() const override { return "dense"; }

 private:
  const SymEigen& eig() const {
    detail::require(eig_.has_value(), ErrorCategory::invalid_argument, "DenseBackend used before prepare()");
    return *eig_;
  }
  std::optional<SymEigen> eig_;
};

inline BoundKind bound_kind_for(PoleFamily f) {
  switch (f) {
    case PoleFamily::E: return BoundKind::En;
    case PoleFamily::L: return BoundKind::Fn;
    case PoleFamily::Lbar: return BoundKind::Ftilde;
    default: break;
  }
  throw Error(ErrorCategory::invalid_argument,
              "no a-priori bound for pole family '" + std::string(to_string(f)) + "'; use a fixed pole count");
}

/// Rational Krylov filters. Either a fixed family degree n, or a
/// tolerance: then n is the smallest degree whose a-priori bound on
/// [0, h^2 lambda_max * 1.01] is below the tolerance.
class RationalKrylovBackend final : public FilterBackend {
 public:
  struct Fixed {
    int n;
  };
  struct Tolerance {
    double tol;
  };

  RationalKrylovBackend(PoleFamily family, Fixed fixed, PoleMapping mapping = PoleMapping::squared)
      : family_(family), n_(fixed.n), mapping_(mapping) {}
  RationalKrylovBackend(PoleFamily family, Tolerance tol, PoleMapping mapping = PoleMapping::squared)
      : family_(family), tol_(tol.tol), mapping_(mapping) {
    (void)bound_kind_for(family);
  }

  void prepare(const SparseSymMatrix& a, double h) override {
    if (tol_) {
      zmax_ = h * h * estimate_spectral_radius(a) * 1.01;
      n_ = select_pole_count(bound_kind_for(family_), zmax_, *tol_);
      detail::require(n_ <= kMaxRootDegree, ErrorCategory::saturation,
                      "rational Krylov backend: tolerance needs " + std::to_string(n_) +
                          " poles, more than the supported 20");
    }
    filter_.emplace(a, h, make_poles(family_, n_), mapping_);
  }
  Vec psi(const Vec& v) override { return filter().psi(v); }
  Vec sigma(const Vec& v) override { return filter().sigma(v); }
  std::string name() const override { return "ratkrylov:" + std::string(to_string(family_)); }
  int poles_used() const override { return n_; }
  double zmax() const noexcept { return zmax_; }

 private:
  KrylovFilter& filter() {
    detail::require(filter_.has_value(), ErrorCategory::invalid_argument, "RationalKrylovBackend used before prepare()");
    return *filter_;
  }

  PoleFamily family_;
  int n_ = 0;
  std::optional<double> tol_;
  PoleMapping mapping_;
  double zmax_ = 0.0;
  std::optional<KrylovFilter> filter_;
};

/// Matrix-plane poles for exponential sums evaluated through square
/// roots of h^2 A: each exponential-Pade zero r gives the pole -r^2,
/// which stays off the nonnegative real axis.
inline PoleSet expsum_filter_poles(int k) {
  PoleSet p = poles_pade_exp(k);
  for (auto& z : p.poles) z = -(z * z);
  detail::sort_poles(p.poles);
  return p;
}

/// Filters from exponential sums: sigma(B) = sinc(sqrt B) with the rule on
/// (-1, 1), psi(B) = sinc^2(sqrt(B)/2) with the rule on (-2, 0). Square
/// roots are taken of the eigenvalues of B (dense) or of the projected
/// matrix (Krylov).
class ExpSumBackend final : public FilterBackend {
 public:
  ExpSumBackend(int nu, ExpSumInner inner, int k = 10)
      : sinc_plan_(make_expsum_plan(ExpSumTarget::sinc, nu)),
        sinc2_plan_(make_expsum_plan(ExpSumTarget::sinc2, nu)),
        inner_(inner),
        k_(k) {
    detail::require_arg(inner == ExpSumInner::dense || k >= 1, "expsum backend: k must be positive");
  }

  void prepare(const SparseSymMatrix& a, double h) override {
    b_ = a.scaled(h * h);
    trivial_ = h == 0.0 || a.is_zero();
    if (inner_ == ExpSumInner::dense) {
      eig_.emplace(DenseSymMatrix(b_));
    } else {
      poles_ = expsum_filter_poles(k_);
      solver_ = std::make_unique<ShiftedSolver>(b_);
    }
  }

  Vec psi(const Vec& v) override {
    return apply(v, [this](cplx z) { return expsum_sinc2_scalar(sinc2_plan_.rule, std::sqrt(z) / 2.0); });
  }
  Vec sigma(const Vec& v) override {
    return apply(v, [this](cplx z) { return expsum_sinc_scalar(sinc_plan_.rule, std::sqrt(z)); });
  }
  std::string name() const override { return "expsum"; }
  int poles_used() const override { return inner_ == ExpSumInner::dense ? 0 : k_; }

 private:
  template <class F>
  Vec apply(const Vec& v, F&& g) {
    if (trivial_) return v;
    if (inner_ == ExpSumInner::dense) {
      detail::require(eig_.has_value(), ErrorCategory::invalid_argument, "ExpSumBackend used before prepare()");
      return eig_->apply_complex([&g](double x) { return g(cplx{std::max(x, 0.0)}); }, v).real();
    }
    if (v.norm() == 0.0) return Vec::Zero(v.size());
    const auto s = build_space(b_, v, poles_, default_dimension(poles_), *solver_);
    return apply_function(s, std::forward<F>(g), v).real();
  }

  ExpSumPlan sinc_plan_, sinc2_plan_;
  ExpSumInner inner_;
  int k_;
  SparseSymMatrix b_;
  bool trivial_ = false;
  std::optional<SymEigen> eig_;
  PoleSet poles_;
  std::unique_ptr<ShiftedSolver> solver_;
};

namespace detail {

inline void check_finite(const IntegratorState& s) {
  require(s.y.allFinite() && s.v_half.allFinite(), ErrorCategory::blow_up,
          "integrator blow-up: non-finite state at step " + std::to_string(s.n) + " (t = " +
              std::to_string(s.time()) + ")");
}

inline long step_count(const SecondOrderIVP& ivp, double h) {
  require_arg(h > 0.0, "integrator: step size must be positive");
  const double span = ivp.tf - ivp.t0;
  const double steps = span / h;
  const long n = std::lround(steps);
  require_arg(n >= 1 && std::abs(static_cast<double>(n) * h - span) <= 1e-9 * std::max(1.0, std::abs(span)),
              "integrator: (tf - t0)/h = " + std::to_string(steps) + " is not an integer");
  return n;
}

}  // namespace detail

/// Prepares the backend for (A, h) and computes v_{1/2}.
inline IntegratorState gautschi_init(const SecondOrderIVP& ivp, double h, FilterBackend& backend) {
  ivp.validate();
  backend.prepare(ivp.A, h);
  IntegratorState s;
  s.h = h;
  s.t0 = ivp.t0;
  s.y = ivp.y0;
  const Vec rhs = -(ivp.A * ivp.y0) + ivp.f(ivp.t0);
  s.v_half = backend.sigma(ivp.y1) + (0.5 * h) * backend.psi(rhs);
  detail::check_finite(s);
  return s;
}

/// (y_n, v_{n+1/2}) -> (y_{n+1}, v_{n+3/2}); one psi product, one matvec.
inline IntegratorState gautschi_step(const IntegratorState& state, const SecondOrderIVP& ivp, FilterBackend& backend) {
  IntegratorState s;
  s.n = state.n + 1;
  s.h = state.h;
  s.t0 = state.t0;
  s.y = state.y + state.h * state.v_half;
  const Vec rhs = -(ivp.A * s.y) + ivp.f(s.time());
  s.v_half = state.v_half + state.h * backend.psi(rhs);
  detail::check_finite(s);
  return s;
}

struct TrajectoryOptions {
  /// Store every `sample_every`-th state (the final state is always
  /// stored); 0 stores the initial and final states only.
  long sample_every = 1;
  bool store_velocity = false;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> y;
  std::vector<Vec> v_half;  // v_{n+1/2} for each stored y_n, if requested
  IntegratorState final_state;
  int poles_used = 0;
  long steps = 0;
};

namespace detail {

inline void record(Trajectory& tr, const IntegratorState& s, const TrajectoryOptions& opt) {
  tr.times.push_back(s.time());
  tr.y.push_back(s.y);
  if (opt.store_velocity) tr.v_half.push_back(s.v_half);
}

inline bool should_record(long n, long total, const TrajectoryOptions& opt) {
  if (n == 0 || n == total) return true;
  return opt.sample_every > 0 && n % opt.sample_every == 0;
}

}  // namespace detail

/// Runs the scheme from t0 to tf with step h.
inline Trajectory gautschi_integrate(const SecondOrderIVP& ivp, double h, FilterBackend& backend,
                                     const TrajectoryOptions& opt = {}) {
  const long steps = detail::step_count(ivp, h);
  Trajectory tr;
  tr.steps = steps;
  IntegratorState s = gautschi_init(ivp, h, backend);
  tr.poles_used = backend.poles_used();
  detail::record(tr, s, opt);
  for (long n = 1; n <= steps; ++n) {
    s = gautschi_step(s, ivp, backend);
    if (detail::should_record(n, steps, opt)) detail::record(tr, s, opt);
  }
  tr.final_state = std::move(s);
  return tr;
}

/// Leapfrog: the same staggered recursion with psi = sigma = identity.
inline Trajectory stormer_verlet_integrate(const SecondOrderIVP& ivp, double h, long n_steps,
                                           const TrajectoryOptions& opt = {}) {
  ivp.validate();
  detail::require_arg(h > 0.0 && n_steps >= 0, "stormer_verlet_integrate: invalid step data");
  Trajectory tr;
  tr.steps = n_steps;
  IdentityBackend id;
  IntegratorState s = gautschi_init(ivp, h, id);
  detail::record(tr, s, opt);
  for (long n = 1; n <= n_steps; ++n) {
    s = gautschi_step(s, ivp, id);
    if (detail::should_record(n, n_steps, opt)) detail::record(tr, s, opt);
  }
  tr.final_state = std::move(s);
  return tr;
}

}  // namespace sincmf
