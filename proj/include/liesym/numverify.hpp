#ifndef LIESYM_NUMVERIFY_HPP
#define LIESYM_NUMVERIFY_HPP

#include "liesym/reduce.hpp"

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace liesym {

class NumVerifyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using ParamValues = std::map<std::string, double>;

/// Demo parameters: Pr = 0.7, R = 0.1, Gr = calpha = 1.
ParamValues default_parameters();

using OdeRhs = std::function<Eigen::VectorXd(double s, const Eigen::VectorXd& y)>;

struct OdeIvp {
  OdeRhs rhs;
  double s0 = 0;
  Eigen::VectorXd y0;
  double h = 1e-3;  // negative integrates backwards
  std::size_t steps = 0;
};

/// Order reduction of an ODE system (one independent).  State layout: for
/// each unknown F of order m, F, F', ..., F^(m-1).
class FirstOrderForm {
public:
  std::size_t dimension() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& unknowns() const { return unknowns_; }
  int order(std::size_t k) const { return order_[k]; }
  std::size_t offset(std::size_t k) const { return offset_[k]; }
  /// Unknown whose top derivative equation nu is solved for.
  std::size_t solved_for(std::size_t nu) const { return solves_[nu]; }

  /// Top derivatives of every unknown at (s, y).
  Eigen::VectorXd top_derivatives(double s, const Eigen::VectorXd& y, const ParamValues& p) const;
  OdeRhs rhs(const ParamValues& p) const;
  OdeIvp ivp(const ParamValues& p, double s0, Eigen::VectorXd y0, double h, std::size_t steps) const;

private:
  friend FirstOrderForm to_first_order(const PdeSystem& ode);
  PdeSystem sys_;
  std::vector<std::string> unknowns_, labels_;
  std::vector<int> order_;
  std::vector<std::size_t> offset_, solves_;
  std::vector<Poly> lc_, rest_;   // lc * top + rest = 0
  std::vector<std::size_t> eval_order_;
};

/// Throws NumVerifyError when some equation cannot be solved for a top
/// derivative (nonlinear in it, or no one-to-one assignment exists).
FirstOrderForm to_first_order(const PdeSystem& ode);
inline FirstOrderForm to_first_order(const ReducedSystem& rs) { return to_first_order(rs.system); }

/// Uniform nodes s0 + i h, stored in increasing s.
struct Trajectory {
  double s0 = 0, h = 0;
  std::vector<Eigen::VectorXd> states;

  double s_begin() const { return s0; }
  double s_end() const { return s0 + h * static_cast<double>(states.size() - 1); }
  bool covers(double s) const;
  /// Four-point Lagrange interpolation of component c (or its derivative).
  double value(std::size_t c, double s) const;
  double derivative(std::size_t c, double s) const;
};

/// Classical RK4, fixed step, N+1 states.  Throws on a non-finite state,
/// naming the step.
Trajectory rk4_integrate(const OdeIvp& ivp);

/// Integrates from ivp.s0 both ways so the trajectory covers [lo, hi].
Trajectory integrate_span(const OdeIvp& ivp, double lo, double hi);

struct Grid {
  double x0 = 1, x1 = 2, y0 = 0, y1 = 1;
  std::size_t nx = 21, ny = 21;

  double x(std::size_t i) const;
  double y(std::size_t j) const;
};

enum class ResidualMode { analytic, finite_difference };

struct ResidualReport {
  Grid grid;
  ResidualMode mode = ResidualMode::analytic;
  double fd_step = 0;
  std::vector<double> max, mean;  // per equation of the full system

  double overall_max() const;
};

/// u^a(x, y) = p_a F_a(s) rebuilt from an integrated reduced system.
class Reconstruction {
public:
  Reconstruction(const PdeSystem& sys, SimilarityAnsatz an, const ReducedSystem& rs, const FirstOrderForm& fo,
                 Trajectory tr, ParamValues params);

  /// k-th derivative of shape function `name` at s.  Orders below the
  /// unknown's order come from the state; the top one differentiates the
  /// interpolant of the state component below it.
  double shape(const std::string& name, int k, double s) const;
  double s_at(double x, double y) const;
  double field(std::size_t dep, double x, double y) const;

  /// Equations evaluated on the ansatz with chain-rule derivatives.
  std::vector<double> analytic_residual(double x, double y) const;
  /// Same, with jets from central differences of the rebuilt fields.
  std::vector<double> fd_residual(double x, double y, double step) const;

  const Trajectory& trajectory() const { return tr_; }
  const ParamValues& parameters() const { return params_; }

private:
  double value(Symbol s, double x, double y) const;
  const PdeSystem* sys_;
  SimilarityAnsatz an_;
  std::vector<Expr> raw_;
  FirstOrderForm fo_;
  Trajectory tr_;
  ParamValues params_;
  std::map<std::string, std::size_t> unknown_index_;
};

/// Throws NumVerifyError for a grid point whose s (widened by the stencil in
/// finite-difference mode) lies outside the trajectory.
ResidualReport pde_residual(const Reconstruction& rec, const Grid& grid, ResidualMode mode = ResidualMode::analytic,
                            double fd_step = 1e-3);

/// Interval of s over the grid, widened by `pad` in x and y.
std::pair<double, double> s_range(const SimilarityAnsatz& an, const Grid& grid, double pad = 0);

/// End-to-end run for one element: reduce, integrate from y0 at s = 0 with
/// step h, measure residuals on the grid.
struct VerifyRun {
  SimilarityAnsatz ansatz;
  ReducedSystem reduced;
  FirstOrderForm form;
  Reconstruction rec;
  ResidualReport analytic, fd;
};
VerifyRun verify_reduction(const PdeSystem& sys, const VectorField& X, const Eigen::VectorXd& y0,
                           const ParamValues& params = default_parameters(), double h = 1e-3, const Grid& grid = {},
                           double fd_step = 1e-3);

}  // namespace liesym

#endif  // LIESYM_NUMVERIFY_HPP
