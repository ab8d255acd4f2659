#include "liesym/numverify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace liesym {

namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

ParamValues default_parameters() { return {{"Pr", 0.7}, {"R", 0.1}, {"Gr", 1.0}, {"calpha", 1.0}}; }

FirstOrderForm to_first_order(const PdeSystem& ode) {
  if (ode.independents.size() != 1) throw NumVerifyError("order reduction needs exactly one independent");
  const std::size_t n = ode.dependents.size();
  if (ode.equations.size() != n)
    throw NumVerifyError(std::to_string(ode.equations.size()) + " equations for " + std::to_string(n) + " unknowns");
  FirstOrderForm fo;
  fo.sys_ = ode;
  fo.order_.assign(n, 0);
  for (const Poly& p : ode.equations)
    for (Symbol v : p.variables())
      if (auto j = ode.jet_of(v)) {
        int& o = fo.order_[static_cast<std::size_t>(j->dep)];
        o = std::max(o, j->counts[0]);
      }
  auto top = [&](std::size_t k) { return ode.jet_symbol(JetCoord{static_cast<int>(k), {fo.order_[k]}}); };
  for (std::size_t k = 0; k < n; ++k) {
    fo.unknowns_.push_back(ode.dependents[k].name());
    if (fo.order_[k] == 0) throw NumVerifyError(ode.dependents[k].name() + " is never differentiated");
    fo.offset_.push_back(fo.labels_.size());
    for (int d = 0; d < fo.order_[k]; ++d)
      fo.labels_.push_back(jet_symbol_name(ode.dependents[k].name(), std::vector<int>{d}, ode.independents));
  }

  // one top derivative per equation, each unknown used once
  std::vector<std::vector<bool>> ok(n, std::vector<bool>(n));
  for (std::size_t nu = 0; nu < n; ++nu)
    for (std::size_t k = 0; k < n; ++k) ok[nu][k] = ode.equations[nu].degree(top(k)) == 1;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  bool found = false;
  do {
    found = true;
    for (std::size_t nu = 0; nu < n && found; ++nu) found = ok[nu][perm[nu]];
  } while (!found && std::next_permutation(perm.begin(), perm.end()));
  if (!found) throw NumVerifyError("leading derivatives cannot be isolated: no equation-to-unknown assignment is linear");
  fo.solves_ = perm;
  for (std::size_t nu = 0; nu < n; ++nu) {
    const Symbol t = top(perm[nu]);
    fo.lc_.push_back(ode.equations[nu].coeff(t, 1));
    fo.rest_.push_back(ode.equations[nu].coeff(t, 0));
  }

  // equations whose solved form uses another top derivative go after it
  std::vector<int> state(n, 0);
  std::function<void(std::size_t)> visit = [&](std::size_t nu) {
    if (state[nu] == 2) return;
    if (state[nu] == 1) throw NumVerifyError("leading derivatives are coupled cyclically");
    state[nu] = 1;
    for (std::size_t mu = 0; mu < n; ++mu) {
      const Symbol t = top(perm[mu]);
      if (mu != nu && (fo.lc_[nu].contains(t) || fo.rest_[nu].contains(t))) visit(mu);
    }
    state[nu] = 2;
    fo.eval_order_.push_back(nu);
  };
  for (std::size_t nu = 0; nu < n; ++nu) visit(nu);
  return fo;
}

Eigen::VectorXd FirstOrderForm::top_derivatives(double s, const Eigen::VectorXd& y, const ParamValues& p) const {
  std::unordered_map<Symbol, double> val;
  val.emplace(sys_.independents[0], s);
  for (std::size_t k = 0; k < unknowns_.size(); ++k)
    for (int d = 0; d < order_[k]; ++d)
      val.emplace(sys_.jet_symbol(JetCoord{static_cast<int>(k), {d}}), y(ix(offset_[k] + static_cast<std::size_t>(d))));
  auto lookup = [&](Symbol v) {
    if (auto it = val.find(v); it != val.end()) return it->second;
    if (auto it = p.find(v.name()); it != p.end()) return it->second;
    throw NumVerifyError("no value for " + v.name());
  };
  Eigen::VectorXd out(ix(unknowns_.size()));
  for (std::size_t nu : eval_order_) {
    const std::size_t k = solves_[nu];
    const double t = -rest_[nu].eval(lookup) / lc_[nu].eval(lookup);
    out(ix(k)) = t;
    val[sys_.jet_symbol(JetCoord{static_cast<int>(k), {order_[k]}})] = t;
  }
  return out;
}

OdeRhs FirstOrderForm::rhs(const ParamValues& p) const {
  return [self = *this, p](double s, const Eigen::VectorXd& y) {
    Eigen::VectorXd dy(y.size());
    Eigen::VectorXd t = self.top_derivatives(s, y, p);
    for (std::size_t k = 0; k < self.unknowns_.size(); ++k) {
      const std::size_t o = self.offset_[k], m = static_cast<std::size_t>(self.order_[k]);
      for (std::size_t d = 0; d + 1 < m; ++d) dy(ix(o + d)) = y(ix(o + d + 1));
      dy(ix(o + m - 1)) = t(ix(k));
    }
    return dy;
  };
}

OdeIvp FirstOrderForm::ivp(const ParamValues& p, double s0, Eigen::VectorXd y0, double h, std::size_t steps) const {
  if (static_cast<std::size_t>(y0.size()) != dimension())
    throw NumVerifyError("initial state has " + std::to_string(y0.size()) + " entries, expected " +
                         std::to_string(dimension()));
  return OdeIvp{rhs(p), s0, std::move(y0), h, steps};
}

Trajectory rk4_integrate(const OdeIvp& ivp) {
  if (ivp.h == 0 || !std::isfinite(ivp.h)) throw NumVerifyError("step must be nonzero and finite");
  std::vector<Eigen::VectorXd> ys{ivp.y0};
  Eigen::VectorXd y = ivp.y0;
  const double h = ivp.h;
  for (std::size_t i = 0; i < ivp.steps; ++i) {
    const double s = ivp.s0 + h * static_cast<double>(i);
    Eigen::VectorXd k1 = ivp.rhs(s, y);
    Eigen::VectorXd k2 = ivp.rhs(s + h / 2, y + h / 2 * k1);
    Eigen::VectorXd k3 = ivp.rhs(s + h / 2, y + h / 2 * k2);
    Eigen::VectorXd k4 = ivp.rhs(s + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!y.allFinite()) throw NumVerifyError("non-finite state at step " + std::to_string(i + 1) + " (s = " + num(s + h) + ")");
    ys.push_back(y);
  }
  Trajectory tr;
  tr.h = std::abs(h);
  tr.s0 = ivp.s0;
  if (h < 0) {
    std::reverse(ys.begin(), ys.end());
    tr.s0 = ivp.s0 + h * static_cast<double>(ivp.steps);
  }
  tr.states = std::move(ys);
  return tr;
}

Trajectory integrate_span(const OdeIvp& ivp, double lo, double hi) {
  const double h = std::abs(ivp.h);
  auto count = [&](double len) { return len > 0 ? static_cast<std::size_t>(std::ceil(len / h - 1e-9)) : 0; };
  OdeIvp fwd = ivp, bwd = ivp;
  fwd.h = h;
  fwd.steps = std::max<std::size_t>(count(hi - ivp.s0), 3);
  bwd.h = -h;
  bwd.steps = count(ivp.s0 - lo);
  Trajectory f = rk4_integrate(fwd);
  if (bwd.steps == 0) return f;
  Trajectory b = rk4_integrate(bwd);
  b.states.insert(b.states.end(), f.states.begin() + 1, f.states.end());
  return b;
}

bool Trajectory::covers(double s) const {
  const double tol = 1e-9 * std::max(1.0, h);
  return states.size() >= 4 && s >= s_begin() - tol && s <= s_end() + tol;
}

namespace {

// stencil start and local coordinate t in [0, 3]
std::pair<std::size_t, double> stencil(const Trajectory& tr, double s) {
  if (!tr.covers(s))
    throw NumVerifyError("s = " + num(s) + " outside the trajectory [" + num(tr.s_begin()) + ", " + num(tr.s_end()) + "]");
  const double u = (s - tr.s0) / tr.h;
  const auto last = static_cast<long>(tr.states.size()) - 4;
  const long i0 = std::clamp(static_cast<long>(std::floor(u)) - 1, 0L, last);
  return {static_cast<std::size_t>(i0), u - static_cast<double>(i0)};
}

}  // namespace

double Trajectory::value(std::size_t c, double s) const {
  auto [i, t] = stencil(*this, s);
  const double w[4] = {-(t - 1) * (t - 2) * (t - 3) / 6, t * (t - 2) * (t - 3) / 2, -t * (t - 1) * (t - 3) / 2,
                       t * (t - 1) * (t - 2) / 6};
  double v = 0;
  for (std::size_t k = 0; k < 4; ++k) v += w[k] * states[i + k](ix(c));
  return v;
}

double Trajectory::derivative(std::size_t c, double s) const {
  auto [i, t] = stencil(*this, s);
  const double w[4] = {-((t - 2) * (t - 3) + (t - 1) * (t - 3) + (t - 1) * (t - 2)) / 6,
                       ((t - 2) * (t - 3) + t * (t - 3) + t * (t - 2)) / 2,
                       -((t - 1) * (t - 3) + t * (t - 3) + t * (t - 1)) / 2,
                       ((t - 1) * (t - 2) + t * (t - 2) + t * (t - 1)) / 6};
  double v = 0;
  for (std::size_t k = 0; k < 4; ++k) v += w[k] * states[i + k](ix(c));
  return v / h;
}

double Grid::x(std::size_t i) const { return nx < 2 ? x0 : x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(nx - 1); }
double Grid::y(std::size_t j) const { return ny < 2 ? y0 : y0 + (y1 - y0) * static_cast<double>(j) / static_cast<double>(ny - 1); }

double ResidualReport::overall_max() const { return max.empty() ? 0 : *std::max_element(max.begin(), max.end()); }

Reconstruction::Reconstruction(const PdeSystem& sys, SimilarityAnsatz an, const ReducedSystem& rs,
                               const FirstOrderForm& fo, Trajectory tr, ParamValues params)
    : sys_(&sys), an_(std::move(an)), raw_(rs.raw), fo_(fo), tr_(std::move(tr)), params_(std::move(params)) {
  if (sys.independents.size() != 2) throw NumVerifyError("reconstruction needs two independents");
  for (std::size_t k = 0; k < fo_.unknowns().size(); ++k) unknown_index_[fo_.unknowns()[k]] = k;
}

double Reconstruction::shape(const std::string& name, int k, double s) const {
  auto it = unknown_index_.find(name);
  if (it == unknown_index_.end()) throw NumVerifyError("unknown shape function " + name);
  const std::size_t u = it->second;
  const int m = fo_.order(u);
  if (k < m) return tr_.value(fo_.offset(u) + static_cast<std::size_t>(k), s);
  if (k == m) return tr_.derivative(fo_.offset(u) + static_cast<std::size_t>(m - 1), s);
  throw NumVerifyError(name + " differentiated " + std::to_string(k) + " times; the state holds order " + std::to_string(m));
}

double Reconstruction::value(Symbol s, double x, double y) const {
  if (s == sys_->independents[0]) return x;
  if (s == sys_->independents[1]) return y;
  if (auto it = params_.find(s.name()); it != params_.end()) return it->second;
  throw NumVerifyError("no value for " + s.name());
}

double Reconstruction::s_at(double x, double y) const {
  return eval(an_.s, [&](Symbol s) { return value(s, x, y); });
}

double Reconstruction::field(std::size_t dep, double x, double y) const {
  auto val = [&](Symbol s) { return value(s, x, y); };
  return eval(an_.prefactor.at(dep), val) * shape(an_.functions.at(dep), 0, s_at(x, y));
}

std::vector<double> Reconstruction::analytic_residual(double x, double y) const {
  std::vector<double> out;
  auto val = [&](Symbol s) { return value(s, x, y); };
  auto fn = [&](const std::string& name, int k, double s) { return shape(name, k, s); };
  for (const Expr& e : raw_) out.push_back(eval(e, val, fn));
  return out;
}

std::vector<double> Reconstruction::fd_residual(double x, double y, double step) const {
  // central-difference weights for 0, 1, 2 derivatives at offsets -1, 0, 1
  static const double w[3][3] = {{0, 1, 0}, {-0.5, 0, 0.5}, {1, -2, 1}};
  std::map<std::pair<std::size_t, std::pair<int, int>>, double> cache;
  auto f = [&](std::size_t dep, int a, int b) {
    auto key = std::make_pair(dep, std::make_pair(a, b));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double v = field(dep, x + a * step, y + b * step);
    cache.emplace(key, v);
    return v;
  };
  auto jet = [&](const JetCoord& j) {
    if (j.counts[0] > 2 || j.counts[1] > 2) throw NumVerifyError("finite differences cover orders up to 2 per direction");
    double v = 0;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b) {
        const double c = w[j.counts[0]][a + 1] * w[j.counts[1]][b + 1];
        if (c != 0) v += c * f(static_cast<std::size_t>(j.dep), a, b);
      }
    return v / std::pow(step, j.order());
  };
  std::vector<double> out;
  for (const Poly& p : sys_->equations)
    out.push_back(p.eval([&](Symbol s) {
      if (auto j = sys_->jet_of(s)) return jet(*j);
      return value(s, x, y);
    }));
  return out;
}

std::pair<double, double> s_range(const SimilarityAnsatz& an, const Grid& grid, double pad) {
  double lo = INFINITY, hi = -INFINITY;
  const Symbol X("x"), Y("y");
  for (std::size_t i = 0; i < grid.nx; ++i)
    for (std::size_t j = 0; j < grid.ny; ++j)
      for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) {
          if (pad == 0 && (a != 0 || b != 0)) continue;
          const double x = grid.x(i) + a * pad, y = grid.y(j) + b * pad;
          const double s = eval(an.s, [&](Symbol v) {
            if (v == X) return x;
            if (v == Y) return y;
            throw NumVerifyError("similarity variable depends on " + v.name());
          });
          lo = std::min(lo, s);
          hi = std::max(hi, s);
        }
  return {lo, hi};
}

ResidualReport pde_residual(const Reconstruction& rec, const Grid& grid, ResidualMode mode, double fd_step) {
  ResidualReport rep;
  rep.grid = grid;
  rep.mode = mode;
  rep.fd_step = mode == ResidualMode::finite_difference ? fd_step : 0;
  const double pad = rep.fd_step;
  for (std::size_t i = 0; i < grid.nx; ++i)
    for (std::size_t j = 0; j < grid.ny; ++j)
      for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) {
          if (pad == 0 && (a != 0 || b != 0)) continue;
          const double x = grid.x(i) + a * pad, y = grid.y(j) + b * pad;
          const double s = rec.s_at(x, y);
          if (!rec.trajectory().covers(s))
            throw NumVerifyError("grid point (" + num(x) + ", " + num(y) + ") has s = " + num(s) + " outside [" +
                                 num(rec.trajectory().s_begin()) + ", " + num(rec.trajectory().s_end()) + "]");
        }
  std::vector<double> sum;
  for (std::size_t i = 0; i < grid.nx; ++i)
    for (std::size_t j = 0; j < grid.ny; ++j) {
      const double x = grid.x(i), y = grid.y(j);
      std::vector<double> r = mode == ResidualMode::analytic ? rec.analytic_residual(x, y) : rec.fd_residual(x, y, fd_step);
      if (rep.max.empty()) {
        rep.max.assign(r.size(), 0);
        sum.assign(r.size(), 0);
      }
      for (std::size_t nu = 0; nu < r.size(); ++nu) {
        const double a = std::abs(r[nu]);
        if (!std::isfinite(a)) throw NumVerifyError("non-finite residual at (" + num(x) + ", " + num(y) + ")");
        rep.max[nu] = std::max(rep.max[nu], a);
        sum[nu] += a;
      }
    }
  const double count = static_cast<double>(grid.nx * grid.ny);
  for (double s : sum) rep.mean.push_back(s / count);
  return rep;
}

VerifyRun verify_reduction(const PdeSystem& sys, const VectorField& X, const Eigen::VectorXd& y0,
                           const ParamValues& params, double h, const Grid& grid, double fd_step) {
  SimilarityAnsatz an = invariants(X, sys);
  ReducedSystem rs = reduce_system(sys, an);
  FirstOrderForm fo = to_first_order(rs);
  auto [lo, hi] = s_range(an, grid, fd_step);
  Trajectory tr = integrate_span(fo.ivp(params, 0.0, y0, h, 0), lo - 2 * h, hi + 2 * h);
  Reconstruction rec(sys, an, rs, fo, std::move(tr), params);
  ResidualReport analytic = pde_residual(rec, grid, ResidualMode::analytic);
  ResidualReport fd = pde_residual(rec, grid, ResidualMode::finite_difference, fd_step);
  return VerifyRun{std::move(an), std::move(rs), std::move(fo), std::move(rec), std::move(analytic), std::move(fd)};
}

}  // namespace liesym
