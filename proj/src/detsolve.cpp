#include "liesym/detsolve.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace liesym {

std::vector<Monomial> monomials_up_to(const std::vector<Symbol>& vars, int d) {
  VarOrder order(vars);
  std::vector<Monomial> out;
  for (int k = 0; k <= d; ++k) {
    std::vector<Monomial> level;
    for (const auto& e : multi_indices(vars.size(), k)) {
      Monomial m;
      for (std::size_t i = 0; i < vars.size(); ++i)
        if (e[i]) m = m * Monomial::of(vars[i], e[i]);
      level.push_back(m);
    }
    std::sort(level.begin(), level.end(), [&](const Monomial& a, const Monomial& b) { return order.precedes(a, b); });
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

Ansatz build_ansatz(const PdeSystem& sys, int d) {
  if (d < 0) throw std::invalid_argument("ansatz degree must be >= 0");
  Ansatz a;
  a.degree = d;
  a.field = VectorField::zero(sys);
  auto monos = monomials_up_to(base_coordinates(sys), d);
  for (std::size_t comp = 0; comp < a.field.size(); ++comp) {
    for (const auto& m : monos) {
      Symbol c("c" + std::to_string(a.unknowns.size()));
      a.unknowns.push_back(c);
      a.columns.emplace_back(comp, m);
      a.field.component(comp) += Poly::term(m * Monomial::of(c), Rational(1));
    }
  }
  return a;
}

VectorField Ansatz::instantiate(const VectorQ& v, const PdeSystem& sys) const {
  VectorField X = VectorField::zero(sys);
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const Rational& q = v(static_cast<Eigen::Index>(k));
    if (q.is_zero()) continue;
    X.component(columns[k].first) += Poly::term(columns[k].second, q);
  }
  return X;
}

MatrixQ LinearSystem::dense() const {
  MatrixQ A = MatrixQ::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [j, q] : rows[i]) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = q;
  return A;
}

LinearSystem assemble(const std::vector<Poly>& equations, const std::vector<Symbol>& unknowns) {
  std::unordered_map<std::uint32_t, std::size_t> col;
  for (std::size_t k = 0; k < unknowns.size(); ++k) col[unknowns[k].id()] = k;
  std::set<std::vector<std::pair<std::size_t, Rational>>> unique;
  for (const Poly& eq : equations) {
    std::vector<std::pair<std::size_t, Rational>> row;
    for (const auto& [m, c] : eq.terms()) {
      auto f = m.factors();
      if (f.size() != 1 || f[0].exp != 1 || !col.count(f[0].var))
        throw DeterminingError("not a linear equation in the unknowns: " + to_string(eq));
      row.emplace_back(col.at(f[0].var), c);
    }
    if (row.empty()) continue;
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    VectorQ v(static_cast<Eigen::Index>(row.size()));
    for (std::size_t k = 0; k < row.size(); ++k) v(static_cast<Eigen::Index>(k)) = row[k].second;
    make_primitive(v);
    for (std::size_t k = 0; k < row.size(); ++k) row[k].second = v(static_cast<Eigen::Index>(k));
    unique.insert(std::move(row));
  }
  LinearSystem ls;
  ls.cols = unknowns.size();
  ls.rows.assign(unique.begin(), unique.end());
  return ls;
}

std::vector<VectorQ> nullspace_exact(const LinearSystem& sys) { return nullspace(sys.dense()); }

FieldCoordinates field_coordinates(const std::vector<VectorField>& fields, const PdeSystem& sys) {
  VarOrder order(base_coordinates(sys));
  std::vector<std::pair<std::size_t, Monomial>> cols;
  for (const auto& X : fields)
    for (std::size_t c = 0; c < X.size(); ++c)
      for (const auto& t : X.component(c).terms()) cols.emplace_back(c, t.first);
  auto less = [&](const std::pair<std::size_t, Monomial>& a, const std::pair<std::size_t, Monomial>& b) {
    int da = a.second.total_degree(), db = b.second.total_degree();
    if (da != db) return da > db;
    if (a.first != b.first) return a.first < b.first;
    return order.precedes(a.second, b.second);
  };
  std::sort(cols.begin(), cols.end(), less);
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  FieldCoordinates fc;
  fc.columns = cols;
  fc.rows = MatrixQ::Zero(static_cast<Eigen::Index>(fields.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (std::size_t c = 0; c < fields[i].size(); ++c) {
      for (const auto& [m, q] : fields[i].component(c).terms()) {
        auto it = std::lower_bound(cols.begin(), cols.end(), std::make_pair(c, m), less);
        fc.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(it - cols.begin())) = q;
      }
    }
  }
  return fc;
}

namespace {

VectorField field_from_row(const FieldCoordinates& fc, Eigen::Index row, const PdeSystem& sys) {
  VectorField X = VectorField::zero(sys);
  for (std::size_t k = 0; k < fc.columns.size(); ++k) {
    const Rational& q = fc.rows(row, static_cast<Eigen::Index>(k));
    if (!q.is_zero()) X.component(fc.columns[k].first) += Poly::term(fc.columns[k].second, q);
  }
  return X;
}

}  // namespace

GeneratorBasis canonical_basis(const std::vector<VectorField>& raw, const PdeSystem& sys) {
  GeneratorBasis out;
  if (raw.empty()) return out;
  FieldCoordinates fc = field_coordinates(raw, sys);
  std::vector<Eigen::Index> pivots = rref(fc.rows);
  if (pivots.size() < raw.size()) throw BasisError("canonical_basis: input fields are linearly dependent");
  struct Member {
    int degree;
    Eigen::Index pivot;
    VectorField field;
  };
  std::vector<Member> members;
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    auto r = static_cast<Eigen::Index>(k);
    make_primitive(fc.rows.row(r));
    VectorField X = field_from_row(fc, r, sys);
    members.push_back({X.degree(), pivots[k], std::move(X)});
  }
  std::stable_sort(members.begin(), members.end(), [](const Member& a, const Member& b) {
    return a.degree != b.degree ? a.degree < b.degree : a.pivot < b.pivot;
  });
  for (auto& m : members) out.basis.push_back(std::move(m.field));
  return out;
}

VectorQ coordinates_in(const VectorField& X, const std::vector<VectorField>& basis, const PdeSystem& sys) {
  std::vector<VectorField> all = basis;
  all.push_back(X);
  FieldCoordinates fc = field_coordinates(all, sys);
  const auto n = static_cast<Eigen::Index>(basis.size());
  MatrixQ A = fc.rows.topRows(n).transpose();
  VectorQ b = fc.rows.row(n).transpose();
  VectorQ x;
  if (!solve_exact(A, b, x)) throw BasisError("field is outside the span: " + to_string(X, sys));
  if (!(A * x - b).isZero()) throw BasisError("inconsistent coordinates for " + to_string(X, sys));
  return x;
}

bool in_span(const VectorField& X, const std::vector<VectorField>& basis, const PdeSystem& sys) {
  try {
    coordinates_in(X, basis, sys);
    return true;
  } catch (const BasisError&) {
    return false;
  }
}

bool same_span(const std::vector<VectorField>& a, const std::vector<VectorField>& b, const PdeSystem& sys) {
  for (const auto& X : a)
    if (!in_span(X, b, sys)) return false;
  for (const auto& X : b)
    if (!in_span(X, a, sys)) return false;
  return true;
}

bool check_generator(const VectorField& X, const PdeSystem& sys, const SolvedForm& sf) {
  for (const Poly& r : apply_criterion(X, sys, sf))
    if (!r.is_zero()) return false;
  return true;
}

bool check_generator(const VectorField& X, const PdeSystem& sys) {
  return check_generator(X, sys, solve_leading(sys));
}

SymmetryResult solve_symmetries(const PdeSystem& sys, int d) {
  SymmetryResult res;
  SolvedForm sf = solve_leading(sys);
  res.ansatz = build_ansatz(sys, d);
  std::vector<Poly> residuals = apply_criterion(res.ansatz.field, sys, sf);
  std::vector<Poly> eqs = extract_determining(residuals, res.ansatz.unknowns);
  res.determining_equations = eqs.size();
  LinearSystem ls = assemble(eqs, res.ansatz.unknowns);
  res.rows = ls.rows.size();
  std::vector<VectorQ> ns = nullspace_exact(ls);
  res.rank = ls.cols - ns.size();
  std::vector<VectorField> raw;
  for (const auto& v : ns) raw.push_back(res.ansatz.instantiate(v, sys));
  res.basis = canonical_basis(raw, sys);
  return res;
}

}  // namespace liesym
