#include "liesym/optsys.hpp"

#include "liesym/parser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace liesym {

namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

// row l of M a, as one exponential polynomial
ExpPoly row_image(const AdjointMap& M, std::size_t l, const VectorQ& a) {
  ExpPoly r;
  for (std::size_t j = 0; j < M.n; ++j)
    if (!a(ix(j)).is_zero()) r += a(ix(j)) * M(l, j);
  return r;
}

std::optional<std::size_t> last_nonzero(const VectorQ& a, const std::vector<std::size_t>& among) {
  for (std::size_t t = among.size(); t-- > 0;)
    if (!a(ix(among[t])).is_zero()) return among[t];
  return std::nullopt;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

AdjointAction make_action(const LieAlgebra& alg, AdjointSign sign) {
  AdjointAction act;
  act.alg = &alg;
  act.sign = sign;
  const std::size_t n = alg.dimension();
  for (std::size_t i = 0; i < n; ++i) act.maps.push_back(adjoint_exp(alg, i, sign));
  // [g, g] is spanned by the columns of all ad matrices
  MatrixQ cols(ix(n), ix(n * n));
  std::vector<bool> support(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    cols.middleCols(ix(i * n), ix(n)) = alg.ad[i];
    for (std::size_t k = 0; k < n; ++k)
      if (!alg.ad[i].row(ix(k)).isZero()) support[k] = true;
  }
  const auto r = static_cast<std::size_t>(rank(cols));
  for (std::size_t k = 0; k < n; ++k) (support[k] ? act.derived : act.quotient).push_back(k);
  if (r != act.derived.size()) {
    act.derived_is_coordinate = false;
    act.derived.clear();
    act.quotient.clear();
  }
  return act;
}

AdjointImage adjoint_apply(const AdjointAction& act, std::size_t i, const GroupParam& eps, const VectorQ& a) {
  const AdjointMap& M = act.maps.at(i);
  AdjointImage out;
  out.exact = VectorQ::Zero(ix(M.n));
  out.numeric = Eigen::VectorXd::Zero(ix(M.n));
  out.is_exact = !M.approximate;
  const double e = eps.value();
  for (std::size_t l = 0; l < M.n; ++l) {
    ExpPoly r = row_image(M, l, a);
    out.numeric(ix(l)) = r.eval(e);
    if (auto v = r.eval_exact(eps)) out.exact(ix(l)) = *v;
    else out.is_exact = false;
  }
  return out;
}

std::string element_label(const VectorQ& a, const std::vector<std::string>& labels) {
  std::string out;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const Rational& c = a(ix(k));
      if (c.is_zero() || (pass == 0) != (c.sign() > 0)) continue;
      Rational m = abs(c);
      std::string term = m.is_one() ? labels[k] : m.str() + "*" + labels[k];
      if (c.sign() < 0) out += "-" + term;
      else out += (out.empty() ? "" : "+") + term;
    }
  }
  return out.empty() ? "0" : out;
}

VectorQ parse_element(const std::string& text, const LieAlgebra& alg) {
  Poly p = poly_normalize(parse_expr(text, algebra_context(alg)));
  VectorQ a = VectorQ::Zero(ix(alg.dimension()));
  for (const auto& [m, c] : p.terms()) {
    auto f = m.factors();
    if (f.size() != 1 || f[0].exp != 1) throw std::invalid_argument("not a linear combination of generators: " + text);
    Symbol s = Symbol::from_id(f[0].var);
    auto it = std::find(alg.labels.begin(), alg.labels.end(), s.name());
    if (it == alg.labels.end()) throw std::invalid_argument("unknown generator " + s.name() + " in " + text);
    a(it - alg.labels.begin()) = c;
  }
  return a;
}

std::string Move::str(const std::vector<std::string>& labels) const {
  if (kind == Kind::scale) return "scale by " + factor.str() + " (" + purpose + ")";
  return "Ad(exp(eps*" + labels.at(direction) + ")), eps = " + eps.str() + " (" + purpose + ")";
}

Normalization normalize_element(const AdjointAction& act, const VectorQ& input) {
  const std::size_t n = act.dimension();
  const auto& labels = act.alg->labels;
  Normalization out;
  out.input = input;
  VectorQ a = input;
  auto ref = last_nonzero(a, act.quotient);
  if (!ref) ref = last_nonzero(a, all_indices(n));
  if (!ref) throw std::invalid_argument("the zero element spans no subalgebra");
  if (!a(ix(*ref)).is_one()) {
    Move m;
    m.kind = Move::Kind::scale;
    m.factor = Rational(1) / a(ix(*ref));
    a = a * m.factor;
    m.after = a;
    m.purpose = "overall, " + labels[*ref] + " to 1";
    out.transcript.push_back(std::move(m));
  }

  const std::vector<std::size_t> order = act.derived_is_coordinate ? act.derived : all_indices(n);
  for (std::size_t k : order) {
    if (k == *ref || a(ix(k)).is_zero()) continue;
    // candidate moves touch coordinate k only
    auto only_k = [&](std::size_t i, ExpPoly& f) {
      for (std::size_t l = 0; l < n; ++l) {
        ExpPoly r = row_image(act.maps[i], l, a);
        if (l == k) f = r;
        else if (!(r == ExpPoly(a(ix(l))))) return false;
      }
      return true;
    };
    bool done = false;
    for (std::size_t i = 0; i < n && !done; ++i) {
      ExpPoly f;
      if (!only_k(i, f) || !f.is_polynomial() || f.eps_degree() != 1) continue;
      auto t = f.taylor(1);
      Move m;
      m.kind = Move::Kind::adjoint;
      m.direction = i;
      m.eps = GroupParam::rational(-t[0] / t[1]);
      a(ix(k)) = Rational(0);
      m.after = a;
      m.purpose = "kill " + labels[k];
      out.transcript.push_back(std::move(m));
      done = true;
    }
    if (done || abs(a(ix(k))).is_one()) continue;
    for (std::size_t i = 0; i < n; ++i) {
      ExpPoly f;
      if (!only_k(i, f) || f.terms().size() != 1) continue;
      const auto& [key, c] = *f.terms().begin();
      if (key.second != 0 || key.first.is_zero()) continue;
      Move m;
      m.kind = Move::Kind::adjoint;
      m.direction = i;
      m.eps = GroupParam::log(Rational(1) / key.first, Rational(1) / abs(c));
      a(ix(k)) = Rational(c.sign());
      m.after = a;
      m.purpose = "scale " + labels[k] + " to " + (c.sign() > 0 ? "1" : "-1");
      out.transcript.push_back(std::move(m));
      break;
    }
  }
  out.normal = a;
  out.label = element_label(a, labels);
  out.proof_case = proof_case(a);
  return out;
}

std::string proof_case(const VectorQ& v) {
  const Eigen::Index n = v.size();
  if (n == 0) return "";
  std::string s = v(n - 1).is_zero() ? "2" : "1";
  if (n >= 2) s += std::string("-") + (v(n - 2).is_zero() ? "b" : "a");
  if (s[0] == '2' && n >= 3) s += std::string("-") + (v(n - 3).is_zero() ? "2" : "1");
  return s;
}

bool replay(const AdjointAction& act, const Normalization& nz) {
  VectorQ a = nz.input;
  Eigen::VectorXd num(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) num(i) = a(i).to_double();
  bool exact = true;
  for (const auto& m : nz.transcript) {
    if (m.kind == Move::Kind::scale) {
      a = a * m.factor;
      num *= m.factor.to_double();
    } else {
      AdjointImage img = adjoint_apply(act, m.direction, m.eps, a);
      num = act.maps[m.direction].apply(m.eps.value(), num);
      exact = exact && img.is_exact;
      if (img.is_exact) a = img.exact;
    }
    if (exact && a != m.after) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (std::abs(num(i) - m.after(i).to_double()) > 1e-12 * std::max(1.0, std::abs(num(i)))) return false;
  }
  return exact ? a == nz.normal : true;
}

OrbitInvariants orbit_invariants(const AdjointAction& act, const VectorQ& a) {
  const LieAlgebra& alg = *act.alg;
  const std::size_t n = alg.dimension();
  OrbitInvariants inv;
  auto qref = last_nonzero(a, act.quotient);
  for (std::size_t q : act.quotient) inv.quotient.push_back(qref ? a(ix(q)) / a(ix(*qref)) : Rational(0));

  MatrixQ ad = ad_matrix(alg, a);
  inv.ad_rank = rank(ad);
  MatrixQ N(ix(n), ix(n + 1));
  N << ad, -a;
  inv.normalizer_dim = static_cast<long>(nullspace(N).size());
  if (inv.normalizer_dim == static_cast<long>(n)) {
    auto r = last_nonzero(a, all_indices(n));
    for (std::size_t j = 0; j < n; ++j) inv.character.push_back(-ad(ix(*r), ix(j)) / a(ix(*r)));
  }

  if (!act.derived_is_coordinate) return inv;
  // a [g, g] coordinate keeps its sign along the orbit when every direction
  // multiplies it by a positive exponential and feeds nothing else into it
  std::vector<int> raw;
  for (std::size_t k : act.derived) {
    bool preserved = true;
    for (std::size_t i = 0; i < n && preserved; ++i) {
      const AdjointMap& M = act.maps[i];
      for (std::size_t j : act.derived)
        if (j != k && !M(k, j).is_zero()) preserved = false;
      ExpPoly from_quotient;
      for (std::size_t q : act.quotient) from_quotient += a(ix(q)) * M(k, q);
      if (!from_quotient.is_zero()) preserved = false;
      const ExpPoly& d = M(k, k);
      if (d.terms().size() != 1 || d.terms().begin()->first.second != 0 || d.terms().begin()->second.sign() <= 0)
        preserved = false;
    }
    raw.push_back(preserved ? a(ix(k)).sign() : 2);
  }
  int ref = qref ? a(ix(*qref)).sign() : 0;
  if (ref == 0)
    for (int s : raw)
      if (s == 1 || s == -1) {
        ref = s;
        break;
      }
  for (int s : raw) inv.signs.push_back(s == 2 ? 2 : s * (ref == 0 ? 1 : ref));
  return inv;
}

bool InequivalenceReport::all_distinct() const {
  for (std::size_t i = 0; i < reason.size(); ++i)
    for (std::size_t j = 0; j < reason.size(); ++j)
      if (i != j && reason[i][j].empty()) return false;
  return true;
}

InequivalenceReport verify_inequivalent(const AdjointAction& act, const std::vector<Representative>& reps) {
  InequivalenceReport r;
  r.reps = reps;
  std::vector<OrbitInvariants> inv;
  for (const auto& p : reps) inv.push_back(orbit_invariants(act, p.element));
  r.reason.assign(reps.size(), std::vector<std::string>(reps.size()));
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = 0; j < reps.size(); ++j) {
      const auto &a = inv[i], &b = inv[j];
      std::string& why = r.reason[i][j];
      if (a.quotient != b.quotient) why = "quotient";
      else if (a.ad_rank != b.ad_rank) why = "ad rank";
      else if (a.normalizer_dim != b.normalizer_dim) why = "normalizer";
      else if (a.character != b.character) why = "character";
      else if (a.signs != b.signs) why = "signs";
    }
  return r;
}

std::int64_t SampleRng::uniform(std::int64_t lo, std::int64_t hi) {
  const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t threshold = (0 - range) % range;
  for (;;) {
    std::uint64_t r = g_();
    if (r >= threshold) return lo + static_cast<std::int64_t>(r % range);
  }
}

Rational SampleRng::rational() {
  std::int64_t v = uniform(0, 17);
  long num = static_cast<long>(v < 9 ? v - 9 : v - 8);
  long den = static_cast<long>(uniform(1, 9));
  return Rational(num, den);
}

std::vector<VectorQ> draw_samples(std::size_t dimension, std::size_t samples, std::uint64_t seed) {
  SampleRng rng(seed);
  const std::size_t patterns = (std::size_t{1} << dimension) - 1;
  std::vector<VectorQ> out;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t mask = s % patterns + 1;
    VectorQ a = VectorQ::Zero(ix(dimension));
    for (std::size_t j = 0; j < dimension; ++j)
      if (mask >> j & 1) a(ix(j)) = rng.rational();
    out.push_back(std::move(a));
  }
  return out;
}

ClassifyReport classify(const AdjointAction& act, std::size_t samples, std::uint64_t seed,
                        const std::vector<VectorQ>& paper) {
  ClassifyReport rep;
  rep.samples = samples;
  rep.seed = seed;
  for (const VectorQ& a : draw_samples(act.dimension(), samples, seed)) {
    Normalization nz = normalize_element(act, a);
    rep.replay_ok = rep.replay_ok && replay(act, nz);
    ++rep.case_counts[nz.proof_case];
    auto it = std::find_if(rep.forms.begin(), rep.forms.end(), [&](const NormalFormCount& f) { return f.normal == nz.normal; });
    if (it == rep.forms.end()) {
      bool in_paper = std::any_of(paper.begin(), paper.end(), [&](const VectorQ& p) { return p == nz.normal; });
      rep.forms.push_back({nz.normal, nz.label, nz.proof_case, 0, in_paper});
      it = rep.forms.end() - 1;
    }
    ++it->count;
    rep.runs.push_back(std::move(nz));
  }
  return rep;
}

std::vector<Rational> derived_determinant(const AdjointAction& act, const VectorQ& base, const VectorQ& dir) {
  if (!act.derived_is_coordinate) throw std::invalid_argument("derived algebra is not a coordinate subspace");
  const std::size_t m = act.derived.size();
  // det is a polynomial of degree <= m in t; interpolate at t = 0..m
  std::vector<Rational> ts, ds;
  for (std::size_t p = 0; p <= m; ++p) {
    const Rational t(static_cast<long>(p));
    MatrixQ ad = ad_matrix(*act.alg, VectorQ(base + dir * t));
    MatrixQ D(ix(m), ix(m));
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) D(ix(r), ix(c)) = ad(ix(act.derived[r]), ix(act.derived[c]));
    // char poly det(lambda I - D) at 0 is (-1)^m det D
    Rational d = characteristic_polynomial(D)[0];
    if (m % 2 == 1) d = -d;
    ts.push_back(t);
    ds.push_back(d);
  }
  std::vector<Rational> coef(m + 1, Rational(0));
  for (std::size_t p = 0; p <= m; ++p) {
    // Lagrange basis polynomial for node p
    std::vector<Rational> basis{Rational(1)};
    Rational denom(1);
    for (std::size_t q = 0; q <= m; ++q) {
      if (q == p) continue;
      std::vector<Rational> next(basis.size() + 1, Rational(0));
      for (std::size_t k = 0; k < basis.size(); ++k) {
        next[k] -= basis[k] * ts[q];
        next[k + 1] += basis[k];
      }
      basis = std::move(next);
      denom *= ts[p] - ts[q];
    }
    for (std::size_t k = 0; k < basis.size(); ++k) coef[k] += ds[p] * basis[k] / denom;
  }
  while (coef.size() > 1 && coef.back().is_zero()) coef.pop_back();
  return coef;
}

ExtraClasses extra_classes(const AdjointAction& act, const ClassifyReport& rep) {
  ExtraClasses out;
  const auto& labels = act.alg->labels;
  const std::size_t n = act.dimension();
  for (const auto& f : rep.forms) {
    if (f.in_paper) continue;
    std::vector<std::size_t> free;
    auto ref = last_nonzero(f.normal, act.quotient);
    for (std::size_t q : act.quotient)
      if (ref && q != *ref && !f.normal(ix(q)).is_zero()) free.push_back(q);
    if (free.size() != 1) {
      out.singles.push_back({f.normal, f.label, "derived"});
      continue;
    }
    const std::size_t q = free[0];
    VectorQ base = f.normal, dir = VectorQ::Zero(ix(n));
    base(ix(q)) = Rational(0);
    dir(ix(q)) = Rational(1);
    auto it = std::find_if(out.families.begin(), out.families.end(),
                           [&](const NormalFamily& fam) { return fam.base == base && fam.direction == dir; });
    if (it == out.families.end()) {
      NormalFamily fam;
      fam.base = base;
      fam.direction = dir;
      fam.label = element_label(base, labels) + "+a*" + labels[q];
      out.families.push_back(std::move(fam));
      it = out.families.end() - 1;
    }
    it->seen.push_back(f.normal(ix(q)));
  }

  for (auto& fam : out.families) {
    std::sort(fam.seen.begin(), fam.seen.end());
    if (!act.derived_is_coordinate) continue;
    std::vector<Rational> det = derived_determinant(act, fam.base, fam.direction);
    if (det.size() == 1) continue;  // constant: no special member
    for (const Rational& t : rational_roots(det))
      if (!t.is_zero() && std::find(fam.degenerate.begin(), fam.degenerate.end(), t) == fam.degenerate.end())
        fam.degenerate.push_back(t);
    std::sort(fam.degenerate.begin(), fam.degenerate.end());
    for (const Rational& t : fam.degenerate) {
      const VectorQ e = fam.base + fam.direction * t;
      // every sign pattern on [g, g]; the surviving coordinates give the classes
      const std::size_t m = act.derived.size();
      for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        VectorQ a = e;
        for (std::size_t k = 0; k < m; ++k) a(ix(act.derived[k])) = Rational(mask >> k & 1 ? -1 : 1);
        Normalization nz = normalize_element(act, a);
        if (nz.normal == e) continue;
        bool dup = std::any_of(fam.exceptional.begin(), fam.exceptional.end(),
                               [&](const Representative& r) { return r.element == nz.normal; });
        if (!dup) fam.exceptional.push_back({nz.normal, nz.label, "derived"});
      }
      fam.exceptional.push_back({e, element_label(e, labels), "derived"});
    }
  }
  return out;
}

}  // namespace liesym
