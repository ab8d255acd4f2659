#include "liesym/jet.hpp"

#include <algorithm>
#include <numeric>

namespace liesym {

int JetCoord::order() const { return std::accumulate(counts.begin(), counts.end(), 0); }

JetCoord JetCoord::shifted(std::size_t independent, int by) const {
  JetCoord r = *this;
  r.counts[independent] += by;
  return r;
}

namespace {

// +1 when a's multi-index is reverse-lexicographically larger, -1 smaller, 0 equal
int revlex(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t k = a.size(); k-- > 0;) {
    if (a[k] != b[k]) return a[k] > b[k] ? 1 : -1;
  }
  return 0;
}

}  // namespace

bool rank_less(const JetCoord& a, const JetCoord& b) {
  if (a.order() != b.order()) return a.order() < b.order();
  if (a.dep != b.dep) return a.dep < b.dep;
  return revlex(a.counts, b.counts) < 0;
}

Symbol PdeSystem::jet_symbol(const JetCoord& j) const {
  return Symbol(jet_symbol_name(dependents.at(static_cast<std::size_t>(j.dep)).name(), j.counts, independents));
}

std::optional<JetCoord> PdeSystem::jet_of(Symbol s) const {
  const std::string& n = s.name();
  auto us = n.find('_');
  std::string dep = us == std::string::npos ? n : n.substr(0, us);
  auto dit = std::find_if(dependents.begin(), dependents.end(), [&](Symbol d) { return d.name() == dep; });
  if (dit == dependents.end()) return std::nullopt;
  JetCoord j;
  j.dep = static_cast<int>(dit - dependents.begin());
  j.counts.assign(independents.size(), 0);
  if (us == std::string::npos) return j;
  for (std::size_t k = us + 1; k < n.size(); ++k) {
    auto iit = std::find_if(independents.begin(), independents.end(),
                            [&](Symbol x) { return x.name()[0] == n[k]; });
    if (iit == independents.end()) return std::nullopt;
    ++j.counts[static_cast<std::size_t>(iit - independents.begin())];
  }
  return j;
}

bool PdeSystem::is_parameter(Symbol s) const {
  return std::find(parameters.begin(), parameters.end(), s) != parameters.end();
}

int PdeSystem::independent_index(Symbol s) const {
  auto it = std::find(independents.begin(), independents.end(), s);
  return it == independents.end() ? -1 : static_cast<int>(it - independents.begin());
}

int PdeSystem::max_order() const {
  int m = 0;
  for (const auto& eq : equations)
    for (Symbol s : eq.variables())
      if (auto j = jet_of(s)) m = std::max(m, j->order());
  return m;
}

VarOrder PdeSystem::var_order(const std::vector<Symbol>& extra) const {
  std::vector<Symbol> o = independents;
  o.insert(o.end(), dependents.begin(), dependents.end());
  o.insert(o.end(), extra.begin(), extra.end());
  return VarOrder(std::move(o));
}

ParseContext PdeSystem::context() const {
  ParseContext c;
  for (Symbol s : independents) c.declare_independent(s.name());
  for (Symbol s : dependents) c.declare_dependent(s.name());
  for (Symbol s : parameters) c.declare_parameter(s.name());
  for (const auto& [from, to] : aliases) c.alias(from, to);
  return c;
}

PdeSystem PdeSystem::from_strings(std::string name, const std::vector<std::string>& independents,
                                  const std::vector<std::string>& dependents,
                                  const std::vector<std::string>& parameters,
                                  const std::vector<std::string>& equations,
                                  const std::map<std::string, std::string>& aliases) {
  PdeSystem sys;
  sys.name = std::move(name);
  for (const auto& s : independents) sys.independents.emplace_back(s);
  for (const auto& s : dependents) sys.dependents.emplace_back(s);
  for (const auto& s : parameters) sys.parameters.emplace_back(s);
  sys.aliases = aliases;
  ParseContext ctx = sys.context();
  for (const auto& e : equations) sys.equations.push_back(poly_normalize(parse_expr(e, ctx)));
  sys.leading.assign(sys.equations.size(), std::nullopt);
  return sys;
}

Poly total_derivative(const Poly& e, std::size_t i, const PdeSystem& sys) {
  Poly r = e.diff(sys.independents.at(i));
  for (Symbol s : e.variables()) {
    auto j = sys.jet_of(s);
    if (!j) continue;
    r += e.diff(s) * Poly::var(sys.jet_symbol(j->shifted(i)));
  }
  return r;
}

Poly total_derivative(const Poly& e, const std::vector<int>& counts, const PdeSystem& sys) {
  Poly r = e;
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (int k = 0; k < counts[i]; ++k) r = total_derivative(r, i, sys);
  return r;
}

const SolvedEntry* SolvedForm::find(Symbol s) const {
  auto it = index_.find(s);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

JetCoord choose_leading(const Poly& eq, const PdeSystem& sys) {
  std::optional<JetCoord> best;
  for (Symbol s : eq.variables()) {
    auto j = sys.jet_of(s);
    if (!j) continue;
    if (!best) {
      best = j;
      continue;
    }
    int c = j->order() != best->order() ? (j->order() > best->order() ? 1 : -1) : revlex(j->counts, best->counts);
    if (c == 0) c = j->dep > best->dep ? 1 : -1;
    if (c > 0) best = j;
  }
  if (!best) throw JetError("equation has no jet coordinate: " + to_string(eq));
  return *best;
}

namespace {

/// Pseudo-substitution of lc*lead = rhs into e. Returns the multiplier applied.
Poly substitute_lead(Poly& e, Symbol lead, const Poly& lc, const Poly& rhs) {
  int d = e.degree(lead);
  if (d == 0) return Poly(1);
  Poly out;
  Poly rk(1);
  for (int k = 0; k <= d; ++k) {
    out += e.coeff(lead, k) * rk * pow(lc, static_cast<unsigned>(d - k));
    rk = rk * rhs;
  }
  e = std::move(out);
  return pow(lc, static_cast<unsigned>(d));
}

}  // namespace

SolvedForm solve_leading(const PdeSystem& sys, int closure_order) {
  if (closure_order < 0) closure_order = sys.max_order() + 1;
  std::vector<SolvedEntry> entries;
  auto has = [&](Symbol s) {
    return std::any_of(entries.begin(), entries.end(), [&](const SolvedEntry& e) { return e.symbol == s; });
  };

  for (std::size_t nu = 0; nu < sys.equations.size(); ++nu) {
    const Poly& eq = sys.equations[nu];
    JetCoord lead = nu < sys.leading.size() && sys.leading[nu] ? *sys.leading[nu] : choose_leading(eq, sys);
    Symbol ls = sys.jet_symbol(lead);
    if (eq.degree(ls) != 1)
      throw JetError("equation " + std::to_string(nu + 1) + " is not linear in its leading coordinate " + ls.name());
    Poly lc = eq.coeff(ls, 1);
    for (Symbol s : lc.variables())
      if (!sys.is_parameter(s))
        throw JetError("leading coefficient of " + ls.name() + " depends on " + s.name());
    Poly rhs = -eq.coeff(ls, 0);
    if (lc.is_constant()) {
      rhs *= Rational(1) / lc.constant_value();
      lc = Poly(1);
    } else if (sorted_terms(lc).front().second.sign() < 0) {
      lc = -lc;
      rhs = -rhs;
    }
    if (has(ls)) throw JetError("two equations share the leading coordinate " + ls.name());
    entries.push_back({lead, ls, lc, rhs, nu, std::vector<int>(sys.independents.size(), 0)});
  }

  // differential consequences, breadth first
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (entries[k].lead.order() >= closure_order) continue;
    for (std::size_t i = 0; i < sys.independents.size(); ++i) {
      JetCoord nl = entries[k].lead.shifted(i);
      Symbol ns = sys.jet_symbol(nl);
      if (has(ns)) continue;
      std::vector<int> derived = entries[k].derived;
      ++derived[i];
      Poly rhs = total_derivative(entries[k].rhs, i, sys);
      entries.push_back({nl, ns, entries[k].lc, std::move(rhs), entries[k].equation, std::move(derived)});
    }
  }

  std::unordered_map<Symbol, std::size_t> idx;
  for (std::size_t k = 0; k < entries.size(); ++k) idx[entries[k].symbol] = k;

  enum class State { fresh, visiting, done };
  std::vector<State> state(entries.size(), State::fresh);
  std::function<void(std::size_t)> reduce_entry = [&](std::size_t k) {
    if (state[k] == State::done) return;
    if (state[k] == State::visiting) throw JetError("cyclic ranking at " + entries[k].symbol.name());
    state[k] = State::visiting;
    std::vector<std::size_t> present;
    for (Symbol s : entries[k].rhs.variables()) {
      auto it = idx.find(s);
      if (it != idx.end()) present.push_back(it->second);
    }
    std::sort(present.begin(), present.end(),
              [&](std::size_t a, std::size_t b) { return rank_less(entries[b].lead, entries[a].lead); });
    for (std::size_t p : present) {
      reduce_entry(p);
      Poly mult = substitute_lead(entries[k].rhs, entries[p].symbol, entries[p].lc, entries[p].rhs);
      entries[k].lc = entries[k].lc * mult;
    }
    state[k] = State::done;
  };
  for (std::size_t k = 0; k < entries.size(); ++k) reduce_entry(k);

  for (const auto& e : entries) {
    for (Symbol s : e.rhs.variables()) {
      auto j = sys.jet_of(s);
      if (j && !rank_less(*j, e.lead))
        throw JetError("ranking violated: " + s.name() + " in the solved form of " + e.symbol.name());
    }
  }

  std::stable_sort(entries.begin(), entries.end(),
                   [](const SolvedEntry& a, const SolvedEntry& b) { return rank_less(a.lead, b.lead); });
  SolvedForm sf;
  sf.entries_ = std::move(entries);
  for (std::size_t k = 0; k < sf.entries_.size(); ++k) sf.index_[sf.entries_[k].symbol] = k;
  sf.closure_order_ = closure_order;
  return sf;
}

Poly reduce_mod_system(const Poly& e, const SolvedForm& sf) {
  std::vector<const SolvedEntry*> present;
  for (Symbol s : e.variables())
    if (const SolvedEntry* p = sf.find(s)) present.push_back(p);
  if (present.empty()) return e;
  std::sort(present.begin(), present.end(),
            [](const SolvedEntry* a, const SolvedEntry* b) { return rank_less(b->lead, a->lead); });
  Poly r = e;
  for (const SolvedEntry* p : present) substitute_lead(r, p->symbol, p->lc, p->rhs);
  return r;
}

}  // namespace liesym
