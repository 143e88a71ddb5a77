#include "slix/qe.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>

namespace slix {

namespace {

struct QeState {
  QeBudget budget;
  long long steps = 0;
  void charge(long long n) {
    steps += n;
    if (steps > budget.max_steps) throw BudgetError("quantifier elimination budget exhausted");
  }
};

// One atom of a conjunction being eliminated, normalized so the quantified
// variable y occurs with coefficient +1 or -1 (after scaling to the lcm).
struct YAtom {
  enum class Kind { UpperLe, LowerLe, Div } kind;
  // UpperLe:  y + rest <= 0;  LowerLe:  -y + rest <= 0;  Div: m | y + rest
  LinearTerm rest;
  Int modulus;      // Div only
  bool negated = false;  // Div only

  Formula instantiate(const LinearTerm& y_value) const {
    switch (kind) {
      case Kind::UpperLe:
        return Formula::cmp(y_value + rest, Rel::Le);
      case Kind::LowerLe:
        return Formula::cmp(rest - y_value, Rel::Le);
      case Kind::Div:
        return Formula::divides(modulus, y_value + rest, negated);
    }
    return Formula::truth(false);
  }
};

Formula qe_exists(VarId v, Formula f, QeState& st);

// Conjunction of atoms mentioning v; other conjuncts were already split off.
Formula cooper_conjunction(VarId v, const std::vector<Formula>& atoms, QeState& st) {
  st.charge(static_cast<long long>(atoms.size()));

  // Equality substitution: v is pinned by some equation, so solve for it.
  int best_eq = -1;
  Int best_abs;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const FNode& n = atoms[i].node();
    if (n.kind == FKind::Cmp && n.rel == Rel::Eq) {
      Int a = abs(n.term.coeff_of(v));
      if (a != 0 && (best_eq < 0 || a < best_abs)) {
        best_eq = static_cast<int>(i);
        best_abs = a;
      }
    }
  }
  if (best_eq >= 0) {
    const FNode& eqn = atoms[best_eq].node();
    Int c = eqn.term.coeff_of(v);
    LinearTerm t = eqn.term;  // c*v + t0 = 0
    t.coeffs.erase(v);
    Int ac = abs(c);
    Int sign = c > 0 ? 1 : -1;
    std::vector<Formula> out;
    out.push_back(Formula::divides(ac, t));
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (static_cast<int>(i) == static_cast<std::size_t>(best_eq)) continue;
      const FNode& n = atoms[i].node();
      Int a = n.term.coeff_of(v);
      LinearTerm s = n.term;
      s.coeffs.erase(v);
      // |c| * (a v + s) = -sign(c) * a * t + |c| * s
      LinearTerm mapped = s.scaled(ac);
      mapped.add(t, -sign * a);
      if (n.kind == FKind::Cmp)
        out.push_back(Formula::cmp(std::move(mapped), n.rel));
      else
        out.push_back(Formula::divides(n.modulus * ac, std::move(mapped), n.div_negated));
    }
    st.charge(static_cast<long long>(out.size()));
    return Formula::conj(std::move(out));
  }

  // General Cooper step over y = delta * v.
  Int delta = 1;
  for (const auto& a : atoms) delta = lcm(delta, abs(a.node().term.coeff_of(v)));

  std::vector<YAtom> ys;
  Int div_lcm = delta;
  for (const auto& af : atoms) {
    const FNode& n = af.node();
    Int a = n.term.coeff_of(v);
    Int k = delta / abs(a);
    LinearTerm rest = n.term;
    rest.coeffs.erase(v);
    rest = rest.scaled(k);
    YAtom y;
    if (n.kind == FKind::Cmp) {
      assert(n.rel == Rel::Le);  // equalities were substituted away above
      // a v + s <= 0 scaled by k:  sign(a) y + k s <= 0
      y.kind = a > 0 ? YAtom::Kind::UpperLe : YAtom::Kind::LowerLe;
      y.rest = std::move(rest);
    } else {
      // m | a v + s scaled:  k m | sign(a) y + k s; flip sign if needed
      y.kind = YAtom::Kind::Div;
      y.modulus = n.modulus * k;
      y.negated = n.div_negated;
      y.rest = a > 0 ? rest : rest.negated();  // m | y + r  <=>  m | -(y + r)
      div_lcm = lcm(div_lcm, y.modulus);
    }
    ys.push_back(std::move(y));
  }
  // divisibility induced by y = delta v
  if (delta > 1) {
    YAtom d;
    d.kind = YAtom::Kind::Div;
    d.modulus = delta;
    d.rest = LinearTerm();
    ys.push_back(std::move(d));
  }

  if (!div_lcm.fits_slong_p() || div_lcm.get_si() > st.budget.max_disjunction)
    throw BudgetError("divisibility lcm too large in elimination");
  long long D = div_lcm.get_si();

  std::vector<const YAtom*> lowers, uppers;
  for (const auto& y : ys) {
    if (y.kind == YAtom::Kind::LowerLe) lowers.push_back(&y);
    if (y.kind == YAtom::Kind::UpperLe) uppers.push_back(&y);
  }
  bool from_below = lowers.size() <= uppers.size();
  const auto& bounds = from_below ? lowers : uppers;

  long long width = static_cast<long long>(std::max<std::size_t>(bounds.size(), 1)) * D;
  if (width > st.budget.max_disjunction)
    throw BudgetError("candidate disjunction too large in elimination");
  st.charge(width * static_cast<long long>(ys.size() + 1));

  auto instantiate_all = [&](const LinearTerm& val) {
    std::vector<Formula> conj;
    conj.reserve(ys.size());
    for (const auto& y : ys) conj.push_back(y.instantiate(val));
    return Formula::conj(std::move(conj));
  };

  std::vector<Formula> cases;
  if (bounds.empty()) {
    // solutions exist arbitrarily far on the unbounded side; only the
    // divisibility constraints matter there
    for (long long j = 0; j < D; ++j) {
      std::vector<Formula> conj;
      for (const auto& y : ys)
        if (y.kind == YAtom::Kind::Div)
          conj.push_back(y.instantiate(LinearTerm(Int(from_below ? -j : j))));
      cases.push_back(Formula::conj(std::move(conj)));
    }
  } else {
    for (const auto* b : bounds) {
      for (long long j = 0; j < D; ++j) {
        // from below: y = rest(b) + j where atom was -y + rest <= 0
        // from above: y = -rest(b) - j where atom was y + rest <= 0
        LinearTerm val = from_below ? b->rest : b->rest.negated();
        val.constant += from_below ? Int(j) : Int(-j);
        cases.push_back(instantiate_all(val));
      }
    }
  }
  return Formula::disj(std::move(cases));
}

Formula qe_exists(VarId v, Formula f, QeState& st) {
  if (!f.mentions_free(v)) return f;
  switch (f.kind()) {
    case FKind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.node().kids) kids.push_back(qe_exists(v, k, st));
      return Formula::disj(std::move(kids));
    }
    case FKind::Cmp:
    case FKind::Div:
      return cooper_conjunction(v, {f}, st);
    case FKind::And: {
      std::vector<Formula> dep, free;
      for (const auto& k : f.node().kids)
        (k.mentions_free(v) ? dep : free).push_back(k);
      // distribute one disjunction at a time until the dependent part is flat
      int or_at = -1;
      std::size_t or_size = 0;
      for (std::size_t i = 0; i < dep.size(); ++i) {
        if (dep[i].kind() == FKind::Or) {
          std::size_t sz = dep[i].node().kids.size();
          if (or_at < 0 || sz < or_size) {
            or_at = static_cast<int>(i);
            or_size = sz;
          }
        }
      }
      Formula dep_result;
      if (or_at >= 0) {
        st.charge(static_cast<long long>(or_size));
        std::vector<Formula> cases;
        for (const auto& branch : dep[or_at].node().kids) {
          std::vector<Formula> sub = dep;
          sub[static_cast<std::size_t>(or_at)] = branch;
          cases.push_back(qe_exists(v, Formula::conj(std::move(sub)), st));
        }
        dep_result = Formula::disj(std::move(cases));
      } else {
        dep_result = cooper_conjunction(v, dep, st);
      }
      free.push_back(std::move(dep_result));
      return Formula::conj(std::move(free));
    }
    default:
      throw std::logic_error("qe_exists: unexpected node");
  }
}

Formula natural(VarId v) {
  // 0 <= v
  return Formula::cmp(LinearTerm::var(v, Int(-1)), Rel::Le);
}

Formula qe_rec(const Formula& f, QeState& st) {
  const FNode& n = f.node();
  switch (n.kind) {
    case FKind::And:
    case FKind::Or: {
      std::vector<Formula> kids;
      kids.reserve(n.kids.size());
      for (const auto& k : n.kids) kids.push_back(qe_rec(k, st));
      return n.kind == FKind::And ? Formula::conj(std::move(kids))
                                  : Formula::disj(std::move(kids));
    }
    case FKind::Exists: {
      Formula body = qe_rec(n.kids[0], st);
      return qe_exists(n.var, Formula::conj2(natural(n.var), std::move(body)), st);
    }
    case FKind::Forall: {
      Formula body = qe_rec(n.kids[0], st);
      Formula ex = qe_exists(n.var, Formula::conj2(natural(n.var), body.negated()), st);
      return ex.negated();
    }
    default:
      return f;
  }
}

struct DecideCache {
  std::unordered_map<std::size_t, std::vector<std::pair<Formula, bool>>> map;
  std::size_t entries = 0;
  const bool* find(const Formula& f) const {
    auto it = map.find(f.hash());
    if (it == map.end()) return nullptr;
    for (const auto& [g, r] : it->second)
      if (g == f) return &r;
    return nullptr;
  }
  void insert(const Formula& f, bool r) {
    if (entries > 100000) {
      map.clear();
      entries = 0;
    }
    map[f.hash()].emplace_back(f, r);
    ++entries;
  }
};

thread_local DecideCache g_decide_cache;

}  // namespace

Formula eliminate_quantifiers(const Formula& f, const QeBudget& budget) {
  QeState st{budget};
  VarGen gen(f.max_var_bound());
  Formula renamed = f.rename_bound(gen);
  return qe_rec(renamed, st);
}

bool decide(const Formula& sentence, const QeBudget& budget) {
  if (!sentence.free_vars().empty())
    throw std::invalid_argument("decide: sentence has free variables");
  if (sentence.is_true()) return true;
  if (sentence.is_false()) return false;
  if (const bool* hit = g_decide_cache.find(sentence)) return *hit;
  Formula g = eliminate_quantifiers(sentence, budget);
  if (!g.is_true() && !g.is_false())
    g = Formula::truth(g.evaluate_qf({}));
  bool r = g.is_true();
  g_decide_cache.insert(sentence, r);
  return r;
}

bool evaluate(const Formula& f, const std::map<VarId, Int>& env, const QeBudget& budget) {
  Formula g = f;
  for (VarId v : f.free_vars()) {
    auto it = env.find(v);
    if (it == env.end()) throw std::invalid_argument("evaluate: unbound free variable");
    if (it->second < 0) throw std::invalid_argument("evaluate: negative assignment");
    g = g.substituted(v, LinearTerm(it->second));
  }
  if (g.quantifier_free()) return g.evaluate_qf({});
  return decide(g, budget);
}

bool included(const Formula& f, const Formula& g, const QeBudget& budget) {
  std::map<VarId, bool> vars;
  f.collect_free_vars(vars);
  g.collect_free_vars(vars);
  std::vector<VarId> vs;
  for (const auto& [v, b] : vars) vs.push_back(v);
  Formula impl = Formula::disj2(f.negated(), g);
  return decide(Formula::forall_many(vs, std::move(impl)), budget);
}

bool satisfiable(const Formula& f, const QeBudget& budget) {
  std::vector<VarId> vs = f.free_vars();
  return decide(Formula::exists_many(vs, f), budget);
}

bool equivalent(const Formula& f, const Formula& g, const QeBudget& budget) {
  return included(f, g, budget) && included(g, f, budget);
}

}  // namespace slix
