#include "slix/formula.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace slix {

// ---------------------------------------------------------------------------
// LinearTerm

LinearTerm& LinearTerm::add(const LinearTerm& o, const Int& scale) {
  for (const auto& [v, c] : o.coeffs) {
    Int& slot = coeffs[v];
    slot += c * scale;
    if (slot == 0) coeffs.erase(v);
  }
  constant += o.constant * scale;
  return *this;
}

LinearTerm LinearTerm::scaled(const Int& s) const {
  LinearTerm r;
  if (s == 0) return r;
  for (const auto& [v, c] : coeffs) r.coeffs[v] = c * s;
  r.constant = constant * s;
  return r;
}

LinearTerm LinearTerm::substituted(VarId v, const LinearTerm& repl) const {
  auto it = coeffs.find(v);
  if (it == coeffs.end()) return *this;
  Int c = it->second;
  LinearTerm r = *this;
  r.coeffs.erase(v);
  r.add(repl, c);
  return r;
}

Int LinearTerm::evaluate(const std::map<VarId, Int>& env) const {
  Int r = constant;
  for (const auto& [v, c] : coeffs) {
    auto it = env.find(v);
    if (it == env.end()) throw std::invalid_argument("unbound variable in term");
    r += c * it->second;
  }
  return r;
}

bool LinearTerm::operator<(const LinearTerm& o) const {
  if (constant != o.constant) return constant < o.constant;
  return std::lexicographical_compare(
      coeffs.begin(), coeffs.end(), o.coeffs.begin(), o.coeffs.end(),
      [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
      });
}

LinearTerm operator+(const LinearTerm& a, const LinearTerm& b) {
  LinearTerm r = a;
  r.add(b);
  return r;
}

LinearTerm operator-(const LinearTerm& a, const LinearTerm& b) {
  LinearTerm r = a;
  r.add(b, Int(-1));
  return r;
}

// ---------------------------------------------------------------------------
// Node construction

namespace {

std::size_t hash_mix(std::size_t h, std::size_t x) {
  return h ^ (x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

std::size_t hash_int(const Int& x) {
  return std::hash<long>()(mpz_get_si(x.get_mpz_t())) ^ (mpz_sgn(x.get_mpz_t()) < 0 ? 0x5555 : 0);
}

std::size_t hash_term(const LinearTerm& t) {
  std::size_t h = hash_int(t.constant);
  for (const auto& [v, c] : t.coeffs) {
    h = hash_mix(h, v);
    h = hash_mix(h, hash_int(c));
  }
  return h;
}

std::size_t node_hash(const FNode& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 0x100000001b3ull;
  switch (n.kind) {
    case FKind::True:
    case FKind::False:
      break;
    case FKind::Cmp:
      h = hash_mix(h, static_cast<std::size_t>(n.rel));
      h = hash_mix(h, hash_term(n.term));
      break;
    case FKind::Div:
      h = hash_mix(h, hash_int(n.modulus));
      h = hash_mix(h, n.div_negated ? 7 : 11);
      h = hash_mix(h, hash_term(n.term));
      break;
    case FKind::And:
    case FKind::Or:
      for (const auto& k : n.kids) h = hash_mix(h, k.hash());
      break;
    case FKind::Exists:
    case FKind::Forall:
      h = hash_mix(h, n.var);
      h = hash_mix(h, n.kids[0].hash());
      break;
  }
  return h;
}

}  // namespace

struct FormulaFactory {
  static Formula make(FNode n) {
    n.hash = node_hash(n);
    return Formula(std::make_shared<const FNode>(std::move(n)));
  }
};

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  const FNode& a = *node_;
  const FNode& b = *o.node_;
  if (a.hash != b.hash || a.kind != b.kind) return false;
  switch (a.kind) {
    case FKind::True:
    case FKind::False:
      return true;
    case FKind::Cmp:
      return a.rel == b.rel && a.term == b.term;
    case FKind::Div:
      return a.modulus == b.modulus && a.div_negated == b.div_negated && a.term == b.term;
    case FKind::And:
    case FKind::Or: {
      if (a.kids.size() != b.kids.size()) return false;
      for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!(a.kids[i] == b.kids[i])) return false;
      return true;
    }
    case FKind::Exists:
    case FKind::Forall:
      return a.var == b.var && a.kids[0] == b.kids[0];
  }
  return false;
}

Formula Formula::truth(bool b) {
  FNode n;
  n.kind = b ? FKind::True : FKind::False;
  return FormulaFactory::make(std::move(n));
}

Formula Formula::cmp(LinearTerm t, Rel rel) {
  if (t.is_constant()) {
    bool v = rel == Rel::Eq ? t.constant == 0 : t.constant <= 0;
    return truth(v);
  }
  // gcd normalization
  Int g = 0;
  for (const auto& [v, c] : t.coeffs) g = gcd(g, c);
  g = abs(g);
  if (g > 1) {
    if (rel == Rel::Eq) {
      if (t.constant % g != 0) return truth(false);
      for (auto& [v, c] : t.coeffs) c /= g;
      t.constant /= g;
    } else {
      // sum g*c_i x_i + d <= 0  <=>  sum c_i x_i + ceil(d/g) <= 0
      for (auto& [v, c] : t.coeffs) c /= g;
      Int q;
      mpz_cdiv_q(q.get_mpz_t(), t.constant.get_mpz_t(), g.get_mpz_t());
      t.constant = q;
    }
  }
  // canonical sign for equalities: first coefficient positive
  if (rel == Rel::Eq && t.coeffs.begin()->second < 0) t = t.negated();
  FNode n;
  n.kind = FKind::Cmp;
  n.rel = rel;
  n.term = std::move(t);
  return FormulaFactory::make(std::move(n));
}

Formula Formula::divides(Int modulus, LinearTerm t, bool negated) {
  modulus = abs(modulus);
  if (modulus == 0) {
    Formula f = cmp(std::move(t), Rel::Eq);
    return negated ? f.negated() : f;
  }
  // reduce coefficients mod m
  for (auto it = t.coeffs.begin(); it != t.coeffs.end();) {
    Int r;
    mpz_mod(r.get_mpz_t(), it->second.get_mpz_t(), modulus.get_mpz_t());
    if (r == 0) {
      it = t.coeffs.erase(it);
    } else {
      it->second = r;
      ++it;
    }
  }
  {
    Int r;
    mpz_mod(r.get_mpz_t(), t.constant.get_mpz_t(), modulus.get_mpz_t());
    t.constant = r;
  }
  if (t.is_constant()) return truth((t.constant == 0) != negated);
  if (modulus == 1) return truth(!negated);
  Int g = modulus;
  for (const auto& [v, c] : t.coeffs) g = gcd(g, c);
  g = gcd(g, t.constant);
  g = abs(g);
  if (g > 1) {
    modulus /= g;
    for (auto& [v, c] : t.coeffs) c /= g;
    t.constant /= g;
    if (modulus == 1) return truth(!negated);
  }
  FNode n;
  n.kind = FKind::Div;
  n.modulus = std::move(modulus);
  n.div_negated = negated;
  n.term = std::move(t);
  return FormulaFactory::make(std::move(n));
}

namespace {

void flatten_into(FKind kind, const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == kind) {
    for (const auto& k : f.node().kids) flatten_into(kind, k, out);
  } else {
    out.push_back(f);
  }
}

Formula make_connective(FKind kind, std::vector<Formula> kids) {
  const bool is_and = kind == FKind::And;
  std::vector<Formula> flat;
  for (const auto& k : kids) flatten_into(kind, k, flat);
  std::vector<Formula> keep;
  for (auto& k : flat) {
    if (k.is_true()) {
      if (!is_and) return Formula::truth(true);
      continue;
    }
    if (k.is_false()) {
      if (is_and) return Formula::truth(false);
      continue;
    }
    bool dup = false;
    for (const auto& seen : keep)
      if (seen == k) {
        dup = true;
        break;
      }
    if (!dup) keep.push_back(std::move(k));
  }
  if (keep.empty()) return Formula::truth(is_and);
  if (keep.size() == 1) return keep[0];
  // stable canonical order, by hash then structural tiebreak via kind
  std::stable_sort(keep.begin(), keep.end(), [](const Formula& a, const Formula& b) {
    if (a.hash() != b.hash()) return a.hash() < b.hash();
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind());
  });
  FNode n;
  n.kind = kind;
  n.kids = std::move(keep);
  return FormulaFactory::make(std::move(n));
}

}  // namespace

Formula Formula::conj(std::vector<Formula> kids) { return make_connective(FKind::And, std::move(kids)); }
Formula Formula::disj(std::vector<Formula> kids) { return make_connective(FKind::Or, std::move(kids)); }

Formula Formula::exists(VarId v, Formula body) {
  if (body.is_true() || body.is_false()) return body;
  if (!body.mentions_free(v)) return body;
  FNode n;
  n.kind = FKind::Exists;
  n.var = v;
  n.kids = {std::move(body)};
  return FormulaFactory::make(std::move(n));
}

Formula Formula::forall(VarId v, Formula body) {
  if (body.is_true() || body.is_false()) return body;
  if (!body.mentions_free(v)) return body;
  FNode n;
  n.kind = FKind::Forall;
  n.var = v;
  n.kids = {std::move(body)};
  return FormulaFactory::make(std::move(n));
}

Formula Formula::exists_many(const std::vector<VarId>& vs, Formula body) {
  Formula f = std::move(body);
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) f = exists(*it, f);
  return f;
}

Formula Formula::forall_many(const std::vector<VarId>& vs, Formula body) {
  Formula f = std::move(body);
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) f = forall(*it, f);
  return f;
}

Formula Formula::negated() const {
  const FNode& n = *node_;
  switch (n.kind) {
    case FKind::True:
      return truth(false);
    case FKind::False:
      return truth(true);
    case FKind::Cmp:
      if (n.rel == Rel::Le) {
        // not(t <= 0)  <=>  -t + 1 <= 0
        LinearTerm t = n.term.negated();
        t.constant += 1;
        return cmp(std::move(t), Rel::Le);
      } else {
        // not(t = 0)  <=>  t <= -1  or  -t <= -1
        LinearTerm lo = n.term;
        lo.constant += 1;
        LinearTerm hi = n.term.negated();
        hi.constant += 1;
        return disj2(cmp(std::move(lo), Rel::Le), cmp(std::move(hi), Rel::Le));
      }
    case FKind::Div:
      return divides(n.modulus, n.term, !n.div_negated);
    case FKind::And: {
      std::vector<Formula> ks;
      ks.reserve(n.kids.size());
      for (const auto& k : n.kids) ks.push_back(k.negated());
      return disj(std::move(ks));
    }
    case FKind::Or: {
      std::vector<Formula> ks;
      ks.reserve(n.kids.size());
      for (const auto& k : n.kids) ks.push_back(k.negated());
      return conj(std::move(ks));
    }
    case FKind::Exists:
      return forall(n.var, n.kids[0].negated());
    case FKind::Forall:
      return exists(n.var, n.kids[0].negated());
  }
  return truth(false);
}

void Formula::collect_free_vars(std::map<VarId, bool>& out) const {
  const FNode& n = *node_;
  switch (n.kind) {
    case FKind::Cmp:
    case FKind::Div:
      for (const auto& [v, c] : n.term.coeffs) out[v] = true;
      break;
    case FKind::And:
    case FKind::Or:
      for (const auto& k : n.kids) k.collect_free_vars(out);
      break;
    case FKind::Exists:
    case FKind::Forall: {
      std::map<VarId, bool> inner;
      n.kids[0].collect_free_vars(inner);
      inner.erase(n.var);
      for (const auto& [v, b] : inner) out[v] = true;
      break;
    }
    default:
      break;
  }
}

std::vector<VarId> Formula::free_vars() const {
  std::map<VarId, bool> m;
  collect_free_vars(m);
  std::vector<VarId> r;
  for (const auto& [v, b] : m) r.push_back(v);
  return r;
}

bool Formula::mentions_free(VarId v) const {
  const FNode& n = *node_;
  switch (n.kind) {
    case FKind::Cmp:
    case FKind::Div:
      return n.term.mentions(v);
    case FKind::And:
    case FKind::Or:
      for (const auto& k : n.kids)
        if (k.mentions_free(v)) return true;
      return false;
    case FKind::Exists:
    case FKind::Forall:
      if (n.var == v) return false;
      return n.kids[0].mentions_free(v);
    default:
      return false;
  }
}

VarId Formula::max_var_bound() const {
  VarId m = 0;
  const FNode& n = *node_;
  switch (n.kind) {
    case FKind::Cmp:
    case FKind::Div:
      for (const auto& [v, c] : n.term.coeffs) m = std::max(m, v + 1);
      return m;
    case FKind::And:
    case FKind::Or:
      for (const auto& k : n.kids) m = std::max(m, k.max_var_bound());
      return m;
    case FKind::Exists:
    case FKind::Forall:
      return std::max(n.var + 1, n.kids[0].max_var_bound());
    default:
      return 0;
  }
}

bool Formula::quantifier_free() const {
  const FNode& n = *node_;
  switch (n.kind) {
    case FKind::Exists:
    case FKind::Forall:
      return false;
    case FKind::And:
    case FKind::Or:
      for (const auto& k : n.kids)
        if (!k.quantifier_free()) return false;
      return true;
    default:
      return true;
  }
}

std::size_t Formula::size() const {
  const FNode& n = *node_;
  std::size_t s = 1;
  for (const auto& k : n.kids) s += k.size();
  return s;
}

Formula Formula::substituted(VarId v, const LinearTerm& repl) const {
  const FNode& n = *node_;
  switch (n.kind) {
    case FKind::True:
    case FKind::False:
      return *this;
    case FKind::Cmp:
      if (!n.term.mentions(v)) return *this;
      return cmp(n.term.substituted(v, repl), n.rel);
    case FKind::Div:
      if (!n.term.mentions(v)) return *this;
      return divides(n.modulus, n.term.substituted(v, repl), n.div_negated);
    case FKind::And:
    case FKind::Or: {
      std::vector<Formula> ks;
      ks.reserve(n.kids.size());
      for (const auto& k : n.kids) ks.push_back(k.substituted(v, repl));
      return n.kind == FKind::And ? conj(std::move(ks)) : disj(std::move(ks));
    }
    case FKind::Exists:
    case FKind::Forall: {
      if (n.var == v) return *this;
      Formula body = n.kids[0].substituted(v, repl);
      return n.kind == FKind::Exists ? exists(n.var, std::move(body))
                                     : forall(n.var, std::move(body));
    }
  }
  return *this;
}

Formula Formula::rename_bound(VarGen& gen) const {
  const FNode& n = *node_;
  switch (n.kind) {
    case FKind::And:
    case FKind::Or: {
      std::vector<Formula> ks;
      ks.reserve(n.kids.size());
      for (const auto& k : n.kids) ks.push_back(k.rename_bound(gen));
      return n.kind == FKind::And ? conj(std::move(ks)) : disj(std::move(ks));
    }
    case FKind::Exists:
    case FKind::Forall: {
      VarId fresh = gen.fresh();
      Formula body = n.kids[0].rename_bound(gen);
      body = body.substituted(n.var, LinearTerm::var(fresh));
      return n.kind == FKind::Exists ? exists(fresh, std::move(body))
                                     : forall(fresh, std::move(body));
    }
    default:
      return *this;
  }
}

bool Formula::evaluate_qf(const std::map<VarId, Int>& env) const {
  const FNode& n = *node_;
  switch (n.kind) {
    case FKind::True:
      return true;
    case FKind::False:
      return false;
    case FKind::Cmp: {
      Int v = n.term.evaluate(env);
      return n.rel == Rel::Eq ? v == 0 : v <= 0;
    }
    case FKind::Div: {
      Int v = n.term.evaluate(env);
      bool divides = v % n.modulus == 0;
      return divides != n.div_negated;
    }
    case FKind::And:
      for (const auto& k : n.kids)
        if (!k.evaluate_qf(env)) return false;
      return true;
    case FKind::Or:
      for (const auto& k : n.kids)
        if (k.evaluate_qf(env)) return true;
      return false;
    default:
      throw std::invalid_argument("evaluate_qf on quantified formula");
  }
}

// ---------------------------------------------------------------------------
// S-expression text form

namespace {

std::string var_name(VarId v, const Coords& coords,
                     const std::map<VarId, std::string>& bound) {
  auto it = bound.find(v);
  if (it != bound.end()) return it->second;
  if (v < coords.dim()) return coords.names[v];
  return "v" + std::to_string(v);
}

std::string term_to_sexpr(const LinearTerm& t, const Coords& coords,
                          const std::map<VarId, std::string>& bound) {
  std::vector<std::string> parts;
  for (const auto& [v, c] : t.coeffs) {
    std::string name = var_name(v, coords, bound);
    if (c == 1)
      parts.push_back(name);
    else
      parts.push_back("(* " + c.get_str() + " " + name + ")");
  }
  if (t.constant != 0 || parts.empty()) parts.push_back(t.constant.get_str());
  if (parts.size() == 1) return parts[0];
  std::string s = "(+";
  for (const auto& p : parts) s += " " + p;
  return s + ")";
}

void write_sexpr(const Formula& f, const Coords& coords,
                 std::map<VarId, std::string>& bound, int& counter, std::string& out) {
  const FNode& n = f.node();
  switch (n.kind) {
    case FKind::True:
      out += "true";
      return;
    case FKind::False:
      out += "false";
      return;
    case FKind::Cmp:
      out += n.rel == Rel::Eq ? "(= " : "(<= ";
      out += term_to_sexpr(n.term, coords, bound);
      out += " 0)";
      return;
    case FKind::Div:
      if (n.div_negated) out += "(not ";
      out += "(divides " + n.modulus.get_str() + " " + term_to_sexpr(n.term, coords, bound) + ")";
      if (n.div_negated) out += ")";
      return;
    case FKind::And:
    case FKind::Or: {
      out += n.kind == FKind::And ? "(and" : "(or";
      for (const auto& k : n.kids) {
        out += " ";
        write_sexpr(k, coords, bound, counter, out);
      }
      out += ")";
      return;
    }
    case FKind::Exists:
    case FKind::Forall: {
      std::string name = "q" + std::to_string(counter++);
      out += n.kind == FKind::Exists ? "(exists (" : "(forall (";
      out += name + ") ";
      bound[n.var] = name;
      write_sexpr(n.kids[0], coords, bound, counter, out);
      bound.erase(n.var);
      out += ")";
      return;
    }
  }
}

struct SexprParser {
  const std::string& text;
  std::size_t pos = 0;
  const Coords& coords;
  VarGen& gen;
  std::map<std::string, VarId> scope;

  SexprParser(const std::string& t, const Coords& c, VarGen& g)
      : text(t), coords(c), gen(g) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    if (pos >= text.size()) throw ParseError("unexpected end of formula", 1, (int)pos + 1);
    return text[pos];
  }
  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", 1, (int)pos + 1);
    ++pos;
  }
  std::string token() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')')
      ++pos;
    if (start == pos) throw ParseError("expected token", 1, (int)pos + 1);
    return text.substr(start, pos - start);
  }

  VarId lookup(const std::string& name) {
    auto it = scope.find(name);
    if (it != scope.end()) return it->second;
    int ci = coords.index_of(name);
    if (ci >= 0) return static_cast<VarId>(ci);
    throw ParseError("unknown variable '" + name + "'", 1, (int)pos + 1);
  }

  LinearTerm parse_term() {
    if (peek() != '(') {
      std::string tok = token();
      if (tok[0] == '-' && tok.size() > 1) return LinearTerm(Int(tok));
      if (std::isdigit(static_cast<unsigned char>(tok[0]))) return LinearTerm(Int(tok));
      return LinearTerm::var(lookup(tok));
    }
    expect('(');
    std::string op = token();
    LinearTerm r;
    if (op == "+") {
      while (peek() != ')') r.add(parse_term());
    } else if (op == "-") {
      r = parse_term();
      if (peek() == ')') {
        r = r.negated();
      } else {
        while (peek() != ')') r.add(parse_term(), Int(-1));
      }
    } else if (op == "*") {
      std::string c = token();
      LinearTerm t = parse_term();
      r = t.scaled(Int(c));
    } else {
      throw ParseError("unknown term operator '" + op + "'", 1, (int)pos + 1);
    }
    expect(')');
    return r;
  }

  Formula parse_formula() {
    if (peek() != '(') {
      std::string tok = token();
      if (tok == "true") return Formula::truth(true);
      if (tok == "false") return Formula::truth(false);
      throw ParseError("unexpected token '" + tok + "'", 1, (int)pos + 1);
    }
    expect('(');
    std::string op = token();
    Formula result;
    if (op == "and" || op == "or") {
      std::vector<Formula> kids;
      while (peek() != ')') kids.push_back(parse_formula());
      result = op == "and" ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    } else if (op == "not") {
      result = parse_formula().negated();
    } else if (op == "exists" || op == "forall") {
      expect('(');
      std::vector<VarId> vs;
      std::vector<std::pair<std::string, std::optional<VarId>>> saved;
      while (peek() != ')') {
        std::string name = token();
        VarId v = gen.fresh();
        auto it = scope.find(name);
        saved.emplace_back(name, it == scope.end() ? std::nullopt
                                                   : std::optional<VarId>(it->second));
        scope[name] = v;
        vs.push_back(v);
      }
      expect(')');
      Formula body = parse_formula();
      for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
        if (it->second)
          scope[it->first] = *it->second;
        else
          scope.erase(it->first);
      }
      result = op == "exists" ? Formula::exists_many(vs, std::move(body))
                              : Formula::forall_many(vs, std::move(body));
    } else if (op == "=" || op == "<=" || op == ">=" || op == "<" || op == ">") {
      LinearTerm a = parse_term();
      LinearTerm b = parse_term();
      if (op == "=") {
        result = Formula::eq(a, b);
      } else if (op == "<=") {
        result = Formula::leq(a, b);
      } else if (op == ">=") {
        result = Formula::leq(b, a);
      } else if (op == "<") {
        LinearTerm t = a - b;
        t.constant += 1;
        result = Formula::cmp(std::move(t), Rel::Le);
      } else {
        LinearTerm t = b - a;
        t.constant += 1;
        result = Formula::cmp(std::move(t), Rel::Le);
      }
    } else if (op == "divides") {
      std::string m = token();
      LinearTerm t = parse_term();
      result = Formula::divides(Int(m), std::move(t));
    } else {
      throw ParseError("unknown operator '" + op + "'", 1, (int)pos + 1);
    }
    expect(')');
    return result;
  }
};

}  // namespace

std::string to_sexpr(const Formula& f, const Coords& coords) {
  std::string out;
  std::map<VarId, std::string> bound;
  int counter = 0;
  write_sexpr(f, coords, bound, counter, out);
  return out;
}

Formula parse_sexpr(const std::string& text, const Coords& coords, VarGen& gen) {
  SexprParser p(text, coords, gen);
  Formula f = p.parse_formula();
  p.skip_ws();
  if (p.pos != text.size())
    throw ParseError("trailing input after formula", 1, (int)p.pos + 1);
  return f;
}

}  // namespace slix
