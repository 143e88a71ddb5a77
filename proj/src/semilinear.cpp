#include "slix/semilinear.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace slix {

bool vec_less(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

SemilinearRep SemilinearRep::from_points(Coords c, const std::vector<Vec>& pts) {
  SemilinearRep r{std::move(c), {}};
  for (const auto& p : pts) r.components.push_back(LinearSet{p, {}});
  return canonicalized(r);
}

Formula semilinear_to_formula(const SemilinearRep& r, VarGen& gen) {
  const std::size_t k = r.dim();
  std::vector<Formula> comps;
  for (const auto& ls : r.components) {
    std::vector<VarId> lambdas;
    lambdas.reserve(ls.periods.size());
    for (std::size_t j = 0; j < ls.periods.size(); ++j) lambdas.push_back(gen.fresh());
    std::vector<Formula> eqs;
    for (std::size_t i = 0; i < k; ++i) {
      LinearTerm t = LinearTerm::var(static_cast<VarId>(i));
      t.constant -= ls.base[i];
      for (std::size_t j = 0; j < ls.periods.size(); ++j)
        t.add(LinearTerm::var(lambdas[j], ls.periods[j][i]), Int(-1));
      eqs.push_back(Formula::cmp(std::move(t), Rel::Eq));
    }
    comps.push_back(Formula::exists_many(lambdas, Formula::conj(std::move(eqs))));
  }
  return Formula::disj(std::move(comps));
}

Formula semilinear_to_formula(const SemilinearRep& r) {
  VarGen gen(static_cast<VarId>(r.dim()));
  return semilinear_to_formula(r, gen);
}

namespace {

bool member_search(const Vec& remaining, const std::vector<Vec>& periods,
                   std::unordered_set<Vec, VecHash>& failed) {
  if (is_zero(remaining)) return true;
  if (failed.count(remaining)) return false;
  for (const auto& p : periods) {
    if (leq(p, remaining) && member_search(sub(remaining, p), periods, failed))
      return true;
  }
  failed.insert(remaining);
  return false;
}

}  // namespace

bool member(const SemilinearRep& r, const Vec& v) {
  if (v.size() != r.dim()) throw std::invalid_argument("member: dimension mismatch");
  for (const auto& ls : r.components) {
    if (!leq(ls.base, v)) continue;
    std::unordered_set<Vec, VecHash> failed;
    if (member_search(sub(v, ls.base), ls.periods, failed)) return true;
  }
  return false;
}

std::vector<Vec> sample_solutions(const Formula& f, std::size_t k, const Vec& box,
                                  long long max_cells, const QeBudget& budget) {
  if (box.size() != k) throw std::invalid_argument("sample_solutions: bad box");
  Int cells = 1;
  for (const auto& b : box) cells *= b + 1;
  if (!cells.fits_slong_p() || cells.get_si() > max_cells)
    throw BudgetError("sample_solutions: box too large");
  Formula qf = f.quantifier_free() ? f : eliminate_quantifiers(f, budget);
  std::vector<Vec> out;
  Vec cur = zero_vec(k);
  std::map<VarId, Int> env;
  while (true) {
    for (std::size_t i = 0; i < k; ++i) env[static_cast<VarId>(i)] = cur[i];
    if (qf.evaluate_qf(env)) out.push_back(cur);
    std::size_t i = 0;
    for (; i < k; ++i) {
      if (cur[i] < box[i]) {
        ++cur[i];
        break;
      }
      cur[i] = 0;
    }
    if (i == k) break;
  }
  std::sort(out.begin(), out.end(), vec_less);
  return out;
}

namespace {

bool component_subsumed(const LinearSet& a, const SemilinearRep& host, std::size_t skip) {
  // cheap sufficient test: base and every period reachable inside one
  // other component
  for (std::size_t j = 0; j < host.components.size(); ++j) {
    if (j == skip) continue;
    const LinearSet& b = host.components[j];
    SemilinearRep one{host.coords, {b}};
    if (!member(one, a.base)) continue;
    bool all = true;
    SemilinearRep periods_only{host.coords, {LinearSet{zero_vec(host.dim()), b.periods}}};
    for (const auto& p : a.periods) {
      if (!member(periods_only, p)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

SemilinearRep canonicalized(const SemilinearRep& r) {
  SemilinearRep out{r.coords, {}};
  for (const auto& ls : r.components) {
    LinearSet c = ls;
    std::vector<Vec> ps;
    for (auto& p : c.periods)
      if (!is_zero(p)) ps.push_back(p);
    std::sort(ps.begin(), ps.end(), vec_less);
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    c.periods = std::move(ps);
    out.components.push_back(std::move(c));
  }
  std::sort(out.components.begin(), out.components.end(),
            [](const LinearSet& a, const LinearSet& b) {
              if (a.base != b.base) return vec_less(a.base, b.base);
              return std::lexicographical_compare(a.periods.begin(), a.periods.end(),
                                                  b.periods.begin(), b.periods.end(),
                                                  vec_less);
            });
  out.components.erase(std::unique(out.components.begin(), out.components.end()),
                       out.components.end());
  // drop components covered by a sibling; survivors of earlier rounds and
  // not-yet-visited components both count as potential hosts, so mutually
  // covering pairs keep exactly one member
  std::vector<LinearSet> kept;
  for (std::size_t i = 0; i < out.components.size(); ++i) {
    SemilinearRep hosts{out.coords, kept};
    for (std::size_t j = i + 1; j < out.components.size(); ++j)
      hosts.components.push_back(out.components[j]);
    if (!component_subsumed(out.components[i], hosts, static_cast<std::size_t>(-1)))
      kept.push_back(out.components[i]);
  }
  out.components = std::move(kept);
  return out;
}

Int rep_encoding_size(const SemilinearRep& r) {
  Int s = Int(r.components.size());
  for (const auto& ls : r.components) {
    s += vec_sum(ls.base) + Int(ls.periods.size());
    for (const auto& p : ls.periods) s += vec_sum(p);
  }
  return s;
}

bool rep_less(const SemilinearRep& a, const SemilinearRep& b) {
  Int sa = rep_encoding_size(a), sb = rep_encoding_size(b);
  if (sa != sb) return sa < sb;
  if (a.components.size() != b.components.size())
    return a.components.size() < b.components.size();
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    const LinearSet& x = a.components[i];
    const LinearSet& y = b.components[i];
    if (x.base != y.base) return vec_less(x.base, y.base);
    if (x.periods != y.periods)
      return std::lexicographical_compare(x.periods.begin(), x.periods.end(),
                                          y.periods.begin(), y.periods.end(), vec_less);
  }
  return false;
}

// --- text form --------------------------------------------------------------

std::string rep_to_string(const SemilinearRep& r) {
  std::ostringstream os;
  os << "coords:";
  for (const auto& n : r.coords.names) os << " " << n;
  os << "\n";
  if (r.components.empty()) {
    os << "empty\n";
    return os.str();
  }
  for (std::size_t i = 0; i < r.components.size(); ++i) {
    if (i) os << " | ";
    const LinearSet& ls = r.components[i];
    os << "{ base: " << vec_to_string(ls.base) << "; periods: [";
    for (std::size_t j = 0; j < ls.periods.size(); ++j) {
      if (j) os << ",";
      os << vec_to_string(ls.periods[j]);
    }
    os << "] }";
  }
  os << "\n";
  return os.str();
}

namespace {

struct RepParser {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;

  explicit RepParser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      if (text[pos] == '\n') ++line;
      ++pos;
    }
  }
  char peek() {
    skip_ws();
    if (pos >= text.size()) throw ParseError("unexpected end of representation", line, 1);
    return text[pos];
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  void expect(char c) {
    if (peek() != c)
      throw ParseError(std::string("expected '") + c + "'", line, (int)pos + 1);
    ++pos;
  }
  bool try_consume(char c) {
    if (done() || peek() != c) return false;
    ++pos;
    return true;
  }
  std::string word() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           std::string("(){};,:[]|").find(text[pos]) == std::string::npos)
      ++pos;
    return text.substr(start, pos - start);
  }
  void keyword(const std::string& kw) {
    std::string w = word();
    if (w != kw) throw ParseError("expected '" + kw + "', found '" + w + "'", line, (int)pos + 1);
  }

  Vec vector(std::size_t k) {
    expect('(');
    Vec v;
    if (!try_consume(')')) {
      while (true) {
        std::string w = word();
        if (w.empty()) throw ParseError("expected number", line, (int)pos + 1);
        v.push_back(Int(w));
        if (try_consume(')')) break;
        expect(',');
      }
    }
    if (k != 0 && v.size() != k)
      throw ParseError("vector has wrong dimension", line, (int)pos + 1);
    return v;
  }
};

}  // namespace

SemilinearRep parse_rep(const std::string& text) {
  RepParser p(text);
  p.keyword("coords");
  p.expect(':');
  std::vector<std::string> names;
  {
    // coordinate names: rest of the line
    while (p.pos < text.size() && text[p.pos] != '\n') {
      while (p.pos < text.size() && (text[p.pos] == ' ' || text[p.pos] == '\t')) ++p.pos;
      if (p.pos >= text.size() || text[p.pos] == '\n') break;
      std::size_t start = p.pos;
      while (p.pos < text.size() && !std::isspace(static_cast<unsigned char>(text[p.pos])))
        ++p.pos;
      names.push_back(text.substr(start, p.pos - start));
    }
  }
  if (names.empty()) throw ParseError("empty coordinate list", p.line, 1);
  SemilinearRep r{Coords(names), {}};
  std::size_t k = names.size();
  p.skip_ws();
  if (p.done()) throw ParseError("missing components or 'empty'", p.line, 1);
  if (p.peek() != '{') {
    p.keyword("empty");
    if (!p.done()) throw ParseError("trailing input after 'empty'", p.line, 1);
    return r;
  }
  while (true) {
    p.expect('{');
    p.keyword("base");
    p.expect(':');
    LinearSet ls;
    ls.base = p.vector(k);
    p.expect(';');
    p.keyword("periods");
    p.expect(':');
    p.expect('[');
    if (!p.try_consume(']')) {
      while (true) {
        ls.periods.push_back(p.vector(k));
        if (p.try_consume(']')) break;
        p.expect(',');
      }
    }
    p.expect('}');
    r.components.push_back(std::move(ls));
    if (p.done()) break;
    p.expect('|');
  }
  return r;
}

}  // namespace slix
