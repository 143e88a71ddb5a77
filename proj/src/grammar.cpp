#include "slix/grammar.hpp"

#include <algorithm>
#include <sstream>

namespace slix {

Coords IndexedGrammar::parikh_coords() const {
  std::vector<std::string> names = nonterminals;
  names.insert(names.end(), terminals.begin(), terminals.end());
  return Coords(std::move(names));
}

int IndexedGrammar::nt_index(const std::string& name) const {
  for (std::size_t i = 0; i < nonterminals.size(); ++i)
    if (nonterminals[i] == name) return static_cast<int>(i);
  return -1;
}

int IndexedGrammar::t_index(const std::string& name) const {
  for (std::size_t i = 0; i < terminals.size(); ++i)
    if (terminals[i] == name) return static_cast<int>(i);
  return -1;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Token {
  std::string text;
  int line, column;
};

std::vector<std::vector<Token>> tokenize_lines(const std::string& text) {
  std::vector<std::vector<Token>> lines;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      if (raw[i] == '#') break;  // comment to end of line
      std::size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])) &&
             raw[i] != '#')
        ++i;
      toks.push_back({raw.substr(start, i - start), lineno, static_cast<int>(start) + 1});
    }
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  return lines;
}

enum class SymKind { None, NT, T, Index };

struct SymTable {
  std::map<std::string, std::pair<SymKind, int>> table;

  void declare(const std::string& name, SymKind kind, int idx, const Token& at) {
    if (name == "eps" || name == "->")
      throw ParseError("'" + name + "' is reserved and cannot be declared", at.line,
                       at.column);
    auto [it, fresh] = table.emplace(name, std::make_pair(kind, idx));
    if (!fresh)
      throw ParseError("symbol '" + name + "' declared in two alphabets", at.line,
                       at.column);
  }
  std::pair<SymKind, int> lookup(const Token& t) const {
    auto it = table.find(t.text);
    if (it == table.end())
      throw ParseError("undeclared symbol '" + t.text + "'", t.line, t.column);
    return it->second;
  }
};

std::vector<std::string> header_line(const std::vector<Token>& toks,
                                     const std::string& keyword) {
  if (toks.empty() || toks[0].text != keyword + ":")
    throw ParseError("expected '" + keyword + ":' line",
                     toks.empty() ? 0 : toks[0].line, toks.empty() ? 1 : toks[0].column);
  std::vector<std::string> names;
  for (std::size_t i = 1; i < toks.size(); ++i) names.push_back(toks[i].text);
  return names;
}

}  // namespace

IndexedGrammar parse_grammar(const std::string& text) {
  auto lines = tokenize_lines(text);
  if (lines.size() < 4) throw ParseError("missing header lines", 1, 1);

  IndexedGrammar g;
  g.nonterminals = header_line(lines[0], "nonterminals");
  g.terminals = header_line(lines[1], "terminals");
  g.indices = header_line(lines[2], "indices");
  if (g.nonterminals.empty())
    throw ParseError("at least one nonterminal required", lines[0][0].line, 1);

  SymTable sym;
  for (std::size_t i = 0; i < g.nonterminals.size(); ++i)
    sym.declare(g.nonterminals[i], SymKind::NT, static_cast<int>(i), lines[0][0]);
  for (std::size_t i = 0; i < g.terminals.size(); ++i)
    sym.declare(g.terminals[i], SymKind::T, static_cast<int>(i), lines[1][0]);
  for (std::size_t i = 0; i < g.indices.size(); ++i)
    sym.declare(g.indices[i], SymKind::Index, static_cast<int>(i), lines[2][0]);

  auto start_names = header_line(lines[3], "start");
  if (start_names.size() != 1)
    throw ParseError("start line must name exactly one nonterminal", lines[3][0].line, 1);
  {
    Token t = lines[3].back();
    auto [kind, idx] = sym.lookup(t);
    if (kind != SymKind::NT)
      throw ParseError("start symbol must be a nonterminal", t.line, t.column);
    g.start = idx;
  }

  for (std::size_t ln = 4; ln < lines.size(); ++ln) {
    const auto& toks = lines[ln];
    // locate the arrow
    std::size_t arrow = toks.size();
    for (std::size_t i = 0; i < toks.size(); ++i)
      if (toks[i].text == "->") {
        arrow = i;
        break;
      }
    if (arrow == toks.size())
      throw ParseError("production has no '->'", toks[0].line, toks[0].column);

    IndexedGrammar::Production p;
    if (arrow == 1) {
      auto [kind, idx] = sym.lookup(toks[0]);
      if (kind != SymKind::NT)
        throw ParseError("production left side must start with a nonterminal",
                         toks[0].line, toks[0].column);
      p.lhs = idx;
      std::vector<Token> rhs(toks.begin() + 2, toks.end());
      if (rhs.empty())
        throw ParseError("empty right-hand side (use 'eps')", toks[0].line,
                         toks[0].column);
      if (rhs.size() == 1 && rhs[0].text == "eps") {
        p.kind = IndexedGrammar::ProdKind::ContextFree;
        p.body_terminal = true;
      } else if (rhs.size() == 2 && sym.lookup(rhs[0]).first == SymKind::NT &&
                 sym.lookup(rhs[1]).first == SymKind::Index) {
        p.kind = IndexedGrammar::ProdKind::Push;
        p.rhs_nt = sym.lookup(rhs[0]).second;
        p.index_sym = sym.lookup(rhs[1]).second;
      } else {
        p.kind = IndexedGrammar::ProdKind::ContextFree;
        int nts = 0, ts = 0;
        for (const auto& t : rhs) {
          auto [kind2, idx2] = sym.lookup(t);
          if (kind2 == SymKind::NT)
            ++nts;
          else if (kind2 == SymKind::T)
            ++ts;
          else
            throw ParseError("index symbol '" + t.text +
                                 "' cannot appear in a context-free body",
                             t.line, t.column);
          p.body.push_back(idx2);
        }
        if (nts > 0 && ts > 0)
          throw ParseError("mixed terminals and nonterminals on right-hand side",
                           rhs[0].line, rhs[0].column);
        p.body_terminal = ts > 0;
      }
    } else if (arrow == 2) {
      auto [k0, i0] = sym.lookup(toks[0]);
      auto [k1, i1] = sym.lookup(toks[1]);
      if (k0 != SymKind::NT || k1 != SymKind::Index)
        throw ParseError("pop production left side must be 'A f'", toks[0].line,
                         toks[0].column);
      if (toks.size() != 4)
        throw ParseError("pop production right side must be one nonterminal",
                         toks[0].line, toks[0].column);
      auto [k2, i2] = sym.lookup(toks[3]);
      if (k2 != SymKind::NT)
        throw ParseError("pop production right side must be a nonterminal",
                         toks[3].line, toks[3].column);
      p.kind = IndexedGrammar::ProdKind::Pop;
      p.lhs = i0;
      p.index_sym = i1;
      p.rhs_nt = i2;
    } else {
      throw ParseError("malformed production left side", toks[0].line, toks[0].column);
    }
    g.productions.push_back(std::move(p));
  }
  return g;
}

std::string grammar_to_string(const IndexedGrammar& g) {
  std::ostringstream os;
  os << "nonterminals:";
  for (const auto& n : g.nonterminals) os << " " << n;
  os << "\nterminals:";
  for (const auto& n : g.terminals) os << " " << n;
  os << "\nindices:";
  for (const auto& n : g.indices) os << " " << n;
  os << "\nstart: " << g.nonterminals[g.start] << "\n";
  for (const auto& p : g.productions) {
    switch (p.kind) {
      case IndexedGrammar::ProdKind::Push:
        os << g.nonterminals[p.lhs] << " -> " << g.nonterminals[p.rhs_nt] << " "
           << g.indices[p.index_sym] << "\n";
        break;
      case IndexedGrammar::ProdKind::Pop:
        os << g.nonterminals[p.lhs] << " " << g.indices[p.index_sym] << " -> "
           << g.nonterminals[p.rhs_nt] << "\n";
        break;
      case IndexedGrammar::ProdKind::ContextFree:
        os << g.nonterminals[p.lhs] << " ->";
        if (p.body.empty()) {
          os << " eps";
        } else {
          for (int s : p.body)
            os << " " << (p.body_terminal ? g.terminals[s] : g.nonterminals[s]);
        }
        os << "\n";
        break;
    }
  }
  return os.str();
}

SententialForm nt_form(const IndexedGrammar& g, int nt) {
  (void)g;
  return {FormItem{false, nt, {}}};
}

std::string form_to_string(const IndexedGrammar& g, const SententialForm& q) {
  std::string s;
  for (const auto& it : q) {
    if (!s.empty()) s += " ";
    if (it.terminal) {
      s += g.terminals[it.sym];
    } else {
      s += g.nonterminals[it.sym];
      for (int f : it.stack) s += "[" + g.indices[f] + "]";
    }
  }
  return s.empty() ? "eps" : s;
}

// ---------------------------------------------------------------------------
// derivation

SententialForm apply_production(const IndexedGrammar& g, const SententialForm& q,
                                std::size_t position, std::size_t production) {
  if (position >= q.size() || production >= g.productions.size())
    throw std::invalid_argument("apply_production: out of range");
  const FormItem& item = q[position];
  const auto& p = g.productions[production];
  if (item.terminal || item.sym != p.lhs)
    throw std::invalid_argument("apply_production: production does not apply");

  SententialForm r(q.begin(), q.begin() + position);
  switch (p.kind) {
    case IndexedGrammar::ProdKind::Push: {
      FormItem ni{false, p.rhs_nt, {}};
      ni.stack.reserve(item.stack.size() + 1);
      ni.stack.push_back(p.index_sym);
      ni.stack.insert(ni.stack.end(), item.stack.begin(), item.stack.end());
      r.push_back(std::move(ni));
      break;
    }
    case IndexedGrammar::ProdKind::Pop: {
      if (item.stack.empty() || item.stack.front() != p.index_sym)
        throw std::invalid_argument("apply_production: topmost index mismatch");
      FormItem ni{false, p.rhs_nt,
                  std::vector<int>(item.stack.begin() + 1, item.stack.end())};
      r.push_back(std::move(ni));
      break;
    }
    case IndexedGrammar::ProdKind::ContextFree: {
      for (int s : p.body) {
        if (p.body_terminal)
          r.push_back(FormItem{true, s, {}});
        else
          r.push_back(FormItem{false, s, item.stack});
      }
      break;
    }
  }
  r.insert(r.end(), q.begin() + position + 1, q.end());
  return r;
}

std::vector<DeriveStep> derive_successors_detailed(const IndexedGrammar& g,
                                                   const SententialForm& q) {
  std::vector<DeriveStep> out;
  for (std::size_t pos = 0; pos < q.size(); ++pos) {
    const FormItem& item = q[pos];
    if (item.terminal) continue;
    for (std::size_t pi = 0; pi < g.productions.size(); ++pi) {
      const auto& p = g.productions[pi];
      if (p.lhs != item.sym) continue;
      if (p.kind == IndexedGrammar::ProdKind::Pop &&
          (item.stack.empty() || item.stack.front() != p.index_sym))
        continue;
      out.push_back(DeriveStep{apply_production(g, q, pos, pi), pos, pi});
    }
  }
  return out;
}

std::set<SententialForm> derive_successors(const IndexedGrammar& g,
                                           const SententialForm& q) {
  std::set<SententialForm> out;
  for (auto& step : derive_successors_detailed(g, q)) out.insert(std::move(step.result));
  return out;
}

std::set<SententialForm> enumerate_forms(const IndexedGrammar& g, int nt,
                                         const EnumBounds& bounds) {
  std::set<SententialForm> visited;
  std::vector<SententialForm> frontier;
  SententialForm init = nt_form(g, nt);
  visited.insert(init);  // the seed itself is never pruned
  frontier.push_back(init);
  for (long long step = 0; step < bounds.max_steps && !frontier.empty(); ++step) {
    std::vector<SententialForm> next;
    for (const auto& q : frontier) {
      for (auto& s : derive_successors_detailed(g, q)) {
        if (static_cast<long long>(s.result.size()) > bounds.max_len) continue;
        if (visited.insert(s.result).second) {
          if (static_cast<long long>(visited.size()) > bounds.node_limit)
            throw BudgetError("enumerate_forms: node limit exceeded");
          next.push_back(std::move(s.result));
        }
      }
    }
    frontier = std::move(next);
  }
  return visited;
}

Vec parikh(const IndexedGrammar& g, const SententialForm& w) {
  Vec v = zero_vec(g.parikh_dim());
  for (const auto& item : w) {
    if (!item.terminal && !item.stack.empty())
      throw std::invalid_argument("parikh: nonempty index stack");
    if (item.terminal)
      v[g.t_coord(item.sym)] += 1;
    else
      v[g.nt_coord(item.sym)] += 1;
  }
  return v;
}

std::map<int, std::vector<Vec>> delta_oracle(const IndexedGrammar& g,
                                             const EnumBounds& bounds) {
  std::map<int, std::vector<Vec>> out;
  for (std::size_t a = 0; a < g.num_nt(); ++a) {
    std::vector<Vec> vecs;
    for (const auto& q : enumerate_forms(g, static_cast<int>(a), bounds)) {
      bool flat = true;
      for (const auto& item : q)
        if (!item.terminal && !item.stack.empty()) {
          flat = false;
          break;
        }
      if (flat) vecs.push_back(parikh(g, q));
    }
    std::sort(vecs.begin(), vecs.end(), vec_less);
    vecs.erase(std::unique(vecs.begin(), vecs.end()), vecs.end());
    out[static_cast<int>(a)] = std::move(vecs);
  }
  return out;
}

std::vector<std::vector<int>> enumerate_words(const IndexedGrammar& g,
                                              const EnumBounds& bounds) {
  std::vector<std::vector<int>> words;
  for (const auto& q : enumerate_forms(g, g.start, bounds)) {
    bool all_terminal = true;
    std::vector<int> w;
    for (const auto& item : q) {
      if (!item.terminal) {
        all_terminal = false;
        break;
      }
      w.push_back(item.sym);
    }
    if (all_terminal) words.push_back(std::move(w));
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

}  // namespace slix
