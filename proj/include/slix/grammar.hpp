#ifndef SLIX_GRAMMAR_HPP
#define SLIX_GRAMMAR_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "slix/numeric.hpp"

namespace slix {

// Indexed grammar: nonterminals carry index stacks; productions push one
// index, pop the topmost index, or rewrite context-free with the stack copied
// to every nonterminal of the body. Context-free bodies lie in N* or T*,
// never mixed.
struct IndexedGrammar {
  enum class ProdKind { Push, Pop, ContextFree };

  struct Production {
    ProdKind kind;
    int lhs;                // nonterminal
    int index_sym = -1;     // Push: pushed symbol; Pop: required topmost symbol
    int rhs_nt = -1;        // Push/Pop: target nonterminal
    std::vector<int> body;  // ContextFree: symbol list (see body_terminal)
    bool body_terminal = false;  // body indices refer to terminals, else nonterminals

    bool operator==(const Production& o) const {
      return kind == o.kind && lhs == o.lhs && index_sym == o.index_sym &&
             rhs_nt == o.rhs_nt && body == o.body && body_terminal == o.body_terminal;
    }
  };

  std::vector<std::string> nonterminals, terminals, indices;  // declaration order
  std::vector<Production> productions;
  int start = 0;

  std::size_t num_nt() const { return nonterminals.size(); }
  std::size_t num_t() const { return terminals.size(); }

  // Parikh coordinates over N u T: nonterminals first, then terminals.
  Coords parikh_coords() const;
  std::size_t parikh_dim() const { return num_nt() + num_t(); }
  std::size_t nt_coord(int nt) const { return static_cast<std::size_t>(nt); }
  std::size_t t_coord(int t) const { return num_nt() + static_cast<std::size_t>(t); }

  int nt_index(const std::string& name) const;
  int t_index(const std::string& name) const;
};

// One item of a sentential form: a terminal, or a nonterminal with a stack
// (topmost index first).
struct FormItem {
  bool terminal;
  int sym;
  std::vector<int> stack;

  bool operator==(const FormItem& o) const {
    return terminal == o.terminal && sym == o.sym && stack == o.stack;
  }
  bool operator<(const FormItem& o) const {
    if (terminal != o.terminal) return terminal < o.terminal;
    if (sym != o.sym) return sym < o.sym;
    return stack < o.stack;
  }
};

using SententialForm = std::vector<FormItem>;

// --- text format -------------------------------------------------------------
//
// nonterminals: S R U ...
// terminals: a b
// indices: f g bot
// start: S
// S -> R bot        (push)
// U f -> V          (pop)
// R -> U U          (context-free, body all nonterminals or all terminals)
// E -> eps
//
// '#' starts a comment. 'eps' is reserved.
IndexedGrammar parse_grammar(const std::string& text);
std::string grammar_to_string(const IndexedGrammar& g);

SententialForm nt_form(const IndexedGrammar& g, int nt);
std::string form_to_string(const IndexedGrammar& g, const SententialForm& q);

// All r with q => r, each paired with the rewrite that produced it.
struct DeriveStep {
  SententialForm result;
  std::size_t position;    // index of the rewritten item in q
  std::size_t production;  // index into g.productions
};
std::vector<DeriveStep> derive_successors_detailed(const IndexedGrammar& g,
                                                   const SententialForm& q);
std::set<SententialForm> derive_successors(const IndexedGrammar& g,
                                           const SententialForm& q);
// Replay one rewrite; throws std::invalid_argument if it does not apply.
SententialForm apply_production(const IndexedGrammar& g, const SententialForm& q,
                                std::size_t position, std::size_t production);

struct EnumBounds {
  long long max_steps = 0;
  long long max_len = 0;
  long long node_limit = 1000000;
};

// Breadth-first closure of {A} under derivation, pruning forms longer than
// max_len, for at most max_steps levels.
std::set<SententialForm> enumerate_forms(const IndexedGrammar& g, int nt,
                                         const EnumBounds& bounds);

// Parikh image over N u T; every stack in w must be empty.
Vec parikh(const IndexedGrammar& g, const SententialForm& w);

// Under-approximation of the per-nonterminal derivable Parikh vectors:
// images of enumerated forms whose stacks are all empty.
std::map<int, std::vector<Vec>> delta_oracle(const IndexedGrammar& g,
                                             const EnumBounds& bounds);

// Terminal words (as terminal index sequences) derivable from the start
// symbol within the bounds; a bounded under-approximation of the language.
std::vector<std::vector<int>> enumerate_words(const IndexedGrammar& g,
                                              const EnumBounds& bounds);

}  // namespace slix

#endif
