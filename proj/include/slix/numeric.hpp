#ifndef SLIX_NUMERIC_HPP
#define SLIX_NUMERIC_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace slix {

using Int = mpz_class;
using Rat = mpq_class;

// Vector over the naturals; coordinate meaning is supplied by a Coords.
using Vec = std::vector<Int>;

// Raised when a configured resource limit is hit. Callers that see this know
// the computation was cut short, never that an answer was wrong.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& what, int line_, int col_)
      : std::runtime_error(what + " (line " + std::to_string(line_) + ", column " +
                           std::to_string(col_) + ")"),
        line(line_), column(col_) {}
};

// Named coordinate axes of an ambient space N^k.
struct Coords {
  std::vector<std::string> names;

  Coords() = default;
  explicit Coords(std::vector<std::string> ns) : names(std::move(ns)) {}

  std::size_t dim() const { return names.size(); }
  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    return -1;
  }
  bool operator==(const Coords& o) const { return names == o.names; }
};

inline Vec zero_vec(std::size_t k) { return Vec(k, Int(0)); }

inline Vec unit_vec(std::size_t k, std::size_t i) {
  Vec v(k, Int(0));
  v.at(i) = 1;
  return v;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

// a - b; caller guarantees the result stays nonnegative where it matters.
inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline bool leq(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline bool is_zero(const Vec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

inline Int vec_sum(const Vec& a) {
  Int s = 0;
  for (const auto& x : a) s += x;
  return s;
}

struct VecHash {
  std::size_t operator()(const Vec& v) const {
    std::size_t h = 1469598103934665603ull;
    for (const auto& x : v) {
      std::size_t e = static_cast<std::size_t>(mpz_get_si(x.get_mpz_t()));
      h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

inline std::string vec_to_string(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

}  // namespace slix

#endif
