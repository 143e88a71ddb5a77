#include "slix/affine.hpp"

#include <algorithm>
#include <sstream>

namespace slix {

std::size_t rref(std::vector<std::vector<Rat>>& m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[rank], m[pivot]);
    Rat inv = m[rank][col];
    for (auto& x : m[rank]) x /= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      Rat f = m[r][col];
      for (std::size_t c = 0; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  m.resize(rank);
  return rank;
}

AffineSystem affine_hull(const SemilinearRep& r) {
  if (r.components.empty())
    throw std::invalid_argument("affine_hull: empty set has no affine hull");
  const std::size_t k = r.dim();

  // direction space: all periods plus base differences, anchored at the
  // first base
  std::vector<std::vector<Rat>> dirs;
  auto push_dir = [&](const Vec& a, const Vec* anchor) {
    std::vector<Rat> row(k);
    for (std::size_t i = 0; i < k; ++i) {
      row[i] = Rat(a[i]);
      if (anchor) row[i] -= Rat((*anchor)[i]);
    }
    dirs.push_back(std::move(row));
  };
  const Vec& b0 = r.components[0].base;
  for (const auto& ls : r.components) {
    if (&ls != &r.components[0]) push_dir(ls.base, &b0);
    for (const auto& p : ls.periods) push_dir(p, nullptr);
  }
  std::size_t dir_rank = rref(dirs);

  // rows of B = basis of the kernel of the direction matrix
  // (free columns of the RREF give the standard kernel basis)
  std::vector<bool> is_pivot(k, false);
  std::vector<std::size_t> pivot_col(dir_rank);
  {
    std::size_t row = 0;
    for (std::size_t col = 0; col < k && row < dir_rank; ++col) {
      if (dirs[row][col] == 1) {
        bool pivot = true;
        for (std::size_t r2 = 0; r2 < dir_rank; ++r2)
          if (r2 != row && dirs[r2][col] != 0) pivot = false;
        if (pivot) {
          is_pivot[col] = true;
          pivot_col[row] = col;
          ++row;
        }
      }
    }
  }
  std::vector<std::vector<Rat>> kernel;
  for (std::size_t col = 0; col < k; ++col) {
    if (is_pivot[col]) continue;
    std::vector<Rat> v(k, Rat(0));
    v[col] = 1;
    for (std::size_t row = 0; row < dir_rank; ++row) v[pivot_col[row]] = -dirs[row][col];
    kernel.push_back(std::move(v));
  }
  rref(kernel);

  AffineSystem sys{r.coords, std::move(kernel), {}};
  sys.rhs.resize(sys.rows.size());
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    Rat c = 0;
    for (std::size_t j = 0; j < k; ++j) c += sys.rows[i][j] * Rat(b0[j]);
    sys.rhs[i] = c;
  }
  return sys;
}

bool satisfies(const AffineSystem& sys, const Vec& v) {
  if (v.size() != sys.dim()) throw std::invalid_argument("satisfies: dimension mismatch");
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    Rat s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += sys.rows[i][j] * Rat(v[j]);
    if (s != sys.rhs[i]) return false;
  }
  return true;
}

std::string affine_to_string(const AffineSystem& sys) {
  std::ostringstream os;
  os << "coords:";
  for (const auto& n : sys.coords.names) os << " " << n;
  os << "\n";
  if (sys.rows.empty()) {
    os << "no relations\n";
    return os.str();
  }
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    bool first = true;
    for (std::size_t j = 0; j < sys.rows[i].size(); ++j) {
      const Rat& c = sys.rows[i][j];
      if (c == 0) continue;
      if (!first) os << " + ";
      if (c != 1) os << c.get_str() << "*";
      os << sys.coords.names[j];
      first = false;
    }
    if (first) os << "0";
    os << " = " << sys.rhs[i].get_str() << "\n";
  }
  return os.str();
}

}  // namespace slix
