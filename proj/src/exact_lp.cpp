#include "revpref/exact_lp.hpp"

#include <stdexcept>

namespace revpref {

LpSolution maximize_lp(const std::vector<RationalVector>& a, const RationalVector& b,
                       const RationalVector& c) {
  const std::size_t rows = a.size();
  const std::size_t vars = c.size();
  if (b.size() != rows) throw std::invalid_argument("maximize_lp: row count mismatch");
  for (const auto& row : a) {
    if (row.size() != vars) throw std::invalid_argument("maximize_lp: column count mismatch");
  }
  for (const auto& v : b) {
    if (v < 0) throw std::invalid_argument("maximize_lp: right-hand side must be nonnegative");
  }

  // Columns: structural variables, then one slack per row, then the rhs.
  const std::size_t cols = vars + rows;
  std::vector<RationalVector> tab(rows, RationalVector(cols + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < vars; ++j) tab[i][j] = a[i][j];
    tab[i][vars + i] = 1;
    tab[i][cols] = b[i];
  }
  // Reduced costs; the objective value sits in the last entry, negated.
  RationalVector obj(cols + 1);
  for (std::size_t j = 0; j < vars; ++j) obj[j] = c[j];

  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) basis[i] = vars + i;

  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (obj[j] > 0) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;

    std::size_t leave = rows;
    Rational best_ratio;
    for (std::size_t i = 0; i < rows; ++i) {
      if (tab[i][enter] <= 0) continue;
      Rational ratio = tab[i][cols] / tab[i][enter];
      if (leave == rows || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = std::move(ratio);
      }
    }
    if (leave == rows) throw std::domain_error("maximize_lp: unbounded objective");

    const Rational pivot = tab[leave][enter];
    for (auto& v : tab[leave]) v /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || tab[i][enter] == 0) continue;
      const Rational factor = tab[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) tab[i][j] -= factor * tab[leave][j];
    }
    if (obj[enter] != 0) {
      const Rational factor = obj[enter];
      for (std::size_t j = 0; j <= cols; ++j) obj[j] -= factor * tab[leave][j];
    }
    basis[leave] = enter;
  }

  LpSolution out{RationalVector(vars), Rational(0)};
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < vars) out.x[basis[i]] = tab[i][cols];
  }
  out.value = -obj[cols];
  return out;
}

}  // namespace revpref
