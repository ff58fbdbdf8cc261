#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace recseg {

/// Implicit matrix given by an evaluation function; never materialized.
struct MatrixOracle {
  std::function<double(std::size_t, std::size_t)> eval;  // (row, col)
  std::size_t nrows = 0;
  std::size_t ncols = 0;
};

namespace detail {

// Recursive SMAWK over explicit row/column index vectors. For each column,
// finds the smallest row attaining the column maximum, assuming the matrix
// is totally monotone. Comparisons use strict > so earlier rows survive ties.
template <class F>
void smawk_rec(F& eval, const std::vector<std::size_t>& rows,
               const std::vector<std::size_t>& cols,
               std::vector<std::size_t>& out) {
  if (cols.empty()) return;
  if (rows.size() == 1) {
    for (std::size_t c : cols) out[c] = rows[0];
    return;
  }

  // REDUCE: keep at most |cols| candidate rows
  std::vector<std::size_t> stack;
  stack.reserve(cols.size());
  for (std::size_t r : rows) {
    for (;;) {
      if (stack.empty()) break;
      const std::size_t c = cols[stack.size() - 1];
      if (eval(r, c) > eval(stack.back(), c)) {
        stack.pop_back();
      } else {
        break;
      }
    }
    if (stack.size() < cols.size()) stack.push_back(r);
  }

  // recurse on odd-position columns
  std::vector<std::size_t> odd;
  odd.reserve(cols.size() / 2);
  for (std::size_t i = 1; i < cols.size(); i += 2) odd.push_back(cols[i]);
  smawk_rec(eval, stack, odd, out);

  // INTERPOLATE: even-position columns scan between neighbouring answers
  std::size_t start = 0;
  for (std::size_t i = 0; i < cols.size(); i += 2) {
    const std::size_t col = cols[i];
    std::size_t stop = stack.size() - 1;
    if (i + 1 < cols.size()) {
      // the next odd column's answer bounds the scan; it sits at or after
      // start, so the total scan length telescopes to O(|stack|)
      const std::size_t bound = out[cols[i + 1]];
      stop = start;
      while (stack[stop] != bound) ++stop;
    }
    std::size_t best = stack[start];
    double best_val = eval(best, col);
    for (std::size_t j = start + 1; j <= stop; ++j) {
      const double val = eval(stack[j], col);
      if (val > best_val) {
        best_val = val;
        best = stack[j];
      }
    }
    out[col] = best;
    start = stop;
  }
}

}  // namespace detail

/// For each column j, the smallest row index attaining max_i x(i, j).
/// O(nrows + ncols) oracle evaluations for totally monotone matrices.
template <class F>
std::vector<std::size_t> column_argmax(F&& eval, std::size_t nrows,
                                       std::size_t ncols) {
  std::vector<std::size_t> rows(nrows), cols(ncols), out(ncols);
  for (std::size_t i = 0; i < nrows; ++i) rows[i] = i;
  for (std::size_t j = 0; j < ncols; ++j) cols[j] = j;
  detail::smawk_rec(eval, rows, cols, out);
  return out;
}

inline std::vector<std::size_t> column_argmax(const MatrixOracle& m) {
  return column_argmax(m.eval, m.nrows, m.ncols);
}

/// Test utility: exhaustively verify the 2x2 submatrix condition,
/// "x(i2,j1) > x(i1,j1) implies x(i2,j2) >= x(i1,j2)" for i1 < i2, j1 < j2.
/// rel_tol absorbs roundoff in oracles whose rows tie mathematically but
/// are assembled from differently rounded sums.
inline bool check_totally_monotone(const MatrixOracle& m, double rel_tol = 0.0) {
  const auto gt = [rel_tol](double a, double b) {
    if (a <= b) return false;
    if (std::isinf(a) || std::isinf(b)) return true;
    return a - b > rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
  };
  for (std::size_t i1 = 0; i1 < m.nrows; ++i1)
    for (std::size_t i2 = i1 + 1; i2 < m.nrows; ++i2)
      for (std::size_t j1 = 0; j1 < m.ncols; ++j1)
        for (std::size_t j2 = j1 + 1; j2 < m.ncols; ++j2)
          if (gt(m.eval(i2, j1), m.eval(i1, j1)) &&
              gt(m.eval(i1, j2), m.eval(i2, j2)))
            return false;
  return true;
}

}  // namespace recseg
