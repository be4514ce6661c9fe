#include "exact_lp.hpp"

#include <cassert>
#include <cstddef>
#include <optional>

namespace crn::detail {

namespace {

struct Tableau {
  std::vector<std::vector<Rational>> rows;  // each row: coefficients then rhs
  std::vector<std::size_t> basis;
  std::vector<Rational> objective;          // reduced costs, last entry = -value
  std::size_t cols = 0;

  void pivot(std::size_t r, std::size_t col) {
    const Rational p = rows[r][col];
    for (auto& v : rows[r]) v /= p;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      const Rational f = rows[i][col];
      for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= f * rows[r][j];
    }
    if (objective[col] != 0) {
      const Rational f = objective[col];
      for (std::size_t j = 0; j < objective.size(); ++j) objective[j] -= f * rows[r][j];
    }
    basis[r] = col;
  }

  void price(const std::vector<Rational>& cost) {
    objective.assign(cols + 1, 0);
    for (std::size_t j = 0; j < cost.size(); ++j) objective[j] = cost[j];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Rational cb = basis[i] < cost.size() ? cost[basis[i]] : Rational(0);
      if (cb == 0) continue;
      for (std::size_t j = 0; j < objective.size(); ++j) objective[j] -= cb * rows[i][j];
    }
  }

  // Returns false when unbounded. Columns >= allowed are never entered.
  bool run(std::size_t allowed) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (objective[j] > 0) {
          enter = j;
          break;
        }
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][*enter] <= 0) continue;
        Rational ratio = rows[i].back() / rows[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }
};

}  // namespace

LpResult maximize(std::vector<std::vector<Rational>> a, std::vector<Rational> b,
                  const std::vector<Rational>& c) {
  const std::size_t r = a.size();
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < r; ++i) {
    if (b[i] < 0) {
      for (auto& v : a[i]) v = -v;
      b[i] = -b[i];
    }
  }

  // Phase I: one artificial per row.
  Tableau t;
  t.cols = n + r;
  t.rows.assign(r, std::vector<Rational>(n + r + 1, 0));
  t.basis.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.rows[i][j] = a[i][j];
    t.rows[i][n + i] = 1;
    t.rows[i].back() = b[i];
    t.basis[i] = n + i;
  }
  std::vector<Rational> phase1(n + r, 0);
  for (std::size_t i = 0; i < r; ++i) phase1[n + i] = -1;
  t.price(phase1);
  t.run(n + r);

  LpResult out;
  if (-t.objective.back() < 0) {
    out.status = LpStatus::Infeasible;
    return out;
  }

  // Drive artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < t.rows.size();) {
    if (t.basis[i] < n) {
      ++i;
      continue;
    }
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n; ++j) {
      if (t.rows[i][j] != 0) {
        col = j;
        break;
      }
    }
    if (col) {
      t.pivot(i, *col);
      ++i;
    } else {
      t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
      t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  t.price(c);
  if (!t.run(n)) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.x.assign(n, 0);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.basis[i] < n) out.x[t.basis[i]] = t.rows[i].back();
  }
  for (std::size_t j = 0; j < n; ++j) out.value += c[j] * out.x[j];
  return out;
}

}  // namespace crn::detail
