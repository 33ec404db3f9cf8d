#include "prbqkd/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "prbqkd/errors.hpp"

namespace prbqkd {

namespace {

class Tableau {
 public:
  Tableau(const LinearProgram& lp, double tol)
      : n_(lp.c.size()),
        m_ub_(lp.A_ub.size()),
        m_eq_(lp.A_eq.size()),
        cols_(n_ + m_ub_ + m_eq_),
        tol_(tol) {
    const std::size_t m = m_ub_ + m_eq_;
    t_.assign(m, std::vector<double>(cols_ + 1, 0.0));
    basis_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& row = i < m_ub_ ? lp.A_ub[i] : lp.A_eq[i - m_ub_];
      const double rhs = i < m_ub_ ? lp.b_ub[i] : lp.b_eq[i - m_ub_];
      if (row.size() != n_) throw ParameterError("constraint row width does not match the objective");
      if (rhs < 0.0) throw ParameterError("simplex requires nonnegative right-hand sides");
      std::copy(row.begin(), row.end(), t_[i].begin());
      t_[i][n_ + i] = 1.0;  // slack for <= rows, artificial for = rows
      t_[i][cols_] = rhs;
      basis_[i] = n_ + i;
    }
    d_.assign(cols_ + 1, 0.0);
  }

  [[nodiscard]] bool is_artificial(std::size_t j) const { return j >= n_ + m_ub_ && j < cols_; }

  void set_costs(const std::vector<double>& cost) {
    cost_ = cost;
    std::fill(d_.begin(), d_.end(), 0.0);
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) d_[j] += cb * t_[i][j];
    }
    for (std::size_t j = 0; j < cols_; ++j) d_[j] -= cost_[j];
  }

  // Runs Bland-rule pivots on the current costs until optimal.
  void optimize(bool allow_artificial, int& iterations, int max_iterations) {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (d_[j] < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return;

      double best = std::numeric_limits<double>::infinity();
      for (const auto& row : t_) {
        if (row[enter] > tol_) best = std::min(best, row[cols_] / row[enter]);
      }
      if (best == std::numeric_limits<double>::infinity()) throw NumericError("linear program is unbounded");
      std::size_t leave = t_.size();
      for (std::size_t i = 0; i < t_.size(); ++i) {
        const double a = t_[i][enter];
        if (a <= tol_ || t_[i][cols_] / a > best + tol_) continue;
        if (leave == t_.size() || basis_[i] < basis_[leave]) leave = i;
      }
      pivot(leave, enter);
      if (++iterations > max_iterations) throw NumericError("simplex did not terminate within the iteration limit");
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    auto& pr = t_[row];
    const double p = pr[col];
    for (auto& v : pr) v /= p;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == row) continue;
      const double f = t_[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) t_[i][j] -= f * pr[j];
      t_[i][col] = 0.0;
    }
    const double f = d_[col];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= cols_; ++j) d_[j] -= f * pr[j];
      d_[col] = 0.0;
    }
    basis_[row] = col;
  }

  // Replaces artificial variables left basic at level zero.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (std::size_t j = 0; j < n_ + m_ub_; ++j) {
        if (std::abs(t_[i][j]) > tol_) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  [[nodiscard]] double objective() const { return d_[cols_]; }
  [[nodiscard]] double reduced_cost(std::size_t j) const { return d_[j]; }

  [[nodiscard]] std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (basis_[i] < n_) x[basis_[i]] = std::max(0.0, t_[i][cols_]);
    }
    return x;
  }

  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] std::size_t m_ub() const { return m_ub_; }
  [[nodiscard]] std::size_t m_eq() const { return m_eq_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

 private:
  std::size_t n_, m_ub_, m_eq_, cols_;
  double tol_;
  std::vector<std::vector<double>> t_;
  std::vector<std::size_t> basis_;
  std::vector<double> cost_;
  std::vector<double> d_;
};

}  // namespace

SimplexResult solve_simplex(const LinearProgram& lp, double tolerance) {
  if (lp.A_ub.size() != lp.b_ub.size() || lp.A_eq.size() != lp.b_eq.size())
    throw ParameterError("constraint and right-hand-side counts differ");
  Tableau tab(lp, tolerance);
  const int max_iterations = 200 * static_cast<int>(tab.cols() + tab.m_ub() + tab.m_eq()) + 1000;
  int iterations = 0;

  if (tab.m_eq() > 0) {
    std::vector<double> phase1(tab.cols(), 0.0);
    for (std::size_t j = tab.n() + tab.m_ub(); j < tab.cols(); ++j) phase1[j] = -1.0;
    tab.set_costs(phase1);
    tab.optimize(true, iterations, max_iterations);
    double scale = 1.0;
    for (double b : lp.b_eq) scale = std::max(scale, std::abs(b));
    if (tab.objective() < -1e-9 * scale) throw NumericError("linear program is infeasible");
    tab.drive_out_artificials();
  }

  std::vector<double> phase2(tab.cols(), 0.0);
  std::copy(lp.c.begin(), lp.c.end(), phase2.begin());
  tab.set_costs(phase2);
  tab.optimize(false, iterations, max_iterations);

  SimplexResult out;
  out.iterations = iterations;
  out.x = tab.primal();
  // Reduced costs on the starting identity columns are c_B B^{-1}, the duals.
  out.y_ub.resize(tab.m_ub());
  out.y_eq.resize(tab.m_eq());
  for (std::size_t i = 0; i < tab.m_ub(); ++i) out.y_ub[i] = tab.reduced_cost(tab.n() + i);
  for (std::size_t i = 0; i < tab.m_eq(); ++i) out.y_eq[i] = tab.reduced_cost(tab.n() + tab.m_ub() + i);

  // Both objectives and dual feasibility are re-evaluated on the original data.
  out.objective = 0.0;
  for (std::size_t j = 0; j < tab.n(); ++j) out.objective += lp.c[j] * out.x[j];
  out.dual_objective = 0.0;
  for (std::size_t i = 0; i < tab.m_ub(); ++i) out.dual_objective += lp.b_ub[i] * out.y_ub[i];
  for (std::size_t i = 0; i < tab.m_eq(); ++i) out.dual_objective += lp.b_eq[i] * out.y_eq[i];
  double infeasibility = 0.0;
  for (double y : out.y_ub) infeasibility = std::max(infeasibility, -y);
  for (std::size_t j = 0; j < tab.n(); ++j) {
    double ay = 0.0;
    for (std::size_t i = 0; i < tab.m_ub(); ++i) ay += lp.A_ub[i][j] * out.y_ub[i];
    for (std::size_t i = 0; i < tab.m_eq(); ++i) ay += lp.A_eq[i][j] * out.y_eq[i];
    infeasibility = std::max(infeasibility, lp.c[j] - ay);
  }
  out.dual_infeasibility = infeasibility;
  return out;
}

}  // namespace prbqkd
