#pragma once

#include <vector>

namespace prbqkd {

/// maximize c·x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0,
/// with all right-hand sides nonnegative.
struct LinearProgram {
  std::vector<double> c;
  std::vector<std::vector<double>> A_ub;
  std::vector<double> b_ub;
  std::vector<std::vector<double>> A_eq;
  std::vector<double> b_eq;
};

struct SimplexResult {
  std::vector<double> x;
  std::vector<double> y_ub;  // duals of the inequality rows (>= 0)
  std::vector<double> y_eq;  // duals of the equality rows (free)
  double objective = 0.0;
  double dual_objective = 0.0;
  double dual_infeasibility = 0.0;  // max violation of A^T y >= c, y_ub >= 0
  int iterations = 0;
};

/// Dense two-phase tableau simplex with Bland's rule. Throws NumericError
/// when the program is infeasible, unbounded or fails to terminate.
[[nodiscard]] SimplexResult solve_simplex(const LinearProgram& lp, double tolerance = 1e-11);

}  // namespace prbqkd
