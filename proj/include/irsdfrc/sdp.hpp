// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "irsdfrc/types.hpp"

namespace irsdfrc::sdp {

/// Symmetric coefficient matrix restricted to one PSD block. Either dense, or
/// a list of upper-triangle entries (row <= col); an off-diagonal entry (i, j)
/// stands for both (i, j) and (j, i).
struct BlockCoef {
  int block = 0;
  bool dense = false;
  RMat matrix;
  struct Entry {
    int row;
    int col;
    double value;
  };
  std::vector<Entry> entries;
};

/// One equality <A, X> = rhs. The LP part pairs nonnegative-variable indices
/// with coefficients.
struct Constraint {
  std::vector<BlockCoef> blocks;
  std::vector<std::pair<int, double>> lp;
  double rhs = 0.0;
};

/// Standard-form real SDP over X = diag(X_1, ..., X_k, x_lp):
///
///   minimize   <C, X>
///   subject to <A_i, X> = b_i,  X_k PSD,  x_lp >= 0.
struct Problem {
  std::vector<int> block_sizes;
  int lp_size = 0;
  std::vector<RMat> objective;  // one symmetric matrix per block
  RVec objective_lp;
  std::vector<Constraint> constraints;
};

enum class Status { optimal, infeasible, numerical_failure };

struct Options {
  double tolerance = 1e-9;
  int max_iterations = 100;
  double step_fraction = 0.95;
};

struct Solution {
  Status status = Status::numerical_failure;
  std::vector<RMat> x;
  RVec x_lp;
  RVec y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

/// Primal-dual path-following method with the HKM search direction and
/// Mehrotra predictor-corrector steps, started from an infeasible point.
Solution solve(const Problem& problem, const Options& options = {});

std::string to_string(Status s);

/// Real symmetric embedding [[Re H, -Im H], [Im H, Re H]] of a Hermitian matrix.
RMat real_embedding(const CMat& h);

/// Inverse of real_embedding for a general symmetric 2n x 2n matrix:
/// ((Y11 + Y22) + j (Y21 - Y12)) / 2. PSD-preserving.
CMat complex_from_embedding(const RMat& y);

}  // namespace irsdfrc::sdp
