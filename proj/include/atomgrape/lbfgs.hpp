#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace atomgrape {

// Limited-memory BFGS minimizer with a strong-Wolfe line search.
struct LbfgsOptions {
  std::size_t memory = 10;
  std::size_t max_iterations = 200;
  double gradient_tolerance = 1e-6;  // on the infinity norm
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  std::size_t max_line_search_evaluations = 40;
};

enum class LbfgsStatus { Converged, MaxIterations, LineSearchFailure };

struct LbfgsReport {
  LbfgsStatus status = LbfgsStatus::MaxIterations;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  double value = 0.0;
  double gradient_norm = 0.0;
};

// Returns f(x) and writes the gradient into `grad`.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;
// Called with the iteration number and value after every accepted step.
using IterationCallback = std::function<void(std::size_t iteration, double value,
                                             std::span<const double> x)>;

// Minimizes `f` starting from `x` (updated in place). Throws NumericalError
// when f or its gradient becomes non-finite.
LbfgsReport minimize_lbfgs(const Objective& f, std::vector<double>& x, const LbfgsOptions& options,
                           const IterationCallback& on_iteration = {});

}  // namespace atomgrape
