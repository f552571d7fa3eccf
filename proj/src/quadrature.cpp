#include "atomgrape/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "atomgrape/errors.hpp"

namespace atomgrape {

namespace {

constexpr double kPiMinusQuarter = 0.7511255444649425;  // pi^(-1/4)

// Ratio p_n(x) / p_{n-1}(x) of orthonormal Hermite polynomials, and
// log(sum_{k<n} p_k(x)^2). Ratios keep the recurrence finite for large x.
struct HermiteEval {
  double ratio = 0.0;
  double log_christoffel = 0.0;
};

HermiteEval evaluate(double x, std::size_t n) {
  // q_k = p_k / p_0, rescaled to stay in range; scale tracks the log factor.
  double q_prev = 0.0;
  double q = 1.0;
  double sum = 1.0;
  double log_scale = 0.0;
  HermiteEval out;
  for (std::size_t k = 1; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double next = x * std::sqrt(2.0 / kd) * q - std::sqrt((kd - 1.0) / kd) * q_prev;
    if (k == n) {
      out.ratio = next / q;
      break;
    }
    q_prev = q;
    q = next;
    sum += q * q;
    if (std::abs(q) > 1e100) {
      q *= 1e-100;
      q_prev *= 1e-100;
      sum *= 1e-200;
      log_scale += 200.0 * std::log(10.0);
    }
  }
  out.log_christoffel = std::log(sum) + log_scale + 2.0 * std::log(kPiMinusQuarter);
  return out;
}

}  // namespace

// Golub-Welsch nodes (eigenvalues of the Jacobi matrix), Newton polish, and
// weights from the Christoffel function.
QuadratureRule gauss_hermite(std::size_t order) {
  if (order == 0) throw ValidationError("gauss_hermite: order must be positive");
  const std::size_t n = order;
  QuadratureRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {std::sqrt(std::acos(-1.0))};
    return rule;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
  for (std::size_t k = 1; k < n; ++k) sub[static_cast<Eigen::Index>(k - 1)] = std::sqrt(0.5 * static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("gauss_hermite: eigenvalue solver failed");

  std::vector<double> x(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(x.begin(), x.end());
  const double sqrt2n = std::sqrt(2.0 * static_cast<double>(n));
  for (double& z : x) {
    // p_n' = sqrt(2n) p_{n-1}
    for (int iter = 0; iter < 3; ++iter) {
      const double r = evaluate(z, n).ratio;
      if (!std::isfinite(r)) break;
      z -= r / sqrt2n;
    }
  }
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // enforce exact symmetry about zero
    const double z = 0.5 * (x[i] - x[n - 1 - i]);
    rule.nodes[i] = (n % 2 == 1 && i == n / 2) ? 0.0 : z;
  }
  for (std::size_t i = 0; i < n; ++i) {
    rule.weights[i] = std::exp(-evaluate(rule.nodes[i], n).log_christoffel);
  }
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace atomgrape
