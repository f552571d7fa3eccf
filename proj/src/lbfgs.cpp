#include "atomgrape/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "atomgrape/errors.hpp"

namespace atomgrape {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct TrialPoint {
  double alpha = 0.0;
  double value = 0.0;
  double slope = 0.0;  // directional derivative along the search direction
  std::vector<double> x;
  std::vector<double> grad;
};

class LineSearch {
 public:
  LineSearch(const Objective& f, const LbfgsOptions& opt, const std::vector<double>& x0,
             const std::vector<double>& direction, double f0, double slope0)
      : f_(f), opt_(opt), x0_(x0), d_(direction), f0_(f0), slope0_(slope0) {}

  // Returns true with `accepted` filled on success.
  bool run(double alpha_init, TrialPoint& accepted) {
    TrialPoint prev{0.0, f0_, slope0_, {}, {}};
    double alpha = alpha_init;
    for (std::size_t i = 0; i < opt_.max_line_search_evaluations; ++i) {
      TrialPoint cur = evaluate(alpha);
      if (cur.value > f0_ + opt_.wolfe_c1 * alpha * slope0_ || (i > 0 && cur.value >= prev.value)) {
        return zoom(std::move(prev), std::move(cur), accepted);
      }
      if (std::abs(cur.slope) <= -opt_.wolfe_c2 * slope0_) {
        accepted = std::move(cur);
        return true;
      }
      if (cur.slope >= 0.0) return zoom(std::move(cur), std::move(prev), accepted);
      prev = std::move(cur);
      alpha *= 2.0;
    }
    return fallback(prev, accepted);
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  TrialPoint evaluate(double alpha) {
    TrialPoint p;
    p.alpha = alpha;
    p.x.resize(x0_.size());
    for (std::size_t i = 0; i < x0_.size(); ++i) p.x[i] = x0_[i] + alpha * d_[i];
    p.grad.assign(x0_.size(), 0.0);
    p.value = f_(p.x, p.grad);
    ++evaluations_;
    if (!std::isfinite(p.value)) throw NumericalError("objective is not finite during line search");
    for (double g : p.grad) {
      if (!std::isfinite(g)) throw NumericalError("gradient is not finite during line search");
    }
    p.slope = dot(p.grad, d_);
    return p;
  }

  static double cubic_minimizer(const TrialPoint& a, const TrialPoint& b) {
    const double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.alpha - b.alpha);
    const double disc = d1 * d1 - a.slope * b.slope;
    if (!(disc >= 0.0)) return std::nan("");
    const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
    return b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / (b.slope - a.slope + 2.0 * d2);
  }

  // lo always satisfies sufficient decrease and has the lower value.
  bool zoom(TrialPoint lo, TrialPoint hi, TrialPoint& accepted) {
    for (std::size_t i = 0; i < opt_.max_line_search_evaluations; ++i) {
      const double left = std::min(lo.alpha, hi.alpha);
      const double right = std::max(lo.alpha, hi.alpha);
      const double width = right - left;
      if (width <= 1e-16 * std::max(1.0, right)) break;
      double alpha = cubic_minimizer(lo, hi);
      if (!std::isfinite(alpha) || alpha < left + 0.1 * width || alpha > right - 0.1 * width) {
        alpha = 0.5 * (left + right);
      }
      TrialPoint cur = evaluate(alpha);
      if (cur.value > f0_ + opt_.wolfe_c1 * alpha * slope0_ || cur.value >= lo.value) {
        hi = std::move(cur);
      } else {
        if (std::abs(cur.slope) <= -opt_.wolfe_c2 * slope0_) {
          accepted = std::move(cur);
          return true;
        }
        if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = std::move(lo);
        lo = std::move(cur);
      }
    }
    return fallback(lo, accepted);
  }

  // Accept a point with sufficient decrease even if the curvature condition
  // was not reached within the evaluation budget.
  bool fallback(const TrialPoint& best, TrialPoint& accepted) {
    if (best.alpha > 0.0 && best.value < f0_ && !best.x.empty()) {
      accepted = best;
      return true;
    }
    return false;
  }

  const Objective& f_;
  const LbfgsOptions& opt_;
  const std::vector<double>& x0_;
  const std::vector<double>& d_;
  double f0_;
  double slope0_;
  std::size_t evaluations_ = 0;
};

}  // namespace

LbfgsReport minimize_lbfgs(const Objective& f, std::vector<double>& x, const LbfgsOptions& options,
                           const IterationCallback& on_iteration) {
  LbfgsReport report;
  std::vector<double> grad(x.size(), 0.0);
  double value = f(x, grad);
  report.evaluations = 1;
  if (!std::isfinite(value)) throw NumericalError("objective is not finite at the starting point");
  for (double g : grad) {
    if (!std::isfinite(g)) throw NumericalError("gradient is not finite at the starting point");
  }
  report.value = value;
  report.gradient_norm = norm_inf(grad);
  if (report.gradient_norm < options.gradient_tolerance) {
    report.status = LbfgsStatus::Converged;
    return report;
  }

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> history;
  std::vector<double> direction(x.size());
  std::vector<double> alpha_buf;

  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    // two-loop recursion: direction = -H grad
    std::vector<double> q = grad;
    alpha_buf.assign(history.size(), 0.0);
    for (std::size_t i = history.size(); i-- > 0;) {
      alpha_buf[i] = history[i].rho * dot(history[i].s, q);
      for (std::size_t j = 0; j < q.size(); ++j) q[j] -= alpha_buf[i] * history[i].y[j];
    }
    double gamma;
    if (history.empty()) {
      gamma = 1.0 / std::sqrt(dot(grad, grad));
    } else {
      const auto& last = history.back();
      gamma = dot(last.s, last.y) / dot(last.y, last.y);
    }
    for (double& v : q) v *= gamma;
    for (std::size_t i = 0; i < history.size(); ++i) {
      const double beta = history[i].rho * dot(history[i].y, q);
      for (std::size_t j = 0; j < q.size(); ++j) q[j] += (alpha_buf[i] - beta) * history[i].s[j];
    }
    for (std::size_t j = 0; j < q.size(); ++j) direction[j] = -q[j];

    double slope = dot(grad, direction);
    if (!(slope < 0.0)) {
      history.clear();
      const double inv = 1.0 / std::sqrt(dot(grad, grad));
      for (std::size_t j = 0; j < q.size(); ++j) direction[j] = -grad[j] * inv;
      slope = dot(grad, direction);
    }

    LineSearch search(f, options, x, direction, value, slope);
    TrialPoint accepted;
    const bool ok = search.run(1.0, accepted);
    report.evaluations += search.evaluations();
    if (!ok) {
      report.status = LbfgsStatus::LineSearchFailure;
      return report;
    }

    Pair pair;
    pair.s.resize(x.size());
    pair.y.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      pair.s[j] = accepted.x[j] - x[j];
      pair.y[j] = accepted.grad[j] - grad[j];
    }
    const double sy = dot(pair.s, pair.y);
    if (sy > 1e-300) {
      pair.rho = 1.0 / sy;
      history.push_back(std::move(pair));
      if (history.size() > options.memory) history.pop_front();
    }

    x = std::move(accepted.x);
    grad = std::move(accepted.grad);
    value = accepted.value;
    report.iterations = iter;
    report.value = value;
    report.gradient_norm = norm_inf(grad);
    if (on_iteration) on_iteration(iter, value, x);
    if (report.gradient_norm < options.gradient_tolerance) {
      report.status = LbfgsStatus::Converged;
      return report;
    }
  }
  report.status = LbfgsStatus::MaxIterations;
  return report;
}

}  // namespace atomgrape
