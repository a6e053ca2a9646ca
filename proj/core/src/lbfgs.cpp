// Copyright 2026 The coolopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coolopt/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

namespace coolopt::lbfgs {
namespace {

struct Point {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;  // directional derivative g . d
  RVec x;
  RVec g;
};

class LineSearch {
 public:
  LineSearch(const Objective& objective, const Options& options, const RVec& x0,
             double f0, const RVec& g0, const RVec& direction, int& evaluations)
      : objective_(objective),
        options_(options),
        x0_(x0),
        direction_(direction),
        evaluations_(evaluations) {
    start_.alpha = 0.0;
    start_.f = f0;
    start_.slope = g0.dot(direction);
    start_.x = x0;
    start_.g = g0;
  }

  // A point satisfying the strong Wolfe conditions, or, failing that, the
  // lowest point found if it still decreases f sufficiently.
  std::optional<Point> run(double alpha0) {
    Point prev = start_;
    double alpha = std::min(alpha0, options_.max_step);
    for (int i = 0; budget_left(); ++i) {
      Point cur = evaluate(alpha);
      if (!std::isfinite(cur.f) || armijo_violated(cur) || (i > 0 && cur.f >= prev.f)) {
        return zoom(prev, cur);
      }
      if (curvature_ok(cur)) return cur;
      if (cur.slope >= 0.0) return zoom(cur, prev);
      prev = cur;
      if (alpha >= options_.max_step) break;
      alpha = std::min(2.0 * alpha, options_.max_step);
    }
    return fallback();
  }

  // True when the search stopped because f could not resolve the bracket.
  bool unresolved() const { return unresolved_; }

 private:
  bool budget_left() const { return used_ < options_.max_line_search_evaluations; }

  bool armijo_violated(const Point& p) const {
    return p.f > start_.f + options_.c1 * p.alpha * start_.slope;
  }

  bool curvature_ok(const Point& p) const {
    return std::abs(p.slope) <= -options_.c2 * start_.slope;
  }

  Point evaluate(double alpha) {
    Point p;
    p.alpha = alpha;
    p.x = x0_ + alpha * direction_;
    p.g.resize(p.x.size());
    p.f = objective_(p.x, p.g);
    p.slope = p.g.dot(direction_);
    ++used_;
    ++evaluations_;
    if (std::isfinite(p.f) && p.g.allFinite() && !armijo_violated(p) &&
        (!best_ || p.f < best_->f)) {
      best_ = p;
    }
    return p;
  }

  static double cubic_minimizer(const Point& a, const Point& b) {
    const double d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
    const double disc = d1 * d1 - a.slope * b.slope;
    if (!(disc >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
    return b.alpha -
           (b.alpha - a.alpha) * (b.slope + d2 - d1) / (b.slope - a.slope + 2.0 * d2);
  }

  std::optional<Point> zoom(Point lo, Point hi) {
    while (budget_left()) {
      const double left = std::min(lo.alpha, hi.alpha);
      const double right = std::max(lo.alpha, hi.alpha);
      const double width = right - left;
      if (width <= 1e-16 * std::max(1.0, right)) break;
      // Near a minimum the Armijo test compares roundoff; stop before the
      // whole budget goes to bisecting noise.
      if (width * std::abs(start_.slope) <=
          options_.noise_floor * std::max(std::abs(start_.f), 1e-300)) {
        unresolved_ = true;
        break;
      }
      double alpha = std::isfinite(hi.f) ? cubic_minimizer(lo, hi)
                                         : std::numeric_limits<double>::quiet_NaN();
      const double margin = 0.1 * width;
      if (!std::isfinite(alpha) || alpha < left + margin || alpha > right - margin) {
        alpha = 0.5 * (left + right);
      }
      Point cur = evaluate(alpha);
      if (!std::isfinite(cur.f) || armijo_violated(cur) || cur.f >= lo.f) {
        hi = cur;
      } else {
        if (curvature_ok(cur)) return cur;
        if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = cur;
      }
    }
    return fallback();
  }

  std::optional<Point> fallback() const {
    if (best_ && best_->f < start_.f) return best_;
    return std::nullopt;
  }

  const Objective& objective_;
  const Options& options_;
  const RVec& x0_;
  const RVec& direction_;
  int& evaluations_;
  Point start_;
  std::optional<Point> best_;
  int used_ = 0;
  bool unresolved_ = false;
};

struct Memory {
  explicit Memory(int capacity) : capacity(capacity) {}

  void push(RVec s, RVec y) {
    const double sy = s.dot(y);
    if (!(sy > 1e-300) || !std::isfinite(sy)) return;  // keep H positive definite
    if (static_cast<int>(pairs.size()) == capacity) pairs.pop_front();
    pairs.push_back({std::move(s), std::move(y), 1.0 / sy});
  }

  // -H g by the two-loop recursion with H0 = (s.y / y.y) I.
  RVec direction(const RVec& g) const {
    RVec q = g;
    std::vector<double> a(pairs.size());
    for (std::size_t k = pairs.size(); k-- > 0;) {
      a[k] = pairs[k].rho * pairs[k].s.dot(q);
      q -= a[k] * pairs[k].y;
    }
    if (!pairs.empty()) {
      const auto& last = pairs.back();
      q *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const double b = pairs[k].rho * pairs[k].y.dot(q);
      q += (a[k] - b) * pairs[k].s;
    }
    return -q;
  }

  struct Pair {
    RVec s;
    RVec y;
    double rho;
  };
  int capacity;
  std::deque<Pair> pairs;
};

}  // namespace

std::string to_string(Termination t) {
  switch (t) {
    case Termination::gradient: return "gradient";
    case Termination::stalled: return "stalled";
    case Termination::max_iterations: return "max_iterations";
    case Termination::line_search_failure: return "line_search_failure";
    case Termination::non_finite: return "non_finite";
  }
  return "unknown";
}

Result minimize(const Objective& objective, RVec x0, const Options& options) {
  Result res;
  res.x = std::move(x0);
  res.gradient.resize(res.x.size());
  res.f = objective(res.x, res.gradient);
  res.evaluations = 1;
  if (!std::isfinite(res.f) || !res.gradient.allFinite()) {
    res.termination = Termination::non_finite;
    return res;
  }
  res.history.push_back({res.f, res.gradient.lpNorm<Eigen::Infinity>()});
  if (options.observer) options.observer(0, res.x, res.history.back());

  Memory memory(options.history);
  int stall = 0;
  res.termination = Termination::max_iterations;
  for (res.iterations = 0; res.iterations < options.max_iterations;) {
    if (res.gradient.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
      res.termination = Termination::gradient;
      break;
    }
    RVec d = memory.direction(res.gradient);
    if (!(d.dot(res.gradient) < 0.0)) {
      memory.pairs.clear();
      d = -res.gradient;
    }
    const double alpha0 =
        memory.pairs.empty() ? std::min(1.0, 1.0 / std::max(d.norm(), 1e-300)) : 1.0;

    std::optional<Point> step;
    bool unresolved = false;
    {
      LineSearch search(objective, options, res.x, res.f, res.gradient, d, res.evaluations);
      step = search.run(alpha0);
      unresolved = search.unresolved();
    }
    if (!step && unresolved) {
      res.termination = Termination::stalled;
      break;
    }
    if (!step && !memory.pairs.empty()) {
      // Retry once along steepest descent with a fresh Hessian model.
      memory.pairs.clear();
      d = -res.gradient;
      LineSearch search(objective, options, res.x, res.f, res.gradient, d, res.evaluations);
      step = search.run(std::min(1.0, 1.0 / std::max(d.norm(), 1e-300)));
    }
    if (!step) {
      res.termination = Termination::line_search_failure;
      break;
    }

    const double f_old = res.f;
    memory.push(step->x - res.x, step->g - res.gradient);
    res.x = std::move(step->x);
    res.gradient = std::move(step->g);
    res.f = step->f;
    ++res.iterations;
    res.history.push_back({res.f, res.gradient.lpNorm<Eigen::Infinity>()});
    if (options.observer) options.observer(res.iterations, res.x, res.history.back());

    const double rel = (f_old - res.f) / std::max(std::abs(res.f), 1e-300);
    stall = rel < options.relative_decrease_tolerance ? stall + 1 : 0;
    if (stall >= options.stall_iterations) {
      res.termination = Termination::stalled;
      break;
    }
  }
  if (res.termination == Termination::max_iterations &&
      res.gradient.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
    res.termination = Termination::gradient;
  }
  return res;
}

}  // namespace coolopt::lbfgs
