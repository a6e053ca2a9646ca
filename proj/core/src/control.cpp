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

#include "coolopt/control.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "coolopt/error.hpp"
#include "coolopt/hermitian_basis.hpp"

namespace coolopt::control {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string describe(const ControlParams& params) {
  std::ostringstream out;
  out.precision(17);
  const auto& names = params.names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << (i ? ", " : "") << names[i] << "=" << params.values()[i];
  }
  return out.str();
}

}  // namespace

void ControlProblem::validate() const {
  const auto& names = schemes::parameter_names(scheme);
  if (space.internal_dim() != schemes::internal_dim(scheme)) {
    throw InvalidArgument("control problem: space has the wrong internal dimension for " +
                          schemes::to_string(scheme));
  }
  if (!(rho0.space() == space)) throw InvalidArgument("control problem: rho0 space mismatch");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("control problem: horizon must be finite and >= 0");
  }
  std::vector<int> seen(names.size(), 0);
  auto mark = [&](const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      throw InvalidArgument("control problem: unknown parameter '" + name + "'");
    }
    if (++seen[it - names.begin()] > 1) {
      throw InvalidArgument("control problem: parameter '" + name +
                            "' is listed more than once");
    }
  };
  for (const auto& name : free) mark(name);
  for (const auto& [name, value] : fixed) {
    mark(name);
    if (!std::isfinite(value)) {
      throw InvalidArgument("control problem: fixed '" + name + "' is not finite");
    }
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!seen[i]) {
      throw InvalidArgument("control problem: parameter '" + names[i] +
                            "' is neither free nor fixed");
    }
  }
  if (initial_guess.size() != static_cast<Eigen::Index>(free.size())) {
    throw InvalidArgument("control problem: initial guess has the wrong length");
  }
  if (!initial_guess.allFinite()) {
    throw InvalidArgument("control problem: initial guess is not finite");
  }
}

ControlParams ControlProblem::assemble(const RVec& x) const {
  if (x.size() != static_cast<Eigen::Index>(free.size())) {
    throw ShapeError("control problem: expected " + std::to_string(free.size()) +
                     " free values, got " + std::to_string(x.size()));
  }
  ControlParams params(scheme);
  for (const auto& [name, value] : fixed) params.set(name, value);
  for (std::size_t i = 0; i < free.size(); ++i) params.set(free[i], x[static_cast<Eigen::Index>(i)]);
  return params;
}

ControlParams ac_stark_start(SchemeId scheme, const PhysicalConstants& consts, double delta,
                             double ratio) {
  if (scheme != SchemeId::eit3 && scheme != SchemeId::eit4) {
    throw InvalidArgument("ac_stark_start: not an EIT scheme");
  }
  // (-delta + sqrt(Og^2 + Or^2 + delta^2)) / 2 = nu.
  const double sum_sq = 4.0 * consts.nu * (consts.nu + delta);
  if (!(sum_sq > 0.0) || !(ratio > 0.0)) {
    throw InvalidArgument("ac_stark_start: no resonance for this detuning or ratio");
  }
  const double omega_r = std::sqrt(sum_sq / (1.0 + ratio * ratio));
  ControlParams p(scheme);
  if (scheme == SchemeId::eit3) {
    p.set("delta", delta);
  } else {
    p.set("delta_g", delta);
    p.set("delta_r", delta);
  }
  p.set("omega_g", ratio * omega_r);
  p.set("omega_r", omega_r);
  return p;
}

ControlParams default_start(SchemeId scheme, const PhysicalConstants& consts) {
  switch (scheme) {
    case SchemeId::rwsc:
    case SchemeId::swsc:
      return ControlParams(scheme, {-consts.nu, 0.3 * consts.nu});
    case SchemeId::eit3:
    case SchemeId::eit4:
      return ac_stark_start(scheme, consts, 60.0 * consts.nu, 0.15);
  }
  throw InvalidArgument("default_start: unknown scheme");
}

ControlProblem make_problem(SchemeId scheme, const PhysicalConstants& consts,
                            const SpaceSpec& space, const DensityMatrix& rho0, double horizon) {
  const ControlParams start = default_start(scheme, consts);
  ControlProblem p{scheme, consts, space, rho0, horizon, start.names(), {}, {}};
  p.initial_guess = Eigen::Map<const RVec>(start.values().data(),
                                           static_cast<Eigen::Index>(start.values().size()));
  p.validate();
  return p;
}

RealFamily::RealFamily(SchemeId scheme, const PhysicalConstants& consts, const SpaceSpec& space,
                       const DensityMatrix& rho0)
    : scheme_(scheme) {
  if (!(rho0.space() == space)) throw InvalidArgument("RealFamily: rho0 space mismatch");
  const schemes::ParametricLindbladian family(scheme, consts, space);
  const liouville::HermitianBasis basis(space.dim());
  r0_ = basis.superoperator(family.fixed_part().matrix());
  r_.reserve(family.generators().size());
  for (const auto& g : family.generators()) r_.push_back(basis.superoperator(g.matrix()));
  x0_ = basis.coordinates(rho0.matrix());
  y_ = basis.coordinates(fock::phonon_number(space));
}

RMat RealFamily::at(const std::vector<double>& values) const {
  if (values.size() != r_.size()) throw ShapeError("RealFamily::at: wrong parameter count");
  RMat r = r0_;
  for (std::size_t j = 0; j < r_.size(); ++j) r += values[j] * r_[j];
  return r;
}

LossModel::LossModel(const ControlProblem& problem)
    : LossModel(problem, std::make_shared<const RealFamily>(problem.scheme, problem.consts,
                                                            problem.space, problem.rho0)) {}

LossModel::LossModel(const ControlProblem& problem, std::shared_ptr<const RealFamily> family)
    : problem_(problem), family_(std::move(family)) {
  problem_.validate();
  if (!family_ || family_->scheme() != problem_.scheme) {
    throw InvalidArgument("LossModel: family does not match the problem");
  }
  const ControlParams probe(problem_.scheme);
  for (const auto& name : problem_.free) free_index_.push_back(probe.index_of(name));
}

RMat LossModel::generator(const RVec& x) const {
  if (!x.allFinite()) throw InvalidArgument("loss: parameters must be finite");
  return problem_.horizon * family_->at(problem_.assemble(x).values());
}

void LossModel::rethrow(const RVec& x, const std::exception& e) const {
  throw NumericalError("propagation failed at " + describe(problem_.assemble(x)) +
                       ", T=" + std::to_string(problem_.horizon) + ": " + e.what());
}

double LossModel::loss(const RVec& x) const {
  const RMat a = generator(x);
  try {
    const RMat e = linalg::expm(a);
    return family_->observable().dot(e * family_->initial());
  } catch (const std::exception& ex) {
    rethrow(x, ex);
  }
}

double LossModel::grad(const RVec& x, RVec& gradient, GradientRoute route) const {
  const RMat a = generator(x);
  const RVec& x0 = family_->initial();
  const RVec& y = family_->observable();
  const auto& gens = family_->generators();
  const double t = problem_.horizon;
  gradient.resize(static_cast<Eigen::Index>(free_index_.size()));
  try {
    if (free_index_.empty()) return y.dot(linalg::expm(a) * x0);
    if (route == GradientRoute::adjoint) {
      const RMat at = a.transpose();
      const auto ef = linalg::expm_frechet_rank1<double>(at, y, x0);
      for (std::size_t i = 0; i < free_index_.size(); ++i) {
        gradient[static_cast<Eigen::Index>(i)] =
            t * ef.frechet.cwiseProduct(gens[free_index_[i]]).sum();
      }
      return x0.dot(ef.expm * y);
    }
    double value = 0.0;
    for (std::size_t i = 0; i < free_index_.size(); ++i) {
      const RMat direction = t * gens[free_index_[i]];
      const auto ef = linalg::expm_frechet<double>(a, direction);
      gradient[static_cast<Eigen::Index>(i)] = y.dot(ef.frechet * x0);
      value = y.dot(ef.expm * x0);
    }
    return value;
  } catch (const std::exception& ex) {
    rethrow(x, ex);
  }
}

double loss(const ControlProblem& problem, const RVec& x) { return LossModel(problem).loss(x); }

double grad(const ControlProblem& problem, const RVec& x, RVec& gradient) {
  return LossModel(problem).grad(x, gradient);
}

RVec default_scales(const ControlProblem& problem) {
  const bool eit = problem.scheme == SchemeId::eit3 || problem.scheme == SchemeId::eit4;
  RVec s(static_cast<Eigen::Index>(problem.free.size()));
  for (std::size_t i = 0; i < problem.free.size(); ++i) {
    s[static_cast<Eigen::Index>(i)] = eit && schemes::is_detuning(problem.free[i]) ? 10.0 : 1.0;
  }
  return s;
}

OptimResult minimize(const ControlProblem& problem, const MinimizeOptions& options) {
  return minimize(LossModel(problem), options);
}

OptimResult minimize(const LossModel& model, const MinimizeOptions& options) {
  const ControlProblem& problem = model.problem();
  const RVec scales = options.scales.size() ? options.scales : default_scales(problem);
  if (scales.size() != problem.initial_guess.size() || !(scales.array() > 0.0).all()) {
    throw InvalidArgument("minimize: scales must be positive, one per free parameter");
  }
  const lbfgs::Objective objective = [&](const RVec& z, RVec& gz) {
    const RVec x = z.cwiseProduct(scales);
    RVec g;
    const double f = model.grad(x, g);
    gz = g.cwiseProduct(scales);
    return f;
  };
  const RVec z0 = problem.initial_guess.cwiseQuotient(scales);
  lbfgs::Options lo = options.lbfgs;
  if (options.progress) {
    lo.observer = [&](int it, const RVec& z, const lbfgs::IterationRecord& rec) {
      options.progress(it, problem.assemble(z.cwiseProduct(scales)), rec.loss,
                       rec.gradient_norm);
    };
  }
  const lbfgs::Result r = lbfgs::minimize(objective, z0, lo);

  OptimResult out{problem.assemble(r.x.cwiseProduct(scales)),
                  r.x.cwiseProduct(scales),
                  r.f,
                  r.history.empty() ? r.f : r.history.front().loss,
                  r.gradient.cwiseQuotient(scales).lpNorm<Eigen::Infinity>(),
                  r.iterations,
                  r.evaluations,
                  false,
                  r.termination,
                  r.history,
                  scales};
  if (out.x_opt.size() == 0) out.gradient_norm = 0.0;
  out.converged = r.termination != lbfgs::Termination::non_finite &&
                  out.gradient_norm < options.lbfgs.gradient_tolerance;
  if (r.termination == lbfgs::Termination::non_finite) {
    throw NumericalError("minimize: loss is not finite at the initial guess " +
                         describe(out.params_opt));
  }
  return out;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(n);
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        body(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

MultistartResult multistart(const ControlProblem& problem, const std::vector<RVec>& starts,
                            const MinimizeOptions& options, int threads) {
  if (starts.empty()) throw InvalidArgument("multistart: at least one start is required");
  problem.validate();
  const auto family = std::make_shared<const RealFamily>(problem.scheme, problem.consts,
                                                         problem.space, problem.rho0);
  MultistartResult out;
  out.runs.resize(starts.size());
  out.errors.resize(starts.size());
  parallel_for(starts.size(), threads, [&](std::size_t i) {
    ControlProblem p = problem;
    p.initial_guess = starts[i];
    try {
      out.runs[i] = minimize(LossModel(p, family), options);
    } catch (const std::exception& e) {
      out.errors[i] = e.what();
    }
  });
  bool any = false;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (!out.runs[i]) continue;
    if (!any || out.runs[i]->loss_opt < out.runs[out.best]->loss_opt) out.best = i;
    any = true;
  }
  if (!any) throw NumericalError("multistart: every run failed; first error: " + out.errors[0]);
  return out;
}

std::vector<ScanRow> scan1d(const ControlProblem& problem, const std::string& scan_param,
                            const std::vector<double>& grid,
                            const std::vector<std::string>& inner_free,
                            const MinimizeOptions& options) {
  problem.validate();
  if (std::find(inner_free.begin(), inner_free.end(), scan_param) != inner_free.end()) {
    throw InvalidArgument("scan1d: scan parameter '" + scan_param + "' is also inner-free");
  }
  // Base values of every parameter: fixed entries and the initial guess.
  ControlParams base = problem.assemble(problem.initial_guess);
  (void)base.index_of(scan_param);

  ControlProblem p = problem;
  p.free = inner_free;
  p.fixed.clear();
  const auto& names = schemes::parameter_names(problem.scheme);
  for (const auto& name : names) {
    if (std::find(inner_free.begin(), inner_free.end(), name) == inner_free.end()) {
      p.fixed[name] = base.get(name);
    }
  }
  p.initial_guess.resize(static_cast<Eigen::Index>(inner_free.size()));
  for (std::size_t i = 0; i < inner_free.size(); ++i) {
    p.initial_guess[static_cast<Eigen::Index>(i)] = base.get(inner_free[i]);
  }
  const auto family =
      std::make_shared<const RealFamily>(p.scheme, p.consts, p.space, p.rho0);

  MinimizeOptions opts = options;
  std::vector<ScanRow> rows;
  rows.reserve(grid.size());
  RVec warm = p.initial_guess;
  for (double v : grid) {
    ScanRow row;
    row.value = v;
    p.fixed[scan_param] = v;
    p.initial_guess = warm;
    try {
      const OptimResult r = minimize(LossModel(p, family), opts);
      row.inner = r.x_opt;
      row.nbar = r.loss_opt;
      row.converged = r.converged;
      warm = r.x_opt;
    } catch (const std::exception& e) {
      row.inner = RVec::Constant(warm.size(), kNaN);
      row.nbar = kNaN;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<GridCell> scan2d(const ControlProblem& problem, const std::string& p1,
                             const std::vector<double>& grid1, const std::string& p2,
                             const std::vector<double>& grid2, int threads) {
  problem.validate();
  if (p1 == p2) throw InvalidArgument("scan2d: the two scan parameters must differ");
  const ControlParams base = problem.assemble(problem.initial_guess);
  (void)base.index_of(p1);
  (void)base.index_of(p2);
  const auto family = std::make_shared<const RealFamily>(problem.scheme, problem.consts,
                                                         problem.space, problem.rho0);
  std::vector<GridCell> cells(grid1.size() * grid2.size());
  parallel_for(cells.size(), threads, [&](std::size_t k) {
    GridCell& c = cells[k];
    c.v1 = grid1[k / grid2.size()];
    c.v2 = grid2[k % grid2.size()];
    ControlParams params = base;
    params.set(p1, c.v1);
    params.set(p2, c.v2);
    try {
      const RMat a = problem.horizon * family->at(params.values());
      c.nbar = family->observable().dot(linalg::expm(a) * family->initial());
    } catch (const std::exception& e) {
      c.nbar = kNaN;
      c.error = "at " + describe(params) + ": " + e.what();
    }
  });
  return cells;
}

}  // namespace coolopt::control
