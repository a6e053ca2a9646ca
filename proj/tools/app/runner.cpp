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


#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "coolopt/control.hpp"
#include "coolopt/dynamics.hpp"
#include "coolopt/error.hpp"
#include "coolopt/liouville.hpp"
#include "coolopt/version.hpp"

namespace coolopt::app {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using control::ControlProblem;
using control::MinimizeOptions;
using control::OptimResult;
using linalg::RVec;
using schemes::ControlParams;
using schemes::PhysicalConstants;
using schemes::SchemeId;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    out_.flush();
  }

  void fail(const std::string& message) {
    std::string one_line = message;
    for (char& ch : one_line) {
      if (ch == '\n') ch = ' ';
    }
    out_ << "# FAILED: " << one_line << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

std::string pattern_name(schemes::DipolePattern p) {
  return p == schemes::DipolePattern::parallel ? "parallel" : "perpendicular";
}

json constants_json(const PhysicalConstants& k) {
  return {{"nu", k.nu},
          {"eta", k.eta},
          {"gamma", k.gamma},
          {"eta_g", k.eta_g},
          {"eta_r", k.eta_r},
          {"recoil_eta_g", k.recoil_eta_g},
          {"recoil_eta_r", k.recoil_eta_r},
          {"pattern_g", pattern_name(k.pattern_g)},
          {"pattern_r", pattern_name(k.pattern_r)},
          {"gamma_g", k.gamma_g},
          {"gamma_r", k.gamma_r},
          {"t_offset", k.t_offset}};
}

json params_json(const ControlParams& p) {
  json out = json::object();
  for (std::size_t i = 0; i < p.names().size(); ++i) out[p.names()[i]] = p.values()[i];
  return out;
}

json optim_json(const OptimResult& r) {
  return {{"params", params_json(r.params_opt)},
          {"loss", r.loss_opt},
          {"initial_loss", r.initial_loss},
          {"gradient_norm", r.gradient_norm},
          {"iterations", r.iterations},
          {"evaluations", r.evaluations},
          {"converged", r.converged},
          {"termination", lbfgs::to_string(r.termination)}};
}

json fit_json(const dynamics::RateFit& f) {
  return {{"W", f.rate},           {"nbar_inf", f.nbar_inf},   {"amplitude", f.amplitude},
          {"residual", f.residual}, {"points", f.points},       {"window_start", f.window_start},
          {"converged", f.converged}, {"decaying", f.decaying}};
}

// Everything a run depends on, after defaults and unit conversion.
json resolved_json(const ExperimentConfig& c, int threads) {
  json r = {{"scheme", schemes::to_string(c.scheme)},
            {"units", c.units},
            {"constants", constants_json(c.consts)},
            {"space", {{"internal_dim", schemes::internal_dim(c.scheme)}, {"fock_dim", c.fock_dim}}},
            {"initial_state", {{"nbar0", c.nbar0}, {"internal_level", c.initial_level}}},
            {"mode", to_string(c.mode)},
            {"horizons", c.horizons},
            {"params", params_json(resolved_params(c))},
            {"free", c.free},
            {"threads", threads}};
  if (c.units == "mhz") r["nu_mhz"] = c.nu_mhz;
  const auto& o = c.optimize;
  r["optimizer"] = {{"gradient_tolerance", o.lbfgs.gradient_tolerance},
                    {"max_iterations", o.lbfgs.max_iterations},
                    {"history", o.lbfgs.history}};
  switch (c.mode) {
    case Mode::optimize:
      r["optimize"] = {{"starts", o.starts}, {"rate_time", o.rate_time},
                       {"fit_window", o.fit_window}, {"samples", o.samples}};
      break;
    case Mode::scan1d:
      r["scan1d"] = {{"param", c.scan1d.grid.param}, {"grid", c.scan1d.grid.values},
                     {"inner", c.scan1d.inner}};
      break;
    case Mode::scan2d:
      r["scan2d"] = {{"param1", c.scan2d.first.param}, {"grid1", c.scan2d.first.values},
                     {"param2", c.scan2d.second.param}, {"grid2", c.scan2d.second.values}};
      break;
    case Mode::evolve:
      r["evolve"] = {{"t_final", c.evolve.t_final}, {"samples", c.evolve.samples},
                     {"fit_window", c.evolve.fit_window}};
      break;
    case Mode::steady:
      break;
    case Mode::gradcheck:
      r["gradcheck"] = {{"points", c.gradcheck.points}, {"seed", c.gradcheck.seed},
                        {"spread", c.gradcheck.spread}, {"tolerance", c.gradcheck.tolerance}};
      break;
    case Mode::table1:
      r["table1"] = {{"horizons", c.table1.horizons}, {"eval_time", c.table1.eval_time},
                     {"samples", c.table1.samples}, {"fit_window", c.table1.fit_window},
                     {"eit3_row", c.table1.eit3_row}};
      break;
  }
  return r;
}

fock::SpaceSpec space_for(const ExperimentConfig& c, SchemeId scheme) {
  return fock::SpaceSpec(schemes::internal_dim(scheme), c.fock_dim);
}

fock::DensityMatrix initial_state(const ExperimentConfig& c, const fock::SpaceSpec& space) {
  return fock::thermal_state(c.nbar0, space, c.initial_level);
}

// Problem with `free` optimised from the values in `base` and every other
// parameter pinned to `base`.
ControlProblem make_problem(const ExperimentConfig& c, SchemeId scheme,
                            const PhysicalConstants& consts, double horizon,
                            const ControlParams& base, const std::vector<std::string>& free) {
  const auto space = space_for(c, scheme);
  ControlProblem p = control::make_problem(scheme, consts, space, initial_state(c, space), horizon);
  p.free = free;
  p.fixed.clear();
  p.initial_guess.resize(static_cast<Eigen::Index>(free.size()));
  for (const auto& name : base.names()) {
    const auto it = std::find(free.begin(), free.end(), name);
    if (it == free.end()) {
      p.fixed[name] = base.get(name);
    } else {
      p.initial_guess[it - free.begin()] = base.get(name);
    }
  }
  p.validate();
  return p;
}

MinimizeOptions minimize_options(const ExperimentConfig& c) {
  MinimizeOptions o;
  o.lbfgs = c.optimize.lbfgs;
  return o;
}

// Same options, logging every iteration; for long single optimisations.
MinimizeOptions verbose_options(const ExperimentConfig& c, std::ostream& log) {
  MinimizeOptions o = minimize_options(c);
  o.progress = [&log](int it, const ControlParams& p, double loss, double gnorm) {
    log << "  iter " << it << ": loss " << format_number(loss) << ", |g| "
        << format_number(gnorm) << ", " << params_json(p).dump() << std::endl;
  };
  return o;
}

std::vector<std::string> with_horizon(bool multi, std::vector<std::string> cells, double t) {
  if (multi) cells.insert(cells.begin(), format_number(t));
  return cells;
}

class Runner {
 public:
  Runner(const ExperimentConfig& c, int threads, std::ostream& log)
      : c_(c), threads_(threads), log_(log) {}

  json results = json::object();
  json timings = json::object();
  std::vector<std::string> extra_outputs;
  bool point_failures = false;
  std::string point_failure_message;

  void execute(const fs::path& csv_path) {
    switch (c_.mode) {
      case Mode::optimize: return optimize(csv_path);
      case Mode::scan1d: return scan1d(csv_path);
      case Mode::scan2d: return scan2d(csv_path);
      case Mode::evolve: return evolve(csv_path);
      case Mode::steady: return steady(csv_path);
      case Mode::gradcheck: return gradcheck(csv_path);
      case Mode::table1: return table1(csv_path);
    }
  }

  Csv* csv() { return csv_.get(); }

 private:
  void open(const fs::path& path, const std::vector<std::string>& header) {
    csv_ = std::make_unique<Csv>(path, header);
  }

  void flag_point_failure(const std::string& what) {
    if (!point_failures) point_failure_message = what;
    point_failures = true;
  }

  void optimize(const fs::path& path) {
    const bool multi = c_.horizons.size() > 1;
    const auto& names = schemes::parameter_names(c_.scheme);
    const bool with_rate = c_.optimize.rate_time > 0.0;
    std::vector<std::string> header(names.begin(), names.end());
    for (const char* h : {"nbar_T", "grad_norm", "iters", "converged"}) header.emplace_back(h);
    if (with_rate) header.emplace_back("W");
    if (multi) header.insert(header.begin(), "T");
    open(path, header);

    const ControlParams base = resolved_params(c_);
    results["runs"] = json::array();
    for (double t : c_.horizons) {
      const auto start = Clock::now();
      const ControlProblem p = make_problem(c_, c_.scheme, c_.consts, t, base, c_.free);
      std::vector<RVec> starts;
      for (const auto& s : c_.optimize.starts) {
        starts.push_back(Eigen::Map<const RVec>(s.data(), static_cast<Eigen::Index>(s.size())));
      }
      if (starts.empty()) starts.push_back(p.initial_guess);
      log_ << "optimize: T = " << t << ", " << starts.size() << " start(s)\n";
      const auto ms = control::multistart(
          p, starts, starts.size() == 1 ? verbose_options(c_, log_) : minimize_options(c_), threads_);
      const OptimResult& best = ms.best_result();
      json entry = {{"T", t}, {"best", ms.best}, {"starts", json::array()}};
      for (std::size_t i = 0; i < ms.runs.size(); ++i) {
        entry["starts"].push_back(ms.runs[i] ? optim_json(*ms.runs[i])
                                             : json{{"error", ms.errors[i]}});
      }
      std::vector<std::string> row;
      for (double v : best.params_opt.values()) row.push_back(format_number(v));
      row.push_back(format_number(best.loss_opt));
      row.push_back(format_number(best.gradient_norm));
      row.push_back(std::to_string(best.iterations));
      row.push_back(best.converged ? "1" : "0");
      if (with_rate) {
        const auto l = schemes::build(c_.scheme, c_.consts, best.params_opt, p.space);
        const auto traj = dynamics::trajectory(l, p.rho0, c_.optimize.rate_time,
                                               c_.optimize.samples);
        dynamics::FitOptions fo;
        fo.window_start = c_.optimize.fit_window;
        const auto fit = dynamics::fit_rate(traj, fo);
        entry["fit"] = fit_json(fit);
        row.push_back(format_number(fit.rate));
      }
      csv_->row(with_horizon(multi, row, t));
      timings["T=" + format_number(t)] = seconds_since(start);
      log_ << "  nbar_T = " << format_number(best.loss_opt) << " at "
           << params_json(best.params_opt).dump() << " (" << lbfgs::to_string(best.termination)
           << ")\n";
      results["runs"].push_back(std::move(entry));
    }
  }

  void scan1d(const fs::path& path) {
    const bool multi = c_.horizons.size() > 1;
    const auto& s = c_.scan1d;
    std::vector<std::string> header{s.grid.param};
    for (const auto& n : s.inner) header.push_back(n + "_opt");
    header.emplace_back("nbar_T");
    header.emplace_back("converged");
    if (multi) header.insert(header.begin(), "T");
    open(path, header);

    const ControlParams base = resolved_params(c_);
    std::vector<std::vector<control::ScanRow>> per_horizon(c_.horizons.size());
    std::vector<double> seconds(c_.horizons.size());
    // Horizons are independent; each scan is warm-started internally, so
    // the rows only depend on the grid order.
    control::parallel_for(c_.horizons.size(), threads_, [&](std::size_t k) {
      const auto start = Clock::now();
      const ControlProblem p = make_problem(c_, c_.scheme, c_.consts, c_.horizons[k], base,
                                            c_.free);
      per_horizon[k] = control::scan1d(p, s.grid.param, s.grid.values, s.inner,
                                       minimize_options(c_));
      seconds[k] = seconds_since(start);
    });
    results["failures"] = json::array();
    for (std::size_t k = 0; k < c_.horizons.size(); ++k) {
      for (const auto& r : per_horizon[k]) {
        std::vector<std::string> row{format_number(r.value)};
        for (Eigen::Index i = 0; i < r.inner.size(); ++i) row.push_back(format_number(r.inner[i]));
        row.push_back(format_number(r.nbar));
        row.push_back(r.converged ? "1" : "0");
        csv_->row(with_horizon(multi, row, c_.horizons[k]));
        if (!r.error.empty()) {
          results["failures"].push_back({{"T", c_.horizons[k]}, {"value", r.value}, {"error", r.error}});
          flag_point_failure(r.error);
        }
      }
      timings["T=" + format_number(c_.horizons[k])] = seconds[k];
    }
  }

  void scan2d(const fs::path& path) {
    const bool multi = c_.horizons.size() > 1;
    const auto& s = c_.scan2d;
    std::vector<std::string> header{s.first.param, s.second.param, "nbar_T"};
    if (multi) header.insert(header.begin(), "T");
    open(path, header);
    const ControlParams base = resolved_params(c_);
    results["failures"] = json::array();
    for (double t : c_.horizons) {
      const auto start = Clock::now();
      const ControlProblem p = make_problem(c_, c_.scheme, c_.consts, t, base, c_.free);
      const auto cells = control::scan2d(p, s.first.param, s.first.values, s.second.param,
                                         s.second.values, threads_);
      for (const auto& cell : cells) {
        csv_->row(with_horizon(
            multi, {format_number(cell.v1), format_number(cell.v2), format_number(cell.nbar)}, t));
        if (!cell.error.empty()) {
          results["failures"].push_back({{"T", t}, {"v1", cell.v1}, {"v2", cell.v2},
                                         {"error", cell.error}});
          flag_point_failure(cell.error);
        }
      }
      timings["T=" + format_number(t)] = seconds_since(start);
    }
  }

  void evolve(const fs::path& path) {
    open(path, {"t", "nbar"});
    const auto params = resolved_params(c_);
    const auto space = space_for(c_, c_.scheme);
    const auto l = schemes::build(c_.scheme, c_.consts, params, space);
    const auto traj = dynamics::trajectory(l, initial_state(c_, space), c_.evolve.t_final,
                                           c_.evolve.samples, params_json(params).dump());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      csv_->row({format_number(traj.times[i]), format_number(traj.nbar[i])});
    }
    dynamics::FitOptions fo;
    fo.window_start = c_.evolve.fit_window;
    const auto fit = dynamics::fit_rate(traj, fo);
    results["fit"] = fit_json(fit);
    log_ << "evolve: nbar(" << format_number(c_.evolve.t_final)
         << ") = " << format_number(traj.nbar.back()) << ", fitted W = " << format_number(fit.rate)
         << (fit.decaying ? "" : " (not decaying)") << "\n";
  }

  void steady(const fs::path& path) {
    const auto params = resolved_params(c_);
    std::vector<std::string> header(params.names().begin(), params.names().end());
    header.emplace_back("nbar_ss");
    header.emplace_back("nbar_analytic");
    open(path, header);
    const auto space = space_for(c_, c_.scheme);
    const auto rho = liouville::steady_state(schemes::build(c_.scheme, c_.consts, params, space));
    const double nbar = dynamics::mean_phonon(rho);
    std::optional<double> analytic;
    switch (c_.scheme) {
      case SchemeId::rwsc:
        analytic = schemes::rwsc_steady_nbar(c_.consts, params.get("delta"), params.get("omega"));
        break;
      case SchemeId::swsc:
        analytic = schemes::swsc_steady_nbar(c_.consts, params.get("delta"), params.get("omega"));
        break;
      case SchemeId::eit3:
        analytic = schemes::eit_steady_nbar(c_.consts, params.get("delta"),
                                            params.get("omega_g"), params.get("omega_r"));
        break;
      case SchemeId::eit4:
        break;
    }
    std::vector<std::string> row;
    for (double v : params.values()) row.push_back(format_number(v));
    row.push_back(format_number(nbar));
    row.push_back(analytic ? format_number(*analytic) : "");
    csv_->row(row);
    results["nbar_ss"] = nbar;
    if (analytic) results["nbar_analytic"] = *analytic;
    log_ << "steady: nbar_ss = " << format_number(nbar) << "\n";
  }

  void gradcheck(const fs::path& path) {
    open(path, {"point", "param", "value", "analytic", "finite_difference", "rel_err"});
    const auto& g = c_.gradcheck;
    const ControlParams base = resolved_params(c_);
    const ControlProblem p = make_problem(c_, c_.scheme, c_.consts, c_.horizons.front(), base,
                                          c_.free);
    const control::LossModel model(p);
    std::mt19937 rng(g.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < g.points; ++k) {
      RVec x = p.initial_guess;
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] *= 1.0 + g.spread * u(rng);
      RVec grad;
      model.grad(x, grad);
      RVec fd(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = 1e-4 * std::max(1.0, std::abs(x[i]));
        const auto central = [&](double step) {
          RVec xp = x, xm = x;
          xp[i] += step;
          xm[i] -= step;
          return (model.loss(xp) - model.loss(xm)) / (2.0 * step);
        };
        // Richardson step removes the O(h^2) truncation term.
        fd[i] = (4.0 * central(0.5 * h) - central(h)) / 3.0;
      }
      const double scale = std::max(grad.cwiseAbs().maxCoeff(), 1e-300);
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double rel = std::abs(grad[i] - fd[i]) / scale;
        worst = std::max(worst, rel);
        csv_->row({std::to_string(k), p.free[static_cast<std::size_t>(i)], format_number(x[i]),
                   format_number(grad[i]), format_number(fd[i]), format_number(rel)});
      }
    }
    results["max_rel_err"] = worst;
    results["tolerance"] = g.tolerance;
    log_ << "gradcheck: max rel. error " << format_number(worst) << " over " << g.points
         << " points (tolerance " << format_number(g.tolerance) << ")\n";
    if (!(worst < g.tolerance)) {
      throw NumericalError("gradcheck: max rel. error " + format_number(worst) +
                           " exceeds tolerance " + format_number(g.tolerance));
    }
  }

  void table1(const fs::path& path) {
    const auto& t1 = c_.table1;
    const std::string nbar_col = "nbar_" + format_number(t1.eval_time);
    open(path, {"T", "omega_g", "omega_r", "delta_g", "delta_r", "W", nbar_col});
    fs::path traj_path = path;
    traj_path.replace_filename(path.stem().string() + "_trajectories.csv");
    Csv traj_csv(traj_path, {"row", "t", "nbar"});
    extra_outputs.push_back(traj_path.filename().string());

    const auto space4 = space_for(c_, SchemeId::eit4);
    const auto rho4 = initial_state(c_, space4);
    results["rows"] = json::array();

    const auto emit = [&](const std::string& label, const ControlParams& p4, json entry) {
      const auto l = schemes::build(SchemeId::eit4, c_.consts, p4, space4);
      const auto traj = dynamics::trajectory(l, rho4, t1.eval_time, t1.samples);
      dynamics::FitOptions fo;
      fo.window_start = t1.fit_window;
      const auto fit = dynamics::fit_rate(traj, fo);
      csv_->row({label, format_number(p4.get("omega_g")), format_number(p4.get("omega_r")),
                 format_number(p4.get("delta_g")), format_number(p4.get("delta_r")),
                 format_number(fit.rate), format_number(traj.nbar.back())});
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        traj_csv.row({label, format_number(traj.times[i]), format_number(traj.nbar[i])});
      }
      entry["label"] = label;
      entry["fit"] = fit_json(fit);
      entry["nbar_eval"] = traj.nbar.back();
      results["rows"].push_back(std::move(entry));
      log_ << "table1: " << label << " nbar(" << format_number(t1.eval_time)
           << ") = " << format_number(traj.nbar.back()) << ", W = " << format_number(fit.rate)
           << "\n";
    };

    // Horizons in the listed order, each warm-started from the previous optimum.
    ControlParams current = resolved_params(c_);
    for (double t : t1.horizons) {
      const auto start = Clock::now();
      const ControlProblem p = make_problem(c_, SchemeId::eit4, c_.consts, t, current, c_.free);
      log_ << "table1: optimising T = " << format_number(t) << "\n";
      const OptimResult r = control::minimize(p, verbose_options(c_, log_));
      current = r.params_opt;
      emit(format_number(t), current, {{"T", t}, {"optimum", optim_json(r)}});
      timings["T=" + format_number(t)] = seconds_since(start);
    }

    if (t1.eit3_row && !t1.horizons.empty()) {
      const auto start = Clock::now();
      const double t = t1.horizons.back();
      const PhysicalConstants k3 = schemes::eit3_from_eit4(c_.consts);
      ControlParams p3(SchemeId::eit3);
      p3.set("delta", 0.5 * (current.get("delta_g") + current.get("delta_r")));
      p3.set("omega_g", current.get("omega_g"));
      p3.set("omega_r", current.get("omega_r"));
      const ControlProblem p = make_problem(c_, SchemeId::eit3, k3, t, p3,
                                            schemes::parameter_names(SchemeId::eit3));
      log_ << "table1: optimising the three-level model at T = " << format_number(t) << "\n";
      const OptimResult r = control::minimize(p, verbose_options(c_, log_));
      ControlParams p4(SchemeId::eit4);
      p4.set("delta_g", r.params_opt.get("delta"));
      p4.set("delta_r", r.params_opt.get("delta"));
      p4.set("omega_g", r.params_opt.get("omega_g"));
      p4.set("omega_r", r.params_opt.get("omega_r"));
      emit("EIT3-" + format_number(t), p4,
           {{"T", t}, {"eit3_constants", constants_json(k3)}, {"optimum", optim_json(r)}});
      timings["EIT3-" + format_number(t)] = seconds_since(start);
    }
  }

  const ExperimentConfig& c_;
  int threads_;
  std::ostream& log_;
  std::unique_ptr<Csv> csv_;
};

}  // namespace

RunOutcome run(const ExperimentConfig& config, const RunOptions& options, std::ostream& log) {
  const auto start = Clock::now();
  const int threads = options.threads.value_or(config.threads);
  if (threads < 1) throw std::runtime_error("--threads must be >= 1");
  const fs::path dir(options.out_dir);
  fs::create_directories(dir);
  const fs::path csv_path = dir / config.output;
  fs::path manifest_path = csv_path;
  manifest_path.replace_extension(".manifest.json");

  RunOutcome outcome;
  outcome.csv_path = csv_path.string();
  outcome.manifest_path = manifest_path.string();

  json manifest = {{"tool", "coolopt"},
                   {"version", kVersion},
                   {"config", {{"path", config.source}, {"text", config.text}}},
                   {"resolved", resolved_json(config, threads)}};

  Runner runner(config, threads, log);
  try {
    runner.execute(csv_path);
    if (runner.point_failures) {
      outcome.exit_code = kNumericalFailure;
      outcome.error = "some points failed; first error: " + runner.point_failure_message;
    }
  } catch (const InvalidArgument& e) {
    outcome.exit_code = kConfigError;
    outcome.error = e.what();
  } catch (const Error& e) {
    outcome.exit_code = kNumericalFailure;
    outcome.error = e.what();
  } catch (const std::runtime_error& e) {
    // Includes I/O errors while writing results.
    outcome.exit_code = kNumericalFailure;
    outcome.error = e.what();
  }
  if (outcome.exit_code != kOk && runner.csv() != nullptr) runner.csv()->fail(outcome.error);

  std::vector<std::string> outputs{csv_path.filename().string()};
  outputs.insert(outputs.end(), runner.extra_outputs.begin(), runner.extra_outputs.end());
  manifest["outputs"] = outputs;
  manifest["results"] = runner.results;
  runner.timings["total"] = seconds_since(start);
  manifest["timings_s"] = runner.timings;
  manifest["status"] = outcome.exit_code == kOk ? "ok" : "FAILED";
  if (outcome.exit_code != kOk) manifest["error"] = outcome.error;
  std::ofstream out(manifest_path);
  if (!out) throw std::runtime_error("cannot write " + manifest_path.string());
  out << manifest.dump(2) << '\n';
  return outcome;
}

}  // namespace coolopt::app
