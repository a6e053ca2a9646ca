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

#pragma once

// The four cooling schemes as parametric Lindbladian families.
//
// Every control parameter enters the Hamiltonian linearly,
//   H(alpha) = H_0 + sum_i alpha_i H_i,
// so L(alpha) = L_0 + sum_i alpha_i L_i with parameter-independent
// generators L_i = -i[H_i, .] and a parameter-free dissipator inside L_0.
// All frequencies are in units of the trap frequency nu.
//
// Internal level order: sideband schemes (g, e); EIT3 (g, e, r);
// EIT4 (g, e, r, t).

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coolopt/fock.hpp"
#include "coolopt/liouville.hpp"

namespace coolopt::schemes {

using fock::SpaceSpec;
using linalg::CMat;
using liouville::DipolePattern;
using liouville::Superoperator;

enum class SchemeId { rwsc, swsc, eit3, eit4 };

std::string to_string(SchemeId id);
SchemeId scheme_from_string(std::string_view name);

/// Number of internal levels the scheme acts on: 2, 2, 3, 4.
int internal_dim(SchemeId id);

/// Ordered parameter names: (delta, omega); (delta, omega_g, omega_r);
/// (delta_g, delta_r, omega_g, omega_r).
const std::vector<std::string>& parameter_names(SchemeId id);

/// True for the detuning-type parameters.
bool is_detuning(std::string_view name);

struct PhysicalConstants {
  double nu = 1.0;

  // RWSC / SWSC: Lamb-Dicke parameter and decay rate of e -> g.
  // EIT4: `eta` is the base Lamb-Dicke parameter; the laser couplings use
  // (sqrt(2)/2) eta and the recoil kernels use eta.
  double eta = 0.1;
  double gamma = 0.1;

  // Three-level EIT. eta_g and eta_r are signed laser Lamb-Dicke parameters
  // (opposite signs for counter-propagating beams); the coupling |e><j|
  // carries exp(i eta_j X).
  double eta_g = 0.15;
  double eta_r = -0.15;
  double recoil_eta_g = 0.15;
  double recoil_eta_r = 0.15;
  DipolePattern pattern_g = DipolePattern::parallel;
  DipolePattern pattern_r = DipolePattern::parallel;

  // Decay rates e -> g and e -> r (EIT3); for EIT4 also t -> r and t -> g.
  double gamma_g = 20.0 / 3.0;
  double gamma_r = 40.0 / 3.0;

  // EIT4: Delta_t = Delta_g + t_offset.
  double t_offset = 8.0;

  /// Defaults used for the published scans of each scheme.
  static PhysicalConstants defaults(SchemeId id);
};

/// eta = k sqrt(hbar / (2 m nu)) for an ion of the given mass on a
/// transition of the given wavelength in a trap of the given (cyclic)
/// frequency.
double lamb_dicke_parameter(double mass_amu, double wavelength_nm,
                            double trap_frequency_mhz);

/// Three-level constants obtained by deleting |t> from an EIT4 model:
/// couplings -/+ (sqrt(2)/2) eta, recoil eta on both channels, e -> g with
/// the parallel and e -> r with the perpendicular pattern.
PhysicalConstants eit3_from_eit4(const PhysicalConstants& eit4);

/// Named control parameters of one scheme.
class ControlParams {
 public:
  explicit ControlParams(SchemeId scheme);
  ControlParams(SchemeId scheme, std::vector<double> values);

  SchemeId scheme() const noexcept { return scheme_; }
  const std::vector<std::string>& names() const { return parameter_names(scheme_); }
  const std::vector<double>& values() const noexcept { return values_; }

  double get(std::string_view name) const;
  void set(std::string_view name, double value);
  std::size_t index_of(std::string_view name) const;

 private:
  SchemeId scheme_;
  std::vector<double> values_;
};

/// alpha -> (L(alpha), dL/dalpha_i) for one scheme, constants and space.
class ParametricLindbladian {
 public:
  ParametricLindbladian(SchemeId scheme, const PhysicalConstants& consts,
                        const SpaceSpec& space);

  SchemeId scheme() const noexcept { return scheme_; }
  const SpaceSpec& space() const noexcept { return fixed_.space(); }

  /// -i[H_0, .] + D.
  const Superoperator& fixed_part() const noexcept { return fixed_; }
  /// dL/dalpha_i in parameter_names() order.
  const std::vector<Superoperator>& generators() const noexcept { return generators_; }

  const CMat& base_hamiltonian() const noexcept { return h0_; }
  const std::vector<CMat>& hamiltonian_generators() const noexcept { return h_gens_; }

  CMat hamiltonian(const ControlParams& params) const;
  Superoperator at(const ControlParams& params) const;

 private:
  void check(const ControlParams& params) const;

  SchemeId scheme_;
  CMat h0_;
  std::vector<CMat> h_gens_;
  Superoperator fixed_;
  std::vector<Superoperator> generators_;
};

/// L(alpha) = -i[H(alpha), .] + D.
Superoperator build(SchemeId scheme, const PhysicalConstants& consts,
                    const ControlParams& params, const SpaceSpec& space);

/// (name, dL/dalpha) for each control parameter.
std::vector<std::pair<std::string, Superoperator>> derivative_generators(
    SchemeId scheme, const PhysicalConstants& consts,
    const ControlParams& params, const SpaceSpec& space);

/// Weak-coupling steady-state phonon number of running-wave sideband
/// cooling; empty when A_- <= A_+ (no cooling).
std::optional<double> rwsc_steady_nbar(const PhysicalConstants& consts,
                                       double delta, double omega);

/// Same for the standing-wave configuration (no carrier term).
std::optional<double> swsc_steady_nbar(const PhysicalConstants& consts,
                                       double delta, double omega);

/// sqrt(delta^2 + omega^2) - nu.
double shifted_resonance(double delta, double omega, double nu = 1.0);

/// Weak-coupling steady-state phonon number of three-level EIT cooling with
/// gamma = gamma_g + gamma_r; empty when A_- <= A_+.
std::optional<double> eit_steady_nbar(const PhysicalConstants& consts,
                                      double delta, double omega_g,
                                      double omega_r);

/// AC Stark shift of the bright state,
/// (-delta + sqrt(omega_g^2 + omega_r^2 + delta^2)) / 2.
double ac_stark(double delta, double omega_g, double omega_r);

}  // namespace coolopt::schemes
