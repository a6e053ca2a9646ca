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

#include "coolopt/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coolopt/error.hpp"

namespace coolopt::schemes {
namespace {

using linalg::cplx;

constexpr int kG = 0;
constexpr int kE = 1;
constexpr int kR = 2;
constexpr int kT = 3;

// exp(i theta X) and sin(theta X) from the eigendecomposition of X.
struct MotionalFunctions {
  explicit MotionalFunctions(int d) : eig(linalg::eigh(fock::position_op(d))) {}

  CMat exp_i(double theta) const {
    linalg::CVec phases(eig.values.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) {
      phases(k) = std::polar(1.0, theta * eig.values(k));
    }
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
  }

  CMat sin(double theta) const {
    linalg::CVec s(eig.values.size());
    for (Eigen::Index k = 0; k < s.size(); ++k) s(k) = std::sin(theta * eig.values(k));
    return eig.vectors * s.asDiagonal() * eig.vectors.adjoint();
  }

  linalg::EigenDecomposition eig;
};

struct Pieces {
  CMat h0;
  std::vector<CMat> gens;
  std::vector<liouville::RecoilChannel> channels;
};

CMat projector(const SpaceSpec& space, int level) {
  return fock::embed(fock::level_op(space.internal_dim(), level, level),
                     CMat::Identity(space.fock_dim(), space.fock_dim()), space);
}

// (1/2)(|lower><upper| (x) m + h.c.)
CMat half_coupling(const SpaceSpec& space, int lower, int upper, const CMat& m) {
  const CMat term =
      fock::embed(fock::level_op(space.internal_dim(), lower, upper), m, space);
  return 0.5 * (term + term.adjoint());
}

CMat trap(const PhysicalConstants& c, const SpaceSpec& space) {
  return c.nu * fock::phonon_number(space);
}

Pieces sideband_pieces(SchemeId id, const PhysicalConstants& c,
                       const SpaceSpec& space) {
  const MotionalFunctions mf(space.fock_dim());
  Pieces p;
  p.h0 = trap(c, space);
  p.gens.push_back(-projector(space, kE));
  if (id == SchemeId::rwsc) {
    // |g><e| e^{i eta X} + |e><g| e^{-i eta X}
    p.gens.push_back(half_coupling(space, kG, kE, mf.exp_i(c.eta)));
  } else {
    // (|e><g| + |g><e|) sin(eta X)
    p.gens.push_back(half_coupling(space, kG, kE, mf.sin(c.eta)));
  }
  p.channels.push_back({c.gamma, kG, kE, c.eta, DipolePattern::parallel});
  return p;
}

Pieces eit3_pieces(const PhysicalConstants& c, const SpaceSpec& space) {
  const MotionalFunctions mf(space.fock_dim());
  Pieces p;
  p.h0 = trap(c, space);
  p.gens.push_back(-projector(space, kE));
  // |e><j| e^{i eta_j X} + h.c.
  p.gens.push_back(half_coupling(space, kE, kG, mf.exp_i(c.eta_g)));
  p.gens.push_back(half_coupling(space, kE, kR, mf.exp_i(c.eta_r)));
  p.channels.push_back({c.gamma_g, kG, kE, c.recoil_eta_g, c.pattern_g});
  p.channels.push_back({c.gamma_r, kR, kE, c.recoil_eta_r, c.pattern_r});
  return p;
}

Pieces eit4_pieces(const PhysicalConstants& c, const SpaceSpec& space) {
  const MotionalFunctions mf(space.fock_dim());
  const double s = c.eta * std::numbers::sqrt2 / 2.0;
  const CMat plus = mf.exp_i(s);
  const CMat minus = mf.exp_i(-s);
  Pieces p;
  // Diagonal: -Delta_g |e><e| - (Delta_g - Delta_r)|r><r|
  //           + (-Delta_g + Delta_r - Delta_t)|t><t|, Delta_t = Delta_g + offset.
  p.h0 = trap(c, space) - c.t_offset * projector(space, kT);
  p.gens.push_back(-projector(space, kE) - projector(space, kR) -
                   2.0 * projector(space, kT));
  p.gens.push_back(projector(space, kR) + projector(space, kT));
  p.gens.push_back(half_coupling(space, kG, kE, plus) +
                   half_coupling(space, kR, kT, plus));
  p.gens.push_back(half_coupling(space, kR, kE, minus));
  p.channels.push_back({c.gamma_g, kG, kE, c.eta, DipolePattern::parallel});
  p.channels.push_back({c.gamma_r, kR, kE, c.eta, DipolePattern::perpendicular});
  p.channels.push_back({c.gamma_r, kG, kT, c.eta, DipolePattern::perpendicular});
  p.channels.push_back({c.gamma_g, kR, kT, c.eta, DipolePattern::parallel});
  return p;
}

void validate(const PhysicalConstants& c, SchemeId id) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument(std::string("physical constants: ") + what +
                            " must be positive");
    }
  };
  auto finite = [](double v, const char* what) {
    if (!std::isfinite(v)) {
      throw InvalidArgument(std::string("physical constants: ") + what +
                            " must be finite");
    }
  };
  positive(c.nu, "nu");
  switch (id) {
    case SchemeId::rwsc:
    case SchemeId::swsc:
      positive(c.gamma, "gamma");
      finite(c.eta, "eta");
      break;
    case SchemeId::eit3:
      positive(c.gamma_g, "gamma_g");
      positive(c.gamma_r, "gamma_r");
      finite(c.eta_g, "eta_g");
      finite(c.eta_r, "eta_r");
      finite(c.recoil_eta_g, "recoil_eta_g");
      finite(c.recoil_eta_r, "recoil_eta_r");
      break;
    case SchemeId::eit4:
      positive(c.gamma_g, "gamma_g");
      positive(c.gamma_r, "gamma_r");
      finite(c.eta, "eta");
      finite(c.t_offset, "t_offset");
      break;
  }
}

Pieces pieces(SchemeId id, const PhysicalConstants& c, const SpaceSpec& space) {
  if (space.internal_dim() != internal_dim(id)) {
    throw InvalidArgument(to_string(id) + " needs internal_dim " +
                          std::to_string(internal_dim(id)) + ", got " +
                          std::to_string(space.internal_dim()));
  }
  validate(c, id);
  switch (id) {
    case SchemeId::rwsc:
    case SchemeId::swsc:
      return sideband_pieces(id, c, space);
    case SchemeId::eit3:
      return eit3_pieces(c, space);
    case SchemeId::eit4:
      return eit4_pieces(c, space);
  }
  throw InvalidArgument("unknown scheme");
}

Superoperator dissipator(const std::vector<liouville::RecoilChannel>& channels,
                         const SpaceSpec& space) {
  Superoperator total = liouville::recoil_dissipator(channels.front(), space);
  for (std::size_t i = 1; i < channels.size(); ++i) {
    total = total + liouville::recoil_dissipator(channels[i], space);
  }
  return total;
}

}  // namespace

std::string to_string(SchemeId id) {
  switch (id) {
    case SchemeId::rwsc: return "rwsc";
    case SchemeId::swsc: return "swsc";
    case SchemeId::eit3: return "eit3";
    case SchemeId::eit4: return "eit4";
  }
  return "unknown";
}

SchemeId scheme_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return char(std::tolower(ch)); });
  if (lower == "rwsc") return SchemeId::rwsc;
  if (lower == "swsc") return SchemeId::swsc;
  if (lower == "eit3") return SchemeId::eit3;
  if (lower == "eit4") return SchemeId::eit4;
  throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

int internal_dim(SchemeId id) {
  switch (id) {
    case SchemeId::rwsc:
    case SchemeId::swsc: return 2;
    case SchemeId::eit3: return 3;
    case SchemeId::eit4: return 4;
  }
  return 0;
}

const std::vector<std::string>& parameter_names(SchemeId id) {
  static const std::vector<std::string> sideband = {"delta", "omega"};
  static const std::vector<std::string> eit3 = {"delta", "omega_g", "omega_r"};
  static const std::vector<std::string> eit4 = {"delta_g", "delta_r", "omega_g",
                                                "omega_r"};
  switch (id) {
    case SchemeId::rwsc:
    case SchemeId::swsc: return sideband;
    case SchemeId::eit3: return eit3;
    case SchemeId::eit4: return eit4;
  }
  return sideband;
}

bool is_detuning(std::string_view name) { return name.starts_with("delta"); }

PhysicalConstants PhysicalConstants::defaults(SchemeId id) {
  PhysicalConstants c;
  switch (id) {
    case SchemeId::rwsc:
      c.eta = 0.1;
      c.gamma = 0.1;
      break;
    case SchemeId::swsc:
      c.eta = 0.08;
      c.gamma = 0.1;
      break;
    case SchemeId::eit3:
      break;
    case SchemeId::eit4: {
      // 40Ca+ on 397 nm in a 1.3 MHz trap; decay rates 2pi x 20/3 MHz and
      // 2pi x 40/3 MHz in units of nu.
      const double nu_mhz = 1.3;
      c.eta = lamb_dicke_parameter(40.0, 397.0, nu_mhz);
      c.gamma_g = (20.0 / 3.0) / nu_mhz;
      c.gamma_r = (40.0 / 3.0) / nu_mhz;
      c.t_offset = 8.0;
      break;
    }
  }
  return c;
}

double lamb_dicke_parameter(double mass_amu, double wavelength_nm,
                            double trap_frequency_mhz) {
  constexpr double kHbar = 1.054571817e-34;
  constexpr double kAmu = 1.66053906660e-27;
  if (!(mass_amu > 0.0) || !(wavelength_nm > 0.0) || !(trap_frequency_mhz > 0.0)) {
    throw InvalidArgument("lamb_dicke_parameter: arguments must be positive");
  }
  const double k = 2.0 * std::numbers::pi / (wavelength_nm * 1e-9);
  const double omega = 2.0 * std::numbers::pi * trap_frequency_mhz * 1e6;
  return k * std::sqrt(kHbar / (2.0 * mass_amu * kAmu * omega));
}

PhysicalConstants eit3_from_eit4(const PhysicalConstants& eit4) {
  PhysicalConstants c = eit4;
  const double s = eit4.eta * std::numbers::sqrt2 / 2.0;
  c.eta_g = -s;
  c.eta_r = s;
  c.recoil_eta_g = eit4.eta;
  c.recoil_eta_r = eit4.eta;
  c.pattern_g = DipolePattern::parallel;
  c.pattern_r = DipolePattern::perpendicular;
  return c;
}

ControlParams::ControlParams(SchemeId scheme)
    : scheme_(scheme), values_(parameter_names(scheme).size(), 0.0) {}

ControlParams::ControlParams(SchemeId scheme, std::vector<double> values)
    : scheme_(scheme), values_(std::move(values)) {
  if (values_.size() != parameter_names(scheme).size()) {
    throw InvalidArgument("ControlParams: " + to_string(scheme) + " takes " +
                          std::to_string(parameter_names(scheme).size()) +
                          " parameters");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("ControlParams: non-finite value");
  }
}

std::size_t ControlParams::index_of(std::string_view name) const {
  const auto& names = parameter_names(scheme_);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw InvalidArgument("unknown parameter '" + std::string(name) + "' for " +
                        to_string(scheme_));
}

double ControlParams::get(std::string_view name) const {
  return values_[index_of(name)];
}

void ControlParams::set(std::string_view name, double value) {
  if (!std::isfinite(value)) throw InvalidArgument("ControlParams: non-finite value");
  values_[index_of(name)] = value;
}

ParametricLindbladian::ParametricLindbladian(SchemeId scheme,
                                             const PhysicalConstants& consts,
                                             const SpaceSpec& space)
    : scheme_(scheme),
      fixed_(space, CMat::Zero(Eigen::Index(space.dim()) * space.dim(),
                               Eigen::Index(space.dim()) * space.dim())) {
  Pieces p = pieces(scheme, consts, space);
  h0_ = std::move(p.h0);
  h_gens_ = std::move(p.gens);
  fixed_ = liouville::hamiltonian_part(h0_, space) + dissipator(p.channels, space);
  generators_.reserve(h_gens_.size());
  for (const auto& h : h_gens_) generators_.push_back(liouville::hamiltonian_part(h, space));
}

void ParametricLindbladian::check(const ControlParams& params) const {
  if (params.scheme() != scheme_) {
    throw InvalidArgument("parameters for " + to_string(params.scheme()) +
                          " passed to a " + to_string(scheme_) + " model");
  }
}

CMat ParametricLindbladian::hamiltonian(const ControlParams& params) const {
  check(params);
  CMat h = h0_;
  for (std::size_t i = 0; i < h_gens_.size(); ++i) h += params.values()[i] * h_gens_[i];
  return h;
}

Superoperator ParametricLindbladian::at(const ControlParams& params) const {
  check(params);
  CMat l = fixed_.matrix();
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    l += params.values()[i] * generators_[i].matrix();
  }
  return Superoperator(space(), std::move(l));
}

Superoperator build(SchemeId scheme, const PhysicalConstants& consts,
                    const ControlParams& params, const SpaceSpec& space) {
  return ParametricLindbladian(scheme, consts, space).at(params);
}

std::vector<std::pair<std::string, Superoperator>> derivative_generators(
    SchemeId scheme, const PhysicalConstants& consts,
    const ControlParams& params, const SpaceSpec& space) {
  if (params.scheme() != scheme) {
    throw InvalidArgument("derivative_generators: parameter scheme mismatch");
  }
  ParametricLindbladian family(scheme, consts, space);
  std::vector<std::pair<std::string, Superoperator>> out;
  const auto& names = parameter_names(scheme);
  for (std::size_t i = 0; i < names.size(); ++i) {
    out.emplace_back(names[i], family.generators()[i]);
  }
  return out;
}

namespace {

std::optional<double> ratio_nbar(double a_plus, double a_minus) {
  if (!(a_minus > a_plus)) return std::nullopt;
  return a_plus / (a_minus - a_plus);
}

}  // namespace

std::optional<double> rwsc_steady_nbar(const PhysicalConstants& c, double delta,
                                       double omega) {
  const double g = c.gamma;
  const double pre = c.eta * c.eta * 0.25 * omega * omega;
  const double carrier = 0.4 * g / (delta * delta + 0.25 * g * g);
  auto side = [&](double shift) {
    return g / ((delta - shift) * (delta - shift) + 0.25 * g * g);
  };
  return ratio_nbar(pre * (side(c.nu) + carrier), pre * (side(-c.nu) + carrier));
}

std::optional<double> swsc_steady_nbar(const PhysicalConstants& c, double delta,
                                       double omega) {
  const double g = c.gamma;
  const double pre = c.eta * c.eta * 0.25 * omega * omega;
  auto side = [&](double shift) {
    return g / ((delta - shift) * (delta - shift) + 0.25 * g * g);
  };
  return ratio_nbar(pre * side(c.nu), pre * side(-c.nu));
}

double shifted_resonance(double delta, double omega, double nu) {
  return std::hypot(delta, omega) - nu;
}

std::optional<double> eit_steady_nbar(const PhysicalConstants& c, double delta,
                                      double omega_g, double omega_r) {
  const double g = c.gamma_g + c.gamma_r;
  const double nu = c.nu;
  const double omega2 = omega_g * omega_g + omega_r * omega_r;
  auto rate = [&](double sign) {
    const double detune = 0.25 * omega2 - nu * (nu - sign * delta);
    return (omega_g * omega_g / g) * (g * g * nu * nu) /
           (g * g * nu * nu + 4.0 * detune * detune);
  };
  return ratio_nbar(rate(+1.0), rate(-1.0));
}

double ac_stark(double delta, double omega_g, double omega_r) {
  return 0.5 * (-delta + std::sqrt(omega_g * omega_g + omega_r * omega_r +
                                   delta * delta));
}

}  // namespace coolopt::schemes
