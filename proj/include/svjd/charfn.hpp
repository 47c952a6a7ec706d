#pragma once

#include <array>
#include <complex>

#include "svjd/model.hpp"

namespace svjd {

using cplx = std::complex<double>;

/// Normal jump CF E[e^{iuY}] at complex u.
cplx phi_jump(const JumpSpec& jump, cplx u);

/// Affine exponents of the joint log-price CF at horizon s. C collects the
/// drift and variance-level terms; the compound-Poisson part is added by
/// phi_joint.
struct RiccatiParts {
  std::array<cplx, 2> gamma{};
  std::array<cplx, 2> D{};
  cplx C{};
  double s = 0.0;
};

/// Closed-form Riccati solution. Parameters are read from the model under its
/// own measure, so a numeraire-shifted model yields the shifted exponents.
/// Throws DomainError when the arguments leave the evaluable strip.
RiccatiParts riccati(const MarketModel& model, double s, cplx u1, cplx u2);

struct CFValue {
  cplx value{};
  cplx log_value{};
  cplx u1{}, u2{};
  double horizon = 0.0;
  MarketState state;
  Measure measure = Measure::Q;
};

/// Conditional CF E[exp(i(u1 X1_T + u2 X2_T)) | state at t] under the
/// model's measure, X = log S. Requires rho_w = rho_z = 0.
CFValue phi_joint(const MarketModel& model, const MarketState& state, double t, double T, cplx u1, cplx u2);

/// Log of phi_joint. Skips the final exponential.
cplx log_phi_joint(const MarketModel& model, const MarketState& state, double t, double T, cplx u1, cplx u2);

/// Throws ValidationError unless rho_w = rho_z = 0.
void require_independent_volatility(const MarketModel& model);

}  // namespace svjd
