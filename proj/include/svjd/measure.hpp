#pragma once

#include <array>

#include "svjd/model.hpp"

namespace svjd {

/// Exponential tilt of a Normal jump law: intensity scales by
/// e^nu * M_Y(gamma), the mean moves by gamma * sigma_j^2.
JumpSpec tilt_jump(const JumpSpec& jump, double gamma, double nu);

/// Jump law in force under the model's measure (the asset's tilt applied).
JumpSpec active_jump(const AssetParams& asset);

/// Market-to-Q change parameters. Only the jump part enters any computation;
/// the Wiener drift shifts are carried implicitly by stating VolParams under Q.
struct MeasureShift {
  std::array<double, 2> gamma{};
  std::array<double, 2> nu{};

  static MeasureShift from_model(const MarketModel& model);
  /// lambda_i e^{nu_i} M_Y(gamma_i).
  double tilted_intensity(const MarketModel& model, int asset) const;
};

/// Change to the measure with asset 1 (resp. 2) as numeraire. Requires a Q
/// model with rho_z = 0.
MarketModel numeraire_shift_1(const MarketModel& model);
MarketModel numeraire_shift_2(const MarketModel& model);
MarketModel numeraire_shift(const MarketModel& model, int numeraire);

/// Q model to any of the three measures (identity for Measure::Q).
MarketModel to_measure(const MarketModel& model, Measure target);

/// r - q_i - lambda~_i kappa~_i for a Q model.
double risk_neutral_drift(const MarketModel& model, int asset);

/// Per-asset coefficients of the log-price and variance SDEs under the
/// model's measure:
///   dX = (log_drift + var_coeff v + cross_coeff sqrt(v_1 v_2)) dt + sqrt(v) dW + dJ
///   dv = (level - mean_reversion v) dt + sigma sqrt(v) dZ
struct AssetDynamics {
  double log_drift = 0.0;
  double var_coeff = -0.5;
  double cross_coeff = 0.0;
  double mean_reversion = 0.0;
  double level = 0.0;
  double sigma = 0.0;
  double rho_wz = 0.0;
  JumpSpec jumps;
  double compensator = 0.0;  ///< lambda~ kappa~ of the Q jump law
};

AssetDynamics asset_dynamics(const MarketModel& model, int asset);

}  // namespace svjd
