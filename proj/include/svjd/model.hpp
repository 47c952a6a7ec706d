#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace svjd {

/// Probability measure a MarketModel's dynamics are expressed under.
enum class Measure { Q, Qhat1, Qhat2 };

std::string_view to_string(Measure m);

/// Square-root variance parameters, stated under the market measure.
/// Under Q the variance reverts at rate xi + lambda_rp towards
/// xi * eta / (xi + lambda_rp).
struct VolParams {
  double xi = 0.0;         ///< mean-reversion rate (1/year)
  double eta = 0.0;        ///< long-run variance (1/year)
  double sigma = 0.0;      ///< vol-of-vol
  double v0 = 0.0;         ///< initial variance (1/year)
  double lambda_rp = 0.0;  ///< volatility risk premium coefficient

  double mean_reversion() const { return xi + lambda_rp; }
  /// Constant term of the variance drift, xi * eta. Invariant under every
  /// measure change used here.
  double level() const { return xi * eta; }
};

/// Compound-Poisson jump layer with Normal(mu_j, sigma_j^2) log-jump sizes.
struct JumpSpec {
  double lambda = 0.0;   ///< intensity (1/year); 0 disables the layer
  double mu_j = 0.0;     ///< mean of the log-jump
  double sigma_j = 0.0;  ///< std-dev of the log-jump
};

/// Expected relative jump increment E[e^Y] - 1.
double kappa(const JumpSpec& jump);

/// Exponential tilt (gamma) and intensity shift (nu) taking market-measure
/// jumps to Q-jumps. Zero means the JumpSpec is already stated under Q.
struct JumpTilt {
  double gamma = 0.0;
  double nu = 0.0;
};

using CorrelationMatrix = std::array<std::array<double, 4>, 4>;

/// Correlations of (W1, W2, Z1, Z2). W1-Z2 and W2-Z1 are zero.
struct CorrelationStructure {
  double rho_w = 0.0;
  double rho_wz1 = 0.0;
  double rho_wz2 = 0.0;
  double rho_z = 0.0;

  double rho_wz(int asset) const { return asset == 1 ? rho_wz1 : rho_wz2; }
  CorrelationMatrix matrix() const;
};

struct AssetParams {
  double s0 = 0.0;  ///< spot (currency)
  double q = 0.0;   ///< continuous dividend yield (1/year)
  VolParams vol;
  JumpSpec jump;
  JumpTilt tilt;
};

/// Drift rule attached to a numeraire-shifted model. Under Qhat_n the Q-Wiener
/// vector picks up drift wiener_coeff * sqrt(v_n) dt, i.e. column n of the
/// correlation matrix. The Z entries are already absorbed into the shifted
/// variance parameters; the simulator only applies the W entries.
struct NumeraireDrift {
  int numeraire = 0;  ///< 0 under Q, otherwise the numeraire asset (1 or 2)
  std::array<double, 4> wiener_coeff{};
  /// Q jump compensators lambda~ * kappa~ per asset; the log-price drift keeps
  /// these after the numeraire change.
  std::array<double, 2> compensator{};
};

struct MarketModel {
  AssetParams asset1;
  AssetParams asset2;
  CorrelationStructure corr;
  double r = 0.0;

  const AssetParams& asset(int i) const { return i == 1 ? asset1 : asset2; }
  AssetParams& asset(int i) { return i == 1 ? asset1 : asset2; }

  Measure measure_tag() const { return measure_; }
  const NumeraireDrift& numeraire_drift() const { return drift_; }

 private:
  Measure measure_ = Measure::Q;
  NumeraireDrift drift_;

  friend struct MeasureAccess;
};

/// Time-t state of the two-asset system.
struct MarketState {
  double s1 = 0.0;
  double s2 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;

  double spot(int i) const { return i == 1 ? s1 : s2; }
  double variance(int i) const { return i == 1 ? v1 : v2; }
};

/// Spot state read from the model's s0 and v0 fields.
MarketState spot_state(const MarketModel& model);

struct Violation {
  std::string invariant;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Checks every parameter invariant and reports all violations. Never throws.
ValidationReport validate(const MarketModel& model);

/// Throws ValidationError carrying the report summary when validate() fails.
void require_valid(const MarketModel& model);

/// Smallest eigenvalue of the 4x4 correlation matrix.
double min_correlation_eigenvalue(const CorrelationStructure& corr);

/// Forward S_i e^{(r - q_i)(T - t)} for delivery at T, seen at t.
double forward_price(const MarketModel& model, int asset, double spot, double t, double T);
double forward_price(const MarketModel& model, int asset, double t, double T);

}  // namespace svjd
