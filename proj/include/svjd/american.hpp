#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "svjd/mc.hpp"
#include "svjd/model.hpp"
#include "svjd/report.hpp"

namespace svjd {

/// Early-exercise boundary as a price ratio S1/S2 on a time grid, linear in
/// t between nodes. +infinity marks "never exercise".
struct BoundaryCurve {
  std::vector<double> t;
  std::vector<double> B;
  std::vector<double> residual;

  double at(double time) const;
  /// Throws ValidationError unless B_k >= 1 and the grid covers [t0, T].
  void validate(double t0, double T) const;
};

/// Terminal boundary value max(1, q2/q1); +infinity when q1 = 0.
double terminal_boundary(double q1, double q2);

struct LSMConfig {
  int degree = 3;           ///< total degree of the regression basis
  int dates = 50;           ///< exercise dates after t (the last one is T)
  int steps_per_date = 5;
  std::int64_t paths = 100000;           ///< pricing paths
  std::int64_t training_paths = 50000;   ///< regression paths (independent of pricing)
  std::optional<std::uint64_t> seed;
  VarianceScheme scheme = VarianceScheme::full_truncation_euler;
  Exec exec = Exec::parallel;
  int hermite_nodes = 16;   ///< Gauss-Hermite nodes for inner jump expectations
  std::int64_t boundary_paths = 20000;  ///< paths per node in solve_boundary

  void validate() const;
};

/// Regression surface for V/S2 per exercise date, in the basis of
/// (ln(S1/S2), v1/v1_ref, v2/v2_ref).
struct ContinuationSurface {
  int degree = 0;
  double v1_ref = 1.0, v2_ref = 1.0;
  std::vector<double> date_time;
  /// coef[d] fits the all-path value (date 0 reuses date 1).
  std::vector<std::vector<double>> coef;

  double value_over_s2(int date, double ratio, double v1, double v2) const;
};

/// Number of monomials of total degree <= degree in three variables.
int basis_size(int degree);
void basis(int degree, double a, double b, double c, double* out);

struct LSMResult {
  PriceReport report;
  bool low_biased = true;
  bool rank_deficient = false;
  ContinuationSurface surface;
};

/// Regression Monte Carlo for the American exchange option. The exercise
/// policy is learned on a training set and applied to an independent
/// pricing set, so the estimate is biased low.
LSMResult lsm_price(const MarketModel& model, const MarketState& state, double t, double T, const LSMConfig& cfg);

struct EEPResult {
  PriceReport report;  ///< term1 = european, term2 = premium total
  double european = 0.0;
  MCEstimate premium, premium_diffusive, premium_jump1, premium_jump2;
};

/// American price as european plus early-exercise premium: a dividend-flow
/// integral over the stopping region and, per asset, a jump-cost integral
/// for jumps that leave it. Continuation values after a jump come from the
/// LSM value surface.
EEPResult eep_decomposition(const MarketModel& model, const MarketState& state, double t, double T,
                            const BoundaryCurve& boundary, const LSMConfig& cfg);
EEPResult eep_decomposition(const MarketModel& model, const MarketState& state, double t, double T,
                            const BoundaryCurve& boundary, const LSMConfig& cfg, const ContinuationSurface& surface);

/// Backward solve of the value-matching equation S2 (B - 1) = C^E + C^P on
/// the exercise-date grid. Each node uses the mean variance path; the premium
/// integral runs over the later dates with the boundary already found there.
BoundaryCurve solve_boundary(const MarketModel& model, const MarketState& state, double T, const LSMConfig& cfg);
BoundaryCurve solve_boundary(const MarketModel& model, const MarketState& state, double T, const LSMConfig& cfg,
                             const ContinuationSurface& surface);

}  // namespace svjd
