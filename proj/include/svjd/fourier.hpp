#pragma once

#include <functional>
#include <vector>

#include "svjd/model.hpp"
#include "svjd/parallel.hpp"
#include "svjd/report.hpp"

namespace svjd {

enum class QuadScheme { trapezoid, adaptive };

/// Damped inversion integral over [0, z_max]. The trapezoid rule uses
/// n_nodes intervals (rounded up to even) and estimates its error from the
/// half-resolution rule; the adaptive scheme is Gauss-Kronrod bisection.
struct QuadratureConfig {
  double delta = 0.75;
  double z_max = 200.0;
  int n_nodes = 2048;
  QuadScheme scheme = QuadScheme::trapezoid;
  Exec exec = Exec::parallel;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Integrates f over [0, cfg.z_max] with the configured scheme.
QuadResult integrate(const std::function<double(double)>& f, const QuadratureConfig& cfg);

/// Trapezoid node evaluation kernels: values[k] = f(k * h), k = 0..n.
void eval_nodes_serial(const std::function<double(double)>& f, double h, std::vector<double>& values);
void eval_nodes_omp(const std::function<double(double)>& f, double h, std::vector<double>& values);

/// Lower bound for the spread option (S1_T - S2_T - K)^+ seen at time t;
/// exact when K = 0. Model must be under Q with rho_w = rho_z = 0.
PriceReport spread_lower_bound(const MarketModel& model, const MarketState& state, double t, double T, double K,
                               const QuadratureConfig& quad = {});

/// European exchange option (S1_T - S2_T)^+.
PriceReport exchange_price(const MarketModel& model, const MarketState& state, double t, double T,
                           const QuadratureConfig& quad = {});

/// Exchange option as S1 e^{-q1 tau} P1 - S2 e^{-q2 tau} P2 where P_i is the
/// probability of finishing in the money under the asset-i numeraire
/// measure. term1/term2 hold the two money terms, prob1/prob2 the P_i.
PriceReport exchange_price_decomposed(const MarketModel& model, const MarketState& state, double t, double T,
                                      const QuadratureConfig& quad = {});

struct RIndependence {
  double max_abs_deviation = 0.0;
  double reference_price = 0.0;
  double relative() const { return reference_price > 0 ? max_abs_deviation / reference_price : max_abs_deviation; }
};

/// Reprices with r replaced by each grid value (dividend yields fixed) and
/// reports the largest deviation from the first grid point. K = 0 is the
/// exchange option; K > 0 serves as a control.
RIndependence r_independence_check(const MarketModel& model, const MarketState& state, double t, double T,
                                   const std::vector<double>& r_grid, double K = 0.0,
                                   const QuadratureConfig& quad = {});

}  // namespace svjd
