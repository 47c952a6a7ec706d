#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "svjd/model.hpp"
#include "svjd/parallel.hpp"
#include "svjd/report.hpp"

namespace svjd {

enum class VarianceScheme { full_truncation_euler, qe };

struct SimConfig {
  std::int64_t n_paths = 0;
  int n_steps = 0;  ///< steps over [t, T]
  std::optional<std::uint64_t> seed;
  VarianceScheme scheme = VarianceScheme::full_truncation_euler;
  bool antithetic = false;
  Exec exec = Exec::parallel;
  /// Store the state every this many steps (0 = terminal only). Date 0 is
  /// the initial state.
  int observe_every = 0;
  /// Test hook: all Gaussian draws are zero.
  bool zero_noise = false;

  void validate() const;
  std::uint64_t seed_value() const;
};

/// Simulated paths for indices [first_path, first_path + n_paths). Per-path
/// arrays are indexed by local path; observation arrays are [date * n_paths + path].
struct PathBatch {
  Measure measure = Measure::Q;
  std::uint64_t seed = 0;
  std::int64_t first_path = 0;
  std::int64_t n_paths = 0;
  double t0 = 0.0;
  double dt = 0.0;

  std::vector<double> x1, x2;  ///< terminal log-prices
  std::vector<double> v1, v2;  ///< terminal variances (>= 0)
  std::vector<int> n1, n2;     ///< jump counts in (t, T]
  std::vector<double> ysum1, ysum2;  ///< sum of log-jump sizes
  std::vector<double> ksum1, ksum2;  ///< sum of e^Y - 1
  std::vector<double> logu1, logu2;  ///< log of the numeraire densities U_i

  int n_dates = 0;
  std::vector<double> date_time;
  std::vector<double> obs_s1, obs_s2, obs_v1, obs_v2;
  std::vector<int> obs_n1, obs_n2;

  double s1(std::int64_t p) const;
  double s2(std::int64_t p) const;
  std::size_t obs(int date, std::int64_t p) const { return static_cast<std::size_t>(date) * n_paths + p; }
};

/// Simulates paths [first_path, first_path + count) from the time-t state.
/// Any measure tag is accepted; numeraire-shifted models carry their drift rule.
PathBatch simulate(const MarketModel& model, const MarketState& state, double t, double T, const SimConfig& cfg,
                   std::int64_t first_path, std::int64_t count);
PathBatch simulate(const MarketModel& model, const MarketState& state, double t, double T, const SimConfig& cfg);

/// Serial and OpenMP kernels behind simulate(); identical output.
PathBatch simulate_serial(const MarketModel& model, const MarketState& state, double t, double T,
                          const SimConfig& cfg, std::int64_t first_path, std::int64_t count);
PathBatch simulate_omp(const MarketModel& model, const MarketState& state, double t, double T,
                       const SimConfig& cfg, std::int64_t first_path, std::int64_t count);

struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Mean and standard error of per-path samples; antithetic pairs (2j, 2j+1)
/// are averaged first.
MCEstimate reduce_samples(const std::vector<double>& samples, bool antithetic);

/// One scalar per path, evaluated chunk-wise so large runs stay bounded in memory.
using PathFunctional = std::function<double(const PathBatch&, std::int64_t)>;
std::vector<double> path_samples(const MarketModel& model, const MarketState& state, double t, double T,
                                 const SimConfig& cfg, const PathFunctional& f);

PriceReport price_exchange_mc(const MarketModel& model, const MarketState& state, double t, double T,
                              const SimConfig& cfg);
PriceReport price_spread_mc(const MarketModel& model, const MarketState& state, double t, double T, double K,
                            const SimConfig& cfg);

/// Frequency of S1_T > S2_T under a numeraire-shifted model.
MCEstimate qhat_prob(const MarketModel& shifted, const MarketState& state, double t, double T, const SimConfig& cfg);

/// Decomposition S1 e^{-q1 tau} P1 - S2 e^{-q2 tau} P2 with both probabilities
/// simulated under their own measure (independent runs).
PriceReport price_exchange_mc_decomposed(const MarketModel& model, const MarketState& state, double t, double T,
                                         const SimConfig& cfg);

struct MartingaleCheck {
  MCEstimate u1, u2;          ///< E[U_i,T]
  MCEstimate yield1, yield2;  ///< E[e^{-(r-q_i) tau} S_i,T] / S_i,t
};
MartingaleCheck martingale_check(const MarketModel& model, const MarketState& state, double t, double T,
                                 const SimConfig& cfg);

/// Per-asset E[sum of (e^Y - 1) over (t,T]] / (lambda tau), which estimates kappa
/// of the active jump law.
std::array<MCEstimate, 2> jump_moment_check(const MarketModel& model, const MarketState& state, double t, double T,
                                            const SimConfig& cfg);

/// Monte Carlo E[exp(i(u1 X1_T + u2 X2_T))] with standard errors of the real
/// and imaginary parts.
struct CFEstimate {
  std::complex<double> value;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
};
CFEstimate mc_characteristic(const MarketModel& model, const MarketState& state, double t, double T, double u1,
                             double u2, const SimConfig& cfg);

/// Writes every step of the first n paths: path_id,step,S1,S2,v1,v2,N1,N2.
void dump_paths(std::ostream& os, const MarketModel& model, const MarketState& state, double t, double T,
                const SimConfig& cfg, std::int64_t n);

}  // namespace svjd
