#include "svjd/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svjd/errors.hpp"
#include "svjd/measure.hpp"
#include "svjd/rng.hpp"

namespace svjd {

namespace {

constexpr std::int64_t kChunk = 1 << 16;
constexpr double kSmallSigma = 1e-6;

struct AssetKernel {
  AssetDynamics d;
  double x0 = 0.0, v0 = 0.0;
  double decay = 0.0;  // e^{-k dt}
  double theta = 0.0;  // level / k
  double qe_c1 = 0.0, qe_c2 = 0.0;
  bool small_sigma = false;
};

struct Kernel {
  AssetKernel a[2];
  int n_steps = 0;
  double dt = 0.0;
  double tau = 0.0;
  double rho_z_comp = 1.0;  // sqrt(1 - rho_z^2)
  double rho_z = 0.0;
  double m[2][2] = {};      // W loading on Z
  double r11 = 0.0, r21 = 0.0, r22 = 0.0;  // residual factor
  VarianceScheme scheme = VarianceScheme::full_truncation_euler;
  bool antithetic = false;
  bool zero_noise = false;
  std::uint64_t seed = 0;
  int observe_every = 0;
};

Kernel make_kernel(const MarketModel& model, const MarketState& state, double t, double T, const SimConfig& cfg) {
  cfg.validate();
  if (!(T > t && t >= 0.0)) throw ValidationError("simulate: requires 0 <= t < T");
  if (!(state.s1 > 0.0 && state.s2 > 0.0)) throw ValidationError("simulate: spots must be positive");
  if (!(state.v1 >= 0.0 && state.v2 >= 0.0)) throw ValidationError("simulate: variances must be non-negative");
  const int num = model.numeraire_drift().numeraire;
  const Measure tag = model.measure_tag();
  if ((tag == Measure::Q) != (num == 0) || (tag == Measure::Qhat1 && num != 1) ||
      (tag == Measure::Qhat2 && num != 2)) {
    throw ValidationError("simulate: measure tag does not match its drift rule");
  }
  if (tag == Measure::Q) require_valid(model);
  if (!(min_correlation_eigenvalue(model.corr) >= -1e-12)) {
    throw ValidationError("simulate: correlation matrix is not positive semi-definite");
  }
  const CorrelationStructure& c = model.corr;
  if (cfg.scheme == VarianceScheme::qe && c.rho_z != 0.0) {
    throw ValidationError("simulate: the QE scheme requires rho_z = 0");
  }

  Kernel k;
  k.n_steps = cfg.n_steps;
  k.tau = T - t;
  k.dt = k.tau / cfg.n_steps;
  k.scheme = cfg.scheme;
  k.antithetic = cfg.antithetic;
  k.zero_noise = cfg.zero_noise;
  k.seed = cfg.seed_value();
  k.observe_every = cfg.observe_every;
  for (int i = 0; i < 2; ++i) {
    AssetKernel& a = k.a[i];
    a.d = asset_dynamics(model, i + 1);
    a.x0 = std::log(state.spot(i + 1));
    a.v0 = state.variance(i + 1);
    const double kr = a.d.mean_reversion;
    const double sig = a.d.sigma;
    a.decay = std::exp(-kr * k.dt);
    a.theta = a.d.level / kr;
    a.qe_c1 = sig * sig * a.decay * (1.0 - a.decay) / kr;
    a.qe_c2 = a.theta * sig * sig * (1.0 - a.decay) * (1.0 - a.decay) / (2.0 * kr);
    a.small_sigma = sig < kSmallSigma;
  }

  // (Z1, Z2) = chol(S_ZZ) e_Z; W = M Z + chol(S_WW - M S_ZW) e_W.
  k.rho_z = c.rho_z;
  k.rho_z_comp = std::sqrt(1.0 - c.rho_z * c.rho_z);
  const double det = 1.0 - c.rho_z * c.rho_z;
  const double r1 = c.rho_wz1, r2 = c.rho_wz2;
  k.m[0][0] = r1 / det;
  k.m[0][1] = -r1 * c.rho_z / det;
  k.m[1][0] = -r2 * c.rho_z / det;
  k.m[1][1] = r2 / det;
  const double s11 = 1.0 - r1 * r1 / det;
  const double s22 = 1.0 - r2 * r2 / det;
  const double s12 = c.rho_w + r1 * r2 * c.rho_z / det;
  k.r11 = std::sqrt(std::max(s11, 0.0));
  k.r21 = k.r11 > 0.0 ? s12 / k.r11 : 0.0;
  k.r22 = std::sqrt(std::max(s22 - k.r21 * k.r21, 0.0));
  return k;
}

double qe_step(const AssetKernel& a, double v, double gz) {
  const double m = a.theta + (v - a.theta) * a.decay;
  const double s2 = v * a.qe_c1 + a.qe_c2;
  const double psi = s2 / (m * m);
  if (psi <= 1.5) {
    const double inv = 2.0 / psi;
    const double b2 = inv - 1.0 + std::sqrt(inv) * std::sqrt(inv - 1.0);
    const double scale = m / (1.0 + b2);
    const double b = std::sqrt(b2);
    return scale * (b + gz) * (b + gz);
  }
  const double p = (psi - 1.0) / (psi + 1.0);
  const double beta = (1.0 - p) / m;
  const double u = 0.5 * std::erfc(-gz * std::numbers::sqrt2 / 2.0);
  if (u <= p) return 0.0;
  const double one_minus_u = 0.5 * std::erfc(gz * std::numbers::sqrt2 / 2.0);
  return std::log((1.0 - p) / one_minus_u) / beta;
}

double next_arrival(RandomStream& js, double lambda) {
  return -std::log(js.uniform()) / lambda;
}

void allocate(PathBatch& b, std::int64_t n, int n_dates) {
  const auto sz = static_cast<std::size_t>(n);
  for (auto* v : {&b.x1, &b.x2, &b.v1, &b.v2, &b.ysum1, &b.ysum2, &b.ksum1, &b.ksum2, &b.logu1, &b.logu2}) {
    v->assign(sz, 0.0);
  }
  b.n1.assign(sz, 0);
  b.n2.assign(sz, 0);
  b.n_dates = n_dates;
  const auto osz = sz * static_cast<std::size_t>(n_dates);
  for (auto* v : {&b.obs_s1, &b.obs_s2, &b.obs_v1, &b.obs_v2}) v->assign(osz, 0.0);
  b.obs_n1.assign(osz, 0);
  b.obs_n2.assign(osz, 0);
}

struct Lane {
  double x[2], v[2];
  double logu[2] = {0.0, 0.0}, ysum[2] = {0.0, 0.0}, ksum[2] = {0.0, 0.0};
  int count[2] = {0, 0};
  double next_jump[2];
  RandomStream jumps;

  Lane(const Kernel& k, std::uint64_t path) : jumps(k.seed, path, 1) {
    for (int i = 0; i < 2; ++i) {
      x[i] = k.a[i].x0;
      v[i] = k.a[i].v0;
      const double lam = k.a[i].d.jumps.lambda;
      next_jump[i] = lam > 0.0 ? next_arrival(jumps, lam) : std::numeric_limits<double>::infinity();
    }
  }
};

void observe(const Lane& ln, PathBatch& out, int date, std::int64_t local) {
  const std::size_t o = out.obs(date, local);
  out.obs_s1[o] = std::exp(ln.x[0]);
  out.obs_s2[o] = std::exp(ln.x[1]);
  out.obs_v1[o] = std::max(ln.v[0], 0.0);
  out.obs_v2[o] = std::max(ln.v[1], 0.0);
  out.obs_n1[o] = ln.count[0];
  out.obs_n2[o] = ln.count[1];
}

void advance(const Kernel& k, Lane& ln, const std::array<double, 4>& e, double t_end) {
  const double dt = k.dt;
  const double sqrt_dt = std::sqrt(dt);
  const double gz[2] = {e[0], k.rho_z * e[0] + k.rho_z_comp * e[1]};
  const double res[2] = {k.r11 * e[2], k.r21 * e[2] + k.r22 * e[3]};
  const double vp[2] = {std::max(ln.v[0], 0.0), std::max(ln.v[1], 0.0)};
  const double cross = std::sqrt(vp[0] * vp[1]);
  for (int i = 0; i < 2; ++i) {
    const AssetKernel& a = k.a[i];
    const double gw = k.m[i][0] * gz[0] + k.m[i][1] * gz[1] + res[i];
    const double sv = std::sqrt(vp[i]) * sqrt_dt;
    ln.logu[i] += -0.5 * vp[i] * dt + sv * gw - a.d.compensator * dt;
    const double base = (a.d.log_drift + a.d.cross_coeff * cross) * dt;
    if (k.scheme == VarianceScheme::full_truncation_euler) {
      ln.x[i] += base + a.d.var_coeff * vp[i] * dt + sv * gw;
      ln.v[i] += (a.d.level - a.d.mean_reversion * vp[i]) * dt + a.d.sigma * sv * gz[i];
    } else {
      const double vn = qe_step(a, vp[i], gz[i]);
      const double iv = 0.5 * (vp[i] + vn) * dt;
      const double siv = std::sqrt(iv);
      const double dz = a.small_sigma ? siv * gz[i]
                                      : (vn - vp[i] - a.d.level * dt + a.d.mean_reversion * iv) / a.d.sigma;
      // M is diagonal when rho_z = 0
      ln.x[i] += base + a.d.var_coeff * iv + k.m[i][i] * dz + siv * res[i];
      ln.v[i] = vn;
    }
  }
  for (int i = 0; i < 2; ++i) {
    const JumpSpec& j = k.a[i].d.jumps;
    while (ln.next_jump[i] <= t_end) {
      const double y = j.mu_j + j.sigma_j * ln.jumps.normal();
      ln.x[i] += y;
      ln.logu[i] += y;
      ln.ysum[i] += y;
      ln.ksum[i] += std::expm1(y);
      ++ln.count[i];
      ln.next_jump[i] += next_arrival(ln.jumps, j.lambda);
    }
  }
}

void store(const Lane& ln, PathBatch& out, std::int64_t local) {
  out.x1[local] = ln.x[0];
  out.x2[local] = ln.x[1];
  out.v1[local] = std::max(ln.v[0], 0.0);
  out.v2[local] = std::max(ln.v[1], 0.0);
  out.n1[local] = ln.count[0];
  out.n2[local] = ln.count[1];
  out.ysum1[local] = ln.ysum[0];
  out.ysum2[local] = ln.ysum[1];
  out.ksum1[local] = ln.ksum[0];
  out.ksum2[local] = ln.ksum[1];
  out.logu1[local] = ln.logu[0];
  out.logu2[local] = ln.logu[1];
}

// One diffusion substream drives either a single path or an antithetic pair
// (2u, 2u+1) whose Gaussian draws are negated; jumps stay per path.
void simulate_unit(const Kernel& k, std::uint64_t unit, PathBatch& out) {
  const int n_lanes = k.antithetic ? 2 : 1;
  const std::uint64_t first = k.antithetic ? 2 * unit : unit;
  RandomStream diff(k.seed, unit, 0);
  Lane lanes[2] = {Lane(k, first), Lane(k, first + 1)};
  std::int64_t local[2];
  bool keep[2];
  for (int l = 0; l < 2; ++l) {
    const auto g = static_cast<std::int64_t>(first) + l;
    local[l] = g - out.first_path;
    keep[l] = l < n_lanes && local[l] >= 0 && local[l] < out.n_paths;
  }
  for (int l = 0; l < n_lanes; ++l)
    if (keep[l] && out.n_dates > 0) observe(lanes[l], out, 0, local[l]);

  for (int n = 0; n < k.n_steps; ++n) {
    std::array<double, 4> e{0.0, 0.0, 0.0, 0.0};
    if (!k.zero_noise) e = diff.normals4();
    const double t_end = (n + 1 == k.n_steps) ? k.tau : (n + 1) * k.dt;
    const bool obs_now = k.observe_every > 0 && (n + 1) % k.observe_every == 0;
    for (int l = 0; l < n_lanes; ++l) {
      if (l == 1) {
        for (double& z : e) z = -z;
      }
      advance(k, lanes[l], e, t_end);
      if (obs_now && keep[l]) observe(lanes[l], out, (n + 1) / k.observe_every, local[l]);
    }
  }
  for (int l = 0; l < n_lanes; ++l)
    if (keep[l]) store(lanes[l], out, local[l]);
}

PathBatch run(const MarketModel& model, const MarketState& state, double t, double T, const SimConfig& cfg,
              std::int64_t first_path, std::int64_t count, Exec exec) {
  if (first_path < 0 || count < 0) throw ValidationError("simulate: path range must be non-negative");
  const Kernel k = make_kernel(model, state, t, T, cfg);
  PathBatch b;
  b.measure = model.measure_tag();
  b.seed = k.seed;
  b.first_path = first_path;
  b.n_paths = count;
  b.t0 = t;
  b.dt = k.dt;
  const int n_dates = cfg.observe_every > 0 ? cfg.n_steps / cfg.observe_every + 1 : 0;
  allocate(b, count, n_dates);
  for (int d = 0; d < n_dates; ++d) b.date_time.push_back(t + d * cfg.observe_every * k.dt);
  if (n_dates > 0) b.date_time.back() = (cfg.n_steps % cfg.observe_every == 0) ? T : b.date_time.back();
  if (count == 0) return b;
  const std::int64_t u0 = cfg.antithetic ? first_path / 2 : first_path;
  const std::int64_t u1 = cfg.antithetic ? (first_path + count + 1) / 2 : first_path + count;
  for_each_index(static_cast<std::size_t>(u1 - u0), exec,
                 [&](std::size_t u) { simulate_unit(k, static_cast<std::uint64_t>(u0) + u, b); });
  return b;
}

// Calls f on consecutive chunks covering all cfg.n_paths paths.
void for_each_chunk(const MarketModel& model, const MarketState& state, double t, double T, const SimConfig& cfg,
                    const std::function<void(const PathBatch&)>& f) {
  cfg.validate();
  for (std::int64_t first = 0; first < cfg.n_paths; first += kChunk) {
    const std::int64_t count = std::min<std::int64_t>(kChunk, cfg.n_paths - first);
    f(simulate(model, state, t, T, cfg, first, count));
  }
}

MCEstimate estimate_from(const std::vector<double>& s, bool antithetic) { return reduce_samples(s, antithetic); }

}  // namespace

void SimConfig::validate() const {
  if (n_paths < 1) throw ValidationError("simulation: n_paths must be >= 1");
  if (n_steps < 1) throw ValidationError("simulation: n_steps must be >= 1");
  if (!seed) throw ValidationError("simulation: a seed is required");
  if (antithetic && n_paths % 2 != 0) throw ValidationError("simulation: antithetic runs need an even n_paths");
  if (observe_every < 0) throw ValidationError("simulation: observe_every must be >= 0");
  if (observe_every > 0 && n_steps % observe_every != 0) {
    throw ValidationError("simulation: n_steps must be a multiple of observe_every");
  }
}

std::uint64_t SimConfig::seed_value() const {
  if (!seed) throw ValidationError("simulation: a seed is required");
  return *seed;
}

double PathBatch::s1(std::int64_t p) const { return std::exp(x1[p]); }
double PathBatch::s2(std::int64_t p) const { return std::exp(x2[p]); }

PathBatch simulate_serial(const MarketModel& model, const MarketState& state, double t, double T,
                          const SimConfig& cfg, std::int64_t first_path, std::int64_t count) {
  return run(model, state, t, T, cfg, first_path, count, Exec::serial);
}

PathBatch simulate_omp(const MarketModel& model, const MarketState& state, double t, double T,
                       const SimConfig& cfg, std::int64_t first_path, std::int64_t count) {
  return run(model, state, t, T, cfg, first_path, count, Exec::parallel);
}

PathBatch simulate(const MarketModel& model, const MarketState& state, double t, double T, const SimConfig& cfg,
                   std::int64_t first_path, std::int64_t count) {
  return run(model, state, t, T, cfg, first_path, count, cfg.exec);
}

PathBatch simulate(const MarketModel& model, const MarketState& state, double t, double T, const SimConfig& cfg) {
  cfg.validate();
  return simulate(model, state, t, T, cfg, 0, cfg.n_paths);
}

MCEstimate reduce_samples(const std::vector<double>& samples, bool antithetic) {
  MCEstimate est;
  const std::size_t n = samples.size();
  if (n == 0) return est;
  const std::size_t group = antithetic ? 2 : 1;
  const std::size_t m = n / group;
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double g = 0.0;
    for (std::size_t k = 0; k < group; ++k) g += samples[j * group + k];
    sum += g / group;
  }
  est.mean = sum / m;
  if (m < 2) return est;
  double ss = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double g = 0.0;
    for (std::size_t k = 0; k < group; ++k) g += samples[j * group + k];
    const double d = g / group - est.mean;
    ss += d * d;
  }
  est.stderr_ = std::sqrt(ss / (m - 1) / m);
  return est;
}

std::vector<double> path_samples(const MarketModel& model, const MarketState& state, double t, double T,
                                 const SimConfig& cfg, const PathFunctional& f) {
  cfg.validate();
  std::vector<double> out(static_cast<std::size_t>(cfg.n_paths));
  for_each_chunk(model, state, t, T, cfg, [&](const PathBatch& b) {
    for (std::int64_t p = 0; p < b.n_paths; ++p) out[b.first_path + p] = f(b, p);
  });
  return out;
}

PriceReport price_spread_mc(const MarketModel& model, const MarketState& state, double t, double T, double K,
                            const SimConfig& cfg) {
  if (model.measure_tag() != Measure::Q) throw ValidationError("price_spread_mc: model must be under Q");
  if (!(K >= 0.0)) throw ValidationError("price_spread_mc: strike must be >= 0");
  const double disc = std::exp(-model.r * (T - t));
  const auto s = path_samples(model, state, t, T, cfg, [&](const PathBatch& b, std::int64_t p) {
    return disc * std::max(b.s1(p) - b.s2(p) - K, 0.0);
  });
  const MCEstimate e = estimate_from(s, cfg.antithetic);
  PriceReport rep;
  rep.method = "mc";
  rep.measure = Measure::Q;
  rep.price = rep.raw_price = e.mean;
  rep.stderr_mc = e.stderr_;
  rep.seed = cfg.seed_value();
  return rep;
}

PriceReport price_exchange_mc(const MarketModel& model, const MarketState& state, double t, double T,
                              const SimConfig& cfg) {
  return price_spread_mc(model, state, t, T, 0.0, cfg);
}

MCEstimate qhat_prob(const MarketModel& shifted, const MarketState& state, double t, double T, const SimConfig& cfg) {
  if (shifted.measure_tag() == Measure::Q) {
    throw ValidationError("qhat_prob: model must come from a numeraire shift");
  }
  const auto s = path_samples(shifted, state, t, T, cfg, [](const PathBatch& b, std::int64_t p) {
    return b.x1[p] > b.x2[p] ? 1.0 : 0.0;
  });
  return estimate_from(s, cfg.antithetic);
}

PriceReport price_exchange_mc_decomposed(const MarketModel& model, const MarketState& state, double t, double T,
                                         const SimConfig& cfg) {
  if (model.measure_tag() != Measure::Q) throw ValidationError("decomposition: model must be under Q");
  const double tau = T - t;
  const double w1 = state.s1 * std::exp(-model.asset1.q * tau);
  const double w2 = state.s2 * std::exp(-model.asset2.q * tau);
  auto itm = [](const PathBatch& b, std::int64_t p) { return b.x1[p] > b.x2[p] ? 1.0 : 0.0; };
  const auto a = path_samples(numeraire_shift_1(model), state, t, T, cfg, itm);
  const auto b = path_samples(numeraire_shift_2(model), state, t, T, cfg, itm);
  std::vector<double> diff(a.size());
  for (std::size_t p = 0; p < a.size(); ++p) diff[p] = w1 * a[p] - w2 * b[p];
  const MCEstimate p1 = estimate_from(a, cfg.antithetic);
  const MCEstimate p2 = estimate_from(b, cfg.antithetic);
  const MCEstimate d = estimate_from(diff, cfg.antithetic);
  PriceReport rep;
  rep.method = "mc_decomposition";
  rep.measure = Measure::Q;
  rep.prob1 = p1.mean;
  rep.prob2 = p2.mean;
  rep.prob1_stderr = p1.stderr_;
  rep.prob2_stderr = p2.stderr_;
  rep.term1 = w1 * p1.mean;
  rep.term2 = w2 * p2.mean;
  rep.raw_price = d.mean;
  rep.clamp_flag = d.mean < 0.0;
  rep.price = std::max(0.0, d.mean);
  rep.stderr_mc = d.stderr_;
  rep.seed = cfg.seed_value();
  return rep;
}

MartingaleCheck martingale_check(const MarketModel& model, const MarketState& state, double t, double T,
                                 const SimConfig& cfg) {
  if (model.measure_tag() != Measure::Q) throw ValidationError("martingale_check: model must be under Q");
  cfg.validate();
  const double tau = T - t;
  const auto n = static_cast<std::size_t>(cfg.n_paths);
  std::vector<double> u1(n), u2(n), y1(n), y2(n);
  const double c1 = std::log(state.s1) + (model.r - model.asset1.q) * tau;
  const double c2 = std::log(state.s2) + (model.r - model.asset2.q) * tau;
  for_each_chunk(model, state, t, T, cfg, [&](const PathBatch& b) {
    for (std::int64_t p = 0; p < b.n_paths; ++p) {
      const std::size_t g = b.first_path + p;
      u1[g] = std::exp(b.logu1[p]);
      u2[g] = std::exp(b.logu2[p]);
      y1[g] = std::exp(b.x1[p] - c1);
      y2[g] = std::exp(b.x2[p] - c2);
    }
  });
  return {estimate_from(u1, cfg.antithetic), estimate_from(u2, cfg.antithetic), estimate_from(y1, cfg.antithetic),
          estimate_from(y2, cfg.antithetic)};
}

std::array<MCEstimate, 2> jump_moment_check(const MarketModel& model, const MarketState& state, double t, double T,
                                            const SimConfig& cfg) {
  cfg.validate();
  const double tau = T - t;
  const auto n = static_cast<std::size_t>(cfg.n_paths);
  std::vector<double> k1(n), k2(n);
  const double l1 = asset_dynamics(model, 1).jumps.lambda * tau;
  const double l2 = asset_dynamics(model, 2).jumps.lambda * tau;
  for_each_chunk(model, state, t, T, cfg, [&](const PathBatch& b) {
    for (std::int64_t p = 0; p < b.n_paths; ++p) {
      k1[b.first_path + p] = l1 > 0 ? b.ksum1[p] / l1 : 0.0;
      k2[b.first_path + p] = l2 > 0 ? b.ksum2[p] / l2 : 0.0;
    }
  });
  // jump draws are not antithetic, so every path is an independent sample
  return {estimate_from(k1, false), estimate_from(k2, false)};
}

CFEstimate mc_characteristic(const MarketModel& model, const MarketState& state, double t, double T, double u1,
                             double u2, const SimConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_paths);
  std::vector<double> re(n), im(n);
  for_each_chunk(model, state, t, T, cfg, [&](const PathBatch& b) {
    for (std::int64_t p = 0; p < b.n_paths; ++p) {
      const double ph = u1 * b.x1[p] + u2 * b.x2[p];
      re[b.first_path + p] = std::cos(ph);
      im[b.first_path + p] = std::sin(ph);
    }
  });
  const MCEstimate r = estimate_from(re, cfg.antithetic);
  const MCEstimate i = estimate_from(im, cfg.antithetic);
  return {{r.mean, i.mean}, r.stderr_, i.stderr_};
}

void dump_paths(std::ostream& os, const MarketModel& model, const MarketState& state, double t, double T,
                const SimConfig& cfg, std::int64_t n) {
  SimConfig c = cfg;
  c.observe_every = 1;
  c.n_paths = std::max<std::int64_t>(n + (c.antithetic ? n % 2 : 0), 1);
  const PathBatch b = simulate(model, state, t, T, c, 0, n);
  os << "path_id,step,S1,S2,v1,v2,N1,N2\n";
  for (std::int64_t p = 0; p < n; ++p) {
    for (int d = 0; d < b.n_dates; ++d) {
      const std::size_t o = b.obs(d, p);
      os << p << ',' << d << ',' << format_double(b.obs_s1[o]) << ',' << format_double(b.obs_s2[o]) << ','
         << format_double(b.obs_v1[o]) << ',' << format_double(b.obs_v2[o]) << ',' << b.obs_n1[o] << ','
         << b.obs_n2[o] << '\n';
    }
  }
}

}  // namespace svjd
