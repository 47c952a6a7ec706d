#include "svjd/american.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <functional>

#include "svjd/charfn.hpp"
#include "svjd/errors.hpp"
#include "svjd/fourier.hpp"
#include "svjd/measure.hpp"

namespace svjd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kChunk = 1 << 15;
constexpr int kMaxDegree = 5;  // 56 basis functions

struct Hermite {
  std::vector<double> x, w;  // E[f(Z)] ~ sum w f(x), Z standard normal
};

// Golub-Welsch for the probabilists' Hermite weight.
Hermite hermite_rule(int n) {
  Hermite h;
  if (n <= 1) {
    h.x = {0.0};
    h.w = {1.0};
    return h;
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  for (int k = 0; k < n; ++k) {
    h.x.push_back(es.eigenvalues()(k));
    const double v = es.eigenvectors()(0, k);
    h.w.push_back(v * v);
  }
  return h;
}

double ref_variance(double v, double fallback) { return v > 1e-12 ? v : std::max(fallback, 1e-12); }

SimConfig sim_config(const LSMConfig& cfg, int dates, std::int64_t n_paths) {
  SimConfig sc;
  sc.n_paths = n_paths;
  sc.n_steps = dates * cfg.steps_per_date;
  sc.seed = cfg.seed;
  sc.scheme = cfg.scheme;
  sc.exec = cfg.exec;
  sc.observe_every = cfg.steps_per_date;
  return sc;
}

// Calls f on chunks of paths [first, first + n).
void for_chunks(const MarketModel& model, const MarketState& state, double t, double T, const SimConfig& sc,
                std::int64_t first, std::int64_t n, const std::function<void(const PathBatch&)>& f) {
  for (std::int64_t done = 0; done < n; done += kChunk) {
    const std::int64_t count = std::min(kChunk, n - done);
    f(simulate(model, state, t, T, sc, first + done, count));
  }
}

struct Fit {
  std::vector<double> coef;
  bool rank_deficient = false;
};

Fit regress(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  Fit f;
  f.coef.assign(X.cols(), 0.0);
  if (X.rows() == 0) return f;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  f.rank_deficient = qr.rank() < X.cols();
  const Eigen::VectorXd c = qr.solve(y);
  for (int k = 0; k < X.cols(); ++k) f.coef[k] = std::isfinite(c(k)) ? c(k) : 0.0;
  return f;
}

double dot(const std::vector<double>& c, const double* phi) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * phi[k];
  return s;
}

PriceReport european_price(const MarketModel& model, const MarketState& state, double t, double T,
                           const LSMConfig& cfg) {
  if (model.corr.rho_w == 0.0 && model.corr.rho_z == 0.0) return exchange_price(model, state, t, T);
  SimConfig sc = sim_config(cfg, cfg.dates, cfg.paths);
  sc.observe_every = 0;
  return price_exchange_mc(model, state, t, T, sc);
}

// Coefficients c[0..degree] of the surface at `date` as a polynomial in the
// log-ratio, with the variance monomials folded in.
void log_ratio_poly(const ContinuationSurface& s, int date, double v1, double v2, double* c) {
  const int deg = s.degree;
  for (int e = 0; e <= deg; ++e) c[e] = 0.0;
  if (date >= static_cast<int>(s.coef.size())) return;
  const double b = v1 / s.v1_ref, cc = v2 / s.v2_ref;
  double pb[kMaxDegree + 1], pc[kMaxDegree + 1];
  pb[0] = pc[0] = 1.0;
  for (int e = 1; e <= deg; ++e) {
    pb[e] = pb[e - 1] * b;
    pc[e] = pc[e - 1] * cc;
  }
  const std::vector<double>& w = s.coef[date];
  int k = 0;
  for (int total = 0; total <= deg; ++total) {
    for (int i = total; i >= 0; --i) {
      for (int j = total - i; j >= 0; --j) c[i] += w[k++] * pb[j] * pc[total - i - j];
    }
  }
}

// Value of C^A - (S1 - S2) after a jump, in units of the pre-jump S2, summed
// over the Hermite nodes; zero unless the jump lands in the continuation region.
struct JumpCost {
  int degree = 0;
  JumpSpec law[2];
  bool active[2] = {false, false};
  // per asset: log-ratio shift, ratio factor, S2 factor and weight of each node
  std::vector<double> shift[2], factor[2], s2_factor[2], weight[2];
  double min_shift[2] = {0.0, 0.0};

  // poly: surface coefficients in the log-ratio (see log_ratio_poly).
  double operator()(int asset, double log_ratio, double ratio, double log_b, const double* poly) const {
    const double log_cut = log_b - log_ratio;  // continuation iff shift < log_cut
    if (!(min_shift[asset] < log_cut)) return 0.0;
    double acc = 0.0;
    for (std::size_t n = 0; n < shift[asset].size(); ++n) {
      if (!(shift[asset][n] < log_cut)) continue;
      const double post = ratio * factor[asset][n];
      const double a = log_ratio + shift[asset][n];
      double cont = poly[degree];
      for (int e = degree - 1; e >= 0; --e) cont = cont * a + poly[e];
      const double va = std::max(cont, std::max(post - 1.0, 0.0));
      acc += weight[asset][n] * s2_factor[asset][n] * (va - (post - 1.0));
    }
    return acc;
  }
};

JumpCost make_jump_cost(const MarketModel& model, const ContinuationSurface& s, int nodes) {
  JumpCost jc;
  jc.degree = s.degree;
  for (int i = 0; i < 2; ++i) {
    jc.law[i] = asset_dynamics(model, i + 1).jumps;
    jc.active[i] = jc.law[i].lambda > 0.0;
    const Hermite rule = hermite_rule(jc.law[i].sigma_j > 0.0 ? nodes : 1);
    for (std::size_t n = 0; n < rule.x.size(); ++n) {
      const double y = jc.law[i].mu_j + jc.law[i].sigma_j * rule.x[n];
      // asset 1 jump multiplies the ratio by e^y; asset 2 divides it and scales S2
      const double sh = i == 0 ? y : -y;
      jc.shift[i].push_back(sh);
      jc.factor[i].push_back(std::exp(sh));
      jc.s2_factor[i].push_back(i == 0 ? 1.0 : std::exp(y));
      jc.weight[i].push_back(rule.w[n]);
    }
    jc.min_shift[i] = *std::min_element(jc.shift[i].begin(), jc.shift[i].end());
  }
  return jc;
}

}  // namespace

double BoundaryCurve::at(double time) const {
  if (t.empty()) throw ValidationError("boundary: empty grid");
  if (time <= t.front()) return B.front();
  if (time >= t.back()) return B.back();
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const std::size_t k = static_cast<std::size_t>(it - t.begin());
  const double w = (time - t[k - 1]) / (t[k] - t[k - 1]);
  if (std::isinf(B[k - 1]) || std::isinf(B[k])) return w < 1.0 ? B[k - 1] : B[k];
  return B[k - 1] + w * (B[k] - B[k - 1]);
}

void BoundaryCurve::validate(double t0, double T) const {
  if (t.size() < 2 || t.size() != B.size()) throw ValidationError("boundary: needs matching t and B with >= 2 nodes");
  const double tol = 1e-9 * std::max(1.0, T);
  if (t.front() > t0 + tol || t.back() < T - tol) {
    throw ValidationError("boundary: grid does not cover [t, T]");
  }
  for (std::size_t k = 0; k < B.size(); ++k) {
    if (!(B[k] >= 1.0)) throw ValidationError("boundary: B must be >= 1 at every node");
    if (k > 0 && !(t[k] > t[k - 1])) throw ValidationError("boundary: grid must be increasing");
  }
}

double terminal_boundary(double q1, double q2) {
  if (q1 <= 0.0) return kInf;
  return std::max(1.0, q2 / q1);
}

void LSMConfig::validate() const {
  if (degree < 2 || degree > kMaxDegree) throw ValidationError("american: basis degree must be in [2, 5]");
  if (dates < 10) throw ValidationError("american: at least 10 exercise dates required");
  if (steps_per_date < 1) throw ValidationError("american: steps_per_date must be >= 1");
  if (paths < 2 || training_paths < 2 || boundary_paths < 2) {
    throw ValidationError("american: path counts must be >= 2");
  }
  if (!seed) throw ValidationError("american: a seed is required");
  if (hermite_nodes < 1) throw ValidationError("american: hermite_nodes must be >= 1");
}

int basis_size(int degree) { return (degree + 1) * (degree + 2) * (degree + 3) / 6; }

void basis(int degree, double a, double b, double c, double* out) {
  if (degree < 0 || degree > kMaxDegree) throw ValidationError("basis: degree out of range");
  double pa[kMaxDegree + 1], pb[kMaxDegree + 1], pc[kMaxDegree + 1];
  pa[0] = pb[0] = pc[0] = 1.0;
  for (int e = 1; e <= degree; ++e) {
    pa[e] = pa[e - 1] * a;
    pb[e] = pb[e - 1] * b;
    pc[e] = pc[e - 1] * c;
  }
  int k = 0;
  for (int total = 0; total <= degree; ++total) {
    for (int i = total; i >= 0; --i) {
      for (int j = total - i; j >= 0; --j) {
        const int l = total - i - j;
        out[k++] = pa[i] * pb[j] * pc[l];
      }
    }
  }
}

double ContinuationSurface::value_over_s2(int date, double ratio, double v1, double v2) const {
  if (date >= static_cast<int>(coef.size())) return std::max(ratio - 1.0, 0.0);
  double phi[64];
  basis(degree, std::log(ratio), v1 / v1_ref, v2 / v2_ref, phi);
  return dot(coef[date], phi);
}

LSMResult lsm_price(const MarketModel& model, const MarketState& state, double t, double T, const LSMConfig& cfg) {
  cfg.validate();
  if (model.measure_tag() != Measure::Q) throw ValidationError("lsm_price: model must be under Q");
  const int M = cfg.dates;
  const int nb = basis_size(cfg.degree);
  const SimConfig sc = sim_config(cfg, M, cfg.training_paths);
  const double dt_date = (T - t) / M;
  const double disc_step = std::exp(-model.r * dt_date);

  LSMResult res;
  ContinuationSurface& surf = res.surface;
  surf.degree = cfg.degree;
  surf.v1_ref = ref_variance(state.v1, model.asset1.vol.eta);
  surf.v2_ref = ref_variance(state.v2, model.asset2.vol.eta);
  for (int d = 0; d <= M; ++d) surf.date_time.push_back(t + d * dt_date);
  surf.coef.assign(M, std::vector<double>(nb, 0.0));
  std::vector<std::vector<double>> ex_coef(M, std::vector<double>(nb, 0.0));

  const PathBatch train = simulate(model, state, t, T, sc, 0, cfg.training_paths);
  const std::int64_t n = train.n_paths;
  std::vector<double> y(n);
  for (std::int64_t p = 0; p < n; ++p) {
    const std::size_t o = train.obs(M, p);
    y[p] = std::max(train.obs_s1[o] - train.obs_s2[o], 0.0);
  }

  Eigen::MatrixXd X(n, nb);
  Eigen::VectorXd target(n);
  double phi[64];
  for (int d = M - 1; d >= 1; --d) {
    for (auto& v : y) v *= disc_step;
    std::vector<std::int64_t> itm;
    for (std::int64_t p = 0; p < n; ++p) {
      const std::size_t o = train.obs(d, p);
      const double s2 = train.obs_s2[o];
      const double ratio = train.obs_s1[o] / s2;
      basis(cfg.degree, std::log(ratio), train.obs_v1[o] / surf.v1_ref, train.obs_v2[o] / surf.v2_ref, phi);
      for (int k = 0; k < nb; ++k) X(p, k) = phi[k];
      target(p) = y[p] / s2;
      if (ratio > 1.0) itm.push_back(p);
    }
    const Fit all = regress(X, target);
    surf.coef[d] = all.coef;
    res.rank_deficient = res.rank_deficient || all.rank_deficient;

    Eigen::MatrixXd Xi(static_cast<Eigen::Index>(itm.size()), nb);
    Eigen::VectorXd yi(static_cast<Eigen::Index>(itm.size()));
    for (std::size_t r = 0; r < itm.size(); ++r) {
      Xi.row(r) = X.row(itm[r]);
      yi(r) = target(itm[r]);
    }
    const Fit ex = regress(Xi, yi);
    ex_coef[d] = ex.coef;
    res.rank_deficient = res.rank_deficient || (ex.rank_deficient && !itm.empty());
    for (std::int64_t p : itm) {
      const std::size_t o = train.obs(d, p);
      const double s2 = train.obs_s2[o];
      const double intrinsic = train.obs_s1[o] / s2 - 1.0;
      for (int k = 0; k < nb; ++k) phi[k] = X(p, k);
      if (intrinsic >= dot(ex.coef, phi)) y[p] = s2 * intrinsic;
    }
  }
  surf.coef[0] = surf.coef[1];

  // Forward pass on independent paths with the learned policy.
  std::vector<double> samples(static_cast<std::size_t>(cfg.paths));
  SimConfig pc = sim_config(cfg, M, cfg.training_paths + cfg.paths);
  for_chunks(model, state, t, T, pc, cfg.training_paths, cfg.paths, [&](const PathBatch& b) {
    double ph[64];
    for (std::int64_t p = 0; p < b.n_paths; ++p) {
      double cash = 0.0;
      int when = M;
      for (int d = 1; d < M; ++d) {
        const std::size_t o = b.obs(d, p);
        const double ratio = b.obs_s1[o] / b.obs_s2[o];
        if (ratio <= 1.0) continue;
        basis(cfg.degree, std::log(ratio), b.obs_v1[o] / surf.v1_ref, b.obs_v2[o] / surf.v2_ref, ph);
        if (ratio - 1.0 >= dot(ex_coef[d], ph)) {
          when = d;
          cash = b.obs_s1[o] - b.obs_s2[o];
          break;
        }
      }
      if (when == M) {
        const std::size_t o = b.obs(M, p);
        cash = std::max(b.obs_s1[o] - b.obs_s2[o], 0.0);
      }
      samples[b.first_path - cfg.training_paths + p] = cash * std::exp(-model.r * when * dt_date);
    }
  });
  const MCEstimate e = reduce_samples(samples, false);
  PriceReport& rep = res.report;
  rep.method = "lsm";
  rep.measure = Measure::Q;
  const double intrinsic_now = std::max(state.s1 - state.s2, 0.0);
  rep.raw_price = std::max(e.mean, intrinsic_now);
  rep.price = rep.raw_price;
  rep.stderr_mc = e.stderr_;
  rep.seed = cfg.seed;
  return res;
}

EEPResult eep_decomposition(const MarketModel& model, const MarketState& state, double t, double T,
                            const BoundaryCurve& boundary, const LSMConfig& cfg) {
  const LSMResult lsm = lsm_price(model, state, t, T, cfg);
  return eep_decomposition(model, state, t, T, boundary, cfg, lsm.surface);
}

EEPResult eep_decomposition(const MarketModel& model, const MarketState& state, double t, double T,
                            const BoundaryCurve& boundary, const LSMConfig& cfg, const ContinuationSurface& surface) {
  cfg.validate();
  if (model.measure_tag() != Measure::Q) throw ValidationError("eep_decomposition: model must be under Q");
  boundary.validate(t, T);
  const int M = cfg.dates;
  if (static_cast<int>(surface.date_time.size()) != M + 1) {
    throw ValidationError("eep_decomposition: value surface dates do not match the exercise grid");
  }
  const double dt_date = (T - t) / M;
  const double q1 = model.asset1.q, q2 = model.asset2.q;
  std::vector<double> b(M + 1), w(M + 1), disc(M + 1);
  for (int d = 0; d <= M; ++d) {
    b[d] = boundary.at(t + d * dt_date);
    w[d] = (d == 0 || d == M) ? 0.5 * dt_date : dt_date;
    disc[d] = std::exp(-model.r * d * dt_date);
  }
  const JumpCost jc = make_jump_cost(model, surface, cfg.hermite_nodes);

  const auto n = static_cast<std::size_t>(cfg.paths);
  std::vector<double> diff(n), j1(n), j2(n), total(n);
  // path ids past the LSM training and pricing sets
  const std::int64_t first = cfg.training_paths + cfg.paths;
  const SimConfig sc = sim_config(cfg, M, first + cfg.paths);
  for_chunks(model, state, t, T, sc, first, cfg.paths, [&](const PathBatch& pb) {
    for (std::int64_t p = 0; p < pb.n_paths; ++p) {
      double sd = 0.0, s1 = 0.0, s2 = 0.0;
      for (int d = 0; d <= M; ++d) {
        if (std::isinf(b[d])) continue;
        const std::size_t o = pb.obs(d, p);
        const double S1 = pb.obs_s1[o], S2 = pb.obs_s2[o];
        const double ratio = S1 / S2;
        if (!(ratio >= b[d])) continue;
        const double wd = w[d] * disc[d];
        sd += wd * (q1 * S1 - q2 * S2);
        if (!jc.active[0] && !jc.active[1]) continue;
        double poly[kMaxDegree + 1];
        log_ratio_poly(surface, d, pb.obs_v1[o], pb.obs_v2[o], poly);
        const double lr = std::log(ratio), lb = std::log(b[d]);
        if (jc.active[0]) s1 -= wd * jc.law[0].lambda * S2 * jc(0, lr, ratio, lb, poly);
        if (jc.active[1]) s2 -= wd * jc.law[1].lambda * S2 * jc(1, lr, ratio, lb, poly);
      }
      const std::size_t g = static_cast<std::size_t>(pb.first_path - first + p);
      diff[g] = sd;
      j1[g] = s1;
      j2[g] = s2;
      total[g] = sd + s1 + s2;
    }
  });

  EEPResult res;
  const PriceReport eu = european_price(model, state, t, T, cfg);
  res.european = eu.price;
  res.premium = reduce_samples(total, false);
  res.premium_diffusive = reduce_samples(diff, false);
  res.premium_jump1 = reduce_samples(j1, false);
  res.premium_jump2 = reduce_samples(j2, false);
  PriceReport& rep = res.report;
  rep.method = "eep";
  rep.measure = Measure::Q;
  rep.term1 = res.european;
  rep.term2 = res.premium.mean;
  rep.raw_price = res.european + res.premium.mean;
  rep.price = std::max(0.0, rep.raw_price);
  rep.clamp_flag = rep.raw_price < 0.0;
  rep.stderr_mc = res.premium.stderr_;
  rep.quad_err = eu.quad_err;
  rep.seed = cfg.seed;
  return res;
}

BoundaryCurve solve_boundary(const MarketModel& model, const MarketState& state, double T, const LSMConfig& cfg) {
  cfg.validate();
  if (model.asset1.q <= 0.0) {
    return solve_boundary(model, state, T, cfg, ContinuationSurface{});
  }
  const LSMResult lsm = lsm_price(model, state, 0.0, T, cfg);
  return solve_boundary(model, state, T, cfg, lsm.surface);
}

BoundaryCurve solve_boundary(const MarketModel& model, const MarketState& state, double T, const LSMConfig& cfg,
                             const ContinuationSurface& surface) {
  cfg.validate();
  if (model.measure_tag() != Measure::Q) throw ValidationError("solve_boundary: model must be under Q");
  require_valid(model);
  if (!(T > 0.0)) throw ValidationError("solve_boundary: requires T > 0");
  const int M = cfg.dates;
  const double dt_date = T / M;
  const double q1 = model.asset1.q, q2 = model.asset2.q;

  BoundaryCurve curve;
  curve.t.resize(M + 1);
  curve.B.assign(M + 1, kInf);
  curve.residual.assign(M + 1, 0.0);
  for (int k = 0; k <= M; ++k) curve.t[k] = k * dt_date;
  curve.B[M] = terminal_boundary(q1, q2);
  if (std::isinf(curve.B[M])) return curve;  // no dividend on asset 1: never exercise early

  if (static_cast<int>(surface.date_time.size()) != M + 1) {
    throw ValidationError("solve_boundary: value surface dates do not match the exercise grid");
  }
  const JumpCost jc = make_jump_cost(model, surface, std::min(cfg.hermite_nodes, 8));
  const AssetDynamics d1 = asset_dynamics(model, 1), d2 = asset_dynamics(model, 2);
  auto mean_var = [](const AssetDynamics& d, double v0, double time) {
    const double th = d.level / d.mean_reversion;
    return th + (v0 - th) * std::exp(-d.mean_reversion * time);
  };

  const std::int64_t np = cfg.boundary_paths;
  for (int k = M - 1; k >= 0; --k) {
    const double tk = curve.t[k];
    const int nd = M - k;  // dates after the node
    MarketState node{1.0, 1.0, mean_var(d1, state.v1, tk), mean_var(d2, state.v2, tk)};

    // Paths from the node; S1 scales linearly with the candidate boundary.
    const bool jumps = jc.active[0] || jc.active[1];
    const std::size_t npoly = static_cast<std::size_t>(surface.degree) + 1;
    std::vector<double> ratio(static_cast<std::size_t>(np) * nd), s2(ratio.size()), log_ratio(ratio.size());
    std::vector<double> poly(jumps ? ratio.size() * npoly : 0);
    const std::int64_t first = cfg.training_paths + 2 * cfg.paths + static_cast<std::int64_t>(k) * np;
    const SimConfig sc = sim_config(cfg, nd, first + np);
    for_chunks(model, node, tk, T, sc, first, np, [&](const PathBatch& pb) {
      for (std::int64_t p = 0; p < pb.n_paths; ++p) {
        for (int j = 1; j <= nd; ++j) {
          const std::size_t o = pb.obs(j, p);
          const std::size_t idx = static_cast<std::size_t>(pb.first_path - first + p) * nd + (j - 1);
          ratio[idx] = pb.obs_s1[o] / pb.obs_s2[o];
          s2[idx] = pb.obs_s2[o];
          log_ratio[idx] = std::log(ratio[idx]);
          if (jumps) log_ratio_poly(surface, k + j, pb.obs_v1[o], pb.obs_v2[o], &poly[idx * npoly]);
        }
      }
    });

    std::vector<double> wj(nd + 1, 0.0), log_b(nd + 1, 0.0);
    for (int j = 1; j <= nd; ++j) {
      log_b[j] = std::log(curve.B[k + j]);
      const double wt = (nd == 1) ? 0.0 : ((j == 1 || j == nd) ? 0.5 : 1.0) * dt_date;
      wj[j] = wt * std::exp(-model.r * j * dt_date);
    }

    MarketState eu_state = node;
    auto f = [&](double B) {
      eu_state.s1 = B;
      const double log_B = std::log(B);
      const double ce = exchange_price(model, eu_state, tk, T).price;
      double prem = 0.0;
      for (std::int64_t p = 0; p < np; ++p) {
        for (int j = 1; j <= nd; ++j) {
          const double bj = curve.B[k + j];
          if (std::isinf(bj) || wj[j] == 0.0) continue;
          const std::size_t idx = static_cast<std::size_t>(p) * nd + (j - 1);
          const double r = B * ratio[idx];
          if (!(r >= bj)) continue;
          const double S2 = s2[idx];
          double term = q1 * r * S2 - q2 * S2;
          if (jumps) {
            const double lr = log_B + log_ratio[idx];
            const double* c = &poly[idx * npoly];
            if (jc.active[0]) term -= jc.law[0].lambda * S2 * jc(0, lr, r, log_b[j], c);
            if (jc.active[1]) term -= jc.law[1].lambda * S2 * jc(1, lr, r, log_b[j], c);
          }
          prem += wj[j] * term;
        }
      }
      prem /= static_cast<double>(np);
      return (B - 1.0) - ce - prem;
    };

    double lo = 1.0;
    double flo = f(lo);
    if (flo >= 0.0) {
      curve.B[k] = 1.0;
      curve.residual[k] = flo;
      continue;
    }
    double hi = std::isinf(curve.B[k + 1]) ? 2.0 : std::max(curve.B[k + 1], 1.0 + 1e-3);
    double fhi = f(hi);
    int expand = 0;
    while (fhi <= 0.0) {
      lo = hi;
      flo = fhi;
      hi *= 2.0;
      fhi = f(hi);
      if (++expand > 20) {
        throw ConvergenceError("solve_boundary: no sign change for B up to " + format_double(hi) +
                               " at t = " + format_double(tk));
      }
    }
    // root in log B
    auto g = [&](double x) { return f(std::exp(x)); };
    std::uintmax_t max_iter = 60;
    const auto root = boost::math::tools::toms748_solve(g, std::log(lo), std::log(hi), flo, fhi,
                                                       boost::math::tools::eps_tolerance<double>(30), max_iter);
    lo = std::exp(root.first);
    hi = std::exp(root.second);
    curve.B[k] = std::sqrt(lo * hi);
    curve.residual[k] = f(curve.B[k]);
  }
  return curve;
}

}  // namespace svjd
