#include "svjd/charfn.hpp"

#include <cmath>
#include <numbers>

#include "svjd/errors.hpp"
#include "svjd/measure.hpp"

namespace svjd {

namespace {

const cplx I{0.0, 1.0};

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// log1p(w) / w, accurate for small |w| (Kahan).
cplx log1p_ratio(cplx w) {
  const cplx u = 1.0 + w;
  if (u == cplx(1.0)) return 1.0;
  return std::log(u) / (u - 1.0);
}

// log(1 - g e^{-gamma s}) - log(1 - g), continued along [0, s]. Only called
// when |g| >= 1, where the principal branch can jump.
cplx unwrapped_log_ratio(cplx g, cplx gamma, double s) {
  constexpr int n = 256;
  const cplx base = std::log(1.0 - g);
  cplx prev = base;
  double turns = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double tau = s * k / n;
    const cplx cur = std::log(1.0 - g * std::exp(-gamma * tau));
    const double jump = cur.imag() - prev.imag();
    if (jump > std::numbers::pi) turns -= 1.0;
    else if (jump < -std::numbers::pi) turns += 1.0;
    prev = cur;
  }
  return prev + cplx(0.0, 2.0 * std::numbers::pi * turns) - base;
}

struct AssetParts {
  cplx gamma, D, C;
};

// Exponents for one asset: dX = (c + b v) dt + sqrt(v) dW, dv = (level - k v) dt + sigma sqrt(v) dZ.
AssetParts asset_parts(const AssetDynamics& d, double s, cplx u) {
  const cplx a = u * u - 2.0 * I * d.var_coeff * u;
  const double sig = d.sigma;
  const cplx beta = d.mean_reversion - I * u * d.rho_wz * sig;
  const cplx gamma = std::sqrt(sig * sig * a + beta * beta);
  const cplx bg = beta + gamma;
  if (std::abs(bg) < 1e-300 || std::abs(gamma) < 1e-14) {
    throw DomainError("riccati: degenerate discriminant at this argument (gamma or beta+gamma ~ 0)");
  }
  AssetParts p;
  p.gamma = gamma;
  if (a == cplx(0.0)) {
    p.D = 0.0;
    p.C = I * u * d.log_drift * s;
    return p;
  }
  const cplx ghat = -a / (bg * bg);  // g / sigma^2
  const cplx g = sig * sig * ghat;
  const cplx e = std::exp(-gamma * s);
  p.D = -a / bg * (1.0 - e) / (1.0 - g * e);

  cplx vol;
  if (std::abs(g) < 1.0) {
    vol = -a * s / bg + 2.0 * ghat * (e * log1p_ratio(-g * e) - log1p_ratio(-g));
  } else {
    vol = -a * s / bg - 2.0 / (sig * sig) * unwrapped_log_ratio(g, gamma, s);
  }
  p.C = I * u * d.log_drift * s + d.level * vol;
  if (!finite(p.D) || !finite(p.C)) {
    throw DomainError("riccati: non-finite exponent; argument outside the evaluable strip");
  }
  return p;
}

}  // namespace

cplx phi_jump(const JumpSpec& jump, cplx u) {
  return std::exp(I * u * jump.mu_j - 0.5 * jump.sigma_j * jump.sigma_j * u * u);
}

void require_independent_volatility(const MarketModel& model) {
  if (model.corr.rho_w != 0.0) {
    throw ValidationError("closed-form joint CF requires rho_w = 0 (independent volatility case)");
  }
  if (model.corr.rho_z != 0.0) {
    throw ValidationError("closed-form joint CF requires rho_z = 0 (independent volatility case)");
  }
}

RiccatiParts riccati(const MarketModel& model, double s, cplx u1, cplx u2) {
  if (!(s >= 0.0)) throw ValidationError("riccati: horizon must be non-negative");
  RiccatiParts out;
  out.s = s;
  if (s == 0.0) return out;
  const cplx us[2] = {u1, u2};
  for (int i = 0; i < 2; ++i) {
    const AssetParts p = asset_parts(asset_dynamics(model, i + 1), s, us[i]);
    out.gamma[i] = p.gamma;
    out.D[i] = p.D;
    out.C += p.C;
  }
  return out;
}

cplx log_phi_joint(const MarketModel& model, const MarketState& state, double t, double T, cplx u1, cplx u2) {
  require_independent_volatility(model);
  if (!(t >= 0.0 && T >= t)) throw ValidationError("phi_joint: requires 0 <= t <= T");
  const double s = T - t;
  const RiccatiParts rp = riccati(model, s, u1, u2);
  cplx lp = I * (u1 * std::log(state.s1) + u2 * std::log(state.s2)) + rp.C + rp.D[0] * state.v1 +
            rp.D[1] * state.v2;
  const cplx us[2] = {u1, u2};
  for (int i = 0; i < 2; ++i) {
    const JumpSpec j = asset_dynamics(model, i + 1).jumps;
    if (j.lambda > 0.0 && us[i] != cplx(0.0)) lp += j.lambda * s * (phi_jump(j, us[i]) - 1.0);
  }
  if (!finite(lp)) throw DomainError("phi_joint: non-finite log CF; argument outside the evaluable strip");
  return lp;
}

CFValue phi_joint(const MarketModel& model, const MarketState& state, double t, double T, cplx u1, cplx u2) {
  CFValue cf;
  cf.log_value = log_phi_joint(model, state, t, T, u1, u2);
  cf.value = std::exp(cf.log_value);
  cf.u1 = u1;
  cf.u2 = u2;
  cf.horizon = T - t;
  cf.state = state;
  cf.measure = model.measure_tag();
  return cf;
}

}  // namespace svjd
