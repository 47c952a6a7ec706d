#include "svjd/measure.hpp"

#include <cmath>

#include "svjd/errors.hpp"

namespace svjd {

struct MeasureAccess {
  static void set(MarketModel& m, Measure tag, const NumeraireDrift& drift) {
    m.measure_ = tag;
    m.drift_ = drift;
  }
};

JumpSpec tilt_jump(const JumpSpec& jump, double gamma, double nu) {
  if (gamma == 0.0 && nu == 0.0) return jump;
  const double s2 = jump.sigma_j * jump.sigma_j;
  JumpSpec out = jump;
  out.lambda = jump.lambda * std::exp(nu + gamma * jump.mu_j + 0.5 * gamma * gamma * s2);
  out.mu_j = jump.mu_j + gamma * s2;
  return out;
}

JumpSpec active_jump(const AssetParams& asset) {
  return tilt_jump(asset.jump, asset.tilt.gamma, asset.tilt.nu);
}

MeasureShift MeasureShift::from_model(const MarketModel& model) {
  MeasureShift s;
  for (int i = 1; i <= 2; ++i) {
    s.gamma[i - 1] = model.asset(i).tilt.gamma;
    s.nu[i - 1] = model.asset(i).tilt.nu;
  }
  return s;
}

double MeasureShift::tilted_intensity(const MarketModel& model, int asset) const {
  return tilt_jump(model.asset(asset).jump, gamma[asset - 1], nu[asset - 1]).lambda;
}

double risk_neutral_drift(const MarketModel& model, int asset) {
  if (model.measure_tag() != Measure::Q) {
    throw ValidationError("risk_neutral_drift: model must be under Q");
  }
  const JumpSpec j = active_jump(model.asset(asset));
  return model.r - model.asset(asset).q - j.lambda * kappa(j);
}

MarketModel numeraire_shift(const MarketModel& model, int n) {
  if (n != 1 && n != 2) throw ValidationError("numeraire_shift: numeraire must be 1 or 2");
  if (model.measure_tag() != Measure::Q) {
    throw ValidationError("numeraire_shift: input model must be under Q");
  }
  if (model.corr.rho_z != 0.0) {
    throw ValidationError("numeraire_shift: requires rho_z = 0");
  }
  require_valid(model);

  const AssetParams& num = model.asset(n);
  const double rho_wz = model.corr.rho_wz(n);
  const double kappa_hat = num.vol.mean_reversion() - num.vol.sigma * rho_wz;
  if (!(kappa_hat > 0.0)) {
    throw ValidationError("numeraire_shift: xi + lambda_rp - sigma*rho_wz must be positive");
  }

  MarketModel out = model;
  NumeraireDrift drift;
  drift.numeraire = n;
  const CorrelationMatrix sigma = model.corr.matrix();
  for (int k = 0; k < 4; ++k) drift.wiener_coeff[k] = sigma[k][n - 1];
  for (int i = 1; i <= 2; ++i) {
    const JumpSpec q = active_jump(model.asset(i));
    drift.compensator[i - 1] = q.lambda * kappa(q);
    AssetParams& a = out.asset(i);
    a.jump = (i == n) ? tilt_jump(q, 1.0, 0.0) : q;
    a.tilt = {};
  }

  VolParams& v = out.asset(n).vol;
  const double level = num.vol.level();
  v.xi = kappa_hat;
  v.lambda_rp = 0.0;
  v.eta = level / kappa_hat;

  MeasureAccess::set(out, n == 1 ? Measure::Qhat1 : Measure::Qhat2, drift);
  return out;
}

MarketModel numeraire_shift_1(const MarketModel& model) { return numeraire_shift(model, 1); }
MarketModel numeraire_shift_2(const MarketModel& model) { return numeraire_shift(model, 2); }

MarketModel to_measure(const MarketModel& model, Measure target) {
  switch (target) {
    case Measure::Q:
      if (model.measure_tag() != Measure::Q) throw ValidationError("to_measure: input must be under Q");
      return model;
    case Measure::Qhat1: return numeraire_shift(model, 1);
    case Measure::Qhat2: return numeraire_shift(model, 2);
  }
  throw ValidationError("to_measure: unknown measure");
}

AssetDynamics asset_dynamics(const MarketModel& model, int i) {
  const AssetParams& a = model.asset(i);
  const NumeraireDrift& nd = model.numeraire_drift();
  AssetDynamics d;
  d.jumps = active_jump(a);
  d.compensator = nd.numeraire == 0 ? d.jumps.lambda * kappa(d.jumps) : nd.compensator[i - 1];
  d.log_drift = model.r - a.q - d.compensator;
  d.var_coeff = -0.5;
  if (nd.numeraire == i) {
    d.var_coeff += nd.wiener_coeff[i - 1];
  } else if (nd.numeraire != 0) {
    d.cross_coeff = nd.wiener_coeff[i - 1];
  }
  d.mean_reversion = a.vol.mean_reversion();
  d.level = a.vol.level();
  d.sigma = a.vol.sigma;
  d.rho_wz = model.corr.rho_wz(i);
  return d;
}

}  // namespace svjd
