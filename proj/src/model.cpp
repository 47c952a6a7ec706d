#include "svjd/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "svjd/errors.hpp"

namespace svjd {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

constexpr double kPsdTolerance = 1e-12;

void check_open_unit(ValidationReport& rep, const char* name, double rho) {
  if (!(rho > -1.0 && rho < 1.0)) {
    rep.violations.push_back({std::string(name) + " in (-1, 1)", std::string(name) + " = " + fmt(rho)});
  }
}

void check_asset(ValidationReport& rep, const AssetParams& a, double rho_wz, int idx) {
  const std::string tag = "asset" + std::to_string(idx);
  const std::string rho_name = "rho_wz" + std::to_string(idx);
  auto add = [&](std::string inv, std::string detail) {
    rep.violations.push_back({std::move(inv) + " (" + tag + ")", std::move(detail)});
  };

  if (!(a.s0 > 0.0) || !std::isfinite(a.s0)) add("s0 > 0", "s0 = " + fmt(a.s0));
  if (!(a.q >= 0.0) || !std::isfinite(a.q)) add("q >= 0", "q = " + fmt(a.q));

  const VolParams& v = a.vol;
  if (!(v.xi > 0.0) || !std::isfinite(v.xi)) add("xi > 0", "xi = " + fmt(v.xi));
  if (!(v.eta > 0.0) || !std::isfinite(v.eta)) add("eta > 0", "eta = " + fmt(v.eta));
  if (!(v.sigma > 0.0) || !std::isfinite(v.sigma)) add("sigma > 0", "sigma = " + fmt(v.sigma));
  if (!(v.v0 > 0.0) || !std::isfinite(v.v0)) add("v0 > 0", "v0 = " + fmt(v.v0));
  if (!(v.lambda_rp >= 0.0) || !std::isfinite(v.lambda_rp)) {
    add("lambda_rp >= 0", "lambda_rp = " + fmt(v.lambda_rp));
  }
  const double feller_lhs = 2.0 * v.xi * v.eta;
  const double feller_rhs = v.sigma * v.sigma;
  if (!(feller_lhs >= feller_rhs)) {
    add("Feller condition 2*xi*eta >= sigma^2", "Feller: " + fmt(feller_lhs) + " < " + fmt(feller_rhs));
  }
  if (v.sigma > 0.0) {
    const double bound = std::min(v.xi / v.sigma, 1.0);
    if (!(rho_wz < bound)) {
      add(rho_name + " < min(xi/sigma, 1)",
          rho_name + " >= min(" + fmt(v.xi / v.sigma) + "," + fmt(1.0) + ")");
    }
  }

  const JumpSpec& j = a.jump;
  if (!(j.lambda >= 0.0) || !std::isfinite(j.lambda)) add("lambda >= 0", "lambda = " + fmt(j.lambda));
  if (!(j.sigma_j >= 0.0) || !std::isfinite(j.sigma_j)) add("sigma_j >= 0", "sigma_j = " + fmt(j.sigma_j));
  if (!std::isfinite(j.mu_j)) add("mu_j finite", "mu_j = " + fmt(j.mu_j));
  if (!std::isfinite(a.tilt.gamma) || !std::isfinite(a.tilt.nu)) {
    add("jump tilt finite", "gamma = " + fmt(a.tilt.gamma) + ", nu = " + fmt(a.tilt.nu));
  }
  if (std::isfinite(j.mu_j) && std::isfinite(j.sigma_j) && !(kappa(j) > -1.0)) {
    add("kappa > -1", "kappa = " + fmt(kappa(j)));
  }
}

}  // namespace

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::Q: return "Q";
    case Measure::Qhat1: return "Qhat1";
    case Measure::Qhat2: return "Qhat2";
  }
  return "?";
}

double kappa(const JumpSpec& jump) {
  return std::expm1(jump.mu_j + 0.5 * jump.sigma_j * jump.sigma_j);
}

CorrelationMatrix CorrelationStructure::matrix() const {
  return {{{1.0, rho_w, rho_wz1, 0.0},
           {rho_w, 1.0, 0.0, rho_wz2},
           {rho_wz1, 0.0, 1.0, rho_z},
           {0.0, rho_wz2, rho_z, 1.0}}};
}

double min_correlation_eigenvalue(const CorrelationStructure& corr) {
  const CorrelationMatrix m = corr.matrix();
  Eigen::Matrix4d sigma;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) sigma(i, j) = m[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(sigma, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

MarketState spot_state(const MarketModel& model) {
  return {model.asset1.s0, model.asset2.s0, model.asset1.vol.v0, model.asset2.vol.v0};
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].invariant << ": " << violations[i].detail;
  }
  return os.str();
}

ValidationReport validate(const MarketModel& model) {
  ValidationReport rep;
  const CorrelationStructure& c = model.corr;
  check_open_unit(rep, "rho_w", c.rho_w);
  check_open_unit(rep, "rho_wz1", c.rho_wz1);
  check_open_unit(rep, "rho_wz2", c.rho_wz2);
  check_open_unit(rep, "rho_z", c.rho_z);
  const bool finite_corr = std::isfinite(c.rho_w) && std::isfinite(c.rho_wz1) &&
                           std::isfinite(c.rho_wz2) && std::isfinite(c.rho_z);
  if (finite_corr) {
    const double min_eig = min_correlation_eigenvalue(c);
    if (!(min_eig >= -kPsdTolerance)) {
      rep.violations.push_back({"correlation matrix positive semi-definite",
                                "smallest eigenvalue " + fmt(min_eig)});
    }
  }
  if (!std::isfinite(model.r)) rep.violations.push_back({"r finite", "r = " + fmt(model.r)});
  check_asset(rep, model.asset1, c.rho_wz1, 1);
  check_asset(rep, model.asset2, c.rho_wz2, 2);
  return rep;
}

void require_valid(const MarketModel& model) {
  const ValidationReport rep = validate(model);
  if (!rep.ok()) throw ValidationError("invalid model: " + rep.summary());
}

double forward_price(const MarketModel& model, int asset, double spot, double t, double T) {
  if (!(T > t)) throw ValidationError("forward_price: requires T > t");
  if (model.measure_tag() != Measure::Q) throw ValidationError("forward_price: model must be under Q");
  return spot * std::exp((model.r - model.asset(asset).q) * (T - t));
}

double forward_price(const MarketModel& model, int asset, double t, double T) {
  return forward_price(model, asset, model.asset(asset).s0, t, T);
}

}  // namespace svjd
