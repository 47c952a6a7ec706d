#include "support/oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

#include "svjd/charfn.hpp"
#include "svjd/measure.hpp"

namespace oracle {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double margrabe(double s1, double s2, double q1, double q2, double sigma2, double tau) {
  const double sd = std::sqrt(sigma2 * tau);
  const double d1 = (std::log(s1 / s2) + (q2 - q1 + 0.5 * sigma2) * tau) / sd;
  return s1 * std::exp(-q1 * tau) * normal_cdf(d1) - s2 * std::exp(-q2 * tau) * normal_cdf(d1 - sd);
}

cplx normal_expectation(const std::function<cplx(double)>& f, double mu, double sd) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double pi = std::acos(-1.0);
  auto density = [&](double y) { return std::exp(-0.5 * std::pow((y - mu) / sd, 2)) / (sd * std::sqrt(2.0 * pi)); };
  const double a = mu - 14.0 * sd, b = mu + 14.0 * sd;
  const double re = Rule::integrate([&](double y) { return f(y).real() * density(y); }, a, b, 15, 1e-14);
  const double im = Rule::integrate([&](double y) { return f(y).imag() * density(y); }, a, b, 15, 1e-14);
  return {re, im};
}

namespace {

struct State {
  std::array<cplx, 2> D{};
  cplx C{};
};

State operator+(const State& a, const State& b) { return {{a.D[0] + b.D[0], a.D[1] + b.D[1]}, a.C + b.C}; }
State operator*(double h, const State& a) { return {{h * a.D[0], h * a.D[1]}, h * a.C}; }

}  // namespace

RiccatiSolution riccati_rk4(const svjd::MarketModel& model, double s, cplx u1, cplx u2, int n) {
  const cplx i{0.0, 1.0};
  const svjd::AssetDynamics d[2] = {svjd::asset_dynamics(model, 1), svjd::asset_dynamics(model, 2)};
  const cplx u[2] = {u1, u2};
  // dD/ds = sigma^2/2 D^2 + (i u rho sigma - k) D + i u b - u^2/2, dC/ds = sum level D + i u drift
  auto rhs = [&](const State& x) {
    State out;
    for (int j = 0; j < 2; ++j) {
      const auto& a = d[j];
      out.D[j] = 0.5 * a.sigma * a.sigma * x.D[j] * x.D[j] + (i * u[j] * a.rho_wz * a.sigma - a.mean_reversion) * x.D[j] +
                 i * u[j] * a.var_coeff - 0.5 * u[j] * u[j];
      out.C += a.level * x.D[j] + i * u[j] * a.log_drift;
    }
    return out;
  };
  State x;
  const double h = s / n;
  for (int k = 0; k < n; ++k) {
    const State k1 = rhs(x);
    const State k2 = rhs(x + (0.5 * h) * k1);
    const State k3 = rhs(x + (0.5 * h) * k2);
    const State k4 = rhs(x + h * k3);
    x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return {x.D, x.C};
}

cplx merton_log_cf(const svjd::MarketModel& model, const svjd::MarketState& state, double tau, cplx u1, cplx u2) {
  const cplx i{0.0, 1.0};
  const cplx u[2] = {u1, u2};
  cplx acc = 0.0;
  for (int j = 0; j < 2; ++j) {
    const svjd::AssetDynamics a = svjd::asset_dynamics(model, j + 1);
    const double v = state.variance(j + 1);
    acc += i * u[j] * (std::log(state.spot(j + 1)) + (a.log_drift + a.var_coeff * v) * tau) - 0.5 * u[j] * u[j] * v * tau;
    if (a.jumps.lambda > 0.0) acc += a.jumps.lambda * tau * (svjd::phi_jump(a.jumps, u[j]) - 1.0);
  }
  return acc;
}

}  // namespace oracle

namespace fixtures {

namespace {

svjd::AssetParams asset(double s0, double q, svjd::VolParams vol, svjd::JumpSpec jump) {
  svjd::AssetParams a;
  a.s0 = s0;
  a.q = q;
  a.vol = vol;
  a.jump = jump;
  return a;
}

}  // namespace

svjd::MarketModel desk_model(int i) {
  svjd::MarketModel m;
  switch (i) {
    case 0:
      m.r = 0.05;
      m.asset1 = asset(100, 0.02, {1.5, 0.04, 0.3, 0.05, 0.1}, {0.5, -0.05, 0.1});
      m.asset2 = asset(95, 0.01, {2.0, 0.06, 0.4, 0.04, 0.0}, {0.3, 0.02, 0.15});
      m.corr.rho_wz1 = -0.5;
      m.corr.rho_wz2 = -0.3;
      break;
    case 1:
      m.r = 0.03;
      m.asset1 = asset(100, 0.0, {3.0, 0.09, 0.5, 0.06, 0.0}, {1.0, -0.1, 0.15});
      m.asset2 = asset(100, 0.0, {1.0, 0.04, 0.25, 0.04, 0.2}, {0.5, -0.05, 0.1});
      m.corr.rho_wz1 = -0.7;
      m.corr.rho_wz2 = -0.4;
      break;
    case 2:
      m.r = 0.02;
      m.asset1 = asset(120, 0.03, {2.5, 0.05, 0.45, 0.08, 0.0}, {0.2, 0.05, 0.2});
      m.asset2 = asset(100, 0.04, {1.2, 0.07, 0.35, 0.05, 0.1}, {0.8, -0.08, 0.12});
      m.corr.rho_wz1 = 0.2;
      m.corr.rho_wz2 = -0.6;
      break;
    case 3:
      m.r = 0.08;
      m.asset1 = asset(80, 0.01, {4.0, 0.03, 0.4, 0.02, 0.0}, {0.4, -0.15, 0.25});
      m.asset2 = asset(100, 0.0, {2.0, 0.02, 0.25, 0.03, 0.0}, {0.6, 0.03, 0.05});
      m.corr.rho_wz1 = -0.3;
      m.corr.rho_wz2 = 0.3;
      break;
    default:
      m.r = 0.04;
      m.asset1 = asset(100, 0.05, {1.0, 0.16, 0.5, 0.12, 0.3}, {0.3, -0.2, 0.2});
      m.asset2 = asset(110, 0.02, {3.0, 0.1, 0.6, 0.09, 0.0}, {0.2, 0.1, 0.1});
      m.corr.rho_wz1 = -0.6;
      m.corr.rho_wz2 = -0.5;
      break;
  }
  return m;
}

svjd::MarketModel random_model(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto in = [&](double a, double b) { return a + (b - a) * U(rng); };
  svjd::MarketModel m;
  m.r = in(0.0, 0.1);
  for (int j = 1; j <= 2; ++j) {
    svjd::AssetParams& a = m.asset(j);
    a.s0 = in(50, 150);
    a.q = in(0.0, 0.06);
    a.vol.xi = in(0.5, 4.0);
    a.vol.eta = in(0.02, 0.12);
    a.vol.sigma = in(0.05, 1.0) * std::sqrt(2.0 * a.vol.xi * a.vol.eta);
    a.vol.v0 = in(0.01, 0.15);
    a.vol.lambda_rp = in(0.0, 0.3);
    a.jump = {in(0.0, 1.5), in(-0.2, 0.1), in(0.02, 0.3)};
  }
  const double lim1 = std::min(m.asset1.vol.xi / m.asset1.vol.sigma, 1.0);
  const double lim2 = std::min(m.asset2.vol.xi / m.asset2.vol.sigma, 1.0);
  m.corr.rho_wz1 = in(-0.9, 0.9) * lim1;
  m.corr.rho_wz2 = in(-0.9, 0.9) * lim2;
  return m;
}

svjd::MarketModel margrabe_model() {
  svjd::MarketModel m;
  m.r = 0.05;
  m.asset1 = asset(100, 0.02, {2.0, 0.04, 1e-8, 0.04, 0.0}, {});
  m.asset2 = asset(95, 0.01, {1.5, 0.09, 1e-8, 0.09, 0.0}, {});
  return m;
}

}  // namespace fixtures
