#include "doctest.h"

#include <cmath>

#include "support/oracles.hpp"
#include "svjd/charfn.hpp"
#include "svjd/errors.hpp"
#include "svjd/model.hpp"

using namespace svjd;

namespace {

bool has_detail(const ValidationReport& rep, const std::string& text) {
  for (const auto& v : rep.violations) {
    if (v.detail == text) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("Feller condition holds") {
    MarketModel m = fixtures::desk_model(0);
    m.asset1.vol = {2.0, 0.04, 0.3, 0.04, 0.0};
    CHECK(validate(m).ok());
  }

  TEST_CASE("Feller violation is reported with both sides") {
    MarketModel m = fixtures::desk_model(0);
    m.asset1.vol = {1.0, 0.02, 0.3, 0.04, 0.0};
    const ValidationReport rep = validate(m);
    REQUIRE_FALSE(rep.ok());
    CHECK(has_detail(rep, "Feller: 0.04 < 0.09"));
    CHECK(rep.summary().find("2*xi*eta >= sigma^2") != std::string::npos);
    CHECK_THROWS_AS(require_valid(m), ValidationError);
  }

  TEST_CASE("vol-spot correlation bound") {
    MarketModel m = fixtures::desk_model(0);
    m.asset1.vol = {0.5, 1.0, 1.0, 0.04, 0.0};
    m.corr.rho_wz1 = 0.9;
    CHECK(has_detail(validate(m), "rho_wz1 >= min(0.5,1)"));
  }

  TEST_CASE("every violation is collected") {
    MarketModel m = fixtures::desk_model(0);
    m.asset1.s0 = -1.0;
    m.asset2.vol.v0 = std::nan("");
    m.corr.rho_w = 1.5;
    CHECK(validate(m).violations.size() >= 3);
  }

  TEST_CASE("correlation matrix is symmetric with unit diagonal") {
    CorrelationStructure c{0.3, -0.5, 0.2, 0.4};
    const auto M = c.matrix();
    for (int i = 0; i < 4; ++i) {
      CHECK(M[i][i] == 1.0);
      for (int j = 0; j < 4; ++j) CHECK(M[i][j] == M[j][i]);
    }
    CHECK(M[0][3] == 0.0);
    CHECK(M[1][2] == 0.0);
  }

  TEST_CASE("non PSD correlation is rejected") {
    MarketModel m = fixtures::desk_model(0);
    m.corr = {0.0, -0.5, 0.0, 0.0};
    CHECK(validate(m).ok());
    m.corr = {0.95, 0.9, -0.9, 0.95};
    CHECK(min_correlation_eigenvalue(m.corr) < 0.0);
    CHECK_FALSE(validate(m).ok());
  }

  TEST_CASE("kappa examples") {
    CHECK(kappa({1.0, 0.0, 0.0}) == 0.0);
    CHECK(kappa({1.0, std::log(1.1), 0.0}) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(kappa({1.0, -0.1, 0.2}) == doctest::Approx(std::exp(-0.08) - 1.0).epsilon(1e-14));
    const auto quad = oracle::normal_expectation([](double y) { return std::exp(y) - 1.0; }, -0.1, 0.2);
    CHECK(kappa({1.0, -0.1, 0.2}) == doctest::Approx(quad.real()).epsilon(1e-12));
  }

  TEST_CASE("forward price") {
    MarketModel m = fixtures::desk_model(0);
    m.asset1.q = m.r;
    CHECK(forward_price(m, 1, 100.0, 0.0, 3.7) == doctest::Approx(100.0).epsilon(1e-15));
    m.r = 0.05;
    m.asset1.q = 0.01;
    CHECK(forward_price(m, 1, 100.0, 0.0, 1.0) == doctest::Approx(100.0 * std::exp(0.04)).epsilon(1e-15));
    CHECK(forward_price(m, 1, 300.0, 0.0, 1.0) == doctest::Approx(3.0 * forward_price(m, 1, 100.0, 0.0, 1.0)));
    CHECK(forward_price(m, 1, 101.0, 0.0, 1.0) > forward_price(m, 1, 100.0, 0.0, 1.0));
    m.r = 0.06;
    CHECK(forward_price(m, 1, 100.0, 0.0, 1.0) > 100.0 * std::exp(0.04));
    CHECK_THROWS_AS(forward_price(m, 1, 100.0, 1.0, 1.0), ValidationError);
  }

  TEST_CASE("forward price matches the CF at (0, -i)") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 5; ++k) {
      const MarketModel m = fixtures::random_model(rng);
      const MarketState st = spot_state(m);
      for (int asset = 1; asset <= 2; ++asset) {
        const cplx u1 = asset == 1 ? cplx(0.0, -1.0) : cplx(0.0);
        const cplx u2 = asset == 2 ? cplx(0.0, -1.0) : cplx(0.0);
        const double fwd = forward_price(m, asset, 0.0, 1.5);
        CHECK(std::abs(phi_joint(m, st, 0.0, 1.5, u1, u2).value.real() - fwd) / fwd < 1e-10);
      }
    }
  }
}
