#include "doctest.h"

#include <cmath>

#include "support/oracles.hpp"
#include "svjd/charfn.hpp"
#include "svjd/errors.hpp"
#include "svjd/fourier.hpp"
#include "svjd/mc.hpp"

using namespace svjd;

namespace {

double margrabe_of(const MarketModel& m, const MarketState& st, double tau) {
  return oracle::margrabe(st.s1, st.s2, m.asset1.q, m.asset2.q, st.v1 + st.v2, tau);
}

}  // namespace

TEST_SUITE("fourier") {
  TEST_CASE("Margrabe limit") {
    const MarketModel m = fixtures::margrabe_model();
    const MarketState st = spot_state(m);
    for (double tau : {0.25, 1.0, 3.0}) {
      const double ref = margrabe_of(m, st, tau);
      CHECK(std::abs(exchange_price(m, st, 0.0, tau).price - ref) / ref < 1e-6);
    }
  }

  TEST_CASE("K = 0 lower bound is the exchange price") {
    const MarketModel m = fixtures::desk_model(0);
    const MarketState st = spot_state(m);
    CHECK(spread_lower_bound(m, st, 0.0, 1.0, 0.0).price == exchange_price(m, st, 0.0, 1.0).price);
  }

  TEST_CASE("worthless when S1 vanishes") {
    const MarketModel m = fixtures::desk_model(0);
    MarketState st = spot_state(m);
    st.s1 = 1e-6;
    CHECK(exchange_price(m, st, 0.0, 1.0).price < 1e-8);
  }

  TEST_CASE("damping does not move the price") {
    const MarketModel m = fixtures::desk_model(2);
    const MarketState st = spot_state(m);
    QuadratureConfig q;
    q.n_nodes = 8192;
    q.delta = 0.75;
    const double ref = exchange_price(m, st, 0.0, 1.0, q).price;
    for (double d : {0.4, 1.2}) {
      q.delta = d;
      CHECK(std::abs(exchange_price(m, st, 0.0, 1.0, q).price - ref) < 1e-6 * ref);
    }
  }

  TEST_CASE("node refinement converges") {
    const MarketModel m = fixtures::desk_model(0);
    const MarketState st = spot_state(m);
    QuadratureConfig q;
    q.n_nodes = 4096;
    const double a = exchange_price(m, st, 0.0, 1.0, q).price;
    q.n_nodes = 8192;
    const double b = exchange_price(m, st, 0.0, 1.0, q).price;
    CHECK(std::abs(a - b) / b < 1e-7);
    q.scheme = QuadScheme::adaptive;
    CHECK(std::abs(exchange_price(m, st, 0.0, 1.0, q).price - b) / b < 1e-7);
  }

  TEST_CASE("decomposition equals the direct price") {
    for (int i = 0; i < fixtures::kDeskModels; ++i) {
      const MarketModel m = fixtures::desk_model(i);
      const MarketState st = spot_state(m);
      const PriceReport d = exchange_price_decomposed(m, st, 0.0, 1.0);
      const PriceReport e = exchange_price(m, st, 0.0, 1.0);
      CHECK(std::abs(d.price - e.price) < 1e-8);
      REQUIRE(d.prob1);
      CHECK(*d.prob1 >= -1e-6);
      CHECK(*d.prob1 <= 1.0 + 1e-6);
      CHECK(*d.prob2 >= -1e-6);
      CHECK(*d.prob2 <= 1.0 + 1e-6);
      CHECK(*d.term1 - *d.term2 == doctest::Approx(d.raw_price));
    }
  }

  TEST_CASE("exchange price does not depend on r") {
    MarketModel m = fixtures::desk_model(1);
    const MarketState st = spot_state(m);
    const RIndependence r0 = r_independence_check(m, st, 0.0, 1.0, {0.0, 0.05, 0.15});
    CHECK(r0.relative() <= 1e-6);
    const RIndependence rk = r_independence_check(m, st, 0.0, 1.0, {0.0, 0.05, 0.15}, 20.0);
    CHECK(rk.relative() > 1e-3);
    const MarketModel g = fixtures::margrabe_model();
    CHECK(r_independence_check(g, spot_state(g), 0.0, 1.0, {0.0, 0.05, 0.15}).relative() < 1e-10);
  }

  TEST_CASE("lower bound sits below the simulated spread price") {
    const MarketModel m = fixtures::desk_model(0);
    const MarketState st = spot_state(m);
    SimConfig c;
    c.n_paths = 100000;
    c.n_steps = 100;
    c.seed = 9;
    for (double K : {5.0, 20.0}) {
      const PriceReport lb = spread_lower_bound(m, st, 0.0, 1.0, K);
      const PriceReport mc = price_spread_mc(m, st, 0.0, 1.0, K, c);
      CHECK(lb.price <= mc.price + 3.0 * *mc.stderr_mc);
      CHECK(lb.price > 0.9 * mc.price);
    }
  }

  TEST_CASE("serial and OpenMP node kernels agree bitwise") {
    const MarketModel m = fixtures::desk_model(0);
    const MarketState st = spot_state(m);
    auto f = [&](double z) { return std::real(phi_joint(m, st, 0.0, 1.0, cplx(z, -1.75), cplx(-z, 0.75)).value); };
    std::vector<double> a(1025), b(1025);
    eval_nodes_serial(f, 0.1, a);
    eval_nodes_omp(f, 0.1, b);
    CHECK(a == b);
    QuadratureConfig q;
    q.exec = Exec::serial;
    const double s = exchange_price(m, st, 0.0, 1.0, q).price;
    q.exec = Exec::parallel;
    CHECK(exchange_price(m, st, 0.0, 1.0, q).price == s);
  }

  TEST_CASE("quadrature config is validated") {
    QuadratureConfig q;
    q.delta = 0.0;
    CHECK_THROWS_AS(q.validate(), ValidationError);
    q = {};
    q.n_nodes = 10;
    CHECK_THROWS_AS(q.validate(), ValidationError);
    const MarketModel m = fixtures::desk_model(0);
    CHECK_THROWS_AS(spread_lower_bound(m, spot_state(m), 0.0, 1.0, -1.0), ValidationError);
  }
}
