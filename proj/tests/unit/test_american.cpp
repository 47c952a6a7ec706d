#include "doctest.h"

#include <cmath>
#include <limits>

#include "support/oracles.hpp"
#include "svjd/american.hpp"
#include "svjd/errors.hpp"
#include "svjd/fourier.hpp"

using namespace svjd;

namespace {

LSMConfig small_config() {
  LSMConfig c;
  c.dates = 10;
  c.steps_per_date = 4;
  c.paths = 8000;
  c.training_paths = 8000;
  c.boundary_paths = 2000;
  c.hermite_nodes = 8;
  c.seed = 17;
  return c;
}

MarketModel dividend_model() {
  MarketModel m = fixtures::desk_model(0);
  m.asset1.q = 0.08;
  m.asset2.q = 0.0;
  for (int j = 1; j <= 2; ++j) m.asset(j).jump.lambda = 0.0;
  return m;
}

}  // namespace

TEST_SUITE("american") {
  TEST_CASE("basis") {
    CHECK(basis_size(2) == 10);
    CHECK(basis_size(3) == 20);
    CHECK(basis_size(5) == 56);
    double phi[64];
    basis(2, 2.0, 3.0, 5.0, phi);
    CHECK(phi[0] == 1.0);
    CHECK(phi[1] == 2.0);
    CHECK(phi[2] == 3.0);
    CHECK(phi[3] == 5.0);
    CHECK(phi[4] == 4.0);
    CHECK(phi[9] == 25.0);
    CHECK_THROWS_AS(basis(6, 1.0, 1.0, 1.0, phi), ValidationError);
  }

  TEST_CASE("terminal boundary") {
    CHECK(terminal_boundary(0.05, 0.02) == 1.0);
    CHECK(terminal_boundary(0.02, 0.05) == doctest::Approx(2.5));
    CHECK(std::isinf(terminal_boundary(0.0, 0.02)));
  }

  TEST_CASE("boundary curve interpolation and validation") {
    BoundaryCurve b{{0.0, 0.5, 1.0}, {1.4, 1.2, 1.0}, {0.0, 0.0, 0.0}};
    CHECK(b.at(0.25) == doctest::Approx(1.3));
    CHECK(b.at(2.0) == 1.0);
    CHECK_NOTHROW(b.validate(0.0, 1.0));
    b.B[1] = 0.9;
    CHECK_THROWS_AS(b.validate(0.0, 1.0), ValidationError);
    b.B[1] = 1.2;
    CHECK_THROWS_AS(b.validate(0.0, 2.0), ValidationError);
  }

  TEST_CASE("no dividend on asset 1 means no early exercise") {
    MarketModel m = fixtures::desk_model(1);
    const BoundaryCurve b = solve_boundary(m, spot_state(m), 1.0, small_config());
    for (double x : b.B) CHECK(std::isinf(x));
    const EEPResult e = eep_decomposition(m, spot_state(m), 0.0, 1.0, b, small_config());
    CHECK(e.premium.mean == 0.0);
    CHECK(e.report.price == doctest::Approx(exchange_price(m, spot_state(m), 0.0, 1.0).price));
  }

  TEST_CASE("deterministic paths pay S1 - S2") {
    MarketModel m;
    m.r = 0.03;
    m.asset1 = {110.0, 0.0, {1.0, 1e-10, 1e-8, 1e-10, 0.0}, {}, {}};
    m.asset2 = {100.0, 0.0, {1.0, 1e-10, 1e-8, 1e-10, 0.0}, {}, {}};
    const LSMResult r = lsm_price(m, spot_state(m), 0.0, 1.0, small_config());
    CHECK(r.report.price == doctest::Approx(10.0).epsilon(1e-6));
  }

  TEST_CASE("dividend creates a premium and the boundary ends at 1") {
    const MarketModel m = dividend_model();
    const MarketState st = spot_state(m);
    const LSMConfig c = small_config();
    const LSMResult lsm = lsm_price(m, st, 0.0, 1.0, c);
    const double eu = exchange_price(m, st, 0.0, 1.0).price;
    CHECK(lsm.report.price > eu + 3.0 * *lsm.report.stderr_mc);
    const BoundaryCurve b = solve_boundary(m, st, 1.0, c, lsm.surface);
    CHECK(b.B.back() == 1.0);
    CHECK_NOTHROW(b.validate(0.0, 1.0));
    const EEPResult e = eep_decomposition(m, st, 0.0, 1.0, b, c, lsm.surface);
    CHECK(e.premium.mean > 3.0 * e.premium.stderr_);
    // ten dates: both the Bermudan LSM and the premium trapezoid are coarse here
    CHECK(std::abs(e.report.price / lsm.report.price - 1.0) < 0.08);
    CHECK(e.premium_jump1.mean == 0.0);
  }

  TEST_CASE("boundary is a price ratio") {
    const MarketModel m = dividend_model();
    MarketModel scaled = m;
    scaled.asset1.s0 *= 3.0;
    scaled.asset2.s0 *= 3.0;
    const BoundaryCurve a = solve_boundary(m, spot_state(m), 1.0, small_config());
    const BoundaryCurve b = solve_boundary(scaled, spot_state(scaled), 1.0, small_config());
    for (std::size_t k = 0; k < a.B.size(); ++k) CHECK(std::abs(b.B[k] / a.B[k] - 1.0) < 0.01);
  }

  TEST_CASE("config validation") {
    LSMConfig c = small_config();
    c.degree = 6;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = small_config();
    c.dates = 5;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = small_config();
    c.seed.reset();
    CHECK_THROWS_AS(c.validate(), ValidationError);
  }
}
