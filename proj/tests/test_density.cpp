// test_density.cpp — density-matrix helpers and physicality checks

#include <complex>
#include <stdexcept>

#include "doctest.h"

#include "qctrl/density.hpp"

using namespace qctrl;
using std::complex;

TEST_SUITE("density") {

TEST_CASE("ground state is |g><g|") {
  for (int dim : {3, 4}) {
    const Eigen::MatrixXcd rho = ground_state(dim);
    REQUIRE(rho.rows() == dim);
    REQUIRE(rho.cols() == dim);
    CHECK(rho(kGround, kGround) == complex<double>(1.0, 0.0));
    CHECK(rho.sum() == complex<double>(1.0, 0.0));
    CHECK(trace_error(rho) == 0.0);
    CHECK(hermiticity_error(rho) == 0.0);
  }
  CHECK_THROWS_AS(ground_state(0), std::invalid_argument);
}

TEST_CASE("error measures on hand-built matrices") {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(3, 3);
  rho(0, 0) = 0.6;
  rho(1, 1) = 0.4;
  rho(0, 1) = complex<double>(0.1, 0.05);
  rho(1, 0) = std::conj(rho(0, 1));

  CHECK(hermiticity_error(rho) == 0.0);
  CHECK(trace_error(rho) == doctest::Approx(0.0));
  CHECK(purity(rho) == doctest::Approx(0.36 + 0.16 + 2 * (0.01 + 0.0025)));

  SUBCASE("asymmetric part is measured") {
    rho(1, 0) = 0.0;
    CHECK(hermiticity_error(rho) == doctest::Approx(std::abs(rho(0, 1))));
  }
  SUBCASE("trace deviation is measured") {
    rho(2, 2) = 0.25;
    CHECK(trace_error(rho) == doctest::Approx(0.25));
  }
}

TEST_CASE("minimum eigenvalue of a diagonal matrix") {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(3, 3);
  rho(0, 0) = 1.5;
  rho(1, 1) = -0.5;
  CHECK(min_eigenvalue(rho) == doctest::Approx(-0.5));
  CHECK(min_eigenvalue(ground_state(3)) == doctest::Approx(0.0));
}

TEST_CASE("pure and mixed state purity") {
  CHECK(purity(ground_state(4)) == doctest::Approx(1.0));
  Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(3, 3) / 3.0;
  CHECK(purity(mixed) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("validate_density accepts physical states") {
  CHECK_NOTHROW(validate_density(ground_state(3)));
  CHECK_NOTHROW(validate_density(Eigen::MatrixXcd::Identity(4, 4) / 4.0));
}

TEST_CASE("validate_density rejects unphysical states") {
  SUBCASE("not square") {
    CHECK_THROWS_AS(validate_density(Eigen::MatrixXcd::Zero(3, 4)), std::invalid_argument);
  }
  SUBCASE("not Hermitian") {
    Eigen::MatrixXcd rho = ground_state(3);
    rho(0, 1) = 0.2;
    CHECK_THROWS_AS(validate_density(rho), std::invalid_argument);
  }
  SUBCASE("trace off") {
    CHECK_THROWS_AS(validate_density(1.1 * ground_state(3)), std::invalid_argument);
  }
  SUBCASE("negative eigenvalue") {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(3, 3);
    rho(0, 0) = 1.5;
    rho(1, 1) = -0.5;
    CHECK_THROWS_AS(validate_density(rho), std::invalid_argument);
  }
  SUBCASE("loose tolerances admit small violations") {
    Eigen::MatrixXcd rho = ground_state(3);
    rho(1, 1) = -1e-10;
    CHECK_NOTHROW(validate_density(rho, 1e-12, 1e-9, 1e-9));
    CHECK_THROWS_AS(validate_density(rho, 1e-12, 1e-9, 1e-12), std::invalid_argument);
  }
}

}  // TEST_SUITE
