#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hcr/error.hpp"
#include "hcr/reference.hpp"
#include "hcr/rng.hpp"
#include "hcr/transport.hpp"

using hcr::BasicCell;
using hcr::Matrix;
using hcr::TransportProblem;
using hcr::TransportSolution;

namespace {

TransportProblem random_balanced(hcr::Rng& rng, int m, int n) {
  TransportProblem p;
  p.supplies.resize(static_cast<std::size_t>(m));
  p.demands.resize(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& s : p.supplies) {
    s = rng.uniform(0.05, 1.0);
    total += s;
  }
  for (double& s : p.supplies) s /= total;
  total = 0.0;
  for (double& d : p.demands) {
    d = rng.uniform(0.05, 1.0);
    total += d;
  }
  for (double& d : p.demands) d /= total;
  p.cost = Matrix(m, n);
  for (double& c : p.cost.values()) c = rng.uniform01();
  return p;
}

}  // namespace

TEST_SUITE("transport") {
  TEST_CASE("single cell ships everything") {
    TransportProblem p{{1.0}, {1.0}, Matrix::from_rows({{0.7}})};
    const TransportSolution s = solve(p);
    CHECK(s.flow(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.objective == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(s.row_duals[0] == 0.0);
    CHECK(check_certificate(p, s).ok());
  }

  TEST_CASE("zero-cost diagonal is used exactly") {
    TransportProblem p{{0.5, 0.5}, {0.5, 0.5}, Matrix::from_rows({{0, 1}, {1, 0}})};
    const TransportSolution s = solve(p);
    CHECK(s.objective == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.flow(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.flow(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.flow(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(check_certificate(p, s).ok());
  }

  TEST_CASE("north-west start walks the expected corner") {
    TransportProblem p{{1.0, 1.0}, {2.0}, Matrix(2, 1, 0.0)};
    const hcr::InitialBasis basis = north_west_start(p);
    CHECK(basis.flow(0, 0) == doctest::Approx(1.0));
    CHECK(basis.flow(1, 0) == doctest::Approx(1.0));
    REQUIRE(basis.basics.size() == 2);
    CHECK(basis.basics[0] == BasicCell{0, 0});
    CHECK(basis.basics[1] == BasicCell{1, 0});
  }

  TEST_CASE("north-west start keeps a full basis through degenerate ties") {
    TransportProblem p{{0.5, 0.5}, {0.5, 0.5}, Matrix(2, 2, 0.0)};
    const hcr::InitialBasis basis = north_west_start(p);
    CHECK(basis.basics.size() == 3);  // m + n - 1 despite the exact tie

    TransportProblem degenerate{{1.0, 0.0}, {0.5, 0.5}, Matrix(2, 2, 0.0)};
    CHECK(north_west_start(degenerate).basics.size() == 3);
  }

  TEST_CASE("row duals are anchored at zero") {
    hcr::Rng rng(5);
    for (int round = 0; round < 20; ++round) {
      const TransportProblem p = random_balanced(rng, 3, 4);
      CHECK(solve(p).row_duals[0] == 0.0);
    }
  }

  TEST_CASE("certificates hold on random instances") {
    hcr::Rng rng(17);
    for (int round = 0; round < 120; ++round) {
      const int m = 1 + static_cast<int>(rng.uniform_below(6));
      const int n = 1 + static_cast<int>(rng.uniform_below(6));
      const TransportProblem p = random_balanced(rng, m, n);
      const TransportSolution s = solve(p);
      const hcr::CertificateReport report = check_certificate(p, s);
      CHECK(report.ok(1e-9));
      for (const double f : s.flow.values()) CHECK(f >= 0.0);
      CHECK(s.basics.size() == static_cast<std::size_t>(m + n - 1));
    }
  }

  TEST_CASE("matches the basis-enumeration oracle") {
    hcr::Rng rng(23);
    for (int round = 0; round < 60; ++round) {
      const int m = 1 + static_cast<int>(rng.uniform_below(4));
      const int n = 1 + static_cast<int>(rng.uniform_below(4));
      const TransportProblem p = random_balanced(rng, m, n);
      const double exact = hcr::reference::bruteforce_optimum(p);
      CHECK(solve(p).objective == doctest::Approx(exact).epsilon(1e-8));
    }
  }

  TEST_CASE("objective scales with the costs") {
    hcr::Rng rng(31);
    const TransportProblem p = random_balanced(rng, 4, 3);
    const double base = solve(p).objective;
    for (double alpha : {0.5, 2.0, 10.0}) {
      TransportProblem scaled = p;
      for (double& c : scaled.cost.values()) c *= alpha;
      CHECK(solve(scaled).objective == doctest::Approx(alpha * base).epsilon(1e-9));
    }
  }

  TEST_CASE("unbalanced problems are rejected") {
    TransportProblem p{{1.0}, {0.9}, Matrix(1, 1, 0.0)};
    CHECK_THROWS_AS(solve(p), hcr::InvalidArgument);
    TransportProblem negative{{1.0, -0.1}, {0.9}, Matrix(2, 1, 0.0)};
    CHECK_THROWS_AS(solve(negative), hcr::InvalidArgument);
    TransportProblem shape{{1.0}, {1.0}, Matrix(2, 1, 0.0)};
    CHECK_THROWS_AS(solve(shape), hcr::InvalidArgument);
  }

  TEST_CASE("zero total mass still solves cleanly") {
    TransportProblem p{{0.0, 0.0}, {0.0}, Matrix::from_rows({{1.0}, {2.0}})};
    const TransportSolution s = solve(p);
    CHECK(s.objective == 0.0);
    CHECK(check_certificate(p, s).ok());
  }

  TEST_CASE("gradient is the optimal flow") {
    hcr::Rng rng(37);
    const TransportProblem p = random_balanced(rng, 3, 3);
    const TransportSolution s = solve(p);
    CHECK(gradient_wrt_cost(p, s) == s.flow);
  }

  TEST_CASE("finite differences confirm the gradient") {
    hcr::Rng rng(41);
    int confirmed = 0;
    for (int round = 0; round < 25; ++round) {
      const TransportProblem p = random_balanced(rng, 3, 4);
      const hcr::GradientCheck check = finite_difference_check(p, 1e-6);
      if (check.degenerate) continue;
      ++confirmed;
      CHECK(check.max_rel_error < 1e-4);
    }
    CHECK(confirmed >= 15);
  }

  TEST_CASE("flat costs are reported as degenerate, not failed") {
    TransportProblem p{{0.5, 0.5}, {0.5, 0.5}, Matrix(2, 2, 0.3)};
    const hcr::GradientCheck check = finite_difference_check(p, 1e-6);
    CHECK(check.degenerate);
    CHECK(check.max_rel_error == 0.0);
  }

  TEST_CASE("single-row and single-column problems ship directly") {
    TransportProblem row{{1.0}, {0.25, 0.75}, Matrix::from_rows({{0.2, 0.4}})};
    const TransportSolution s = solve(row);
    CHECK(s.flow(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(s.flow(0, 1) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(s.objective == doctest::Approx(0.25 * 0.2 + 0.75 * 0.4).epsilon(1e-12));

    TransportProblem col{{0.25, 0.75}, {1.0}, Matrix::from_rows({{0.2}, {0.4}})};
    CHECK(solve(col).objective == doctest::Approx(0.25 * 0.2 + 0.75 * 0.4).epsilon(1e-12));
  }

  TEST_CASE("oracle refuses instances beyond its budget") {
    hcr::Rng rng(43);
    const TransportProblem p = random_balanced(rng, 7, 7);
    CHECK_THROWS_AS(hcr::reference::bruteforce_optimum(p), hcr::InvalidArgument);
  }
}
