#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "lp.hpp"
#include "ordering.hpp"
#include "rng.hpp"

using namespace coflow;

namespace {

LoadMatrix loads(int L, int n, const std::vector<double>& values) {
  LoadMatrix m;
  m.kind = LoadKind::Expected;
  m.num_ports = L;
  m.num_coflows = n;
  m.values = values;
  return m;
}

LoadMatrix random_loads(Rng& rng, int L, int n, double zero_prob = 0.3) {
  LoadMatrix m;
  m.kind = LoadKind::Expected;
  m.num_ports = L;
  m.num_coflows = n;
  m.values.resize(static_cast<std::size_t>(L) * n);
  for (auto& v : m.values) v = rng.uniform() < zero_prob ? 0.0 : 0.1 + 10.0 * rng.uniform();
  // every coflow needs some positive load
  for (int k = 0; k < n; ++k) {
    bool any = false;
    for (int l = 0; l < L; ++l) any = any || m.at(l, k) > 0.0;
    if (!any) m.at(static_cast<int>(rng.below(static_cast<std::uint64_t>(L))), k) = 1.0 + rng.uniform();
  }
  return m;
}

}  // namespace

// Hand-traced 2x2 example: port-major loads [[2,1],[1,2]], unit weights.
TEST_CASE("two-coflow hand trace") {
  LoadMatrix mu = loads(2, 2, {2, 1, 1, 2});
  std::vector<double> w{1, 1};
  PriorityOrder order = sincronia_order(mu, w);

  // Iteration t=2: both ports sum to 3, tie to port 0; ratios 1/2 vs 1/1,
  // so coflow 0 is scheduled last with C = 3 and y(port0, {0,1}) = 1/2.
  // Iteration t=1: port 1 is the bottleneck for {1}, C = 2, y = 1/4.
  REQUIRE(order.pi.size() == 2);
  CHECK(order.pi[0] == 1);
  CHECK(order.pi[1] == 0);
  CHECK(order.primal_c[0] == doctest::Approx(3.0));
  CHECK(order.primal_c[1] == doctest::Approx(2.0));
  CHECK(alg1_cost(order, w) == doctest::Approx(5.0));

  REQUIRE(order.duals.size() == 2);
  CHECK(order.duals[0].port == 0);
  CHECK(order.duals[0].value == doctest::Approx(0.5));
  CHECK(order.duals[0].coflows.ids() == std::vector<int>{0, 1});
  CHECK(order.duals[1].port == 1);
  CHECK(order.duals[1].value == doctest::Approx(0.25));
  CHECK(order.duals[1].coflows.ids() == std::vector<int>{1});

  // f(port0, {0,1}) = (9 + 5)/2 = 7; f(port1, {1}) = 4.
  CHECK(dual_objective(order) == doctest::Approx(7.0 * 0.5 + 4.0 * 0.25));

  for (double s : dual_slacks(order, w)) CHECK(s == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("single coflow order") {
  LoadMatrix mu = loads(3, 1, {3, 1, 2});
  PriorityOrder order = sincronia_order(mu, {1.0});
  CHECK(order.pi == std::vector<int>{0});
  CHECK(order.primal_c[0] == doctest::Approx(3.0));
  // Singleton LP is tight: f({0}) = 9 at the bottleneck, y = 1/3, so the dual
  // objective meets the primal cost.
  CHECK(dual_objective(order) == doctest::Approx(3.0));
  CHECK(dual_slacks(order, {1.0})[0] == doctest::Approx(0.0));
}

TEST_CASE("identical coflows order deterministically by id") {
  LoadMatrix mu = loads(2, 3, {1, 1, 1, 1, 1, 1});
  PriorityOrder order = sincronia_order(mu, {1, 1, 1});
  // Ties at the argmin break to the lowest id, which is scheduled LAST.
  CHECK(order.pi == std::vector<int>{2, 1, 0});
  PriorityOrder again = sincronia_order(mu, {1, 1, 1});
  CHECK(order.pi == again.pi);
}

TEST_CASE("permutation is invariant to load and weight scaling") {
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    int L = 2 + 2 * static_cast<int>(rng.below(3));
    int n = 2 + static_cast<int>(rng.below(6));
    LoadMatrix mu = random_loads(rng, L, n);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = 0.5 + rng.uniform();
    PriorityOrder base = sincronia_order(mu, w);

    // Powers of two keep the scaled comparisons bit-exact.
    LoadMatrix mu8 = mu;
    for (auto& v : mu8.values) v *= 8.0;
    CHECK(sincronia_order(mu8, w).pi == base.pi);

    std::vector<double> w4 = w;
    for (auto& x : w4) x *= 4.0;
    CHECK(sincronia_order(mu, w4).pi == base.pi);
  }
}

TEST_CASE("dual certificates over random instances") {
  Rng rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    int L = 2 + 2 * static_cast<int>(rng.below(4));
    int n = 1 + static_cast<int>(rng.below(10));
    LoadMatrix mu = random_loads(rng, L, n);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = rng.uniform() < 0.1 ? 0.0 : 0.2 + 2.0 * rng.uniform();

    PriorityOrder order = sincronia_order(mu, w);

    // permutation validity
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int k : order.pi) {
      REQUIRE(k >= 0);
      REQUIRE(k < n);
      REQUIRE(!seen[static_cast<std::size_t>(k)]);
      seen[static_cast<std::size_t>(k)] = 1;
    }

    for (const auto& d : order.duals) CHECK(d.value >= 0.0);

    // dual feasibility: slacks of the original weights stay nonnegative
    for (double s : dual_slacks(order, w)) CHECK(s >= -1e-9);

    // weak duality sandwich around the primal cost
    double dual = dual_objective(order);
    double cost = alg1_cost(order, w);
    CHECK(dual <= cost + 1e-9);
    CHECK(cost <= 2.0 * dual + 1e-9);

    // Theorem-2 form of the primal values
    std::vector<double> prefix(static_cast<std::size_t>(L), 0.0);
    for (std::size_t t = 0; t < order.pi.size(); ++t) {
      int k = order.pi[t];
      double best = 0.0;
      for (int l = 0; l < L; ++l) {
        prefix[static_cast<std::size_t>(l)] += mu.at(l, k);
        best = std::max(best, prefix[static_cast<std::size_t>(l)]);
      }
      CHECK(order.primal_c[static_cast<std::size_t>(k)] == doctest::Approx(best).epsilon(1e-9));
    }
  }
}

TEST_CASE("zero-weight zero-load coflows are excluded from the argmin") {
  // Coflow 1 has no load at the bottleneck port 0 and zero weight; the
  // ratio 0/0 must not beat coflow 0's finite ratio.
  LoadMatrix mu = loads(2, 2, {4, 0, 0.5, 1});
  PriorityOrder order = sincronia_order(mu, {1.0, 0.0});
  CHECK(order.pi[1] == 0);  // coflow 0 scheduled last via port 0
}

TEST_CASE("all-zero load matrix falls back to id order") {
  LoadMatrix mu = loads(2, 2, {0, 0, 0, 0});
  PriorityOrder order = sincronia_order(mu, {1.0, 1.0});
  CHECK(order.pi == std::vector<int>{1, 0});
  CHECK(dual_objective(order) == 0.0);
}

TEST_CASE("input validation") {
  LoadMatrix mu = loads(2, 2, {1, 1, 1, 1});
  CHECK_THROWS_AS(sincronia_order(mu, {1.0}), ValidationError);
  CHECK_THROWS_AS(sincronia_order(mu, {1.0, -2.0}), ValidationError);
  LoadMatrix bad = loads(2, 2, {1, -1, 1, 1});
  CHECK_THROWS_AS(sincronia_order(bad, {1.0, 1.0}), ValidationError);
}
