#include <doctest.h>

#include <cmath>

#include "bounds.hpp"
#include "errors.hpp"
#include "workload.hpp"
#include "lp.hpp"
#include "ordering.hpp"
#include "simulator.hpp"

using namespace coflow;

TEST_CASE("deterministic sizes recover the clairvoyant factor") {
  CHECK(ub_general_p(4, 2.0, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(ub_gamma(4, 0.0) == doctest::Approx(1.0));
  CHECK(ub_normal(4, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("table golden values") {
  // gamma, eta = 0.5 -> gamma = 0.25
  CHECK(4.0 * ub_gamma(4, 0.25) == doctest::Approx(8.6).epsilon(0.01));
  // gamma, eta = 2 -> gamma = 4
  CHECK(4.0 * ub_gamma(16, 4.0) == doctest::Approx(61.1).epsilon(0.01));
  // normal
  CHECK(4.0 * ub_normal(4, 0.5) == doctest::Approx(7.3).epsilon(0.01));
  CHECK(4.0 * ub_normal(32, 2.0) == doctest::Approx(25.1).epsilon(0.01));
  // p = 2 general bound at sigma/mu = 0.5 and L = 4
  CHECK(4.0 * ub_p2(4, 0.5, 1.0) == doctest::Approx(8.0));
  CHECK(4.0 * ub_p2(8, 1.0, 1.0) == doctest::Approx(15.3).epsilon(0.01));
}

TEST_CASE("bounds are monotone in L and dispersion") {
  double prev = 0.0;
  for (int L : {2, 4, 8, 16, 32, 64}) {
    double b = ub_gamma(L, 1.0);
    CHECK(b > prev);
    prev = b;
  }
  prev = 0.0;
  for (double g : {0.0, 0.25, 1.0, 4.0, 9.0}) {
    double b = ub_gamma(16, g);
    CHECK(b >= prev);
    prev = b;
  }
  prev = 0.0;
  for (double eta : {0.0, 0.5, 1.0, 2.0}) {
    double b = ub_normal(16, eta);
    CHECK(b >= prev);
    prev = b;
    CHECK(ub_p2(16, eta, 1.0) >= ub_p2(8, eta, 1.0));
  }
}

TEST_CASE("root of z - log z = c sits below the closed form") {
  SUBCASE("gamma zero gives the exact root 1") {
    auto rc = gamma_bound_root_check(8, 0.0);
    CHECK(rc.root == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rc.closed_form == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("hand value") {
    auto rc = gamma_bound_root_check(4, 0.25);  // c = 1.3466
    double c = 1.0 + 0.25 * std::log(4.0);
    CHECK(rc.root - std::log(rc.root) == doctest::Approx(c).epsilon(1e-9));
    CHECK(rc.closed_form >= rc.root);
  }
  SUBCASE("sweep") {
    Rng rng(88);
    double worst_gap = 0.0;
    for (int i = 0; i < 1000; ++i) {
      int L = 2 + static_cast<int>(rng.below(1023));
      double gamma = 25.0 * rng.uniform();
      auto rc = gamma_bound_root_check(L, gamma);
      CHECK(rc.closed_form >= rc.root - 1e-9);
      worst_gap = std::max(worst_gap, (rc.closed_form - rc.root) / rc.root);
    }
    MESSAGE("worst relative closed-form gap: ", worst_gap);
  }
}

TEST_CASE("alpha is exactly one for deterministic instances") {
  GenConfig cfg;
  cfg.num_ports = 8;
  cfg.num_coflows = 5;
  cfg.size_spec.family = Family::Fixed;
  cfg.size_spec.mean = 10.0;
  cfg.seed = 5;
  Instance inst = generate_instance(cfg);
  std::vector<double> w(inst.coflows.size(), 1.0);
  PriorityOrder order = sincronia_order(expected_loads(inst), w);
  auto est = estimate_alpha(inst, order.pi, 50, 1234);
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single-port instances keep the ratio pinned near one") {
  // With one ingress-egress pair there is no max over ports on the
  // numerator's support: E[sum P] / sum mu = 1 for every prefix.
  Instance inst;
  inst.ports = {Port{0, PortKind::Ingress, 1.0}, Port{1, PortKind::Egress, 1.0}};
  for (int k = 0; k < 3; ++k) {
    Coflow c;
    c.id = k;
    SizeSpec s;
    s.family = Family::Gamma;
    s.mean = 10.0;
    s.cv = 1.0;
    c.flows.push_back(FlowSpec{k, 0, 0, 1, s});
    inst.coflows.push_back(std::move(c));
  }
  inst.validate();
  auto est = estimate_alpha(inst, {0, 1, 2}, 4000, 99);
  CHECK(est.value == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("estimated alpha stays under the closed-form gamma bound") {
  GenConfig cfg;
  cfg.num_ports = 32;
  cfg.num_coflows = 8;
  cfg.size_spec.family = Family::Gamma;
  cfg.size_spec.mean = 10.0;
  cfg.size_spec.cv = 2.0;
  cfg.seed = 83;
  Instance inst = generate_instance(cfg);
  std::vector<double> w(inst.coflows.size(), 1.0);
  PriorityOrder order = sincronia_order(expected_loads(inst), w);
  auto est = estimate_alpha(inst, order.pi, 3000, 17);
  CHECK(est.value >= 1.0 - 3.0 * est.std_error);
  CHECK(est.value <= ub_gamma(32, 4.0) + 3.0 * est.std_error);
}

TEST_CASE("hoelder step: p-th moment of a sum of absolutes") {
  // E(sum |Y_i|)^p <= n^p m_p for independent Y with E|Y|^p <= m_p,
  // exercised on uniforms where m_p = 1/(p+1).
  Rng rng(3);
  for (double p : {1.5, 2.0, 3.0}) {
    for (int n : {2, 4, 8}) {
      const int samples = 20000;
      double acc = 0.0, acc2 = 0.0;
      for (int s = 0; s < samples; ++s) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += rng.uniform();
        double v = std::pow(sum, p);
        acc += v;
        acc2 += v * v;
      }
      double mean = acc / samples;
      double se = std::sqrt(std::max(0.0, acc2 / samples - mean * mean) / samples);
      double bound = std::pow(n, p) / (p + 1.0);
      CHECK(mean <= bound + 3.0 * se);
    }
  }
}

TEST_CASE("pareto scaling report runs and grows with L") {
  auto report = pareto_scaling_report(1.0, {2, 8, 32, 128}, 4, 400, 7);
  REQUIRE(report.mean_ratio.size() == 4);
  CHECK(report.mean_ratio.front() < report.mean_ratio.back());
  CHECK(report.slope > 0.0);
  CHECK(report.pareto_shape == doctest::Approx(1.0 + std::sqrt(2.0)));
}

TEST_CASE("bound input validation") {
  CHECK_THROWS_AS(ub_general_p(4, 1.0, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(ub_general_p(4, 2.0, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(ub_gamma(1, 1.0), ValidationError);
  CHECK_THROWS_AS(ub_gamma(4, -1.0), ValidationError);
  CHECK_THROWS_AS(ub_normal(4, -0.1), ValidationError);

  BoundInputs bad;
  bad.num_ports = 4;
  bad.sigma_max = 2.0;
  bad.mu_min = 1.0;
  bad.gamma = 1.0;  // should be 4
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("instance-derived bound inputs in table mode") {
  // Unit capacities and a common cv make sigma_max/mu_min equal eta, so the
  // instance-derived inputs reproduce the (L, eta) table bounds.
  GenConfig cfg;
  cfg.num_ports = 8;
  cfg.num_coflows = 5;
  cfg.size_spec.family = Family::Gamma;
  cfg.size_spec.mean = 10.0;
  cfg.size_spec.cv = 0.5;
  cfg.seed = 19;
  Instance inst = generate_instance(cfg);
  BoundInputs in = bound_inputs_p2(inst);
  CHECK(in.num_ports == 8);
  CHECK(in.mu_min == doctest::Approx(10.0));
  CHECK(in.sigma_max == doctest::Approx(5.0));
  CHECK(in.eta_max == doctest::Approx(0.5));
  CHECK(in.gamma == doctest::Approx(0.25));
  CHECK(ub_gamma(in) == doctest::Approx(ub_gamma(8, 0.25)));
  CHECK(ub_normal(in) == doctest::Approx(ub_normal(8, 0.5)));
  CHECK(ub_general_p(in) == doctest::Approx(ub_p2(8, 5.0, 10.0)));
}
