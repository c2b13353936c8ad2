#include <doctest.h>

#include "errors.hpp"
#include "json_io.hpp"

using namespace coflow;

namespace {

Instance two_coflow_instance() {
  nlohmann::json j = nlohmann::json::parse(R"({
    "num_ports": 4,
    "capacities": [1.0, 2.0, 1.0, 0.5],
    "coflows": [
      {"id": 3, "weight": 2.0, "flows": [
        {"src": 0, "dst": 2, "size_spec": {"family": "gamma", "mean": 10.0, "cv": 0.5}},
        {"src": 1, "dst": 3, "size_spec": {"family": "fixed", "mean": 4.0}}]},
      {"id": 7, "weight": 1.0, "flows": [
        {"src": 1, "dst": 2, "size_spec": {"family": "empirical",
                                           "table": [[2.0, 0.5], [6.0, 0.5]]}}]}
    ]})");
  return instance_from_json(j);
}

}  // namespace

TEST_CASE("instance json round trip preserves every field") {
  Instance inst = two_coflow_instance();
  Instance back = instance_from_json(instance_to_json(inst));
  REQUIRE(back.num_ports() == inst.num_ports());
  REQUIRE(back.num_coflows() == inst.num_coflows());
  for (int l = 0; l < inst.num_ports(); ++l)
    CHECK(back.ports[static_cast<std::size_t>(l)].capacity ==
          inst.ports[static_cast<std::size_t>(l)].capacity);
  for (std::size_t k = 0; k < inst.coflows.size(); ++k) {
    CHECK(back.coflows[k].id == inst.coflows[k].id);
    CHECK(back.coflows[k].weight == inst.coflows[k].weight);
    REQUIRE(back.coflows[k].flows.size() == inst.coflows[k].flows.size());
    for (std::size_t f = 0; f < inst.coflows[k].flows.size(); ++f) {
      CHECK(back.coflows[k].flows[f].src == inst.coflows[k].flows[f].src);
      CHECK(back.coflows[k].flows[f].dst == inst.coflows[k].flows[f].dst);
      CHECK(back.coflows[k].flows[f].size.family == inst.coflows[k].flows[f].size.family);
      CHECK(back.coflows[k].flows[f].size.mean == inst.coflows[k].flows[f].size.mean);
      CHECK(back.coflows[k].flows[f].size.cv == inst.coflows[k].flows[f].size.cv);
      CHECK(back.coflows[k].flows[f].size.table == inst.coflows[k].flows[f].size.table);
    }
  }
  // serialization itself is stable
  CHECK(instance_to_json(inst).dump() == instance_to_json(back).dump());
}

TEST_CASE("realization json round trip is exact") {
  Instance inst = two_coflow_instance();
  Realization real = sample_realization(inst, 905);
  Realization back = realization_from_json(inst, realization_to_json(inst, real));
  CHECK(back.seed == real.seed);
  REQUIRE(back.volumes.size() == real.volumes.size());
  for (std::size_t k = 0; k < real.volumes.size(); ++k) {
    REQUIRE(back.volumes[k].size() == real.volumes[k].size());
    for (std::size_t f = 0; f < real.volumes[k].size(); ++f)
      CHECK(back.volumes[k][f] == real.volumes[k][f]);  // bit-exact
  }
}

TEST_CASE("realization parsing rejects gaps and unknown references") {
  Instance inst = two_coflow_instance();
  nlohmann::json j;
  j["seed"] = 1;
  j["volumes"] = {{3, 0, 5.0}, {3, 1, 2.0}};  // coflow 7's flow missing
  CHECK_THROWS_AS(realization_from_json(inst, j), ParseError);

  j["volumes"] = {{3, 0, 5.0}, {3, 1, 2.0}, {9, 0, 1.0}};
  CHECK_THROWS_AS(realization_from_json(inst, j), ParseError);

  j["volumes"] = {{3, 0, 5.0}, {3, 5, 2.0}, {7, 0, 1.0}};
  CHECK_THROWS_AS(realization_from_json(inst, j), ParseError);
}

TEST_CASE("instance parsing rejects malformed payloads") {
  CHECK_THROWS_AS(instance_from_json(nlohmann::json::parse("{}")), ParseError);
  auto j = instance_to_json(two_coflow_instance());
  j["capacities"] = {1.0};  // wrong arity
  CHECK_THROWS_AS(instance_from_json(j), ParseError);
}

TEST_CASE("generator config parsing") {
  nlohmann::json j;
  j["num_ports"] = 8;
  j["num_coflows"] = 4;
  j["size_spec"] = {{"family", "pareto"}, {"mean", 10.0}, {"cv", 1.0}};
  j["structure"] = "synthetic";
  j["seed"] = 5;
  GenConfig cfg = gen_config_from_json(j);
  CHECK(cfg.num_ports == 8);
  CHECK(cfg.size_spec.family == Family::Pareto);
  CHECK(!cfg.sizes_from_trace);

  j["structure"] = "trace:/some/file";
  GenConfig traced = gen_config_from_json(j);
  CHECK(traced.structure == StructureSource::TraceUpsample);
  CHECK(traced.trace_path == "/some/file");

  j["structure"] = "bogus";
  CHECK_THROWS_AS(gen_config_from_json(j), ParseError);
}
