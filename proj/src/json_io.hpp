#pragma once

#include <string>

#include <json.hpp>

#include "model.hpp"
#include "workload.hpp"

namespace coflow {

// Canonical instance file:
//   {"num_ports": L, "capacities": [..L..],
//    "coflows": [{"id": int, "weight": w,
//                 "flows": [{"src": i, "dst": o, "size_spec": {...}}]}]}
// Size spec: {"family": "fixed|gamma|normal|pareto", "mean": m, "cv": c}
// or {"family": "empirical", "table": [[value, prob], ...]}.
//
// Realization file: {"seed": u64, "volumes": [[coflow_id, flow_id, value]]}.

nlohmann::json size_spec_to_json(const SizeSpec& spec);
SizeSpec size_spec_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& j);

nlohmann::json realization_to_json(const Instance& instance, const Realization& realization);
Realization realization_from_json(const Instance& instance, const nlohmann::json& j);

// Generator configuration:
//   {"num_ports": L, "num_coflows": n, "size_spec": {...},
//    "structure": "synthetic" | "trace:<path>", "seed": u64,
//    "capacity": 1.0}
GenConfig gen_config_from_json(const nlohmann::json& j);

Instance load_instance_file(const std::string& path);
nlohmann::json parse_json_text(const std::string& text, const std::string& what);

}  // namespace coflow
