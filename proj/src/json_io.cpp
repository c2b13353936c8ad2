#include "json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "errors.hpp"

namespace coflow {

using nlohmann::json;

json size_spec_to_json(const SizeSpec& spec) {
  json j;
  j["family"] = family_name(spec.family);
  if (spec.family == Family::Empirical) {
    json table = json::array();
    for (const auto& [v, p] : spec.table) table.push_back(json::array({v, p}));
    j["table"] = std::move(table);
  } else {
    j["mean"] = spec.mean;
    if (spec.cv != 0.0 || spec.family != Family::Fixed) j["cv"] = spec.cv;
  }
  return j;
}

SizeSpec size_spec_from_json(const json& j) {
  SizeSpec spec;
  try {
    spec.family = family_from_name(j.at("family").get<std::string>());
    if (spec.family == Family::Empirical) {
      for (const auto& row : j.at("table")) {
        if (!row.is_array() || row.size() != 2)
          throw ParseError("empirical table rows must be [value, prob]");
        spec.table.emplace_back(row[0].get<double>(), row[1].get<double>());
      }
      spec.mean = spec_mean(spec);
      spec.cv = spec_cv(spec);
    } else {
      spec.mean = j.at("mean").get<double>();
      spec.cv = j.value("cv", 0.0);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad size spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

json instance_to_json(const Instance& instance) {
  json j;
  j["num_ports"] = instance.num_ports();
  json caps = json::array();
  for (const auto& p : instance.ports) caps.push_back(p.capacity);
  j["capacities"] = std::move(caps);
  json coflows = json::array();
  for (const auto& c : instance.coflows) {
    json jc;
    jc["id"] = c.id;
    jc["weight"] = c.weight;
    json flows = json::array();
    for (const auto& f : c.flows) {
      json jf;
      jf["src"] = f.src;
      jf["dst"] = f.dst;
      jf["size_spec"] = size_spec_to_json(f.size);
      flows.push_back(std::move(jf));
    }
    jc["flows"] = std::move(flows);
    coflows.push_back(std::move(jc));
  }
  j["coflows"] = std::move(coflows);
  return j;
}

Instance instance_from_json(const json& j) {
  Instance inst;
  try {
    const int L = j.at("num_ports").get<int>();
    if (L < 2) throw ParseError("num_ports must be >= 2");
    std::vector<double> caps(static_cast<std::size_t>(L), 1.0);
    if (j.contains("capacities")) {
      if (static_cast<int>(j["capacities"].size()) != L)
        throw ParseError("capacities length must equal num_ports");
      for (int l = 0; l < L; ++l) caps[static_cast<std::size_t>(l)] = j["capacities"][static_cast<std::size_t>(l)].get<double>();
    }
    inst.ports.resize(static_cast<std::size_t>(L));
    for (int l = 0; l < L; ++l)
      inst.ports[static_cast<std::size_t>(l)] =
          Port{l, l < L / 2 ? PortKind::Ingress : PortKind::Egress, caps[static_cast<std::size_t>(l)]};

    for (const auto& jc : j.at("coflows")) {
      Coflow c;
      c.id = jc.at("id").get<int>();
      c.weight = jc.value("weight", 1.0);
      int fid = 0;
      for (const auto& jf : jc.at("flows")) {
        FlowSpec f;
        f.coflow_id = c.id;
        f.flow_id = fid++;
        f.src = jf.at("src").get<int>();
        f.dst = jf.at("dst").get<int>();
        f.size = size_spec_from_json(jf.at("size_spec"));
        c.flows.push_back(std::move(f));
      }
      inst.coflows.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad instance: ") + e.what());
  }
  inst.validate();
  return inst;
}

json realization_to_json(const Instance& instance, const Realization& realization) {
  json j;
  j["seed"] = realization.seed;
  json volumes = json::array();
  for (std::size_t k = 0; k < instance.coflows.size(); ++k)
    for (std::size_t f = 0; f < realization.volumes[k].size(); ++f)
      volumes.push_back(json::array(
          {instance.coflows[k].id, static_cast<int>(f), realization.volumes[k][f]}));
  j["volumes"] = std::move(volumes);
  return j;
}

Realization realization_from_json(const Instance& instance, const json& j) {
  Realization r;
  try {
    r.seed = j.value("seed", 0ULL);
    r.volumes.resize(instance.coflows.size());
    for (std::size_t k = 0; k < instance.coflows.size(); ++k)
      r.volumes[k].assign(instance.coflows[k].flows.size(),
                          std::numeric_limits<double>::quiet_NaN());
    for (const auto& row : j.at("volumes")) {
      if (!row.is_array() || row.size() != 3)
        throw ParseError("volume rows must be [coflow, flow, value]");
      const int cid = row[0].get<int>();
      const int fid = row[1].get<int>();
      double value = row[2].get<double>();
      bool placed = false;
      for (std::size_t k = 0; k < instance.coflows.size(); ++k) {
        if (instance.coflows[k].id != cid) continue;
        if (fid < 0 || fid >= static_cast<int>(r.volumes[k].size()))
          throw ParseError("volume references unknown flow " + std::to_string(fid));
        r.volumes[k][static_cast<std::size_t>(fid)] = value;
        placed = true;
        break;
      }
      if (!placed) throw ParseError("volume references unknown coflow " + std::to_string(cid));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad realization: ") + e.what());
  }
  for (const auto& per_coflow : r.volumes)
    for (double v : per_coflow)
      if (std::isnan(v)) throw ParseError("realization does not cover every flow");
  return r;
}

GenConfig gen_config_from_json(const json& j) {
  GenConfig cfg;
  try {
    cfg.num_ports = j.at("num_ports").get<int>();
    cfg.num_coflows = j.at("num_coflows").get<int>();
    cfg.seed = j.value("seed", 0ULL);
    cfg.capacity = j.value("capacity", 1.0);
    std::string structure = j.value("structure", std::string("synthetic"));
    if (structure == "synthetic") {
      cfg.structure = StructureSource::Synthetic;
    } else if (structure.rfind("trace:", 0) == 0) {
      cfg.structure = StructureSource::TraceUpsample;
      cfg.trace_path = structure.substr(6);
    } else {
      throw ParseError("structure must be 'synthetic' or 'trace:<path>'");
    }
    if (j.contains("trace_path")) cfg.trace_path = j["trace_path"].get<std::string>();
    const auto& spec = j.at("size_spec");
    // An empirical spec without a table means: build the table from the
    // trace's observed flow sizes at generation time.
    if (spec.value("family", std::string()) == "empirical" && !spec.contains("table"))
      cfg.sizes_from_trace = true;
    else
      cfg.size_spec = size_spec_from_json(spec);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad generator config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return instance_from_json(j);
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

}  // namespace coflow
