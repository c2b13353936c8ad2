#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "bounds.hpp"
#include "errors.hpp"
#include "json_io.hpp"
#include "lp.hpp"
#include "stats.hpp"

namespace coflow {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (cells.empty()) throw ValidationError("experiment has no cells");
  if (num_instances < 1 || num_realizations < 1)
    throw ValidationError("instance and realization counts must be >= 1");
  if (policies.empty()) throw ValidationError("experiment has no policies");
  if (!sizes_from_trace) size_spec.validate();
  if ((structure == StructureSource::TraceUpsample || sizes_from_trace) && trace_path.empty())
    throw ValidationError("trace-based experiments require a trace path");
  if (reference == Reference::LP) {
    for (const auto& c : cells)
      if (c.num_coflows > 16)
        throw ValidationError("LP reference is limited to n <= 16; use the cl reference");
  }
  if (jobs < 1) throw ValidationError("jobs must be >= 1");
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct InstanceOutcome {
  double reference_value = 0.0;
  std::vector<double> policy_means;            // per policy
  std::vector<std::vector<double>> per_rep;    // per policy, per replication
};

void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int width = std::min(jobs, count);
  pool.reserve(static_cast<std::size_t>(width));
  for (int t = 0; t < width; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::optional<double> cell_ub(const ExperimentConfig& cfg, const Cell& cell) {
  if (cfg.reference != Reference::LP) return std::nullopt;
  switch (cfg.size_spec.family) {
    case Family::Gamma:
    case Family::Normal:
    case Family::Pareto:
      return 4.0 * table_ub(cfg.size_spec.family, cell.num_ports, cfg.size_spec.cv);
    default:
      return std::nullopt;
  }
}

std::vector<StatsRow> rows_from_ratios(const Cell& cell,
                                       const std::vector<NamedPolicy>& policies,
                                       const std::vector<std::vector<double>>& ratios,
                                       std::optional<double> ub) {
  std::vector<StatsRow> rows;
  for (std::size_t p = 0; p < policies.size(); ++p) {
    StatsRow row;
    row.num_ports = cell.num_ports;
    row.num_coflows = cell.num_coflows;
    row.policy = policy_name(policies[p]);
    row.mean = mean_of(ratios[p]);
    row.stddev = sample_std(ratios[p]);
    auto q = quartiles(ratios[p]);
    row.q1 = q.q1;
    row.q3 = q.q3;
    row.ub = ub;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  // Load the trace once; instance generation then never touches the disk.
  Trace trace;
  const Trace* trace_ptr = nullptr;
  SizeSpec size_spec = cfg.size_spec;
  if (cfg.structure == StructureSource::TraceUpsample || cfg.sizes_from_trace) {
    trace = import_trace(cfg.trace_path);
    trace_ptr = &trace;
    if (cfg.sizes_from_trace) size_spec = empirical_from_trace(trace);
  }

  const bool want_cl_reference = cfg.reference == Reference::CL;
  std::vector<NamedPolicy> evaluated = cfg.policies;
  if (want_cl_reference &&
      std::find(evaluated.begin(), evaluated.end(), NamedPolicy::CL) == evaluated.end())
    evaluated.push_back(NamedPolicy::CL);

  ExperimentResult result;
  std::ostringstream raw;
  raw << "L,n,instance,rep,policy,value\n";

  for (const Cell& cell : cfg.cells) {
    std::vector<InstanceOutcome> outcomes(static_cast<std::size_t>(cfg.num_instances));

    parallel_for(cfg.num_instances, cfg.jobs, [&](int i) {
      GenConfig gen;
      gen.num_ports = cell.num_ports;
      gen.num_coflows = cell.num_coflows;
      gen.size_spec = size_spec;
      gen.structure = cfg.structure;
      gen.trace_path = cfg.trace_path;
      gen.seed = chain_seed(cfg.seed, {static_cast<std::uint64_t>(cell.num_ports),
                                       static_cast<std::uint64_t>(cell.num_coflows),
                                       static_cast<std::uint64_t>(i), kStreamInstance});
      Instance instance = generate_instance(gen, trace_ptr);
      const std::uint64_t eval_seed = chain_seed(gen.seed, {kStreamRealization});

      try {
        InstanceOutcome out;
        out.policy_means.resize(evaluated.size());
        out.per_rep.resize(evaluated.size());
        for (std::size_t p = 0; p < evaluated.size(); ++p) {
          auto eval =
              evaluate_policy(instance, evaluated[p], cfg.num_realizations, eval_seed, cfg.ph);
          out.policy_means[p] = eval.mean;
          out.per_rep[p] = std::move(eval.per_rep);
        }

        if (cfg.reference == Reference::LP) {
          std::vector<double> weights;
          for (const auto& c : instance.coflows) weights.push_back(c.weight);
          out.reference_value = solve_lp(expected_loads(instance), weights).objective;
        } else {
          auto it = std::find(evaluated.begin(), evaluated.end(), NamedPolicy::CL);
          out.reference_value = out.policy_means[static_cast<std::size_t>(it - evaluated.begin())];
        }
        outcomes[static_cast<std::size_t>(i)] = std::move(out);
      } catch (const std::exception& e) {
        // Abort the cell with a reproducible diagnostic bundle.
        std::string context = "cell (" + std::to_string(cell.num_ports) + "," +
                              std::to_string(cell.num_coflows) + ") instance " +
                              std::to_string(i) + " seed " + std::to_string(gen.seed);
        if (!cfg.out_dir.empty()) {
          namespace fs = std::filesystem;
          fs::create_directories(cfg.out_dir);
          auto path = fs::path(cfg.out_dir) /
                      ("diagnostic_instance_" + std::to_string(cell.num_ports) + "_" +
                       std::to_string(cell.num_coflows) + "_" + std::to_string(i) + ".json");
          json bundle;
          bundle["context"] = context;
          bundle["error"] = e.what();
          bundle["eval_seed"] = eval_seed;
          bundle["instance"] = instance_to_json(instance);
          std::ofstream f(path);
          f << bundle.dump(2) << '\n';
          context += " (bundle: " + path.string() + ")";
        }
        throw LimitError(context + ": " + e.what());
      }
    });

    CellResult cr;
    cr.cell = cell;
    cr.ratios.assign(cfg.policies.size(), {});
    for (int i = 0; i < cfg.num_instances; ++i) {
      const auto& out = outcomes[static_cast<std::size_t>(i)];
      cr.reference_values.push_back(out.reference_value);
      if (!(out.reference_value > 0.0))
        throw ValidationError("reference value is not positive; cannot form ratios");
      raw << cell.num_ports << ',' << cell.num_coflows << ',' << i << ",-1,"
          << (cfg.reference == Reference::LP ? "lp" : "cl_ref") << ','
          << format_double(out.reference_value) << '\n';
      for (std::size_t p = 0; p < evaluated.size(); ++p) {
        for (std::size_t r = 0; r < out.per_rep[p].size(); ++r)
          raw << cell.num_ports << ',' << cell.num_coflows << ',' << i << ',' << r << ','
              << policy_name(evaluated[p]) << ',' << format_double(out.per_rep[p][r]) << '\n';
        if (p < cfg.policies.size())
          cr.ratios[p].push_back(out.policy_means[p] / out.reference_value);
      }
    }
    cr.rows = rows_from_ratios(cell, cfg.policies, cr.ratios, cell_ub(cfg, cell));
    for (const auto& row : cr.rows) result.rows.push_back(row);
    result.cells.push_back(std::move(cr));
  }

  if (!cfg.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    {
      std::ofstream f(fs::path(cfg.out_dir) / "raw.csv");
      f << raw.str();
    }
    {
      std::ofstream f(fs::path(cfg.out_dir) / "stats.csv");
      f << stats_to_csv(result.rows);
    }
    {
      std::ofstream f(fs::path(cfg.out_dir) / "histograms.csv");
      f << "L,n,policy,bin_lo,count\n";
      for (std::size_t ci = 0; ci < result.cells.size(); ++ci) {
        const auto& cr = result.cells[ci];
        for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
          Histogram h = histogram(cr.ratios[p], 0.05);
          for (std::size_t b = 0; b < h.counts.size(); ++b) {
            if (h.counts[b] == 0) continue;
            f << cr.cell.num_ports << ',' << cr.cell.num_coflows << ','
              << policy_name(cfg.policies[p]) << ','
              << format_double(h.origin + static_cast<double>(b) * h.bin_width) << ','
              << h.counts[b] << '\n';
          }
        }
      }
    }
    {
      json meta;
      meta["config"] = experiment_config_to_json(cfg);
      std::string dump = meta["config"].dump();
      std::uint64_t hash = 1469598103934665603ULL;
      for (unsigned char ch : dump) hash = (hash ^ ch) * 1099511628211ULL;
      char hex[32];
      std::snprintf(hex, sizeof hex, "%016" PRIx64, hash);
      meta["config_hash"] = hex;
      meta["format_version"] = 1;
      meta["library_version"] = "1.0.0";
      // Nominal vs realized sampling moments; they differ for normal specs,
      // where negative draws are rejected.
      {
        Rng rng(chain_seed(cfg.seed, {kStreamAlpha, 0x4d4f4d}));
        const int draws = 200000;
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < draws; ++i) {
          double x = sample(size_spec, rng);
          s += x;
          s2 += x * x;
        }
        double mean = s / draws;
        double var = std::max(0.0, s2 / draws - mean * mean);
        meta["size_spec_moments"] = {
            {"nominal_mean", spec_mean(size_spec)},
            {"nominal_cv", spec_cv(size_spec)},
            {"realized_mean", mean},
            {"realized_cv", mean > 0.0 ? std::sqrt(var) / mean : 0.0},
            {"draws", draws}};
      }
      std::ofstream f(fs::path(cfg.out_dir) / "run_meta.json");
      f << meta.dump(2) << '\n';
    }
  }
  return result;
}

std::string stats_to_csv(const std::vector<StatsRow>& rows) {
  std::ostringstream out;
  out << "L,n,policy,mean,std,q1,q3,ub\n";
  for (const auto& r : rows) {
    out << r.num_ports << ',' << r.num_coflows << ',' << r.policy << ','
        << format_double(r.mean) << ',' << format_double(r.stddev) << ','
        << format_double(r.q1) << ',' << format_double(r.q3) << ',';
    if (r.ub) out << format_double(*r.ub);
    out << '\n';
  }
  return out.str();
}

std::vector<StatsRow> report_from_raw(const std::string& raw_csv_path) {
  std::ifstream in(raw_csv_path);
  if (!in) throw ParseError("cannot open raw csv: " + raw_csv_path);

  struct Key {
    int L, n, instance;
    bool operator<(const Key& o) const {
      return std::tie(L, n, instance) < std::tie(o.L, o.n, o.instance);
    }
  };
  // (cell, instance) -> policy -> per-rep values; reference kept separately.
  std::map<Key, std::map<std::string, std::vector<double>>> data;
  std::map<Key, double> reference;

  std::string line;
  if (!std::getline(in, line)) throw ParseError("raw csv is empty");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 6)
      throw ParseError(raw_csv_path + ":" + std::to_string(lineno) + ": expected 6 columns");
    Key key{std::stoi(fields[0]), std::stoi(fields[1]), std::stoi(fields[2])};
    int rep = std::stoi(fields[3]);
    const std::string& policy = fields[4];
    double value = std::stod(fields[5]);
    if (rep < 0 && (policy == "lp" || policy == "cl_ref"))
      reference[key] = value;
    else
      data[key][policy].push_back(value);
  }

  // Aggregate: per cell, per policy, the per-instance mean cost over the
  // reference value.
  std::map<std::pair<int, int>, std::map<std::string, std::vector<double>>> ratios;
  for (const auto& [key, policies] : data) {
    auto ref = reference.find(key);
    if (ref == reference.end())
      throw ParseError("raw csv lacks a reference row for instance " + std::to_string(key.instance));
    for (const auto& [policy, values] : policies)
      ratios[{key.L, key.n}][policy].push_back(mean_of(values) / ref->second);
  }

  std::vector<StatsRow> rows;
  for (const auto& [cell, policies] : ratios) {
    for (const auto& [policy, values] : policies) {
      StatsRow row;
      row.num_ports = cell.first;
      row.num_coflows = cell.second;
      row.policy = policy;
      row.mean = mean_of(values);
      row.stddev = sample_std(values);
      auto q = quartiles(values);
      row.q1 = q.q1;
      row.q3 = q.q3;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig cfg;
  try {
    for (const auto& c : j.at("cells")) {
      if (!c.is_array() || c.size() != 2) throw ParseError("cells must be [L, n] pairs");
      cfg.cells.push_back(Cell{c[0].get<int>(), c[1].get<int>()});
    }
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
    std::string family = spec.value("family", std::string());
    if (family == "fb_like")
      cfg.size_spec = fb_like_size_spec();
    else if (family == "empirical" && !spec.contains("table"))
      cfg.sizes_from_trace = true;
    else
      cfg.size_spec = size_spec_from_json(spec);
    std::string preset = j.value("preset", std::string());
    if (preset == "paper") {
      cfg.num_instances = 100;
      cfg.num_realizations = 1000;
    } else if (preset == "desk") {
      cfg.num_instances = 30;
      cfg.num_realizations = 300;
    } else if (!preset.empty()) {
      throw ParseError("preset must be 'paper' or 'desk'");
    }
    cfg.num_instances = j.value("instances", cfg.num_instances);
    cfg.num_realizations = j.value("realizations", cfg.num_realizations);
    if (j.contains("policies")) {
      cfg.policies.clear();
      for (const auto& p : j["policies"]) cfg.policies.push_back(policy_from_name(p.get<std::string>()));
    }
    std::string ref = j.value("reference", std::string("lp"));
    if (ref == "lp")
      cfg.reference = Reference::LP;
    else if (ref == "cl")
      cfg.reference = Reference::CL;
    else
      throw ParseError("reference must be 'lp' or 'cl'");
    cfg.seed = j.value("seed", 1ULL);
    cfg.out_dir = j.value("out_dir", std::string());
    cfg.jobs = j.value("jobs", 1);
    if (j.contains("ph")) {
      const auto& p = j["ph"];
      cfg.ph.num_queues = p.value("num_queues", cfg.ph.num_queues);
      cfg.ph.q0_hi = p.value("q0_hi", cfg.ph.q0_hi);
      cfg.ph.growth = p.value("growth", cfg.ph.growth);
      cfg.ph.weight_decay = p.value("weight_decay", cfg.ph.weight_decay);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  json cells = json::array();
  for (const auto& c : cfg.cells) cells.push_back(json::array({c.num_ports, c.num_coflows}));
  j["cells"] = std::move(cells);
  if (cfg.sizes_from_trace)
    j["size_spec"] = {{"family", "empirical"}};
  else
    j["size_spec"] = size_spec_to_json(cfg.size_spec);
  j["structure"] = cfg.structure == StructureSource::Synthetic ? "synthetic"
                                                               : "trace:" + cfg.trace_path;
  if (!cfg.trace_path.empty()) j["trace_path"] = cfg.trace_path;
  j["instances"] = cfg.num_instances;
  j["realizations"] = cfg.num_realizations;
  json policies = json::array();
  for (auto p : cfg.policies) policies.push_back(policy_name(p));
  j["policies"] = std::move(policies);
  j["reference"] = cfg.reference == Reference::LP ? "lp" : "cl";
  j["seed"] = cfg.seed;
  if (!cfg.out_dir.empty()) j["out_dir"] = cfg.out_dir;
  j["jobs"] = cfg.jobs;
  j["ph"] = {{"num_queues", cfg.ph.num_queues},
             {"q0_hi", cfg.ph.q0_hi},
             {"growth", cfg.ph.growth},
             {"weight_decay", cfg.ph.weight_decay}};
  return j;
}

SizeSpec fb_like_size_spec() {
  SizeSpec spec;
  spec.family = Family::Empirical;
  spec.table = {{1.0, 0.62}, {5.0, 0.20}, {20.0, 0.10},
                {100.0, 0.06}, {1000.0, 0.017}, {10000.0, 0.003}};
  spec.mean = spec_mean(spec);
  spec.cv = spec_cv(spec);
  return spec;
}

}  // namespace coflow
