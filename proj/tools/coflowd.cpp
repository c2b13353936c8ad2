// coflowd: command-line front end for libcoflow.
//
// Subcommands: gen, order, lp, simulate, ub, experiment, report. Everything
// goes through the public C API; this binary only shuffles JSON and CSV.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coflow/coflow.h"

namespace {

using nlohmann::json;

[[noreturn]] void die(const std::string& context) {
  std::cerr << "coflowd: " << context;
  const char* detail = coflow_last_error();
  if (detail != nullptr && detail[0] != '\0') std::cerr << ": " << detail;
  std::cerr << '\n';
  std::exit(1);
}

std::string take_string(char* s) {
  std::string out = s != nullptr ? s : "";
  coflow_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) die("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) die("cannot write " + path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

coflow_instance* load_instance(const std::string& path) {
  coflow_instance* inst = nullptr;
  if (coflow_instance_read(path.c_str(), &inst) != COFLOW_OK) die("loading " + path);
  return inst;
}

struct DistOptions {
  std::string family = "fixed";
  double mean = 10.0;
  double cv = 0.0;
  std::string trace;  // empirical table source

  // An "empirical" family without a table tells the generator to derive the
  // table from the trace's observed flow sizes.
  json to_json() const {
    json j;
    j["family"] = family;
    if (family != "empirical") {
      j["mean"] = mean;
      j["cv"] = cv;
    }
    return j;
  }
};

int cmd_gen(int ports, int coflows, const DistOptions& dist, const std::string& structure,
            std::uint64_t seed, const std::string& out_path) {
  json cfg;
  cfg["num_ports"] = ports;
  cfg["num_coflows"] = coflows;
  cfg["structure"] = structure;
  cfg["seed"] = seed;
  cfg["size_spec"] = dist.to_json();
  if (!dist.trace.empty()) cfg["trace_path"] = dist.trace;

  coflow_instance* inst = nullptr;
  if (coflow_generate(cfg.dump().c_str(), &inst) != COFLOW_OK) die("generating instance");
  char* text = nullptr;
  if (coflow_instance_to_json(inst, &text) != COFLOW_OK) die("serializing instance");
  write_output(take_string(text), out_path);
  coflow_instance_free(inst);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"priority-based stochastic coflow scheduling toolkit"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a random instance (JSON to stdout)");
  int gen_ports = 4, gen_coflows = 4;
  DistOptions gen_dist;
  std::string gen_structure = "synthetic";
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--ports,-L", gen_ports, "number of ports (even)")->required();
  gen->add_option("--coflows,-n", gen_coflows, "number of coflows")->required();
  gen->add_option("--dist", gen_dist.family, "fixed|gamma|normal|pareto|empirical")
      ->default_val("fixed");
  gen->add_option("--mean", gen_dist.mean, "mean flow size")->default_val(10.0);
  gen->add_option("--cv", gen_dist.cv, "coefficient of variation")->default_val(0.0);
  gen->add_option("--structure", gen_structure, "synthetic | trace:<path>");
  gen->add_option("--trace", gen_dist.trace, "trace file for --dist empirical");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("-o,--out", gen_out, "output file (default stdout)");

  // ---- order ----
  auto* order = app.add_subcommand("order", "priority order from expected loads");
  std::string order_instance, order_out;
  order->add_option("instance", order_instance, "instance JSON file")->required();
  order->add_option("-o,--out", order_out, "output file (default stdout)");

  // ---- lp ----
  auto* lp = app.add_subcommand("lp", "LP lower bound via cutting planes");
  std::string lp_instance, lp_out;
  lp->add_option("instance", lp_instance, "instance JSON file")->required();
  lp->add_option("-o,--out", lp_out, "output file (default stdout)");

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo policy evaluation");
  std::string sim_instance, sim_policy = "nc", sim_out, sim_events_out, sim_realization;
  int sim_reps = 1;
  std::uint64_t sim_seed = 1;
  sim->add_option("instance", sim_instance, "instance JSON file")->required();
  sim->add_option("--policy", sim_policy, "cl|nc|rr|ro|ph")->required();
  sim->add_option("--realizations,-R", sim_reps, "number of realizations");
  sim->add_option("--seed", sim_seed, "realization seed");
  sim->add_option("--realization", sim_realization, "run one explicit realization JSON file");
  sim->add_option("--trace", sim_events_out, "write the rate event log JSON here (R=1)");
  sim->add_option("-o,--out", sim_out, "per-replication CSV output (default stdout)");

  // ---- ub ----
  auto* ub = app.add_subcommand("ub", "closed-form approximation-ratio bounds");
  std::string ub_dist = "gamma";
  int ub_ports = 4;
  double ub_eta = 0.5, ub_p = 2.0, ub_mp = 0.0, ub_mumin = 1.0;
  bool ub_scaling = false;
  ub->add_option("--dist", ub_dist, "gamma|normal|pareto|general");
  ub->add_option("-L,--ports", ub_ports, "number of ports")->required();
  ub->add_option("--eta", ub_eta, "coefficient of variation (table mode)");
  ub->add_option("--p", ub_p, "moment order (general mode)");
  ub->add_option("--mp", ub_mp, "p-th moment bound (general mode)");
  ub->add_option("--mumin", ub_mumin, "smallest positive expected load (general mode)");
  ub->add_flag("--pareto-scaling-report", ub_scaling,
               "also print the empirical bottleneck growth report");

  // ---- experiment ----
  auto* exp = app.add_subcommand("experiment", "run an experiment grid from a config file");
  std::string exp_config, exp_out_dir, exp_preset;
  int exp_instances = 0, exp_reps = 0, exp_jobs = 0;
  std::uint64_t exp_seed = 0;
  bool exp_seed_set = false;
  exp->add_option("--config", exp_config, "experiment config JSON")->required();
  exp->add_option("--out", exp_out_dir, "output directory override");
  exp->add_option("--preset", exp_preset, "desk (I=30,R=300) or paper (I=100,R=1000)");
  exp->add_option("--instances", exp_instances, "override instance count");
  exp->add_option("--realizations", exp_reps, "override realization count");
  exp->add_option("--jobs", exp_jobs, "worker threads (outputs unaffected)");
  exp->add_option("--seed", exp_seed, "seed override")->each([&](const std::string&) {
    exp_seed_set = true;
  });

  // ---- report ----
  auto* rep = app.add_subcommand("report", "stats table from a raw.csv");
  std::string rep_raw, rep_out;
  rep->add_option("--raw", rep_raw, "raw.csv from a previous run")->required();
  rep->add_option("-o,--out", rep_out, "stats CSV output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed())
    return cmd_gen(gen_ports, gen_coflows, gen_dist, gen_structure, gen_seed, gen_out);

  if (order->parsed()) {
    coflow_instance* inst = load_instance(order_instance);
    char* text = nullptr;
    if (coflow_order(inst, &text) != COFLOW_OK) die("computing order");
    write_output(take_string(text), order_out);
    coflow_instance_free(inst);
    return 0;
  }

  if (lp->parsed()) {
    coflow_instance* inst = load_instance(lp_instance);
    char* text = nullptr;
    if (coflow_lp(inst, &text) != COFLOW_OK) die("solving LP");
    write_output(take_string(text), lp_out);
    coflow_instance_free(inst);
    return 0;
  }

  if (sim->parsed()) {
    coflow_instance* inst = load_instance(sim_instance);
    json opts;
    opts["policy"] = sim_policy;
    opts["realizations"] = sim_reps;
    opts["seed"] = sim_seed;
    if (!sim_events_out.empty()) {
      opts["events"] = true;
      if (sim_reps != 1 && sim_realization.empty())
        die("--trace requires --realizations 1 or --realization");
    }
    if (!sim_realization.empty())
      opts["realization"] = json::parse(read_file(sim_realization));

    char* text = nullptr;
    if (coflow_simulate(inst, opts.dump().c_str(), &text) != COFLOW_OK) die("simulating");
    json result = json::parse(take_string(text));

    std::ostringstream csv;
    csv << "instance_id,rep_id,policy,weighted_cct\n";
    for (const auto& r : result["reps"])
      csv << 0 << ',' << r["rep"].get<int>() << ',' << sim_policy << ','
          << r["weighted_cct"].get<double>() << '\n';
    write_output(csv.str(), sim_out);

    if (!sim_events_out.empty()) {
      json evs;
      evs["policy"] = result["policy"];
      if (result.contains("events")) evs["events"] = result["events"];
      if (result.contains("completions")) evs["completions"] = result["completions"];
      write_output(evs.dump(2), sim_events_out);
    }
    coflow_instance_free(inst);
    return 0;
  }

  if (ub->parsed()) {
    double alpha = 0.0;
    coflow_status st = COFLOW_OK;
    if (ub_dist == "gamma") {
      st = coflow_ub_gamma(static_cast<unsigned>(ub_ports), ub_eta * ub_eta, &alpha);
    } else if (ub_dist == "normal") {
      st = coflow_ub_normal(static_cast<unsigned>(ub_ports), ub_eta, &alpha);
    } else if (ub_dist == "pareto") {
      st = coflow_ub_general(static_cast<unsigned>(ub_ports), 2.0, ub_eta * ub_eta, 1.0, &alpha);
    } else if (ub_dist == "general") {
      st = coflow_ub_general(static_cast<unsigned>(ub_ports), ub_p, ub_mp, ub_mumin, &alpha);
    } else {
      die("unknown --dist " + ub_dist);
    }
    if (st != COFLOW_OK) die("computing bound");
    std::cout << "alpha_bound " << alpha << "\nratio_bound " << 4.0 * alpha << '\n';

    if (ub_scaling) {
      char* text = nullptr;
      if (coflow_pareto_scaling_report(ub_eta, 7, 8, 2000, 1, &text) != COFLOW_OK)
        die("scaling report");
      json rep = json::parse(take_string(text));
      std::cout << "pareto_shape " << rep["pareto_shape"].get<double>() << '\n';
      for (std::size_t i = 0; i < rep["ports"].size(); ++i)
        std::cout << "L " << rep["ports"][i].get<int>() << "  mean_bottleneck_ratio "
                  << rep["mean_ratio"][i].get<double>() << '\n';
      std::cout << "loglog_slope " << rep["slope"].get<double>()
                << "  (1/shape = " << 1.0 / rep["pareto_shape"].get<double>() << ")\n";
    }
    return 0;
  }

  if (exp->parsed()) {
    json cfg = json::parse(read_file(exp_config));
    if (!exp_out_dir.empty()) cfg["out_dir"] = exp_out_dir;
    if (!exp_preset.empty()) cfg["preset"] = exp_preset;
    if (exp_instances > 0) cfg["instances"] = exp_instances;
    if (exp_reps > 0) cfg["realizations"] = exp_reps;
    if (exp_jobs > 0) cfg["jobs"] = exp_jobs;
    if (exp_seed_set) cfg["seed"] = exp_seed;

    char* text = nullptr;
    if (coflow_experiment_run(cfg.dump().c_str(), &text) != COFLOW_OK) die("running experiment");
    std::cout << take_string(text);
    return 0;
  }

  if (rep->parsed()) {
    char* text = nullptr;
    if (coflow_report(rep_raw.c_str(), &text) != COFLOW_OK) die("building report");
    write_output(take_string(text), rep_out);
    return 0;
  }

  return 0;
}
