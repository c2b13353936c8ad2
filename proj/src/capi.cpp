#include "coflow/coflow.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "errors.hpp"
#include "harness.hpp"
#include "json_io.hpp"
#include "lp.hpp"
#include "bounds.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
coflow_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const coflow::ParseError& e) {
    g_last_error = e.what();
    return COFLOW_ERR_PARSE;
  } catch (const coflow::ValidationError& e) {
    g_last_error = e.what();
    return COFLOW_ERR_INVALID;
  } catch (const coflow::LimitError& e) {
    g_last_error = e.what();
    return COFLOW_ERR_LIMIT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return COFLOW_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return COFLOW_ERR_INTERNAL;
  }
}

coflow::PhConfig ph_from_json(const nlohmann::json& j) {
  coflow::PhConfig ph;
  ph.num_queues = j.value("num_queues", ph.num_queues);
  ph.q0_hi = j.value("q0_hi", ph.q0_hi);
  ph.growth = j.value("growth", ph.growth);
  ph.weight_decay = j.value("weight_decay", ph.weight_decay);
  return ph;
}

}  // namespace

struct coflow_instance {
  coflow::Instance value;
};

extern "C" {

const char* coflow_last_error(void) { return g_last_error.c_str(); }

void coflow_string_free(char* s) { std::free(s); }

coflow_status coflow_instance_parse(const char* json_text, coflow_instance** out) {
  return guarded([&]() {
    if (json_text == nullptr || out == nullptr) {
      g_last_error = "null argument";
      return COFLOW_ERR_INVALID;
    }
    auto j = coflow::parse_json_text(json_text, "instance");
    *out = new coflow_instance{coflow::instance_from_json(j)};
    return COFLOW_OK;
  });
}

coflow_status coflow_instance_read(const char* path, coflow_instance** out) {
  return guarded([&]() {
    if (path == nullptr || out == nullptr) {
      g_last_error = "null argument";
      return COFLOW_ERR_INVALID;
    }
    *out = new coflow_instance{coflow::load_instance_file(path)};
    return COFLOW_OK;
  });
}

coflow_status coflow_instance_to_json(const coflow_instance* instance, char** out_json) {
  return guarded([&]() {
    if (instance == nullptr || out_json == nullptr) {
      g_last_error = "null argument";
      return COFLOW_ERR_INVALID;
    }
    *out_json = dup_string(coflow::instance_to_json(instance->value).dump(2));
    return *out_json != nullptr ? COFLOW_OK : COFLOW_ERR_INTERNAL;
  });
}

void coflow_instance_free(coflow_instance* instance) { delete instance; }

coflow_status coflow_generate(const char* gen_config_json, coflow_instance** out) {
  return guarded([&]() {
    if (gen_config_json == nullptr || out == nullptr) {
      g_last_error = "null argument";
      return COFLOW_ERR_INVALID;
    }
    auto cfg = coflow::gen_config_from_json(
        coflow::parse_json_text(gen_config_json, "generator config"));
    *out = new coflow_instance{coflow::generate_instance(cfg)};
    return COFLOW_OK;
  });
}

coflow_status coflow_order(const coflow_instance* instance, char** out_json) {
  return guarded([&]() {
    if (instance == nullptr || out_json == nullptr) {
      g_last_error = "null argument";
      return COFLOW_ERR_INVALID;
    }
    const auto& inst = instance->value;
    std::vector<double> weights;
    for (const auto& c : inst.coflows) weights.push_back(c.weight);
    auto mu = coflow::expected_loads(inst);
    auto order = coflow::sincronia_order(mu, weights);

    nlohmann::json j;
    nlohmann::json pi = nlohmann::json::array();
    nlohmann::json primal = nlohmann::json::array();
    for (int k : order.pi) {
      pi.push_back(inst.coflows[static_cast<std::size_t>(k)].id);
      primal.push_back(order.primal_c[static_cast<std::size_t>(k)]);
    }
    j["pi"] = std::move(pi);
    j["primal_c"] = std::move(primal);
    j["alg1_cost"] = coflow::alg1_cost(order, weights);
    j["dual_objective"] = coflow::dual_objective(order);
    bool feasible = true;
    for (double s : coflow::dual_slacks(order, weights))
      if (s < -1e-9) feasible = false;
    j["dual_feasible"] = feasible;
    *out_json = dup_string(j.dump(2));
    return *out_json != nullptr ? COFLOW_OK : COFLOW_ERR_INTERNAL;
  });
}

coflow_status coflow_lp(const coflow_instance* instance, char** out_json) {
  return guarded([&]() {
    if (instance == nullptr || out_json == nullptr) {
      g_last_error = "null argument";
      return COFLOW_ERR_INVALID;
    }
    const auto& inst = instance->value;
    std::vector<double> weights;
    for (const auto& c : inst.coflows) weights.push_back(c.weight);
    auto sol = coflow::solve_lp(coflow::expected_loads(inst), weights);
    nlohmann::json j;
    j["clp"] = sol.objective;
    j["num_cuts"] = sol.num_cuts;
    j["iterations"] = sol.iterations;
    *out_json = dup_string(j.dump(2));
    return *out_json != nullptr ? COFLOW_OK : COFLOW_ERR_INTERNAL;
  });
}

coflow_status coflow_simulate(const coflow_instance* instance, const char* options_json,
                              char** out_json) {
  return guarded([&]() {
    if (instance == nullptr || options_json == nullptr || out_json == nullptr) {
      g_last_error = "null argument";
      return COFLOW_ERR_INVALID;
    }
    const auto& inst = instance->value;
    auto opts = coflow::parse_json_text(options_json, "simulate options");
    const auto policy = coflow::policy_from_name(opts.value("policy", std::string("nc")));
    const int reps = opts.value("realizations", 1);
    const std::uint64_t seed = opts.value("seed", 0ULL);
    const bool events = opts.value("events", false);
    coflow::PhConfig ph;
    if (opts.contains("ph")) ph = ph_from_json(opts["ph"]);

    std::vector<double> weights;
    for (const auto& c : inst.coflows) weights.push_back(c.weight);

    nlohmann::json j;
    j["policy"] = coflow::policy_name(policy);

    if (opts.contains("realization") || (events && reps == 1)) {
      // One realization, either supplied explicitly or drawn from the seed
      // exactly like replication 0 of the Monte-Carlo path.
      auto real = opts.contains("realization")
                      ? coflow::realization_from_json(inst, opts["realization"])
                      : coflow::sample_realization(
                            inst, coflow::chain_seed(seed, {coflow::kStreamRealization, 0}));
      coflow::Policy p;
      switch (policy) {
        case coflow::NamedPolicy::NC:
          p = coflow::Policy::priority(
              coflow::sincronia_order(coflow::expected_loads(inst), weights).pi);
          break;
        case coflow::NamedPolicy::CL:
          p = coflow::Policy::priority(
              coflow::sincronia_order(coflow::realized_loads(inst, real), weights).pi);
          break;
        case coflow::NamedPolicy::RR:
          p = coflow::Policy::round_robin();
          break;
        case coflow::NamedPolicy::PH:
          p = coflow::Policy::philae(ph);
          break;
        case coflow::NamedPolicy::RO: {
          coflow::Rng rng(coflow::chain_seed(seed, {coflow::kStreamRandomOrder, 0}));
          std::vector<int> perm(inst.coflows.size());
          for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
          for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[rng.below(i)]);
          p = coflow::Policy::priority(std::move(perm));
          break;
        }
      }
      auto result = coflow::simulate(inst, real, p, events);
      j["mean"] = result.weighted_cct(weights);
      j["std_error"] = 0.0;
      j["reps"] = nlohmann::json::array(
          {{{"rep", 0}, {"weighted_cct", result.weighted_cct(weights)}}});
      if (events) {
        nlohmann::json evs = nlohmann::json::array();
        for (const auto& seg : result.events) {
          nlohmann::json e;
          e["t_begin"] = seg.t_begin;
          e["t_end"] = seg.t_end;
          e["rates"] = seg.rates;
          evs.push_back(std::move(e));
        }
        j["events"] = std::move(evs);
        nlohmann::json completions = nlohmann::json::array();
        for (std::size_t k = 0; k < inst.coflows.size(); ++k)
          completions.push_back({{"coflow", inst.coflows[k].id},
                                 {"completion", result.coflow_completion[k]}});
        j["completions"] = std::move(completions);
      }
    } else {
      auto eval = coflow::evaluate_policy(inst, policy, reps, seed, ph);
      j["mean"] = eval.mean;
      j["std_error"] = eval.std_error;
      nlohmann::json out_reps = nlohmann::json::array();
      for (std::size_t r = 0; r < eval.per_rep.size(); ++r)
        out_reps.push_back({{"rep", static_cast<int>(r)}, {"weighted_cct", eval.per_rep[r]}});
      j["reps"] = std::move(out_reps);
    }
    *out_json = dup_string(j.dump(2));
    return *out_json != nullptr ? COFLOW_OK : COFLOW_ERR_INTERNAL;
  });
}

coflow_status coflow_sample_realization(const coflow_instance* instance,
                                        unsigned long long seed, char** out_json) {
  return guarded([&]() {
    if (instance == nullptr || out_json == nullptr) {
      g_last_error = "null argument";
      return COFLOW_ERR_INVALID;
    }
    auto real = coflow::sample_realization(instance->value, seed);
    *out_json = dup_string(coflow::realization_to_json(instance->value, real).dump(2));
    return *out_json != nullptr ? COFLOW_OK : COFLOW_ERR_INTERNAL;
  });
}

coflow_status coflow_ub_gamma(unsigned num_ports, double gamma, double* out) {
  return guarded([&]() {
    if (out == nullptr) {
      g_last_error = "null argument";
      return COFLOW_ERR_INVALID;
    }
    *out = coflow::ub_gamma(static_cast<int>(num_ports), gamma);
    return COFLOW_OK;
  });
}

coflow_status coflow_ub_normal(unsigned num_ports, double eta_max, double* out) {
  return guarded([&]() {
    if (out == nullptr) {
      g_last_error = "null argument";
      return COFLOW_ERR_INVALID;
    }
    *out = coflow::ub_normal(static_cast<int>(num_ports), eta_max);
    return COFLOW_OK;
  });
}

coflow_status coflow_ub_general(unsigned num_ports, double p, double m_p, double mu_min,
                                double* out) {
  return guarded([&]() {
    if (out == nullptr) {
      g_last_error = "null argument";
      return COFLOW_ERR_INVALID;
    }
    *out = coflow::ub_general_p(static_cast<int>(num_ports), p, m_p, mu_min);
    return COFLOW_OK;
  });
}

coflow_status coflow_pareto_scaling_report(double eta, unsigned num_points,
                                           unsigned prefix_len, unsigned samples,
                                           unsigned long long seed, char** out_json) {
  return guarded([&]() {
    if (out_json == nullptr || num_points == 0) {
      g_last_error = "null output or zero points";
      return COFLOW_ERR_INVALID;
    }
    std::vector<int> ports;
    for (unsigned i = 1; i <= num_points; ++i) ports.push_back(1 << i);
    auto report = coflow::pareto_scaling_report(eta, ports, static_cast<int>(prefix_len),
                                                static_cast<int>(samples), seed);
    nlohmann::json j;
    j["ports"] = report.num_ports;
    j["mean_ratio"] = report.mean_ratio;
    j["slope"] = report.slope;
    j["pareto_shape"] = report.pareto_shape;
    *out_json = dup_string(j.dump(2));
    return *out_json != nullptr ? COFLOW_OK : COFLOW_ERR_INTERNAL;
  });
}

coflow_status coflow_experiment_run(const char* config_json, char** out_stats_csv) {
  return guarded([&]() {
    if (config_json == nullptr || out_stats_csv == nullptr) {
      g_last_error = "null argument";
      return COFLOW_ERR_INVALID;
    }
    auto cfg = coflow::experiment_config_from_json(
        coflow::parse_json_text(config_json, "experiment config"));
    auto result = coflow::run_experiment(cfg);
    *out_stats_csv = dup_string(coflow::stats_to_csv(result.rows));
    return *out_stats_csv != nullptr ? COFLOW_OK : COFLOW_ERR_INTERNAL;
  });
}

coflow_status coflow_report(const char* raw_csv_path, char** out_stats_csv) {
  return guarded([&]() {
    if (raw_csv_path == nullptr || out_stats_csv == nullptr) {
      g_last_error = "null argument";
      return COFLOW_ERR_INVALID;
    }
    auto rows = coflow::report_from_raw(raw_csv_path);
    *out_stats_csv = dup_string(coflow::stats_to_csv(rows));
    return *out_stats_csv != nullptr ? COFLOW_OK : COFLOW_ERR_INTERNAL;
  });
}

}  // extern "C"
