#include "workload.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace coflow {

std::vector<double> Trace::flow_sizes() const {
  std::vector<double> out;
  for (const auto& c : coflows) {
    const double m = static_cast<double>(c.mapper_racks.size());
    for (const auto& r : c.reducers)
      for (std::size_t i = 0; i < c.mapper_racks.size(); ++i)
        out.push_back(r.size_mb / m);
  }
  return out;
}

namespace {

[[noreturn]] void parse_fail(const std::string& name, int line, const std::string& why) {
  throw ParseError(name + ":" + std::to_string(line) + ": " + why);
}

}  // namespace

Trace parse_trace(std::istream& in, const std::string& name) {
  Trace trace;
  std::string line;
  int lineno = 0;

  if (!std::getline(in, line)) parse_fail(name, 1, "empty trace file");
  ++lineno;
  {
    std::istringstream head(line);
    int ncf = 0;
    if (!(head >> trace.num_ports >> ncf) || trace.num_ports <= 0 || ncf < 0)
      parse_fail(name, lineno, "expected header '<num_ports> <num_coflows>'");
    trace.coflows.reserve(static_cast<std::size_t>(ncf));
  }

  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream ls(line);
    TraceCoflow c;
    int nm = 0, nr = 0;
    if (!(ls >> c.id >> c.arrival_ms >> nm)) parse_fail(name, lineno, "bad coflow header");
    if (nm <= 0) parse_fail(name, lineno, "mapper count must be positive");
    c.mapper_racks.resize(static_cast<std::size_t>(nm));
    for (int i = 0; i < nm; ++i) {
      if (!(ls >> c.mapper_racks[i])) parse_fail(name, lineno, "missing mapper port");
      if (c.mapper_racks[i] < 0 || c.mapper_racks[i] >= trace.num_ports)
        parse_fail(name, lineno, "mapper port out of range");
    }
    if (!(ls >> nr) || nr <= 0) parse_fail(name, lineno, "bad reducer count");
    c.reducers.resize(static_cast<std::size_t>(nr));
    for (int i = 0; i < nr; ++i) {
      std::string tok;
      if (!(ls >> tok)) parse_fail(name, lineno, "missing reducer entry");
      auto colon = tok.find(':');
      if (colon == std::string::npos) parse_fail(name, lineno, "reducer entry must be port:size");
      try {
        c.reducers[i].rack = std::stoi(tok.substr(0, colon));
        c.reducers[i].size_mb = std::stod(tok.substr(colon + 1));
      } catch (const std::exception&) {
        parse_fail(name, lineno, "malformed reducer entry '" + tok + "'");
      }
      if (c.reducers[i].rack < 0 || c.reducers[i].rack >= trace.num_ports)
        parse_fail(name, lineno, "reducer port out of range");
      if (c.reducers[i].size_mb < 0.0) parse_fail(name, lineno, "negative reducer size");
    }
    trace.coflows.push_back(std::move(c));
  }
  if (trace.coflows.empty()) parse_fail(name, lineno, "trace has no coflows");
  return trace;
}

Trace import_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file: " + path);
  return parse_trace(in, path);
}

SizeSpec empirical_from_trace(const Trace& trace) {
  return empirical_from_values(trace.flow_sizes());
}

void GenConfig::validate() const {
  if (num_ports < 2 || num_ports % 2 != 0)
    throw ValidationError("generator needs an even number of ports >= 2");
  if (num_coflows < 1) throw ValidationError("generator needs at least one coflow");
  if (!(capacity > 0.0)) throw ValidationError("port capacity must be positive");
  if (!sizes_from_trace) size_spec.validate();
  if ((structure == StructureSource::TraceUpsample || sizes_from_trace) && trace_path.empty())
    throw ValidationError("trace-based generation requires a trace path");
}

namespace {

// k distinct values from [base, base+range), sorted; falls back to sampling
// with replacement when k exceeds the range (skeleton wider than the switch).
std::vector<int> sample_ports(Rng& rng, int base, int range, int k) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  if (k <= range) {
    std::vector<int> pool(static_cast<std::size_t>(range));
    for (int i = 0; i < range; ++i) pool[static_cast<std::size_t>(i)] = base + i;
    for (int i = 0; i < k; ++i) {
      std::size_t j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(range - i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
      out.push_back(pool[static_cast<std::size_t>(i)]);
    }
  } else {
    for (int i = 0; i < k; ++i) out.push_back(base + static_cast<int>(rng.below(static_cast<std::uint64_t>(range))));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Coflow synthetic_coflow(Rng& rng, int coflow_id, int half, const SizeSpec& spec) {
  int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(half)));
  int r = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(half)));
  std::vector<int> mappers = sample_ports(rng, 0, half, m);
  std::vector<int> reducers = sample_ports(rng, half, half, r);
  Coflow c;
  c.id = coflow_id;
  c.weight = 1.0;
  int fid = 0;
  for (int src : mappers)
    for (int dst : reducers)
      c.flows.push_back(FlowSpec{coflow_id, fid++, src, dst, spec});
  return c;
}

Coflow upsampled_coflow(Rng& rng, int coflow_id, int half, const SizeSpec& spec,
                        const TraceCoflow& skel) {
  // Remap the skeleton's distinct racks onto this instance's ports.
  std::vector<int> mracks = skel.mapper_racks;
  std::sort(mracks.begin(), mracks.end());
  mracks.erase(std::unique(mracks.begin(), mracks.end()), mracks.end());
  std::vector<int> rracks;
  for (const auto& red : skel.reducers) rracks.push_back(red.rack);
  std::sort(rracks.begin(), rracks.end());
  rracks.erase(std::unique(rracks.begin(), rracks.end()), rracks.end());

  std::vector<int> mports = sample_ports(rng, 0, half, static_cast<int>(mracks.size()));
  std::vector<int> rports = sample_ports(rng, half, half, static_cast<int>(rracks.size()));
  auto map_of = [](const std::vector<int>& racks, const std::vector<int>& ports, int rack) {
    auto it = std::lower_bound(racks.begin(), racks.end(), rack);
    return ports[static_cast<std::size_t>(it - racks.begin())];
  };

  Coflow c;
  c.id = coflow_id;
  c.weight = 1.0;
  int fid = 0;
  for (const auto& red : skel.reducers)
    for (int mr : skel.mapper_racks)
      c.flows.push_back(FlowSpec{coflow_id, fid++, map_of(mracks, mports, mr),
                                 map_of(rracks, rports, red.rack), spec});
  return c;
}

Coflow identity_coflow(int coflow_id, const SizeSpec& spec, const TraceCoflow& skel) {
  Coflow c;
  c.id = coflow_id;
  c.weight = 1.0;
  int fid = 0;
  for (const auto& red : skel.reducers)
    for (int mr : skel.mapper_racks)
      c.flows.push_back(FlowSpec{coflow_id, fid++, mr, red.rack, spec});
  return c;
}

}  // namespace

Instance generate_instance(const GenConfig& cfg, const Trace* trace) {
  cfg.validate();
  const int L = cfg.num_ports;
  const int half = L / 2;
  Rng rng(chain_seed(cfg.seed, {kStreamStructure}));

  Trace local;
  if (trace == nullptr &&
      (cfg.structure == StructureSource::TraceUpsample || cfg.sizes_from_trace)) {
    local = import_trace(cfg.trace_path);
    trace = &local;
  }
  SizeSpec spec = cfg.size_spec;
  if (cfg.sizes_from_trace) spec = empirical_from_trace(*trace);

  Instance inst;
  inst.ports.resize(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l)
    inst.ports[static_cast<std::size_t>(l)] =
        Port{l, l < half ? PortKind::Ingress : PortKind::Egress, cfg.capacity};

  if (cfg.structure == StructureSource::Synthetic) {
    for (int k = 0; k < cfg.num_coflows; ++k)
      inst.coflows.push_back(synthetic_coflow(rng, k, half, spec));
  } else {
    const bool identity = trace->num_ports == L &&
                          static_cast<int>(trace->coflows.size()) == cfg.num_coflows;
    for (int k = 0; k < cfg.num_coflows; ++k) {
      const TraceCoflow& skel =
          identity ? trace->coflows[static_cast<std::size_t>(k)]
                   : trace->coflows[rng.below(trace->coflows.size())];
      inst.coflows.push_back(identity ? identity_coflow(k, spec, skel)
                                      : upsampled_coflow(rng, k, half, spec, skel));
    }
  }
  inst.validate();
  return inst;
}

Instance generate_instance(const GenConfig& cfg) { return generate_instance(cfg, nullptr); }

}  // namespace coflow
