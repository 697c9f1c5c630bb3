#include "olcq/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "olcq/util.hpp"

namespace olcq {

namespace {

namespace fs = std::filesystem;

class KvReader {
public:
  explicit KvReader(const std::map<std::string, std::string>& kv,
                    const std::string& section)
      : kv_(kv), section_(section) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback = "") const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }

  double num(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
      std::size_t used = 0;
      double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing junk");
      return v;
    } catch (const std::exception&) {
      throw InputError("config: [" + section_ + "] " + key + " = `" + it->second +
                       "` is not a number");
    }
  }

  long long integer(const std::string& key, long long fallback) const {
    const double v = num(key, static_cast<double>(fallback));
    auto r = static_cast<long long>(v);
    if (static_cast<double>(r) != v)
      throw InputError("config: [" + section_ + "] " + key + " must be an integer");
    return r;
  }

  bool flag(const std::string& key, bool fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw InputError("config: [" + section_ + "] " + key + " must be true or false");
  }

private:
  const std::map<std::string, std::string>& kv_;
  std::string section_;
};

FilterPolicy parse_policy(const std::string& s) {
  if (s == "any-position" || s == "any") return FilterPolicy::AnyPosition;
  if (s == "mean") return FilterPolicy::Mean;
  throw InputError("config: unknown filter policy `" + s + "`");
}

AnsatzKind parse_ansatz(const std::string& s) {
  if (s == "product") return AnsatzKind::Product;
  if (s == "block") return AnsatzKind::Block;
  if (s == "full-linear") return AnsatzKind::FullLinear;
  throw InputError("config: unknown ansatz `" + s + "`");
}

OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "spsa") return OptimizerKind::Spsa;
  if (s == "coordinate-search") return OptimizerKind::CoordinateSearch;
  throw InputError("config: unknown optimizer `" + s + "`");
}

VqeStageConfig vqe_from_kv(const std::map<std::string, std::string>& kv) {
  KvReader r(kv, "vqe");
  VqeStageConfig cfg;
  cfg.vqe.ansatz.kind = parse_ansatz(r.str("ansatz", "block"));
  cfg.vqe.ansatz.reps = static_cast<int>(r.integer("reps", 2));
  cfg.vqe.shots = static_cast<std::uint64_t>(r.integer("shots", 4000));
  cfg.vqe.max_iters = static_cast<int>(r.integer("max_iters", 300));
  cfg.vqe.cvar_alpha = r.num("cvar_alpha", 0.2);
  cfg.vqe.optimizer = parse_optimizer(r.str("optimizer", "spsa"));
  cfg.vqe.gains.a = r.num("spsa_a", 0.15);
  cfg.vqe.gains.c = r.num("spsa_c", 0.1);
  cfg.vqe.gains.stability = r.num("spsa_stability", -1);
  cfg.vqe.recovery_enabled = r.flag("recovery", true);
  cfg.vqe.fix_endpoints = r.flag("fix_endpoints", true);
  cfg.vqe.init_spread = r.num("init_spread", 0.5);
  cfg.vqe.stop_when_violation_free = r.flag("stop_when_violation_free", false);
  if (r.has("seed")) {
    cfg.vqe.seed = static_cast<std::uint64_t>(r.integer("seed", 1));
    cfg.seed_set = true;
  }
  cfg.a1 = r.num("a1", 5);
  cfg.a2 = r.num("a2", 5);
  cfg.validity_penalty = r.flag("include_validity", false);
  cfg.warm_start_file = r.str("warm_start");
  if (cfg.vqe.shots < 1) throw InputError("config: shots must be >= 1");
  if (!(cfg.vqe.cvar_alpha > 0) || cfg.vqe.cvar_alpha > 1)
    throw InputError("config: cvar_alpha must lie in (0, 1]");
  return cfg;
}

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Dp: return "dp";
    case Provenance::Brute: return "brute";
    case Provenance::Vqe: return "vqe";
  }
  return "?";
}

}  // namespace

KvSections parse_kv_sections(std::istream& in) {
  KvSections sections;
  std::string line;
  std::string current;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError("unterminated section header", lineno);
      current = std::string(trim(body.substr(1, body.size() - 2)));
      sections[current];
      continue;
    }
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected `key = value`", lineno);
    std::string key(trim(body.substr(0, eq)));
    std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) throw ParseError("empty key", lineno);
    if (!value.empty()) sections[current][key] = value;
  }
  return sections;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  const KvSections sections = parse_kv_sections(in);

  for (const char* required : {"qc", "graph", "solve", "contig"})
    if (!sections.count(required))
      throw InputError(std::string("config: missing required section [") + required + "]");

  PipelineConfig cfg;
  if (sections.count("pipeline")) {
    KvReader r(sections.at("pipeline"), "pipeline");
    cfg.seed = static_cast<std::uint64_t>(r.integer("seed", 1));
    cfg.threads = static_cast<int>(r.integer("threads", 1));
  }

  {
    KvReader r(sections.at("qc"), "qc");
    cfg.qc.input = r.str("input");
    if (cfg.qc.input.empty()) throw InputError("config: [qc] input is required");
    cfg.qc.offset = static_cast<int>(r.integer("offset", 33));
    cfg.qc.min_q = static_cast<int>(r.integer("min_q", 28));
    cfg.qc.policy = parse_policy(r.str("policy", "any-position"));
    cfg.qc.adapter_file = r.str("adapters");
    cfg.qc.min_prefix_match = static_cast<int>(r.integer("min_prefix_match", 6));
    cfg.qc.min_len = static_cast<std::size_t>(r.integer("min_len", 50));
    cfg.qc.emit_fasta = r.flag("emit_fasta", false);
  }
  {
    KvReader r(sections.at("graph"), "graph");
    const AlignmentParams def;
    cfg.graph.align.match = static_cast<int>(r.integer("match", def.match));
    cfg.graph.align.mismatch = static_cast<int>(r.integer("mismatch", def.mismatch));
    cfg.graph.align.gap_open = static_cast<int>(r.integer("gap_open", def.gap_open));
    cfg.graph.align.gap_extend =
        static_cast<int>(r.integer("gap_extend", def.gap_extend));
    cfg.graph.align.min_overlap_len = static_cast<std::size_t>(
        r.integer("min_overlap", static_cast<long long>(def.min_overlap_len)));
    cfg.graph.align.min_score = r.num("min_score", def.min_score);
    cfg.graph.align.max_mismatches =
        static_cast<int>(r.integer("max_mismatches", def.max_mismatches));
    cfg.graph.align.dedup_identity = r.num("dedup_identity", def.dedup_identity);
    cfg.graph.align.window_cap = static_cast<std::size_t>(
        r.integer("window_cap", static_cast<long long>(def.window_cap)));
    cfg.graph.alpha = r.num("alpha", 1);
    cfg.graph.gamma = r.num("gamma", 2);
    if (r.has("dense_penalty_scale"))
      cfg.graph.dense_penalty_scale = r.num("dense_penalty_scale", 1);
    cfg.graph.max_nodes = static_cast<int>(r.integer("max_nodes", 24));
  }
  {
    KvReader r(sections.at("solve"), "solve");
    const std::string method = r.str("method", "classical");
    if (method == "classical")
      cfg.method = SolveMethod::Classical;
    else if (method == "vqe")
      cfg.method = SolveMethod::Vqe;
    else
      throw InputError("config: [solve] method must be classical or vqe");
  }
  if (cfg.method == SolveMethod::Vqe) {
    if (!sections.count("vqe"))
      throw InputError("config: [vqe] section is required when method = vqe");
    cfg.vqe = vqe_from_kv(sections.at("vqe"));
    if (!cfg.vqe.seed_set) cfg.vqe.vqe.seed = cfg.seed;
  }
  {
    KvReader r(sections.at("contig"), "contig");
    cfg.contig.wrap = static_cast<std::size_t>(r.integer("wrap", 70));
    cfg.contig.contig_id = r.str("id", "contig_1");
    if (cfg.contig.wrap < 1) throw InputError("config: [contig] wrap must be >= 1");
  }
  return cfg;
}

VqeStageConfig load_vqe_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open VQE config file: " + path);
  KvSections sections = parse_kv_sections(in);
  std::map<std::string, std::string> merged = sections[""];
  for (const auto& [k, v] : sections["vqe"]) merged[k] = v;
  return vqe_from_kv(merged);
}

void write_solution(std::ostream& out, const PathSolution& solution, bool no_path) {
  if (no_path) {
    out << "no_path true\n";
    return;
  }
  out << "provenance " << provenance_name(solution.provenance) << '\n';
  out << "sequence";
  for (int v : solution.sequence) out << ' ' << v;
  out << '\n';
  out << "weight " << format_double(solution.total_weight) << '\n';
  out << "violations " << solution.violations << '\n';
  out << "anomalies " << solution.anomalies << '\n';
}

std::optional<PathSolution> read_solution(std::istream& in) {
  PathSolution sol;
  std::string line;
  std::size_t lineno = 0;
  bool have_sequence = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_ws(line);
    if (fields.empty() || fields[0][0] == '#') continue;
    const std::string& key = fields[0];
    if (key == "no_path") return std::nullopt;
    if (key == "provenance") {
      if (fields.size() != 2) throw ParseError("bad provenance line", lineno);
      if (fields[1] == "dp")
        sol.provenance = Provenance::Dp;
      else if (fields[1] == "brute")
        sol.provenance = Provenance::Brute;
      else if (fields[1] == "vqe")
        sol.provenance = Provenance::Vqe;
      else
        throw ParseError("unknown provenance `" + fields[1] + "`", lineno);
    } else if (key == "sequence") {
      for (std::size_t i = 1; i < fields.size(); ++i)
        sol.sequence.push_back(std::stoi(fields[i]));
      have_sequence = true;
    } else if (key == "weight") {
      sol.total_weight = std::stod(fields.at(1));
    } else if (key == "violations") {
      sol.violations = std::stoi(fields.at(1));
    } else if (key == "anomalies") {
      sol.anomalies = std::stoi(fields.at(1));
    } else {
      throw ParseError("unknown solution key `" + key + "`", lineno);
    }
  }
  if (!have_sequence) throw std::runtime_error("solution file has no sequence");
  return sol;
}

int run_pipeline(const PipelineConfig& config, const std::string& outdir,
                 std::ostream& log) {
  fs::create_directories(outdir);
  set_sim_threads(config.threads);
  std::vector<std::string> manifest;
  auto open_out = [&](const std::string& name) {
    std::ofstream out(fs::path(outdir) / name);
    if (!out) throw std::runtime_error("cannot write " + name + " under " + outdir);
    manifest.push_back(name);
    return out;
  };

  // Stage 1: quality control.
  if (!fs::exists(config.qc.input))
    throw InputError("input reads not found: " + config.qc.input);
  std::vector<Read> reads = parse_fastq_file(config.qc.input, config.qc.offset);
  if (reads.empty()) throw InputError("no reads in " + config.qc.input);
  const QualityReport report = qc_report(reads);
  {
    auto out = open_out("qc_report.txt");
    write_report_text(out, report);
  }
  {
    auto out = open_out("qc_report.kv");
    write_report_kv(out, report);
  }
  reads = filter_reads(std::move(reads), config.qc.min_q, config.qc.policy);
  AdapterSet adapters;
  if (config.qc.adapter_file.empty()) {
    adapters = AdapterSet::defaults();
  } else {
    std::ifstream in(config.qc.adapter_file);
    if (!in) throw InputError("cannot open adapter file: " + config.qc.adapter_file);
    adapters = AdapterSet::load(in);
  }
  TrimOptions trim_opts;
  trim_opts.min_prefix_match = config.qc.min_prefix_match;
  trim_opts.min_length = config.qc.min_len;
  reads = trim_adapters(std::move(reads), adapters, trim_opts);
  const std::string filtered_name = config.qc.emit_fasta ? "filtered.fasta" : "filtered.fastq";
  {
    auto out = open_out(filtered_name);
    if (config.qc.emit_fasta)
      write_fasta_reads(out, reads);
    else
      write_fastq(out, reads, config.qc.offset);
  }
  log << "qc: " << reads.size() << " reads pass\n";

  // Stage 2: overlap graph.
  reads = dedup_reads(std::move(reads), config.graph.align.dedup_identity,
                      config.graph.align);
  GraphBuildOptions build_opts;
  build_opts.max_nodes = config.graph.max_nodes;
  build_opts.threads = config.threads;
  OverlapGraph graph;
  try {
    graph = build_olc_graph(reads, config.graph.align, build_opts);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const CostMatrix costs = cost_matrix(graph, config.graph.alpha, config.graph.gamma,
                                       config.graph.dense_penalty_scale);
  {
    auto out = open_out("graph.txt");
    write_graph(out, graph);
  }
  {
    auto out = open_out("costs.txt");
    write_cost_matrix(out, costs);
  }
  log << "graph: " << graph.node_count() << " nodes, " << graph.edges.size()
      << " edges\n";

  // Stage 3: path solving.
  std::optional<PathSolution> solution;
  const auto t0 = std::chrono::steady_clock::now();
  if (config.method == SolveMethod::Classical) {
    solution = hamiltonian_path_dp(graph, costs);
  } else {
    HoboOptions hobo_opts;
    hobo_opts.validity_penalty = config.vqe.validity_penalty;
    const DiagonalHamiltonian hamiltonian =
        build_hobo_hamiltonian(costs, config.vqe.a1, config.vqe.a2, hobo_opts);
    VqeConfig vqe_cfg = config.vqe.vqe;
    if (!config.vqe.warm_start_file.empty()) {
      AnsatzSpec spec = vqe_cfg.ansatz;
      spec.nodes = hamiltonian.encoding.nodes;
      spec.bits_per_position = hamiltonian.encoding.bits_per_position;
      std::ifstream in(config.vqe.warm_start_file);
      if (!in)
        throw InputError("cannot open warm-start file: " + config.vqe.warm_start_file);
      vqe_cfg.warm_start_params = load_checkpoint(in, spec);
    }
    const VqeResult result = run_vqe(graph, hamiltonian, vqe_cfg);
    {
      auto out = open_out("history.csv");
      write_history_csv(out, result);
    }
    {
      auto out = open_out("params.txt");
      AnsatzSpec spec = vqe_cfg.ansatz;
      spec.nodes = hamiltonian.encoding.nodes;
      spec.bits_per_position = hamiltonian.encoding.bits_per_position;
      save_checkpoint(out, spec, result.final_params);
    }
    PathSolution sol;
    sol.sequence = result.best_sequence;
    sol.total_weight = result.best_energy;
    sol.violations = result.violations_at_best;
    sol.anomalies = result.anomalies_at_best;
    sol.provenance = Provenance::Vqe;
    solution = sol;
  }
  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  log << "solve: " << format_double(elapsed_ms) << " ms\n";
  {
    auto out = open_out("solution.txt");
    if (solution)
      write_solution(out, *solution);
    else
      write_solution(out, PathSolution{}, true);
  }
  if (!solution) {
    log << "solve: no Hamiltonian path exists\n";
    auto out = open_out("manifest.txt");
    for (const std::string& name : manifest) out << name << '\n';
    return 0;
  }
  log << "solve: weight " << format_double(solution->total_weight) << ", "
      << solution->violations << " violations\n";

  // Stage 4: contig assembly.
  std::vector<Read> ordered;
  ordered.reserve(solution->sequence.size());
  for (int node : solution->sequence) {
    if (node < 0 || node >= static_cast<int>(reads.size()))
      throw InputError("solution node " + std::to_string(node) +
                       " does not index the read set");
    ordered.push_back(reads[static_cast<std::size_t>(node)]);
  }
  Contig contig = generate_contig(ordered, config.graph.align);
  contig.source_path = solution->sequence;
  {
    auto out = open_out("contig.fasta");
    write_fasta(out, contig.sequence, config.contig.contig_id, config.contig.wrap);
  }
  {
    auto out = open_out("merge_log.txt");
    write_merge_log(out, contig);
  }
  log << "contig: " << contig.sequence.size() << " bases\n";

  auto out = open_out("manifest.txt");
  for (const std::string& name : manifest) out << name << '\n';
  return 0;
}

}  // namespace olcq
