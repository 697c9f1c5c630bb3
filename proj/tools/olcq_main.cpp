// olcq: assemble genome fragments by solving the overlap-graph Hamiltonian
// path, either exactly (bitmask DP) or with a sampled CVaR-VQE loop.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "olcq/assembly.hpp"
#include "olcq/classical_path.hpp"
#include "olcq/hobo.hpp"
#include "olcq/pipeline.hpp"
#include "olcq/preprocess.hpp"
#include "olcq/statevector.hpp"
#include "olcq/util.hpp"
#include "olcq/vqe.hpp"

namespace fs = std::filesystem;
using namespace olcq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write output file: " + path);
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  return in;
}

struct QcArgs {
  std::string input, output = "filtered.fastq";
  std::string report = "qc_report.txt", report_kv = "qc_report.kv";
  std::string adapter_file;
  int offset = 33, min_q = 28, min_prefix_match = 6;
  std::size_t min_len = 50;
  std::string policy = "any-position";
};

int cmd_qc(const QcArgs& args) {
  if (!fs::exists(args.input)) throw InputError("input not found: " + args.input);
  std::vector<Read> reads = parse_fastq_file(args.input, args.offset);
  if (reads.empty()) throw InputError("no reads in " + args.input);

  const QualityReport report = qc_report(reads);
  {
    auto out = open_output(args.report);
    write_report_text(out, report);
  }
  {
    auto out = open_output(args.report_kv);
    write_report_kv(out, report);
  }

  const FilterPolicy policy =
      args.policy == "mean" ? FilterPolicy::Mean : FilterPolicy::AnyPosition;
  reads = filter_reads(std::move(reads), args.min_q, policy);

  AdapterSet adapters;
  if (args.adapter_file.empty()) {
    adapters = AdapterSet::defaults();
  } else {
    auto in = open_input(args.adapter_file);
    adapters = AdapterSet::load(in);
  }
  TrimOptions trim_opts;
  trim_opts.min_prefix_match = args.min_prefix_match;
  trim_opts.min_length = args.min_len;
  reads = trim_adapters(std::move(reads), adapters, trim_opts);

  const bool fasta = args.output.size() > 6 &&
                     args.output.substr(args.output.size() - 6) == ".fasta";
  auto out = open_output(args.output);
  if (fasta)
    write_fasta_reads(out, reads);
  else
    write_fastq(out, reads, args.offset);
  if (reads.empty())
    std::cerr << "warning: every read was filtered out\n";
  std::cout << "qc: kept " << reads.size() << " reads -> " << args.output << '\n';
  return kExitOk;
}

struct GraphArgs {
  std::string input, graph_out = "graph.txt", costs_out = "costs.txt";
  AlignmentParams align;
  double alpha = 1, gamma = 2;
  std::optional<double> dense_penalty_scale;
  int max_nodes = 24;
  int threads = 1;
  int offset = 33;
};

int cmd_graph(const GraphArgs& args) {
  if (!fs::exists(args.input)) throw InputError("input not found: " + args.input);
  std::vector<Read> reads = load_reads(args.input, args.offset);
  reads = dedup_reads(std::move(reads), args.align.dedup_identity, args.align);

  GraphBuildOptions opts;
  opts.max_nodes = args.max_nodes;
  opts.threads = args.threads;
  OverlapGraph graph;
  try {
    graph = build_olc_graph(reads, args.align, opts);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const CostMatrix costs =
      cost_matrix(graph, args.alpha, args.gamma, args.dense_penalty_scale);
  {
    auto out = open_output(args.graph_out);
    write_graph(out, graph);
  }
  {
    auto out = open_output(args.costs_out);
    write_cost_matrix(out, costs);
  }
  if (graph.edges.empty())
    std::cerr << "warning: no overlaps passed the thresholds; graph has 0 edges\n";

  std::map<int, int> degree_hist;
  {
    std::vector<int> degree(graph.node_count(), 0);
    for (const GraphEdge& e : graph.edges) {
      ++degree[e.from];
      ++degree[e.to];
    }
    for (int d : degree) ++degree_hist[d];
  }
  std::cout << "graph: N=" << graph.node_count() << " |E|=" << graph.edges.size()
            << "\ndegree histogram:";
  for (const auto& [d, n] : degree_hist) std::cout << ' ' << d << 'x' << n;
  std::cout << '\n';
  return kExitOk;
}

std::pair<OverlapGraph, CostMatrix> load_problem(const std::string& graph_path,
                                                 const std::string& costs_path) {
  auto gin = open_input(graph_path);
  OverlapGraph graph = read_graph(gin);
  auto cin_ = open_input(costs_path);
  CostMatrix costs = read_cost_matrix(cin_);
  if (costs.n != graph.node_count())
    throw InputError("graph and cost matrix disagree on N");
  return {std::move(graph), std::move(costs)};
}

int cmd_solve_classical(const std::string& graph_path, const std::string& costs_path,
                        const std::string& out_path) {
  auto [graph, costs] = load_problem(graph_path, costs_path);
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<PathSolution> solution = hamiltonian_path_dp(graph, costs);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  auto out = open_output(out_path);
  if (solution) {
    write_solution(out, *solution);
    std::cout << "solution: weight " << format_double(solution->total_weight)
              << ", sequence";
    for (int v : solution->sequence) std::cout << ' ' << v;
    std::cout << '\n';
  } else {
    write_solution(out, PathSolution{}, true);
    std::cout << "no Hamiltonian path exists\n";
  }
  std::cout << "elapsed " << format_double(ms) << " ms\n";
  return kExitOk;
}

struct SolveVqeArgs {
  std::string graph_path, costs_path, out_path = "solution.txt";
  std::string config_file, history_path = "history.csv", checkpoint_path;
  std::string warm_start_file, dump_hamiltonian_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iters;
  int threads = 1;
};

int cmd_solve_vqe(const SolveVqeArgs& args) {
  auto [graph, costs] = load_problem(args.graph_path, args.costs_path);

  VqeStageConfig stage;
  if (!args.config_file.empty()) stage = load_vqe_config(args.config_file);
  if (args.seed) stage.vqe.seed = *args.seed;
  if (args.max_iters) stage.vqe.max_iters = *args.max_iters;
  if (!args.warm_start_file.empty()) stage.warm_start_file = args.warm_start_file;

  HoboOptions hobo_opts;
  hobo_opts.validity_penalty = stage.validity_penalty;
  const DiagonalHamiltonian hamiltonian =
      build_hobo_hamiltonian(costs, stage.a1, stage.a2, hobo_opts);
  const HamiltonianStats stats = hamiltonian_stats(hamiltonian);
  std::cout << "hamiltonian: qubits " << stats.qubits << ", terms " << stats.terms
            << ", max locality " << stats.max_locality << '\n';
  if (!args.dump_hamiltonian_path.empty()) {
    auto out = open_output(args.dump_hamiltonian_path);
    dump_hamiltonian(out, hamiltonian);
  }
  if (stats.qubits > kMaxSimQubits)
    throw InputError("graph needs " + std::to_string(stats.qubits) +
                     " qubits; the dense simulator caps at " +
                     std::to_string(kMaxSimQubits));

  AnsatzSpec spec = stage.vqe.ansatz;
  spec.nodes = hamiltonian.encoding.nodes;
  spec.bits_per_position = hamiltonian.encoding.bits_per_position;
  if (!stage.warm_start_file.empty()) {
    auto in = open_input(stage.warm_start_file);
    stage.vqe.warm_start_params = load_checkpoint(in, spec);
  }

  set_sim_threads(args.threads);
  const auto t0 = std::chrono::steady_clock::now();
  const VqeResult result = run_vqe(graph, hamiltonian, stage.vqe);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();

  {
    auto out = open_output(args.history_path);
    write_history_csv(out, result);
  }
  if (!args.checkpoint_path.empty()) {
    auto out = open_output(args.checkpoint_path);
    save_checkpoint(out, spec, result.final_params);
  }
  PathSolution sol;
  sol.sequence = result.best_sequence;
  sol.total_weight = result.best_energy;
  sol.violations = result.violations_at_best;
  sol.anomalies = result.anomalies_at_best;
  sol.provenance = Provenance::Vqe;
  auto out = open_output(args.out_path);
  write_solution(out, sol);
  std::cout << "vqe elapsed " << format_double(ms) << " ms\n";
  std::cout << "vqe best: energy " << format_double(sol.total_weight) << ", "
            << sol.violations << " violations, " << sol.anomalies
            << " anomalies\nsequence";
  for (int v : sol.sequence) std::cout << ' ' << v;
  std::cout << '\n';
  if (result.cyclic_error_at_best)
    std::cout << "note: the best sequence is a rotation of a violation-free path\n";
  return kExitOk;
}

struct ContigArgs {
  std::string reads_path, solution_path, graph_path;
  std::string out_path = "contig.fasta", merge_log_path;
  std::string contig_id = "contig_1";
  std::size_t wrap = 70;
  int offset = 33;
};

int cmd_contig(const ContigArgs& args) {
  if (!fs::exists(args.reads_path))
    throw InputError("reads file not found: " + args.reads_path);
  std::vector<Read> reads = load_reads(args.reads_path, args.offset);
  auto sin = open_input(args.solution_path);
  std::optional<PathSolution> solution = read_solution(sin);
  if (!solution) throw InputError("solution file records no path; nothing to assemble");

  // With a graph file the solution indexes graph nodes, which map to read
  // ids; otherwise node i is the i-th read in the input file.
  std::vector<Read> ordered;
  if (!args.graph_path.empty()) {
    auto gin = open_input(args.graph_path);
    const OverlapGraph graph = read_graph(gin);
    for (int node : solution->sequence) {
      if (node < 0 || node >= graph.node_count())
        throw InputError("solution node " + std::to_string(node) +
                         " is outside the graph");
      const std::string& id = graph.node_ids[static_cast<std::size_t>(node)];
      auto it = std::find_if(reads.begin(), reads.end(),
                             [&](const Read& r) { return r.id == id; });
      if (it == reads.end())
        throw InputError("read id `" + id + "` from the graph is missing from " +
                         args.reads_path);
      ordered.push_back(*it);
    }
  } else {
    for (int node : solution->sequence) {
      if (node < 0 || node >= static_cast<int>(reads.size()))
        throw InputError("solution node " + std::to_string(node) +
                         " does not index the read set");
      ordered.push_back(reads[static_cast<std::size_t>(node)]);
    }
  }

  AlignmentParams params;
  Contig contig = generate_contig(ordered, params);
  contig.source_path = solution->sequence;
  {
    auto out = open_output(args.out_path);
    write_fasta(out, contig.sequence, args.contig_id, args.wrap);
  }
  if (!args.merge_log_path.empty()) {
    auto out = open_output(args.merge_log_path);
    write_merge_log(out, contig);
  }
  std::cout << "contig: " << contig.sequence.size() << " bases -> " << args.out_path
            << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"overlap-graph genome assembly with exact and CVaR-VQE path solvers"};
  app.require_subcommand(1);
  int threads = 1;
  auto* threads_opt = app.add_option("--threads", threads, "worker thread cap for all stages");

  QcArgs qc;
  auto* qc_cmd = app.add_subcommand("qc", "quality-filter and adapter-trim FASTQ reads");
  qc_cmd->add_option("input", qc.input, "input FASTQ")->required();
  qc_cmd->add_option("-o,--out", qc.output, "filtered reads (.fastq or .fasta)");
  qc_cmd->add_option("--report", qc.report, "text report path");
  qc_cmd->add_option("--report-kv", qc.report_kv, "key-value report path");
  qc_cmd->add_option("--offset", qc.offset, "quality encoding offset (33 or 64)");
  qc_cmd->add_option("--min-q", qc.min_q, "quality threshold");
  qc_cmd->add_option("--policy", qc.policy, "any-position or mean")
      ->check(CLI::IsMember({"any-position", "mean"}));
  qc_cmd->add_option("--adapters", qc.adapter_file, "adapter file (name sequence per line)");
  qc_cmd->add_option("--min-prefix-match", qc.min_prefix_match,
                     "minimum adapter-prefix suffix match");
  qc_cmd->add_option("--min-len", qc.min_len, "drop reads shorter than this after trimming");

  GraphArgs graph;
  auto* graph_cmd = app.add_subcommand("graph", "build the overlap graph and cost matrix");
  graph_cmd->add_option("input", graph.input, "reads (FASTQ or FASTA)")->required();
  graph_cmd->add_option("-g,--graph-out", graph.graph_out, "graph file");
  graph_cmd->add_option("-c,--costs-out", graph.costs_out, "cost matrix file");
  graph_cmd->add_option("--min-overlap", graph.align.min_overlap_len, "minimum overlap length");
  graph_cmd->add_option("--min-score", graph.align.min_score, "minimum alignment score");
  graph_cmd->add_option("--max-mismatches", graph.align.max_mismatches,
                        "maximum mismatches in an accepted overlap");
  graph_cmd->add_option("--dedup-identity", graph.align.dedup_identity,
                        "identity threshold for duplicate removal");
  graph_cmd->add_option("--window-cap", graph.align.window_cap,
                        "suffix/prefix window size for overlap alignment");
  graph_cmd->add_option("--alpha", graph.alpha, "edge reward magnitude");
  graph_cmd->add_option("--gamma", graph.gamma, "non-edge penalty");
  double dense_scale = 0;
  auto* dense_opt = graph_cmd->add_option("--dense-penalty-scale", dense_scale,
                                          "extra non-edge penalty near high-degree nodes");
  graph_cmd->add_option("--max-nodes", graph.max_nodes, "node cap");
  graph_cmd->add_option("--offset", graph.offset, "FASTQ quality offset");

  std::string sc_graph, sc_costs, sc_out = "solution.txt";
  auto* sc_cmd = app.add_subcommand("solve-classical",
                                    "exact Hamiltonian path by dynamic programming");
  sc_cmd->add_option("--graph", sc_graph, "graph file")->required();
  sc_cmd->add_option("--costs", sc_costs, "cost matrix file")->required();
  sc_cmd->add_option("-o,--out", sc_out, "solution file");

  SolveVqeArgs sv;
  auto* sv_cmd = app.add_subcommand("solve-vqe", "CVaR-VQE Hamiltonian path search");
  sv_cmd->add_option("--graph", sv.graph_path, "graph file")->required();
  sv_cmd->add_option("--costs", sv.costs_path, "cost matrix file")->required();
  sv_cmd->add_option("-o,--out", sv.out_path, "solution file");
  sv_cmd->add_option("--config", sv.config_file, "VQE config file");
  sv_cmd->add_option("--history", sv.history_path, "per-iteration CSV");
  sv_cmd->add_option("--checkpoint", sv.checkpoint_path, "final parameters file");
  sv_cmd->add_option("--warm-start", sv.warm_start_file, "initial parameters file");
  std::uint64_t sv_seed = 0;
  auto* sv_seed_opt = sv_cmd->add_option("--seed", sv_seed, "RNG seed");
  int sv_iters = 0;
  auto* sv_iters_opt = sv_cmd->add_option("--max-iters", sv_iters, "iteration cap");
  sv_cmd->add_option("--dump-hamiltonian", sv.dump_hamiltonian_path,
                     "write the expanded term list");

  ContigArgs contig;
  auto* contig_cmd = app.add_subcommand("contig", "merge reads along a solved path");
  contig_cmd->add_option("--reads", contig.reads_path, "reads file")->required();
  contig_cmd->add_option("--solution", contig.solution_path, "solution file")->required();
  contig_cmd->add_option("--graph", contig.graph_path,
                         "graph file (maps solution nodes to read ids)");
  contig_cmd->add_option("-o,--out", contig.out_path, "FASTA output");
  contig_cmd->add_option("--merge-log", contig.merge_log_path, "merge log output");
  contig_cmd->add_option("--id", contig.contig_id, "FASTA record id");
  contig_cmd->add_option("--wrap", contig.wrap, "FASTA line width");

  std::string pipeline_config, pipeline_out = "pipeline_out";
  auto* pipe_cmd = app.add_subcommand("pipeline", "run qc, graph, solve and contig end to end");
  pipe_cmd->add_option("--config", pipeline_config, "pipeline config file")->required();
  pipe_cmd->add_option("-o,--out", pipeline_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    set_sim_threads(threads);
    if (*qc_cmd) return cmd_qc(qc);
    if (*graph_cmd) {
      graph.threads = threads;
      if (*dense_opt) graph.dense_penalty_scale = dense_scale;
      return cmd_graph(graph);
    }
    if (*sc_cmd) return cmd_solve_classical(sc_graph, sc_costs, sc_out);
    if (*sv_cmd) {
      sv.threads = threads;
      if (*sv_seed_opt) sv.seed = sv_seed;
      if (*sv_iters_opt) sv.max_iters = sv_iters;
      return cmd_solve_vqe(sv);
    }
    if (*contig_cmd) return cmd_contig(contig);
    if (*pipe_cmd) {
      PipelineConfig cfg = load_pipeline_config(pipeline_config);
      if (*threads_opt) cfg.threads = threads;
      return run_pipeline(cfg, pipeline_out, std::cout);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
