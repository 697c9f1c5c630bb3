#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "olcq/assembly.hpp"
#include "olcq/classical_path.hpp"
#include "olcq/hobo.hpp"
#include "olcq/preprocess.hpp"
#include "olcq/vqe.hpp"

namespace olcq {

// User-facing input problems (missing files, bad config values); the CLI
// maps these to exit code 2.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct QcStageConfig {
  std::string input;
  int offset = 33;
  int min_q = 28;
  FilterPolicy policy = FilterPolicy::AnyPosition;
  std::string adapter_file;  // empty = stock adapter set
  int min_prefix_match = 6;
  std::size_t min_len = 50;
  bool emit_fasta = false;
};

struct GraphStageConfig {
  AlignmentParams align;
  double alpha = 1;
  double gamma = 2;
  std::optional<double> dense_penalty_scale;
  int max_nodes = 24;
};

enum class SolveMethod { Classical, Vqe };

struct VqeStageConfig {
  VqeConfig vqe;
  double a1 = 5;
  double a2 = 5;
  bool validity_penalty = false;
  std::string warm_start_file;
  bool seed_set = false;  // whether the config file pinned its own seed
};

struct ContigStageConfig {
  std::size_t wrap = 70;
  std::string contig_id = "contig_1";
};

struct PipelineConfig {
  QcStageConfig qc;
  GraphStageConfig graph;
  SolveMethod method = SolveMethod::Classical;
  VqeStageConfig vqe;
  ContigStageConfig contig;
  std::uint64_t seed = 1;
  int threads = 1;
};

// `[section]` headers over `key = value` lines, '#' comments.
using KvSections = std::map<std::string, std::map<std::string, std::string>>;
KvSections parse_kv_sections(std::istream& in);

// Validates required sections and key values before any stage runs.
PipelineConfig load_pipeline_config(const std::string& path);

// Standalone VQE settings for solve-vqe: same keys as the pipeline [vqe]
// section, with or without the section header.
VqeStageConfig load_vqe_config(const std::string& path);

// Solution files carry no timing, so seeded reruns are byte-identical;
// elapsed time goes to the log instead.
void write_solution(std::ostream& out, const PathSolution& solution,
                    bool no_path = false);
// Returns nullopt for a recorded no-path finding.
std::optional<PathSolution> read_solution(std::istream& in);

// Runs qc -> graph -> solve -> contig, writing every artifact plus a
// manifest under `outdir`. Returns 0 on success or finding.
int run_pipeline(const PipelineConfig& config, const std::string& outdir,
                 std::ostream& log);

}  // namespace olcq
