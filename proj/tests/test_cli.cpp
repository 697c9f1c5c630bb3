#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "olcq/read.hpp"
#include "olcq/util.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;
using namespace olcq;
using namespace olcq::testing;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::temp_directory_path() / ("olcq_cli_" + name);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(OLCQ_BIN) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_fixture_reads(const std::string& path, int n_reads, std::string* tmpl_out,
                         std::uint64_t seed = 601) {
  Rng rng(seed);
  const std::string tmpl = random_dna(rng, 1200);
  if (tmpl_out) *tmpl_out = tmpl;
  auto reads = fragment_template(tmpl, n_reads, 80);
  std::ofstream out(path);
  REQUIRE(out);
  write_fastq(out, reads, 33);
}

}  // namespace

TEST_CASE("help exits zero on every subcommand") {
  CHECK(run("--help") == 0);
  for (const char* sub :
       {"qc", "graph", "solve-classical", "solve-vqe", "contig", "pipeline"})
    CHECK(run(std::string(sub) + " --help") == 0);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("") == 2);
  CHECK(run("qc /definitely/not/here.fastq") == 2);
  CHECK(run("no-such-subcommand") == 2);
  TempDir dir("usage");
  CHECK(run("pipeline --config " + dir.file("missing.cfg")) == 2);
}

TEST_CASE("qc subcommand writes reports and filtered output") {
  TempDir dir("qc");
  write_fixture_reads(dir.file("reads.fastq"), 4, nullptr);
  const int rc = run("qc " + dir.file("reads.fastq") + " -o " + dir.file("out.fastq") +
                     " --report " + dir.file("rep.txt") + " --report-kv " +
                     dir.file("rep.kv") + " --min-q 20");
  CHECK(rc == 0);
  CHECK(fs::exists(dir.file("out.fastq")));
  CHECK(slurp(dir.file("rep.kv")).find("total_reads 4") != std::string::npos);

  // A threshold above every quality score filters everything; still exit 0.
  const int rc2 = run("qc " + dir.file("reads.fastq") + " -o " + dir.file("empty.fastq") +
                      " --report " + dir.file("r2.txt") + " --report-kv " +
                      dir.file("r2.kv") + " --min-q 41");
  CHECK(rc2 == 0);
  CHECK(slurp(dir.file("empty.fastq")).empty());
}

TEST_CASE("graph subcommand emits graph and cost files") {
  TempDir dir("graph");
  write_fixture_reads(dir.file("reads.fastq"), 4, nullptr);
  const int rc = run("graph " + dir.file("reads.fastq") + " -g " + dir.file("g.txt") +
                     " -c " + dir.file("w.txt") + " --min-overlap 50 --min-score 120");
  CHECK(rc == 0);
  const std::string graph = slurp(dir.file("g.txt"));
  CHECK(graph.find("nodes 4") != std::string::npos);
  CHECK(graph.find("edge 0 1") != std::string::npos);
  CHECK(graph.find("edge 2 3") != std::string::npos);

  // Impossible thresholds: an edgeless graph is produced with a warning.
  const int rc2 = run("graph " + dir.file("reads.fastq") + " -g " + dir.file("g0.txt") +
                      " -c " + dir.file("w0.txt") + " --min-score 1000000");
  CHECK(rc2 == 0);
  CHECK(slurp(dir.file("g0.txt")).find("edge") == std::string::npos);
}

TEST_CASE("classical and vqe solvers produce matching solutions on the fixture") {
  TempDir dir("solve");
  write_fixture_reads(dir.file("reads.fastq"), 4, nullptr);
  REQUIRE(run("graph " + dir.file("reads.fastq") + " -g " + dir.file("g.txt") + " -c " +
              dir.file("w.txt") + " --min-overlap 50 --min-score 120") == 0);

  CHECK(run("solve-classical --graph " + dir.file("g.txt") + " --costs " +
            dir.file("w.txt") + " -o " + dir.file("dp.txt")) == 0);
  const std::string dp = slurp(dir.file("dp.txt"));
  CHECK(dp.find("sequence 0 1 2 3") != std::string::npos);
  CHECK(dp.find("violations 0") != std::string::npos);

  CHECK(run("solve-vqe --graph " + dir.file("g.txt") + " --costs " + dir.file("w.txt") +
            " -o " + dir.file("vqe.txt") + " --history " + dir.file("h.csv") +
            " --checkpoint " + dir.file("p.txt") + " --seed 3 --max-iters 60") == 0);
  const std::string vqe = slurp(dir.file("vqe.txt"));
  CHECK(vqe.find("sequence 0 1 2 3") != std::string::npos);
  CHECK(vqe.find("provenance vqe") != std::string::npos);
  CHECK(slurp(dir.file("h.csv")).find("iter,cvar") != std::string::npos);

  // Same seed, same outputs.
  CHECK(run("solve-vqe --graph " + dir.file("g.txt") + " --costs " + dir.file("w.txt") +
            " -o " + dir.file("vqe2.txt") + " --history " + dir.file("h2.csv") +
            " --seed 3 --max-iters 60") == 0);
  CHECK(slurp(dir.file("vqe.txt")) == slurp(dir.file("vqe2.txt")));
  CHECK(slurp(dir.file("h.csv")) == slurp(dir.file("h2.csv")));
}

TEST_CASE("contig subcommand assembles the solved order") {
  TempDir dir("contig");
  std::string tmpl;
  write_fixture_reads(dir.file("reads.fastq"), 4, &tmpl);
  REQUIRE(run("graph " + dir.file("reads.fastq") + " -g " + dir.file("g.txt") + " -c " +
              dir.file("w.txt") + " --min-overlap 50 --min-score 120") == 0);
  REQUIRE(run("solve-classical --graph " + dir.file("g.txt") + " --costs " +
              dir.file("w.txt") + " -o " + dir.file("sol.txt")) == 0);

  CHECK(run("contig --reads " + dir.file("reads.fastq") + " --solution " +
            dir.file("sol.txt") + " --graph " + dir.file("g.txt") + " -o " +
            dir.file("contig.fasta") + " --merge-log " + dir.file("merge.txt") +
            " --id fixture") == 0);
  std::string assembled;
  {
    std::istringstream in(slurp(dir.file("contig.fasta")));
    std::string line;
    std::getline(in, line);
    CHECK(line == ">fixture");
    while (std::getline(in, line)) assembled += line;
  }
  CHECK(assembled == tmpl);

  CHECK(run("contig --reads " + dir.file("nope.fastq") + " --solution " +
            dir.file("sol.txt") + " -o " + dir.file("c2.fasta")) == 2);
}

TEST_CASE("single-read path yields the read itself") {
  TempDir dir("single");
  Rng rng(11);
  std::vector<Read> one{make_read("solo", random_dna(rng, 200))};
  {
    std::ofstream out(dir.file("reads.fastq"));
    write_fastq(out, one, 33);
  }
  {
    std::ofstream out(dir.file("sol.txt"));
    out << "provenance dp\nsequence 0\nweight 0\nviolations 0\nanomalies 0\n";
  }
  CHECK(run("contig --reads " + dir.file("reads.fastq") + " --solution " +
            dir.file("sol.txt") + " -o " + dir.file("c.fasta")) == 0);
  std::string body = slurp(dir.file("c.fasta"));
  body.erase(0, body.find('\n') + 1);
  std::string joined;
  for (char c : body)
    if (c != '\n') joined.push_back(c);
  CHECK(joined == one[0].bases);
}

TEST_CASE("pipeline subcommand is deterministic and writes a manifest") {
  TempDir dir("pipe");
  write_fixture_reads(dir.file("reads.fastq"), 4, nullptr);
  {
    std::ofstream cfg(dir.file("run.cfg"));
    cfg << "[pipeline]\nseed = 5\n[qc]\ninput = " << dir.file("reads.fastq")
        << "\nmin_q = 20\n[graph]\nmin_overlap = 50\nmin_score = 120\n"
        << "[solve]\nmethod = vqe\n[vqe]\nmax_iters = 40\nshots = 1024\n"
        << "stop_when_violation_free = true\n[contig]\nid = fixture\n";
  }
  CHECK(run("pipeline --config " + dir.file("run.cfg") + " -o " + dir.file("out1")) == 0);
  CHECK(run("pipeline --config " + dir.file("run.cfg") + " -o " + dir.file("out2")) == 0);
  for (const auto& entry : fs::directory_iterator(dir.file("out1"))) {
    const std::string name = entry.path().filename().string();
    CAPTURE(name);
    CHECK(slurp(entry.path().string()) == slurp(dir.file("out2/" + name)));
  }
  CHECK(fs::exists(dir.file("out1/manifest.txt")));
}
