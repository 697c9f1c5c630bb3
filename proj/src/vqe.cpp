#include "olcq/vqe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace olcq {

namespace {

double cvar_from_pairs(std::vector<std::pair<double, std::uint64_t>> costs,
                       double alpha, std::uint64_t shots) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("cvar: alpha must lie in (0, 1]");
  if (shots == 0) throw std::invalid_argument("cvar: empty sample set");
  std::stable_sort(costs.begin(), costs.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  auto take = static_cast<std::uint64_t>(
      std::ceil(alpha * static_cast<double>(shots)));
  take = std::max<std::uint64_t>(1, std::min(take, shots));
  double sum = 0;
  std::uint64_t used = 0;
  for (const auto& [cost, count] : costs) {
    const std::uint64_t here = std::min<std::uint64_t>(count, take - used);
    sum += cost * static_cast<double>(here);
    used += here;
    if (used == take) break;
  }
  return sum / static_cast<double>(take);
}

std::string ansatz_kind_name(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::Product: return "product";
    case AnsatzKind::Block: return "block";
    case AnsatzKind::FullLinear: return "full-linear";
  }
  return "?";
}

}  // namespace

double IterationStat::mean_violations() const {
  std::uint64_t shots = 0;
  double sum = 0;
  for (const auto& [v, cnt] : violation_hist) {
    shots += cnt;
    sum += static_cast<double>(v) * static_cast<double>(cnt);
  }
  return shots ? sum / static_cast<double>(shots) : 0.0;
}

double cvar_expectation(const SampleSet& samples, double alpha,
                        const std::function<double(const std::string&)>& cost) {
  std::vector<std::pair<double, std::uint64_t>> costs;
  costs.reserve(samples.counts.size());
  for (const auto& [bits, count] : samples.counts)
    costs.emplace_back(cost(bits), count);
  return cvar_from_pairs(std::move(costs), alpha, samples.shots);
}

std::pair<std::vector<std::size_t>, std::vector<int>> classify_sequence(
    std::span<const int> codes, int n) {
  std::vector<std::size_t> anomalous;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (std::size_t t = 0; t < codes.size(); ++t) {
    const int c = codes[t];
    if (c < 0 || c >= n || seen[static_cast<std::size_t>(c)])
      anomalous.push_back(t);
    else
      seen[static_cast<std::size_t>(c)] = true;
  }
  std::vector<int> missing;
  for (int v = 0; v < n; ++v)
    if (!seen[static_cast<std::size_t>(v)]) missing.push_back(v);
  return {std::move(anomalous), std::move(missing)};
}

std::pair<std::vector<int>, RecoveryReport> recover_bitstring(
    std::vector<int> codes, int n, int k) {
  if (static_cast<int>(codes.size()) != n)
    throw std::invalid_argument("recover_bitstring: sequence length must be N");
  (void)k;  // distances are popcounts of XORed codes, valid for any width

  auto [anomalous, missing] = classify_sequence(codes, n);
  RecoveryReport report;
  for (std::size_t pos : anomalous) report.anomalous.emplace_back(pos, codes[pos]);
  report.missing = missing;
  report.hamming.reserve(anomalous.size() * missing.size());
  for (std::size_t pos : anomalous)
    for (int m : missing)
      report.hamming.push_back(std::popcount(
          static_cast<unsigned>(codes[pos]) ^ static_cast<unsigned>(m)));

  while (!anomalous.empty()) {
    int best_d = std::numeric_limits<int>::max();
    std::size_t best_a = 0;
    std::size_t best_m = 0;
    // Rows in position order, columns in ascending node order; the first
    // strict minimum implements the (position, node) tie-break.
    for (std::size_t ai = 0; ai < anomalous.size(); ++ai) {
      for (std::size_t mi = 0; mi < missing.size(); ++mi) {
        const int d = std::popcount(static_cast<unsigned>(codes[anomalous[ai]]) ^
                                    static_cast<unsigned>(missing[mi]));
        if (d < best_d) {
          best_d = d;
          best_a = ai;
          best_m = mi;
        }
      }
    }
    const std::size_t pos = anomalous[best_a];
    report.mapping.emplace_back(pos, codes[pos], missing[best_m]);
    codes[pos] = missing[best_m];
    anomalous.erase(anomalous.begin() + static_cast<std::ptrdiff_t>(best_a));
    missing.erase(missing.begin() + static_cast<std::ptrdiff_t>(best_m));
  }
  return {std::move(codes), std::move(report)};
}

std::vector<double> spsa_step(std::vector<double> params, int iteration,
                              const SpsaGains& gains,
                              const std::function<double(std::span<const double>)>& objective,
                              Rng& rng) {
  const std::size_t dim = params.size();
  std::vector<int> delta(dim);
  for (std::size_t i = 0; i < dim; ++i) delta[i] = rng.rademacher();

  const double stability = gains.stability < 0 ? 0 : gains.stability;
  const double ak = gains.a / std::pow(iteration + 1 + stability, gains.a_exp);
  const double ck = gains.c / std::pow(iteration + 1, gains.c_exp);

  std::vector<double> plus(params), minus(params);
  for (std::size_t i = 0; i < dim; ++i) {
    plus[i] += ck * delta[i];
    minus[i] -= ck * delta[i];
  }
  const double f_plus = objective(plus);
  const double f_minus = objective(minus);
  const double scale = (f_plus - f_minus) / (2 * ck);
  for (std::size_t i = 0; i < dim; ++i)
    params[i] -= ak * scale * delta[i];
  return params;
}

namespace {

struct BestTracker {
  bool set = false;
  std::vector<int> sequence;
  double energy = 0;
  int violations = 0;
  int anomalies = 0;

  bool offer(int viol, double en, int anom, const std::vector<int>& seq) {
    if (set && std::pair(viol, en) >= std::pair(violations, energy)) return false;
    set = true;
    sequence = seq;
    energy = en;
    violations = viol;
    anomalies = anom;
    return true;
  }
};

class VqeLoop {
public:
  VqeLoop(const OverlapGraph& graph, const DiagonalHamiltonian& h,
          const VqeConfig& config)
      : hamiltonian_(h),
        config_(config),
        n_(h.encoding.nodes),
        k_(h.encoding.bits_per_position),
        adjacency_(graph.adjacency()),
        rng_(config.seed) {
    AnsatzSpec spec = config.ansatz;
    spec.nodes = n_;
    spec.bits_per_position = k_;
    circuit_ = build_ansatz(spec);
    if (config_.fix_endpoints) {
      const ReferenceState ref = prepare_reference(graph, h.encoding);
      std::vector<Gate> gates;
      gates.reserve(ref.x_qubits.size() + circuit_.gates.size());
      for (int q : ref.x_qubits) gates.push_back({Gate::Kind::X, q, -1, -1, {}});
      gates.insert(gates.end(), circuit_.gates.begin(), circuit_.gates.end());
      circuit_.gates = std::move(gates);
    }

    if (config_.warm_start_params) {
      if (static_cast<int>(config_.warm_start_params->size()) != circuit_.param_count)
        throw std::invalid_argument("run_vqe: warm-start parameter count mismatch");
      params_ = *config_.warm_start_params;
    } else {
      params_.resize(static_cast<std::size_t>(circuit_.param_count));
      for (double& p : params_)
        p = rng_.uniform(-config_.init_spread, config_.init_spread);
    }
  }

  VqeResult run() {
    SpsaGains gains = config_.gains;
    if (gains.stability < 0) gains.stability = config_.max_iters / 10.0;

    VqeResult result;
    for (int iter = 0; iter < config_.max_iters; ++iter) {
      IterationStat stat;
      stat.iter = iter;
      stat.min_cost = std::numeric_limits<double>::infinity();
      auto objective = [&](std::span<const double> p) { return evaluate(p, stat); };

      if (config_.optimizer == OptimizerKind::Spsa) {
        params_ = spsa_step(std::move(params_), iter, gains, objective, rng_);
      } else {
        coordinate_step(iter, gains, objective);
      }

      stat.cvar = eval_cvar_sum_ / static_cast<double>(eval_count_);
      eval_cvar_sum_ = 0;
      eval_count_ = 0;
      stat.best_violations = best_.violations;
      stat.best_energy = best_.energy;
      result.history.push_back(std::move(stat));

      if (config_.stop_when_violation_free && best_.set && best_.violations == 0 &&
          best_.anomalies == 0)
        break;
    }

    result.best_sequence = best_.sequence;
    result.best_energy = best_.energy;
    result.violations_at_best = best_.violations;
    result.anomalies_at_best = best_.anomalies;
    if (best_.violations > 0)
      result.cyclic_error_at_best =
          is_rotated_valid_path(best_.sequence, adjacency_, n_);
    result.final_params = params_;
    return result;
  }

private:
  // Simulate, sample, decode (and optionally recover) every shot, then
  // report the CVaR of the costed sequences. Sampling seeds come from the
  // loop RNG so the whole run is reproducible from VqeConfig::seed.
  double evaluate(std::span<const double> params, IterationStat& stat) {
    const Amplitudes psi = simulate(circuit_, params);
    const SampleSet samples = sample(psi, config_.shots, rng_.next_u64());

    std::vector<std::pair<double, std::uint64_t>> costs;
    costs.reserve(samples.counts.size());
    for (const auto& [bits, count] : samples.counts) {
      std::vector<int> codes = decode_bitstring(bits, hamiltonian_.encoding);
      auto [anomalous, missing] = classify_sequence(codes, n_);
      const bool had_anomalies = !anomalous.empty();
      if (had_anomalies) stat.anomalies += count;

      int residual_anomalies = static_cast<int>(anomalous.size());
      if (config_.recovery_enabled && had_anomalies) {
        codes = recover_bitstring(std::move(codes), n_, k_).first;
        residual_anomalies = 0;
      }

      const double cost = hamiltonian_.eval_sequence(codes);
      const int violations = count_violations_lenient(codes, adjacency_, n_);
      costs.emplace_back(cost, count);
      stat.violation_hist[violations] += count;
      stat.min_cost = std::min(stat.min_cost, cost);
      best_.offer(violations, cost, residual_anomalies, codes);
    }

    const double cvar = cvar_from_pairs(std::move(costs), config_.cvar_alpha,
                                        samples.shots);
    eval_cvar_sum_ += cvar;
    ++eval_count_;
    return cvar;
  }

  // Derivative-free fallback: probe one coordinate in both directions and
  // keep the best of stay/plus/minus.
  void coordinate_step(int iter, const SpsaGains& gains,
                       const std::function<double(std::span<const double>)>& objective) {
    const std::size_t dim = params_.size();
    const std::size_t coord = static_cast<std::size_t>(iter) % dim;
    const double step = gains.c / std::pow(iter / static_cast<double>(dim) + 1,
                                           gains.c_exp);
    const double f0 = objective(params_);
    std::vector<double> probe = params_;
    probe[coord] += step;
    const double f_plus = objective(probe);
    probe[coord] -= 2 * step;
    const double f_minus = objective(probe);
    if (f_plus < f0 && f_plus <= f_minus)
      params_[coord] += step;
    else if (f_minus < f0)
      params_[coord] -= step;
  }

  const DiagonalHamiltonian& hamiltonian_;
  const VqeConfig& config_;
  int n_;
  int k_;
  std::vector<bool> adjacency_;
  Rng rng_;
  Circuit circuit_;
  std::vector<double> params_;
  BestTracker best_;
  double eval_cvar_sum_ = 0;
  int eval_count_ = 0;
};

}  // namespace

VqeResult run_vqe(const OverlapGraph& graph, const DiagonalHamiltonian& hamiltonian,
                  const VqeConfig& config) {
  if (hamiltonian.encoding.total_qubits() > kMaxSimQubits)
    throw std::invalid_argument("run_vqe: encoding needs " +
                                std::to_string(hamiltonian.encoding.total_qubits()) +
                                " qubits, dense cap is " + std::to_string(kMaxSimQubits));
  if (config.max_iters < 1) throw std::invalid_argument("run_vqe: max_iters must be >= 1");
  return VqeLoop(graph, hamiltonian, config).run();
}

void save_checkpoint(std::ostream& out, const AnsatzSpec& spec,
                     std::span<const double> params) {
  out << "ansatz " << ansatz_kind_name(spec.kind) << " reps " << spec.reps
      << " qubits " << spec.qubits() << " params " << params.size() << '\n';
  for (double p : params) out << format_double(p) << '\n';
}

std::vector<double> load_checkpoint(std::istream& in, const AnsatzSpec& expected) {
  std::string header;
  if (!std::getline(in, header))
    throw std::invalid_argument("checkpoint: missing header");
  std::ostringstream want;
  want << "ansatz " << ansatz_kind_name(expected.kind) << " reps " << expected.reps
       << " qubits " << expected.qubits() << " params "
       << 3 * expected.qubits() * expected.reps;
  if (trim(header) != want.str())
    throw std::invalid_argument("checkpoint: ansatz fingerprint mismatch (have `" +
                                header + "`, want `" + want.str() + "`)");
  std::vector<double> params;
  std::string line;
  while (std::getline(in, line)) {
    auto body = trim(line);
    if (body.empty()) continue;
    params.push_back(std::stod(std::string(body)));
  }
  if (static_cast<int>(params.size()) != 3 * expected.qubits() * expected.reps)
    throw std::invalid_argument("checkpoint: wrong parameter count");
  return params;
}

void write_history_csv(std::ostream& out, const VqeResult& result) {
  out << "iter,cvar,min_cost,best_violations,anomaly_count\n";
  for (const IterationStat& s : result.history)
    out << s.iter << ',' << format_double(s.cvar) << ',' << format_double(s.min_cost)
        << ',' << s.best_violations << ',' << s.anomalies << '\n';
}

}  // namespace olcq
