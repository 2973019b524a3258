#include "vlmc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <thread>

#include "vlmc/bounds.hpp"
#include "vlmc/errors.hpp"
#include "vlmc/estimator.hpp"
#include "vlmc/rng.hpp"
#include "vlmc/version.hpp"

namespace vlmc {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw FormatError("config key '" + std::string(key) + "': invalid number \"" +
                      std::string(text) + "\"");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    out.push_back(parse_number<T>(key, text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (epsilons.empty()) throw ValidationError("experiment: eps grid is empty");
  if (ns.empty()) throw ValidationError("experiment: n grid is empty");
  for (double e : epsilons) {
    if (!(e >= 0.0 && e <= 1.0)) throw ValidationError("experiment: eps outside [0, 1]");
  }
  for (auto n : ns) {
    if (n > kMaxSampleLength) {
      throw ValidationError("experiment: n = " + std::to_string(n) + " exceeds " +
                            std::to_string(kMaxSampleLength) + "; shard the run");
    }
  }
  if (d >= *std::min_element(ns.begin(), ns.end())) {
    throw ValidationError("experiment: d must be below every n in the grid");
  }
  if (k < 1) throw ValidationError("experiment: K must be >= 1");
  if (replicates < 1 || replicates > kMaxReplicates) {
    throw ValidationError("experiment: replicates must lie in [1, " +
                          std::to_string(kMaxReplicates) + "]");
  }
  if (delta && !(*delta > 0.0)) throw ValidationError("experiment: delta must be > 0");
  if (!delta && d > kMaxWindowDepth) {
    throw ValidationError("experiment: delta=auto needs d <= " + std::to_string(kMaxWindowDepth));
  }
  if (d > kMaxQMinDepth) {
    throw ValidationError("experiment: d exceeds " + std::to_string(kMaxQMinDepth));
  }
}

ExperimentConfig parse_experiment_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (!kv.emplace(key, value).second) {
      throw FormatError("config line " + std::to_string(line_no) + ": duplicate key " + key);
    }
  }

  static const char* const kKeys[] = {"tree", "eps", "n", "delta", "d", "K", "replicates", "seed"};
  for (const auto& [key, value] : kv) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys),
                     [&](const char* k) { return key == k; }) == std::end(kKeys)) {
      throw FormatError("config: unknown key " + key);
    }
  }
  auto need = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError(std::string("config: missing key ") + key);
    return it->second;
  };

  ExperimentConfig c;
  c.tree_path = need("tree");
  c.epsilons = parse_list<double>("eps", need("eps"));
  c.ns = parse_list<std::uint64_t>("n", need("n"));
  if (const auto& dv = need("delta"); dv != "auto") c.delta = parse_number<double>("delta", dv);
  c.d = parse_number<std::size_t>("d", need("d"));
  c.k = parse_number<std::size_t>("K", need("K"));
  c.replicates = parse_number<std::size_t>("replicates", need("replicates"));
  c.seed = parse_number<std::uint64_t>("seed", need("seed"));
  return c;
}

std::uint64_t chain_seed(std::uint64_t base, std::size_t n_index, std::size_t replicate) {
  return derive_seed(base, {n_index, replicate, static_cast<std::uint64_t>(Stream::Chain)});
}

std::uint64_t noise_seed(std::uint64_t base, std::size_t n_index, std::size_t replicate) {
  return derive_seed(base, {n_index, replicate, static_cast<std::uint64_t>(Stream::Noise)});
}

RecoveryReport run_recovery(const ExperimentConfig& config, const ContextTree& tree,
                            const RunOptions& options) {
  config.validate();
  auto base = std::make_shared<const ChainLaw>(tree);
  RecoveryReport report;
  report.base_seed = config.seed;
  report.tree_fingerprint = tree.fingerprint();

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(config.replicates)));

  for (double eps : config.epsilons) {
    const PerturbedLaw law(base, PerturbationModel(eps));
    const PerturbationModel model(eps);
    const DeltaWindow exact = config.d <= kMaxWindowDepth ? exact_delta_window(law, config.d)
                                                          : DeltaWindow{0.0, 0.0};
    const DeltaWindow theory = theoretical_delta_window(*base, eps, config.d);

    for (std::size_t ni = 0; ni < config.ns.size(); ++ni) {
      RecoveryRow row;
      row.epsilon = eps;
      row.n = config.ns[ni];
      row.d = config.d;
      row.k = config.k;
      row.replicates = config.replicates;
      row.exact_window = exact;
      row.theoretical_window = theory;

      if (config.delta) {
        row.delta = *config.delta;
      } else if (exact.usable()) {
        row.delta = exact.midpoint();
      } else {
        row.skipped = true;
        row.delta = std::nan("");
        row.note = "auto delta: exact window empty";
        report.rows.push_back(std::move(row));
        continue;
      }

      const Theorem2Params params = make_theorem2_params(law, config.d, config.k, row.n, row.delta);
      if (const auto adm = check_admissible(params); adm.ok) {
        row.admissible = true;
        row.bound = theorem2_bound_formula(params);
      } else {
        row.note = adm.violated;
      }

      std::vector<unsigned char> failed(config.replicates, 0);
      std::atomic<std::size_t> cursor{0};
      auto worker = [&] {
        for (std::size_t r = cursor++; r < config.replicates; r = cursor++) {
          const SamplePath x = base->sample(row.n, chain_seed(config.seed, ni, r));
          const SamplePath z = perturb(x, model, noise_seed(config.seed, ni, r));
          const EstimatedTree est = estimate_tree(z.symbols, row.delta, config.d);
          failed[r] = compare_truncated(est, tree, config.k).equal ? 0 : 1;
        }
      };
      {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
      }
      for (unsigned char f : failed) row.errors += f;
      row.frequency = static_cast<double>(row.errors) / static_cast<double>(row.replicates);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string format_report(const RecoveryReport& report, std::string_view tree_label) {
  auto num = [](double v) { return std::isfinite(v) ? format_double(v) : std::string("inf"); };
  std::string out;
  out += "# vlmc experiment report, version ";
  out += kVersion;
  out += "\n# generator=";
  out += kGeneratorName;
  out += " base_seed=" + std::to_string(report.base_seed);
  out += "\n# chain seed=derive(base,{n_index,replicate,CHAI}) noise seed=derive(base,{n_index,replicate,NOIS})";
  out += "\n# tree=";
  out += tree_label;
  out += " fingerprint=" + report.tree_fingerprint + "\n";
  for (const auto& r : report.rows) {
    out += "# eps=" + format_double(r.epsilon) + " n=" + std::to_string(r.n) +
           " exact_window=(" + num(r.exact_window.low) + "," + num(r.exact_window.high) + ")" +
           " theoretical_window=(" + num(r.theoretical_window.low) + "," +
           num(r.theoretical_window.high) + ")";
    if (!r.note.empty()) out += " note=" + r.note;
    out += '\n';
  }
  out += "eps\tn\tdelta\td\tK\treplicates\terrors\tfreq\tbound\tadmissible\n";
  for (const auto& r : report.rows) {
    out += format_double(r.epsilon) + '\t' + std::to_string(r.n) + '\t';
    if (r.skipped) {
      out += "NA\t" + std::to_string(r.d) + '\t' + std::to_string(r.k) + '\t' +
             std::to_string(r.replicates) + "\tNA\tNA\tNA\tskipped\n";
      continue;
    }
    out += format_double(r.delta) + '\t' + std::to_string(r.d) + '\t' + std::to_string(r.k) + '\t' +
           std::to_string(r.replicates) + '\t' + std::to_string(r.errors) + '\t' +
           format_double(r.frequency) + '\t' + (r.bound ? format_double(*r.bound) : "NA") + '\t' +
           (r.admissible ? "yes" : "no") + '\n';
  }
  return out;
}

}  // namespace vlmc
