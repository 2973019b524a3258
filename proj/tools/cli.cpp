#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>

#include "vlmc/bounds.hpp"
#include "vlmc/chain_law.hpp"
#include "vlmc/context_tree.hpp"
#include "vlmc/errors.hpp"
#include "vlmc/estimator.hpp"
#include "vlmc/experiment.hpp"
#include "vlmc/noise_law.hpp"
#include "vlmc/rng.hpp"
#include "vlmc/sample_io.hpp"

namespace vlmc::cli {
namespace {

// 12 significant digits for human-readable summaries.
std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ContextTree load_tree(const std::string& path, Completeness completeness) {
  return ContextTree::parse(read_text_file(path), completeness);
}

std::shared_ptr<const ChainLaw> load_law(const std::string& path) {
  return std::make_shared<const ChainLaw>(load_tree(path, Completeness::Required));
}

void emit(const std::string& out_path, const std::string& text, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_text_file(out_path, text);
  }
}

struct TreeArgs {
  std::string tree;
  bool require_complete = false;
  std::size_t k = 0;
};

struct RunArgs {
  std::string tree, in, out, w, config;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double eps = 0.0;
  double delta = 0.0;
  std::size_t d = 0;
  std::size_t depth = 0;
  std::size_t jmax = 0;
  std::size_t lemma_depth = 0;
  unsigned threads = 0;
};

int cmd_tree_validate(const TreeArgs& a, std::ostream& out) {
  const auto tree = load_tree(
      a.tree, a.require_complete ? Completeness::Required : Completeness::Optional);
  out << "valid contexts=" << tree.size() << " height=" << tree.height()
      << " complete=" << (tree.complete() ? "yes" : "no")
      << " irreducible=" << (tree.irreducible() ? "yes" : "no") << '\n';
  return kOk;
}

int cmd_tree_constants(const TreeArgs& a, std::ostream& out) {
  const auto tree = load_tree(a.tree, Completeness::Optional);
  const auto c = compute_constants(tree);
  out << "alpha=" << num(c.alpha) << '\n';
  for (std::size_t k = 0; k < c.beta_seq.size(); ++k) {
    out << "beta_" << k << '=' << num(c.beta_seq[k]) << '\n';
  }
  out << "beta=" << num(c.beta_sum) << '\n'
      << "beta_star=" << num(c.beta_star) << '\n'
      << "c=" << num(c.c_const) << '\n'
      << "summable=yes (finite height " << tree.height() << ")\n";
  return kOk;
}

int cmd_tree_truncate(const TreeArgs& a, std::ostream& out) {
  const auto tree = load_tree(a.tree, Completeness::Optional);
  const auto truncated = truncate(tree, a.k);
  std::vector<Sequence> sorted(truncated.begin(), truncated.end());
  std::sort(sorted.begin(), sorted.end(), ShortlexLess{});
  out << "# K=" << a.k << " min_valid_depth=" << min_valid_depth(tree, a.k) << '\n';
  for (const auto& w : sorted) out << w.str() << '\n';
  return kOk;
}

int cmd_simulate(const RunArgs& a, std::ostream& out) {
  const auto law = load_law(a.tree);
  if (a.n > kMaxSampleLength) {
    throw ValidationError("n exceeds " + std::to_string(kMaxSampleLength) + "; shard the run");
  }
  const SamplePath path = law->sample(a.n, a.seed);
  const std::string header = "seed=" + std::to_string(a.seed) + " tree=" + path.source +
                             " n=" + std::to_string(a.n) + " generator=" +
                             std::string(kGeneratorName);
  emit(a.out, format_sample(path, header), out);
  if (!a.out.empty()) out << "wrote " << a.n << " symbols to " << a.out << '\n';
  return kOk;
}

int cmd_perturb(const RunArgs& a, std::ostream& out) {
  const PerturbationModel model(a.eps);
  SamplePath in = parse_sample(read_text_file(a.in));
  in.source = a.in;
  const SamplePath z = perturb(in, model, a.seed);
  const std::string header = "seed=" + std::to_string(a.seed) + " eps=" + format_double(a.eps) +
                             " source=" + a.in + " generator=" + std::string(kGeneratorName);
  emit(a.out, format_sample(z, header), out);
  if (!a.out.empty()) out << "wrote " << z.symbols.size() << " symbols to " << a.out << '\n';
  return kOk;
}

int cmd_estimate(const RunArgs& a, std::ostream& out) {
  const SamplePath sample = parse_sample(read_text_file(a.in));
  const EstimatedTree est = estimate_tree(sample.symbols, a.delta, a.d);
  std::string text = "# estimated n=" + std::to_string(est.n) + " d=" + std::to_string(est.d) +
                     " delta=" + format_double(est.delta) +
                     " max_delta=" + format_double(est.max_delta) + "\n";
  if (est.memoryless()) text += "# no significant context: memoryless model\n";
  text += est.to_tree().serialize();
  emit(a.out, text, out);
  if (!a.out.empty()) {
    out << "estimated " << (est.memoryless() ? std::size_t{0} : est.contexts.size())
        << " contexts (max delta " << num(est.max_delta) << ") -> " << a.out << '\n';
  }
  return kOk;
}

void exact_row(const PerturbedLaw& law, const Sequence& w, std::ostream& out) {
  const FilterState f = law.filter(w.symbols());
  out << w.str() << '\t' << format_double(std::exp(f.log_prob)) << '\t'
      << format_double(law.predict(f, Symbol::Zero)) << '\t'
      << format_double(law.predict(f, Symbol::One)) << '\n';
}

int cmd_exact(const RunArgs& a, bool have_w, bool have_depth, std::ostream& out) {
  if (have_w == have_depth) throw FormatError("exact: give exactly one of --w or --depth");
  const PerturbedLaw law(load_law(a.tree), PerturbationModel(a.eps));
  out << "w\tq(w)\tq(0|w)\tq(1|w)\n";
  if (have_w) {
    const Sequence w = Sequence::parse(a.w);
    if (w.length() >= kMaxMarginalLength) throw ValidationError("exact: --w exceeds length cap");
    exact_row(law, w, out);
    return kOk;
  }
  if (a.depth >= kMaxMarginalLength) throw ValidationError("exact: --depth exceeds length cap");
  for (std::size_t len = 0; len <= a.depth; ++len) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
      exact_row(law, Sequence::from_bits(bits, len), out);
    }
  }
  return kOk;
}

int cmd_certify(const RunArgs& a, bool with_lemmas, std::ostream& out) {
  const PerturbedLaw law(load_law(a.tree), PerturbationModel(a.eps));
  const auto report = theorem1_certify(law, a.jmax);
  out << "# C=" << num(law.base().constants().c_const) << " eps=" << num(a.eps) << '\n';
  out << "j\tmax_gap\tbound\tholds\n";
  for (const auto& r : report.rows) {
    out << r.j << '\t' << num(r.max_gap) << '\t' << num(r.bound) << '\t'
        << (r.holds ? "yes" : "no") << '\n';
  }
  out << "# overall max_gap=" << num(report.max_gap) << " bound=" << num(report.bound)
      << " holds=" << (report.holds ? "yes" : "no") << '\n';
  bool ok = report.holds;
  if (with_lemmas) {
    const auto lem = lemma_bounds_check(law, a.lemma_depth);
    out << "# lemma k_max=" << lem.k_max << " min_q_conditional=" << num(lem.min_q_conditional)
        << " min_hidden_given_observed=" << num(lem.min_hidden_given_observed)
        << " alpha=" << num(lem.alpha) << " floor_holds=" << (lem.floor_holds ? "yes" : "no")
        << '\n';
    out << "# lemma max_flip_posterior=" << num(lem.max_flip_posterior)
        << " bound=" << num(lem.flip_bound) << " flip_holds=" << (lem.flip_holds ? "yes" : "no")
        << '\n';
    ok = ok && lem.holds;
  }
  return ok ? kOk : kValidation;
}

int cmd_window(const RunArgs& a, std::ostream& out) {
  const auto base = load_law(a.tree);
  const PerturbedLaw law(base, PerturbationModel(a.eps));
  const auto theory = theoretical_delta_window(*base, a.eps, a.d);
  const auto exact = exact_delta_window(law, a.d);
  out << "kind\tlow\thigh\tusable\n";
  out << "theoretical\t" << num(theory.low) << '\t' << num(theory.high) << '\t'
      << (theory.usable() ? "yes" : "no") << '\n';
  out << "exact\t" << num(exact.low) << '\t' << num(exact.high) << '\t'
      << (exact.usable() ? "yes" : "no") << '\n';
  if (exact.usable()) out << "# auto delta (exact midpoint)=" << num(exact.midpoint()) << '\n';
  return kOk;
}

int cmd_experiment(const RunArgs& a, std::ostream& out) {
  const ExperimentConfig config = parse_experiment_config(read_text_file(a.config));
  std::string tree_path = config.tree_path;
  if (!tree_path.empty() && tree_path.front() != '/') {
    const auto slash = a.config.find_last_of('/');
    if (slash != std::string::npos) tree_path = a.config.substr(0, slash + 1) + tree_path;
  }
  const auto tree = load_tree(tree_path, Completeness::Required);
  const auto report = run_recovery(config, tree, RunOptions{a.threads});
  emit(a.out, format_report(report, config.tree_path), out);
  if (!a.out.empty()) out << "wrote " << report.rows.size() << " rows to " << a.out << '\n';
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noisy variable-length Markov chains: simulate, perturb, estimate, certify"};
  app.name("vlmc");
  app.require_subcommand(1);

  TreeArgs ta;
  RunArgs ra;

  auto* tree_cmd = app.add_subcommand("tree", "Inspect a context tree file");
  tree_cmd->require_subcommand(1);
  auto* validate = tree_cmd->add_subcommand("validate", "Validate and report flags");
  validate->add_option("--tree", ta.tree, "Tree file")->required();
  validate->add_flag("--require-complete", ta.require_complete, "Fail on incomplete trees");
  auto* constants = tree_cmd->add_subcommand("constants", "alpha, beta_k, beta, beta*, C");
  constants->add_option("--tree", ta.tree, "Tree file")->required();
  auto* trunc = tree_cmd->add_subcommand("truncate", "Truncate to level K");
  trunc->add_option("--tree", ta.tree, "Tree file")->required();
  trunc->add_option("--K", ta.k, "Level")->required()->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Sample the stationary chain");
  simulate->add_option("--tree", ra.tree, "Tree file")->required();
  simulate->add_option("--n", ra.n, "Sample length")->required();
  simulate->add_option("--seed", ra.seed, "RNG seed")->required();
  simulate->add_option("--out", ra.out, "Output sample file (default stdout)");

  auto* perturb_cmd = app.add_subcommand("perturb", "Flip symbols independently");
  perturb_cmd->add_option("--in", ra.in, "Input sample file")->required();
  perturb_cmd->add_option("--eps", ra.eps, "Flip probability")->required();
  perturb_cmd->add_option("--seed", ra.seed, "RNG seed")->required();
  perturb_cmd->add_option("--out", ra.out, "Output sample file (default stdout)");

  auto* estimate = app.add_subcommand("estimate", "Estimate the context tree");
  estimate->add_option("--in", ra.in, "Input sample file")->required();
  estimate->add_option("--delta", ra.delta, "Significance threshold")->required();
  estimate->add_option("--d", ra.d, "Maximal depth")->required();
  estimate->add_option("--out", ra.out, "Output tree file (default stdout)");

  auto* exact = app.add_subcommand("exact", "Exact law of the perturbed chain");
  exact->add_option("--tree", ra.tree, "Tree file")->required();
  exact->add_option("--eps", ra.eps, "Flip probability")->required();
  auto* w_opt = exact->add_option("--w", ra.w, "Single word");
  auto* depth_opt = exact->add_option("--depth", ra.depth, "All words up to this length");

  auto* certify = app.add_subcommand("certify", "Exact perturbation gap vs C*eps");
  certify->add_option("--tree", ra.tree, "Tree file")->required();
  certify->add_option("--eps", ra.eps, "Flip probability")->required();
  certify->add_option("--jmax", ra.jmax, "Largest past length")->required();
  auto* lemma_opt =
      certify->add_option("--lemmas", ra.lemma_depth, "Also check the lemma bounds to this depth");

  auto* window = app.add_subcommand("window", "Theoretical and exact delta windows");
  window->add_option("--tree", ra.tree, "Tree file")->required();
  window->add_option("--eps", ra.eps, "Flip probability")->required();
  window->add_option("--d", ra.d, "Depth")->required();

  auto* experiment = app.add_subcommand("experiment", "Monte Carlo recovery experiment");
  experiment->add_option("--config", ra.config, "key=value config file")->required();
  experiment->add_option("--out", ra.out, "Output TSV report (default stdout)");
  experiment->add_option("--threads", ra.threads, "Worker threads (default: all cores)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kFormat;
  }

  try {
    if (*validate) return cmd_tree_validate(ta, out);
    if (*constants) return cmd_tree_constants(ta, out);
    if (*trunc) return cmd_tree_truncate(ta, out);
    if (*simulate) return cmd_simulate(ra, out);
    if (*perturb_cmd) return cmd_perturb(ra, out);
    if (*estimate) return cmd_estimate(ra, out);
    if (*exact) return cmd_exact(ra, w_opt->count() > 0, depth_opt->count() > 0, out);
    if (*certify) return cmd_certify(ra, lemma_opt->count() > 0, out);
    if (*window) return cmd_window(ra, out);
    if (*experiment) return cmd_experiment(ra, out);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kFormat;
}

}  // namespace vlmc::cli
