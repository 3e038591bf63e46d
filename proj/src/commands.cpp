#include "gql/commands.hpp"

#include <fstream>

#include "gql/error.hpp"
#include "gql/semidirect.hpp"
#include "gql/verify.hpp"

namespace gql {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(dir / name);
  if (!os) throw Error(ErrorKind::InvalidConfig, "cannot write '" + (dir / name).string() + "'");
  return os;
}

void write_json(const fs::path& dir, const std::string& name, const json& doc) { open_out(dir, name) << doc.dump(2) << '\n'; }

void require_level(const ExperimentConfig& cfg, const Filtration& filt) {
  if (cfg.level < 0 || cfg.level > filt.depth()) {
    throw Error(ErrorKind::InvalidConfig, "level " + std::to_string(cfg.level) + " outside the filtration depth " +
                                              std::to_string(filt.depth()));
  }
  if (cfg.modified_level < 0 || cfg.modified_level > filt.depth()) {
    throw Error(ErrorKind::InvalidConfig, "modified_level outside the filtration depth");
  }
}

// h_n(γ) = min(level(γ), n) / n: distance to the unit space, capped and rescaled.
ModuleVector radial(const Filtration& filt, int n) {
  const Groupoid& g = *filt.groupoid();
  ModuleVector h = ModuleVector::zeros(filt.groupoid());
  for (Elem e = 0; e < g.size(); ++e) h.values[e] = static_cast<double>(std::min(filt.level_of(e), n)) / n;
  return h;
}

}  // namespace

int cmd_build(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out) {
  const auto ex = load_experiment(cfg);
  const Groupoid& g = *ex.filt.groupoid();
  write_json(dir, "groupoid.json", groupoid_to_json(g));
  write_json(dir, "filtration.json", filtration_to_json(ex.filt));
  out << "elements " << g.size() << "\nunits " << g.unit_count() << "\ndepth " << ex.filt.depth() << "\ncardinalities";
  for (auto c : ex.filt.cardinalities()) out << ' ' << c;
  out << '\n';
  return kExitOk;
}

int cmd_diagnose(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out) {
  const auto ex = load_experiment(cfg);
  Rng rng(cfg.seed);
  const auto t = make_operator(cfg.op, ex, rng);
  const auto eq = is_equivariant(t, cfg.tol);
  int status = kExitOk;

  auto diag = open_out(dir, "diagnostics.csv");
  diag << "# gql-diagnostics v1\nkey,value\n";
  diag << "equivariant," << (eq.equivariant ? "true" : "false") << '\n';
  diag << "equivariance_defect," << format_double(eq.defect) << '\n';
  if (eq.equivariant) {
    const double residual = max_entry_diff(lambda(extract_convolver(t, cfg.tol)), t);
    diag << "convolver_residual," << format_double(residual) << '\n';
    if (residual > cfg.tol) status = kExitInvariant;
  }
  const int support = support_level(t, ex.filt);
  diag << "support_level," << support << '\n';
  diag << "operator_norm," << format_double(operator_norm(t)) << '\n';

  const auto profile = propagation_profile(t, ex.filt, cfg.exact_limit);
  auto prof = open_out(dir, "profile.csv");
  write_profile_csv(prof, profile);
  if (cfg.vector) {
    const auto xi = make_vector(*cfg.vector, ex, rng);
    auto vp = open_out(dir, "vector_profile.csv");
    write_profile_csv(vp, vector_ql_profile(t, xi, ex.filt, cfg.exact_limit));
  }
  auto comm = open_out(dir, "commutator.csv");
  comm << "# gql-commutator v1\nlevel,variation,defect\n";
  for (int n = 1; n <= ex.filt.depth(); ++n) {
    const auto h = radial(ex.filt, n);
    comm << n << ',' << format_double(variation_of(h, ex.filt, 1)) << ',' << format_double(commutator_defect(t, h)) << '\n';
  }
  out << "equivariant " << (eq.equivariant ? "true" : "false") << " (defect " << format_double(eq.defect) << ")\n";
  out << "support_level " << support << '\n';
  for (std::size_t n = 0; n < profile.levels.size(); ++n) {
    const auto& l = profile.levels[n];
    out << "profile[" << n << "] " << format_double(l.lower) << ' ' << format_double(l.upper) << ' ' << to_string(l.method)
        << '\n';
  }
  return status;
}

int cmd_approximate(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out) {
  const auto ex = load_experiment(cfg);
  require_level(cfg, ex.filt);
  Rng rng(cfg.seed);
  const auto t = make_operator(cfg.op, ex, rng);
  const auto witnesses = make_witnesses(cfg.witness, ex);
  const auto options = approximation_options(cfg);
  int status = kExitOk;

  auto report = open_out(dir, "report.csv");
  report << "# gql-approximation v1\nwitness,global_error,identity_residual,output_support_level,witness_support_level\n";
  for (const auto& w : witnesses) {
    const auto a = approximate(t, w.h, ex.filt, options);
    const auto& r = a.report;
    report << w.id << ',' << format_double(r.global_error) << ',' << format_double(r.identity_residual) << ','
           << r.output_support_level << ',' << r.witness_support_level << '\n';
    write_json(dir, "approximant_" + w.id + ".json", vector_to_json(a.approximant));
    // The certified error must be the true distance and the Schur identity must hold.
    const double direct = operator_norm(lambda(a.approximant) - t);
    if (r.identity_residual > 1e-10 || std::abs(direct - r.global_error) > 1e-9 ||
        r.output_support_level > r.witness_support_level) {
      status = kExitInvariant;
    }
    out << w.id << " error " << format_double(r.global_error) << '\n';
  }
  auto sweep = open_out(dir, "sweep.csv");
  write_sweep_csv(sweep, error_sweep(t, witnesses, ex.filt, cfg.level, options));
  return status;
}

int cmd_semidirect(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out) {
  const auto ex = load_experiment(cfg);
  const auto sp = self_semidirect(ex.filt.groupoid());
  const auto lifted = lift_filtration(sp, ex.filt);
  write_json(dir, "semidirect.json", groupoid_to_json(*sp.product));
  write_json(dir, "semidirect_filtration.json", filtration_to_json(lifted));

  Rng rng(cfg.seed);
  const Experiment product{{sp.product, lifted, {}}, lifted};
  const auto t = make_operator(cfg.op, product, rng);
  const auto th = Theta(sp, t, cfg.tol);
  const auto f_t = extract_convolver(t, cfg.tol);
  const Groupoid& g = *ex.filt.groupoid();

  double kappa_iota = 0.0;
  for (Elem a = 0; a < g.size(); ++a) {
    const auto d = ModuleVector::delta(ex.filt.groupoid(), a);
    kappa_iota = std::max(kappa_iota, max_abs_diff(kappa(sp, iota(sp, d)), d));
  }
  double slice = 0.0;
  for (Elem x : g.units()) slice = std::max(slice, max_abs_diff(th.blocks[static_cast<std::size_t>(g.unit_slot(x))], ad_slice(sp, t, x)));
  const auto transfer = ql_transfer_check(sp, t, ex.filt, lifted, cfg.exact_limit, cfg.tol);
  double worst_gap = 0.0;
  for (double v : transfer.gap) worst_gap = std::max(worst_gap, v);

  struct Row {
    const char* name;
    double value, bound;
  };
  const Row rows[] = {
      {"theta_residual", max_entry_diff(th, theta(sp, f_t)), 1e-12},
      {"tube_residual", max_entry_diff(th, tube_rep(vartheta(sp, f_t))), 1e-12},
      {"kappa_iota_residual", kappa_iota, 0.0},
      {"isometry_gap", std::abs(operator_norm(th) - operator_norm(t)), 1e-9},
      {"slice_residual", slice, 1e-12},
      {"transfer_gap", worst_gap, 1e-10},
  };
  int status = kExitOk;
  auto checks = open_out(dir, "checks.csv");
  checks << "# gql-semidirect v1\ncheck,value,bound,passed\n";
  for (const auto& r : rows) {
    const bool ok = r.value <= r.bound;
    if (!ok) status = kExitInvariant;
    checks << r.name << ',' << format_double(r.value) << ',' << format_double(r.bound) << ',' << (ok ? "true" : "false") << '\n';
    out << r.name << ' ' << format_double(r.value) << (ok ? "" : "  FAILED") << '\n';
  }
  auto tr = open_out(dir, "transfer.csv");
  tr << "# gql-transfer v1\nlevel,base_lower,base_upper,product_lower,product_upper,gap\n";
  for (std::size_t n = 0; n < transfer.gap.size(); ++n) {
    const auto& a = transfer.base.levels[n];
    const auto& b = transfer.product.levels[n];
    tr << n << ',' << format_double(a.lower) << ',' << format_double(a.upper) << ',' << format_double(b.lower) << ','
       << format_double(b.upper) << ',' << format_double(transfer.gap[n]) << '\n';
  }
  out << "support levels " << transfer.base_support_level << ' ' << transfer.product_support_level << '\n';
  return status;
}

int cmd_verify(std::uint64_t seed, int trials, const fs::path& dir, std::ostream& out) {
  const auto results = run_invariant_suite(seed, trials);
  auto csv = open_out(dir, "verify.csv");
  csv << "# gql-verify v1\ncheck,passed,cases\n";
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    csv << r.name << ',' << (r.passed ? "true" : "false") << ',' << r.cases << '\n';
    if (r.passed) {
      out << "PASS " << r.name << " (" << r.cases << " cases)\n";
    } else {
      out << "FAIL " << r.name << ": " << r.counterexample << '\n';
    }
  }
  return all ? kExitOk : kExitInvariant;
}

int run_command(std::string_view verb, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (verb == "verify") {
      ExperimentConfig cfg;
      cfg.seed = 1;
      if (!opts.config.empty()) {
        const json doc = load_json_file(opts.config);
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("trials")) cfg.trials = doc["trials"].get<int>();
      }
      apply_overrides(cfg, opts.overrides);
      return cmd_verify(cfg.seed, cfg.trials, opts.out, out);
    }
    if (opts.config.empty()) throw Error(ErrorKind::InvalidConfig, "--config is required for " + std::string(verb));
    auto cfg = load_config(opts.config);
    apply_overrides(cfg, opts.overrides);
    if (verb == "build") return cmd_build(cfg, opts.out, out);
    if (verb == "diagnose") return cmd_diagnose(cfg, opts.out, out);
    if (verb == "approximate") return cmd_approximate(cfg, opts.out, out);
    if (verb == "semidirect") return cmd_semidirect(cfg, opts.out, out);
    throw Error(ErrorKind::InvalidConfig, "unknown command '" + std::string(verb) + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (!opts.config.empty()) err << "  while running " << verb << " on " << opts.config.string() << '\n';
    return kExitValidation;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace gql
