#include "fdident/cli.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>

#include "CLI11.hpp"

#include "fdident/config.hpp"
#include "fdident/csvio.hpp"
#include "fdident/mc.hpp"

namespace fdident {

namespace {

namespace fs = std::filesystem;

struct Overrides {
  std::string out;
  long long runs = 0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  bool has_out = false, has_runs = false, has_sigma = false, has_seed = false;
};

void apply_overrides(RunConfig& cfg, const Overrides& ov) {
  if (ov.has_out) {
    if (ov.out.empty()) throw ConfigError("--out: must be nonempty");
    cfg.out_dir = ov.out;
  }
  if (ov.has_runs) {
    if (ov.runs < 2) throw ConfigError("--runs: must be >= 2");
    cfg.runs = static_cast<int>(ov.runs);
  }
  if (ov.has_sigma) {
    if (!(ov.sigma >= 0.0)) throw ConfigError("--sigma: must be >= 0");
    cfg.sigma = ov.sigma;
  }
  if (ov.has_seed) cfg.base_seed = ov.seed;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

Metadata base_metadata(const RunConfig& cfg) {
  return {{"config", hex64(config_hash(cfg))}};
}

void check_loop(const RunConfig& cfg) {
  if (!closed_loop_stable(cfg.sys)) throw NumericalError("closed loop unstable");
  if (!is_stable(cfg.sys.noise_model)) throw NumericalError("noise model unstable");
}

std::vector<ExperimentRecord> simulate_run(const RunConfig& cfg, int count) {
  std::vector<ExperimentRecord> recs;
  recs.reserve(static_cast<std::size_t>(count));
  const ExcitationSignal r1 = cfg.routed_r1();
  const ExcitationSignal r2 = cfg.routed_r2();
  for (int e = 0; e < count; ++e) {
    NoiseConfig noise;
    noise.sigma = cfg.sigma;
    noise.distribution = cfg.distribution;
    noise.seed = derive_seed(cfg.base_seed, 0, static_cast<std::uint64_t>(e));
    recs.push_back(run_experiment(cfg.sys, r1, r2, noise, cfg.settle_periods, e));
  }
  return recs;
}

Spectrum reference_spectrum(const RunConfig& cfg) {
  return dft(combined_reference(cfg.sys.controller, cfg.routed_r1(), cfg.routed_r2(),
                                cfg.settle_periods));
}

// Theoretical profile matched to an estimator tag; geometric averaging halves
// the variance. ETFE tags have no plant-estimate profile.
VarianceProfile theory_for_tag(const std::string& tag, const VarianceProfile& dir,
                               const VarianceProfile& ind, const VarianceProfile& io2) {
  const auto halved = [](VarianceProfile p) {
    for (double& v : p.values) v *= 0.5;
    return p;
  };
  if (tag == "direct" || tag == "joint_io") return dir;
  if (tag == "indirect") return ind;
  if (tag == "joint_io_two_exp") return io2;
  if (tag == "geo_direct") return halved(dir);
  if (tag == "geo_joint_io_two_exp") return halved(io2);
  throw ConfigError("estimators: no theoretical variance profile for tag '" + tag + "'");
}

void cmd_simulate(const RunConfig& cfg) {
  check_loop(cfg);
  const Metadata meta = base_metadata(cfg);
  const auto recs = simulate_run(cfg, experiments_per_run(cfg.pairing));
  for (const auto& rec : recs) {
    Metadata m = meta;
    m.emplace_back("distribution", to_string(cfg.distribution));
    m.emplace_back("settle_periods", std::to_string(cfg.settle_periods));
    write_record_csv(out_path(cfg, "experiment_" + std::to_string(rec.experiment_id) + ".csv"),
                     rec, m);
  }
}

void cmd_estimate(const RunConfig& cfg) {
  const int count = experiments_per_run(cfg.pairing);
  std::vector<ExperimentRecord> recs;
  recs.reserve(static_cast<std::size_t>(count));
  for (int e = 0; e < count; ++e) {
    recs.push_back(read_record_csv(out_path(cfg, "experiment_" + std::to_string(e) + ".csv")));
  }
  const Metadata meta = base_metadata(cfg);
  for (const auto& tag : cfg.estimators) {
    const PlantEstimate est = apply_estimator(tag, recs, cfg.sys.controller);
    bool any_valid = false;
    for (const auto v : est.valid) any_valid = any_valid || v != 0;
    if (!any_valid) throw NumericalError("estimator '" + tag + "' masked at every frequency");
    write_estimate_csv(out_path(cfg, "estimate_" + tag + ".csv"), est, meta);
  }
}

void cmd_theory(const RunConfig& cfg) {
  check_loop(cfg);
  const Spectrum R = reference_spectrum(cfg);
  const NoiseCovariances cov = noise_covariances(cfg.sys, R.n);
  const Metadata meta = base_metadata(cfg);

  write_profile_csv(out_path(cfg, "asymptotic_dir.csv"),
                    asymptotic_variance(cfg.sys, R, cov, ProfileKind::asymptotic_dir), meta);
  write_profile_csv(out_path(cfg, "asymptotic_ind.csv"),
                    asymptotic_variance(cfg.sys, R, cov, ProfileKind::asymptotic_ind), meta);
  write_profile_csv(out_path(cfg, "asymptotic_io2.csv"),
                    asymptotic_variance(cfg.sys, R, cov, ProfileKind::asymptotic_io2), meta);
  write_profile_csv(out_path(cfg, "no_leakage_dir.csv"),
                    no_leakage_variance(cfg.sys, R, ProfileKind::no_leakage_dir), meta);
  write_profile_csv(out_path(cfg, "no_leakage_io2.csv"),
                    no_leakage_variance(cfg.sys, R, ProfileKind::no_leakage_io2), meta);
  write_predicates_csv(out_path(cfg, "theory_predicates.csv"), ordering_predicate(cfg.sys, cov),
                       meta);
}

Metadata mc_metadata(const RunConfig& cfg, Pairing pairing) {
  Metadata meta = base_metadata(cfg);
  meta.emplace_back("runs", std::to_string(cfg.runs));
  meta.emplace_back("sigma", format_double(cfg.sigma));
  meta.emplace_back("base_seed", std::to_string(cfg.base_seed));
  meta.emplace_back("pairing", to_string(pairing));
  return meta;
}

void cmd_mc(const RunConfig& cfg) {
  if (!(cfg.sigma > 0.0)) throw ConfigError("noise.sigma: must be > 0 for mc");
  check_loop(cfg);

  const Spectrum R = reference_spectrum(cfg);
  const NoiseCovariances cov = noise_covariances(cfg.sys, R.n);
  const VarianceProfile dir = asymptotic_variance(cfg.sys, R, cov, ProfileKind::asymptotic_dir);
  const VarianceProfile ind = asymptotic_variance(cfg.sys, R, cov, ProfileKind::asymptotic_ind);
  const VarianceProfile io2 = asymptotic_variance(cfg.sys, R, cov, ProfileKind::asymptotic_io2);
  for (const auto& tag : cfg.estimators) theory_for_tag(tag, dir, ind, io2);

  const McResult result =
      run_mc(cfg.sys, cfg.routed_r1(), cfg.routed_r2(), cfg.mc_config(), cfg.settle_periods);

  std::vector<std::pair<std::string, std::vector<ComparisonRow>>> tables;
  for (const auto& tag : cfg.estimators) {
    tables.emplace_back(tag, compare_profiles(result.find(tag), theory_for_tag(tag, dir, ind, io2),
                                              cfg.sigma));
  }
  write_comparison_csv(out_path(cfg, "mc_compare.csv"), tables, mc_metadata(cfg, cfg.pairing));
}

void cmd_report(const RunConfig& cfg) {
  if (!(cfg.sigma > 0.0)) throw ConfigError("noise.sigma: must be > 0 for report");
  check_loop(cfg);

  RunConfig rcfg = cfg;
  rcfg.pairing = Pairing::quad;
  rcfg.estimators = {"geo_direct", "geo_joint_io_two_exp"};

  const Spectrum R = reference_spectrum(rcfg);
  const NoiseCovariances cov = noise_covariances(rcfg.sys, R.n);
  const VarianceProfile dir = asymptotic_variance(rcfg.sys, R, cov, ProfileKind::asymptotic_dir);
  const VarianceProfile io2 = asymptotic_variance(rcfg.sys, R, cov, ProfileKind::asymptotic_io2);
  const VarianceProfile ind = asymptotic_variance(rcfg.sys, R, cov, ProfileKind::asymptotic_ind);

  const McResult result = run_mc(rcfg.sys, rcfg.routed_r1(), rcfg.routed_r2(), rcfg.mc_config(),
                                 rcfg.settle_periods);
  const auto rows_dir = compare_profiles(result.find("geo_direct"),
                                         theory_for_tag("geo_direct", dir, ind, io2), rcfg.sigma);
  const auto rows_io2 =
      compare_profiles(result.find("geo_joint_io_two_exp"),
                       theory_for_tag("geo_joint_io_two_exp", dir, ind, io2), rcfg.sigma);

  const int n = R.n;
  const double s2 = rcfg.sigma * rcfg.sigma;
  const Metadata meta = mc_metadata(rcfg, Pairing::quad);

  std::vector<std::string> fig2, fig3, fig4;
  for (int l = 0; l < n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    const double omega = R.omega(l);
    const double abs_g = std::abs(evaluate(rcfg.sys.plant, omega));
    const double abs_s = std::abs(loop_response(rcfg.sys, LoopTf::S, omega));
    const double noise_spec = s2 * std::norm(evaluate(rcfg.sys.noise_model, omega));
    const double re_gc = loop_response(rcfg.sys, LoopTf::GC, omega).real();

    fig2.push_back(format_double(omega) + "," + format_double(abs_g) + "," +
                   format_double(abs_s) + "," + format_double(noise_spec) + "," +
                   format_double(rows_dir[i].mc_var) + "," + format_double(rows_io2[i].mc_var) +
                   "," + format_double(rows_dir[i].theory_var) + "," +
                   format_double(rows_io2[i].theory_var));
    fig3.push_back(format_double(omega) + "," + format_double(rows_dir[i].abs_diff) + "," +
                   format_double(rows_io2[i].abs_diff) + "," + format_double(noise_spec));
    fig4.push_back(format_double(omega) + "," + format_double(re_gc));
  }
  write_csv(out_path(rcfg, "fig2.csv"), meta,
            "omega,abs_G,abs_S,noise_spectrum,mc_var_geo_dir,mc_var_geo_io2,theory_half_dir,"
            "theory_half_io2",
            fig2);
  write_csv(out_path(rcfg, "fig3.csv"), meta, "omega,abs_diff_dir,abs_diff_io2,noise_spectrum",
            fig3);
  write_csv(out_path(rcfg, "fig4.csv"), meta, "omega,re_GC", fig4);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequency-domain closed-loop plant identification"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  std::vector<CLI::App*> subs;
  for (const char* name : {"simulate", "estimate", "theory", "mc", "report"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", ov.out, "output directory override");
    sub->add_option("--runs", ov.runs, "Monte Carlo run count override");
    sub->add_option("--sigma", ov.sigma, "noise standard deviation override");
    sub->add_option("--seed", ov.seed, "base seed override");
    subs.push_back(sub);
  }

  std::vector<const char*> argv;
  argv.push_back("fdident");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    ov.has_out = sub->count("--out") > 0;
    ov.has_runs = sub->count("--runs") > 0;
    ov.has_sigma = sub->count("--sigma") > 0;
    ov.has_seed = sub->count("--seed") > 0;

    RunConfig cfg = parse_config_file(config_path);
    apply_overrides(cfg, ov);
    fs::create_directories(cfg.out_dir);

    const std::string name = sub->get_name();
    if (name == "simulate") {
      cmd_simulate(cfg);
    } else if (name == "estimate") {
      cmd_estimate(cfg);
    } else if (name == "theory") {
      cmd_theory(cfg);
    } else if (name == "mc") {
      cmd_mc(cfg);
    } else {
      cmd_report(cfg);
    }
    return 0;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fdident
