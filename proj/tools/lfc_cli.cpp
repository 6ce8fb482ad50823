// Command-line front end: simulate, certify, tune, reproduce, max-delay.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lfc/archive.hpp"
#include "lfc/config.hpp"
#include "lfc/error.hpp"
#include "lfc/fixture.hpp"
#include "lfc/io_format.hpp"
#include "lfc/lk_functional.hpp"
#include "lfc/trace_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotCertified = 2;

struct Common {
  std::string config_path;
  std::string manifest_path;
  std::string variant;
  std::string out;
  std::string certificate;
  std::optional<std::uint64_t> seed;
  std::optional<double> tau;
  bool plot = false;
};

void add_common(CLI::App* cmd, Common& c, bool variant = true) {
  cmd->add_option("--config", c.config_path, "experiment configuration (JSON)");
  if (variant) cmd->add_option("--variant", c.variant, "built-in benchmark scenario: nominal, disturbed or smoothed");
  cmd->add_option("--seed", c.seed, "seed for delay profiles, disturbances and the tuner");
  cmd->add_option("--out", c.out, "output directory");
}

lfc::ExperimentConfig resolve_config(const Common& c) {
  lfc::ExperimentConfig cfg;
  const int sources = !c.config_path.empty() + !c.variant.empty() + !c.manifest_path.empty();
  if (sources > 1) throw lfc::ValidationError("give only one of --config, --variant and --manifest");
  if (!c.config_path.empty()) {
    cfg = lfc::load_config(c.config_path);
  } else if (!c.manifest_path.empty()) {
    std::ifstream in(c.manifest_path);
    if (!in) throw lfc::ValidationError("cannot read manifest " + c.manifest_path);
    json m;
    try {
      m = json::parse(in);
    } catch (const json::parse_error& e) {
      throw lfc::ValidationError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!m.is_object() || !m.contains("config")) throw lfc::ValidationError("manifest has no config section");
    cfg = lfc::parse_config(m["config"].dump());
  } else if (!c.variant.empty()) {
    cfg = lfc::benchmark_variant(c.variant);
  } else {
    cfg = lfc::benchmark_variant("nominal");
  }
  if (c.seed) {
    cfg.delays.seed = *c.seed;
    cfg.disturbance.seed = *c.seed;
    cfg.tuner.seed = *c.seed;
  }
  if (c.tau) cfg.certificate.tau = *c.tau;
  if (!c.out.empty()) cfg.output.directory = c.out;
  if (c.plot) cfg.output.plot = true;
  return cfg;
}

fs::path prepare_out(const lfc::ExperimentConfig& cfg) {
  fs::path dir(cfg.output.directory);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw lfc::Error("cannot write " + p.string());
  out << text;
}

json resolved_disturbance(const lfc::DisturbanceModel& d) {
  json arr = json::array();
  for (const auto& c : d.coefficients()) arr.push_back({{"offset", c.offset}, {"amplitude", c.amplitude}, {"frequency", c.frequency}});
  return {{"kind", lfc::to_string(d.kind())}, {"bound", d.bound()}, {"coefficients", arr}};
}

void maybe_plot(const lfc::ExperimentConfig& cfg, const fs::path& csv) {
  if (!cfg.output.plot) return;
  const std::string cmd = "python3 \"" LFC_PLOT_SCRIPT "\" \"" + csv.string() + "\" \"" + csv.parent_path().string() + "\" >/dev/null 2>&1";
  if (std::system(cmd.c_str()) != 0) std::cerr << "note: plotting failed; the CSV trace is unaffected\n";
}

struct RunOutput {
  lfc::SimTrace trace;
  lfc::DelayProfiles profiles;
};

RunOutput run_and_write(const lfc::Experiment& ex, const std::string& command, const std::string& certificate) {
  RunOutput r;
  r.profiles = lfc::make_profiles(ex);
  r.trace = lfc::simulate(ex, r.profiles);
  if (!certificate.empty() && !r.trace.time.empty()) {
    const auto arc = lfc::load_certificate(certificate);
    r.trace.lyapunov = lfc::evaluate_lk_functional(r.trace, arc.certificate, r.profiles).total;
  }
  const fs::path dir = prepare_out(ex.config);
  lfc::write_trace_csv((dir / "trace.csv").string(), r.trace);
  lfc::write_profiles_csv((dir / "profiles.csv").string(), r.profiles);
  write_text(dir / "config.resolved.json", lfc::serialize_config(ex.config));
  json manifest;
  manifest["software"] = {{"name", "lfc"}, {"version", LFC_VERSION}};
  manifest["command"] = command;
  manifest["seeds"] = {{"delays", ex.config.delays.seed}, {"disturbance", ex.config.disturbance.seed}};
  manifest["config"] = json::parse(lfc::serialize_config(ex.config));
  manifest["resolved"] = {{"disturbance", resolved_disturbance(ex.disturbance)},
                          {"max_delay", r.profiles.max_delay()},
                          {"samples", r.trace.samples()},
                          {"certificate", certificate}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  for (const auto& w : r.trace.warnings) std::cerr << "warning: " << w << '\n';
  maybe_plot(ex.config, dir / "trace.csv");
  return r;
}

void print_summary(const lfc::SimTrace& tr) {
  std::cout << "samples: " << tr.samples() << '\n';
  if (tr.time.empty()) return;
  std::cout << "final time: " << lfc::format_double(tr.time.back()) << '\n';
  for (int i = 0; i < tr.agents; ++i)
    std::cout << "agent " << i + 1 << " final error: " << lfc::format_double(tr.error[static_cast<std::size_t>(i)].back()) << '\n';
  std::cout << "max final error: " << lfc::format_double(tr.max_final_error()) << '\n';
}

void print_report(const lfc::LmiReport& r) {
  for (std::size_t k = 0; k < 3; ++k) {
    std::cout << "LMI " << k + 1 << ": ";
    if (r.present[k]) std::cout << "lambda_max = " << lfc::format_double(r.max_eigenvalue[k]) << '\n';
    else std::cout << "vacuous\n";
  }
  std::cout << "tau: " << lfc::format_double(r.tau) << "\nscaled margin: " << lfc::format_double(r.margin)
            << "\nrequired: " << lfc::format_double(r.tolerance) << " (absolute)\n"
            << "verdict: " << (r.feasible ? "certified" : "not certified") << '\n';
  if (!r.reason.empty()) std::cout << "reason: " << r.reason << '\n';
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
}

void print_estimate(const lfc::MaxDelayEstimate& est) {
  const char* names[3] = {"M1/M2", "M1bar/M2bar", "M1tilde/M2tilde"};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& t = est.terms[k];
    std::cout << names[k] << ": " << lfc::to_string(t.status);
    if (t.status != lfc::RatioStatus::vacuous)
      std::cout << "  |num| = " << lfc::format_double(std::abs(t.numerator)) << "  den = " << lfc::format_double(t.denominator)
                << "  ratio = " << lfc::format_double(t.value);
    std::cout << '\n';
  }
  std::cout << "tau_hat: " << (est.valid ? lfc::format_double(est.tau_hat) : std::string("undefined")) << '\n';
}

int cmd_simulate(const Common& c) {
  const auto ex = lfc::build_experiment(resolve_config(c));
  const auto r = run_and_write(ex, "simulate", c.certificate);
  print_summary(r.trace);
  return kExitOk;
}

int cmd_reproduce(const Common& c) {
  if (c.variant.empty()) throw lfc::ValidationError("reproduce needs --variant nominal, disturbed or smoothed");
  Common copy = c;
  if (copy.out.empty()) copy.out = "out/" + c.variant;
  const auto ex = lfc::build_experiment(resolve_config(copy));
  const auto r = run_and_write(ex, "reproduce " + c.variant, "");
  print_summary(r.trace);
  const double err = r.trace.max_final_error();
  if (c.variant == "disturbed") {
    std::cout << "expected: no consensus (final error > 0.5): " << (err > 0.5 ? "yes" : "no") << '\n';
  } else {
    const double threshold = c.variant == "nominal" ? 0.05 : 0.1;
    std::cout << "expected: consensus (final error < " << threshold << "): " << (err < threshold ? "yes" : "no") << '\n';
  }
  if (c.variant == "smoothed")
    std::cout << "control total variation on [20, 40] s: " << lfc::format_double(lfc::control_total_variation(r.trace, 20.0, 40.0))
              << '\n';
  return kExitOk;
}

int cmd_certify(const Common& c) {
  const auto cfg = resolve_config(c);
  const auto ex = lfc::build_experiment(cfg);
  const auto mats = lfc::assemble_closed_loop(ex.plant, ex.topology, ex.gains);
  if (!c.certificate.empty()) {
    const auto arc = lfc::load_certificate(c.certificate);
    lfc::DelayBounds b = arc.bounds;
    if (c.tau) b.tau = *c.tau;
    const auto report = lfc::check_feasibility(mats, arc.certificate, b, arc.lmi);
    print_report(report);
    return report.feasible ? kExitOk : kExitNotCertified;
  }
  const auto bounds = lfc::certificate_bounds(cfg, cfg.certificate.tau);
  const auto found = lfc::search_certificate(mats, bounds, lfc::search_options(cfg));
  std::cout << "search: " << found.reason << " after " << found.iterations << " iterations, "
            << lfc::format_double(found.seconds) << " s\n";
  if (!found.certificate) {
    std::cout << "best scaled margin: " << lfc::format_double(found.best_margin) << "\nverdict: not certified\n";
    return kExitNotCertified;
  }
  // the verifier, not the search, decides
  const auto report = lfc::check_feasibility(mats, *found.certificate, bounds, search_options(cfg).lmi);
  print_report(report);
  const fs::path dir = prepare_out(cfg);
  lfc::save_certificate((dir / "certificate.arc").string(), *found.certificate, bounds, search_options(cfg).lmi);
  std::cout << "certificate: " << (dir / "certificate.arc").string() << '\n';
  return report.feasible ? kExitOk : kExitNotCertified;
}

int cmd_max_delay(const Common& c) {
  const auto cfg = resolve_config(c);
  const auto ex = lfc::build_experiment(cfg);
  const auto mats = lfc::assemble_closed_loop(ex.plant, ex.topology, ex.gains);
  lfc::Certificate cert;
  lfc::DelayBounds bounds = lfc::certificate_bounds(cfg, cfg.certificate.tau);
  lfc::LmiOptions lmi = lfc::search_options(cfg).lmi;
  if (!c.certificate.empty()) {
    auto arc = lfc::load_certificate(c.certificate);
    cert = std::move(arc.certificate);
    bounds = arc.bounds;
    lmi = arc.lmi;
  } else {
    auto found = lfc::search_certificate(mats, bounds, lfc::search_options(cfg));
    if (!found.certificate) {
      std::cout << "no certificate at tau = " << lfc::format_double(bounds.tau) << ": " << found.reason << '\n';
      return kExitNotCertified;
    }
    cert = std::move(*found.certificate);
  }
  if (bounds.d_pin >= 1.0 || bounds.d_follower >= 1.0)
    std::cerr << "warning: slope bound d = 1 leaves the admissible delay class (requires d < 1)\n";
  print_estimate(lfc::estimate_max_delay(mats, cert, bounds, lmi));
  return kExitOk;
}

json gains_json(const lfc::GainSet& g) {
  json pin = json::object(), fol = json::object();
  for (const auto& [agent, k] : g.pin) pin[std::to_string(agent + 1)] = std::vector<double>(k.data(), k.data() + k.size());
  for (const auto& [e, k] : g.follower)
    fol[std::to_string(e.agent + 1) + "," + std::to_string(e.neighbor + 1)] = std::vector<double>(k.data(), k.data() + k.size());
  return {{"pin", pin}, {"follower", fol}};
}

int cmd_tune(const Common& c) {
  const auto cfg = resolve_config(c);
  const auto ex = lfc::build_experiment(cfg);
  const auto result = lfc::run_tuner(lfc::tune_config(ex), ex.plant, ex.topology);
  const fs::path dir = prepare_out(cfg);
  lfc::write_tune_log((dir / "tune_log.csv").string(), result);
  std::cout << "evaluations: " << result.evaluations << "\nstop: " << result.stop_reason << '\n';
  if (!result.success || !result.certificate) {
    std::cout << "verdict: not certified\n";
    return kExitNotCertified;
  }
  const auto bounds = lfc::certificate_bounds(cfg, result.tau);
  lfc::save_certificate((dir / "certificate.arc").string(), *result.certificate, bounds, search_options(cfg).lmi);
  write_text(dir / "gains.json", gains_json(result.gains).dump(2) + "\n");
  std::cout << "certified tau: " << lfc::format_double(result.tau) << '\n';
  print_report(result.report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"leader-following consensus toolkit: simulation, LMI certificates, gain tuning"};
  app.set_version_flag("--version", LFC_VERSION);
  app.require_subcommand(1);
  Common common;

  auto* sim = app.add_subcommand("simulate", "integrate the closed loop and write the CSV trace");
  add_common(sim, common);
  sim->add_option("--manifest", common.manifest_path, "replay the configuration stored in a run manifest");
  sim->add_option("--certificate", common.certificate, "certificate archive; adds the V column to the trace");
  sim->add_flag("--plot", common.plot, "render PNG plots from the trace (best effort)");

  auto* cert = app.add_subcommand("certify", "search for an LMI certificate, or verify an archived one");
  add_common(cert, common);
  cert->add_option("--tau", common.tau, "delay bound tau*");
  cert->add_option("--certificate", common.certificate, "verify this archive instead of searching");

  auto* tune = app.add_subcommand("tune", "run the gain-tuning loop");
  add_common(tune, common);

  auto* rep = app.add_subcommand("reproduce", "run a built-in benchmark scenario");
  rep->add_option("--variant", common.variant, "nominal, disturbed or smoothed")->required();
  rep->add_option("--seed", common.seed, "seed for delay profiles and disturbances");
  rep->add_option("--out", common.out, "output directory (default out/<variant>)");
  rep->add_flag("--plot", common.plot, "render PNG plots from the trace (best effort)");

  auto* md = app.add_subcommand("max-delay", "print the admissible-delay ratios for a certificate");
  add_common(md, common);
  md->add_option("--tau", common.tau, "delay bound used when searching a certificate");
  md->add_option("--certificate", common.certificate, "certificate archive");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (sim->parsed()) return cmd_simulate(common);
    if (cert->parsed()) return cmd_certify(common);
    if (tune->parsed()) return cmd_tune(common);
    if (rep->parsed()) return cmd_reproduce(common);
    if (md->parsed()) return cmd_max_delay(common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
