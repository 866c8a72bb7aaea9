// Batch driver for the Dicke-model quench simulator. Every subcommand reads
// a flat key=value config, runs deterministically, and writes CSV/JSON.
#include <cmath>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dicke/config.hpp"
#include "dicke/disentangle.hpp"
#include "dicke/lindblad.hpp"
#include "dicke/output.hpp"
#include "dicke/propagate.hpp"
#include "dicke/spectrum.hpp"

namespace {

using namespace dicke;

constexpr int kExitConfig = 2;
constexpr int kExitTruncation = 3;
constexpr int kExitConvergence = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_prefix = "run";
  std::vector<std::string> overrides;  // key=value, applied after the file
};

RunConfig load_run(const CommonArgs& args, const std::string& subcommand) {
  std::map<std::string, std::string> merged;
  if (!args.config_path.empty()) {
    const RunConfig base = RunConfig::load(args.config_path, subcommand);
    merged = base.values();
  }
  for (const auto& ov : args.overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects key=value, got: " + ov);
    }
    merged[ov.substr(0, eq)] = ov.substr(eq + 1);
  }
  return RunConfig::from_map(merged, subcommand);
}

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("-c,--config", args.config_path, "configuration file");
  sub->add_option("-o,--out", args.out_prefix, "output path prefix");
  sub->add_option("--set", args.overrides,
                  "override a config key (key=value), repeatable");
}

void cmd_quench(const CommonArgs& args) {
  const RunConfig run = load_run(args, "quench");
  const DickeConfig cfg = run.dicke();
  const TrajectoryRecord rec = run_quench(cfg);
  write_trajectory_csv(args.out_prefix + ".csv", rec,
                       run.num("gamma_el_per_s", 0.0), cfg.g0);
  write_quench_summary(args.out_prefix + ".json", run, rec);
}

void cmd_lipkin(const CommonArgs& args) {
  const RunConfig run = load_run(args, "lipkin");
  const DickeConfig cfg = run.dicke();
  const TrajectoryRecord rec = run_lipkin_quench(cfg);
  write_trajectory_csv(args.out_prefix + ".csv", rec,
                       run.num("gamma_el_per_s", 0.0), cfg.g0);
  write_quench_summary(args.out_prefix + ".json", run, rec);
}

void cmd_spectrum(const CommonArgs& args) {
  const RunConfig run = load_run(args, "spectrum");
  DickeConfig base = run.dicke();
  std::vector<int> n_list =
      run.has("n_list") ? run.int_list("n_list")
                        : std::vector<int>{2, 3, 5, 10, 20, 40};
  const int b_points = run.integer("b_points", 25);
  const double b_max = run.num("b_max_over_bc", 2.0);
  const double bc = critical_field(base);
  std::vector<double> b_grid(b_points);
  for (int i = 0; i < b_points; ++i) {
    b_grid[i] = b_max * bc * double(i + 1) / double(b_points);
  }
  const auto points = scan_gap_vs_n_and_b(base, n_list, b_grid);
  write_gap_scan_csv(args.out_prefix + ".csv", points);
  write_report_json(args.out_prefix + ".json", run,
                    {{"rows", double(points.size())},
                     {"B_c_kHz", angular_to_khz(bc)}});
}

void cmd_scan_detuning(const CommonArgs& args) {
  const RunConfig run = load_run(args, "scan-detuning");
  const DickeConfig base = run.dicke();
  const double bc = critical_field(base);
  std::vector<double> ratios =
      run.has("delta_over_bc_list")
          ? run.num_list("delta_over_bc_list")
          : std::vector<double>{1, 2, 4, 6, 8, 10, 12, 15, 20};
  std::vector<double> deltas;
  for (double r : ratios) deltas.push_back(-r * bc);
  const auto points = scan_gap_vs_detuning(bc, deltas, base.n_spins);
  write_detuning_scan_csv(args.out_prefix + ".csv", points);
  write_report_json(args.out_prefix + ".json", run,
                    {{"rows", double(points.size())},
                     {"B_c_kHz", angular_to_khz(bc)}});
}

void cmd_disentangle(const CommonArgs& args) {
  const RunConfig run = load_run(args, "disentangle");
  DickeConfig cfg = run.dicke();
  const std::string protocol = run.str("protocol", "detuning");
  if (protocol != "detuning" && protocol != "resonant") {
    throw ConfigError("protocol must be detuning or resonant");
  }

  const int n_max = cfg.n_max_override > 0 ? cfg.n_max_override
                                           : default_n_max(cfg);
  ProductSpace space(SpinSector::build(cfg.n_spins), FockSpace::build(n_max));
  const ObservableSet obs(space);

  // Ramp into the superradiant phase first.
  Vec x_down = spin_x_eigenstate(space.spin(), -cfg.n_spins / 2.0);
  Vec fock0 = Vec::Zero(space.fock().dim);
  fock0[0] = 1.0;
  Vec state = tensor_product(space, fock0, x_down);
  const DickePieces pieces = dicke_pieces(space, cfg);
  Vec psi = ramp_final_state(cfg, pieces, std::move(state), 0.0, cfg.t_final);

  const DenseMat rho_s_before = partial_trace_boson(space, psi);
  const double coherence_before = cat_coherence(rho_s_before);
  Vec out = protocol == "detuning"
                ? run_detuning_quench_protocol(space, cfg, psi)
                : run_resonant_protocol(space, cfg, psi);
  const DenseMat rho_s_after = partial_trace_boson(space, out);
  const DenseMat rho_b_after = partial_trace_spin(space, out);
  const Expectations e = obs.evaluate(out);

  const double a0 = alpha0(cfg);
  write_report_json(args.out_prefix + ".json", run,
                    {{"coherence_before", coherence_before},
                     {"coherence_after", cat_coherence(rho_s_after)},
                     {"vacuum_fidelity", vacuum_fidelity(rho_b_after)},
                     {"parity", e.parity},
                     {"abs_alpha0", std::abs(a0)},
                     {"entangled_bound", std::exp(-a0 * a0)}});
}

void cmd_validate(const CommonArgs& args) {
  const RunConfig run = load_run(args, "validate");
  LindbladConfig cfg = run.lindblad_oracle();
  const int samples = run.integer("oracle_samples", 100);
  const double corrupt = run.num("corrupt_gamma_factor", 1.0);
  const InferenceReport rep = validate_inference(cfg, samples, corrupt);
  write_report_json(
      args.out_prefix + ".json", run,
      {{"identity_residual_max", rep.identity_residual_max},
       {"identity_threshold", rep.identity_threshold},
       {"identity_ok", rep.identity_ok ? 1.0 : 0.0},
       {"fd_error_coarse", rep.fd_error_coarse},
       {"fd_ok", rep.fd_ok ? 1.0 : 0.0},
       {"peak_corr", rep.peak_corr},
       {"coarse_samples", double(rep.coarse_samples)}});
  if (!rep.identity_ok || !rep.fd_ok) {
    std::cerr << "validate: inference checks failed (residual "
              << rep.identity_residual_max << ", fd error "
              << rep.fd_error_coarse << ")\n";
  }
}

void cmd_sweep_nbar(const CommonArgs& args) {
  const RunConfig run = load_run(args, "sweep-nbar");
  std::vector<double> nbars = run.has("nbar_list")
                                  ? run.num_list("nbar_list")
                                  : std::vector<double>{0, 3, 6, 9};
  double max_nbar = 0.0;
  for (double nb : nbars) max_nbar = std::max(max_nbar, nb);

  // Share member trajectories across the sweep: propagate once per initial
  // Fock index at the largest cutoff, then reweight per nbar.
  DickeConfig base = run.dicke();
  base.nbar = max_nbar;
  const ThermalEnsemble widest = ThermalEnsemble::build(max_nbar);
  const auto members = run_quench_members(base, widest);

  std::vector<std::pair<std::string, double>> fields;
  for (double nb : nbars) {
    TrajectoryRecord rec;
    if (nb <= 0.0) {
      rec = members[0];
    } else {
      const ThermalEnsemble ens = ThermalEnsemble::build(nb);
      std::vector<TrajectoryRecord> used(members.begin(),
                                         members.begin() + ens.members.size());
      std::vector<double> w;
      for (const auto& m : ens.members) w.push_back(m.second);
      rec = combine_members(used, w);
    }
    const std::string tag = format_number(nb);
    write_trajectory_csv(args.out_prefix + "_nbar" + tag + ".csv", rec,
                         run.num("gamma_el_per_s", 0.0), base.g0);
    fields.emplace_back("final_abs_sz_over_n_nbar" + tag,
                        rec.abs_sz.back() / rec.n_spins);
  }
  write_report_json(args.out_prefix + ".json", run, fields);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dicke-model slow-quench simulator"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    void (*fn)(const CommonArgs&);
  };
  const Sub subs[] = {
      {"quench", "thermal quench of the spin-boson model", cmd_quench},
      {"lipkin", "same quench under the spin-only effective model", cmd_lipkin},
      {"spectrum", "gap and order-parameter scan over N and B", cmd_spectrum},
      {"scan-detuning", "gap at B_c versus detuning at fixed B_c",
       cmd_scan_detuning},
      {"disentangle", "ramp plus spin-phonon disentangling protocol",
       cmd_disentangle},
      {"validate", "master-equation oracle checks of the inference chain",
       cmd_validate},
      {"sweep-nbar", "quench repeated across initial thermal occupations",
       cmd_sweep_nbar},
  };

  std::vector<CommonArgs> args(std::size(subs));
  for (size_t i = 0; i < std::size(subs); ++i) {
    CLI::App* sub = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(sub, args[i]);
    const auto fn = subs[i].fn;
    const CommonArgs* a = &args[i];
    sub->callback([fn, a] { fn(*a); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const dicke::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dicke::TruncationError& e) {
    std::cerr << "truncation error: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const dicke::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
