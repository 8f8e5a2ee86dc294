// Copyright 2026-present the dwell project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dwell/analysis.hpp"
#include "dwell/bath.hpp"
#include "dwell/config.hpp"
#include "dwell/csv.hpp"
#include "dwell/dynamics.hpp"
#include "dwell/kernels.hpp"
#include "dwell/parallel.hpp"
#include "dwell/potential.hpp"
#include "dwell/simulation.hpp"
#include "dwell/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned workers = dwell::default_workers();

  void attach(CLI::App* cmd, bool with_workers) {
    cmd->add_option("-c,--config", config_path, "configuration file")
        ->required();
    cmd->add_option("-o,--out", out_dir, "output directory");
    cmd->add_option("--set", overrides,
                    "override a config key (key=value, repeatable)");
    cmd->add_option("--seed", seed, "override the config seed")
        ->each([this](const std::string&) { seed_set = true; });
    if (with_workers) {
      cmd->add_option("--workers", workers,
                      "worker threads for scans (output-invariant)");
    }
  }

  dwell::ConfigBundle load() const {
    std::vector<std::string> all = overrides;
    if (seed_set) all.push_back("seed=" + std::to_string(seed));
    return dwell::parse_config(config_path, all);
  }
};

fs::path ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw dwell::ConfigError("cannot create output directory '" + dir +
                             "': " + ec.message());
  }
  return fs::path(dir);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) {
    throw dwell::ConfigError("cannot write '" + p.string() + "'");
  }
  return out;
}

json config_json(const dwell::ConfigBundle& b) {
  return json{{"mu", b.params.mu},
              {"lambda", b.params.lambda},
              {"mass", b.params.mass},
              {"hbar", b.params.hbar},
              {"n_osc", b.bath.n_osc},
              {"bath_mass", b.bath.mass},
              {"omega_min", b.bath.omega_min},
              {"omega_max", b.bath.omega_max},
              {"temperature", b.bath.temperature},
              {"seed", b.bath.seed},
              {"abs_tol", b.integrator.abs_tol},
              {"rel_tol", b.integrator.rel_tol},
              {"t_end", b.integrator.t_end},
              {"sample_dt", b.integrator.sample_dt},
              {"q0", b.initial.q0},
              {"p0", b.initial.p0},
              {"rho0", b.initial.rho0},
              {"pi0", b.initial.pi0}};
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const dwell::ConfigBundle& bundle, const json& options,
                    const std::vector<std::string>& outputs) {
  json m{{"tool", "dwell"},
         {"version", dwell::kVersion},
         {"command", command},
         {"config", config_json(bundle)},
         {"options", options},
         {"outputs", outputs}};
  auto out = open_out(dir / "manifest.json");
  out << m.dump(2) << '\n';
}

int cmd_simulate(const CommonOpts& opts, bool dump_bath) {
  const dwell::ConfigBundle bundle = opts.load();
  const fs::path dir = ensure_out_dir(opts.out_dir);

  const dwell::ExtendedState s0 = dwell::prepare_initial_state(bundle);
  const dwell::IntegrationReport rep =
      dwell::integrate(s0, bundle.params, bundle.bath, bundle.integrator);

  {
    auto out = open_out(dir / "trajectory.csv");
    dwell::write_trajectory_csv(out, rep.trajectory);
  }
  std::vector<std::string> outputs{"trajectory.csv"};
  if (dump_bath) {
    auto out = open_out(dir / "bath.csv");
    dwell::write_bath_csv(out, s0.bath);
    outputs.push_back("bath.csv");
  }
  write_manifest(dir, "simulate", bundle, json{{"dump_bath", dump_bath}},
                 outputs);
  std::cout << "simulate: " << rep.trajectory.samples.size() << " samples, "
            << rep.n_steps_accepted << " steps ("
            << dwell::kernels::active_impl() << " kernels) -> "
            << (dir / "trajectory.csv").string() << '\n';
  return 0;
}

int cmd_scan_ncrit(const CommonOpts& opts, std::size_t n_max,
                   std::size_t n_step, std::size_t trials) {
  const dwell::ConfigBundle bundle = opts.load();
  const fs::path dir = ensure_out_dir(opts.out_dir);
  if (n_step == 0) throw dwell::ConfigError("--n-step must be >= 1");

  const double omega0 = 0.5 * (bundle.bath.omega_min + bundle.bath.omega_max);
  const double delta_omega = bundle.bath.omega_max - bundle.bath.omega_min;
  std::vector<std::size_t> grid;
  for (std::size_t n = 0; n <= n_max; n += n_step) grid.push_back(n);

  const dwell::BistabilityScan scan = dwell::scan_bistability(
      bundle.params, bundle.bath.mass, omega0, delta_omega, grid, trials,
      bundle.bath.seed, opts.workers);

  {
    auto out = open_out(dir / "ncrit_scan.csv");
    out << "N,mean_qmin,mean_vmin,std_vmin\n";
    for (const auto& row : scan.rows) {
      out << row.n_osc << ',' << dwell::csv::field(row.mean_qmin) << ','
          << dwell::csv::field(row.mean_vmin) << ','
          << dwell::csv::field(row.std_vmin) << '\n';
    }
  }

  dwell::kernels::NeumaierSum crossing_sum;
  for (const auto n : scan.first_monostable_n) {
    crossing_sum.add(static_cast<double>(n));
  }
  const double mean_crossing =
      crossing_sum.value() / static_cast<double>(scan.first_monostable_n.size());

  json options{{"n_max", n_max},
               {"n_step", n_step},
               {"trials", trials},
               {"mean_first_monostable_n", mean_crossing}};
  if (bundle.params.mu > 0.0) {
    options["predicted_n_crit"] = dwell::critical_oscillator_number(
        bundle.params.mu, bundle.bath.mass, omega0, delta_omega);
  }
  write_manifest(dir, "scan-ncrit", bundle, options, {"ncrit_scan.csv"});
  std::cout << "scan-ncrit: " << scan.rows.size()
            << " grid points, mean first monostable N = " << mean_crossing
            << " -> " << (dir / "ncrit_scan.csv").string() << '\n';
  return 0;
}

int cmd_scan_period(const CommonOpts& opts, double q0_min_ratio,
                    double q0_max_ratio, std::size_t points,
                    double band_fraction) {
  const dwell::ConfigBundle bundle = opts.load();
  const fs::path dir = ensure_out_dir(opts.out_dir);
  if (points < 2) throw dwell::ConfigError("--points must be >= 2");
  if (!(bundle.params.mu > 0.0)) {
    throw dwell::ConfigError("period scan requires mu > 0");
  }

  const double qmin_bare =
      std::sqrt(bundle.params.mu / (2.0 * bundle.params.lambda));
  dwell::PeriodScanConfig scan_cfg;
  scan_cfg.base = bundle.initial;
  scan_cfg.band_fraction = band_fraction;
  scan_cfg.workers = opts.workers;
  for (std::size_t i = 0; i < points; ++i) {
    const double ratio =
        q0_min_ratio + (q0_max_ratio - q0_min_ratio) *
                           static_cast<double>(i) /
                           static_cast<double>(points - 1);
    scan_cfg.q0_values.push_back(ratio * qmin_bare);
  }

  const auto rows = dwell::scan_period_vs_initial_position(
      bundle.params, bundle.bath, bundle.integrator, scan_cfg);

  std::size_t failed = 0;
  {
    auto out = open_out(dir / "period_scan.csv");
    out << "q0_over_qmin,period,censored\n";
    for (const auto& row : rows) {
      if (row.failed) ++failed;
      out << dwell::csv::field(row.q0_over_qmin) << ','
          << dwell::csv::field(row.period) << ','
          << ((row.censored || row.failed) ? 1 : 0) << '\n';
    }
  }
  if (failed > 0) {
    std::cerr << "scan-period: " << failed
              << " grid point(s) failed numerically and were censored\n";
  }
  write_manifest(dir, "scan-period", bundle,
                 json{{"q0_min_ratio", q0_min_ratio},
                      {"q0_max_ratio", q0_max_ratio},
                      {"points", points},
                      {"band_fraction", band_fraction}},
                 {"period_scan.csv"});
  std::cout << "scan-period: " << rows.size() << " grid points -> "
            << (dir / "period_scan.csv").string() << '\n';
  return 0;
}

int cmd_spectrum(const CommonOpts& opts, std::size_t nfft,
                 const std::string& window) {
  const dwell::ConfigBundle bundle = opts.load();
  const fs::path dir = ensure_out_dir(opts.out_dir);
  dwell::SpectrumWindow win;
  if (window == "none") {
    win = dwell::SpectrumWindow::kNone;
  } else if (window == "hann") {
    win = dwell::SpectrumWindow::kHann;
  } else {
    throw dwell::ConfigError("--window must be 'none' or 'hann'");
  }

  const dwell::IntegrationReport rep = dwell::run_simulation(bundle);
  const dwell::SpectrumResult spec =
      dwell::power_spectrum(rep.trajectory, nfft, win);

  {
    auto out = open_out(dir / "trajectory.csv");
    dwell::write_trajectory_csv(out, rep.trajectory);
  }
  {
    auto out = open_out(dir / "spectrum.csv");
    out << "freq,power\n";
    for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
      out << dwell::csv::field(spec.freqs[k]) << ','
          << dwell::csv::field(spec.power[k]) << '\n';
    }
  }
  {
    auto out = open_out(dir / "summaries.csv");
    out << "peak_freq,integral,flatness\n";
    out << dwell::csv::field(spec.peak_freq) << ','
        << dwell::csv::field(spec.integral) << ','
        << dwell::csv::field(spec.flatness) << '\n';
  }
  write_manifest(dir, "spectrum", bundle,
                 json{{"nfft", nfft}, {"window", window}},
                 {"trajectory.csv", "spectrum.csv", "summaries.csv"});
  std::cout << "spectrum: peak_freq=" << spec.peak_freq
            << " integral=" << spec.integral << " flatness=" << spec.flatness
            << " -> " << (dir / "spectrum.csv").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dwell: semiclassical dynamics of a particle in a double well "
               "coupled to a finite heat bath"};
  app.set_version_flag("--version", dwell::kVersion);
  app.require_subcommand(1);

  CommonOpts sim_opts, ncrit_opts, period_opts, spec_opts;
  bool dump_bath = false;
  std::size_t n_max = 1000, n_step = 1, trials = 200;
  double q0_min_ratio = 1.0, q0_max_ratio = 1.475, band_fraction = 0.1;
  std::size_t points = 20;
  std::size_t nfft = 8192;
  std::string window = "none";

  CLI::App* sim = app.add_subcommand("simulate", "integrate one trajectory");
  sim_opts.attach(sim, false);
  sim->add_flag("--dump-bath", dump_bath,
                "also export the realized bath (bath.csv)");

  CLI::App* ncrit = app.add_subcommand(
      "scan-ncrit", "bistable-to-monostable transition vs oscillator number");
  ncrit_opts.attach(ncrit, true);
  ncrit->add_option("--n-max", n_max, "largest oscillator number");
  ncrit->add_option("--n-step", n_step, "grid stride");
  ncrit->add_option("--trials", trials, "bath realizations per grid point");

  CLI::App* period = app.add_subcommand(
      "scan-period", "interwell period vs initial position (T = 0 bath)");
  period_opts.attach(period, true);
  period->add_option("--q0-min", q0_min_ratio, "lowest Q0/Q_min");
  period->add_option("--q0-max", q0_max_ratio, "highest Q0/Q_min");
  period->add_option("--points", points, "grid size");
  period->add_option("--band-fraction", band_fraction,
                     "hysteresis band as a fraction of |Q_min,eff|");

  CLI::App* spect = app.add_subcommand(
      "spectrum", "simulate, then FFT of Q(t) with summaries");
  spec_opts.attach(spect, false);
  spect->add_option("--nfft", nfft, "FFT length (power of two)");
  spect->add_option("--window", window, "window function: none|hann");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_opts, dump_bath);
    if (ncrit->parsed()) return cmd_scan_ncrit(ncrit_opts, n_max, n_step, trials);
    if (period->parsed()) {
      return cmd_scan_period(period_opts, q0_min_ratio, q0_max_ratio, points,
                             band_fraction);
    }
    if (spect->parsed()) return cmd_spectrum(spec_opts, nfft, window);
  } catch (const dwell::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const dwell::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
