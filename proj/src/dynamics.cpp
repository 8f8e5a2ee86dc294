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

#include "dwell/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "dop853_tableau.hpp"
#include "dwell/kernels.hpp"
#include "dwell/potential.hpp"

namespace dwell {
namespace {

// Flat state layout: [Q, P, (rho, Pi), q_0..q_{n-1}, p_0..p_{n-1}].
// Classical mode drops the (rho, Pi) slots.
struct Layout {
  bool quantum;
  std::size_t n;
  std::size_t q_off;
  std::size_t p_off;
  std::size_t dim;

  Layout(bool quantum_mode, std::size_t n_osc)
      : quantum(quantum_mode),
        n(n_osc),
        q_off(quantum_mode ? 4 : 2),
        p_off(q_off + n_osc),
        dim(p_off + n_osc) {}
};

// Equations of motion plus energy on the flat layout, with the bath
// frequency squares and their sum cached once per run. The renormalization
// (m/2) sum w^2 nearly cancels mu close to threshold, so both cached sums
// are accumulated with compensation.
class FlatSystem {
 public:
  FlatSystem(const WellParams& params, double bath_mass,
             const std::vector<double>& omegas, double rho_floor)
      : layout_(!params.classical(), omegas.size()),
        mu_(params.mu),
        lambda_(params.lambda),
        inv_mass_(1.0 / params.mass),
        hbar_(params.hbar),
        bath_mass_(bath_mass),
        rho_floor_(rho_floor),
        w2_(omegas.size()) {
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      w2_[i] = omegas[i] * omegas[i];
    }
    sum_w2_ = kernels::sum_squares(omegas.data(), omegas.size());
    half_m_sum_w2_ = 0.5 * bath_mass_ * sum_w2_;
    quarter_h2_over_m_ = 0.25 * hbar_ * hbar_ * inv_mass_;
  }

  const Layout& layout() const { return layout_; }
  double rho_floor() const { return rho_floor_; }

  /// False when the fluctuation width is at or below the floor (including
  /// NaN); the integrator treats that as a vetoed step.
  bool rhs(const double* y, double* dydt) const {
    const Layout& L = layout_;
    const double Q = y[0];
    const double P = y[1];
    const double bath_sum =
        L.n == 0 ? 0.0
                 : kernels::weighted_displacement_sum(w2_.data(), y + L.q_off,
                                                      Q, L.n);
    const double q3 = (Q * Q) * Q;
    dydt[0] = P * inv_mass_;
    if (L.quantum) {
      const double rho = y[2];
      if (!(rho > rho_floor_)) return false;
      const double Pi = y[3];
      const double rho2 = rho * rho;
      const double rho3 = rho2 * rho;
      dydt[1] = 2.0 * (mu_ - 6.0 * lambda_ * rho2) * Q - 4.0 * lambda_ * q3 +
                bath_mass_ * bath_sum;
      dydt[2] = Pi * inv_mass_;
      dydt[3] = quarter_h2_over_m_ / rho3 +
                2.0 * (mu_ - 6.0 * lambda_ * (Q * Q) - half_m_sum_w2_) * rho -
                12.0 * lambda_ * rho3;
    } else {
      dydt[1] = 2.0 * mu_ * Q - 4.0 * lambda_ * q3 + bath_mass_ * bath_sum;
    }
    if (L.n > 0) {
      kernels::bath_rates(w2_.data(), y + L.q_off, y + L.p_off, Q, bath_mass_,
                          dydt + L.q_off, dydt + L.p_off, L.n);
    }
    return true;
  }

  double hamiltonian(const double* y) const {
    const Layout& L = layout_;
    const double Q = y[0];
    const double P = y[1];
    const double q2 = Q * Q;
    double h = 0.5 * P * P * inv_mass_ + (-mu_ + lambda_ * q2) * q2;
    if (L.n > 0) {
      h += kernels::bath_energy_sum(w2_.data(), y + L.q_off, y + L.p_off, Q,
                                    bath_mass_, L.n);
    }
    if (L.quantum) {
      const double rho = y[2];
      const double Pi = y[3];
      const double rho2 = rho * rho;
      h += 6.0 * lambda_ * q2 * rho2 + 0.5 * Pi * Pi * inv_mass_ +
           0.5 * quarter_h2_over_m_ / rho2 +
           (-mu_ + 3.0 * lambda_ * rho2) * rho2 + half_m_sum_w2_ * rho2;
    }
    return h;
  }

 private:
  Layout layout_;
  double mu_;
  double lambda_;
  double inv_mass_;
  double hbar_;
  double bath_mass_;
  double rho_floor_;
  std::vector<double> w2_;
  double sum_w2_ = 0.0;
  double half_m_sum_w2_ = 0.0;
  double quarter_h2_over_m_ = 0.0;
};

void pack(const ExtendedState& s, const Layout& L, double* y) {
  y[0] = s.Q;
  y[1] = s.P;
  if (L.quantum) {
    y[2] = s.rho;
    y[3] = s.Pi;
  }
  std::copy(s.bath.q.begin(), s.bath.q.end(), y + L.q_off);
  std::copy(s.bath.p.begin(), s.bath.p.end(), y + L.p_off);
}

ExtendedState unpack(const double* y, double t, const Layout& L,
                     const std::vector<double>& omegas) {
  ExtendedState s;
  s.t = t;
  s.Q = y[0];
  s.P = y[1];
  if (L.quantum) {
    s.rho = y[2];
    s.Pi = y[3];
  }
  s.bath.omegas = omegas;
  s.bath.q.assign(y + L.q_off, y + L.q_off + L.n);
  s.bath.p.assign(y + L.p_off, y + L.p_off + L.n);
  return s;
}

double rms_scaled(const std::vector<double>& v, const std::vector<double>& sc) {
  if (v.empty()) return 0.0;
  kernels::NeumaierSum acc;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = v[i] / sc[i];
    acc.add(r * r);
  }
  return std::sqrt(acc.value() / static_cast<double>(v.size()));
}

// Nonzero-filtered linear-combination operands for one tableau row.
struct ComboRow {
  std::vector<const double*> ptrs;
  std::vector<double> coefs;

  void build(const double* row, int len, const std::vector<std::vector<double>>& k) {
    ptrs.clear();
    coefs.clear();
    for (int j = 0; j < len; ++j) {
      if (row[j] != 0.0) {
        ptrs.push_back(k[static_cast<std::size_t>(j)].data());
        coefs.push_back(row[j]);
      }
    }
  }
};

}  // namespace

DerivativeVector rhs_extended(const ExtendedState& state,
                              const WellParams& params, double bath_mass,
                              double rho_floor) {
  params.check();
  state.bath.check();
  FlatSystem sys(params, bath_mass, state.bath.omegas, rho_floor);
  const Layout& L = sys.layout();
  std::vector<double> y(L.dim);
  std::vector<double> dydt(L.dim);
  pack(state, L, y.data());
  if (!sys.rhs(y.data(), dydt.data())) {
    throw NumericalError("fluctuation width rho at or below rho_floor",
                         state.t);
  }
  DerivativeVector d;
  d.dQ = dydt[0];
  d.dP = dydt[1];
  if (L.quantum) {
    d.dRho = dydt[2];
    d.dPi = dydt[3];
  }
  d.dq.assign(dydt.begin() + static_cast<std::ptrdiff_t>(L.q_off),
              dydt.begin() + static_cast<std::ptrdiff_t>(L.p_off));
  d.dp.assign(dydt.begin() + static_cast<std::ptrdiff_t>(L.p_off), dydt.end());
  return d;
}

DerivativeVector rhs_general_sum(const ExtendedState& state,
                                 const WellParams& params, int n_max,
                                 double rho_floor) {
  params.check();
  if (params.classical()) {
    throw ConfigError("general-sum hierarchy requires quantum mode (hbar > 0)");
  }
  if (n_max < 0) throw ConfigError("n_max must be >= 0");
  const double rho = state.rho;
  if (!(rho > rho_floor)) {
    throw NumericalError("fluctuation width rho at or below rho_floor",
                         state.t);
  }

  const double inv_mass = 1.0 / params.mass;
  DerivativeVector d;
  d.dQ = state.P * inv_mass;
  d.dRho = state.Pi * inv_mass;

  // dP  = -sum_n V^(2n+1) rho^(2n)   / (n! 2^n)
  // dPi = -sum_n V^(2n+2) rho^(2n+1) / (n! 2^n)  + hbar^2/(4 M rho^3)
  double sum_p = 0.0;
  double sum_pi = 0.0;
  double weight = 1.0;  // rho^(2n) / (n! 2^n)
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) weight *= rho * rho / (2.0 * n);
    sum_p += potential_derivative(2 * n + 1, state.Q, params) * weight;
    sum_pi += potential_derivative(2 * n + 2, state.Q, params) * weight * rho;
  }
  d.dP = -sum_p;
  d.dPi = 0.25 * params.hbar * params.hbar * inv_mass / (rho * rho * rho) -
          sum_pi;
  return d;
}

double extended_hamiltonian(const ExtendedState& state,
                            const WellParams& params, double bath_mass,
                            double rho_floor) {
  params.check();
  state.bath.check();
  if (!params.classical() && !(state.rho > rho_floor)) {
    throw NumericalError("fluctuation width rho at or below rho_floor",
                         state.t);
  }
  FlatSystem sys(params, bath_mass, state.bath.omegas, rho_floor);
  std::vector<double> y(sys.layout().dim);
  pack(state, sys.layout(), y.data());
  return sys.hamiltonian(y.data());
}

ExtendedState make_initial_state(const WellParams& params,
                                 const InitialState& init, BathState bath) {
  validate_initial_state(params, init);
  bath.check();
  ExtendedState s;
  s.t = 0.0;
  s.Q = init.q0;
  s.P = init.p0;
  s.rho = init.rho0;
  s.Pi = init.pi0;
  s.bath = std::move(bath);
  return s;
}

IntegrationReport integrate(const ExtendedState& state0,
                            const WellParams& params, const BathSpec& spec,
                            const IntegratorConfig& cfg) {
  validate(params, spec, cfg);
  state0.bath.check();
  if (state0.bath.size() != spec.n_osc) {
    throw ConfigError("bath state size does not match spec n_osc");
  }
  const bool quantum = !params.classical();
  if (quantum && !(state0.rho > cfg.rho_floor)) {
    throw ConfigError("quantum mode requires rho0 > rho_floor");
  }
  if (!quantum && (state0.rho != 0.0 || state0.Pi != 0.0)) {
    throw ConfigError("classical mode (hbar=0) requires rho0=0 and pi0=0");
  }

  FlatSystem sys(params, spec.mass, state0.bath.omegas, cfg.rho_floor);
  const Layout& L = sys.layout();
  const std::size_t dim = L.dim;
  const double atol = cfg.abs_tol;
  const double rtol = cfg.rel_tol;

  using dop853::kA;
  using dop853::kB;
  using dop853::kC;
  using dop853::kE3;
  using dop853::kE5;
  using dop853::kStages;

  std::vector<std::vector<double>> K(kStages + 1, std::vector<double>(dim));
  std::vector<double> y(dim);
  std::vector<double> y_new(dim);
  std::vector<double> ys(dim);
  std::vector<double> err5(dim);
  std::vector<double> err3(dim);

  std::vector<ComboRow> stage_rows(kStages);
  for (int s = 1; s < kStages; ++s) stage_rows[static_cast<std::size_t>(s)].build(kA[s], s, K);
  ComboRow b_row;
  b_row.build(kB, kStages, K);
  ComboRow e5_row;
  e5_row.build(kE5, kStages + 1, K);
  ComboRow e3_row;
  e3_row.build(kE3, kStages + 1, K);

  pack(state0, L, y.data());
  const double t0 = state0.t;
  const double t_final = t0 + cfg.t_end;

  IntegrationReport report;
  report.trajectory.params = params;
  report.trajectory.bath_spec = spec;
  report.trajectory.config = cfg;

  if (!sys.rhs(y.data(), K[0].data())) {
    throw NumericalError("fluctuation width rho at or below rho_floor", t0);
  }
  report.n_rhs_evals++;

  auto emit_sample = [&](double t_sample, const double* yv) {
    const double H = sys.hamiltonian(yv);
    TrajectorySample smp{t_sample, yv[0], yv[1], L.quantum ? yv[2] : 0.0,
                         L.quantum ? yv[3] : 0.0, H};
    if (!std::isfinite(smp.Q) || !std::isfinite(smp.P) ||
        !std::isfinite(smp.rho) || !std::isfinite(smp.Pi) ||
        !std::isfinite(smp.H)) {
      throw NumericalError("non-finite state component", t_sample);
    }
    if (L.quantum) {
      const double u = std::sqrt(smp.rho * smp.rho * smp.Pi * smp.Pi +
                                 0.25 * params.hbar * params.hbar);
      if (!(u >= 0.5 * params.hbar * (1.0 - 1e-12))) {
        throw NumericalError("uncertainty product below hbar/2", t_sample);
      }
    }
    report.trajectory.samples.push_back(smp);
  };
  emit_sample(t0, y.data());

  // Targets: every sample time, plus the final time when it is not a
  // sample time; steps land on targets exactly.
  const std::size_t n_samples =
      static_cast<std::size_t>(std::floor(cfg.t_end / cfg.sample_dt + 1e-9));
  std::vector<std::pair<double, bool>> targets;  // (absolute time, is_sample)
  targets.reserve(n_samples + 1);
  for (std::size_t k = 1; k <= n_samples; ++k) {
    targets.emplace_back(t0 + static_cast<double>(k) * cfg.sample_dt, true);
  }
  if (targets.empty() || targets.back().first < t_final) {
    targets.emplace_back(t_final, false);
  }

  // Initial step (Hairer's hinit with the order-8 pair's exponent 1/8).
  double h_abs;
  {
    std::vector<double> scale(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      scale[i] = atol + std::abs(y[i]) * rtol;
    }
    std::vector<double> tmp(dim);
    const double interval = cfg.t_end;
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i];
    const double d0 = rms_scaled(tmp, scale);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = K[0][i];
    const double d1 = rms_scaled(tmp, scale);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, interval);
    const double one = 1.0;
    const double* f0p = K[0].data();
    kernels::stage_state(y.data(), &f0p, &one, 1, h0, ys.data(), dim);
    double d2;
    if (sys.rhs(ys.data(), err5.data())) {
      report.n_rhs_evals++;
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = err5[i] - K[0][i];
      d2 = rms_scaled(tmp, scale) / h0;
    } else {
      d2 = 1.0 / h0;
    }
    double h1;
    if (d1 <= 1e-15 && d2 <= 1e-15) {
      h1 = std::max(1e-6, h0 * 1e-3);
    } else {
      h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / 8.0);
    }
    h_abs = std::min({100.0 * h0, h1, interval});
  }

  constexpr double kSafety = 0.9;
  constexpr double kMinFactor = 0.2;
  constexpr double kMaxFactor = 10.0;

  double t = t0;
  for (const auto& [t_target, is_sample] : targets) {
    while (t < t_target) {
      const double min_step =
          10.0 * (std::nextafter(t, std::numeric_limits<double>::infinity()) - t);
      if (h_abs < min_step) h_abs = min_step;

      bool step_accepted = false;
      bool step_rejected = false;
      bool rho_vetoed = false;
      double t_new = t;
      while (!step_accepted) {
        if (h_abs < min_step || !std::isfinite(h_abs)) {
          throw NumericalError(
              rho_vetoed ? "step size underflow while avoiding the rho floor"
                         : "step size underflow",
              t);
        }
        double h = h_abs;
        t_new = t + h;
        if (t_new > t_target) t_new = t_target;
        h = t_new - t;
        h_abs = h;

        // Stages 1..11 (stage 0 is the stored derivative at t).
        bool stage_failed = false;
        for (int s = 1; s < kStages; ++s) {
          const auto& row = stage_rows[static_cast<std::size_t>(s)];
          kernels::stage_state(y.data(), row.ptrs.data(), row.coefs.data(),
                               static_cast<int>(row.coefs.size()), h,
                               ys.data(), dim);
          if (!sys.rhs(ys.data(), K[static_cast<std::size_t>(s)].data())) {
            stage_failed = true;
            break;
          }
          report.n_rhs_evals++;
        }
        if (!stage_failed) {
          kernels::stage_state(y.data(), b_row.ptrs.data(), b_row.coefs.data(),
                               static_cast<int>(b_row.coefs.size()), h,
                               y_new.data(), dim);
          if (L.quantum && !(y_new[2] > cfg.rho_floor)) stage_failed = true;
        }
        if (stage_failed) {
          rho_vetoed = true;
          step_rejected = true;
          report.n_steps_rejected++;
          h_abs *= 0.5;
          continue;
        }

        kernels::linear_combination(e5_row.ptrs.data(), e5_row.coefs.data(),
                                    static_cast<int>(e5_row.coefs.size()),
                                    err5.data(), dim);
        kernels::linear_combination(e3_row.ptrs.data(), e3_row.coefs.data(),
                                    static_cast<int>(e3_row.coefs.size()),
                                    err3.data(), dim);
        const auto sums = kernels::error_sums(err5.data(), err3.data(),
                                              y.data(), y_new.data(), atol,
                                              rtol, dim);
        double err_norm;
        if (sums.s5 == 0.0 && sums.s3 == 0.0) {
          err_norm = 0.0;
        } else {
          err_norm = h_abs * sums.s5 /
                     std::sqrt((sums.s5 + 0.01 * sums.s3) * static_cast<double>(dim));
        }

        if (!std::isfinite(err_norm)) {
          step_rejected = true;
          report.n_steps_rejected++;
          h_abs *= kMinFactor;
          continue;
        }
        if (err_norm < 1.0) {
          double factor;
          if (err_norm == 0.0) {
            factor = kMaxFactor;
          } else {
            factor = std::min(kMaxFactor,
                              kSafety * std::pow(err_norm, -1.0 / 8.0));
          }
          if (step_rejected) factor = std::min(1.0, factor);

          // Local Q-error bookkeeping for convergence diagnostics.
          {
            const double a2 = err5[0] * err5[0];
            const double den = std::sqrt(a2 + 0.01 * err3[0] * err3[0]);
            if (den > 0.0) report.accumulated_q_error += h_abs * a2 / den;
          }

          if (!sys.rhs(y_new.data(), K[kStages].data())) {
            throw NumericalError("fluctuation width rho at or below rho_floor",
                                 t_new);
          }
          report.n_rhs_evals++;

          h_abs *= factor;
          step_accepted = true;
          report.n_steps_accepted++;
          std::copy(y_new.begin(), y_new.end(), y.begin());
          std::copy(K[kStages].begin(), K[kStages].end(), K[0].begin());
          t = t_new;
        } else {
          step_rejected = true;
          report.n_steps_rejected++;
          h_abs *= std::max(kMinFactor,
                            kSafety * std::pow(err_norm, -1.0 / 8.0));
        }
      }
    }
    if (is_sample) emit_sample(t_target, y.data());
  }

  report.final_state = unpack(y.data(), t, L, state0.bath.omegas);
  return report;
}

}  // namespace dwell
