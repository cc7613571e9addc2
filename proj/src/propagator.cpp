#include "ccsb/propagator.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "ccsb/least_squares.hpp"
#include "ccsb/overlaps.hpp"

namespace ccsb {

const char* to_string(PropagationStatus s) {
  switch (s) {
    case PropagationStatus::ok: return "ok";
    case PropagationStatus::norm_guard_abort: return "norm_guard_abort";
    case PropagationStatus::solver_degenerate: return "solver_degenerate";
    case PropagationStatus::step_underflow: return "step_underflow";
  }
  return "unknown";
}

double state_norm(const WavefunctionState& state) {
  const Eigen::MatrixXcd g = overlap_matrix(state.z);
  const int k_count = state.num_configs();
  Eigen::VectorXcd c(k_count);
  for (int k = 0; k < k_count; ++k)
    c[k] = state.amp[k] * std::exp(cplx(0.0, state.action[k]));
  return (c.adjoint() * g * c)(0, 0).real();
}

namespace {

// Scratch for repeated derivative evaluations of one run.
struct RhsWorkspace {
  Eigen::MatrixXcd zdot, hpair, cross, amat;
  Eigen::VectorXd hdiag;
  Eigen::VectorXcd phase_amp, b;
};

void rhs_into(const Eigen::MatrixXcd& z, const Eigen::VectorXcd& amp,
              const Eigen::VectorXd& action, const NormalOrderedHamiltonian& h,
              double svd_cutoff, RhsWorkspace& w, Eigen::MatrixXcd& zdot_out,
              Eigen::VectorXcd& amp_dot_out, Eigen::VectorXd& action_dot_out, int& rank_out,
              double& cond_out) {
  const Eigen::Index k_count = z.cols();
  const cplx imag_unit(0.0, 1.0);

  h.gradient_batch(z, w.zdot);
  w.zdot *= -imag_unit;  // zdot = -i dHbar/dz*
  h.evaluate_diag_batch(z, w.hdiag);

  action_dot_out.resize(k_count);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const cplx zdotz = z.col(k).dot(w.zdot.col(k));  // sum_m conj(z) zdot
    action_dot_out[k] = -zdotz.imag() - w.hdiag[k];
  }

  if (k_count == 1) {
    // Single configuration: the coupling bracket vanishes identically.
    zdot_out = w.zdot;
    amp_dot_out = Eigen::VectorXcd::Zero(1);
    rank_out = 1;
    cond_out = 1.0;
    return;
  }

  h.evaluate_pairs(z, w.hpair);
  w.cross.noalias() = z.adjoint() * w.zdot;  // cross(k,l) = zdot_l . z_k*
  w.amat = overlap_matrix(z);

  w.phase_amp.resize(k_count);
  for (Eigen::Index l = 0; l < k_count; ++l)
    w.phase_amp[l] = std::exp(cplx(0.0, action[l]));

  // amat(k,l) = <z_k|z_l> e^{iS_l}; hpair is overwritten with the summand
  // amat * D_l * delta2(k,l), so its row sums give b.
#pragma omp parallel for schedule(static)
  for (Eigen::Index l = 0; l < k_count; ++l) {
    const cplx pl = w.phase_amp[l];
    const cplx dl = amp[l];
    const double hd = w.hdiag[l];
    const cplx cll = w.cross(l, l);
    for (Eigen::Index k = 0; k < k_count; ++k) {
      const cplx a = w.amat(k, l) * pl;
      w.amat(k, l) = a;
      if (k == l) {
        w.hpair(k, l) = cplx(0.0, 0.0);  // bracket is exactly zero on the diagonal
      } else {
        const cplx bracket = w.hpair(k, l) - hd - imag_unit * (w.cross(k, l) - cll);
        w.hpair(k, l) = a * dl * bracket;
      }
    }
  }
  w.b = -imag_unit * w.hpair.rowwise().sum();

  auto solved = solve_amplitude_system_destructive(w.amat, w.b, svd_cutoff);
  zdot_out = w.zdot;
  amp_dot_out = std::move(solved.x);
  rank_out = solved.rank;
  cond_out = solved.condition;
}

// Flat real layout for the integrators: [z | D | S] with complex numbers
// stored as (re, im).
struct Packer {
  int modes, k_count;
  int dim() const { return 2 * modes * k_count + 2 * k_count + k_count; }
  void pack(const Eigen::MatrixXcd& z, const Eigen::VectorXcd& amp, const Eigen::VectorXd& s,
            double* y) const {
    std::memcpy(y, reinterpret_cast<const double*>(z.data()), sizeof(cplx) * modes * k_count);
    std::memcpy(y + 2 * modes * k_count, reinterpret_cast<const double*>(amp.data()),
                sizeof(cplx) * k_count);
    std::memcpy(y + 2 * modes * k_count + 2 * k_count, s.data(), sizeof(double) * k_count);
  }
  void unpack(const double* y, Eigen::MatrixXcd& z, Eigen::VectorXcd& amp,
              Eigen::VectorXd& s) const {
    z.resize(modes, k_count);
    amp.resize(k_count);
    s.resize(k_count);
    std::memcpy(reinterpret_cast<double*>(z.data()), y, sizeof(cplx) * modes * k_count);
    std::memcpy(reinterpret_cast<double*>(amp.data()), y + 2 * modes * k_count,
                sizeof(cplx) * k_count);
    std::memcpy(s.data(), y + 2 * modes * k_count + 2 * k_count, sizeof(double) * k_count);
  }
};

class OdeSystem {
 public:
  OdeSystem(const NormalOrderedHamiltonian& h, int modes, int k_count, double svd_cutoff)
      : h_(h), svd_cutoff_(svd_cutoff), packer_{modes, k_count} {}

  int dim() const { return packer_.dim(); }
  const Packer& packer() const { return packer_; }
  long evaluations = 0;
  int last_rank = 0;
  double last_condition = 0.0;

  void operator()(const double* y, double* dydt) {
    ++evaluations;
    packer_.unpack(y, z_, amp_, action_);
    rhs_into(z_, amp_, action_, h_, svd_cutoff_, work_, zdot_, amp_dot_, action_dot_,
             last_rank, last_condition);
    packer_.pack(zdot_, amp_dot_, action_dot_, dydt);
  }

 private:
  const NormalOrderedHamiltonian& h_;
  double svd_cutoff_;
  Packer packer_;
  Eigen::MatrixXcd z_, zdot_;
  Eigen::VectorXcd amp_, amp_dot_;
  Eigen::VectorXd action_, action_dot_;
  RhsWorkspace work_;
};

using Vec = std::vector<double>;

void axpy(Vec& out, const Vec& y, std::initializer_list<std::pair<double, const Vec*>> terms) {
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) {
    double v = y[i];
    for (const auto& [c, k] : terms) v += c * (*k)[i];
    out[i] = v;
  }
}

}  // namespace

RhsResult compute_rhs(const WavefunctionState& state, const NormalOrderedHamiltonian& h,
                      double svd_cutoff) {
  require(state.num_modes() == h.num_modes(), "compute_rhs: state/model mode mismatch");
  RhsWorkspace w;
  RhsResult r;
  rhs_into(state.z, state.amp, state.action, h, svd_cutoff, w, r.zdot, r.amp_dot,
           r.action_dot, r.solve_rank, r.solve_condition);
  return r;
}

PropagationResult propagate(WavefunctionState& state, const NormalOrderedHamiltonian& h,
                            const PropagatorSettings& settings, double t_end,
                            const std::vector<Monitor>& monitors) {
  require(state.num_modes() == h.num_modes(), "propagate: state/model mode mismatch");
  require(settings.dt > 0.0, "propagate: dt must be positive");
  require(settings.record_every >= 1, "propagate: record_every must be >= 1");
  const double span = t_end - state.t;
  require(span != 0.0, "propagate: t_end equals current time");
  const double direction = span > 0.0 ? 1.0 : -1.0;

  PropagationResult result;
  for (const auto& m : monitors)
    result.series.columns.insert(result.series.columns.end(), m.columns.begin(),
                                 m.columns.end());

  OdeSystem system(h, state.num_modes(), state.num_configs(), settings.svd_cutoff);
  const int dim = system.dim();
  Vec y(dim), k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), ytmp(dim),
      yerr(dim);
  system.packer().pack(state.z, state.amp, state.action, y.data());

  // Uniform record grid snapped to tile [t0, t_end] exactly.
  const double record_unit = settings.dt * settings.record_every;
  const long n_records = std::max<long>(1, std::lround(std::abs(span) / record_unit));
  const double record_dt = span / static_cast<double>(n_records);
  const double t0 = state.t;

  double initial_norm = 0.0;
  int checkpoint_countdown = settings.checkpoint_every;

  auto emit_record = [&](long record_index) -> bool {
    system.packer().unpack(y.data(), state.z, state.amp, state.action);
    state.t = record_index == n_records ? t_end : t0 + record_index * record_dt;
    std::vector<double> row;
    row.reserve(result.series.columns.size());
    for (const auto& m : monitors) m.sample(state, row);
    result.series.append(state.t, std::move(row));

    if (!settings.checkpoint_path.empty() && settings.checkpoint_every > 0 &&
        --checkpoint_countdown == 0) {
      checkpoint_countdown = settings.checkpoint_every;
      save_checkpoint(settings.checkpoint_path, state, settings.checkpoint_seed, settings.checkpoint_hash);
    }
    if (settings.norm_guard > 0.0) {
      const double norm = state_norm(state);
      if (record_index == 0) {
        initial_norm = norm;
      } else if (std::abs(norm / initial_norm - 1.0) > settings.norm_guard) {
        result.status = PropagationStatus::norm_guard_abort;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "norm guard tripped at t=%.6g: norm ratio %.6g (guard %.2g)", state.t,
                      norm / initial_norm, settings.norm_guard);
        result.message = buf;
        return false;
      }
    }
    return true;
  };

  auto fail = [&](PropagationStatus status, const std::string& message) {
    result.status = status;
    result.message = message;
    result.last_rank = system.last_rank;
    result.last_condition = system.last_condition;
    result.rhs_evaluations = system.evaluations;
    system.packer().unpack(y.data(), state.z, state.amp, state.action);
    return result;
  };

  if (!emit_record(0)) return fail(result.status, result.message);

  try {
    if (settings.integrator == PropagatorSettings::Integrator::fixed_rk4) {
      // Step count per record interval from the requested dt.
      const long steps_per_record =
          std::max<long>(1, std::lround(std::abs(record_dt) / settings.dt));
      const double dt = record_dt / static_cast<double>(steps_per_record);
      for (long rec = 1; rec <= n_records; ++rec) {
        double t = t0 + (rec - 1) * record_dt;
        for (long s = 0; s < steps_per_record; ++s) {
          system(y.data(), k1.data());
          axpy(ytmp, y, {{0.5 * dt, &k1}});
          system(ytmp.data(), k2.data());
          axpy(ytmp, y, {{0.5 * dt, &k2}});
          system(ytmp.data(), k3.data());
          axpy(ytmp, y, {{dt, &k3}});
          system(ytmp.data(), k4.data());
          axpy(y, y, {{dt / 6.0, &k1}, {dt / 3.0, &k2}, {dt / 3.0, &k3}, {dt / 6.0, &k4}});
          t += dt;
          ++result.accepted_steps;
        }
        if (!emit_record(rec)) break;
      }
    } else {
      // Dormand-Prince 5(4) with FSAL, stepping exactly onto record times.
      static constexpr double a21 = 1.0 / 5;
      static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
      static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
      static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                              a53 = 64448.0 / 6561, a54 = -212.0 / 729;
      static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                              a64 = 49.0 / 176, a65 = -5103.0 / 18656;
      static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                              b5 = -2187.0 / 6784, b6 = 11.0 / 84;
      static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                              e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

      double t = t0;
      double dt_want = direction * std::min(settings.dt, std::abs(record_dt));
      bool have_k1 = false;
      for (long rec = 1; rec <= n_records; ++rec) {
        const double t_stop = rec == n_records ? t_end : t0 + rec * record_dt;
        while (direction * (t_stop - t) > 1e-12 * std::max(1.0, std::abs(t))) {
          double dt = dt_want;
          if (direction * (t + dt - t_stop) > 0.0) dt = t_stop - t;
          if (std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t)))
            throw NumericsError("adaptive step size underflow");
          if (!have_k1) {
            system(y.data(), k1.data());
            have_k1 = true;
          }
          axpy(ytmp, y, {{dt * a21, &k1}});
          system(ytmp.data(), k2.data());
          axpy(ytmp, y, {{dt * a31, &k1}, {dt * a32, &k2}});
          system(ytmp.data(), k3.data());
          axpy(ytmp, y, {{dt * a41, &k1}, {dt * a42, &k2}, {dt * a43, &k3}});
          system(ytmp.data(), k4.data());
          axpy(ytmp, y,
               {{dt * a51, &k1}, {dt * a52, &k2}, {dt * a53, &k3}, {dt * a54, &k4}});
          system(ytmp.data(), k5.data());
          axpy(ytmp, y,
               {{dt * a61, &k1},
                {dt * a62, &k2},
                {dt * a63, &k3},
                {dt * a64, &k4},
                {dt * a65, &k5}});
          system(ytmp.data(), k6.data());
          axpy(ytmp, y,
               {{dt * b1, &k1}, {dt * b3, &k3}, {dt * b4, &k4}, {dt * b5, &k5}, {dt * b6, &k6}});
          system(ytmp.data(), k7.data());  // also f at the 5th-order solution

          double err_sq = 0.0;
          for (int i = 0; i < dim; ++i) {
            yerr[i] = dt * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            const double scale =
                settings.abs_tol +
                settings.rel_tol * std::max(std::abs(y[i]), std::abs(ytmp[i]));
            const double r = yerr[i] / scale;
            err_sq += r * r;
          }
          const double err = std::sqrt(err_sq / dim);
          if (err <= 1.0) {
            t = std::abs(t_stop - (t + dt)) < 1e-12 * std::max(1.0, std::abs(t_stop))
                    ? t_stop
                    : t + dt;
            y.swap(ytmp);
            k1.swap(k7);  // FSAL
            ++result.accepted_steps;
          } else {
            ++result.rejected_steps;
            have_k1 = true;  // k1 still valid at unchanged (t, y)
          }
          const double factor =
              err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
          dt_want = direction * std::min(std::abs(dt) * factor, std::abs(span));
        }
        if (!emit_record(rec)) break;
      }
    }
  } catch (const NumericsError& e) {
    const std::string what = e.what();
    if (what.find("underflow") != std::string::npos)
      return fail(PropagationStatus::step_underflow, what);
    return fail(PropagationStatus::solver_degenerate, what);
  }

  result.last_rank = system.last_rank;
  result.last_condition = system.last_condition;
  result.rhs_evaluations = system.evaluations;
  system.packer().unpack(y.data(), state.z, state.amp, state.action);
  if (result.status == PropagationStatus::ok) state.t = t_end;
  if (!settings.checkpoint_path.empty())
    save_checkpoint(settings.checkpoint_path, state, settings.checkpoint_seed, settings.checkpoint_hash);
  return result;
}

// ------------------------------------------------------------ checkpoints --

namespace {
constexpr char kCheckpointMagic[8] = {'C', 'C', 'S', 'B', 'C', 'H', 'K', '1'};
}

void save_checkpoint(const std::string& path, const WavefunctionState& state, uint64_t seed,
                     const std::string& settings_hash) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "save_checkpoint: cannot open " + path);
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  const uint64_t modes = state.num_modes(), k_count = state.num_configs();
  const uint64_t hash_len = settings_hash.size();
  out.write(reinterpret_cast<const char*>(&modes), 8);
  out.write(reinterpret_cast<const char*>(&k_count), 8);
  out.write(reinterpret_cast<const char*>(&seed), 8);
  out.write(reinterpret_cast<const char*>(&hash_len), 8);
  out.write(settings_hash.data(), static_cast<std::streamsize>(hash_len));
  out.write(reinterpret_cast<const char*>(&state.t), 8);
  out.write(reinterpret_cast<const char*>(state.z.data()),
            static_cast<std::streamsize>(sizeof(cplx) * modes * k_count));
  out.write(reinterpret_cast<const char*>(state.amp.data()),
            static_cast<std::streamsize>(sizeof(cplx) * k_count));
  out.write(reinterpret_cast<const char*>(state.action.data()),
            static_cast<std::streamsize>(sizeof(double) * k_count));
  require(out.good(), "save_checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "load_checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  require(in.good() && std::memcmp(magic, kCheckpointMagic, 8) == 0,
          "load_checkpoint: bad magic in " + path);
  uint64_t modes = 0, k_count = 0, hash_len = 0;
  Checkpoint cp;
  in.read(reinterpret_cast<char*>(&modes), 8);
  in.read(reinterpret_cast<char*>(&k_count), 8);
  in.read(reinterpret_cast<char*>(&cp.seed), 8);
  in.read(reinterpret_cast<char*>(&hash_len), 8);
  cp.settings_hash.resize(hash_len);
  in.read(cp.settings_hash.data(), static_cast<std::streamsize>(hash_len));
  in.read(reinterpret_cast<char*>(&cp.state.t), 8);
  cp.state.z.resize(static_cast<Eigen::Index>(modes), static_cast<Eigen::Index>(k_count));
  cp.state.amp.resize(static_cast<Eigen::Index>(k_count));
  cp.state.action.resize(static_cast<Eigen::Index>(k_count));
  in.read(reinterpret_cast<char*>(cp.state.z.data()),
          static_cast<std::streamsize>(sizeof(cplx) * modes * k_count));
  in.read(reinterpret_cast<char*>(cp.state.amp.data()),
          static_cast<std::streamsize>(sizeof(cplx) * k_count));
  in.read(reinterpret_cast<char*>(cp.state.action.data()),
          static_cast<std::streamsize>(sizeof(double) * k_count));
  require(in.good(), "load_checkpoint: truncated file " + path);
  return cp;
}

}  // namespace ccsb
