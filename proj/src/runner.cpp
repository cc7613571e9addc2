#include "ccsb/runner.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ccsb/hamiltonians.hpp"
#include "ccsb/oracle.hpp"
#include "ccsb/overlaps.hpp"
#include "ccsb/version.hpp"

namespace ccsb {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(PropagationStatus status) {
  switch (status) {
    case PropagationStatus::ok: return kExitOk;
    case PropagationStatus::norm_guard_abort: return kExitNormGuard;
    case PropagationStatus::solver_degenerate: return kExitSolver;
    case PropagationStatus::step_underflow: return kExitUnderflow;
  }
  return kExitIo;
}

void pin_linear_algebra_threads() {
  setenv("OPENBLAS_NUM_THREADS", "1", /*overwrite=*/0);
  Eigen::setNbThreads(1);
}

namespace {

void apply_workers(int workers) {
#ifdef _OPENMP
  const int n = workers > 0 ? workers : omp_get_num_procs();
  omp_set_num_threads(n);
#else
  (void)workers;
#endif
}

bool wants(const RunConfig& cfg, const std::string& name) {
  return std::find(cfg.observables.begin(), cfg.observables.end(), name) !=
         cfg.observables.end();
}

std::vector<double> record_times(const RunConfig& cfg) {
  const double unit = cfg.settings.dt * cfg.settings.record_every;
  const long n = std::max<long>(1, std::lround(std::abs(cfg.t_end) / unit));
  std::vector<double> t(static_cast<size_t>(n) + 1);
  for (long j = 0; j <= n; ++j) t[static_cast<size_t>(j)] = cfg.t_end * j / static_cast<double>(n);
  return t;
}

std::vector<Monitor> build_monitors(const RunConfig& cfg,
                                    const NormalOrderedHamiltonian& model) {
  std::vector<Monitor> monitors;
  const bool want_norm = wants(cfg, "norm");
  const bool want_number = wants(cfg, "particle_number");
  if (want_norm || want_number) {
    Monitor m;
    if (want_norm) m.columns.push_back("norm");
    if (want_number) m.columns.push_back("particle_number");
    const int offset = model.particle_mode_offset();
    m.sample = [offset, want_norm, want_number](const WavefunctionState& s,
                                                std::vector<double>& row) {
      const auto [norm, number] = norm_and_particle_number(s, offset);
      if (want_norm) row.push_back(norm);
      if (want_number) row.push_back(number);
    };
    monitors.push_back(std::move(m));
  }
  if (wants(cfg, "ccf") || wants(cfg, "ccf_over_norm")) {
    require(cfg.is_bath_application(), "config: ccf observables need the system-bath model");
    MirrorTarget mirror;
    mirror.tunnelling_label = label_from_qp(cfg.mirror_q, cfg.mirror_p);
    mirror.bath_occupation = cfg.initial_occupation();
    const bool raw = wants(cfg, "ccf");
    const bool normed = wants(cfg, "ccf_over_norm");
    Monitor m;
    if (raw) {
      m.columns.push_back("ccf_re");
      m.columns.push_back("ccf_im");
    }
    if (normed) {
      m.columns.push_back("ccf_over_norm_re");
      m.columns.push_back("ccf_over_norm_im");
    }
    m.sample = [mirror, raw, normed](const WavefunctionState& s, std::vector<double>& row) {
      const cplx c = cross_correlation(s, mirror);
      if (raw) {
        row.push_back(c.real());
        row.push_back(c.imag());
      }
      if (normed) {
        const double norm = state_norm(s);
        row.push_back(c.real() / norm);
        row.push_back(c.imag() / norm);
      }
    };
    monitors.push_back(std::move(m));
  }
  const bool want_mean = wants(cfg, "mean_position");
  const bool want_var = wants(cfg, "density_variance");
  const bool want_map = wants(cfg, "density_map");
  if (want_mean || want_var || want_map) {
    require(!cfg.is_bath_application(),
            "config: density observables need the trapped-boson model");
    Monitor m;
    if (want_mean) m.columns.push_back("mean_position");
    if (want_var) m.columns.push_back("density_variance");
    if (want_map)
      for (int i = 0; i < cfg.grid.points(); ++i) m.columns.push_back("rhoq_" + std::to_string(i));
    const PositionGrid grid = cfg.grid;
    m.sample = [grid, want_mean, want_var, want_map](const WavefunctionState& s,
                                                     std::vector<double>& row) {
      const Eigen::MatrixXcd rho = density_matrix(s);
      const Eigen::VectorXd rho_q = one_body_density(rho, grid);
      if (want_mean) row.push_back(density_mean(rho_q, grid));
      if (want_var) row.push_back(density_variance(rho_q, grid));
      if (want_map)
        for (int i = 0; i < rho_q.size(); ++i) row.push_back(rho_q[i]);
    };
    monitors.push_back(std::move(m));
  }
  return monitors;
}

// Fourier spectrum of Re(CCF) on the record grid -> spectrum.csv.
void write_spectrum(const fs::path& dir, const TimeSeries& series, const RunConfig& cfg,
                    const std::vector<std::string>& comments) {
  if (!series.has_column("ccf_re") || series.t.size() < 2) return;
  Curve re = series_column(series, "ccf_re");
  const Spectrum spec = ft_spectrum(re, cfg.ft_window, cfg.ft_zero_pad);
  std::ofstream f(dir / "spectrum.csv");
  require(f.good(), "cannot write spectrum.csv");
  for (const auto& c : comments) f << "# " << c << "\n";
  f << "omega,magnitude\n";
  f.precision(17);
  for (size_t k = 0; k < spec.omega.size(); ++k)
    f << spec.omega[k] << "," << spec.magnitude[k] << "\n";
}

// Columns rhoq_* go to density.csv, the rest to observables.csv.
void split_and_write(const fs::path& dir, const TimeSeries& all,
                     const std::vector<std::string>& comments, std::string& main_csv) {
  TimeSeries main_series, density_series;
  std::vector<size_t> main_idx, density_idx;
  for (size_t j = 0; j < all.columns.size(); ++j) {
    if (all.columns[j].rfind("rhoq_", 0) == 0) {
      density_series.columns.push_back(all.columns[j]);
      density_idx.push_back(j);
    } else {
      main_series.columns.push_back(all.columns[j]);
      main_idx.push_back(j);
    }
  }
  for (size_t i = 0; i < all.t.size(); ++i) {
    std::vector<double> row;
    row.reserve(main_idx.size());
    for (size_t j : main_idx) row.push_back(all.rows[i][j]);
    main_series.append(all.t[i], std::move(row));
    if (!density_idx.empty()) {
      std::vector<double> drow;
      drow.reserve(density_idx.size());
      for (size_t j : density_idx) drow.push_back(all.rows[i][j]);
      density_series.append(all.t[i], std::move(drow));
    }
  }
  main_csv = (dir / "observables.csv").string();
  write_csv(main_csv, main_series, comments);
  if (!density_series.columns.empty())
    write_csv((dir / "density.csv").string(), density_series, comments);
}

RunOutcome run_engine(const RunConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  RunOutcome outcome;
  const std::string hash = config_hash_hex(cfg);

  std::unique_ptr<NormalOrderedHamiltonian> model;
  if (cfg.application == Application::app1)
    model = std::make_unique<TunnellingBathModel>(cfg.eta, cfg.lambda, cfg.omega, cfg.m_total);
  else
    model = std::make_unique<TrappedBosonsModel>(cfg.xi, cfg.lambda0, cfg.omega, cfg.n_bosons);

  // Sample, project, assemble the initial state.
  const SamplingSpec spec = cfg.sampling_spec();
  const Eigen::MatrixXcd basis = build_initial_basis(spec);
  const Eigen::MatrixXcd gram = overlap_matrix(basis);
  const Eigen::VectorXcd target =
      cfg.is_bath_application()
          ? target_overlaps_tunnelling_fock(basis, spec.tunnelling_centre(),
                                            spec.initial_occupation)
          : target_overlaps_fock(basis, spec.initial_occupation);
  const ProjectionResult proj =
      project_initial_amplitudes(gram, target, cfg.settings.svd_cutoff, cfg.renormalize);

  WavefunctionState state = WavefunctionState::from_basis(basis, proj.amp);
  if (!cfg.restart_from.empty()) {
    Checkpoint cp = load_checkpoint(cfg.restart_from);
    require(cp.state.num_modes() == model->num_modes(),
            "restart: checkpoint mode count does not match the model");
    state = std::move(cp.state);
  }

  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  PropagatorSettings settings = cfg.settings;
  settings.checkpoint_path = (dir / "checkpoint.bin").string();
  settings.checkpoint_seed = cfg.seed;
  settings.checkpoint_hash = hash;

  const auto monitors = build_monitors(cfg, *model);
  PropagationResult prop = propagate(state, *model, settings, cfg.t_end, monitors);

  const std::vector<std::string> comments = {std::string("ccsb ") + kVersion,
                                             "config = " + hash};
  split_and_write(dir, prop.series, comments, outcome.observables_csv);
  if (prop.status == PropagationStatus::ok && prop.series.uniform_spacing())
    write_spectrum(dir, prop.series, cfg, comments);

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  json meta;
  meta["version"] = kVersion;
  meta["config_hash"] = hash;
  meta["config_text"] = canonical_config_text(cfg);
  meta["application"] = to_string(cfg.application);
  meta["seed"] = cfg.seed;
  meta["status"] = to_string(prop.status);
  meta["message"] = prop.message;
  meta["projection"] = {{"achieved_norm", proj.achieved_norm},
                        {"fidelity", proj.fidelity},
                        {"rank", proj.rank},
                        {"condition", proj.condition}};
  meta["propagation"] = {{"accepted_steps", prop.accepted_steps},
                         {"rejected_steps", prop.rejected_steps},
                         {"rhs_evaluations", prop.rhs_evaluations},
                         {"last_rank", prop.last_rank},
                         {"last_condition", prop.last_condition}};
  meta["records"] = prop.series.t.size();
  meta["timing_seconds"] = elapsed;
  outcome.metadata_json = (dir / "metadata.json").string();
  std::ofstream mf(outcome.metadata_json);
  mf << meta.dump(2) << "\n";
  require(mf.good(), "cannot write " + outcome.metadata_json);

  outcome.status = prop.status;
  outcome.message = prop.message;
  outcome.exit_code = exit_code_for(prop.status);
  return outcome;
}

RunOutcome run_oracle(const RunConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  RunOutcome outcome;
  const std::string hash = config_hash_hex(cfg);
  const std::vector<double> times = record_times(cfg);

  TimeSeries series;
  if (cfg.application == Application::oracle_app1) {
    const auto res = oracle::exact_propagate_app1(cfg.m_total, cfg.omega, cfg.oracle_levels,
                                                  cfg.eta, cfg.lambda, cfg.q0, cfg.mirror_q,
                                                  times);
    series.columns = {"norm", "particle_number", "ccf_re", "ccf_im", "ccf_over_norm_re",
                      "ccf_over_norm_im"};
    const double norm = res.representability;  // conserved by the propagation
    const double number = norm * (cfg.m_total - 1);
    for (size_t i = 0; i < times.size(); ++i) {
      const cplx c = res.ccf[i];
      series.append(times[i],
                    {norm, number, c.real(), c.imag(), c.real() / norm, c.imag() / norm});
    }
    series.metadata["basis_size"] = std::to_string(res.basis_size);
  } else {
    const auto res = oracle::exact_propagate_app2(cfg.n_bosons, cfg.omega, cfg.xi, cfg.lambda0,
                                                  times, cfg.grid);
    const bool want_map = wants(cfg, "density_map");
    series.columns = {"norm", "particle_number", "mean_position", "density_variance"};
    if (want_map)
      for (int i = 0; i < cfg.grid.points(); ++i)
        series.columns.push_back("rhoq_" + std::to_string(i));
    for (size_t i = 0; i < times.size(); ++i) {
      std::vector<double> row = {res.norm[i], res.rho[i].trace().real(), res.mean[i],
                                 res.variance[i]};
      if (want_map) {
        const Eigen::VectorXd rho_q = one_body_density(res.rho[i], cfg.grid);
        for (int j = 0; j < rho_q.size(); ++j) row.push_back(rho_q[j]);
      }
      series.append(times[i], std::move(row));
    }
    series.metadata["basis_size"] = std::to_string(res.basis_size);
  }

  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  const std::vector<std::string> comments = {std::string("ccsb ") + kVersion,
                                             "config = " + hash};
  split_and_write(dir, series, comments, outcome.observables_csv);
  write_spectrum(dir, series, cfg, comments);

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  json meta;
  meta["version"] = kVersion;
  meta["config_hash"] = hash;
  meta["config_text"] = canonical_config_text(cfg);
  meta["application"] = to_string(cfg.application);
  meta["status"] = "ok";
  meta["records"] = series.t.size();
  meta["timing_seconds"] = elapsed;
  outcome.metadata_json = (dir / "metadata.json").string();
  std::ofstream mf(outcome.metadata_json);
  mf << meta.dump(2) << "\n";
  require(mf.good(), "cannot write " + outcome.metadata_json);
  return outcome;
}

}  // namespace

RunOutcome run_simulation(const RunConfig& cfg) {
  apply_workers(cfg.workers);
  return cfg.is_oracle() ? run_oracle(cfg) : run_engine(cfg);
}

// ------------------------------------------------------------------ compare --

int run_compare(const std::string& csv_a, const std::string& csv_b, const CompareOptions& opt,
                std::ostream& out) {
  require(opt.metric == "chi" || opt.metric == "max-abs",
          "compare: metric must be chi or max-abs");
  const TimeSeries a = read_csv(csv_a);
  const TimeSeries b = read_csv(csv_b);

  // column pairs: explicit map first, then shared names
  std::vector<std::pair<std::string, std::string>> pairs = opt.column_map;
  std::set<std::string> mapped_a;
  for (const auto& [ca, cb] : pairs) mapped_a.insert(ca);
  for (const auto& name : a.columns) {
    if (mapped_a.count(name)) continue;
    if (!b.has_column(name)) continue;
    if (!opt.columns.empty() &&
        std::find(opt.columns.begin(), opt.columns.end(), name) == opt.columns.end())
      continue;
    pairs.emplace_back(name, name);
  }
  require(!pairs.empty(), "compare: no shared columns to compare");

  const auto metric = [&](const Curve& x, const Curve& y) {
    return opt.metric == "chi" ? chi_error(x, y) : max_abs_difference(x, y);
  };

  TimeSeries report;  // reuse CSV writer: one pseudo-time row per column
  report.columns = {"value"};
  std::vector<std::string> names;
  out << "metric: " << opt.metric << "\n";
  double row_time = 0.0;
  // modulus rows for complex pairs
  std::set<std::string> bases;
  for (const auto& [ca, cb] : pairs) {
    if (ca.size() > 3 && ca.substr(ca.size() - 3) == "_re" && cb.size() > 3 &&
        cb.substr(cb.size() - 3) == "_re") {
      const std::string base_a = ca.substr(0, ca.size() - 3);
      const std::string base_b = cb.substr(0, cb.size() - 3);
      if (a.has_column(base_a + "_im") && b.has_column(base_b + "_im"))
        bases.insert(base_a + "=" + base_b);
    }
  }
  for (const auto& [ca, cb] : pairs) {
    const double v = metric(series_column(a, ca), series_column(b, cb));
    out << "  " << ca << (ca == cb ? "" : " vs " + cb) << " : " << v << "\n";
    names.push_back(ca);
    report.append(row_time += 1.0, {v});
  }
  for (const auto& spec : bases) {
    const auto eq = spec.find('=');
    const std::string base_a = spec.substr(0, eq), base_b = spec.substr(eq + 1);
    const double v = metric(series_modulus(a, base_a), series_modulus(b, base_b));
    out << "  |" << base_a << "|" << (base_a == base_b ? "" : " vs |" + base_b + "|") << " : "
        << v << "\n";
    names.push_back("abs_" + base_a);
    report.append(row_time += 1.0, {v});
  }
  if (!opt.report_path.empty()) {
    std::vector<std::string> comments = {"compare " + csv_a + " " + csv_b,
                                         "metric = " + opt.metric};
    for (size_t i = 0; i < names.size(); ++i)
      comments.push_back("row " + std::to_string(i + 1) + " = " + names[i]);
    write_csv(opt.report_path, report, comments);
  }
  return kExitOk;
}

int run_tables_dump(int omega, bool even_only, const std::string& out_dir, std::ostream& log) {
  const auto tables = build_tables(omega, even_only);
  const fs::path dir(out_dir);
  fs::create_directories(dir);

  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    require(f.good(), std::string("tables: cannot write ") + name);
    return f;
  };
  {
    auto f = open("epsilon.csv");
    f << "index,physical_level,value\n";
    for (int i = 0; i <= omega; ++i)
      f << i << "," << tables.physical_level(i) << "," << tables.epsilon[i] << "\n";
  }
  {
    auto f = open("q.csv");
    f << "a,b,value\n";
    for (int i = 0; i <= omega; ++i)
      for (int j = 0; j <= omega; ++j)
        if (tables.q(i, j) != 0.0) f << i << "," << j << "," << tables.q(i, j) << "\n";
  }
  {
    auto f = open("q2.csv");
    f << "a,b,value\n";
    for (int i = 0; i <= omega; ++i)
      for (int j = 0; j <= omega; ++j)
        if (tables.q2(i, j) != 0.0) f << i << "," << j << "," << tables.q2(i, j) << "\n";
  }
  {
    auto f = open("delta.csv");
    f << "a,b,c,d,value\n";
    f.precision(17);
    tables.delta.for_each_canonical(
        [&](int a, int b, int c, int d, double v) {
          f << a << "," << b << "," << c << "," << d << "," << v << "\n";
        });
  }
  log << "tables written to " << out_dir << " (delta entries: "
      << tables.delta.stored_entries() << ")\n";
  return kExitOk;
}

}  // namespace ccsb
