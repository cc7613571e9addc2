#include "ccsb/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ccsb {

const char* to_string(Application a) {
  switch (a) {
    case Application::app1: return "app1";
    case Application::app2: return "app2";
    case Application::oracle_app1: return "oracle-app1";
    case Application::oracle_app2: return "oracle-app2";
  }
  return "unknown";
}

Occupation RunConfig::initial_occupation() const {
  Occupation n(static_cast<size_t>(omega) + 1, 0);
  n[0] = is_bath_application() ? m_total - 1 : n_bosons;
  return n;
}

SamplingSpec RunConfig::sampling_spec() const {
  SamplingSpec spec;
  spec.k_configs = k_configs;
  spec.sigma_tunnelling = sigma_tunnelling;
  spec.sigma_occupied = sigma_occupied;
  spec.sigma_empty = sigma_empty;
  spec.seed = seed;
  spec.initial_occupation = initial_occupation();
  spec.q0 = q0;
  spec.p0 = p0;
  spec.has_tunnelling_mode = is_bath_application();
  spec.renormalize = renormalize;
  return spec;
}

namespace {

using KvMap = std::map<std::string, std::map<std::string, std::string>>;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

KvMap parse_sections(const std::string& text) {
  KvMap out;
  std::stringstream ss(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      require(line.back() == ']', "config line " + std::to_string(line_no) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      require(!section.empty(), "config line " + std::to_string(line_no) + ": empty section");
      out[section];
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos,
            "config line " + std::to_string(line_no) + ": expected key = value");
    require(!section.empty(),
            "config line " + std::to_string(line_no) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    require(!key.empty() && !value.empty(),
            "config line " + std::to_string(line_no) + ": empty key or value");
    require(out[section].emplace(key, value).second,
            "config: duplicate key '" + key + "' in [" + section + "]");
  }
  return out;
}

class SectionReader {
 public:
  SectionReader(const KvMap& map, const std::string& section) : section_(section) {
    const auto it = map.find(section);
    if (it != map.end()) kv_ = &it->second;
  }

  bool has(const std::string& key) const { return kv_ && kv_->count(key) > 0; }

  std::string raw(const std::string& key) {
    require(has(key), "config: missing required key '" + key + "' in [" + section_ + "]");
    seen_.insert(key);
    return kv_->at(key);
  }

  double number(const std::string& key) {
    const std::string v = raw(key);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    require(end && *end == '\0', "config: bad number for '" + key + "': " + v);
    return x;
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }
  long integer(const std::string& key) {
    const double x = number(key);
    require(x == std::floor(x), "config: '" + key + "' must be an integer");
    return static_cast<long>(x);
  }
  long integer(const std::string& key, long fallback) {
    return has(key) ? integer(key) : fallback;
  }
  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? raw(key) : fallback;
  }
  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const std::string v = raw(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean for '" + key + "': " + v);
  }

  void check_all_consumed() const {
    if (!kv_) return;
    for (const auto& [k, v] : *kv_)
      require(seen_.count(k) > 0, "config: unknown key '" + k + "' in [" + section_ + "]");
  }

 private:
  std::string section_;
  const std::map<std::string, std::string>* kv_ = nullptr;
  std::set<std::string> seen_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const std::set<std::string> kKnownObservables = {
    "norm", "particle_number", "ccf", "ccf_over_norm", "mean_position", "density_variance",
    "density_map"};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  const KvMap kv = parse_sections(text);
  for (const auto& [section, _] : kv)
    require(section == "run" || section == "model" || section == "sampling" ||
                section == "propagator" || section == "grid" || section == "observables",
            "config: unknown section [" + section + "]");

  RunConfig cfg;
  SectionReader run(kv, "run");
  const std::string app = run.raw("application");
  if (app == "app1") cfg.application = Application::app1;
  else if (app == "app2") cfg.application = Application::app2;
  else if (app == "oracle-app1") cfg.application = Application::oracle_app1;
  else if (app == "oracle-app2") cfg.application = Application::oracle_app2;
  else throw ConfigError("config: unknown application '" + app + "'");

  cfg.out_dir = run.text("out", "runs/" + app);
  cfg.workers = static_cast<int>(run.integer("workers", 0));
  const std::string default_obs = cfg.is_bath_application()
                                      ? "norm,particle_number,ccf,ccf_over_norm"
                                      : "norm,particle_number,mean_position,density_variance";
  cfg.observables = split_list(run.text("observables", default_obs));
  for (const auto& o : cfg.observables)
    require(kKnownObservables.count(o) > 0, "config: unknown observable '" + o + "'");
  require(!cfg.observables.empty(), "config: empty observable list");
  run.check_all_consumed();

  SectionReader model(kv, "model");
  cfg.omega = static_cast<int>(model.integer("omega"));
  require(cfg.omega >= 0, "config: omega must be non-negative");
  if (cfg.is_bath_application()) {
    cfg.eta = model.number("eta");
    cfg.lambda = model.number("lambda");
    cfg.m_total = static_cast<int>(model.integer("m_total"));
    require(cfg.eta > 0.0, "config: eta must be positive");
    require(cfg.m_total >= 2, "config: m_total must be at least 2");
    if (cfg.application == Application::oracle_app1)
      cfg.oracle_levels = static_cast<int>(model.integer("oracle_levels", 40));
  } else {
    cfg.xi = model.number("xi");
    cfg.lambda0 = model.number("lambda0");
    cfg.n_bosons = static_cast<int>(model.integer("n_bosons"));
    require(cfg.n_bosons >= 1, "config: n_bosons must be at least 1");
  }
  model.check_all_consumed();

  SectionReader sampling(kv, "sampling");
  if (!cfg.is_oracle()) {
    cfg.k_configs = static_cast<int>(sampling.integer("k_configs"));
    require(cfg.k_configs >= 1, "config: k_configs must be at least 1");
    cfg.seed = static_cast<uint64_t>(sampling.integer("seed"));
    cfg.sigma_occupied = sampling.number("sigma_occupied", 1.0);
    cfg.sigma_empty = sampling.number("sigma_empty");
    require(cfg.sigma_occupied > 0.0 && cfg.sigma_empty > 0.0,
            "config: compression parameters must be positive");
    cfg.renormalize = sampling.flag("renormalize", false);
    if (cfg.is_bath_application()) cfg.sigma_tunnelling = sampling.number("sigma_tunnelling", 1.0);
  }
  if (cfg.is_bath_application()) {
    cfg.q0 = sampling.number("q0", -2.5);
    cfg.p0 = sampling.number("p0", 0.0);
    cfg.mirror_q = sampling.number("mirror_q", 2.5);
    cfg.mirror_p = sampling.number("mirror_p", 0.0);
  }
  sampling.check_all_consumed();

  SectionReader prop(kv, "propagator");
  cfg.t_end = prop.number("t_end");
  cfg.settings.dt = prop.number("dt");
  require(cfg.settings.dt > 0.0, "config: dt must be positive");
  const std::string integ = prop.text("integrator", "rk45");
  if (integ == "rk45") cfg.settings.integrator = PropagatorSettings::Integrator::adaptive_rk45;
  else if (integ == "rk4") cfg.settings.integrator = PropagatorSettings::Integrator::fixed_rk4;
  else throw ConfigError("config: integrator must be rk45 or rk4");
  cfg.settings.rel_tol = prop.number("rel_tol", 1e-8);
  cfg.settings.abs_tol = prop.number("abs_tol", 1e-10);
  cfg.settings.svd_cutoff = prop.number("svd_cutoff", 1e-10);
  require(cfg.settings.svd_cutoff >= 0.0 && cfg.settings.svd_cutoff < 1.0,
          "config: svd_cutoff must lie in [0, 1)");
  cfg.settings.record_every = static_cast<int>(prop.integer("record_every", 10));
  require(cfg.settings.record_every >= 1, "config: record_every must be >= 1");
  cfg.settings.norm_guard = prop.number("norm_guard", 0.5);
  cfg.settings.checkpoint_every = static_cast<int>(prop.integer("checkpoint_every", 0));
  cfg.restart_from = prop.text("restart_from", "");
  prop.check_all_consumed();

  SectionReader obs(kv, "observables");
  const std::string window = obs.text("ft_window", "none");
  if (window == "none") cfg.ft_window = FtWindow::none;
  else if (window == "hann") cfg.ft_window = FtWindow::hann;
  else throw ConfigError("config: ft_window must be none or hann");
  cfg.ft_zero_pad = static_cast<int>(obs.integer("ft_zero_pad", 4));
  require(cfg.ft_zero_pad >= 1, "config: ft_zero_pad must be >= 1");
  obs.check_all_consumed();

  SectionReader grid(kv, "grid");
  cfg.grid.q_min = grid.number("q_min", -8.0);
  cfg.grid.q_max = grid.number("q_max", 10.0);
  cfg.grid.dq = grid.number("dq", 0.02);
  require(cfg.grid.q_min < cfg.grid.q_max && cfg.grid.dq > 0.0, "config: bad grid");
  grid.check_all_consumed();

  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    const auto j = nlohmann::json::parse(ss.str(), nullptr, /*allow_exceptions=*/false);
    require(!j.is_discarded() && j.contains("config_text"),
            "metadata rerun: '" + path + "' is not a metadata file with config_text");
    return parse_config_text(j["config_text"].get<std::string>());
  }
  return parse_config_text(ss.str());
}

namespace {
std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string canonical_config_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[run]\n";
  out << "application = " << to_string(cfg.application) << "\n";
  out << "out = " << cfg.out_dir << "\n";
  out << "workers = " << cfg.workers << "\n";
  out << "observables = ";
  for (size_t i = 0; i < cfg.observables.size(); ++i)
    out << (i ? "," : "") << cfg.observables[i];
  out << "\n";

  out << "[model]\n";
  out << "omega = " << cfg.omega << "\n";
  if (cfg.is_bath_application()) {
    out << "eta = " << fmt_num(cfg.eta) << "\n";
    out << "lambda = " << fmt_num(cfg.lambda) << "\n";
    out << "m_total = " << cfg.m_total << "\n";
    if (cfg.application == Application::oracle_app1)
      out << "oracle_levels = " << cfg.oracle_levels << "\n";
  } else {
    out << "xi = " << fmt_num(cfg.xi) << "\n";
    out << "lambda0 = " << fmt_num(cfg.lambda0) << "\n";
    out << "n_bosons = " << cfg.n_bosons << "\n";
  }

  out << "[sampling]\n";
  if (!cfg.is_oracle()) {
    out << "k_configs = " << cfg.k_configs << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "sigma_occupied = " << fmt_num(cfg.sigma_occupied) << "\n";
    out << "sigma_empty = " << fmt_num(cfg.sigma_empty) << "\n";
    out << "renormalize = " << (cfg.renormalize ? "true" : "false") << "\n";
    if (cfg.is_bath_application())
      out << "sigma_tunnelling = " << fmt_num(cfg.sigma_tunnelling) << "\n";
  }
  if (cfg.is_bath_application()) {
    out << "q0 = " << fmt_num(cfg.q0) << "\n";
    out << "p0 = " << fmt_num(cfg.p0) << "\n";
    out << "mirror_q = " << fmt_num(cfg.mirror_q) << "\n";
    out << "mirror_p = " << fmt_num(cfg.mirror_p) << "\n";
  }

  out << "[propagator]\n";
  out << "t_end = " << fmt_num(cfg.t_end) << "\n";
  out << "dt = " << fmt_num(cfg.settings.dt) << "\n";
  out << "integrator = "
      << (cfg.settings.integrator == PropagatorSettings::Integrator::adaptive_rk45 ? "rk45"
                                                                                   : "rk4")
      << "\n";
  out << "rel_tol = " << fmt_num(cfg.settings.rel_tol) << "\n";
  out << "abs_tol = " << fmt_num(cfg.settings.abs_tol) << "\n";
  out << "svd_cutoff = " << fmt_num(cfg.settings.svd_cutoff) << "\n";
  out << "record_every = " << cfg.settings.record_every << "\n";
  out << "norm_guard = " << fmt_num(cfg.settings.norm_guard) << "\n";
  out << "checkpoint_every = " << cfg.settings.checkpoint_every << "\n";

  out << "[observables]\n";
  out << "ft_window = " << (cfg.ft_window == FtWindow::hann ? "hann" : "none") << "\n";
  out << "ft_zero_pad = " << cfg.ft_zero_pad << "\n";

  out << "[grid]\n";
  out << "q_min = " << fmt_num(cfg.grid.q_min) << "\n";
  out << "q_max = " << fmt_num(cfg.grid.q_max) << "\n";
  out << "dq = " << fmt_num(cfg.grid.dq) << "\n";
  return out.str();
}

uint64_t fnv1a_hash(const std::string& text) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string config_hash_hex(const RunConfig& cfg) {
  // Hash the physics identity only: the output path and worker count do not
  // change what is computed, so reruns elsewhere (or with other worker
  // counts) produce byte-identical observable files.
  std::stringstream filtered;
  std::stringstream all(canonical_config_text(cfg));
  std::string line;
  while (std::getline(all, line)) {
    if (line.rfind("out = ", 0) == 0 || line.rfind("workers = ", 0) == 0) continue;
    filtered << line << '\n';
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a_hash(filtered.str())));
  return buf;
}

std::string find_preset_file(const std::string& name) {
  std::vector<std::filesystem::path> roots;
  if (const char* env = std::getenv("CCSB_PRESET_DIR")) roots.emplace_back(env);
  roots.emplace_back("presets");
  for (const auto& root : roots) {
    const auto candidate = root / (name + ".cfg");
    if (std::filesystem::exists(candidate)) return candidate.string();
  }
  throw ConfigError("preset '" + name + "' not found (searched $CCSB_PRESET_DIR, ./presets)");
}

}  // namespace ccsb
