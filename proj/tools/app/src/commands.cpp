#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "conedual/app/app.hpp"
#include "conedual/cones.hpp"
#include "conedual/error.hpp"
#include "conedual/parallel.hpp"
#include "conedual/revesz.hpp"
#include "conedual/trig.hpp"
#include "conedual/wiener.hpp"
#include "config_access.hpp"

namespace conedual::app {

using nlohmann::json;
using detail::check_keys;
using detail::get_int;
using detail::get_int_list;
using detail::get_number;
using detail::require;

namespace {

struct Common {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double eps_pd = kDefaultEpsPd;
};

Common resolve_common(const json& config, const Overrides& overrides) {
  Common c;
  if (config.contains("seed")) {
    if (!config.at("seed").is_number_unsigned()) throw ConfigError("field \"seed\" must be a nonnegative integer");
    c.seed = config.at("seed").get<std::uint64_t>();
  }
  if (overrides.seed) c.seed = *overrides.seed;
  c.workers = static_cast<unsigned>(get_int(config, "workers", default_worker_count()));
  if (overrides.workers) c.workers = *overrides.workers;
  if (c.workers == 0) c.workers = default_worker_count();
  c.eps_pd = get_number(config, "eps_pd", kDefaultEpsPd);
  if (overrides.eps_pd) c.eps_pd = *overrides.eps_pd;
  if (!(c.eps_pd > 0.0)) throw ConfigError("eps_pd must be positive");
  return c;
}

json bound(std::string_view quantity, double value, std::string_view direction, std::string_view method) {
  return json{{"quantity", quantity}, {"value", value}, {"direction", direction}, {"method", method}};
}

json column_tag(const char* direction, const char* method) {
  return json{{"direction", direction}, {"method", method}};
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<json>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i].dump();
    out << '\n';
  }
  return out.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json tolerances_json(const SolverOptions& options) {
  return json{{"eps_pd", options.eps_pd},
              {"eps_feas", options.lp.feasibility},
              {"lp_optimality", options.lp.optimality},
              {"lp_pivot", options.lp.pivot}};
}

// Writes every LP handed to the observer as <tag>_<vars>x<rows>[_k].lp.
class LpDumper {
 public:
  explicit LpDumper(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  void operator()(std::string_view tag, const LinearProgram& lp) {
    std::string name = std::string(tag) + "_" + std::to_string(lp.num_variables()) + "x" +
                       std::to_string(lp.constraints.size());
    {
      std::lock_guard lock(mutex_);
      const int k = counts_[name]++;
      if (k > 0) name += "_" + std::to_string(k);
    }
    std::ofstream out(dir_ / (name + ".lp"));
    write_lp_text(out, lp);
  }

 private:
  std::filesystem::path dir_;
  std::mutex mutex_;
  std::map<std::string, int> counts_;
};

SolverOptions solver_options(const Common& common, const std::filesystem::path& lp_dump_dir,
                             std::shared_ptr<LpDumper>& dumper) {
  SolverOptions options;
  options.eps_pd = common.eps_pd;
  if (!lp_dump_dir.empty()) {
    dumper = std::make_shared<LpDumper>(lp_dump_dir);
    options.lp_observer = [dumper](std::string_view tag, const LinearProgram& lp) { (*dumper)(tag, lp); };
  }
  return options;
}

IndexSet parse_index_set(const json& obj, const char* key, int dim) {
  std::set<MultiIndex> out;
  if (obj.contains(key)) {
    const auto& list = obj.at(key);
    if (!list.is_array()) throw ConfigError(std::string("field \"") + key + "\" must be an array of indices");
    for (const auto& e : list) {
      const MultiIndex n = parse_index(e, dim);
      if (!n.is_positive()) {
        throw ConfigError(std::string("field \"") + key + "\": indices must lie in the positive half (got " +
                          format_index_key(n) + ")");
      }
      out.insert(n);
    }
  }
  return IndexSet(dim, std::move(out));
}

std::vector<std::int64_t> grid_schedule(const json& config, const char* key) {
  auto schedule = get_int_list(config, key);
  for (auto g : schedule) {
    if (g < 4) throw ConfigError(std::string("field \"") + key + "\": grid sizes must be >= 4");
  }
  return schedule;
}

struct CommandResult {
  json result;
  json bounds = json::array();
  json column_tags = json::object();
  std::string csv;
  std::vector<double> level_seconds;
};

CommandResult run_revesz(const json& config, const Common& common, SolverOptions options) {
  check_keys(config, {"command", "seed", "workers", "eps_pd", "dim", "M", "L", "r", "window_half_width",
                      "schedule", "exchange_rounds"},
             "revesz");
  const int dim = static_cast<int>(get_int(config, "dim", 1));
  if (dim < 1) throw ConfigError("dim must be >= 1");
  const std::vector<std::int64_t> schedule = grid_schedule(config, "schedule");
  options.exchange_rounds = static_cast<int>(get_int(config, "exchange_rounds", 0));
  if (options.exchange_rounds < 0) throw ConfigError("exchange_rounds must be >= 0");

  std::optional<ReveszProblem> problem;
  try {
    SignSupportPattern pattern(parse_index_set(config, "M", dim), parse_index_set(config, "L", dim));
    const SymmetricSequence r = parse_sequence(require(config, "r"));
    if (r.dim() != dim) throw ConfigError("r has dimension " + std::to_string(r.dim()) + ", expected " + std::to_string(dim));
    std::optional<int> half_width;
    if (config.contains("window_half_width")) half_width = static_cast<int>(get_int(config, "window_half_width"));
    problem = make_revesz_problem(std::move(pattern), r, half_width, TorusGrid(dim, schedule.back()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  spdlog::info("revesz: {} levels, window of {} indices", schedule.size(), problem->window.size());

  const DualityBracket bracket = run_bracket(*problem, schedule, options, common.workers);

  CommandResult out;
  json levels = json::array();
  std::vector<std::vector<json>> rows;
  std::size_t best_alpha = 0;
  std::size_t best_omega = 0;
  for (std::size_t i = 0; i < bracket.levels.size(); ++i) {
    const BracketLevel& l = bracket.levels[i];
    levels.push_back(json{{"G", l.points_per_axis},
                          {"alpha_relaxed", l.alpha_relaxed},
                          {"alpha_certified", l.alpha_certified},
                          {"omega_relaxed", l.omega_relaxed},
                          {"omega_certified", l.omega_certified},
                          {"gap", l.gap},
                          {"best_gap", l.best_gap},
                          {"alpha_deficit", l.alpha_deficit},
                          {"omega_deficit", l.omega_deficit},
                          {"lp_iterations", l.lp_iterations}});
    rows.push_back({l.points_per_axis, l.alpha_relaxed, l.alpha_certified, l.omega_relaxed, l.omega_certified,
                    l.gap, l.best_gap});
    out.level_seconds.push_back(l.seconds);
    if (l.alpha_certified < bracket.levels[best_alpha].alpha_certified) best_alpha = i;
    if (l.omega_certified > bracket.levels[best_omega].omega_certified) best_omega = i;
  }
  out.result = json{{"levels", std::move(levels)},
                    {"alpha_certified", bracket.alpha_certified},
                    {"omega_certified", bracket.omega_certified},
                    {"gap", bracket.gap()},
                    {"weak_duality_tolerance", bracket.tolerance},
                    {"window_size", problem->window.size()},
                    {"witnesses",
                     {{"alpha_f", sequence_to_json(bracket.levels[best_alpha].alpha_witness)},
                      {"omega_t", sequence_to_json(bracket.levels[best_omega].omega_t)},
                      {"omega_h", sequence_to_json(bracket.levels[best_omega].omega_h)}}}};
  out.bounds.push_back(bound("alpha", bracket.alpha_certified, "UPPER", "GRID_CERTIFICATE_SHIFT"));
  out.bounds.push_back(bound("omega", bracket.omega_certified, "LOWER", "GRID_CERTIFICATE_BUMP"));
  out.column_tags = json{{"alpha_relaxed", column_tag("LOWER", "GRID_RELAXATION")},
                         {"alpha_certified", column_tag("UPPER", "GRID_CERTIFICATE_SHIFT")},
                         {"omega_relaxed", column_tag("UPPER", "GRID_RELAXATION")},
                         {"omega_certified", column_tag("LOWER", "GRID_CERTIFICATE_BUMP")}};
  out.csv = csv_table({"G", "alpha_relaxed", "alpha_certified", "omega_relaxed", "omega_certified", "gap", "best_gap"},
                      rows);
  return out;
}

CommandResult run_wiener(const json& config, const Common& common, const SolverOptions& options) {
  check_keys(config, {"command", "seed", "workers", "eps_pd", "L", "N", "R", "G", "search"}, "wiener");
  const int L = static_cast<int>(get_int(config, "L"));
  const int N = static_cast<int>(get_int(config, "N"));
  if (L < 2 || N < 1) throw ConfigError("wiener needs L >= 2 and N >= 1");
  std::vector<std::int64_t> rs = get_int_list(config, "R");
  std::vector<std::int64_t> gs = grid_schedule(config, "G");
  if (rs.size() == 1) rs.resize(gs.size(), rs.front());
  if (gs.size() == 1) gs.resize(rs.size(), gs.front());
  if (rs.size() != gs.size()) throw ConfigError("\"R\" and \"G\" must have equal lengths (or one of them length 1)");
  std::vector<std::pair<int, std::int64_t>> schedule;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i] < static_cast<std::int64_t>(L) * N) throw ConfigError("every R must be >= L*N");
    if (i > 0 && (rs[i] < rs[i - 1] || gs[i] < gs[i - 1])) throw ConfigError("the (R, G) schedule must be nondecreasing");
    schedule.emplace_back(static_cast<int>(rs[i]), gs[i]);
  }

  SearchOptions search;
  search.seed = common.seed;
  search.workers = common.workers;
  if (config.contains("search")) {
    const json& s = config.at("search");
    if (!s.is_object()) throw ConfigError("\"search\" must be an object");
    check_keys(s, {"budget", "restarts", "length_cap", "u_max"}, "wiener.search");
    search.budget = get_int(s, "budget", search.budget);
    search.restarts = static_cast<int>(get_int(s, "restarts", search.restarts));
    search.length_cap = static_cast<int>(get_int(s, "length_cap", search.length_cap));
    search.u_max = get_number(s, "u_max", search.u_max);
    if (search.budget < 0 || search.restarts < 0 || search.length_cap < 0 || !(search.u_max > 0.0)) {
      throw ConfigError("wiener.search values out of range");
    }
  }
  spdlog::info("wiener: L={} N={} with {} levels", L, N, schedule.size());

  const WienerBracket bracket = run_wiener_bracket(L, N, schedule, search, options, common.workers);
  const PdStatus witness_status = is_positive_definite(witness_w(L, N), TorusGrid(1, 64), options.eps_pd);

  CommandResult out;
  json levels = json::array();
  std::vector<std::vector<json>> rows;
  for (const WienerLevel& l : bracket.levels) {
    levels.push_back(json{{"R", l.R},
                          {"G", l.points_per_axis},
                          {"upper", l.upper},
                          {"lp_value", l.lp_value},
                          {"deficit", l.deficit},
                          {"best_upper", l.best_upper},
                          {"lp_iterations", l.lp_iterations}});
    rows.push_back({l.R, l.points_per_axis, l.upper, l.lp_value, l.deficit, l.best_upper, bracket.lower});
    out.level_seconds.push_back(l.seconds);
  }
  out.result = json{{"L", L},
                    {"N", N},
                    {"levels", std::move(levels)},
                    {"lower", bracket.lower},
                    {"upper", bracket.upper},
                    {"width", bracket.width()},
                    {"witness_bound", bracket.witness_bound},
                    {"witness_pd_method", to_string(witness_status.method)},
                    {"witness_pd_status", to_string(witness_status.certified.status)},
                    {"soundness_tolerance", bracket.tolerance},
                    {"witnesses",
                     {{"lower_u", bracket.lower_witness.u_star},
                      {"lower_f", sequence_to_json(bracket.lower_witness.f_star)},
                      {"upper_h", sequence_to_json(bracket.upper_witness)}}}};
  out.bounds.push_back(bound("C(L,N)", bracket.lower, "LOWER", "EXPLICIT_AUTOCORRELATION"));
  out.bounds.push_back(bound("K(L,N)", bracket.upper, "UPPER", "GRID_CERTIFICATE_BUMP"));
  out.bounds.push_back(bound("K(L,N)", bracket.witness_bound, "UPPER", "L1_BOUND"));
  out.column_tags = json{{"upper", column_tag("UPPER", "GRID_CERTIFICATE_BUMP")},
                         {"lp_value", column_tag("LOWER", "GRID_RELAXATION")},
                         {"best_upper", column_tag("UPPER", "GRID_CERTIFICATE_BUMP")},
                         {"lower", column_tag("LOWER", "EXPLICIT_AUTOCORRELATION")}};
  out.csv = csv_table({"R", "G", "upper", "lp_value", "deficit", "best_upper", "lower"}, rows);
  return out;
}

CommandResult run_check_pd(const json& config, const SolverOptions& options) {
  check_keys(config, {"command", "seed", "workers", "eps_pd", "sequence", "G"}, "check-pd");
  const SymmetricSequence h = parse_sequence(require(config, "sequence"));
  const std::int64_t g = get_int(config, "G", 4096);
  if (g < 4) throw ConfigError("G must be >= 4");
  const PdStatus status = is_positive_definite(h, TorusGrid(h.dim(), g), options.eps_pd);
  const CertifiedValue& cv = status.certified;

  CommandResult out;
  out.result = json{{"status", to_string(cv.status)},
                    {"method", to_string(status.method)},
                    {"grid_min", cv.grid_min},
                    {"margin", cv.margin},
                    {"lower_bound", cv.lower_bound()},
                    {"sequence", sequence_to_json(h)}};
  json witness = nullptr;
  if (status.is_refuted()) {
    const double value = fourier_eval(h, cv.argmin);
    witness = json{{"x", cv.argmin}, {"value", value}};
  }
  out.result["witness"] = witness;
  out.bounds.push_back(bound("min h_hat", cv.lower_bound(), "LOWER", to_string(status.method)));
  if (!cv.argmin.empty()) out.bounds.push_back(bound("min h_hat", cv.grid_min, "UPPER", "GRID_VALUE"));
  out.csv = csv_table({"status", "method", "grid_min", "margin", "witness_value"},
                      {{to_string(cv.status), to_string(status.method), cv.grid_min, cv.margin,
                        witness.is_null() ? json(nullptr) : witness.at("value")}});
  return out;
}

CommandResult run_decompose(const json& config, const SolverOptions& options) {
  check_keys(config, {"command", "seed", "workers", "eps_pd", "phi", "window_half_width", "G", "slack_cap"},
             "decompose");
  const SymmetricSequence phi = parse_sequence(require(config, "phi"));
  if (phi.dim() != 1) throw ConfigError("decompose is defined for dim 1 only");
  const int window = static_cast<int>(get_int(config, "window_half_width", phi.support_radius()));
  if (window < phi.support_radius()) throw ConfigError("window_half_width must cover the support of phi");
  const std::int64_t g = get_int(config, "G", 4096);
  if (g < 4) throw ConfigError("G must be >= 4");
  DecomposeOptions opts;
  opts.eps_pd = options.eps_pd;
  opts.lp = options.lp;
  opts.slack_cap = get_number(config, "slack_cap", opts.slack_cap);

  const auto d = decompose_dual(phi, window, TorusGrid(1, g), opts);
  CommandResult out;
  if (!d) {
    out.result = json{{"found", false}};
    out.csv = csv_table({"found", "slack", "h_status", "g_min"}, {{false, nullptr, nullptr, nullptr}});
    return out;
  }
  double g_min = 0.0;
  for (const auto& [n, v] : d->g.entries()) g_min = std::min(g_min, v);
  const bool exact = (d->g + d->h) == phi;
  if (g_min < 0.0 || !exact || !d->h_status.is_certified()) {
    throw SoundnessViolation("decomposition failed verification: g_min=" + std::to_string(g_min) +
                             ", exact=" + std::to_string(exact));
  }
  out.result = json{{"found", true},
                    {"g", sequence_to_json(d->g)},
                    {"h", sequence_to_json(d->h)},
                    {"slack", d->slack},
                    {"h_status", to_string(d->h_status.certified.status)},
                    {"h_method", to_string(d->h_status.method)},
                    {"h_lower_bound", d->h_status.certified.lower_bound()},
                    {"sum_exact", exact}};
  out.bounds.push_back(bound("min h_hat", d->h_status.certified.lower_bound(), "LOWER",
                             to_string(d->h_status.method)));
  out.csv = csv_table({"found", "slack", "h_status", "g_min"},
                      {{true, d->slack, to_string(d->h_status.certified.status), g_min}});
  return out;
}

CommandResult run_parseval(const json& config, const Common& common) {
  check_keys(config, {"command", "seed", "workers", "eps_pd", "trials", "dim", "max_index", "atoms", "tolerance"},
             "parseval-test");
  const std::int64_t trials = get_int(config, "trials", 1000);
  const int dim = static_cast<int>(get_int(config, "dim", 1));
  const int max_index = static_cast<int>(get_int(config, "max_index", 6));
  const int atoms = static_cast<int>(get_int(config, "atoms", 5));
  const double tolerance = get_number(config, "tolerance", 1e-10);
  if (trials < 1 || dim < 1 || max_index < 0 || atoms < 1 || !(tolerance > 0.0)) {
    throw ConfigError("parseval-test values out of range");
  }

  std::mt19937_64 rng(common.seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::uniform_int_distribution<int> coord(-max_index, max_index);

  double worst = 0.0;
  std::int64_t failures = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    std::map<MultiIndex, double> values{{MultiIndex::zero(dim), coeff(rng)}};
    for (int k = 0; k < 2 * max_index + 1; ++k) {
      std::vector<int> c(dim);
      for (auto& x : c) x = coord(rng);
      MultiIndex n = MultiIndex(std::move(c)).canonical();
      values[n] = coeff(rng);
    }
    const SymmetricSequence f(dim, values);
    std::vector<AtomicMeasure::Atom> list;
    for (int a = 0; a < atoms; ++a) {
      std::vector<double> x(dim);
      for (auto& v : x) v = angle(rng);
      list.push_back({std::move(x), weight(rng)});
    }
    const ParsevalResult pr = parseval_check(f, AtomicMeasure(dim, std::move(list)));
    const double scaled = std::abs(pr.lhs - pr.rhs) / (1.0 + std::abs(pr.lhs));
    worst = std::max(worst, scaled);
    if (scaled > tolerance) ++failures;
  }

  CommandResult out;
  out.result = json{{"trials", trials}, {"failures", failures}, {"max_scaled_error", worst}, {"tolerance", tolerance}};
  out.csv = csv_table({"trials", "failures", "max_scaled_error", "tolerance"}, {{trials, failures, worst, tolerance}});
  if (failures > 0) {
    throw SoundnessViolation("parseval identity violated in " + std::to_string(failures) + " of " +
                             std::to_string(trials) + " trials (max scaled error " + std::to_string(worst) + ")");
  }
  return out;
}

}  // namespace

json deterministic_part(const json& report) {
  json copy = report;
  copy.erase("timing");
  return copy;
}

RunOutput execute(const json& config, const Overrides& overrides, const std::filesystem::path& lp_dump_dir) {
  const auto start = std::chrono::steady_clock::now();
  if (!config.is_object() || !config.contains("command") || !config.at("command").is_string()) {
    throw ConfigError("config needs a string \"command\"");
  }
  const std::string command = config.at("command").get<std::string>();
  const Common common = resolve_common(config, overrides);
  std::shared_ptr<LpDumper> dumper;
  const SolverOptions options = solver_options(common, lp_dump_dir, dumper);

  RunOutput output;
  json& report = output.report;
  report["schema_version"] = kReportSchemaVersion;
  report["tool"] = json{{"name", "conedual"}, {"version", kToolVersion}};
  report["command"] = command;
  report["config"] = config;
  report["seed"] = common.seed;
  report["tolerances"] = tolerances_json(options);

  CommandResult result;
  try {
    if (command == "revesz") {
      result = run_revesz(config, common, options);
    } else if (command == "wiener") {
      result = run_wiener(config, common, options);
    } else if (command == "check-pd") {
      result = run_check_pd(config, options);
    } else if (command == "decompose") {
      result = run_decompose(config, options);
    } else if (command == "parseval-test") {
      result = run_parseval(config, common);
    } else {
      throw ConfigError("unknown command \"" + command + "\"");
    }
    report["result"] = std::move(result.result);
    report["bounds"] = std::move(result.bounds);
    report["column_tags"] = std::move(result.column_tags);
    report["error"] = nullptr;
    output.csv = std::move(result.csv);
  } catch (const ConfigError&) {
    throw;
  } catch (const SoundnessViolation& e) {
    spdlog::error("soundness assertion failed: {}", e.what());
    report["result"] = nullptr;
    report["error"] = json{{"kind", "SoundnessViolation"}, {"message", e.what()}};
    output.exit_code = kExitSoundnessFailure;
  } catch (const InternalSolverError& e) {
    spdlog::error("solver failure: {}", e.what());
    report["result"] = nullptr;
    report["error"] = json{{"kind", "InternalSolverError"}, {"message", e.what()}};
    output.exit_code = kExitSoundnessFailure;
  }

  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report["timing"] = json{{"timestamp", utc_timestamp()},
                          {"total_seconds", total},
                          {"workers", common.workers},
                          {"level_seconds", result.level_seconds}};
  return output;
}

}  // namespace conedual::app
