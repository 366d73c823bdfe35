#include "rigidity/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "rigidity/cones.hpp"
#include "rigidity/conjugacy.hpp"
#include "rigidity/periodic.hpp"
#include "rigidity/symbolic.hpp"
#include "rigidity/transfer.hpp"

namespace rigidity {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Tracks written files so a failed run leaves nothing behind, and collects
// the CSV schemas for the summary's schema block.
class OutputTracker {
 public:
  explicit OutputTracker(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
  }

  void write_csv(const std::string& name,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<std::string>>& rows) {
    for (const auto& row : rows) {
      if (row.size() != columns.size()) {
        throw std::runtime_error("csv schema check failed for " + name);
      }
    }
    std::ofstream out = open(name);
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << (i ? "," : "") << columns[i];
    }
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "") << row[i];
      }
      out << "\n";
    }
    schema_[name] = columns;
  }

  void write_json(const std::string& name, const json& j) {
    open(name) << j.dump(2) << "\n";
  }

  void write_log(const std::vector<std::string>& lines) {
    std::ofstream out = open("run.log");
    for (const auto& l : lines) out << l << "\n";
  }

  /// summary.json is the commit marker: written after everything else, it
  /// records the schema of every table.
  void write_summary(json summary) {
    json schema = json::object();
    for (const auto& [name, cols] : schema_) schema[name] = cols;
    summary["schema"] = schema;
    write_json("summary.json", summary);
  }

  void remove_all_written() {
    for (const auto& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

  const fs::path& dir() const { return dir_; }

 private:
  std::ofstream open(const std::string& name) {
    fs::path p = dir_ / name;
    written_.push_back(p);
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot open output file " + p.string());
    return out;
  }

  fs::path dir_;
  std::vector<fs::path> written_;
  std::map<std::string, std::vector<std::string>> schema_;
};

// Work items land in preassigned slots, so the outputs do not depend on the
// execution order.
void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  const int workers = std::min(threads, count);
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          body(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

RealFn observable_from_spec(const json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "coordinate") {
    return [](double x) { return x; };
  }
  const double k = spec.value("k", 1);
  if (kind == "sin") {
    return [k](double x) { return std::sin(2.0 * std::numbers::pi * k * x); };
  }
  if (kind == "cos") {
    return [k](double x) { return std::cos(2.0 * std::numbers::pi * k * x); };
  }
  throw std::invalid_argument("unknown observable kind '" + kind + "'");
}

// ---- validation -------------------------------------------------------

void validate_map_spec(const json& spec, std::vector<Violation>& out,
                       const std::string& where) {
  if (!spec.is_object() || !spec.contains("family")) {
    out.push_back({"bad_config", where + ": map spec needs a family"});
    return;
  }
  const std::string family = spec["family"].get<std::string>();
  if (family == "trig") {
    const int d = spec.value("degree", 0);
    if (d < 2) {
      out.push_back({"bad_value", where + ": degree must be >= 2"});
      return;
    }
    double abs_sum = 0.0;
    for (double c : spec.value("coeffs", std::vector<double>{})) {
      abs_sum += std::abs(c);
    }
    if (abs_sum >= d - 1.0) {
      out.push_back(
          {"not_expanding",
           where + ": sum |c_k| >= degree - 1, map is not uniformly expanding"});
    }
  } else if (family == "conjugated") {
    if (std::abs(spec.value("a", 1.0)) >= 1.0) {
      out.push_back({"bad_value", where + ": need |a| < 1"});
    }
    if (spec.contains("base")) {
      validate_map_spec(spec["base"], out, where + ".base");
    } else {
      out.push_back({"bad_config", where + ": conjugated spec needs a base"});
    }
  } else {
    out.push_back({"bad_config", where + ": unknown family '" + family + "'"});
  }
}

int spec_degree(const json& spec) {
  if (spec.value("family", "") == "conjugated") {
    return spec_degree(spec.at("base"));
  }
  return spec.value("degree", 0);
}

void check_enumeration(int base, int n, std::vector<Violation>& out,
                       const std::string& where) {
  const double total = std::pow(static_cast<double>(base), n);
  if (!(total <= static_cast<double>(1 << 24))) {
    out.push_back({"enumeration_budget",
                   where + ": " + std::to_string(base) + "^" +
                       std::to_string(n) + " exceeds 2^24"});
  }
}

void validate_grid(const json& config, int minimum,
                   std::vector<Violation>& out) {
  const int g = config.value("grid", minimum);
  if (g < minimum) {
    out.push_back(
        {"grid_too_small", "grid must be >= " + std::to_string(minimum)});
  }
}

std::vector<Violation> validate_one(const json& config) {
  std::vector<Violation> out;
  const std::string kind = config.value("experiment", "");
  if (kind == "density") {
    if (!config.contains("map")) {
      out.push_back({"bad_config", "density: missing map"});
    } else {
      validate_map_spec(config["map"], out, "map");
    }
    validate_grid(config, 256, out);
    if (config.value("tol", 1e-12) < 1e-13) {
      out.push_back({"bad_value", "tol must be >= 1e-13"});
    }
  } else if (kind == "periodic") {
    if (!config.contains("map")) {
      out.push_back({"bad_config", "periodic: missing map"});
      return out;
    }
    validate_map_spec(config["map"], out, "map");
    const int N = config.value("N", 0);
    if (N < 1) out.push_back({"bad_value", "periodic: N must be >= 1"});
    if (out.empty()) check_enumeration(spec_degree(config["map"]), N, out, "N");
  } else if (kind == "equidist") {
    if (!config.contains("map")) {
      out.push_back({"bad_config", "equidist: missing map"});
      return out;
    }
    validate_map_spec(config["map"], out, "map");
    const int n_min = config.value("n_min", 1);
    const int n_max = config.value("n_max", 0);
    if (n_min < 1 || n_max < n_min + 3) {
      out.push_back({"bad_value",
                     "equidist: need n_min >= 1 and at least 4 values of N"});
    }
    validate_grid(config, 256, out);
    if (!config.contains("observable")) {
      out.push_back({"bad_config", "equidist: missing observable"});
    }
    if (out.empty()) {
      check_enumeration(spec_degree(config["map"]), n_max, out, "n_max");
    }
  } else if (kind == "conjugacy") {
    if (!config.contains("f") || !config.contains("g")) {
      out.push_back({"bad_config", "conjugacy: missing f or g"});
      return out;
    }
    validate_map_spec(config["f"], out, "f");
    validate_map_spec(config["g"], out, "g");
    if (out.empty() && spec_degree(config["f"]) != spec_degree(config["g"])) {
      out.push_back({"degree_mismatch", "conjugacy: degrees of f and g differ"});
    }
    const int n_min = config.value("n_min", 1);
    const int n_max = config.value("n_max", 0);
    if (n_min < 1 || n_max < n_min) {
      out.push_back({"bad_value", "conjugacy: bad N range"});
    }
    validate_grid(config, 1 << 10, out);
    if (out.empty()) {
      check_enumeration(spec_degree(config["f"]), n_max, out, "n_max");
    }
  } else if (kind == "cones") {
    const double theta = config.value("theta", 0.0);
    const double xi = config.value("xi", 0.0);
    if (!(theta > 0.0 && theta < xi && xi < 1.0)) {
      out.push_back({"bad_value", "cones: need 0 < theta < xi < 1"});
    }
    if (config.value("M", 0.0) < 0.0) {
      out.push_back({"bad_value", "cones: M must be >= 0"});
    }
  } else if (kind == "shift-exact") {
    const int s = config.value("s", 0);
    if (s < 2) out.push_back({"bad_value", "shift-exact: s must be >= 2"});
    int max_depth = 1;
    for (const char* key : {"psi", "phi"}) {
      if (!config.contains(key)) {
        out.push_back(
            {"bad_config", std::string("shift-exact: missing ") + key});
        continue;
      }
      const json& c = config[key];
      if (c.value("s", -1) != s) {
        out.push_back({"bad_value",
                       std::string("shift-exact: alphabet mismatch in ") + key});
      }
      max_depth = std::max(max_depth, c.value("depth", 1));
    }
    if (config.contains("psi") && config["psi"].value("depth", 1) != 1) {
      out.push_back({"bad_value", "shift-exact: psi must have depth 1"});
    }
    const int n_min = config.value("n_min", 1);
    const int n_max = config.value("n_max", 0);
    if (n_min < max_depth || n_max < n_min) {
      out.push_back({"bad_value", "shift-exact: bad n range"});
    }
    if (out.empty() && s >= 2) check_enumeration(s, n_max, out, "n_max");
  } else if (kind == "suite") {
    if (!config.contains("items") || !config["items"].is_array() ||
        config["items"].empty()) {
      out.push_back({"bad_config", "suite: needs a nonempty items array"});
      return out;
    }
    int i = 0;
    for (const auto& item : config["items"]) {
      for (auto v : validate_config(item)) {
        v.message = "items[" + std::to_string(i) + "] " + v.message;
        out.push_back(std::move(v));
      }
      ++i;
    }
  } else {
    out.push_back({"bad_config", "unknown experiment kind '" + kind + "'"});
  }
  return out;
}

// ---- runners: each returns (summary, exit code) -------------------------

struct RunnerResult {
  json summary;
  int code = 0;
};

RunnerResult run_density(const json& config, OutputTracker& out,
                         std::vector<std::string>& log) {
  const CircleMap f = map_from_spec(config.at("map"));
  const int grid = config.value("grid", 1 << 12);
  const double tol = config.value("tol", 1e-12);
  const double band_C = config.value("band_C", 5.0);

  const DensityResult res = invariant_density(f, grid, tol);
  const GridFunction I = cdf(res.density);
  const double P = pressure(f, neg_log_deriv(f), grid, tol);

  std::vector<std::vector<std::string>> rho_rows, cdf_rows;
  for (int i = 0; i < grid; ++i) {
    rho_rows.push_back(
        {fmt(res.density.grid.node(i)), fmt(res.density.grid.values()[i])});
    cdf_rows.push_back({fmt(I.node(i)), fmt(I.values()[i])});
  }
  out.write_csv("density.csv", {"node", "rho"}, rho_rows);
  out.write_csv("cdf.csv", {"node", "I"}, cdf_rows);
  log.push_back("density: iterations=" + std::to_string(res.iterations));
  log.push_back("density: pressure(psi_f)=" + fmt(P));
  if (!res.density.within_band(band_C)) {
    log.push_back("density: band violation, values leave [1/C, C] for C=" +
                  fmt(band_C));
  }

  json summary;
  summary["experiment"] = "density";
  summary["iterations"] = res.iterations;
  summary["mass"] = trapezoid_integral(res.density.grid);
  summary["min_rho"] = res.density.min_value();
  summary["max_rho"] = res.density.max_value();
  summary["band_C"] = band_C;
  summary["band_ok"] = res.density.within_band(band_C);
  summary["pressure_psi_f"] = P;
  summary["holder_quotient_alpha_half"] =
      holder_quotient_estimate(res.density.grid, 0.5);
  return {summary, 0};
}

RunnerResult run_periodic(const json& config, OutputTracker& out,
                          std::vector<std::string>& log) {
  const CircleMap f = map_from_spec(config.at("map"));
  const int N = config.at("N").get<int>();
  const BowenMeasure mu = bowen_measure(f, neg_log_deriv(f), N);

  std::vector<std::vector<std::string>> rows;
  for (Eigen::Index i = 0; i < mu.atoms.size(); ++i) {
    std::string word;
    for (int c : word_from_index(mu.word_indices[i], mu.degree, mu.period)) {
      word.push_back(static_cast<char>('0' + c));
    }
    rows.push_back(
        {word, fmt(mu.atoms[i]), fmt(mu.birkhoff[i]), fmt(mu.weights[i])});
  }
  out.write_csv("bowen.csv", {"word", "point", "birkhoff", "weight"}, rows);

  const double D = partition_bound_check(f, neg_log_deriv(f), N);
  log.push_back("periodic: N=" + std::to_string(N) +
                " atoms=" + std::to_string(mu.atoms.size()));
  json summary;
  summary["experiment"] = "periodic";
  summary["N"] = N;
  summary["atom_count"] = static_cast<int>(mu.atoms.size());
  summary["Z"] = mu.Z;
  summary["partition_bound_D"] = D;
  return {summary, 0};
}

RunnerResult run_equidist(const json& config, OutputTracker& out,
                          std::vector<std::string>& log, int threads) {
  const CircleMap f = map_from_spec(config.at("map"));
  const RealFn phi = observable_from_spec(config.at("observable"));
  const int n_min = config.at("n_min").get<int>();
  const int n_max = config.at("n_max").get<int>();
  const int grid = config.value("grid", 1 << 13);

  const Density rho = invariant_density(f, grid, 1e-12).density;
  const double exact = integrate_product(phi, rho.grid);

  const int count = n_max - n_min + 1;
  std::vector<double> errors(count);
  parallel_for(count, threads, [&](int i) {
    const BowenMeasure mu = bowen_measure(f, neg_log_deriv(f), n_min + i);
    errors[i] = std::abs(integrate_discrete(mu, phi) - exact);
  });

  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<int, double>> points;
  for (int i = 0; i < count; ++i) {
    rows.push_back({std::to_string(n_min + i), fmt(errors[i])});
    points.push_back({n_min + i, errors[i]});
    log.push_back("equidist: N=" + std::to_string(n_min + i) +
                  " error=" + fmt(errors[i]));
  }
  out.write_csv("equidist.csv", {"N", "error"}, rows);

  const RateFit fit = fit_rate(points);
  json summary;
  summary["experiment"] = "equidist";
  summary["integral"] = exact;
  summary["fit"] = {{"K", fit.K},
                    {"lambda", fit.lambda},
                    {"r2", fit.r2},
                    {"n_lo", fit.n_range.first},
                    {"n_hi", fit.n_range.second},
                    {"non_decaying", fit.non_decaying}};
  return {summary, 0};
}

RunnerResult run_conjugacy(const json& config, OutputTracker& out,
                           std::vector<std::string>& log, int threads) {
  const CircleMap f = map_from_spec(config.at("f"));
  const CircleMap g = map_from_spec(config.at("g"));
  const int n_min = config.at("n_min").get<int>();
  const int n_max = config.at("n_max").get<int>();
  const int grid = config.value("grid", 1 << 14);
  const int depth = config.value("itinerary_depth", 40);
  const int eval_grid = config.value("eval_grid", 1 << 12);

  const Density rho_f = invariant_density(f, grid, 1e-12).density;
  const Density rho_g = invariant_density(g, grid, 1e-12).density;
  const GridFunction If = cdf(rho_f);
  const GridFunction Ig = cdf(rho_g);
  const ConjugacyGrid h = build_hN(rho_f, rho_g);
  const MapEvaluators fN = conjugated_map(g, h);

  const RealFn h_top = [&](double x) { return conjugacy_point(f, g, x, depth); };
  const RealFn h_smooth = [&h](double x) { return h.value(x); };
  const double c0_h = c0_distance(h_top, h_smooth, eval_grid);
  const double c1_f = c1_distance(f, fN, eval_grid);
  log.push_back("conjugacy: c0(h, h_N)=" + fmt(c0_h));
  log.push_back("conjugacy: c1(f, f_N)=" + fmt(c1_f));

  const int count = n_max - n_min + 1;
  std::vector<double> err_f(count), err_g(count), defects(count);
  parallel_for(count, threads, [&](int i) {
    const int N = n_min + i;
    err_f[i] = cdf_error(bowen_measure(f, neg_log_deriv(f), N), If, eval_grid);
    err_g[i] = cdf_error(bowen_measure(g, neg_log_deriv(g), N), Ig, eval_grid);
    defects[i] = periodic_data_defect(f, g, N);
  });

  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<int, double>> points_f, points_g;
  double max_defect = 0.0;
  for (int i = 0; i < count; ++i) {
    const int N = n_min + i;
    rows.push_back({std::to_string(N), fmt(err_f[i]), fmt(err_g[i]), fmt(c0_h),
                    fmt(c1_f), fmt(defects[i])});
    points_f.push_back({N, err_f[i]});
    points_g.push_back({N, err_g[i]});
    max_defect = std::max(max_defect, defects[i]);
    log.push_back("conjugacy: N=" + std::to_string(N) + " cdf_error_f=" +
                  fmt(err_f[i]) + " defect=" + fmt(defects[i]));
  }
  out.write_csv("conjugacy.csv",
                {"N", "cdf_error_f", "cdf_error_g", "c0_h", "c1_f", "defect"},
                rows);

  json summary;
  summary["experiment"] = "conjugacy";
  summary["c0_h"] = c0_h;
  summary["c1_f"] = c1_f;
  summary["max_defect"] = max_defect;
  if (count >= 4) {
    const RateFit ff = fit_rate(points_f);
    const RateFit fg = fit_rate(points_g);
    summary["fit_cdf_error_f"] = {
        {"K", ff.K}, {"lambda", ff.lambda}, {"r2", ff.r2}};
    summary["fit_cdf_error_g"] = {
        {"K", fg.K}, {"lambda", fg.lambda}, {"r2", fg.r2}};
  }
  return {summary, 0};
}

RunnerResult run_cones(const json& config, OutputTracker& out,
                       std::vector<std::string>& log) {
  const double theta = config.at("theta").get<double>();
  const double xi = config.at("xi").get<double>();
  const double M = config.at("M").get<double>();
  const ContractionCertificate cert = contraction_certificate(theta, M, xi);
  out.write_json("certificate.json", certificate_to_json(cert));
  log.push_back("cones: Delta=" + fmt(cert.Delta) + " tau=" + fmt(cert.tau));
  json summary;
  summary["experiment"] = "cones";
  summary["certificate"] = certificate_to_json(cert);
  return {summary, 0};
}

RunnerResult run_shift_exact(const json& config, OutputTracker& out,
                             std::vector<std::string>& log) {
  const CylinderFunction psi = cylinder_from_json(config.at("psi"));
  const CylinderFunction phi = cylinder_from_json(config.at("phi"));
  const int n_min = config.at("n_min").get<int>();
  const int n_max = config.at("n_max").get<int>();

  const EquilibriumData eq = equilibrium_data(psi);
  std::vector<std::vector<std::string>> rows;
  double worst_rel = 0.0;
  double D = 1.0;
  for (int n = n_min; n <= n_max; ++n) {
    const PeriodicSums ps = periodic_sum(psi, phi, n);
    const double cds = cylinder_decomposition_sum(psi, phi, n);
    const double err = shift_equidistribution_error(psi, phi, n);
    const double scale =
        std::max({std::abs(ps.weighted), std::abs(cds), 1e-300});
    worst_rel = std::max(worst_rel, std::abs(ps.weighted - cds) / scale);
    const double ratio = ps.partition * std::exp(-n * eq.pressure);
    D = std::max({D, ratio, 1.0 / ratio});
    rows.push_back({std::to_string(n), fmt(ps.weighted), fmt(cds),
                    fmt(ps.partition), fmt(err)});
    log.push_back("shift-exact: n=" + std::to_string(n) +
                  " Z_n=" + fmt(ps.partition));
  }
  out.write_csv("shift.csv",
                {"n", "periodic_sum", "cylinder_sum", "Z_n", "equidist_error"},
                rows);
  json summary;
  summary["experiment"] = "shift-exact";
  summary["pressure"] = eq.pressure;
  summary["max_identity_rel_deviation"] = worst_rel;
  summary["partition_bound_D"] = D;
  return {summary, 0};
}

int run_validated(const json& config, const fs::path& out_dir, int threads);

RunnerResult run_suite(const json& config, OutputTracker& out,
                       std::vector<std::string>& log, int threads) {
  json statuses = json::array();
  int worst = 0;
  int i = 0;
  for (const auto& item : config.at("items")) {
    const fs::path sub = out.dir() / ("item_" + std::to_string(i));
    const int code = run_validated(item, sub, threads);
    statuses.push_back({{"item", i},
                        {"experiment", item.value("experiment", "?")},
                        {"exit_code", code}});
    log.push_back("suite: item " + std::to_string(i) + " -> " +
                  std::to_string(code));
    worst = std::max(worst, code);
    ++i;
  }
  json summary;
  summary["experiment"] = "suite";
  summary["items"] = statuses;
  summary["exit_code"] = worst;
  return {summary, worst};
}

int run_validated(const json& config, const fs::path& out_dir, int threads) {
  OutputTracker out(out_dir);
  std::vector<std::string> log;
  log.push_back("config: " + config.dump());
  try {
    RunnerResult res;
    const std::string kind = config.value("experiment", "");
    if (kind == "density") {
      res = run_density(config, out, log);
    } else if (kind == "periodic") {
      res = run_periodic(config, out, log);
    } else if (kind == "equidist") {
      res = run_equidist(config, out, log, threads);
    } else if (kind == "conjugacy") {
      res = run_conjugacy(config, out, log, threads);
    } else if (kind == "cones") {
      res = run_cones(config, out, log);
    } else if (kind == "shift-exact") {
      res = run_shift_exact(config, out, log);
    } else if (kind == "suite") {
      res = run_suite(config, out, log, threads);
    } else {
      return 2;
    }
    out.write_log(log);
    out.write_summary(res.summary);
    return res.code;
  } catch (const std::invalid_argument&) {
    out.remove_all_written();
    return 2;
  } catch (const std::exception&) {
    out.remove_all_written();
    return 3;
  }
}

}  // namespace

std::vector<Violation> validate_config(const json& config) {
  try {
    return validate_one(config);
  } catch (const std::exception& e) {
    return {{"bad_config", e.what()}};
  }
}

int run_experiment(const json& config, const fs::path& out_dir, int threads) {
  const auto violations = validate_config(config);
  if (!violations.empty()) return 2;
  return run_validated(config, out_dir, threads);
}

}  // namespace rigidity
