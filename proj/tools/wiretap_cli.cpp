// Command-line front end. Links only the C API in wiretap.h.

#include "wiretap/wiretap.h"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGapLevel = 0.1;

// Carries a status code out of nested helpers to main.
struct Failure : std::runtime_error {
  wt_status status;
  Failure(wt_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(wt_status s) {
  if (s != WT_OK) throw Failure(s, wt_last_error());
}

[[noreturn]] void input_error(const std::string& what) { throw Failure(WT_INPUT_ERROR, what); }

struct LatticeDeleter {
  void operator()(wt_lattice* l) const { wt_lattice_free(l); }
};
struct CodeDeleter {
  void operator()(wt_coset_code* c) const { wt_coset_code_free(c); }
};
using LatticePtr = std::unique_ptr<wt_lattice, LatticeDeleter>;
using CodePtr = std::unique_ptr<wt_coset_code, CodeDeleter>;

LatticePtr load(const std::string& name) {
  wt_lattice* l = nullptr;
  check(wt_lattice_load(name.c_str(), &l));
  return LatticePtr(l);
}

bool is_catalog_name(const std::string& name) {
  for (size_t i = 0; i < wt_catalog_count(); ++i)
    if (name == wt_catalog_name(i)) return true;
  if (name.size() > 1 && name[0] == 'Z')
    return std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; });
  return false;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string num(double v) { return fmt("%.10e", v); }
std::string db(double v) { return fmt("%.4f", v); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

double to_double(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    input_error("cannot parse " + what + ": '" + text + "'");
  }
}

// ---- grids -------------------------------------------------------------

struct GridPoint {
  double tau_db;
  double sigma;
};

double sigma_of_tau_db(double tau_db) {
  const double tau = std::pow(10.0, tau_db / 10.0);
  return 1.0 / std::sqrt(2.0 * kPi * tau);
}

double tau_db_of_sigma(double sigma) { return -10.0 * std::log10(2.0 * kPi * sigma * sigma); }

struct GridOptions {
  std::string tau_db_range;
  std::vector<double> sigmas;

  std::vector<GridPoint> points() const {
    std::vector<GridPoint> grid;
    if (!sigmas.empty()) {
      for (double s : sigmas) {
        if (!(s > 0.0)) input_error("sigma values must be positive");
        grid.push_back({tau_db_of_sigma(s), s});
      }
      return grid;
    }
    const auto parts = split(tau_db_range, ':');
    if (parts.size() != 3) input_error("--tau-db-range expects start:stop:steps");
    const double start = to_double(parts[0], "grid start");
    const double stop = to_double(parts[1], "grid stop");
    const double steps = to_double(parts[2], "grid steps");
    if (steps < 2 || steps != std::floor(steps)) input_error("grid needs at least 2 steps");
    const int n = static_cast<int>(steps);
    for (int i = 0; i < n; ++i) {
      const double x = start + (stop - start) * i / (n - 1);
      grid.push_back({x, sigma_of_tau_db(x)});
    }
    return grid;
  }
};

void add_grid(CLI::App* cmd, GridOptions& grid, const std::string& default_range) {
  grid.tau_db_range = default_range;
  auto* range = cmd->add_option("--tau-db-range", grid.tau_db_range,
                                "Grid start:stop:steps in 10 log10(tau) with tau = 1/(2 pi sigma^2)")
                    ->capture_default_str();
  cmd->add_option("--sigma", grid.sigmas, "Explicit noise standard deviations")
      ->excludes(range)
      ->delimiter(',');
}

// ---- fading model and Monte Carlo options ---------------------------------

struct ModelSpec {
  std::string text = "rayleigh";
  std::vector<double> matrix;  // keeps a deterministic h alive

  wt_fading_model resolve(int n) {
    const auto parts = split(text, ':');
    if (parts.empty()) input_error("empty fading model");
    const std::string& kind = parts[0];
    if (kind == "rayleigh") {
      if (parts.size() > 2) input_error("expected rayleigh[:scale]");
      const double scale = parts.size() == 2 ? to_double(parts[1], "Rayleigh scale") : 1.0;
      return {WT_FADING_RAYLEIGH_DIAGONAL, n, n, scale, nullptr};
    }
    if (kind == "mimo") {
      if (parts.size() > 3) input_error("expected mimo[:m[:std]]");
      const int m = parts.size() >= 2 ? static_cast<int>(to_double(parts[1], "MIMO rows")) : n;
      const double std_dev = parts.size() == 3 ? to_double(parts[2], "MIMO deviation") : 1.0;
      return {WT_FADING_GAUSSIAN_MIMO, m, n, std_dev, nullptr};
    }
    if (kind == "identity") {
      if (parts.size() != 1) input_error("identity takes no parameters");
      matrix.assign(static_cast<size_t>(n) * n, 0.0);
      for (int i = 0; i < n; ++i) matrix[static_cast<size_t>(i) * n + i] = 1.0;
      return {WT_FADING_DETERMINISTIC, n, n, 1.0, matrix.data()};
    }
    if (kind == "file") {
      if (parts.size() != 2) input_error("expected file:<path>");
      // Same text format as lattice files: "m n" then m rows.
      wt_lattice* l = nullptr;
      check(wt_lattice_load(parts[1].c_str(), &l));
      LatticePtr h(l);
      const int m = wt_lattice_dimension(h.get());
      const int cols = wt_lattice_rank(h.get());
      matrix.assign(static_cast<size_t>(m) * cols, 0.0);
      check(wt_lattice_basis(h.get(), matrix.data()));
      return {WT_FADING_DETERMINISTIC, m, cols, 1.0, matrix.data()};
    }
    input_error("unknown fading model '" + kind + "'");
  }
};

struct RunOptions {
  int64_t trials = 10000;
  uint64_t seed = 42;
  int workers = std::max(1u, std::thread::hardware_concurrency());
  double tol = 1e-8;
  std::string estimator = "exact";

  wt_mc_options c_options() const {
    if (trials < 2) input_error("trials must be at least 2");
    wt_mc_options o = wt_mc_options_default();
    o.trials = trials;
    o.seed = seed;
    o.workers = workers;
    o.tol = tol;
    o.estimator = estimator == "prop1" ? WT_ESTIMATOR_PROP1 : WT_ESTIMATOR_EXACT;
    return o;
  }
};

void add_run_options(CLI::App* cmd, RunOptions& run, ModelSpec& model) {
  cmd->add_option("--model", model.text,
                  "Fading: rayleigh[:scale], mimo[:m[:std]], identity, file:<path>")
      ->capture_default_str();
  cmd->add_option("--trials", run.trials, "Monte Carlo trials")->capture_default_str();
  cmd->add_option("--seed", run.seed, "Random seed")->capture_default_str();
  cmd->add_option("--workers", run.workers, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", run.tol, "Absolute tolerance per flatness evaluation")
      ->capture_default_str();
  cmd->add_option("--estimator", run.estimator, "Per-trial flatness evaluation")
      ->check(CLI::IsMember({"exact", "prop1"}))
      ->capture_default_str();
}

// ---- output ----------------------------------------------------------------

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) input_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void flush() { stream().flush(); }

 private:
  std::ofstream file_;
};

struct Curve {
  std::string label;
  std::vector<GridPoint> grid;
  std::vector<wt_mc_estimate> values;
};

void write_curve_rows(std::ostream& out, const Curve& c) {
  for (size_t i = 0; i < c.values.size(); ++i)
    out << db(c.grid[i].tau_db) << ',' << num(c.values[i].mean) << ','
        << num(c.values[i].std_error) << ',' << c.label << '\n';
}

constexpr const char* kCurveHeader = "tau_db,mean,std_error,lattice\n";

// Line plot with a log-scaled y axis, drawn from the same numbers as the CSV.
void write_svg(const std::string& path, const std::vector<Curve>& curves,
               const std::string& title) {
  std::ofstream out(path);
  if (!out) input_error("cannot open SVG file " + path);
  const double width = 640, height = 420, left = 70, right = 130, top = 30, bottom = 50;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& c : curves)
    for (size_t i = 0; i < c.values.size(); ++i) {
      x0 = std::min(x0, c.grid[i].tau_db);
      x1 = std::max(x1, c.grid[i].tau_db);
      if (c.values[i].mean > 0.0) {
        y0 = std::min(y0, std::log10(c.values[i].mean));
        y1 = std::max(y1, std::log10(c.values[i].mean));
      }
    }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 >= y0)) y0 = -1.0, y1 = 0.0;
  y0 = std::floor(y0);
  y1 = std::max(std::ceil(y1), y0 + 1.0);
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
  auto py = [&](double ly) { return top + (y1 - ly) / (y1 - y0) * (height - top - bottom); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                 "#8c564b", "#e377c2"};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left << "\" y=\"18\">" << title << "</text>\n";
  const double step = std::max(1.0, std::ceil((y1 - y0) / 10.0));
  for (double ly = y0; ly <= y1 + 1e-9; ly += step) {
    out << "<line x1=\"" << left << "\" x2=\"" << width - right << "\" y1=\"" << py(ly)
        << "\" y2=\"" << py(ly) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << py(ly) + 4
        << "\" text-anchor=\"end\">1e" << static_cast<int>(ly) << "</text>\n";
  }
  for (int k = 0; k <= 6; ++k) {
    const double x = x0 + (x1 - x0) * k / 6.0;
    out << "<text x=\"" << px(x) << "\" y=\"" << height - bottom + 18
        << "\" text-anchor=\"middle\">" << fmt("%.1f", x) << "</text>\n";
  }
  out << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">10 log10(tau) [dB]</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right
      << "\" height=\"" << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (size_t k = 0; k < curves.size(); ++k) {
    const auto& c = curves[k];
    const char* color = colors[k % 7];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < c.values.size(); ++i)
      if (c.values[i].mean > 0.0)
        out << px(c.grid[i].tau_db) << ',' << py(std::log10(c.values[i].mean)) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << width - right + 10 << "\" y=\"" << top + 16 * (k + 1)
        << "\" fill=\"" << color << "\">" << c.label << "</text>\n";
  }
  out << "</svg>\n";
}

// ---- gap metric -----------------------------------------------------------

// tau_db at which a curve first reaches `level`, interpolating log(mean)
// linearly between grid points.
std::optional<double> crossing(const Curve& c, double level) {
  for (size_t i = 1; i < c.values.size(); ++i) {
    const double a = c.values[i - 1].mean, b = c.values[i].mean;
    if (a > 0.0 && b > 0.0 && a < level && b >= level) {
      const double t = (std::log(level) - std::log(a)) / (std::log(b) - std::log(a));
      return c.grid[i - 1].tau_db + t * (c.grid[i].tau_db - c.grid[i - 1].tau_db);
    }
  }
  return std::nullopt;
}

// Horizontal distance in 10 log10(sigma^2) between the points where two
// curves reach eps = 0.1; positive when `better` needs the smaller sigma^2.
std::optional<double> gap_db(const Curve& better, const Curve& worse) {
  const auto a = crossing(better, kGapLevel);
  const auto b = crossing(worse, kGapLevel);
  if (!a || !b) return std::nullopt;
  return *a - *b;
}

// ---- commands --------------------------------------------------------------

int cmd_catalog_list() {
  for (size_t i = 0; i < wt_catalog_count(); ++i) std::cout << wt_catalog_name(i) << '\n';
  return 0;
}

int cmd_info(const std::vector<std::string>& names, const std::string& ambient_name) {
  std::cout << "lattice,dimension,minimal_norm,kissing,well_rounded,index,volume\n";
  for (const auto& name : names) {
    auto l = load(name);
    const int n = wt_lattice_dimension(l.get());
    LatticePtr ambient;
    if (!ambient_name.empty())
      ambient = load(ambient_name);
    else if (is_catalog_name(name))
      ambient = load("Z" + std::to_string(n));
    wt_summary s{};
    check(wt_lattice_summary(l.get(), ambient.get(), &s));
    std::cout << name << ',' << n << ',' << fmt("%.10g", s.minimal_norm) << ',' << s.kissing
              << ',' << (s.well_rounded ? "Yes" : "No") << ','
              << (s.has_index ? std::to_string(s.index) : std::string("-")) << ','
              << fmt("%.10g", s.volume) << '\n';
  }
  return 0;
}

int cmd_theta(const std::vector<std::string>& names, const std::string& mode,
              const std::vector<double>& taus, const GridOptions& grid, double tol,
              const std::string& out_path) {
  std::vector<double> tau_values = taus;
  if (tau_values.empty())
    for (const auto& p : grid.points()) tau_values.push_back(std::pow(10.0, p.tau_db / 10.0));
  Output out(out_path);
  auto& os = out.stream();
  if (mode == "exact")
    os << "lattice,tau_db,tau,exact,truncation_bound\n";
  else if (mode == "approx")
    os << "lattice,tau_db,tau,approx\n";
  else
    os << "lattice,tau_db,tau,exact,truncation_bound,approx,rel_error,rel_error_excess\n";
  for (const auto& name : names) {
    auto l = load(name);
    for (double tau : tau_values) {
      if (!(tau > 0.0)) input_error("tau must be positive");
      wt_theta_value exact{}, approx{};
      if (mode != "approx") check(wt_theta_exact(l.get(), tau, tol, &exact));
      if (mode != "exact") check(wt_theta_approx(l.get(), tau, &approx));
      os << name << ',' << db(10.0 * std::log10(tau)) << ',' << num(tau);
      if (mode == "exact") {
        os << ',' << num(exact.value) << ',' << num(exact.truncation_bound);
      } else if (mode == "approx") {
        os << ',' << num(approx.value);
      } else {
        const double rel = std::abs(approx.value - exact.value) / exact.value;
        const double excess = std::abs(approx.value - exact.value) / (exact.value - 1.0);
        os << ',' << num(exact.value) << ',' << num(exact.truncation_bound) << ','
           << num(approx.value) << ',' << num(rel) << ',' << num(excess);
      }
      os << '\n';
    }
  }
  return 0;
}

int cmd_flatness(const std::vector<std::string>& names, const GridOptions& grid, double tol,
                 const std::string& out_path) {
  Output out(out_path);
  auto& os = out.stream();
  os << "lattice,tau_db,sigma,epsilon,truncation_bound,representation,clamped\n";
  for (const auto& name : names) {
    auto l = load(name);
    for (const auto& p : grid.points()) {
      wt_flatness_value v{};
      check(wt_flatness(l.get(), p.sigma, tol, &v));
      os << name << ',' << db(p.tau_db) << ',' << num(p.sigma) << ',' << num(v.epsilon) << ','
         << num(v.truncation_bound) << ',' << (v.representation == WT_PRIMAL ? "primal" : "dual")
         << ',' << v.clamped << '\n';
    }
  }
  return 0;
}

std::vector<Curve> run_avg_flatness(const std::vector<std::string>& names,
                                    const std::vector<GridPoint>& grid, ModelSpec& model,
                                    const RunOptions& run, std::optional<double> sigma_s,
                                    Output& out) {
  std::vector<Curve> curves;
  auto& os = out.stream();
  os << kCurveHeader;
  const auto options = run.c_options();
  std::vector<double> sigmas;
  for (const auto& p : grid) sigmas.push_back(p.sigma);
  for (const auto& name : names) {
    auto l = load(name);
    const wt_fading_model m = model.resolve(wt_lattice_dimension(l.get()));
    Curve c{name, grid, std::vector<wt_mc_estimate>(grid.size())};
    if (sigma_s) {
      for (size_t i = 0; i < grid.size(); ++i)
        check(wt_avg_flatness_effective(l.get(), &m, sigmas[i], *sigma_s, &options,
                                        &c.values[i]));
    } else {
      check(wt_avg_flatness_curve(l.get(), &m, sigmas.data(), sigmas.size(), &options,
                                  c.values.data()));
    }
    // Completed curves reach the file even if a later one fails.
    write_curve_rows(os, c);
    out.flush();
    curves.push_back(std::move(c));
  }
  return curves;
}

int cmd_avg_flatness(const std::vector<std::string>& names, const GridOptions& grid,
                     ModelSpec& model, const RunOptions& run, std::optional<double> sigma_s,
                     const std::string& out_path, const std::string& svg_path) {
  Output out(out_path);
  const auto curves = run_avg_flatness(names, grid.points(), model, run, sigma_s, out);
  if (!svg_path.empty()) write_svg(svg_path, curves, "average flatness factor");
  return 0;
}

struct CodeOptions {
  std::string fine = "Z2";
  std::string coarse = "Lambda1";
  std::optional<double> sigma_s;
  std::string encoder = "gaussian";
  std::string shaping;
  double shaping_scale = 4.0;
};

void add_code_options(CLI::App* cmd, CodeOptions& code) {
  cmd->add_option("--fine", code.fine, "Bob's lattice")->capture_default_str();
  cmd->add_option("--coarse", code.coarse, "Eve's lattice, nested in the fine one")
      ->capture_default_str();
}

int cmd_simulate(const CodeOptions& code, const GridOptions& grid, ModelSpec& model,
                 const RunOptions& run, const std::string& out_path) {
  auto fine = load(code.fine);
  auto coarse = load(code.coarse);
  wt_coset_code* raw = nullptr;
  check(wt_coset_code_create(fine.get(), coarse.get(), &raw));
  CodePtr coset(raw);

  LatticePtr shaping;
  wt_encoder encoder{WT_ENCODER_GAUSSIAN, 0.0, nullptr};
  if (code.encoder == "gaussian") {
    encoder.sigma_s = code.sigma_s.value_or(4.0);
  } else {
    if (!code.shaping.empty()) {
      shaping = load(code.shaping);
    } else {
      wt_lattice* s = nullptr;
      check(wt_lattice_scaled(coarse.get(), code.shaping_scale, &s));
      shaping.reset(s);
    }
    encoder = {WT_ENCODER_MOD_SHAPING, 0.0, shaping.get()};
  }

  const auto points = grid.points();
  const wt_fading_model m = model.resolve(wt_lattice_dimension(fine.get()));
  const auto options = run.c_options();
  std::vector<double> sigmas;
  for (const auto& p : points) sigmas.push_back(p.sigma);
  std::vector<wt_mc_estimate> eps(points.size());
  check(wt_avg_flatness_curve(coarse.get(), &m, sigmas.data(), sigmas.size(), &options,
                              eps.data()));

  Output out(out_path);
  auto& os = out.stream();
  os << "tau_db,sigma,success_rate,std_error,avg_eps,avg_eps_std_error,prob_bound\n";
  const int64_t index = wt_coset_code_size(coset.get());
  for (size_t i = 0; i < points.size(); ++i) {
    wt_mc_estimate rate{};
    check(wt_simulate_eve(coset.get(), &m, points[i].sigma, &encoder, &options, &rate));
    double bound = 0.0;
    check(wt_eve_prob_bound(index, eps[i].mean, &bound));
    os << db(points[i].tau_db) << ',' << num(points[i].sigma) << ',' << num(rate.mean) << ','
       << num(rate.std_error) << ',' << num(eps[i].mean) << ',' << num(eps[i].std_error) << ','
       << num(bound) << '\n';
    out.flush();
  }
  return 0;
}

int cmd_bounds(const CodeOptions& code, const GridOptions& grid, ModelSpec& model,
               const RunOptions& run, const std::string& units, const std::string& out_path) {
  auto fine = load(code.fine);
  auto coarse = load(code.coarse);
  wt_coset_code* raw = nullptr;
  check(wt_coset_code_create(fine.get(), coarse.get(), &raw));
  CodePtr coset(raw);
  const wt_fading_model m = model.resolve(wt_lattice_dimension(fine.get()));
  const auto options = run.c_options();
  const double scale = units == "bits" ? 1.0 / std::log(2.0) : 1.0;

  Output out(out_path);
  auto& os = out.stream();
  os << "tau_db,sigma,avg_eps,avg_eps_std_error,prob_bound,mod_lambda_info,"
        "avg_eps_effective,avg_eps_effective_std_error,gaussian_info\n";
  for (const auto& p : grid.points()) {
    wt_bound_report r{};
    check(wt_bound_report_run(coset.get(), &m, p.sigma, code.sigma_s.value_or(0.0), &options,
                              &r));
    os << db(p.tau_db) << ',' << num(p.sigma) << ',' << num(r.avg_eps.mean) << ','
       << num(r.avg_eps.std_error) << ',' << num(r.prob_bound) << ','
       << (r.mod_lambda_valid ? num(r.mod_lambda_info_nats * scale) : "NA") << ',';
    if (r.has_avg_eps_effective)
      os << num(r.avg_eps_effective.mean) << ',' << num(r.avg_eps_effective.std_error) << ','
         << (r.gaussian_valid ? num(r.gaussian_info_nats * scale) : "NA");
    else
      os << "NA,NA,NA";
    os << '\n';
    out.flush();
  }
  return 0;
}

struct FigureSpec {
  std::vector<std::string> lattices;
  // (better, worse) pairs for the gap summary.
  std::vector<std::pair<std::string, std::string>> pairs;
};

FigureSpec figure_spec(const std::string& which) {
  if (which == "fig2") return {{"Lambda1", "Lambda2"}, {{"Lambda1", "Lambda2"}}};
  if (which == "fig3")
    return {{"Pi1", "Pi2", "Omega1", "Omega2", "Omega3"},
            {{"Pi1", "Pi2"}, {"Omega3", "Omega2"}, {"Omega3", "Omega1"}, {"Omega1", "Omega2"}}};
  if (which == "fig4") return {{"Gamma1", "Gamma2"}, {{"Gamma2", "Gamma1"}}};
  input_error("unknown figure " + which);
}

int cmd_figures(const std::string& which, const GridOptions& grid, ModelSpec& model,
                const RunOptions& run, double tol, const std::string& out_path,
                const std::string& svg_path, const std::string& gaps_path) {
  if (which == "fig1") {
    GridOptions g = grid;
    return cmd_theta({"Z2", "D4"}, "both", {}, g, tol, out_path);
  }
  const auto spec = figure_spec(which);
  Output out(out_path);
  const auto curves = run_avg_flatness(spec.lattices, grid.points(), model, run, std::nullopt, out);
  if (!svg_path.empty()) write_svg(svg_path, curves, "average flatness factor (" + which + ")");

  auto find = [&](const std::string& label) -> const Curve& {
    for (const auto& c : curves)
      if (c.label == label) return c;
    throw std::logic_error("missing curve");
  };
  std::ostringstream gaps;
  gaps << "# gap = horizontal offset in 10 log10(sigma^2) where each curve reaches eps = 0.1\n";
  gaps << "better,worse,gap_db\n";
  for (const auto& [better, worse] : spec.pairs) {
    const auto g = gap_db(find(better), find(worse));
    gaps << better << ',' << worse << ',' << (g ? db(*g) : "NA") << '\n';
  }
  if (!gaps_path.empty()) {
    std::ofstream f(gaps_path);
    if (!f) input_error("cannot open gap file " + gaps_path);
    f << gaps.str();
  } else {
    std::cerr << gaps.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice theta series, flatness factors and fading wiretap bounds"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value file; keys are <subcommand>.<option>");
  app.set_version_flag("--version", std::string(wt_version()));

  std::vector<std::string> lattices;
  GridOptions grid;
  ModelSpec model;
  RunOptions avg_run, sim_run, bound_run, fig_run;
  fig_run.estimator = "prop1";
  CodeOptions code;
  std::string out_path, svg_path, gaps_path, ambient, mode = "both", units = "nats", figure;
  std::vector<double> taus;
  double tol = 1e-10;
  std::optional<double> sigma_s;

  auto* catalog_list = app.add_subcommand("catalog-list", "List built-in lattices");

  auto* info = app.add_subcommand("info", "Minimal norm, kissing number, well-roundedness, index");
  info->add_option("--lattice", lattices, "Catalog name or file")->required();
  info->add_option("--ambient", ambient, "Superlattice for the index (default Z^n for catalog names)");

  auto* theta = app.add_subcommand("theta", "Theta series, exact and approximated");
  theta->add_option("--lattice", lattices, "Catalog name or file")->required();
  theta->add_option("--mode", mode)->check(CLI::IsMember({"exact", "approx", "both"}))
      ->capture_default_str();
  theta->add_option("--tau", taus, "Explicit tau values")->delimiter(',');
  theta->add_option("--tau-db-range", grid.tau_db_range, "Grid start:stop:steps in 10 log10(tau)");
  grid.tau_db_range = "-3:7:21";
  theta->add_option("--tol", tol, "Truncation tolerance")->capture_default_str();
  theta->add_option("--out", out_path, "CSV output (default stdout)");

  auto* flatness = app.add_subcommand("flatness", "Flatness factor of a lattice");
  GridOptions flat_grid;
  flatness->add_option("--lattice", lattices, "Catalog name or file")->required();
  add_grid(flatness, flat_grid, "-30:0:31");
  flatness->add_option("--tol", tol, "Absolute tolerance on epsilon")->capture_default_str();
  flatness->add_option("--out", out_path, "CSV output (default stdout)");

  auto* avg = app.add_subcommand("avg-flatness", "Average flatness factor under fading");
  GridOptions avg_grid;
  avg->add_option("--lattice", lattices, "Catalog name or file")->required();
  add_grid(avg, avg_grid, "-30:0:31");
  add_run_options(avg, avg_run, model);
  avg->add_option("--sigma-s", sigma_s, "Shaping deviation: average the effective lattice");
  avg->add_option("--out", out_path, "CSV output (default stdout)");
  avg->add_option("--svg", svg_path, "SVG plot of the CSV");

  auto* simulate = app.add_subcommand("simulate", "Eve's decoding success against the bound");
  GridOptions sim_grid;
  add_code_options(simulate, code);
  add_grid(simulate, sim_grid, "-30:0:10");
  add_run_options(simulate, sim_run, model);
  simulate->add_option("--encoder", code.encoder)
      ->check(CLI::IsMember({"gaussian", "mod"}))
      ->capture_default_str();
  simulate->add_option("--sigma-s", code.sigma_s, "Discrete Gaussian deviation (default 4)");
  simulate->add_option("--shaping", code.shaping, "Shaping lattice for --encoder mod");
  simulate->add_option("--shaping-scale", code.shaping_scale,
                       "Shaping lattice = scale * coarse when --shaping is absent")
      ->capture_default_str();
  simulate->add_option("--out", out_path, "CSV output (default stdout)");

  auto* bounds = app.add_subcommand("bounds", "Probability and information bounds");
  GridOptions bound_grid;
  add_code_options(bounds, code);
  add_grid(bounds, bound_grid, "-30:0:10");
  add_run_options(bounds, bound_run, model);
  bounds->add_option("--sigma-s", code.sigma_s, "Discrete Gaussian deviation");
  bounds->add_option("--units", units)->check(CLI::IsMember({"nats", "bits"}))
      ->capture_default_str();
  bounds->add_option("--out", out_path, "CSV output (default stdout)");

  auto* figures = app.add_subcommand("figures", "Figure presets");
  GridOptions fig_grid;
  figures->add_option("figure", figure, "fig1, fig2, fig3 or fig4")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4"}));
  add_grid(figures, fig_grid, "-30:0:31");
  add_run_options(figures, fig_run, model);
  figures->add_option("--out", out_path, "CSV output (default stdout)");
  figures->add_option("--svg", svg_path, "SVG plot of the CSV");
  figures->add_option("--gaps", gaps_path, "CSV of dB gaps (default stderr)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code_ = app.exit(e);
    return code_ == 0 ? 0 : WT_INPUT_ERROR;
  }
  try {
    if (catalog_list->parsed()) return cmd_catalog_list();
    if (info->parsed()) return cmd_info(lattices, ambient);
    if (theta->parsed()) return cmd_theta(lattices, mode, taus, grid, tol, out_path);
    if (flatness->parsed()) return cmd_flatness(lattices, flat_grid, tol, out_path);
    if (avg->parsed())
      return cmd_avg_flatness(lattices, avg_grid, model, avg_run, sigma_s, out_path, svg_path);
    if (simulate->parsed()) return cmd_simulate(code, sim_grid, model, sim_run, out_path);
    if (bounds->parsed()) return cmd_bounds(code, bound_grid, model, bound_run, units, out_path);
    if (figures->parsed()) {
      GridOptions g = fig_grid;
      if (figure == "fig1" && figures->count("--tau-db-range") == 0) g.tau_db_range = "-3:7:21";
      return cmd_figures(figure, g, model, fig_run, tol, out_path, svg_path, gaps_path);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.what() << '\n';
    return f.status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return WT_INTERNAL_ERROR;
  }
  return 0;
}
