#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fickit/analytic/extreme_value.hpp"
#include "fickit/analytic/landscape.hpp"
#include "fickit/cli/config.hpp"
#include "fickit/cli/csv.hpp"
#include "fickit/criteria/closed_form.hpp"
#include "fickit/criteria/complexity.hpp"
#include "fickit/criteria/lookup_table.hpp"
#include "fickit/error.hpp"
#include "fickit/information.hpp"
#include "fickit/models/basic.hpp"
#include "fickit/models/fourier.hpp"
#include "fickit/models/landscape_models.hpp"
#include "fickit/monte_carlo.hpp"

namespace fickit::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kOracleFailure = 3 };

inline void write_metadata(CsvDocument& doc, const ExperimentConfig& c) {
  doc.meta("tool_version", kToolVersion);
  doc.meta("experiment", c.experiment);
  doc.meta("seed", std::to_string(c.seed));
  doc.meta("replicates", std::to_string(c.replicates));
  doc.meta("N", std::to_string(c.sample_size));
}

inline std::filesystem::path prepare_output(const ExperimentConfig& c) {
  std::filesystem::path dir(c.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw InvalidArgument("cannot create output directory '" + c.output_dir + "'");
  return dir;
}

// ---------------------------------------------------------------------------
// Neutrino experiment
// ---------------------------------------------------------------------------

/// The observed dataset of the neutrino experiment for (N, seed).
inline Dataset neutrino_data(std::size_t n, std::uint64_t seed) {
  const FittedModel truth = models::neutrino_truth(n);
  RngStream rng(derive_seed(seed, "data"));
  return truth.sample(n, rng);
}

inline ModelFamily fourier_family(const std::string& algorithm, std::size_t nesting, std::size_t n) {
  if (algorithm == "sequential") return models::sequential_fourier_family(nesting, n);
  if (algorithm == "greedy") return models::greedy_fourier_family(nesting, n);
  throw InvalidArgument("unknown algorithm '" + algorithm + "'");
}

struct SweepRow {
  std::string algorithm;
  std::size_t n = 0;
  double h_fit = NAN;
  double k_aic = NAN;
  double k_bic = NAN;
  std::optional<MonteCarloEstimate> k_fic;
  std::optional<MonteCarloEstimate> k_true;
  std::optional<double> k_piecewise;
  double k_aic_naive = NAN;
  std::string error;
  std::vector<int> selected;            // Fourier indices of the fit to the observed data
  std::vector<double> coefficients;     // matching fitted coefficients

  bool ok() const { return error.empty(); }
  double fic() const { return h_fit + k_fic->value; }
  double aic() const { return h_fit + k_aic; }
  double bic() const { return h_fit + k_bic; }
};

struct SweepSelection {
  std::string algorithm;
  std::optional<std::size_t> fic_n, aic_n, bic_n, true_n;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepSelection> selections;
};

struct SweepOptions {
  std::size_t sample_size = 100;
  std::size_t nesting_min = 0;
  std::size_t nesting_max = 10;
  std::vector<std::string> algorithms{"sequential", "greedy"};
  std::size_t replicates = 1000;
  std::uint64_t seed = kDefaultSeed;
  bool truth_known = true;
  bool compute_fic = true;
  criteria::ComplexityTable* cache = nullptr;
};

inline SweepOptions sweep_options(const ExperimentConfig& c) {
  SweepOptions o;
  o.sample_size = c.sample_size;
  o.nesting_min = c.nesting_min;
  o.nesting_max = c.nesting_max;
  o.algorithms = c.algorithms;
  o.replicates = c.replicates;
  o.seed = c.seed;
  o.truth_known = c.truth_known;
  return o;
}

/// Fits every (algorithm, n) cell to the observed data and estimates its
/// complexities. FIC and true complexities use fixed seeds across n, so
/// neighbouring cells share random numbers and their differences are smooth.
inline SweepResult run_sweep(const SweepOptions& o, const Dataset& data) {
  const std::size_t n_obs = o.sample_size;
  if (data.size() != n_obs) throw InvalidArgument("sweep data must have N observations");
  const FittedModel truth = models::neutrino_truth(n_obs);
  const std::uint64_t fic_seed = derive_seed(o.seed, "fic");
  const std::uint64_t true_seed = derive_seed(o.seed, "true");
  const double log_n = std::log(static_cast<double>(n_obs));

  SweepResult result;
  for (const auto& alg : o.algorithms) {
    for (std::size_t n = o.nesting_min; n <= o.nesting_max; ++n) {
      SweepRow row;
      row.algorithm = alg;
      row.n = n;
      try {
        const ModelFamily family = fourier_family(alg, n, n_obs);
        const FittedModel fitted = family.fit(data);
        row.h_fit = shannon_information(data, fitted);
        row.k_aic = static_cast<double>(family.dimension());
        row.k_bic = 0.5 * row.k_aic * log_n;
        row.k_aic_naive = static_cast<double>(family.naive_dimension());
        row.selected.assign(fitted.params().tags().begin(), fitted.params().tags().end());
        row.coefficients.assign(fitted.params().coordinates().begin(), fitted.params().coordinates().end());
        if (alg == "greedy")
          row.k_piecewise = models::greedy_piecewise_complexity(n, n_obs, models::coefficients_of(fitted.params(), n_obs));
        if (o.compute_fic) {
          row.k_fic = o.cache ? criteria::cached_fic_complexity(*o.cache, family, fitted, n_obs, o.replicates, fic_seed)
                              : criteria::fic_complexity(family, fitted, n_obs, o.replicates, fic_seed);
        }
        if (o.truth_known) row.k_true = criteria::true_complexity_mc(truth, family, n_obs, o.replicates, true_seed);
      } catch (const Error& e) {
        row.error = e.what();
      }
      result.rows.push_back(std::move(row));
    }

    SweepSelection sel;
    sel.algorithm = alg;
    auto pick = [&](auto&& value, bool available) -> std::optional<std::size_t> {
      if (!available) return std::nullopt;
      std::optional<std::size_t> best;
      double best_v = 0.0;
      for (const auto& r : result.rows) {
        if (r.algorithm != alg || !r.ok()) continue;
        const double v = value(r);
        if (!best || v < best_v) {
          best = r.n;
          best_v = v;
        }
      }
      return best;
    };
    sel.fic_n = pick([](const SweepRow& r) { return r.fic(); }, o.compute_fic);
    sel.aic_n = pick([](const SweepRow& r) { return r.aic(); }, true);
    sel.bic_n = pick([](const SweepRow& r) { return r.bic(); }, true);
    sel.true_n = pick([](const SweepRow& r) { return r.h_fit + r.k_true->value; }, o.truth_known);
    result.selections.push_back(sel);
  }
  return result;
}

inline void require_neutrino(const ExperimentConfig& c, std::string_view command) {
  if (c.experiment != "neutrino_sweep")
    throw InvalidArgument(std::string(command) + " needs experiment = neutrino_sweep (config has '" + c.experiment +
                          "')");
  models::require_even(c.sample_size);
}

inline CsvDocument coefficient_table(const ExperimentConfig& c, const Dataset& data,
                                     const std::vector<int>& selected) {
  const auto truth = models::coefficients_of(models::neutrino_truth(c.sample_size).params(), c.sample_size);
  const auto observed = models::fourier_transform(data);
  CsvDocument doc;
  write_metadata(doc, c);
  doc.header({"index", "true_coefficient", "fitted_coefficient", "selected"});
  for (int i = truth.min_index(); i <= truth.max_index(); ++i) {
    const bool is_selected = std::find(selected.begin(), selected.end(), i) != selected.end();
    doc.row({cell(i), cell(truth.at(i)), cell(is_selected ? observed.at(i) : 0.0), cell(is_selected)});
  }
  return doc;
}

/// data.csv (j, t, mu_true, x) and coefficients.csv. In coefficients.csv the
/// fitted column holds the modes the greedy algorithm keeps at nesting_max.
inline void cmd_simulate(const ExperimentConfig& c, std::ostream& log) {
  require_neutrino(c, "simulate");
  const auto dir = prepare_output(c);
  const std::size_t n = c.sample_size;
  const Dataset x = neutrino_data(n, c.seed);
  const std::vector<double> mu = models::neutrino_mean(n);

  CsvDocument data;
  write_metadata(data, c);
  data.header({"j", "t", "mu_true", "x"});
  for (std::size_t j = 1; j <= n; ++j)
    data.row({cell(j), cell(static_cast<double>(j) / static_cast<double>(n)), cell(mu[j - 1]), cell(x[j - 1])});

  const std::size_t nesting = std::min(c.nesting_max, n - 1);
  const auto fitted = models::greedy_fourier_family(nesting, n).fit(x);
  const std::vector<int> selected(fitted.params().tags().begin(), fitted.params().tags().end());
  const CsvDocument coefs = coefficient_table(c, x, selected);

  data.save(dir / "data.csv");
  coefs.save(dir / "coefficients.csv");
  log << "wrote " << (dir / "data.csv").string() << " and " << (dir / "coefficients.csv").string() << "\n";
}

inline void cmd_sweep(const ExperimentConfig& c, std::ostream& log) {
  require_neutrino(c, "sweep");
  const auto dir = prepare_output(c);
  const Dataset x = neutrino_data(c.sample_size, c.seed);
  SweepOptions o = sweep_options(c);
  std::unique_ptr<criteria::ComplexityTable> cache;
  if (!c.complexity_cache.empty()) {
    cache = std::make_unique<criteria::ComplexityTable>(c.complexity_cache);
    o.cache = cache.get();
  }
  const SweepResult r = run_sweep(o, x);

  CsvDocument sweep;
  write_metadata(sweep, c);
  sweep.header({"algorithm", "n", "h_fit", "K_aic", "K_bic", "K_fic", "K_fic_stderr", "K_true", "K_true_stderr",
                "K_piecewise", "fic", "aic", "bic", "K_aic_naive", "error"});
  for (const auto& row : r.rows) {
    if (!row.ok()) {
      sweep.row({row.algorithm, cell(row.n), "NA", "NA", "NA", "NA", "NA", "NA", "NA", "NA", "NA", "NA", "NA", "NA",
                 text_cell(row.error)});
      continue;
    }
    auto est = [](const std::optional<MonteCarloEstimate>& e, bool se) {
      return e ? cell(se ? e->std_error : e->value) : std::string("NA");
    };
    sweep.row({row.algorithm, cell(row.n), cell(row.h_fit), cell(row.k_aic), cell(row.k_bic), est(row.k_fic, false),
               est(row.k_fic, true), est(row.k_true, false), est(row.k_true, true), cell(row.k_piecewise),
               cell(row.fic()), cell(row.aic()), cell(row.bic()), cell(row.k_aic_naive), ""});
  }

  CsvDocument summary;
  write_metadata(summary, c);
  summary.header({"algorithm", "fic_selected_n", "aic_selected_n", "bic_selected_n", "true_ic_selected_n"});
  auto n_cell = [](const std::optional<std::size_t>& v) { return v ? cell(*v) : std::string("NA"); };
  for (const auto& s : r.selections)
    summary.row({s.algorithm, n_cell(s.fic_n), n_cell(s.aic_n), n_cell(s.bic_n), n_cell(s.true_n)});

  sweep.save(dir / "sweep.csv");
  summary.save(dir / "sweep_summary.csv");
  for (const auto& s : r.selections) {
    std::vector<int> selected;
    for (const auto& row : r.rows)
      if (row.algorithm == s.algorithm && s.fic_n && row.n == *s.fic_n) selected = row.selected;
    coefficient_table(c, x, selected).save(dir / ("coefficients_" + s.algorithm + ".csv"));
    log << s.algorithm << ": FIC selects n = " << n_cell(s.fic_n) << "\n";
  }
  log << "wrote " << (dir / "sweep.csv").string() << "\n";
}

// ---------------------------------------------------------------------------
// Landscape
// ---------------------------------------------------------------------------

struct LandscapeRun {
  analytic::LandscapeGrid grid;
  ParameterVector theta0;
};

inline LandscapeRun run_landscape(const ExperimentConfig& c) {
  const std::size_t n = c.sample_size;
  const bool sine = c.landscape_model == "sine";
  const ModelFamily family = sine ? models::sine_regression_family(n, c.theta2_min, c.theta2_max)
                                  : models::linear_trend_family(n);
  const FittedModel truth = sine ? models::sine_model(n, c.truth_theta1, c.truth_theta2)
                                 : models::linear_trend_model(n, c.truth_theta1, c.truth_theta2);
  RngStream rng(derive_seed(c.seed, "data"));
  const Dataset x = truth.sample(n, rng);
  analytic::LandscapeSpec spec;
  spec.theta1 = {c.theta1_min, c.theta1_max, c.theta1_steps};
  spec.theta2 = {c.theta2_min, c.theta2_max, c.theta2_steps};
  spec.replicates = c.replicates;
  spec.seed = derive_seed(c.seed, "divergence");
  return {analytic::information_landscape(family, truth, x, spec), truth.params()};
}

inline void cmd_landscape(const ExperimentConfig& c, std::ostream& log) {
  if (c.experiment != "landscape") throw InvalidArgument("landscape needs experiment = landscape");
  const auto dir = prepare_output(c);
  const LandscapeRun run = run_landscape(c);
  std::ostringstream surface, profile;
  analytic::write_surface_csv(surface, run.grid);
  analytic::write_profile_csv(profile, run.grid);
  CsvDocument meta;
  write_metadata(meta, c);
  meta.meta("landscape_model", c.landscape_model);
  for (auto [name, body] : {std::pair{"landscape_surface.csv", &surface}, std::pair{"landscape_profile.csv", &profile}}) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + (dir / name).string() + "'");
    out << meta.text() << body->str();
  }
  log << "wrote " << (dir / "landscape_surface.csv").string() << " and " << (dir / "landscape_profile.csv").string()
      << "\n";
}

// ---------------------------------------------------------------------------
// Oracle suite
// ---------------------------------------------------------------------------

struct OracleCheck {
  std::string check;
  double expected = 0.0;
  double got = 0.0;
  double stderr_ = 0.0;
  bool pass = false;
};

/// FIC against closed-form complexities, EVT against simulation, and the
/// parameter invariance of the Gaussian mean family.
inline std::vector<OracleCheck> run_oracle_suite(std::size_t replicates, std::uint64_t seed) {
  std::vector<OracleCheck> out;
  auto within = [&](std::string name, double expected, const MonteCarloEstimate& e) {
    out.push_back({std::move(name), expected, e.value, e.std_error, std::abs(e.value - expected) <= 3.0 * e.std_error});
  };
  const std::uint64_t s = derive_seed(seed, "oracle");

  for (std::size_t k : {1, 2, 3, 5})
    for (std::size_t n : {10, 100}) {
      const auto family = models::gaussian_mean_family(k);
      const auto gen = models::gaussian_mean_model(std::vector<double>(k, 0.0));
      within("gaussian_mean K=" + std::to_string(k) + " N=" + std::to_string(n), static_cast<double>(k),
             criteria::fic_complexity(family, gen, n, replicates, s));
    }
  for (auto [k, n] : {std::pair<std::size_t, std::size_t>{2, 10}, {3, 10}, {4, 30}}) {
    const auto family = models::linear_regression_family(models::polynomial_design(n, k - 1));
    std::vector<double> theta(k, 1.0);
    const auto gen = family.model_at(ParameterVector(theta));
    within("linear_regression K=" + std::to_string(k) + " N=" + std::to_string(n),
           criteria::aicc_linear_regression(k, n), criteria::fic_complexity(family, gen, n, replicates, s));
  }
  for (std::size_t n : {2, 10, 100})
    within("exponential N=" + std::to_string(n), criteria::aicc_exponential(n),
           criteria::fic_complexity(models::exponential_family(), models::exponential_model(1.0), n, replicates, s));

  for (auto [m, tol] : {std::pair<std::size_t, double>{20, 0.15}, {1000, 0.05}}) {
    const auto mc = analytic::max_chi2_mc(m, 1, replicates, derive_seed(s, m));
    const double evt = analytic::evt_complexity(m, 1);
    out.push_back({"evt m=" + std::to_string(m) + " nu=1 (rel. tol " + format_double(tol) + ")", mc.value, evt,
                   mc.std_error, std::abs(evt - mc.value) / mc.value <= tol});
  }
  within("max_chi2 m=2 nu=1", 1.0 + 2.0 / std::numbers::pi, analytic::max_chi2_mc(2, 1, replicates, s));

  const auto family = models::gaussian_mean_family(1);
  const auto k0 = criteria::fic_complexity(family, models::gaussian_mean_model({0.0}), 10, replicates, s);
  const auto k7 = criteria::fic_complexity(family, models::gaussian_mean_model({7.0}), 10, replicates,
                                           derive_seed(s, "shifted"));
  const double se = combined_std_error(k0, k7);
  out.push_back({"parameter invariance gaussian_mean mean 0 vs 7", k0.value, k7.value, se,
                 std::abs(k0.value - k7.value) <= 3.0 * se});
  return out;
}

inline bool cmd_oracle_suite(const ExperimentConfig& c, std::ostream& log) {
  if (c.experiment != "oracle_suite") throw InvalidArgument("oracle-suite needs experiment = oracle_suite");
  const auto dir = prepare_output(c);
  const auto checks = run_oracle_suite(c.replicates, c.seed);
  CsvDocument doc;
  write_metadata(doc, c);
  doc.header({"check", "expected", "got", "stderr", "pass"});
  bool all = true;
  for (const auto& ch : checks) {
    doc.row({text_cell(ch.check), cell(ch.expected), cell(ch.got), cell(ch.stderr_), cell(ch.pass)});
    all = all && ch.pass;
    log << (ch.pass ? "PASS " : "FAIL ") << ch.check << ": expected " << ch.expected << ", got " << ch.got << "\n";
  }
  doc.save(dir / "oracle_suite.csv");
  return all;
}

// ---------------------------------------------------------------------------
// EVT table
// ---------------------------------------------------------------------------

inline void cmd_evt_table(const ExperimentConfig& c, std::ostream& log) {
  if (c.experiment != "evt_table") throw InvalidArgument("evt-table needs experiment = evt_table");
  const auto dir = prepare_output(c);
  CsvDocument doc;
  write_metadata(doc, c);
  doc.header({"m", "nu", "evt_formula", "mc_mean", "mc_stderr"});
  for (std::size_t m : c.m_values)
    for (std::size_t nu : c.nu_values) {
      const auto mc = analytic::max_chi2_mc(m, nu, c.replicates, derive_seed(derive_seed(c.seed, m), nu));
      const std::string evt = m >= 2 ? cell(analytic::evt_complexity(m, nu)) : std::string("NA");
      doc.row({cell(m), cell(nu), evt, cell(mc.value), cell(mc.std_error)});
    }
  doc.save(dir / "evt_table.csv");
  log << "wrote " << (dir / "evt_table.csv").string() << "\n";
}

// ---------------------------------------------------------------------------

/// Runs one command and maps failures to exit codes.
inline int run_command(std::string_view command, const ExperimentConfig& c, std::ostream& log, std::ostream& err) {
  try {
    c.validate();
    if (command == "simulate") {
      cmd_simulate(c, log);
    } else if (command == "sweep") {
      cmd_sweep(c, log);
    } else if (command == "landscape") {
      cmd_landscape(c, log);
    } else if (command == "oracle-suite") {
      if (!cmd_oracle_suite(c, log)) {
        err << "oracle suite: at least one check failed\n";
        return kOracleFailure;
      }
    } else if (command == "evt-table") {
      cmd_evt_table(c, log);
    } else {
      err << "unknown command '" << command << "'\n";
      return kUsage;
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}

}  // namespace fickit::cli
