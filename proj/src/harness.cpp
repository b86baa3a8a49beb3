#include "privreg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "privreg/payments.hpp"
#include "privreg/privacy.hpp"

namespace privreg {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_error(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

const json& need(const json& j, const char* key) {
  if (!j.contains(key)) config_error(std::string("missing key '") + key + "'");
  return j.at(key);
}

double as_number(const json& v, const char* key) {
  if (!v.is_number()) config_error(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

long as_integer(const json& v, const char* key) {
  if (!v.is_number_integer())
    config_error(std::string("'") + key + "' must be an integer");
  return v.get<long>();
}

std::string as_string(const json& v, const char* key) {
  if (!v.is_string()) config_error(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> as_number_array(const json& v, const char* key) {
  if (!v.is_array()) config_error(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(as_number(e, key));
  return out;
}

void forbid(const json& j, const char* key, const char* why) {
  if (j.contains(key))
    config_error(std::string("'") + key + "' only applies to " + why);
}

PriorSpec parse_prior(const json& j) {
  const std::string kind = as_string(need(j, "prior_kind"), "prior_kind");
  if (kind == "discrete") {
    forbid(j, "prior_mean", "the truncated_gaussian prior");
    forbid(j, "prior_stddev", "the truncated_gaussian prior");
    forbid(j, "prior_radius", "the truncated_gaussian prior");
    const json& atoms_j = need(j, "prior_atoms");
    if (!atoms_j.is_array() || atoms_j.empty())
      config_error("'prior_atoms' must be a nonempty array of vectors");
    std::vector<Eigen::VectorXd> atoms;
    for (const auto& a : atoms_j) {
      const std::vector<double> coords = as_number_array(a, "prior_atoms");
      atoms.push_back(Eigen::Map<const Eigen::VectorXd>(
          coords.data(), static_cast<long>(coords.size())));
    }
    std::vector<double> weights;
    if (j.contains("prior_weights"))
      weights = as_number_array(j.at("prior_weights"), "prior_weights");
    else
      weights.assign(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
    return PriorSpec::discrete(std::move(atoms), std::move(weights));
  }
  if (kind == "truncated_gaussian") {
    forbid(j, "prior_atoms", "the discrete prior");
    forbid(j, "prior_weights", "the discrete prior");
    const std::vector<double> mean =
        as_number_array(need(j, "prior_mean"), "prior_mean");
    return PriorSpec::truncated_gaussian(
        Eigen::Map<const Eigen::VectorXd>(mean.data(),
                                          static_cast<long>(mean.size())),
        as_number(need(j, "prior_stddev"), "prior_stddev"),
        as_number(need(j, "prior_radius"), "prior_radius"));
  }
  config_error("prior_kind must be 'discrete' or 'truncated_gaussian'");
}

NoiseSpec parse_noise(const json& j) {
  const std::string kind = as_string(need(j, "noise_kind"), "noise_kind");
  const double m = as_number(need(j, "noise_m"), "noise_m");
  if (kind == "uniform") {
    forbid(j, "noise_stddev", "truncated_gaussian noise");
    return NoiseSpec::uniform(m);
  }
  if (kind == "truncated_gaussian")
    return NoiseSpec::truncated_gaussian(
        m, as_number(need(j, "noise_stddev"), "noise_stddev"));
  if (kind == "symmetric_discrete") {
    forbid(j, "noise_stddev", "truncated_gaussian noise");
    return NoiseSpec::symmetric_discrete(m);
  }
  config_error(
      "noise_kind must be 'uniform', 'truncated_gaussian', or "
      "'symmetric_discrete'");
}

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_num(double v) {
  return std::isfinite(v) ? fmt_g(v) : std::string("null");
}

std::string json_array(const std::vector<double>& values) {
  std::string out = "[";
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += json_num(values[i]);
  }
  return out + "]";
}

double num_or_nan(const json& v) { return v.is_null() ? kNaN : v.get<double>(); }

struct Moments {
  double mean = kNaN;
  double stderr_of_mean = kNaN;
  long count = 0;
};

Moments reduce(const std::vector<double>& values) {
  Moments m;
  double sum = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++m.count;
  }
  if (m.count == 0) return m;
  m.mean = sum / static_cast<double>(m.count);
  if (m.count > 1) {
    double ss = 0.0;
    for (double v : values) {
      if (std::isnan(v)) continue;
      const double dev = v - m.mean;
      ss += dev * dev;
    }
    m.stderr_of_mean =
        std::sqrt(ss / static_cast<double>(m.count - 1) /
                  static_cast<double>(m.count));
  }
  return m;
}

double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double m = static_cast<double>(xs.size());
  double xbar = 0.0, ybar = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= m;
  ybar /= m;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  return sxx > 0.0 ? sxy / sxx : kNaN;
}

// OLS of log mean metric on log n, with a trial-level bootstrap for the
// interval: each resample redraws every n's trials with replacement.
SlopeFit fit_loglog_slope(const std::vector<TrialSeries>& trials,
                          const std::vector<double> TrialSeries::*metric,
                          const RngStream& base, uint64_t tag) {
  std::vector<double> log_n;
  std::vector<const std::vector<double>*> samples;
  std::vector<double> xs, ys;
  for (const TrialSeries& ts : trials) {
    const std::vector<double>& vals = ts.*metric;
    const Moments m = reduce(vals);
    if (m.count == 0 || !(m.mean > 0.0)) continue;
    log_n.push_back(std::log(static_cast<double>(ts.n)));
    samples.push_back(&vals);
    xs.push_back(log_n.back());
    ys.push_back(std::log(m.mean));
  }
  SlopeFit fit;
  if (xs.size() < 2) return fit;
  fit.slope = ols_slope(xs, ys);

  constexpr int kResamples = 500;
  std::vector<double> slopes;
  slopes.reserve(kResamples);
  for (int b = 0; b < kResamples; ++b) {
    RngStream rs = base.derive(static_cast<uint64_t>(b), tag, 5);
    std::vector<double> bx, by;
    for (size_t i = 0; i < samples.size(); ++i) {
      const std::vector<double>& vals = *samples[i];
      double sum = 0.0;
      long count = 0;
      for (size_t k = 0; k < vals.size(); ++k) {
        const double v = vals[rs.uniform_below(vals.size())];
        if (std::isnan(v)) continue;
        sum += v;
        ++count;
      }
      if (count == 0) continue;
      const double mean = sum / static_cast<double>(count);
      if (!(mean > 0.0)) continue;
      bx.push_back(log_n[i]);
      by.push_back(std::log(mean));
    }
    if (bx.size() >= 2) slopes.push_back(ols_slope(bx, by));
  }
  if (slopes.size() >= 2) {
    std::sort(slopes.begin(), slopes.end());
    const double last = static_cast<double>(slopes.size() - 1);
    fit.lo = slopes[static_cast<size_t>(std::floor(0.025 * last))];
    fit.hi = slopes[static_cast<size_t>(std::ceil(0.975 * last))];
  }
  return fit;
}

}  // namespace

MechanismConfig corollary_schedule(int n, double delta, double B, double M,
                                   double p, int d, double sigma2) {
  if (n < 2) throw std::invalid_argument("schedule: need at least two players");
  if (d < 1) throw std::invalid_argument("schedule: dimension must be positive");
  if (B <= 0.0) throw std::invalid_argument("schedule: B must be positive");
  if (M < 0.0) throw std::invalid_argument("schedule: M must be nonnegative");
  if (p <= 1.0) throw std::invalid_argument("schedule: p must exceed 1");
  if (!(delta > 0.0 && delta < p / (2.0 + 2.0 * p)))
    throw std::invalid_argument("schedule: delta must lie in (0, p/(2+2p))");

  const double nn = static_cast<double>(n);
  MechanismConfig c;
  c.n = n;
  c.d = d;
  c.gamma = std::pow(nn, 1.0 - delta / 2.0);
  c.epsilon = std::pow(nn, -1.0 + delta);
  c.b = std::pow(nn, -1.5);
  c.a = (6.0 * B + 2.0 * M) * (1.0 + B) * (1.0 + B) * c.b +
        std::pow(nn, -1.5 + delta);
  c.B = B;
  c.M = M;
  c.sigma2 = sigma2 < 0.0 ? M * M / 3.0 : sigma2;
  c.alpha = std::pow(nn, -delta);
  c.beta = std::pow(nn, -p / 2.0 + delta * (1.0 + p));
  c.xi = 0.5;
  c.tau = tau_threshold(c.alpha, c.beta, p);
  return c;
}

std::vector<double> default_deviation_grid() {
  std::vector<double> grid{0.0};
  for (int k = 0; k < 8; ++k) {
    const double step = 0.01 * std::pow(2.0, k);
    grid.push_back(step);
    grid.push_back(-step);
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

ExperimentSpec ExperimentSpec::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("top level must be an object");

  static const std::set<std::string> known = {
      "n_grid",          "d",
      "delta",           "trials",
      "seed",            "prior_kind",
      "prior_atoms",     "prior_weights",
      "prior_mean",      "prior_stddev",
      "prior_radius",    "noise_kind",
      "noise_m",         "noise_stddev",
      "cost_p",          "cost_scale",
      "strategy",        "misreport",
      "out",             "a_mode",
      "a_override",      "b_override",
      "probe_players",   "deviation_trials",
      "deviation_grid",  "deviation_all_n",
      "oracle_samples",  "jobs"};
  for (const auto& item : j.items())
    if (!known.count(item.key()))
      config_error("unknown key '" + item.key() + "'");

  ExperimentSpec spec;
  const json& grid_j = need(j, "n_grid");
  if (!grid_j.is_array()) config_error("'n_grid' must be an array");
  for (const auto& e : grid_j)
    spec.n_grid.push_back(static_cast<int>(as_integer(e, "n_grid")));
  spec.delta = as_number(need(j, "delta"), "delta");
  spec.trials = static_cast<int>(as_integer(need(j, "trials"), "trials"));
  {
    const json& s = need(j, "seed");
    if (!s.is_number_integer() ||
        (!s.is_number_unsigned() && s.get<long long>() < 0))
      config_error("'seed' must be a nonnegative integer");
    spec.seed = s.get<uint64_t>();
  }

  spec.prior = parse_prior(j);
  spec.noise = parse_noise(j);
  spec.cost.p = as_number(need(j, "cost_p"), "cost_p");
  if (j.contains("cost_scale"))
    spec.cost.scale = as_number(j.at("cost_scale"), "cost_scale");

  spec.d = j.contains("d") ? static_cast<int>(as_integer(j.at("d"), "d"))
                           : spec.prior.d();

  if (j.contains("strategy")) {
    const std::string s = as_string(j.at("strategy"), "strategy");
    if (s == "truthful")
      spec.strategy = StrategyKind::kTruthful;
    else if (s == "threshold")
      spec.strategy = StrategyKind::kThreshold;
    else
      config_error("strategy must be 'truthful' or 'threshold'");
  }
  if (spec.strategy == StrategyKind::kTruthful)
    forbid(j, "misreport", "the threshold strategy");
  if (j.contains("misreport")) {
    const std::string s = as_string(j.at("misreport"), "misreport");
    if (s == "zero")
      spec.misreport = MisreportModel::kZero;
    else if (s == "uniform_random")
      spec.misreport = MisreportModel::kUniformRandom;
    else if (s == "clamp_extreme")
      spec.misreport = MisreportModel::kClampExtreme;
    else
      config_error(
          "misreport must be 'zero', 'uniform_random', or 'clamp_extreme'");
  }

  if (j.contains("out")) spec.out_path = as_string(j.at("out"), "out");
  if (j.contains("a_mode")) {
    const std::string s = as_string(j.at("a_mode"), "a_mode");
    if (s == "corollary")
      spec.a_mode = OffsetMode::kSchedule;
    else if (s == "min_ir")
      spec.a_mode = OffsetMode::kMinIr;
    else
      config_error("a_mode must be 'corollary' or 'min_ir'");
  }
  if (j.contains("a_override"))
    spec.a_override = as_number(j.at("a_override"), "a_override");
  if (j.contains("b_override"))
    spec.b_override = as_number(j.at("b_override"), "b_override");
  if (j.contains("probe_players"))
    spec.probe_players =
        static_cast<int>(as_integer(j.at("probe_players"), "probe_players"));
  if (j.contains("deviation_trials"))
    spec.deviation_trials =
        as_integer(j.at("deviation_trials"), "deviation_trials");
  if (j.contains("deviation_grid"))
    spec.deviation_grid =
        as_number_array(j.at("deviation_grid"), "deviation_grid");
  if (j.contains("deviation_all_n")) {
    const json& v = j.at("deviation_all_n");
    if (!v.is_boolean()) config_error("'deviation_all_n' must be a boolean");
    spec.deviation_all_n = v.get<bool>();
  }
  if (j.contains("oracle_samples"))
    spec.oracle_samples =
        static_cast<int>(as_integer(j.at("oracle_samples"), "oracle_samples"));
  if (j.contains("jobs"))
    spec.jobs = static_cast<int>(as_integer(j.at("jobs"), "jobs"));

  spec.validate();
  return spec;
}

ExperimentSpec ExperimentSpec::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return from_json(text.str());
}

void ExperimentSpec::validate() const {
  prior.validate();
  noise.validate();
  cost.validate();
  if (d < 1) throw std::invalid_argument("spec: dimension must be positive");
  if (d != prior.d())
    throw std::invalid_argument("spec: d disagrees with the prior dimension");
  for (size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2)
      throw std::invalid_argument("spec: every n must be at least 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("spec: n_grid must be strictly increasing");
  }
  if (trials < 1) throw std::invalid_argument("spec: trials must be >= 1");
  if (!(delta > 0.0 && delta < cost.p / (2.0 + 2.0 * cost.p)))
    throw std::invalid_argument("spec: delta must lie in (0, p/(2+2p))");
  if (probe_players < 0)
    throw std::invalid_argument("spec: probe_players must be nonnegative");
  if (probe_players > 0 && prior.kind != PriorKind::kDiscreteSupport)
    throw std::invalid_argument(
        "spec: the misreport search needs a discrete prior");
  if (deviation_trials < 1)
    throw std::invalid_argument("spec: deviation_trials must be >= 1");
  if (prior.kind != PriorKind::kDiscreteSupport && oracle_samples < 1000)
    throw std::invalid_argument("spec: oracle_samples must be >= 1000");
  if (jobs < 0) throw std::invalid_argument("spec: jobs must be nonnegative");
  if (!std::isnan(a_override) && a_override < 0.0)
    throw std::invalid_argument("spec: a_override must be nonnegative");
  if (!std::isnan(b_override) && b_override < 0.0)
    throw std::invalid_argument("spec: b_override must be nonnegative");
}

MechanismConfig ExperimentSpec::schedule_for(int n) const {
  MechanismConfig config =
      corollary_schedule(n, delta, prior.B, noise.M, cost.p, d, noise.sigma2());
  if (!std::isnan(b_override)) config.b = b_override;
  if (a_mode == OffsetMode::kMinIr) config.a = min_a_for_ir(config);
  if (!std::isnan(a_override)) config.a = a_override;
  return config;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const RngStream base(spec.seed);

  PosteriorOracle oracle = [&]() {
    if (spec.prior.kind == PriorKind::kDiscreteSupport)
      return PosteriorOracle::exact_discrete(spec.prior, spec.noise);
    RngStream oracle_rng = base.derive(0, 0, 4);
    return PosteriorOracle::monte_carlo(spec.prior, spec.noise,
                                        spec.oracle_samples, oracle_rng);
  }();

  const int jobs =
      spec.jobs > 0
          ? spec.jobs
          : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));

  ExperimentReport report;
  for (int n : spec.n_grid) {
    const MechanismConfig config = spec.schedule_for(n);
    if (config.epsilon > 1.0)
      std::cerr << "warning: schedule at n=" << n << " gives epsilon="
                << config.epsilon
                << " > 1, outside the quadratic privacy-cost regime\n";

    const WorldModel model{spec.prior, spec.noise, spec.cost, n, spec.d};
    const StrategyProfile profile =
        spec.strategy == StrategyKind::kTruthful
            ? StrategyProfile::truthful()
            : StrategyProfile::threshold(config.tau, spec.misreport,
                                         config.B + config.M);

    struct TrialOut {
      double mse = kNaN;
      double budget = kNaN;
      double ir_fraction = kNaN;
      long ir_violations = 0;
      long ir_below = 0;
      bool ok = false;
    };
    std::vector<TrialOut> outs(static_cast<size_t>(spec.trials));
    std::atomic<int> next_trial{0};
    auto worker = [&]() {
      for (;;) {
        const int t = next_trial.fetch_add(1);
        if (t >= spec.trials) return;
        try {
          RngStream tr = base.derive(static_cast<uint64_t>(n),
                                     static_cast<uint64_t>(t), 1);
          const World w = model.sample(tr);
          const Eigen::VectorXd reports = apply_strategy(profile, w, tr);
          const MechanismOutcome out =
              run_algorithm_2(w.features, reports, config, oracle, tr);
          const IrReport ir = ir_report(out, w, config);
          TrialOut& o = outs[static_cast<size_t>(t)];
          o.mse = (out.private_release->theta_private - w.theta).squaredNorm();
          o.budget = out.ledger.budget;
          o.ir_fraction = ir.fraction;
          o.ir_violations = ir.violations_below_threshold;
          o.ir_below = ir.below_threshold_count;
          o.ok = true;
        } catch (const std::exception&) {
          // Quarantined: the slot keeps its NaN metrics.
        }
      }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::min(jobs, spec.trials);
    pool.reserve(static_cast<size_t>(nthreads));
    for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();

    TrialSeries series;
    series.n = n;
    series.mse.reserve(outs.size());
    long violations = 0, below = 0;
    for (const TrialOut& o : outs) {
      series.mse.push_back(o.mse);
      series.budget.push_back(o.budget);
      series.ir_fraction.push_back(o.ir_fraction);
      if (o.ok) {
        violations += o.ir_violations;
        below += o.ir_below;
      } else {
        ++report.failed_trials;
      }
    }

    const Moments mse_m = reduce(series.mse);
    const Moments budget_m = reduce(series.budget);
    ExperimentRow row;
    row.n = n;
    row.mse = mse_m.mean;
    row.mse_stderr = mse_m.stderr_of_mean;
    row.budget_mean = budget_m.mean;
    row.budget_stderr = budget_m.stderr_of_mean;
    row.ir_violation_fraction =
        below > 0 ? static_cast<double>(violations) / static_cast<double>(below)
                  : 0.0;
    row.eta_bound = eta_bound(config, config.alpha, config.xi, config.tau);
    row.accuracy_bound = accuracy_bound(config);
    row.budget_bound = budget_bound(config);
    row.epsilon_total = algorithm_2_account(config.epsilon).total_epsilon;

    const bool probe_here =
        spec.probe_players > 0 &&
        (spec.deviation_all_n || n == spec.n_grid.back());
    if (probe_here) {
      RngStream ws = base.derive(static_cast<uint64_t>(n), 0, 2);
      const World probe_world = model.sample(ws);
      const std::vector<double> grid = spec.deviation_grid.empty()
                                           ? default_deviation_grid()
                                           : spec.deviation_grid;
      double best = -std::numeric_limits<double>::infinity();
      double best_se = kNaN;
      int probed = 0;
      for (int i = 0; i < n && probed < spec.probe_players; ++i) {
        if (probe_world.costs(i) > config.tau) continue;
        RngStream dr = base.derive(static_cast<uint64_t>(n),
                                   static_cast<uint64_t>(probed), 3);
        const DeviationGain g =
            deviation_gain(config, model, oracle, probe_world, i, grid,
                           spec.deviation_trials, dr);
        if (g.gain > best) {
          best = g.gain;
          best_se = g.gain_std_err;
        }
        ++probed;
      }
      if (probed > 0) {
        row.deviation_gain = best;
        row.deviation_gain_stderr = best_se;
      }
    }

    report.rows.push_back(row);
    report.trials.push_back(std::move(series));
  }

  report.mse_slope = fit_loglog_slope(report.trials, &TrialSeries::mse, base, 0);
  report.budget_slope =
      fit_loglog_slope(report.trials, &TrialSeries::budget, base, 1);
  return report;
}

std::string render_report(const ExperimentReport& report, ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    std::string out =
        "n,mse,mse_stderr,budget_mean,budget_stderr,ir_violation_fraction,"
        "deviation_gain,deviation_gain_stderr,eta_bound,accuracy_bound,"
        "budget_bound,epsilon_total\n";
    for (const ExperimentRow& r : report.rows) {
      out += std::to_string(r.n);
      for (double v : {r.mse, r.mse_stderr, r.budget_mean, r.budget_stderr,
                       r.ir_violation_fraction, r.deviation_gain,
                       r.deviation_gain_stderr, r.eta_bound, r.accuracy_bound,
                       r.budget_bound, r.epsilon_total}) {
        out += ',';
        out += fmt_g(v);
      }
      out += '\n';
    }
    return out;
  }

  std::string out = "{\n  \"rows\": [";
  for (size_t i = 0; i < report.rows.size(); ++i) {
    const ExperimentRow& r = report.rows[i];
    out += i ? ",\n    " : "\n    ";
    out += "{\"n\": " + std::to_string(r.n);
    const std::pair<const char*, double> fields[] = {
        {"mse", r.mse},
        {"mse_stderr", r.mse_stderr},
        {"budget_mean", r.budget_mean},
        {"budget_stderr", r.budget_stderr},
        {"ir_violation_fraction", r.ir_violation_fraction},
        {"deviation_gain", r.deviation_gain},
        {"deviation_gain_stderr", r.deviation_gain_stderr},
        {"eta_bound", r.eta_bound},
        {"accuracy_bound", r.accuracy_bound},
        {"budget_bound", r.budget_bound},
        {"epsilon_total", r.epsilon_total}};
    for (const auto& [name, value] : fields)
      out += std::string(", \"") + name + "\": " + json_num(value);
    out += "}";
  }
  out += report.rows.empty() ? "],\n" : "\n  ],\n";

  const auto slope_obj = [](const SlopeFit& s) {
    return "{\"slope\": " + json_num(s.slope) + ", \"lo\": " + json_num(s.lo) +
           ", \"hi\": " + json_num(s.hi) + "}";
  };
  out += "  \"mse_slope\": " + slope_obj(report.mse_slope) + ",\n";
  out += "  \"budget_slope\": " + slope_obj(report.budget_slope) + ",\n";
  out += "  \"failed_trials\": " + std::to_string(report.failed_trials) + ",\n";
  out += "  \"trials\": [";
  for (size_t i = 0; i < report.trials.size(); ++i) {
    const TrialSeries& ts = report.trials[i];
    out += i ? ",\n    " : "\n    ";
    out += "{\"n\": " + std::to_string(ts.n);
    out += ", \"mse\": " + json_array(ts.mse);
    out += ", \"budget\": " + json_array(ts.budget);
    out += ", \"ir_fraction\": " + json_array(ts.ir_fraction);
    out += "}";
  }
  out += report.trials.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << render_report(report, format);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

ExperimentReport parse_report_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("report: not valid JSON: ") +
                                e.what());
  }
  ExperimentReport report;
  for (const auto& r : j.at("rows")) {
    ExperimentRow row;
    row.n = r.at("n").get<int>();
    row.mse = num_or_nan(r.at("mse"));
    row.mse_stderr = num_or_nan(r.at("mse_stderr"));
    row.budget_mean = num_or_nan(r.at("budget_mean"));
    row.budget_stderr = num_or_nan(r.at("budget_stderr"));
    row.ir_violation_fraction = num_or_nan(r.at("ir_violation_fraction"));
    row.deviation_gain = num_or_nan(r.at("deviation_gain"));
    row.deviation_gain_stderr = num_or_nan(r.at("deviation_gain_stderr"));
    row.eta_bound = num_or_nan(r.at("eta_bound"));
    row.accuracy_bound = num_or_nan(r.at("accuracy_bound"));
    row.budget_bound = num_or_nan(r.at("budget_bound"));
    row.epsilon_total = num_or_nan(r.at("epsilon_total"));
    report.rows.push_back(row);
  }
  const auto parse_slope = [](const json& s) {
    SlopeFit fit;
    fit.slope = num_or_nan(s.at("slope"));
    fit.lo = num_or_nan(s.at("lo"));
    fit.hi = num_or_nan(s.at("hi"));
    return fit;
  };
  report.mse_slope = parse_slope(j.at("mse_slope"));
  report.budget_slope = parse_slope(j.at("budget_slope"));
  report.failed_trials = j.at("failed_trials").get<long>();
  for (const auto& t : j.at("trials")) {
    TrialSeries ts;
    ts.n = t.at("n").get<int>();
    for (const auto& v : t.at("mse")) ts.mse.push_back(num_or_nan(v));
    for (const auto& v : t.at("budget")) ts.budget.push_back(num_or_nan(v));
    for (const auto& v : t.at("ir_fraction"))
      ts.ir_fraction.push_back(num_or_nan(v));
    report.trials.push_back(std::move(ts));
  }
  return report;
}

}  // namespace privreg
