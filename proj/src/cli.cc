// Copyright 2026 The Shiftlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shiftlab/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "CLI11.hpp"
#include "shiftlab/bounds.h"
#include "shiftlab/coupling.h"
#include "shiftlab/expression.h"
#include "shiftlab/fokker_planck.h"
#include "shiftlab/gaussian_info.h"
#include "shiftlab/kernels.h"
#include "shiftlab/parallel.h"
#include "shiftlab/sampler.h"
#include "shiftlab/schedules.h"
#include "shiftlab/shifted_div.h"

namespace shiftlab {
namespace {

using nlohmann::json;

constexpr double kTightnessTolerance = 1e-10;
constexpr double kScheduleEntryTolerance = 1e-8;
constexpr double kScheduleCostTolerance = 1e-10;
constexpr double kContinuousCostTolerance = 1e-8;
constexpr double kConsistencyTolerance = 1e-12;
constexpr int kBetaSamples = 20001;
constexpr double kOuEllipticity = 2.0;  // sigma = sqrt(2) I

const std::vector<std::string> kCommands = {
    "tightness", "schedule", "bounds-table", "fpverify",
    "score",     "coupling", "dualsd"};

// Signals --help; carries the rendered help text.
struct HelpRequest {
  std::string text;
};

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double ParseNumber(const std::string& text, const std::string& key) {
  const std::string t = Trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || std::isnan(v)) {
    throw std::invalid_argument("--" + key + ": not a number: '" + text + "'");
  }
  return v;
}

std::vector<double> ParseList(const std::string& text, const std::string& key) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) values.push_back(ParseNumber(item, key));
  if (values.empty()) throw std::invalid_argument("--" + key + ": empty list");
  return values;
}

json JsonNumber(double v) {
  // Non-finite values are kept as strings so the JSON stays valid.
  if (std::isfinite(v)) return v;
  return FormatDouble(v);
}

double NumberParam(const json& params, const std::string& key) {
  const json& v = params.at(key);
  if (v.is_string()) return ParseNumber(v.get<std::string>(), key);
  return v.get<double>();
}

std::vector<double> ListParam(const json& params, const std::string& key) {
  std::vector<double> out;
  for (const json& v : params.at(key)) {
    out.push_back(v.is_string() ? ParseNumber(v.get<std::string>(), key)
                                : v.get<double>());
  }
  return out;
}

json ListJson(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(JsonNumber(v));
  return out;
}

int IntParam(const json& params, const std::string& key) {
  const double v = NumberParam(params, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw std::invalid_argument("--" + key + " must be an integer");
  }
  return static_cast<int>(v);
}

void RequirePositive(double v, const std::string& key) {
  if (!(v > 0.0)) throw std::invalid_argument("--" + key + " must be > 0");
}

Check MakeCheck(std::string name, double lhs, double rhs, bool pass,
                std::optional<double> margin = std::nullopt) {
  Check c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = margin ? *margin : rhs - lhs;
  c.pass = pass;
  return c;
}

std::string Label(const std::vector<std::pair<std::string, double>>& parts) {
  std::string out;
  for (const auto& [key, value] : parts) {
    if (!out.empty()) out += ' ';
    out += key + '=' + FormatDouble(value);
  }
  return out;
}

// max |V''| on [lower, upper] sampled at kBetaSamples points.
double SampledBeta(const Expression& second, double lower, double upper) {
  double beta = 0.0;
  for (int i = 0; i < kBetaSamples; ++i) {
    const double x = lower + (upper - lower) * i / (kBetaSamples - 1);
    const double v = std::abs(second(x));
    if (!std::isfinite(v)) {
      throw std::invalid_argument("V'' is not finite at x = " + FormatDouble(x));
    }
    beta = std::max(beta, v);
  }
  return beta;
}

// --- command implementations -------------------------------------------

RunResult RunTightness(const ExperimentConfig& config) {
  const json& p = config.parameters;
  const auto ls = ListParam(p, "L");
  const auto hs = ListParam(p, "h");
  const auto ns = ListParam(p, "N");
  const auto qs = ListParam(p, "q");
  const auto vs = ListParam(p, "v");
  struct Cell {
    double lipschitz, h, q, v;
    int steps;
  };
  std::vector<Cell> cells;
  for (double l : ls) {
    for (double h : hs) {
      for (double n : ns) {
        if (n != std::floor(n) || n < 1) {
          throw std::invalid_argument("--N entries must be integers >= 1");
        }
        for (double q : qs) {
          static_cast<void>(RenyiOrder{q});
          for (double v : vs) {
            if (!(v >= 0.0)) throw std::invalid_argument("--v must be >= 0");
            if (!(l >= 0.0)) throw std::invalid_argument("--L must be >= 0");
            StepSize(h, l);
            cells.push_back({l, h, q, v, static_cast<int>(n)});
          }
        }
      }
    }
  }
  struct Row {
    double exact, bound, rel;
  };
  std::vector<Row> rows(cells.size());
  ParallelFor(static_cast<int>(cells.size()), [&](int k) {
    const Cell& c = cells[k];
    const StepSize step(c.h, c.lipschitz);
    const GaussianMeasure base =
        OuDiscreteMarginal(c.lipschitz, step, c.steps, Eigen::VectorXd::Zero(1));
    const GaussianMeasure moved =
        base.Shifted(Eigen::VectorXd::Constant(1, c.v));
    const RenyiOrder q(c.q);
    const double exact = RenyiGaussianSharedCov(moved, base, q);
    const double bound =
        DiscreteSrtBound(q, c.lipschitz, kOuEllipticity, c.h, c.steps, c.v)
            .value;
    const double rel = bound > 0.0 ? std::abs(exact - bound) / bound
                                   : std::abs(exact - bound);
    rows[k] = {exact, bound, rel};
  });
  RunResult result;
  std::ostringstream csv;
  csv << "L,h,N,q,v,exact,bound,rel_error\n";
  for (size_t k = 0; k < cells.size(); ++k) {
    const Cell& c = cells[k];
    const Row& r = rows[k];
    csv << FormatDouble(c.lipschitz) << ',' << FormatDouble(c.h) << ','
        << c.steps << ',' << FormatDouble(c.q) << ',' << FormatDouble(c.v)
        << ',' << FormatDouble(r.exact) << ',' << FormatDouble(r.bound) << ','
        << FormatDouble(r.rel) << '\n';
    result.report.checks.push_back(MakeCheck(
        "tightness " + Label({{"L", c.lipschitz},
                              {"h", c.h},
                              {"N", c.steps},
                              {"q", c.q},
                              {"v", c.v}}),
        r.exact, r.bound, r.rel <= kTightnessTolerance));
  }
  result.files["tightness.csv"] = csv.str();
  return result;
}

RunResult RunSchedule(const ExperimentConfig& config) {
  const json& p = config.parameters;
  RunResult result;
  std::ostringstream csv;
  if (p.at("continuous").get<bool>()) {
    const double l = NumberParam(p, "L");
    const double horizon = NumberParam(p, "T");
    const int samples = IntParam(p, "samples");
    RequirePositive(l, "L");
    RequirePositive(horizon, "T");
    if (samples < 2) throw std::invalid_argument("--samples must be >= 2");
    const ContinuousSchedule schedule = ContinuousScheduleSinh(l, horizon);
    const double cost = ContinuousCost(schedule, l);
    const double exact = OptimalContinuousCost(l, horizon);
    result.report.checks.push_back(MakeCheck(
        "continuous_cost", cost, exact,
        std::abs(cost - exact) <= kContinuousCostTolerance * exact));
    result.report.extra["cost"] = cost;
    WriteScheduleCsv(schedule, samples, csv);
  } else {
    const double c1 = NumberParam(p, "c1");
    const double c2 = NumberParam(p, "c2");
    const int steps = IntParam(p, "N");
    const ShiftSchedule schedule = OptimalDiscreteSchedule(c1, c2, steps);
    const double cost = DiscreteCost(schedule, c1, c2);
    const double closed = OptimalDiscreteCost(c1, c2, steps);
    result.report.checks.push_back(MakeCheck(
        "cost_closed_form", cost, closed,
        std::abs(cost - closed) <= kScheduleCostTolerance * closed));
    if (steps <= 16) {
      const ShiftSchedule brute = BruteForceSchedule(c1, c2, steps);
      double worst = 0.0;
      for (int n = 0; n <= steps; ++n) {
        worst = std::max(worst, std::abs(brute[n] - schedule[n]));
      }
      result.report.checks.push_back(
          MakeCheck("tridiagonal_oracle_max_entry_gap", worst,
                    kScheduleEntryTolerance, worst <= kScheduleEntryTolerance));
    }
    result.report.extra["cost"] = cost;
    result.report.extra["schedule"] = schedule.values();
    WriteScheduleCsv(schedule, csv);
  }
  result.files["schedule.csv"] = csv.str();
  return result;
}

RunResult RunBoundsTable(const ExperimentConfig& config) {
  const json& p = config.parameters;
  std::vector<BoundKind> kinds;
  for (const json& k : p.at("kinds")) {
    const BoundKind kind = ParseBoundKind(k.get<std::string>());
    if (kind == BoundKind::kMultiStep) {
      throw std::invalid_argument("bounds-table covers Langevin constants; "
                                  "use schedule for multi_step");
    }
    kinds.push_back(kind);
  }
  const auto betas = ListParam(p, "beta");
  const auto ts = ListParam(p, "t");
  const auto orders = ListParam(p, "order");
  const auto vs = ListParam(p, "v");
  RunResult result;
  std::ostringstream csv;
  csv << "kind,beta,t,order,norm_v,value\n";
  for (BoundKind kind : kinds) {
    for (double beta : betas) {
      for (double t : ts) {
        for (double order : orders) {
          for (double v : vs) {
            const double value = TheoremConstant(kind, beta, t, order, v).value;
            csv << BoundKindName(kind) << ',' << FormatDouble(beta) << ','
                << FormatDouble(t) << ',' << FormatDouble(order) << ','
                << FormatDouble(v) << ',' << FormatDouble(value) << '\n';
          }
        }
      }
    }
  }
  // Cross-checks: SRT_q against the diffusion bound with (L, lambda) =
  // (beta, 2), and SRT_q against SH_p at the dual exponent.
  for (double beta : betas) {
    for (double t : ts) {
      for (double order : orders) {
        if (order <= 1.0) continue;
        const RenyiOrder q(order);
        for (double v : vs) {
          const double srt =
              TheoremConstant(BoundKind::kSrtQ, beta, t, order, v).value;
          const double diffusion =
              ContinuousSrtBound(q, beta, kOuEllipticity, t, v).value;
          const double sh = TheoremConstant(BoundKind::kShP, beta, t,
                                            q.DualExponent(), v)
                                .value;
          const double via_duality =
              q.DualExponent() * std::log(HarnackFromRenyi(q, srt));
          const std::string label =
              Label({{"beta", beta}, {"t", t}, {"q", order}, {"v", v}});
          const double scale = std::max(1.0, std::abs(srt));
          result.report.checks.push_back(MakeCheck(
              "SRT_q=continuous_bound " + label, srt, diffusion,
              std::abs(srt - diffusion) <= kConsistencyTolerance * scale));
          result.report.checks.push_back(MakeCheck(
              "SH_p=duality(SRT_q) " + label, sh, via_duality,
              std::abs(sh - via_duality) <= 1e-10 * scale));
        }
      }
    }
  }
  result.files["bounds.csv"] = csv.str();
  return result;
}

RunResult RunFpVerify(const ExperimentConfig& config) {
  const json& p = config.parameters;
  const Expression v_expr = Expression::Parse(p.at("potential").get<std::string>());
  const Expression dv = v_expr.Derivative();
  const Expression d2v = dv.Derivative();
  const double x0 = NumberParam(p, "x0");
  const double t = NumberParam(p, "t");
  const double v = NumberParam(p, "v");
  const double q_value = NumberParam(p, "q");
  const double p_exp = NumberParam(p, "p");
  const int points = IntParam(p, "points");
  const std::string mode = p.at("mode").get<std::string>();
  RequirePositive(t, "t");
  const RenyiOrder q(q_value);
  if (!(p_exp > 1.0)) throw std::invalid_argument("--p must be > 1");
  const std::vector<std::string> modes =
      mode == "all" ? std::vector<std::string>{"srt", "lge", "shp", "shlog"}
                    : std::vector<std::string>{mode};
  for (const std::string& m : modes) {
    if (m != "srt" && m != "lge" && m != "shp" && m != "shlog") {
      throw std::invalid_argument("--mode must be srt, lge, shp, shlog or all");
    }
  }

  // beta: sampled sup |V''| over the solver domain, or the declared value
  // (which must dominate the samples).
  double lower = p.contains("lower") ? NumberParam(p, "lower") : x0 - 10.0;
  double upper = p.contains("upper") ? NumberParam(p, "upper") : x0 + 10.0;
  double sampled = SampledBeta(d2v, lower, upper);
  if (!p.contains("lower") && sampled > 0.0 && sampled < 1.0) {
    const Grid1D wide = DefaultGrid(sampled, x0, points);
    lower = wide.lower();
    upper = wide.upper();
    sampled = std::max(sampled, SampledBeta(d2v, lower, upper));
  }
  double beta = sampled;
  if (p.contains("beta")) {
    beta = NumberParam(p, "beta");
    if (sampled > beta * (1.0 + 1e-9)) {
      throw std::invalid_argument("declared --beta " + FormatDouble(beta) +
                                  " is below sampled max |V''| " +
                                  FormatDouble(sampled));
    }
  }
  RequirePositive(beta, "beta");
  const Grid1D grid = p.contains("lower")
                          ? Grid1D(lower, upper, points)
                          : DefaultGrid(beta, x0, points);
  const Potential1D potential([v_expr](double x) { return v_expr(x); },
                              [dv](double x) { return dv(x); }, beta);
  const DensityField density = SolveTransitionDensity(potential, x0, t, grid);

  RunResult result;
  result.report.extra["beta"] = beta;
  result.report.extra["sampled_beta"] = sampled;
  result.report.extra["potential_derivative"] = dv.ToString();
  const double s2 = -std::expm1(-2.0 * beta * t) / beta;
  std::optional<TestFunction> custom;
  if (p.contains("f")) {
    const Expression f = Expression::Parse(p.at("f").get<std::string>());
    const Expression df = f.Derivative();
    custom = TestFunction{[f](double y) { return f(y); },
                          [df](double y) { return df(y); },
                          p.at("f").get<std::string>()};
  }
  for (const std::string& m : modes) {
    if (m == "srt") {
      result.report.checks.push_back(VerifySrt(density, beta, v, q));
    } else if (m == "lge") {
      const TestFunction f = custom ? *custom : ExponentialTilt(0.3);
      result.report.checks.push_back(
          VerifyLgeAndHarnack(density, beta, f, FunctionalMode::kLge, p_exp, v));
    } else if (m == "shp") {
      const TestFunction f =
          custom ? *custom : ExponentialTilt(v / ((p_exp - 1.0) * s2));
      result.report.checks.push_back(
          VerifyLgeAndHarnack(density, beta, f, FunctionalMode::kShP, p_exp, v));
    } else {
      const double c = v / s2;
      const double reach = std::max(std::abs(grid.lower()), std::abs(grid.upper())) +
                           std::abs(v);
      const TestFunction f =
          custom ? *custom : AffineFunction(c, std::abs(c) * reach + 1.0);
      result.report.checks.push_back(VerifyLgeAndHarnack(
          density, beta, f, FunctionalMode::kShLog, p_exp, v));
    }
  }
  std::ostringstream csv;
  WriteDensityCsv(density, csv);
  result.files["density.csv"] = csv.str();
  return result;
}

RunResult RunScore(const ExperimentConfig& config) {
  const json& p = config.parameters;
  const int d = IntParam(p, "d");
  const int n = IntParam(p, "n");
  const auto lambdas = ListParam(p, "lambdas");
  const auto deltas = ListParam(p, "deltas");
  if (d < 1) throw std::invalid_argument("--d must be >= 1");
  if (n < 1) throw std::invalid_argument("--n must be >= 1");
  Potential potential;
  SamplingMethod method;
  double beta;
  if (p.contains("potential")) {
    if (d != 1) throw std::invalid_argument("--potential needs --d 1");
    const Expression v_expr =
        Expression::Parse(p.at("potential").get<std::string>());
    const Expression dv = v_expr.Derivative();
    const double sampled = SampledBeta(dv.Derivative(), -30.0, 30.0);
    beta = p.contains("beta") ? NumberParam(p, "beta") : sampled;
    if (sampled > beta * (1.0 + 1e-9)) {
      throw std::invalid_argument("declared --beta is below sampled max |V''|");
    }
    RequirePositive(beta, "beta");
    potential = Potential::OneDimensional([v_expr](double x) { return v_expr(x); },
                                          [dv](double x) { return dv(x); }, beta);
    method = SamplingMethod::kInverseCdf1d;
  } else {
    beta = p.contains("beta") ? NumberParam(p, "beta") : 1.0;
    RequirePositive(beta, "beta");
    potential = Potential::IsotropicGaussian(d, beta);
    method = SamplingMethod::kExactGaussian;
  }
  if (p.contains("method")) method = ParseSamplingMethod(p.at("method").get<std::string>());

  const SampleSet samples = SamplePi(potential, n, config.seed, method);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
  e[0] = 1.0;
  RunResult result;
  for (const MgfEntry& m : ScoreMgfCheck(samples, potential, e, beta, lambdas)) {
    Check c = MakeCheck("mgf lambda=" + FormatDouble(m.lambda), m.empirical,
                        m.bound * (1.0 + 3.0 * m.standard_error), m.pass);
    result.report.checks.push_back(c);
    result.report.extra["mgf"].push_back({{"lambda", m.lambda},
                                          {"empirical", m.empirical},
                                          {"bound", m.bound},
                                          {"ratio", m.ratio},
                                          {"standard_error", m.standard_error},
                                          {"ci_low", m.ci_low},
                                          {"ci_high", m.ci_high}});
  }
  // E grad V = 0 within 4 standard errors per coordinate, and
  // E |grad V|^2 <= beta d up to 4 standard errors.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(d);
  double norm2 = 0.0;
  double norm4 = 0.0;
  for (const Eigen::VectorXd& x : samples.samples) {
    const Eigen::VectorXd g = potential.gradient(x);
    mean += g;
    sq += g.cwiseProduct(g);
    norm2 += g.squaredNorm();
    norm4 += g.squaredNorm() * g.squaredNorm();
  }
  mean /= n;
  sq /= n;
  norm2 /= n;
  norm4 /= n;
  for (int j = 0; j < d; ++j) {
    const double se = std::sqrt(std::max(0.0, sq[j] - mean[j] * mean[j]) / n);
    result.report.checks.push_back(
        MakeCheck("mean_score coord=" + std::to_string(j), std::abs(mean[j]),
                  4.0 * se, std::abs(mean[j]) <= 4.0 * se));
  }
  const double se2 = std::sqrt(std::max(0.0, norm4 - norm2 * norm2) / n);
  result.report.checks.push_back(MakeCheck(
      "second_moment", norm2, beta * d + 4.0 * se2, norm2 <= beta * d + 4.0 * se2));
  const NormTailReport tail = ScoreNormTail(samples, potential, beta, deltas);
  result.report.extra["fitted_constant"] = tail.fitted_constant;
  for (const NormTailEntry& t : tail.entries) {
    result.report.extra["norm_tail"].push_back({{"delta", t.delta},
                                                {"quantile", t.quantile},
                                                {"profile", t.profile},
                                                {"ratio", t.ratio}});
  }
  result.report.extra["beta"] = beta;
  result.report.extra["method"] = SamplingMethodName(samples.method);
  if (samples.method == SamplingMethod::kLangevin) {
    result.report.extra["langevin"] = {{"step_size", samples.step_size},
                                       {"burn_in", samples.burn_in},
                                       {"thinning", samples.thinning},
                                       {"note", "unadjusted; carries O(h) bias"}};
  }
  return result;
}

json MatrixJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

RunResult RunCoupling(const ExperimentConfig& config) {
  const json& p = config.parameters;
  const int instances = IntParam(p, "instances");
  const int states = IntParam(p, "states");
  const auto qs = ListParam(p, "q");
  if (instances < 1) throw std::invalid_argument("--instances must be >= 1");
  if (states < 1 || states > 6) throw std::invalid_argument("--states must be 1..6");
  for (double q : qs) static_cast<void>(RenyiOrder{q});
  std::mt19937_64 rng(config.seed);
  std::vector<ShiftedCompositionInstance> batch;
  for (int i = 0; i < instances; ++i) {
    batch.push_back(RandomShiftedCompositionInstance(states, rng));
  }
  const int cells = instances * static_cast<int>(qs.size());
  std::vector<ShiftedCompositionReport> reports(cells);
  std::vector<ShiftedCompositionReport> identity(cells);
  ParallelFor(cells, [&](int k) {
    const ShiftedCompositionInstance& inst = batch[k / qs.size()];
    const RenyiOrder q(qs[k % qs.size()]);
    reports[k] = VerifyShiftedCompositionFinite(inst, q);
    ShiftedCompositionInstance same{inst.mu_xy, inst.mu_xy.rowwise().sum(),
                                    inst.mu_xy};
    identity[k] = VerifyShiftedCompositionFinite(same, q);
  });
  RunResult result;
  for (int k = 0; k < cells; ++k) {
    const int i = k / static_cast<int>(qs.size());
    const double q = qs[k % qs.size()];
    const std::string label = Label({{"instance", i}, {"q", q}});
    const ShiftedCompositionReport& r = reports[k];
    result.report.checks.push_back(
        MakeCheck("shifted_composition " + label, r.lhs, r.rhs, r.pass));
    if (!r.pass) {
      result.report.extra["failing_instances"].push_back(
          {{"label", label},
           {"mu_xy", MatrixJson(batch[i].mu_xy)},
           {"mu_x_prime", MatrixJson(batch[i].mu_x_prime)},
           {"nu_xy", MatrixJson(batch[i].nu_xy)}});
    }
    const ShiftedCompositionReport& s = identity[k];
    result.report.checks.push_back(
        MakeCheck("identity " + label, s.lhs, s.rhs,
                  std::abs(s.lhs) <= 1e-12 && std::abs(s.rhs) <= 1e-12));
  }
  return result;
}

RunResult RunDualsd(const ExperimentConfig& config) {
  const json& p = config.parameters;
  const RenyiOrder q(NumberParam(p, "q"));
  const double sigma2 = NumberParam(p, "sigma2");
  const double xi2 = NumberParam(p, "xi2");
  RequirePositive(sigma2, "sigma2");
  RequirePositive(xi2, "xi2");
  struct Case {
    Eigen::VectorXd mu, nu;
    double z, a;
  };
  std::vector<Case> cases;
  const int random = IntParam(p, "random");
  if (random > 0) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::uniform_real_distribution<double> mag(0.0, 2.0);
    for (int k = 0; k < random; ++k) {
      const int d = 1 + k % 3;
      Eigen::VectorXd mu(d), nu(d);
      for (int j = 0; j < d; ++j) {
        mu[j] = unif(rng);
        nu[j] = unif(rng);
      }
      // Cycle through the four (shift sign, budget) cases.
      const double zabs = 0.05 + mag(rng);
      const double z = (k % 2 == 0) ? zabs : -zabs;
      const double a = ((k / 2) % 2 == 0) ? zabs * unif(rng) * unif(rng) / 4.0
                                           : zabs + mag(rng);
      cases.push_back({mu, nu, z, std::abs(a)});
    }
  } else {
    const auto mu = ListParam(p, "mu");
    const auto nu = ListParam(p, "nu");
    if (mu.size() != nu.size()) throw std::invalid_argument("--mu/--nu sizes differ");
    Case c;
    c.mu = Eigen::Map<const Eigen::VectorXd>(mu.data(), mu.size());
    c.nu = Eigen::Map<const Eigen::VectorXd>(nu.data(), nu.size());
    c.z = NumberParam(p, "z");
    c.a = NumberParam(p, "a");
    cases.push_back(c);
  }
  RunResult result;
  for (size_t k = 0; k < cases.size(); ++k) {
    const Case& c = cases[k];
    const int d = static_cast<int>(c.mu.size());
    const GaussianMeasure mu = GaussianMeasure::Isotropic(c.mu, sigma2);
    const GaussianMeasure nu = GaussianMeasure::Isotropic(c.nu, sigma2);
    const GaussianMeasure xi =
        GaussianMeasure::Isotropic(Eigen::VectorXd::Zero(d), xi2);
    const ConvolutionLemmaReport r = VerifyConvolutionLemma(mu, nu, xi, c.z, c.a, q);
    result.report.checks.push_back(MakeCheck(
        "convolution_lemma " + r.shift_case + " " + r.budget_case + " " +
            Label({{"case", static_cast<double>(k)}, {"z", c.z}, {"a", c.a}}),
        r.lhs, r.rhs, r.pass));
    if (cases.size() == 1) {
      result.report.extra["dual"] =
          DualShiftedRenyiGaussian(mu, nu, std::abs(c.z), q);
      result.report.extra["standard_translate_upper_bound"] =
          StandardShiftedRenyiGaussianTranslate(mu, nu, std::abs(c.z), q);
      result.report.extra["sensitivity"] = GaussianSensitivity(xi2, c.a, q);
    }
  }
  return result;
}

// --- argument parsing --------------------------------------------------

std::vector<std::string> ReadConfigTokens(const std::string& path,
                                          std::string* command) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(number) +
                                  ": expected key=value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument(path + ":" + std::to_string(number) +
                                  ": empty key");
    }
    if (key == "command") {
      *command = value;
      continue;
    }
    if (value == "false") continue;
    tokens.push_back("--" + key);
    if (value != "true") tokens.push_back(value);
  }
  return tokens;
}

ExperimentConfig ParseInternal(std::vector<std::string> args) {
  // Pull out --config and merge its tokens right after the command name.
  std::string config_path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw std::invalid_argument("--config needs a path");
      config_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      --i;
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + i);
      --i;
    }
  }
  if (!config_path.empty()) {
    std::string file_command;
    std::vector<std::string> tokens = ReadConfigTokens(config_path, &file_command);
    auto pos = std::find_if(args.begin(), args.end(), [](const std::string& a) {
      return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
    });
    if (pos == args.end()) {
      if (file_command.empty()) {
        throw std::invalid_argument("no command given on the command line or "
                                    "in the config file");
      }
      args.insert(args.begin(), file_command);
      pos = args.begin();
    }
    args.insert(pos + 1, tokens.begin(), tokens.end());
  }

  CLI::App app{"Sharp forward-regularity laboratory"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string out_dir;
  std::uint64_t seed = 0;
  app.add_option("--out", out_dir, "Directory for report.json and CSV files");
  app.add_option("--seed", seed, "Random seed");

  ExperimentConfig config;
  json& params = config.parameters;

  // tightness
  std::string t_l = "1", t_h = "0.1", t_n = "2", t_q = "2", t_v = "1";
  CLI::App* tightness = app.add_subcommand(
      "tightness", "OU exact divergence vs the discrete bound");
  tightness->set_help_flag("--help", "Print this help message and exit");
  tightness->add_option("--L", t_l, "Lipschitz constant(s), comma separated");
  tightness->add_option("--h", t_h, "Step size(s)");
  tightness->add_option("--N", t_n, "Step count(s)");
  tightness->add_option("--q", t_q, "Renyi order(s)");
  tightness->add_option("--v", t_v, "Shift norm(s)");

  // schedule
  double s_c1 = 0, s_c2 = 0, s_l = 1, s_t = 1;
  int s_n = 1, s_samples = 101;
  bool s_cont = false;
  CLI::App* schedule = app.add_subcommand("schedule", "Optimal shift schedule");
  CLI::Option* c1_opt = schedule->add_option("--c1", s_c1, "One-step coefficient c1");
  CLI::Option* c2_opt = schedule->add_option("--c2", s_c2, "One-step coefficient c2");
  CLI::Option* n_opt = schedule->add_option("--N", s_n, "Number of steps");
  schedule->add_flag("--continuous", s_cont, "Continuous-time sinh schedule");
  schedule->add_option("--L", s_l, "Lipschitz constant (continuous)");
  schedule->add_option("--T", s_t, "Horizon (continuous)");
  schedule->add_option("--samples", s_samples, "CSV sample count (continuous)");

  // bounds-table
  std::string b_kinds = "SRT_q,SRT_1,SH_p,SH_log,LGE", b_beta = "1",
              b_t = "0.5,1,2,inf", b_order = "2", b_v = "1";
  CLI::App* bounds = app.add_subcommand("bounds-table", "Sharp constants table");
  bounds->add_option("--kinds", b_kinds, "Comma separated kinds");
  bounds->add_option("--beta", b_beta, "Smoothness constant(s)");
  bounds->add_option("--t", b_t, "Time(s); inf for stationary");
  bounds->add_option("--order", b_order, "q for SRT_q, p for SH_p");
  bounds->add_option("--v", b_v, "Shift norm(s)");

  // fpverify
  std::string f_pot = "x^2/2", f_mode = "srt", f_f;
  double f_beta = 0, f_x0 = 0, f_t = 1, f_v = 0.5, f_q = 1, f_p = 2, f_lo = 0,
         f_hi = 0;
  int f_points = 4096;
  CLI::App* fp = app.add_subcommand("fpverify", "Fokker-Planck verification");
  fp->add_option("--potential", f_pot, "V(x) expression");
  CLI::Option* fbeta = fp->add_option("--beta", f_beta, "Declared sup |V''|");
  fp->add_option("--x0", f_x0, "Starting point");
  fp->add_option("--t", f_t, "Time");
  fp->add_option("--v", f_v, "Shift");
  fp->add_option("--q", f_q, "Renyi order for srt");
  fp->add_option("--p", f_p, "Harnack exponent for shp");
  fp->add_option("--mode", f_mode, "srt, lge, shp, shlog or all");
  CLI::Option* ff = fp->add_option("--f", f_f, "Test function expression");
  fp->add_option("--points", f_points, "Grid points");
  CLI::Option* flo = fp->add_option("--lower", f_lo, "Grid lower end");
  CLI::Option* fhi = fp->add_option("--upper", f_hi, "Grid upper end");

  // score
  std::string sc_pot, sc_method, sc_lambdas = "-1,-0.5,0.5,1",
                                 sc_deltas = "0.5,0.1,0.01";
  double sc_beta = 1;
  int sc_d = 1, sc_n = 100000;
  CLI::App* score = app.add_subcommand("score", "Score concentration checks");
  CLI::Option* sc_pot_opt = score->add_option("--potential", sc_pot, "1D V(x)");
  CLI::Option* sc_beta_opt = score->add_option("--beta", sc_beta, "Smoothness");
  score->add_option("--d", sc_d, "Dimension");
  score->add_option("--n", sc_n, "Sample count");
  CLI::Option* sc_method_opt = score->add_option("--method", sc_method,
                                                 "exact_gaussian, inverse_cdf_1d, langevin");
  score->add_option("--lambdas", sc_lambdas, "MGF arguments");
  score->add_option("--deltas", sc_deltas, "Tail levels");

  // coupling
  int cp_instances = 50, cp_states = 3;
  std::string cp_q = "1,2";
  CLI::App* coupling = app.add_subcommand("coupling", "Finite shifted composition");
  coupling->add_option("--instances", cp_instances, "Random instances");
  coupling->add_option("--states", cp_states, "|Omega|");
  coupling->add_option("--q", cp_q, "Renyi order(s)");

  // dualsd
  std::string d_mu = "1", d_nu = "0";
  double d_sigma2 = 1, d_xi2 = 1, d_z = -0.5, d_a = 0.25, d_q = 2;
  int d_random = 0;
  CLI::App* dualsd = app.add_subcommand("dualsd", "Generalized convolution lemma");
  dualsd->add_option("--mu", d_mu, "Mean of mu (comma separated)");
  dualsd->add_option("--nu", d_nu, "Mean of nu");
  dualsd->add_option("--sigma2", d_sigma2, "Shared variance");
  dualsd->add_option("--xi2", d_xi2, "Noise variance");
  dualsd->add_option("--z", d_z, "Signed shift (negative = dual)");
  dualsd->add_option("--a", d_a, "Shift budget a >= 0");
  dualsd->add_option("--q", d_q, "Renyi order");
  dualsd->add_option("--random", d_random, "Run this many random instances");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequest{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequest{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw std::invalid_argument(e.what());
  }

  config.output_path = out_dir;
  config.seed = seed;
  if (tightness->parsed()) {
    config.command = "tightness";
    params["L"] = ListJson(ParseList(t_l, "L"));
    params["h"] = ListJson(ParseList(t_h, "h"));
    params["N"] = ListJson(ParseList(t_n, "N"));
    params["q"] = ListJson(ParseList(t_q, "q"));
    params["v"] = ListJson(ParseList(t_v, "v"));
  } else if (schedule->parsed()) {
    config.command = "schedule";
    params["continuous"] = s_cont;
    if (s_cont) {
      params["L"] = s_l;
      params["T"] = s_t;
      params["samples"] = s_samples;
    } else {
      if (!*c1_opt || !*c2_opt || !*n_opt) {
        throw std::invalid_argument("schedule needs --c1, --c2 and --N");
      }
      params["c1"] = s_c1;
      params["c2"] = s_c2;
      params["N"] = s_n;
    }
  } else if (bounds->parsed()) {
    config.command = "bounds-table";
    json kinds = json::array();
    std::stringstream stream(b_kinds);
    std::string item;
    while (std::getline(stream, item, ',')) kinds.push_back(Trim(item));
    params["kinds"] = kinds;
    params["beta"] = ListJson(ParseList(b_beta, "beta"));
    params["t"] = ListJson(ParseList(b_t, "t"));
    params["order"] = ListJson(ParseList(b_order, "order"));
    params["v"] = ListJson(ParseList(b_v, "v"));
  } else if (fp->parsed()) {
    config.command = "fpverify";
    params["potential"] = f_pot;
    if (*fbeta) params["beta"] = f_beta;
    params["x0"] = f_x0;
    params["t"] = f_t;
    params["v"] = f_v;
    params["q"] = f_q;
    params["p"] = f_p;
    params["mode"] = f_mode;
    if (*ff) params["f"] = f_f;
    params["points"] = f_points;
    if (static_cast<bool>(*flo) != static_cast<bool>(*fhi)) {
      throw std::invalid_argument("--lower and --upper go together");
    }
    if (*flo) {
      params["lower"] = f_lo;
      params["upper"] = f_hi;
    }
  } else if (score->parsed()) {
    config.command = "score";
    if (*sc_pot_opt) params["potential"] = sc_pot;
    if (*sc_beta_opt) params["beta"] = sc_beta;
    if (*sc_method_opt) params["method"] = sc_method;
    params["d"] = sc_d;
    params["n"] = sc_n;
    params["lambdas"] = ListJson(ParseList(sc_lambdas, "lambdas"));
    params["deltas"] = ListJson(ParseList(sc_deltas, "deltas"));
  } else if (coupling->parsed()) {
    config.command = "coupling";
    params["instances"] = cp_instances;
    params["states"] = cp_states;
    params["q"] = ListJson(ParseList(cp_q, "q"));
  } else if (dualsd->parsed()) {
    config.command = "dualsd";
    params["mu"] = ListJson(ParseList(d_mu, "mu"));
    params["nu"] = ListJson(ParseList(d_nu, "nu"));
    params["sigma2"] = d_sigma2;
    params["xi2"] = d_xi2;
    params["z"] = d_z;
    params["a"] = d_a;
    params["q"] = d_q;
    params["random"] = d_random;
  }
  return config;
}

}  // namespace

ExperimentConfig ParseArguments(const std::vector<std::string>& args) {
  try {
    return ParseInternal(args);
  } catch (const HelpRequest&) {
    throw std::invalid_argument("help requested");
  }
}

RunResult Execute(const ExperimentConfig& config) {
  RunResult result;
  try {
    if (config.command == "tightness") {
      result = RunTightness(config);
    } else if (config.command == "schedule") {
      result = RunSchedule(config);
    } else if (config.command == "bounds-table") {
      result = RunBoundsTable(config);
    } else if (config.command == "fpverify") {
      result = RunFpVerify(config);
    } else if (config.command == "score") {
      result = RunScore(config);
    } else if (config.command == "coupling") {
      result = RunCoupling(config);
    } else if (config.command == "dualsd") {
      result = RunDualsd(config);
    } else {
      throw std::invalid_argument("unknown command: " + config.command);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("missing or malformed parameter: ") +
                                e.what());
  }
  result.report.command = config.command;
  result.report.params = config.parameters;
  result.report.seed = config.seed;
  return result;
}

int Run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  return WriteResult(Execute(config), config, out, err);
}

int WriteResult(RunResult result, const ExperimentConfig& config,
                std::ostream& out, std::ostream& err) {
  const bool passed = result.report.AllPassed();
  if (!passed) {
    json failing = json::array();
    for (const Check& c : result.report.checks) {
      if (!c.pass) failing.push_back(c);
    }
    result.report.extra["failing"] = failing;
  }
  const std::string text = DumpJson(result.report.ToJson());
  out << text;
  if (!config.output_path.empty()) {
    std::filesystem::create_directories(config.output_path);
    const std::filesystem::path dir(config.output_path);
    std::ofstream(dir / "report.json") << text;
    for (const auto& [name, contents] : result.files) {
      std::ofstream(dir / name) << contents;
    }
  }
  if (!passed) {
    for (const Check& c : result.report.checks) {
      if (!c.pass) {
        err << "FAILED " << c.name << ": lhs=" << FormatDouble(c.lhs)
            << " rhs=" << FormatDouble(c.rhs) << '\n';
      }
    }
    return kExitFail;
  }
  return kExitPass;
}

int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err) {
  ExperimentConfig config;
  try {
    config = ParseInternal(args);
  } catch (const HelpRequest& help) {
    out << help.text;
    return kExitPass;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  }
  try {
    return Run(config, out, err);
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }
}

}  // namespace shiftlab
