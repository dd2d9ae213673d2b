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

#include "shiftlab/sampler.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

#include "shiftlab/parallel.h"

namespace shiftlab {
namespace {

constexpr double kTruncationRatio = 1e-12;
constexpr double kMaxLambdaSqrtBeta = 3.0;
constexpr int kLangevinBurnIn = 2000;
constexpr int kLangevinThinning = 10;
constexpr double kLangevinStepFactor = 0.05;  // h = 0.05 / beta
constexpr std::uint64_t kBootstrapStream = 0xb0075;

std::mt19937_64 StreamEngine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

int StreamCount(int n, int stream) {
  return n / kSampleStreams + (stream < n % kSampleStreams ? 1 : 0);
}

double Quantile(const std::vector<double>& sorted, double level) {
  const double h = (sorted.size() - 1) * level;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

}  // namespace

Potential Potential::IsotropicGaussian(int dim, double precision) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(precision > 0.0)) throw std::invalid_argument("precision must be > 0");
  Potential v;
  v.dim = dim;
  v.value = [precision](const Eigen::VectorXd& x) {
    return 0.5 * precision * x.squaredNorm();
  };
  v.gradient = [precision](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return precision * x;
  };
  v.beta = precision;
  v.gaussian_precision = precision;
  return v;
}

Potential Potential::OneDimensional(std::function<double(double)> value,
                                    std::function<double(double)> derivative,
                                    double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  Potential v;
  v.dim = 1;
  v.value = [value](const Eigen::VectorXd& x) { return value(x[0]); };
  v.gradient = [derivative](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return Eigen::VectorXd::Constant(1, derivative(x[0]));
  };
  v.beta = beta;
  return v;
}

std::string SamplingMethodName(SamplingMethod method) {
  switch (method) {
    case SamplingMethod::kExactGaussian:
      return "exact_gaussian";
    case SamplingMethod::kInverseCdf1d:
      return "inverse_cdf_1d";
    case SamplingMethod::kLangevin:
      return "langevin";
  }
  return "unknown";
}

SamplingMethod ParseSamplingMethod(const std::string& name) {
  for (SamplingMethod m :
       {SamplingMethod::kExactGaussian, SamplingMethod::kInverseCdf1d,
        SamplingMethod::kLangevin}) {
    if (SamplingMethodName(m) == name) return m;
  }
  throw std::invalid_argument("unknown sampling method: " + name);
}

double TabulatedCdf::Evaluate(double y) const {
  if (y <= x.front()) return 0.0;
  if (y >= x.back()) return 1.0;
  const auto it = std::upper_bound(x.begin(), x.end(), y);
  const size_t i = static_cast<size_t>(it - x.begin()) - 1;
  const double frac = (y - x[i]) / (x[i + 1] - x[i]);
  return cdf[i] + frac * (cdf[i + 1] - cdf[i]);
}

TabulatedCdf BuildCdf1d(const Potential& potential,
                        const InverseCdfOptions& options) {
  if (potential.dim != 1) {
    throw std::invalid_argument("inverse-CDF sampling needs d = 1");
  }
  if (!(options.upper > options.lower) || options.nodes < 2) {
    throw std::invalid_argument("bad truncation grid");
  }
  const int n = options.nodes;
  const double dx = (options.upper - options.lower) / (n - 1);
  TabulatedCdf table;
  table.x.resize(n);
  std::vector<double> neg_log(n);
  double low = std::numeric_limits<double>::infinity();
  Eigen::VectorXd point(1);
  for (int i = 0; i < n; ++i) {
    table.x[i] = options.lower + i * dx;
    point[0] = table.x[i];
    neg_log[i] = potential.value(point);
    if (std::isnan(neg_log[i])) {
      throw std::invalid_argument("V is not finite on the truncation grid");
    }
    low = std::min(low, neg_log[i]);
  }
  std::vector<double> density(n);
  for (int i = 0; i < n; ++i) density[i] = std::exp(low - neg_log[i]);
  if (std::max(density.front(), density.back()) > kTruncationRatio) {
    throw std::invalid_argument(
        "density does not decay on the truncation domain (unnormalizable V "
        "or domain too narrow)");
  }
  table.cdf.assign(n, 0.0);
  for (int i = 1; i < n; ++i) {
    table.cdf[i] = table.cdf[i - 1] + 0.5 * dx * (density[i - 1] + density[i]);
  }
  const double mass = table.cdf.back();
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw std::invalid_argument("density mass is not finite");
  }
  for (double& c : table.cdf) c /= mass;
  return table;
}

SampleSet SamplePi(const Potential& potential, int n, std::uint64_t seed,
                   SamplingMethod method, const InverseCdfOptions& cdf_options) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (potential.dim < 1 || !potential.gradient || !potential.value) {
    throw std::invalid_argument("potential is incomplete");
  }
  SampleSet set;
  set.seed = seed;
  set.method = method;
  const int d = potential.dim;

  std::function<void(std::mt19937_64&, std::vector<Eigen::VectorXd>&, int)>
      draw;
  TabulatedCdf table;
  switch (method) {
    case SamplingMethod::kExactGaussian: {
      if (!potential.gaussian_precision) {
        throw std::invalid_argument("exact_gaussian needs a Gaussian potential");
      }
      const double scale = 1.0 / std::sqrt(*potential.gaussian_precision);
      draw = [d, scale](std::mt19937_64& rng, std::vector<Eigen::VectorXd>& out,
                        int count) {
        std::normal_distribution<double> normal;
        for (int k = 0; k < count; ++k) {
          Eigen::VectorXd x(d);
          for (int j = 0; j < d; ++j) x[j] = scale * normal(rng);
          out.push_back(std::move(x));
        }
      };
      break;
    }
    case SamplingMethod::kInverseCdf1d: {
      table = BuildCdf1d(potential, cdf_options);
      draw = [&table](std::mt19937_64& rng, std::vector<Eigen::VectorXd>& out,
                      int count) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int k = 0; k < count; ++k) {
          const double u = unif(rng);
          auto it = std::upper_bound(table.cdf.begin(), table.cdf.end(), u);
          size_t i = static_cast<size_t>(it - table.cdf.begin());
          i = std::clamp<size_t>(i, 1, table.cdf.size() - 1);
          const double span = table.cdf[i] - table.cdf[i - 1];
          const double frac = span > 0.0 ? (u - table.cdf[i - 1]) / span : 0.5;
          out.push_back(Eigen::VectorXd::Constant(
              1, table.x[i - 1] + frac * (table.x[i] - table.x[i - 1])));
        }
      };
      break;
    }
    case SamplingMethod::kLangevin: {
      if (!(potential.beta > 0.0)) {
        throw std::invalid_argument("Langevin needs beta > 0");
      }
      set.step_size = kLangevinStepFactor / potential.beta;
      set.burn_in = kLangevinBurnIn;
      set.thinning = kLangevinThinning;
      const double h = set.step_size;
      draw = [d, h, &potential](std::mt19937_64& rng,
                                std::vector<Eigen::VectorXd>& out, int count) {
        std::normal_distribution<double> normal;
        Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
        const double noise = std::sqrt(2.0 * h);
        auto step = [&]() {
          Eigen::VectorXd xi(d);
          for (int j = 0; j < d; ++j) xi[j] = normal(rng);
          x = x - h * potential.gradient(x) + noise * xi;
        };
        for (int k = 0; k < kLangevinBurnIn; ++k) step();
        for (int k = 0; k < count; ++k) {
          for (int s = 0; s < kLangevinThinning; ++s) step();
          out.push_back(x);
        }
      };
      break;
    }
  }

  std::vector<std::vector<Eigen::VectorXd>> streams(kSampleStreams);
  ParallelFor(kSampleStreams, [&](int s) {
    std::mt19937_64 rng = StreamEngine(seed, static_cast<std::uint64_t>(s));
    const int count = StreamCount(n, s);
    streams[s].reserve(count);
    draw(rng, streams[s], count);
  });
  set.samples.reserve(n);
  for (auto& stream : streams) {
    for (auto& x : stream) set.samples.push_back(std::move(x));
  }
  return set;
}

std::vector<MgfEntry> ScoreMgfCheck(const SampleSet& samples,
                                    const Potential& potential,
                                    const Eigen::VectorXd& direction,
                                    double beta,
                                    const std::vector<double>& lambdas) {
  if (samples.samples.empty()) throw std::invalid_argument("no samples");
  if (direction.size() != potential.dim) {
    throw std::invalid_argument("direction has the wrong dimension");
  }
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("direction must be a unit vector");
  }
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  for (double lambda : lambdas) {
    if (!(std::abs(lambda) * std::sqrt(beta) <= kMaxLambdaSqrtBeta)) {
      throw std::invalid_argument(
          "|lambda| sqrt(beta) must be <= 3 to keep exp() in range");
    }
  }
  const size_t n = samples.samples.size();
  const size_t k = lambdas.size();
  // values(i, j) = exp(lambda_j <e, grad V(X_i)>)
  Eigen::MatrixXd values(n, k);
  for (size_t i = 0; i < n; ++i) {
    const double s = direction.dot(potential.gradient(samples.samples[i]));
    for (size_t j = 0; j < k; ++j) values(i, j) = std::exp(lambdas[j] * s);
  }
  const Eigen::RowVectorXd means = values.colwise().mean();

  std::mt19937_64 rng = StreamEngine(samples.seed, kBootstrapStream);
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  Eigen::MatrixXd boot(kBootstrapResamples, k);
  for (int r = 0; r < kBootstrapResamples; ++r) {
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(k);
    for (size_t i = 0; i < n; ++i) sum += values.row(pick(rng));
    boot.row(r) = sum / static_cast<double>(n);
  }

  std::vector<MgfEntry> entries;
  for (size_t j = 0; j < k; ++j) {
    std::vector<double> column(boot.col(j).data(),
                               boot.col(j).data() + kBootstrapResamples);
    const double mean = boot.col(j).mean();
    const double var = (boot.col(j).array() - mean).square().sum() /
                       (kBootstrapResamples - 1);
    std::sort(column.begin(), column.end());
    MgfEntry e;
    e.lambda = lambdas[j];
    e.empirical = means[j];
    e.bound = std::exp(0.5 * lambdas[j] * lambdas[j] * beta);
    e.ratio = e.empirical / e.bound;
    e.standard_error = std::sqrt(var);
    e.ci_low = Quantile(column, 0.025);
    e.ci_high = Quantile(column, 0.975);
    e.pass = e.empirical <= e.bound * (1.0 + 3.0 * e.standard_error);
    entries.push_back(e);
  }
  return entries;
}

NormTailReport ScoreNormTail(const SampleSet& samples,
                             const Potential& potential, double beta,
                             const std::vector<double>& deltas) {
  if (samples.samples.empty()) throw std::invalid_argument("no samples");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  if (deltas.empty()) throw std::invalid_argument("no tail levels given");
  const double n = static_cast<double>(samples.samples.size());
  for (double delta : deltas) {
    if (!(delta > 0.0 && delta < 1.0)) {
      throw std::invalid_argument("delta must lie in (0, 1)");
    }
    if (n < 100.0 / delta) {
      throw std::invalid_argument("too few samples for the requested delta: "
                                  "need n >= 100 / delta");
    }
  }
  std::vector<double> norms;
  norms.reserve(samples.samples.size());
  for (const Eigen::VectorXd& x : samples.samples) {
    norms.push_back(potential.gradient(x).norm());
  }
  std::sort(norms.begin(), norms.end());
  NormTailReport report;
  report.fitted_constant = 0.0;
  const double d = potential.dim;
  for (double delta : deltas) {
    NormTailEntry e;
    e.delta = delta;
    e.quantile = Quantile(norms, 1.0 - delta);
    e.profile = std::sqrt(beta * d) + std::sqrt(beta * std::log(1.0 / delta));
    e.ratio = e.quantile / e.profile;
    report.fitted_constant = std::max(report.fitted_constant, e.ratio);
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace shiftlab
