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

// Sampling from pi ~ exp(-V) and empirical checks that the score grad V(X)
// is sqrt(beta)-sub-Gaussian under pi.
//
// Samples are drawn on kSampleStreams independent mt19937_64 streams seeded
// from (seed, stream index) and concatenated in stream order, so the output
// depends only on the seed, never on the worker count.

#ifndef SHIFTLAB_SAMPLER_H_
#define SHIFTLAB_SAMPLER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace shiftlab {

inline constexpr int kSampleStreams = 16;
inline constexpr int kBootstrapResamples = 200;

struct Potential {
  int dim = 1;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  double beta = 1.0;
  // Set when V(x) = precision |x|^2 / 2; enables exact sampling.
  std::optional<double> gaussian_precision;

  static Potential IsotropicGaussian(int dim, double precision);
  static Potential OneDimensional(std::function<double(double)> value,
                                  std::function<double(double)> derivative,
                                  double beta);
};

enum class SamplingMethod { kExactGaussian, kInverseCdf1d, kLangevin };

std::string SamplingMethodName(SamplingMethod method);
SamplingMethod ParseSamplingMethod(const std::string& name);

struct SampleSet {
  std::vector<Eigen::VectorXd> samples;
  std::uint64_t seed = 0;
  SamplingMethod method = SamplingMethod::kExactGaussian;
  // Unadjusted Langevin only.
  double step_size = 0.0;
  int burn_in = 0;
  int thinning = 0;
};

struct InverseCdfOptions {
  double lower = -30.0;
  double upper = 30.0;
  int nodes = 65536;
};

// Draws n samples. Throws std::invalid_argument for n < 1, a method that
// does not fit the potential, or (inverse CDF) a density that does not decay
// to 1e-12 of its peak at the truncation boundary.
SampleSet SamplePi(const Potential& potential, int n, std::uint64_t seed,
                   SamplingMethod method,
                   const InverseCdfOptions& cdf_options = {});

// CDF of pi on the truncation grid used by the inverse-CDF sampler.
struct TabulatedCdf {
  std::vector<double> x;
  std::vector<double> cdf;
  double Evaluate(double y) const;
};
TabulatedCdf BuildCdf1d(const Potential& potential,
                        const InverseCdfOptions& options = {});

struct MgfEntry {
  double lambda;
  double empirical;       // mean of exp(lambda <e, grad V(X)>)
  double bound;           // exp(lambda^2 beta / 2)
  double ratio;           // empirical / bound
  double standard_error;  // bootstrap SE of the empirical mean
  double ci_low;          // 2.5% bootstrap percentile
  double ci_high;         // 97.5% bootstrap percentile
  bool pass;              // empirical <= bound (1 + 3 SE)
};

// Requires |e| = 1 (within 1e-12) and |lambda| sqrt(beta) <= 3.
std::vector<MgfEntry> ScoreMgfCheck(const SampleSet& samples,
                                    const Potential& potential,
                                    const Eigen::VectorXd& direction,
                                    double beta,
                                    const std::vector<double>& lambdas);

struct NormTailEntry {
  double delta;
  double quantile;    // empirical (1 - delta) quantile of |grad V(X)|
  double profile;     // sqrt(beta d) + sqrt(beta log(1/delta))
  double ratio;       // quantile / profile
};

struct NormTailReport {
  std::vector<NormTailEntry> entries;
  double fitted_constant;  // max ratio: smallest C valid for every delta
};

// Requires n >= 100 / delta for every delta in (0, 1).
NormTailReport ScoreNormTail(const SampleSet& samples,
                             const Potential& potential, double beta,
                             const std::vector<double>& deltas);

}  // namespace shiftlab

#endif  // SHIFTLAB_SAMPLER_H_
