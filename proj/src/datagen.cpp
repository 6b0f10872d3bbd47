// Copyright 2026 The sparsereg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sparsereg/datagen.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "sparsereg/rng.hpp"

namespace sparsereg {
namespace {
enum Stream : std::uint64_t { kDesign = 1, kSupport = 2, kSigns = 3, kNoise = 4 };
}

void SyntheticSpec::validate() const {
  if (n < 1 || p < 1) throw std::invalid_argument("synthetic spec: n and p must be >= 1");
  if (k < 0 || k > p) throw std::invalid_argument("synthetic spec: k must lie in [0, p]");
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("synthetic spec: rho must lie in [0, 1)");
  if (!(snr_sqrt > 0.0) || !std::isfinite(snr_sqrt))
    throw std::invalid_argument("synthetic spec: snr_sqrt must be positive");
}

void ar1_transform(double rho, Eigen::Ref<Eigen::VectorXd> z) {
  const double innovation = std::sqrt(1.0 - rho * rho);
  for (Eigen::Index j = 1; j < z.size(); ++j) z(j) = rho * z(j - 1) + innovation * z(j);
}

SyntheticInstance generate(const SyntheticSpec& spec) {
  spec.validate();
  SyntheticInstance inst;
  Eigen::MatrixXd X(spec.n, spec.p);
  CounterRng design(spec.seed, kDesign);
  Eigen::VectorXd row(spec.p);
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.p; ++j) row(j) = design.normal();
    ar1_transform(spec.rho, row);
    X.row(i) = row.transpose();
  }

  CounterRng picker(spec.seed, kSupport);
  std::vector<int> perm(static_cast<std::size_t>(spec.p));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < spec.k; ++i) {
    const auto j = static_cast<std::size_t>(i) + picker.below(static_cast<std::uint64_t>(spec.p - i));
    std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
  }
  perm.resize(static_cast<std::size_t>(spec.k));
  inst.support_true = Support(perm);

  CounterRng signs(spec.seed, kSigns);
  inst.w_true = Eigen::VectorXd::Zero(spec.p);
  inst.signs.resize(spec.k);
  for (int i = 0; i < spec.k; ++i) {
    const int sign = (signs.next_u64() >> 63) ? 1 : -1;
    inst.signs(i) = sign;
    inst.w_true(inst.support_true[static_cast<std::size_t>(i)]) = sign;
  }

  const Eigen::VectorXd signal = X * inst.w_true;
  const double signal_norm = signal.norm();
  CounterRng noise_rng(spec.seed, kNoise);
  Eigen::VectorXd noise(spec.n);
  do {
    for (int i = 0; i < spec.n; ++i) noise(i) = noise_rng.normal();
  } while (noise.squaredNorm() == 0.0);
  noise *= signal_norm / (spec.snr_sqrt * noise.norm());

  inst.sigma2_effective = noise.squaredNorm() / spec.n;
  inst.data = Dataset(std::move(X), signal + noise);
  return inst;
}

Thresholds theoretical_thresholds(int k, int p, double sigma2) {
  if (k < 1 || p <= k) throw std::invalid_argument("theoretical_thresholds: need 1 <= k < p");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("theoretical_thresholds: sigma2 must be >= 0");
  Thresholds t;
  t.n1 = (2.0 * k + sigma2) * std::log(static_cast<double>(p - k));
  t.n0 = sigma2 == 0.0 ? 0.0 : 2.0 * k * std::log(static_cast<double>(p)) / std::log1p(2.0 * k / sigma2);
  return t;
}

}  // namespace sparsereg
