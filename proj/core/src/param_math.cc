/*
 * Copyright 2026 The SEAFL Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "seafl/param_math.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "seafl/errors.h"

namespace seafl {

namespace {

void CheckSameLength(const ParamVector& a, const ParamVector& b,
                     const char* op) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(op) + ": length mismatch (" +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
}

}  // namespace

ParamVector::ParamVector(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw DimensionError("ParamVector must be non-empty");
}

ParamVector::ParamVector(std::initializer_list<double> values)
    : ParamVector(std::vector<double>(values)) {}

ParamVector ParamVector::Zeros(std::size_t length) {
  return ParamVector(std::vector<double>(length, 0.0));
}

void CheckFinite(const ParamVector& v, const char* context) {
  for (double x : v.values()) {
    if (!std::isfinite(x)) {
      throw NumericError(std::string(context) + ": non-finite parameter");
    }
  }
}

double Dot(const ParamVector& a, const ParamVector& b) {
  CheckSameLength(a, b, "Dot");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double Norm(const ParamVector& a) { return std::sqrt(Dot(a, a)); }

double CosineSimilarity(const ParamVector& a, const ParamVector& b) {
  CheckSameLength(a, b, "CosineSimilarity");
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(Dot(a, b) / (na * nb), -1.0, 1.0);
}

ParamVector Subtract(const ParamVector& a, const ParamVector& b) {
  CheckSameLength(a, b, "Subtract");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  ParamVector result(std::move(out));
  CheckFinite(result, "Subtract");
  return result;
}

ParamVector WeightedSum(std::span<const WeightedParams> terms) {
  if (terms.empty()) throw EmptyBufferError("WeightedSum: no terms");
  const std::size_t n = terms.front().params.get().size();
  std::vector<double> out(n, 0.0);
  for (const auto& term : terms) {
    const ParamVector& p = term.params.get();
    if (p.size() != n) {
      throw DimensionError("WeightedSum: length mismatch (" +
                           std::to_string(n) + " vs " +
                           std::to_string(p.size()) + ")");
    }
    if (!std::isfinite(term.weight)) {
      throw NumericError("WeightedSum: non-finite weight");
    }
    for (std::size_t i = 0; i < n; ++i) out[i] += term.weight * p[i];
  }
  ParamVector result(std::move(out));
  CheckFinite(result, "WeightedSum");
  return result;
}

ParamVector Mix(const ParamVector& global, const ParamVector& fresh,
                double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw ConfigError("Mix: theta must lie in [0, 1], got " +
                      std::to_string(theta));
  }
  CheckSameLength(global, fresh, "Mix");
  std::vector<double> out(global.size());
  for (std::size_t i = 0; i < global.size(); ++i) {
    out[i] = (1.0 - theta) * global[i] + theta * fresh[i];
  }
  ParamVector result(std::move(out));
  CheckFinite(result, "Mix");
  return result;
}

}  // namespace seafl
