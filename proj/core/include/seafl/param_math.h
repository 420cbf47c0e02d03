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

#ifndef SEAFL_PARAM_MATH_H_
#define SEAFL_PARAM_MATH_H_

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace seafl {

// Flat, non-empty array of model parameters. This is the unit exchanged
// between server and devices and the operand of every aggregation rule.
class ParamVector {
 public:
  explicit ParamVector(std::vector<double> values);
  ParamVector(std::initializer_list<double> values);
  // Zero vector of the given length.
  static ParamVector Zeros(std::size_t length);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }

  bool operator==(const ParamVector&) const = default;

 private:
  std::vector<double> values_;
};

// One (weight, vector) term of a weighted sum.
struct WeightedParams {
  double weight;
  std::reference_wrapper<const ParamVector> params;
};

double Dot(const ParamVector& a, const ParamVector& b);
double Norm(const ParamVector& a);

// Cosine of the angle between a and b, clamped to [-1, 1]. A zero-norm
// operand yields 0.
double CosineSimilarity(const ParamVector& a, const ParamVector& b);

// a - b, elementwise.
ParamVector Subtract(const ParamVector& a, const ParamVector& b);

// Sum of weight_k * params_k. Terms are accumulated in list order.
ParamVector WeightedSum(std::span<const WeightedParams> terms);

// (1 - theta) * global + theta * fresh. theta must lie in [0, 1].
ParamVector Mix(const ParamVector& global, const ParamVector& fresh,
                double theta);

// Throws NumericError if any entry is NaN or infinite.
void CheckFinite(const ParamVector& v, const char* context);

}  // namespace seafl

#endif  // SEAFL_PARAM_MATH_H_
