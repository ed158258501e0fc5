// Copyright 2026 The dpbayes Authors
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

#ifndef DPBAYES_NUMERICS_H_
#define DPBAYES_NUMERICS_H_

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace dpbayes {

double Digamma(double x);
double LogBeta(double a, double b);
// ln C(n, k); -inf when k is outside [0, n].
double LogChoose(int n, int k);
// ln sum exp(v_i); -inf for an empty or all -inf input.
double LogSumExp(std::span<const double> values);

// Root of a continuous function with a sign change on [lo, hi], to an
// absolute bracket width of `tolerance`.
double Bisect(const std::function<double(double)>& f, double lo, double hi,
              double tolerance);

std::string_view Trim(std::string_view text);
// Every field between separators, empty ones included.
std::vector<std::string_view> Split(std::string_view text, char separator);

// Strict number parsing (whole token must be consumed). Throw ParseError.
double ParseDouble(std::string_view text);
long long ParseInteger(std::string_view text);
std::vector<double> ParseDoubleList(std::string_view text, char separator);
std::vector<int> ParseIntList(std::string_view text, char separator);

}  // namespace dpbayes

#endif  // DPBAYES_NUMERICS_H_
