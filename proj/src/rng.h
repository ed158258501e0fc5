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

#ifndef DPBAYES_RNG_H_
#define DPBAYES_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace dpbayes {

// Seed for the named substream `name`/`index` of a master seed. Distinct
// (name, index) pairs give statistically independent streams.
std::uint64_t DeriveSeed(std::uint64_t master, std::string_view name,
                         std::uint64_t index = 0);

// A seeded random stream. Not thread-safe; give each consumer its own.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream Derive(std::uint64_t master, std::string_view name,
                          std::uint64_t index = 0) {
    return RngStream(DeriveSeed(master, name, index));
  }

  std::mt19937_64& engine() { return engine_; }

  // Uniform on the open interval (0, 1).
  double Uniform();
  double Gamma(double shape, double rate);
  double Beta(double a, double b);
  double Exponential(double rate);
  // Index drawn with probability proportional to weights[i].
  std::size_t Categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace dpbayes

#endif  // DPBAYES_RNG_H_
