// Copyright 2026 The ProGAP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROGAP_COMMON_HPP
#define PROGAP_COMMON_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace progap {

using Index = std::int64_t;

// Node-feature style data is kept row-major: one contiguous row per node.
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Thrown when an input file does not conform to its documented format.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, long line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        file_(file),
        line_(line) {}
  const std::string& file() const { return file_; }
  long line() const { return line_; }

 private:
  std::string file_;
  long line_;
};

// Thrown when data violates a structural contract (index range, shape, ...).
class ValidationError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a dimension mismatch is detected in a tensor operation.
class ShapeError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline void check_shape(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

// ---------------------------------------------------------------------------
// Seeding
// ---------------------------------------------------------------------------

// splitmix64 finalizer; decorrelates seeds derived from (seed, stream) pairs.
inline std::uint64_t mix_bits(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_bits(mix_bits(seed) ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(seed, a), b);
}

// Stream tags for deriving independent generators from one run seed.
enum class SeedStream : std::uint64_t {
  param_init = 1,
  nap_noise = 2,
  batch_sampling = 3,
  gradient_noise = 4,
  degree_bound = 5,
  split = 6,
  features = 7,
  edges = 8,
  bootstrap = 9,
};

inline std::uint64_t mix_seed(std::uint64_t seed, SeedStream s) {
  return mix_seed(seed, static_cast<std::uint64_t>(s));
}

// Seeded generator wrapper. All randomness in the library flows through
// explicitly seeded instances of this class; nothing reads global entropy.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return normal_(gen_); }
  double uniform() { return uniform_(gen_); }
  bool bernoulli(double p) { return uniform_(gen_) < p; }

  // Uniform integer in [0, n).
  Index below(Index n) {
    return static_cast<Index>(std::uniform_int_distribution<std::uint64_t>(
        0, static_cast<std::uint64_t>(n) - 1)(gen_));
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// ---------------------------------------------------------------------------
// Parallelism
// ---------------------------------------------------------------------------

// Worker cap for parallel_for. PROGAP_THREADS overrides the hardware default.
inline int max_threads() {
  static const int cached = [] {
    if (const char* env = std::getenv("PROGAP_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return static_cast<int>(std::min<long>(v, 256));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return cached;
}

// Runs body(i) for i in [0, n). Results must be written to disjoint,
// preallocated slots so the outcome is independent of the thread count;
// any reduction over the slots belongs after this call, in index order.
template <class F>
void parallel_for(Index n, F&& body) {
  const int threads = static_cast<int>(std::min<Index>(max_threads(), n));
  if (threads <= 1) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::atomic<Index> next{0};
  constexpr Index kChunk = 64;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const Index begin = next.fetch_add(kChunk);
        if (begin >= n) return;
        const Index end = std::min(n, begin + kChunk);
        for (Index i = begin; i < end; ++i) body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace progap

#endif  // PROGAP_COMMON_HPP
