// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mmv {

// Absolute feasibility tolerance for constraint rows and integrality.
inline constexpr double kFeasTol = 1e-6;
// Relative tolerance for objective value comparisons.
inline constexpr double kObjTol = 1e-6;

// Raised on malformed user input (files, documents, CLI arguments).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Raised on internal contract violations (malformed models, bad requests).
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a model is proven infeasible during a composite computation.
class InfeasibleError : public ModelError {
 public:
  explicit InfeasibleError(const std::string& what) : ModelError(what) {}
};

// Raised when the time budget runs out before any incumbent exists.
class BudgetError : public ModelError {
 public:
  explicit BudgetError(const std::string& what) : ModelError(what) {}
};

// Deterministic 64-bit PRNG; stable across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n) without platform-dependent distribution code.
  std::uint64_t below(std::uint64_t n) {
    return n == 0 ? 0 : next() % n;
  }

  double unit() {  // uniform in [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

bool relatively_equal(double a, double b, double rel_tol = kObjTol);

}  // namespace mmv
