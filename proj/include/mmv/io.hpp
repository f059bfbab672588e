// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "mmv/instance.hpp"
#include "mmv/solve.hpp"

namespace mmv {

// An instance file: the base campaign plus an optional robust block whose
// presence flips the interpretation of demand to the guaranteed lower bound.
struct InstanceDocument {
  Instance instance;
  bool robust = false;
  std::vector<std::vector<double>> eta;  // [l][p], robust only

  RobustInstance to_robust() const;
};

InstanceDocument parse_instance(const std::string& json_text);
std::string dump_instance(const InstanceDocument& doc);

InstanceDocument load_instance(const std::string& path);
void save_instance(const InstanceDocument& doc, const std::string& path);

// A solved plan bundled with the instance it answers, so reports never need
// a second file.
struct SolutionDocument {
  InstanceDocument instance;
  double alpha = 0.0;
  std::string backend;
  std::string status;
  double objective = 0.0;
  double gap = 0.0;
  double runtime_s = 0.0;
  std::vector<std::pair<std::string, double>> objective_values;
  std::vector<double> x;
};

SolutionDocument parse_solution(const std::string& json_text);
std::string dump_solution(const SolutionDocument& doc);

SolutionDocument load_solution(const std::string& path);
void save_solution(const SolutionDocument& doc, const std::string& path);

// Whole-file read; throws InputError with the path on failure.
std::string read_file(const std::string& path);

// Write via a sibling temp file and rename, so readers never see a torn file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace mmv
