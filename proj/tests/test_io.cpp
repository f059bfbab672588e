// SPDX-License-Identifier: Apache-2.0

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "mmv/io.hpp"
#include "mmv/scenarios.hpp"
#include "support.hpp"

using namespace mmv;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mmv_io_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

InstanceDocument tiny_doc(std::uint64_t seed) {
  return InstanceDocument{mmvtest::tiny_instance(seed), false, {}};
}

}  // namespace

TEST_CASE("instance documents round trip byte for byte") {
  for (std::uint64_t seed : {1, 2, 9, 40}) {
    InstanceDocument doc = tiny_doc(seed);
    std::string text = dump_instance(doc);
    InstanceDocument back = parse_instance(text);
    CHECK(dump_instance(back) == text);
    CHECK(back.instance.name == doc.instance.name);
    CHECK(back.instance.demand == doc.instance.demand);
    CHECK(back.instance.supply == doc.instance.supply);
    CHECK(back.instance.coverage == doc.instance.coverage);
    CHECK_FALSE(back.robust);
  }
}

TEST_CASE("robust block survives the round trip") {
  InstanceDocument doc = tiny_doc(5);
  doc.robust = true;
  doc.eta.assign(doc.instance.num_neighborhoods(),
                 std::vector<double>(doc.instance.num_groups(), 1.5));
  InstanceDocument back = parse_instance(dump_instance(doc));
  CHECK(back.robust);
  CHECK(back.eta == doc.eta);
  RobustInstance rob = back.to_robust();
  CHECK(rob.slack == doc.eta);
  CHECK(rob.base.name == doc.instance.name);
}

TEST_CASE("parser rejects malformed documents") {
  std::string good = dump_instance(tiny_doc(3));

  CHECK_THROWS_AS(parse_instance("not json"), InputError);
  CHECK_THROWS_AS(parse_instance("[1,2]"), InputError);

  // Unknown top-level key.
  {
    auto j = good;
    j.insert(j.find('{') + 1, "\"stray\": 1, ");
    CHECK_THROWS_AS(parse_instance(j), InputError);
  }
  // Missing required key.
  {
    auto j = good;
    auto pos = j.find("\"horizon\"");
    REQUIRE(pos != std::string::npos);
    auto end = j.find(',', pos);
    j.erase(pos, end - pos + 1);
    CHECK_THROWS_AS(parse_instance(j), InputError);
  }
  // Wrong type.
  CHECK_THROWS_AS(
      parse_instance(R"({"name": 7})"), InputError);
}

TEST_CASE("parser rejects unknown keys inside nested objects") {
  InstanceDocument doc = tiny_doc(12);
  std::string text = dump_instance(doc);
  auto pos = text.find("\"groups\"");
  REQUIRE(pos != std::string::npos);
  auto brace = text.find('{', pos);
  REQUIRE(brace != std::string::npos);
  text.insert(brace + 1, "\"shoe_size\": 44, ");
  CHECK_THROWS_AS(parse_instance(text), InputError);
}

TEST_CASE("instance files save and load") {
  TempDir dir;
  InstanceDocument doc = tiny_doc(8);
  save_instance(doc, dir.file("inst.json"));
  InstanceDocument back = load_instance(dir.file("inst.json"));
  CHECK(dump_instance(back) == dump_instance(doc));
  CHECK_THROWS_AS(load_instance(dir.file("missing.json")), InputError);
}

TEST_CASE("solution documents round trip") {
  SolutionDocument doc;
  doc.instance = tiny_doc(4);
  doc.alpha = 0.3;
  doc.backend = "bnb";
  doc.status = "optimal";
  doc.objective = 0.125;
  doc.gap = 0.0;
  doc.runtime_s = 1.5;
  doc.objective_values = {{"f1", 12.0}, {"f2", 700.0}};
  doc.x.assign(40, 0.0);
  doc.x[3] = 2.0;
  doc.x[17] = 1.0;
  std::string text = dump_solution(doc);
  SolutionDocument back = parse_solution(text);
  CHECK(back.alpha == doc.alpha);
  CHECK(back.backend == doc.backend);
  CHECK(back.status == doc.status);
  CHECK(back.objective == doc.objective);
  CHECK(back.objective_values == doc.objective_values);
  CHECK(back.x == doc.x);
  CHECK(dump_solution(back) == text);

  TempDir dir;
  save_solution(doc, dir.file("sol.json"));
  CHECK(dump_solution(load_solution(dir.file("sol.json"))) == text);
}

TEST_CASE("solution parser rejects stray keys") {
  SolutionDocument doc;
  doc.instance = tiny_doc(6);
  doc.x.assign(10, 0.0);
  std::string text = dump_solution(doc);
  text.insert(text.find('{') + 1, "\"mystery\": true, ");
  CHECK_THROWS_AS(parse_solution(text), InputError);
}

TEST_CASE("read_file reports the missing path") {
  try {
    read_file("/nonexistent/mmv/nothing.json");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("nothing.json") != std::string::npos);
  }
}

TEST_CASE("write_file_atomic leaves no temp siblings") {
  TempDir dir;
  std::string target = dir.file("out.txt");
  write_file_atomic(target, "first");
  write_file_atomic(target, "second");
  CHECK(read_file(target) == "second");
  int entries = 0;
  for (auto& e : fs::directory_iterator(dir.path)) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
}
