// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mmv/io.hpp"

namespace mmv {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) known = true;
    if (!known)
      throw InputError("unknown key '" + it.key() + "' in " + where);
  }
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw InputError("missing key '" + std::string(key) + "' in " + where);
  return *it;
}

double number(const json& value, const std::string& where) {
  if (!value.is_number())
    throw InputError("expected a number at " + where);
  return value.get<double>();
}

std::string text(const json& value, const std::string& where) {
  if (!value.is_string())
    throw InputError("expected a string at " + where);
  return value.get<std::string>();
}

json demand_map(const Instance& inst, const std::vector<double>& row) {
  json out = json::object();
  for (int p = 0; p < inst.num_groups(); ++p)
    out[inst.groups[p].id] = row[p];
  return out;
}

std::vector<double> read_demand_map(const json& obj, const Instance& inst,
                                    const std::string& where) {
  if (!obj.is_object()) throw InputError("expected an object at " + where);
  std::vector<double> row(inst.num_groups(), 0.0);
  std::vector<char> seen(inst.num_groups(), 0);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    int p = inst.group_index(it.key());
    if (p < 0)
      throw InputError("unknown group '" + it.key() + "' in " + where);
    row[p] = number(it.value(), where + "." + it.key());
    seen[p] = 1;
  }
  for (int p = 0; p < inst.num_groups(); ++p)
    if (!seen[p])
      throw InputError("missing group '" + inst.groups[p].id + "' in " +
                       where);
  return row;
}

}  // namespace

RobustInstance InstanceDocument::to_robust() const {
  if (!robust) throw InputError("instance document has no robust block");
  RobustInstance out;
  out.base = instance;
  out.slack = eta;
  return out;
}

InstanceDocument parse_instance(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("instance document must be an object");
  check_keys(doc,
             {"name", "horizon", "temp_center_cost", "groups",
              "permanent_centers", "temporary_centers", "macrozones",
              "neighborhoods", "supply", "robust"},
             "instance");

  InstanceDocument out;
  Instance& inst = out.instance;
  inst.name = text(field(doc, "name", "instance"), "name");
  const json& horizon = field(doc, "horizon", "instance");
  if (!horizon.is_number_integer())
    throw InputError("horizon must be an integer");
  inst.horizon = horizon.get<int>();
  inst.temp_center_cost =
      number(field(doc, "temp_center_cost", "instance"), "temp_center_cost");

  for (const json& g : field(doc, "groups", "instance")) {
    check_keys(g, {"id", "risk", "eps", "temporary_only"}, "group");
    Group group;
    group.id = text(field(g, "id", "group"), "group.id");
    group.risk = number(field(g, "risk", "group"), "group.risk");
    group.eps = number(field(g, "eps", "group"), "group.eps");
    const json& tmp = field(g, "temporary_only", "group");
    if (!tmp.is_boolean())
      throw InputError("group.temporary_only must be a boolean");
    group.temporary_only = tmp.get<bool>();
    inst.groups.push_back(std::move(group));
  }
  auto read_centers = [&](const char* key, std::vector<Center>* centers) {
    for (const json& c : field(doc, key, "instance")) {
      check_keys(c, {"id", "capacity"}, key);
      Center center;
      center.id = text(field(c, "id", key), std::string(key) + ".id");
      center.capacity =
          number(field(c, "capacity", key), std::string(key) + ".capacity");
      centers->push_back(std::move(center));
    }
  };
  read_centers("permanent_centers", &inst.permanent);
  read_centers("temporary_centers", &inst.temporary);

  // Neighborhood ids must exist before zone members and coverage resolve.
  const json& hoods = field(doc, "neighborhoods", "instance");
  for (const json& n : hoods) {
    check_keys(n, {"id", "coverage", "demand"}, "neighborhood");
    inst.neighborhoods.push_back(
        text(field(n, "id", "neighborhood"), "neighborhood.id"));
  }
  for (const json& z : field(doc, "macrozones", "instance")) {
    check_keys(z, {"id", "neighborhoods"}, "macrozone");
    inst.macrozones.push_back(text(field(z, "id", "macrozone"), "macrozone.id"));
    std::vector<int> members;
    for (const json& id : field(z, "neighborhoods", "macrozone")) {
      int l = inst.neighborhood_index(text(id, "macrozone.neighborhoods"));
      if (l < 0)
        throw InputError("macrozone '" + inst.macrozones.back() +
                         "' references unknown neighborhood");
      members.push_back(l);
    }
    inst.zone_members.push_back(std::move(members));
  }
  int idx = 0;
  for (const json& n : hoods) {
    const std::string where = "neighborhood '" + inst.neighborhoods[idx] + "'";
    std::vector<int> cov;
    for (const json& id : field(n, "coverage", where)) {
      int l = inst.neighborhood_index(text(id, where + ".coverage"));
      if (l < 0) throw InputError(where + " covers unknown neighborhood");
      cov.push_back(l);
    }
    inst.coverage.push_back(std::move(cov));
    inst.demand.push_back(
        read_demand_map(field(n, "demand", where), inst, where + ".demand"));
    ++idx;
  }
  for (const json& a : field(doc, "supply", "instance"))
    inst.supply.push_back(number(a, "supply"));

  if (auto it = doc.find("robust"); it != doc.end()) {
    check_keys(*it, {"eta"}, "robust");
    out.robust = true;
    const json& eta = field(*it, "eta", "robust");
    if (!eta.is_object()) throw InputError("robust.eta must be an object");
    out.eta.assign(inst.num_neighborhoods(),
                   std::vector<double>(inst.num_groups(), 0.0));
    std::vector<char> seen(inst.num_neighborhoods(), 0);
    for (auto e = eta.begin(); e != eta.end(); ++e) {
      int l = inst.neighborhood_index(e.key());
      if (l < 0)
        throw InputError("robust.eta names unknown neighborhood '" + e.key() +
                         "'");
      out.eta[l] = read_demand_map(e.value(), inst, "robust.eta." + e.key());
      seen[l] = 1;
    }
    for (int l = 0; l < inst.num_neighborhoods(); ++l)
      if (!seen[l])
        throw InputError("robust.eta misses neighborhood '" +
                         inst.neighborhoods[l] + "'");
  }
  return out;
}

std::string dump_instance(const InstanceDocument& doc) {
  const Instance& inst = doc.instance;
  json out;
  out["name"] = inst.name;
  out["horizon"] = inst.horizon;
  out["temp_center_cost"] = inst.temp_center_cost;
  out["groups"] = json::array();
  for (const Group& g : inst.groups)
    out["groups"].push_back({{"id", g.id},
                             {"risk", g.risk},
                             {"eps", g.eps},
                             {"temporary_only", g.temporary_only}});
  auto centers = [](const std::vector<Center>& list) {
    json arr = json::array();
    for (const Center& c : list)
      arr.push_back({{"id", c.id}, {"capacity", c.capacity}});
    return arr;
  };
  out["permanent_centers"] = centers(inst.permanent);
  out["temporary_centers"] = centers(inst.temporary);
  out["macrozones"] = json::array();
  for (int k = 0; k < inst.num_zones(); ++k) {
    json ids = json::array();
    for (int l : inst.zone_members[k]) ids.push_back(inst.neighborhoods[l]);
    out["macrozones"].push_back(
        {{"id", inst.macrozones[k]}, {"neighborhoods", ids}});
  }
  out["neighborhoods"] = json::array();
  for (int l = 0; l < inst.num_neighborhoods(); ++l) {
    json cov = json::array();
    for (int r : inst.coverage[l]) cov.push_back(inst.neighborhoods[r]);
    out["neighborhoods"].push_back({{"id", inst.neighborhoods[l]},
                                    {"coverage", cov},
                                    {"demand", demand_map(inst, inst.demand[l])}});
  }
  out["supply"] = inst.supply;
  if (doc.robust) {
    json eta = json::object();
    for (int l = 0; l < inst.num_neighborhoods(); ++l)
      eta[inst.neighborhoods[l]] = demand_map(inst, doc.eta[l]);
    out["robust"] = {{"eta", eta}};
  }
  return out.dump(2) + "\n";
}

SolutionDocument parse_solution(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("solution document must be an object");
  check_keys(doc,
             {"instance", "alpha", "backend", "status", "objective", "gap",
              "runtime_s", "objective_values", "num_vars", "values"},
             "solution");
  SolutionDocument out;
  out.instance = parse_instance(field(doc, "instance", "solution").dump());
  out.alpha = number(field(doc, "alpha", "solution"), "alpha");
  out.backend = text(field(doc, "backend", "solution"), "backend");
  out.status = text(field(doc, "status", "solution"), "status");
  out.objective = number(field(doc, "objective", "solution"), "objective");
  out.gap = number(field(doc, "gap", "solution"), "gap");
  out.runtime_s = number(field(doc, "runtime_s", "solution"), "runtime_s");
  for (auto it = field(doc, "objective_values", "solution").begin();
       it != field(doc, "objective_values", "solution").end(); ++it)
    out.objective_values.push_back(
        {it.key(), number(it.value(), "objective_values")});
  const json& nv = field(doc, "num_vars", "solution");
  if (!nv.is_number_integer() || nv.get<int>() < 0)
    throw InputError("num_vars must be a nonnegative integer");
  out.x.assign(nv.get<int>(), 0.0);
  for (const json& pair : field(doc, "values", "solution")) {
    if (!pair.is_array() || pair.size() != 2)
      throw InputError("values entries must be [index, value] pairs");
    int k = pair[0].get<int>();
    if (k < 0 || k >= static_cast<int>(out.x.size()))
      throw InputError("values index out of range");
    out.x[k] = number(pair[1], "values");
  }
  return out;
}

std::string dump_solution(const SolutionDocument& doc) {
  json out;
  out["instance"] = json::parse(dump_instance(doc.instance));
  out["alpha"] = doc.alpha;
  out["backend"] = doc.backend;
  out["status"] = doc.status;
  out["objective"] = doc.objective;
  out["gap"] = doc.gap;
  out["runtime_s"] = doc.runtime_s;
  json values = json::object();
  for (const auto& [name, value] : doc.objective_values) values[name] = value;
  out["objective_values"] = values;
  out["num_vars"] = static_cast<int>(doc.x.size());
  json pairs = json::array();
  for (std::size_t k = 0; k < doc.x.size(); ++k)
    if (doc.x[k] != 0.0) pairs.push_back({k, doc.x[k]});
  out["values"] = pairs;
  return out.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw InputError("cannot read " + path);
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw InputError("cannot write " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw InputError("cannot replace " + path);
  }
}

InstanceDocument load_instance(const std::string& path) {
  return parse_instance(read_file(path));
}

void save_instance(const InstanceDocument& doc, const std::string& path) {
  write_file_atomic(path, dump_instance(doc));
}

SolutionDocument load_solution(const std::string& path) {
  return parse_solution(read_file(path));
}

void save_solution(const SolutionDocument& doc, const std::string& path) {
  write_file_atomic(path, dump_solution(doc));
}

}  // namespace mmv
