// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "mmv/mps.hpp"

namespace mmv {
namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string col_name(int var) { return "x" + std::to_string(var); }
std::string row_name(int r) { return "c" + std::to_string(r); }

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

void write_mps(const LinearModel& model, std::ostream& out,
               const std::string& name) {
  out << "NAME " << name << "\n";
  for (const Objective& obj : model.objectives)
    if (obj.sense == ObjSense::Max)
      out << "* MMV-OBJSENSE " << obj.name << " MAX\n";
  out << "ROWS\n";
  for (const Objective& obj : model.objectives)
    out << " N " << obj.name << "\n";
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    char sense = model.rows[r].sense == RowSense::LE   ? 'L'
                 : model.rows[r].sense == RowSense::GE ? 'G'
                                                       : 'E';
    out << " " << sense << " " << row_name(static_cast<int>(r)) << "\n";
  }

  std::vector<std::vector<std::pair<int, double>>> by_col(model.num_vars());
  for (std::size_t r = 0; r < model.rows.size(); ++r)
    for (const auto& [var, coef] : model.rows[r].coeffs)
      by_col[var].push_back({static_cast<int>(r), coef});

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int var = 0; var < model.num_vars(); ++var) {
    if (static_cast<bool>(model.integer[var]) != in_int) {
      in_int = !in_int;
      out << " MARKER" << marker++ << " 'MARKER' "
          << (in_int ? "'INTORG'" : "'INTEND'") << "\n";
    }
    bool wrote = false;
    for (std::size_t o = 0; o < model.objectives.size(); ++o) {
      double c = model.objectives[o].coeffs[var];
      if (c != 0.0) {
        out << " " << col_name(var) << " " << model.objectives[o].name << " "
            << num(c) << "\n";
        wrote = true;
      }
    }
    for (const auto& [r, coef] : by_col[var]) {
      out << " " << col_name(var) << " " << row_name(r) << " " << num(coef)
          << "\n";
      wrote = true;
    }
    if (!wrote && !model.objectives.empty())
      out << " " << col_name(var) << " " << model.objectives.front().name
          << " 0\n";
  }
  if (in_int) out << " MARKER" << marker++ << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  for (std::size_t o = 0; o < model.objectives.size(); ++o)
    if (model.objectives[o].offset != 0.0)
      out << " rhs " << model.objectives[o].name << " "
          << num(-model.objectives[o].offset) << "\n";
  for (std::size_t r = 0; r < model.rows.size(); ++r)
    if (model.rows[r].rhs != 0.0)
      out << " rhs " << row_name(static_cast<int>(r)) << " "
          << num(model.rows[r].rhs) << "\n";

  out << "BOUNDS\n";
  for (int var = 0; var < model.num_vars(); ++var) {
    double lo = model.lower[var], up = model.upper[var];
    if (model.integer[var] && lo == 0.0 && up == 1.0) {
      out << " BV bnd " << col_name(var) << "\n";
      continue;
    }
    if (std::isinf(lo) && lo < 0.0)
      out << " MI bnd " << col_name(var) << "\n";
    else if (lo != 0.0)
      out << " LO bnd " << col_name(var) << " " << num(lo) << "\n";
    if (std::isfinite(up))
      out << " UP bnd " << col_name(var) << " " << num(up) << "\n";
  }
  out << "ENDATA\n";
}

LinearModel read_mps(std::istream& in) {
  LinearModel model;
  std::map<std::string, int> obj_index, row_index, col_index;
  std::vector<std::string> max_names;
  std::string line, section;
  bool in_int = false;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '*') {
      auto tok = tokens(line.substr(1));
      if (tok.size() == 3 && tok[0] == "MMV-OBJSENSE" && tok[2] == "MAX")
        max_names.push_back(tok[1]);
      continue;
    }
    auto tok = tokens(line);
    if (tok.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {
      section = tok[0];
      continue;
    }
    if (section == "ROWS") {
      if (tok.size() < 2) throw InputError("malformed ROWS line");
      if (tok[0] == "N") {
        obj_index[tok[1]] = static_cast<int>(model.objectives.size());
        Objective obj;
        obj.name = tok[1];
        model.objectives.push_back(obj);
      } else {
        Row row;
        row.sense = tok[0] == "L"   ? RowSense::LE
                    : tok[0] == "G" ? RowSense::GE
                                    : RowSense::EQ;
        row_index[tok[1]] = static_cast<int>(model.rows.size());
        model.rows.push_back(row);
      }
    } else if (section == "COLUMNS") {
      if (tok.size() >= 3 && tok[1] == "'MARKER'") {
        in_int = tok[2] == "'INTORG'";
        continue;
      }
      if (tok.size() < 3) throw InputError("malformed COLUMNS line");
      auto [it, fresh] =
          col_index.insert({tok[0], static_cast<int>(model.lower.size())});
      if (fresh) {
        model.lower.push_back(0.0);
        model.upper.push_back(std::numeric_limits<double>::infinity());
        model.integer.push_back(in_int ? 1 : 0);
        for (Objective& obj : model.objectives) obj.coeffs.push_back(0.0);
      }
      int var = it->second;
      for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
        double value = std::stod(tok[k + 1]);
        if (auto oi = obj_index.find(tok[k]); oi != obj_index.end()) {
          model.objectives[oi->second].coeffs[var] = value;
        } else if (auto ri = row_index.find(tok[k]); ri != row_index.end()) {
          if (value != 0.0)
            model.rows[ri->second].coeffs.push_back({var, value});
        } else {
          throw InputError("unknown row in COLUMNS: " + tok[k]);
        }
      }
    } else if (section == "RHS") {
      if (tok.size() < 3) throw InputError("malformed RHS line");
      for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
        double value = std::stod(tok[k + 1]);
        if (auto oi = obj_index.find(tok[k]); oi != obj_index.end())
          model.objectives[oi->second].offset = -value;
        else if (auto ri = row_index.find(tok[k]); ri != row_index.end())
          model.rows[ri->second].rhs = value;
        else
          throw InputError("unknown row in RHS: " + tok[k]);
      }
    } else if (section == "BOUNDS") {
      if (tok.size() < 3) throw InputError("malformed BOUNDS line");
      auto ci = col_index.find(tok[2]);
      if (ci == col_index.end())
        throw InputError("unknown column in BOUNDS: " + tok[2]);
      int var = ci->second;
      const std::string& kind = tok[0];
      double value = tok.size() >= 4 ? std::stod(tok[3]) : 0.0;
      if (kind == "BV") {
        model.lower[var] = 0.0;
        model.upper[var] = 1.0;
        model.integer[var] = 1;
      } else if (kind == "LO") {
        model.lower[var] = value;
      } else if (kind == "UP") {
        model.upper[var] = value;
      } else if (kind == "FX") {
        model.lower[var] = model.upper[var] = value;
      } else if (kind == "MI") {
        model.lower[var] = -std::numeric_limits<double>::infinity();
      } else if (kind == "PL") {
        model.upper[var] = std::numeric_limits<double>::infinity();
      } else {
        throw InputError("unsupported bound kind: " + kind);
      }
    } else if (section == "ENDATA" || section == "NAME") {
      continue;
    }
  }
  for (const std::string& name : max_names) {
    auto oi = obj_index.find(name);
    if (oi != obj_index.end())
      model.objectives[oi->second].sense = ObjSense::Max;
  }
  // Column count can outgrow earlier objective vectors.
  for (Objective& obj : model.objectives)
    obj.coeffs.resize(model.lower.size(), 0.0);
  return model;
}

}  // namespace mmv
