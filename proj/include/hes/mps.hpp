#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hes/common.hpp"
#include "hes/simplex.hpp"  // primal_residual
#include "hes/solve_report.hpp"
#include "hes/transcription.hpp"

namespace hes {

/// Generated 8-character MPS identifiers, index-aligned with the problem's
/// rows and columns. The descriptive names live in the sidecar CSV.
struct MpsNames {
  std::vector<std::string> row;
  std::vector<std::string> col;
};

namespace detail {

inline std::string mps_id(char prefix, long index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%07ld", prefix, index);
  return buf;
}

}  // namespace detail

/// Writes the problem in MPS layout (minimization of the negated objective)
/// plus a sidecar CSV mapping generated identifiers to descriptive names.
/// Values are written with shortest-round-trip precision, so long entries may
/// exceed the classic 12-character field width; both the bundled importer and
/// common solvers tokenize on whitespace.
inline MpsNames export_mps(const LpProblem& lp, const std::string& mps_path,
                           const std::string& names_path) {
  MpsNames names;
  names.row.reserve(lp.rows.size());
  for (size_t i = 0; i < lp.rows.size(); ++i)
    names.row.push_back(detail::mps_id('R', static_cast<long>(i)));
  names.col.reserve(static_cast<size_t>(lp.n_cols));
  for (long j = 0; j < lp.n_cols; ++j) names.col.push_back(detail::mps_id('C', j));

  std::ofstream out(mps_path);
  if (!out) throw IoError("cannot write " + mps_path);
  out << "* Minimization of the negated (maximization) objective.\n";
  out << "* Objective constant encoded as RHS on the OBJ row.\n";
  out << "NAME          HESLP\n";
  out << "ROWS\n N  OBJ\n";
  for (size_t i = 0; i < lp.rows.size(); ++i)
    out << " " << (lp.rows[i].sense == '=' ? 'E' : 'L') << "  " << names.row[i] << "\n";

  // column-major incidence
  std::vector<std::vector<std::pair<long, double>>> cols(static_cast<size_t>(lp.n_cols));
  for (size_t i = 0; i < lp.rows.size(); ++i)
    for (const auto& [c, v] : lp.rows[i].terms)
      cols[static_cast<size_t>(c)].emplace_back(static_cast<long>(i), v);

  out << "COLUMNS\n";
  for (long j = 0; j < lp.n_cols; ++j) {
    const size_t js = static_cast<size_t>(j);
    out << "    " << names.col[js] << "  OBJ  " << format_exact(-lp.obj[js]) << "\n";
    for (const auto& [i, v] : cols[js])
      out << "    " << names.col[js] << "  " << names.row[static_cast<size_t>(i)] << "  "
          << format_exact(v) << "\n";
  }

  out << "RHS\n";
  if (lp.obj_constant != 0.0)
    out << "    RHS  OBJ  " << format_exact(lp.obj_constant) << "\n";
  for (size_t i = 0; i < lp.rows.size(); ++i)
    if (lp.rows[i].rhs != 0.0)
      out << "    RHS  " << names.row[i] << "  " << format_exact(lp.rows[i].rhs) << "\n";

  out << "BOUNDS\n";
  for (long j = 0; j < lp.n_cols; ++j) {
    const size_t js = static_cast<size_t>(j);
    const double lo = lp.col_lower[js], up = lp.col_upper[js];
    const std::string& cn = names.col[js];
    if (lo == up) {
      out << " FX BND  " << cn << "  " << format_exact(lo) << "\n";
      continue;
    }
    if (!std::isfinite(lo))
      out << " MI BND  " << cn << "\n";
    else if (lo != 0.0)
      out << " LO BND  " << cn << "  " << format_exact(lo) << "\n";
    if (std::isfinite(up)) out << " UP BND  " << cn << "  " << format_exact(up) << "\n";
  }
  out << "ENDATA\n";
  if (!out) throw IoError("failed while writing " + mps_path);
  out.close();

  std::ofstream nf(names_path);
  if (!nf) throw IoError("cannot write " + names_path);
  nf << "mps_name,kind,name\n";
  nf << "OBJ,row,objective\n";
  for (size_t i = 0; i < lp.rows.size(); ++i)
    nf << names.row[i] << ",row," << lp.rows[i].tag << "\n";
  for (long j = 0; j < lp.n_cols; ++j)
    nf << names.col[static_cast<size_t>(j)] << ",col,"
       << (lp.layout.total == lp.n_cols ? lp.layout.col_name(j) : "col" + std::to_string(j))
       << "\n";
  if (!nf) throw IoError("failed while writing " + names_path);
  return names;
}

/// Reads an MPS file written by export_mps back into an LpProblem (whitespace
/// tokenized; layout/mesh metadata is not part of the interchange format).
inline LpProblem import_mps(const std::string& mps_path) {
  std::ifstream in(mps_path);
  if (!in) throw IoError("cannot read " + mps_path);
  LpProblem lp;
  std::unordered_map<std::string, long> row_of, col_of;
  std::vector<char> sense;
  std::vector<std::string> row_tag;
  struct ColData {
    double obj = 0.0;
    double lo = 0.0, up = kInf;
    std::vector<std::pair<long, double>> terms;  // (row, value)
  };
  std::vector<ColData> cols;
  std::vector<double> rhs;
  double obj_rhs = 0.0;
  std::string obj_row_name;

  auto need_col = [&](const std::string& name) -> long {
    auto it = col_of.find(name);
    if (it != col_of.end()) return it->second;
    const long idx = static_cast<long>(cols.size());
    col_of.emplace(name, idx);
    cols.emplace_back();
    return idx;
  };
  auto to_double = [&](const std::string& tok, long lineno) {
    try {
      size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(mps_path + ": bad numeric token '" + tok + "' at line " +
                       std::to_string(lineno));
    }
  };

  enum Section { kNone, kRows, kColumns, kRhs, kBounds, kDone } section = kNone;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {  // section header
      const std::string& head = tok[0];
      if (head == "NAME") section = kNone;
      else if (head == "ROWS") section = kRows;
      else if (head == "COLUMNS") section = kColumns;
      else if (head == "RHS") section = kRhs;
      else if (head == "RANGES") throw ParseError(mps_path + ": RANGES section not supported");
      else if (head == "BOUNDS") section = kBounds;
      else if (head == "ENDATA") { section = kDone; break; }
      else throw ParseError(mps_path + ": unknown section '" + head + "'");
      continue;
    }
    switch (section) {
      case kRows: {
        if (tok.size() != 2) throw ParseError(mps_path + ": bad ROWS entry at line " +
                                              std::to_string(lineno));
        if (tok[0] == "N") {
          if (obj_row_name.empty()) obj_row_name = tok[1];
          break;
        }
        char s;
        if (tok[0] == "L") s = '<';
        else if (tok[0] == "E") s = '=';
        else throw ParseError(mps_path + ": unsupported row sense '" + tok[0] + "' at line " +
                              std::to_string(lineno));
        row_of.emplace(tok[1], static_cast<long>(sense.size()));
        sense.push_back(s);
        row_tag.push_back(tok[1]);
        rhs.push_back(0.0);
        break;
      }
      case kColumns: {
        if (tok.size() != 3 && tok.size() != 5)
          throw ParseError(mps_path + ": bad COLUMNS entry at line " + std::to_string(lineno));
        const long j = need_col(tok[0]);
        for (size_t f = 1; f + 1 < tok.size(); f += 2) {
          const double v = to_double(tok[f + 1], lineno);
          if (tok[f] == obj_row_name) {
            cols[static_cast<size_t>(j)].obj += v;
          } else {
            auto it = row_of.find(tok[f]);
            if (it == row_of.end())
              throw ParseError(mps_path + ": unknown row '" + tok[f] + "' at line " +
                               std::to_string(lineno));
            cols[static_cast<size_t>(j)].terms.emplace_back(it->second, v);
          }
        }
        break;
      }
      case kRhs: {
        if (tok.size() != 3 && tok.size() != 5)
          throw ParseError(mps_path + ": bad RHS entry at line " + std::to_string(lineno));
        for (size_t f = 1; f + 1 < tok.size(); f += 2) {
          const double v = to_double(tok[f + 1], lineno);
          if (tok[f] == obj_row_name) {
            obj_rhs = v;
          } else {
            auto it = row_of.find(tok[f]);
            if (it == row_of.end())
              throw ParseError(mps_path + ": unknown row '" + tok[f] + "' at line " +
                               std::to_string(lineno));
            rhs[static_cast<size_t>(it->second)] = v;
          }
        }
        break;
      }
      case kBounds: {
        if (tok.size() < 3)
          throw ParseError(mps_path + ": bad BOUNDS entry at line " + std::to_string(lineno));
        const std::string& kind = tok[0];
        auto it = col_of.find(tok[2]);
        if (it == col_of.end())
          throw ParseError(mps_path + ": bound on unknown column '" + tok[2] + "' at line " +
                           std::to_string(lineno));
        ColData& cd = cols[static_cast<size_t>(it->second)];
        const bool has_value = tok.size() >= 4;
        const double v = has_value ? to_double(tok[3], lineno) : 0.0;
        if (kind == "UP") cd.up = v;
        else if (kind == "LO") cd.lo = v;
        else if (kind == "FX") { cd.lo = v; cd.up = v; }
        else if (kind == "MI") cd.lo = -kInf;
        else if (kind == "PL") cd.up = kInf;
        else throw ParseError(mps_path + ": unsupported bound kind '" + kind + "' at line " +
                              std::to_string(lineno));
        break;
      }
      case kNone:
      case kDone:
        break;
    }
  }
  if (section != kDone) throw ParseError(mps_path + ": missing ENDATA");
  if (obj_row_name.empty()) throw ParseError(mps_path + ": no objective row declared");

  lp.n_cols = static_cast<long>(cols.size());
  lp.obj.resize(cols.size());
  lp.col_lower.resize(cols.size());
  lp.col_upper.resize(cols.size());
  for (size_t j = 0; j < cols.size(); ++j) {
    lp.obj[j] = -cols[j].obj;  // back to maximization sense
    lp.col_lower[j] = cols[j].lo;
    lp.col_upper[j] = cols[j].up;
  }
  lp.obj_constant = obj_rhs;
  lp.rows.resize(sense.size());
  for (size_t i = 0; i < sense.size(); ++i) {
    lp.rows[i].sense = sense[i];
    lp.rows[i].rhs = rhs[i];
    lp.rows[i].tag = row_tag[i];
  }
  for (size_t j = 0; j < cols.size(); ++j)
    for (const auto& [i, v] : cols[j].terms)
      lp.rows[static_cast<size_t>(i)].terms.emplace_back(static_cast<long>(j), v);
  for (auto& row : lp.rows) std::sort(row.terms.begin(), row.terms.end());
  return lp;
}

/// Reads a whitespace-separated "column-name value" solution produced by an
/// external solver, maps names through the sidecar CSV, and returns a report
/// whose primal has been feasibility-checked against the problem. No dual
/// certificate is available on this path.
inline SolveReport import_external_solution(const LpProblem& lp, const std::string& solution_path,
                                            const std::string& names_path, double tol = 1e-7) {
  std::unordered_map<std::string, long> col_of;
  {
    std::ifstream nf(names_path);
    if (!nf) throw IoError("cannot read " + names_path);
    std::string line;
    long lineno = 0, col_index = 0;
    while (std::getline(nf, line)) {
      ++lineno;
      if (lineno == 1 || line.empty()) continue;  // header
      const size_t c1 = line.find(',');
      const size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
      if (c2 == std::string::npos)
        throw ParseError(names_path + ": bad record at line " + std::to_string(lineno));
      if (line.substr(c1 + 1, c2 - c1 - 1) == "col")
        col_of.emplace(line.substr(0, c1), col_index++);
    }
    if (col_index != lp.n_cols)
      throw ParseError(names_path + ": lists " + std::to_string(col_index) +
                       " columns, problem has " + std::to_string(lp.n_cols));
  }

  SolveReport rep;
  rep.primal.assign(static_cast<size_t>(lp.n_cols), 0.0);
  std::vector<bool> seen(static_cast<size_t>(lp.n_cols), false);
  std::ifstream in(solution_path);
  if (!in) throw IoError("cannot read " + solution_path);
  std::string name;
  double value;
  long lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    if (!(ss >> name >> value))
      throw ParseError(solution_path + ": bad record at line " + std::to_string(lineno));
    auto it = col_of.find(name);
    if (it == col_of.end())
      throw ParseError(solution_path + ": unknown column name '" + name + "' at line " +
                       std::to_string(lineno));
    rep.primal[static_cast<size_t>(it->second)] = value;
    seen[static_cast<size_t>(it->second)] = true;
  }
  long missing = 0;
  for (bool s : seen)
    if (!s) ++missing;
  if (missing > 0)
    rep.diagnostic = std::to_string(missing) + " columns missing from solution, defaulted to 0";

  rep.objective = lp.obj_constant;
  for (long j = 0; j < lp.n_cols; ++j)
    rep.objective += lp.obj[static_cast<size_t>(j)] * rep.primal[static_cast<size_t>(j)];
  rep.has_duals = false;
  const double thr = tol * (1.0 + std::abs(rep.objective));
  std::string violation;
  rep.max_primal_residual = primal_residual(lp, rep.primal, thr, &violation);
  if (rep.max_primal_residual <= thr) {
    rep.status = SolveStatus::FeasibleUnverified;
  } else {
    rep.status = SolveStatus::Infeasible;
    rep.diagnostic += (rep.diagnostic.empty() ? "" : "; ") + ("violates " + violation);
  }
  return rep;
}

}  // namespace hes
