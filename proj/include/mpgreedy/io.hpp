#pragma once

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "adversarial.hpp"
#include "error.hpp"
#include "greedy.hpp"
#include "grid_function.hpp"
#include "version.hpp"

namespace mpgreedy::io {

/// Shortest text that reads back to the same double.
inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
inline std::string fmt(int x) { return std::to_string(x); }
inline std::string fmt(long x) { return std::to_string(x); }
inline std::string fmt(std::size_t x) { return std::to_string(x); }
inline std::string fmt(bool x) { return x ? "true" : "false"; }
inline std::string fmt(const std::string& x) { return x; }
inline std::string fmt(const char* x) { return x; }

/// Resolved configuration echoed at the top of every output file.
using Echo = std::vector<std::pair<std::string, std::string>>;

inline void write_header(std::ostream& os, const std::string& kind, const Echo& echo) {
  os << "# mpgreedy " << kVersion << " " << kind << "\n";
  for (const auto& [k, v] : echo) os << "# config." << k << "=" << v << "\n";
}

/// Flat key=value report; nested keys are dot-separated by the caller.
class Report {
 public:
  template <class T>
  void set(const std::string& key, const T& value) {
    for (auto& e : entries_) {
      if (e.first == key) {
        e.second = fmt(value);
        return;
      }
    }
    entries_.emplace_back(key, fmt(value));
  }
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  void write(std::ostream& os, const std::string& kind, const Echo& echo) const {
    write_header(os, kind, echo);
    for (const auto& [k, v] : entries_) os << k << "=" << v << "\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// key=value lines; blank lines and '#' comments are skipped.
inline std::map<std::string, std::string> parse_key_values(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw usage_error("line " + std::to_string(lineno) + ": expected key=value, got '" + t + "'");
    }
    out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return out;
}

inline double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw usage_error("malformed number for " + what + ": '" + s + "'");
  }
}

inline int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw usage_error("malformed integer for " + what + ": '" + s + "'");
  }
}

struct Table {
  std::map<std::string, std::string> meta;  // from "# key=value[,key=value]" comment lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw usage_error("missing column '" + name + "'");
  }
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
  return out;
}

inline void absorb_comment(std::map<std::string, std::string>& meta, const std::string& line) {
  std::string body = trim(line.substr(1));
  for (const auto& piece : split(body, ',')) {
    auto eq = piece.find('=');
    if (eq != std::string::npos && eq > 0) meta[piece.substr(0, eq)] = piece.substr(eq + 1);
  }
}

/// Reads a CSV with comment header; stops at a line starting with '[' (next
/// section) or end of stream.
inline Table read_table(std::istream& is) {
  Table t;
  std::string line;
  while (is.peek() != EOF && is.peek() != '[' && std::getline(is, line)) {
    std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      absorb_comment(t.meta, s);
      continue;
    }
    if (t.columns.empty()) {
      t.columns = split(s, ',');
      continue;
    }
    auto cells = split(s, ',');
    if (cells.size() != t.columns.size()) throw usage_error("csv row has wrong field count: '" + s + "'");
    std::vector<double> row;
    for (std::size_t i = 0; i < cells.size(); ++i) row.push_back(to_double(cells[i], t.columns[i]));
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw usage_error("csv: missing header line");
  return t;
}

// ---------------------------------------------------------------------------
// grid functions

inline void write_grid_body(std::ostream& os, const GridFunction& g) {
  os << "# lo=" << fmt(g.lo()) << ",hi=" << fmt(g.hi()) << ",M=" << g.size() << "\n";
  os << "x,value\n";
  for (std::size_t i = 0; i < g.size(); ++i) os << fmt(g.node(i)) << "," << fmt(g.value(i)) << "\n";
}

inline void write_grid_csv(std::ostream& os, const GridFunction& g, const Echo& echo) {
  write_header(os, "grid", echo);
  write_grid_body(os, g);
}

inline GridFunction grid_from_table(const Table& t, Extension ext = Extension::none) {
  if (!t.meta.count("lo") || !t.meta.count("hi")) throw usage_error("grid csv: missing '# lo=..,hi=..,M=..' line");
  double lo = to_double(t.meta.at("lo"), "lo");
  double hi = to_double(t.meta.at("hi"), "hi");
  std::size_t vi = t.column("value");
  std::vector<double> values;
  for (const auto& r : t.rows) values.push_back(r[vi]);
  if (t.meta.count("M") && static_cast<std::size_t>(to_int(t.meta.at("M"), "M")) != values.size()) {
    throw usage_error("grid csv: M does not match the number of rows");
  }
  return GridFunction(lo, hi, std::move(values), ext);
}

inline GridFunction read_grid_csv(std::istream& is, Extension ext = Extension::none) {
  return grid_from_table(read_table(is), ext);
}

// ---------------------------------------------------------------------------
// traces

inline void write_trace_csv(std::ostream& os, const GreedyTrace& tr, const Echo& echo, const Echo& meta = {}) {
  write_header(os, "trace", echo);
  if (!meta.empty()) {
    os << "#";
    for (std::size_t i = 0; i < meta.size(); ++i) os << (i ? "," : " ") << meta[i].first << "=" << meta[i].second;
    os << "\n";
  }
  os << "# algorithm=" << to_string(tr.algorithm) << ",shrinkage=" << fmt(tr.shrinkage)
     << ",initial_norm=" << fmt(tr.initial_norm) << "\n";
  os << "n,residual_norm,atom_id,sign,coefficient\n";
  for (const auto& s : tr.steps) {
    os << s.step_index << "," << fmt(s.residual_norm) << "," << s.atom_id << "," << s.sign << ","
       << fmt(s.coefficient) << "\n";
  }
}

inline GreedyTrace trace_from_table(const Table& t) {
  GreedyTrace tr;
  if (t.meta.count("algorithm")) tr.algorithm = parse_algorithm(t.meta.at("algorithm"));
  if (t.meta.count("shrinkage")) tr.shrinkage = to_double(t.meta.at("shrinkage"), "shrinkage");
  if (t.meta.count("initial_norm")) tr.initial_norm = to_double(t.meta.at("initial_norm"), "initial_norm");
  std::size_t cn = t.column("n"), cr = t.column("residual_norm"), ca = t.column("atom_id"), cs = t.column("sign"),
              cc = t.column("coefficient");
  for (const auto& r : t.rows) {
    GreedyStep s;
    s.step_index = static_cast<int>(r[cn]);
    s.residual_norm = r[cr];
    s.atom_id = static_cast<std::size_t>(r[ca]);
    s.sign = static_cast<int>(r[cs]);
    s.coefficient = r[cc];
    tr.steps.push_back(s);
  }
  return tr;
}

inline GreedyTrace read_trace_csv(std::istream& is) { return trace_from_table(read_table(is)); }

// ---------------------------------------------------------------------------
// adversarial instances

inline void write_instance(std::ostream& os, const ConstructionParams& p, const std::vector<SequenceRow>& rows,
                           const Echo& echo) {
  write_header(os, "instance", echo);
  os << "[instance]\n";
  os << "beta=" << fmt(p.beta) << "\n";
  os << "K=" << p.K << "\n";
  os << "N=" << p.N << "\n";
  os << "n_max=" << p.n_max << "\n";
  os << "epsilon=" << fmt(p.epsilon) << "\n";
  os << "t=" << fmt(p.phi.t) << "\n";
  os << "tau=" << fmt(p.phi.tau) << "\n";
  os << "grid_M=" << p.phi.phi.size() << "\n";
  os << "C_t=" << fmt(p.phi.C_t) << "\n";
  os << "[phi]\n";
  write_grid_body(os, p.phi.phi);
  os << "[sequences]\n";
  os << "n,q,gamma,alpha,xi\n";
  for (const auto& r : rows) {
    os << r.n << "," << fmt(r.q) << "," << fmt(r.gamma) << "," << fmt(r.alpha) << "," << fmt(r.xi) << "\n";
  }
}

struct InstanceFile {
  ConstructionParams params;
  std::vector<SequenceRow> rows;
};

inline InstanceFile read_instance(std::istream& is) {
  InstanceFile out;
  std::string line;
  std::map<std::string, std::string> kv;
  bool have_phi = false, have_seq = false;
  while (std::getline(is, line)) {
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s == "[instance]") {
      while (is.peek() != EOF && is.peek() != '[' && std::getline(is, line)) {
        std::string u = trim(line);
        if (u.empty() || u[0] == '#') continue;
        auto eq = u.find('=');
        if (eq == std::string::npos) throw usage_error("instance: bad header line '" + u + "'");
        kv[u.substr(0, eq)] = u.substr(eq + 1);
      }
    } else if (s == "[phi]") {
      out.params.phi.phi = read_grid_csv(is);
      have_phi = true;
    } else if (s == "[sequences]") {
      Table t = read_table(is);
      std::size_t cn = t.column("n"), cq = t.column("q"), cg = t.column("gamma"), ca = t.column("alpha"),
                  cx = t.column("xi");
      for (const auto& r : t.rows) out.rows.push_back({static_cast<int>(r[cn]), r[cq], r[cg], r[ca], r[cx]});
      have_seq = true;
    } else {
      throw usage_error("instance: unexpected line '" + s + "'");
    }
  }
  for (const char* key : {"beta", "K", "N", "n_max", "epsilon", "t", "tau"}) {
    if (!kv.count(key)) throw usage_error(std::string("instance: missing key '") + key + "'");
  }
  if (!have_phi || !have_seq) throw usage_error("instance: missing [phi] or [sequences] section");
  auto& p = out.params;
  p.beta = to_double(kv["beta"], "beta");
  p.K = to_int(kv["K"], "K");
  p.N = to_int(kv["N"], "N");
  p.n_max = to_int(kv["n_max"], "n_max");
  p.epsilon = to_double(kv["epsilon"], "epsilon");
  p.phi.t = to_double(kv["t"], "t");
  p.phi.tau = to_double(kv["tau"], "tau");
  p.phi.beta = p.beta;
  p.phi.delta = p.phi.tau - 2.0 * p.phi.t;
  if (kv.count("C_t")) p.phi.C_t = to_double(kv["C_t"], "C_t");
  if (kv.count("grid_M") && static_cast<std::size_t>(to_int(kv["grid_M"], "grid_M")) != p.phi.phi.size()) {
    throw usage_error("instance: grid_M does not match the phi section");
  }
  return out;
}

/// Rebuilds atoms and residuals from the stored sequences.
inline AdversarialInstance load_instance(const InstanceFile& file) {
  return finalize(replay(file.params, file.rows), file.params);
}

}  // namespace mpgreedy::io
