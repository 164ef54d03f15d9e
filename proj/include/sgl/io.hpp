#pragma once

#include <Eigen/Dense>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgl {

// Shortest round-trippable decimal form; keeps rerun outputs byte-identical.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // prefer the shortest representation that round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char cand[40];
    std::snprintf(cand, sizeof(cand), "%.*g", prec, v);
    if (std::strtod(cand, nullptr) == v) return cand;
  }
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
};

inline void write_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& header,
                      const Eigen::MatrixXd& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (int r = 0; r < values.rows(); ++r) {
    for (int c = 0; c < values.cols(); ++c)
      out << (c ? "," : "") << format_double(values(r, c));
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("non-numeric cell '" + cell + "' in " + path.string());
      }
    }
    if (row.size() != t.header.size())
      throw std::runtime_error("ragged row in " + path.string());
    rows.push_back(std::move(row));
  }
  t.values.resize(static_cast<int>(rows.size()), static_cast<int>(t.header.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      t.values(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
  return t;
}

// Edge-list import: header node_a,node_b with 0-based indices.
inline std::vector<std::pair<int, int>> read_edge_list(const std::filesystem::path& path) {
  CsvTable t = read_csv(path);
  if (t.header.size() != 2 || t.header[0] != "node_a" || t.header[1] != "node_b")
    throw std::runtime_error("edge list must have header node_a,node_b: " + path.string());
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < t.values.rows(); ++r)
    edges.emplace_back(static_cast<int>(t.values(r, 0)), static_cast<int>(t.values(r, 1)));
  return edges;
}

}  // namespace sgl
