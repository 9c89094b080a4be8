#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "levyx/errors.hpp"

namespace levyx {

// Paired burst records (z, x(t*)) with a shared lag t*. Storage is flat and
// dim-strided so multi-million-record datasets stay cache friendly.
struct BurstDataset {
  double t_star = 0.0;
  int dim = 0;
  std::uint64_t seed = 0;
  std::size_t aborted_trajectories = 0;
  std::vector<double> z;  // size() * dim
  std::vector<double> x;  // size() * dim

  std::size_t size() const { return dim > 0 ? z.size() / static_cast<std::size_t>(dim) : 0; }

  std::span<const double> z_at(std::size_t i) const {
    return {z.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  std::span<const double> x_at(std::size_t i) const {
    return {x.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }

  void push(std::span<const double> zi, std::span<const double> xi) {
    z.insert(z.end(), zi.begin(), zi.end());
    x.insert(x.end(), xi.begin(), xi.end());
  }

  void validate() const {
    if (dim < 1) throw SchemaError("dataset: dim must be >= 1");
    if (!(t_star > 0.0)) throw SchemaError("dataset: t_star must be positive");
    if (z.empty()) throw SchemaError("dataset: record section is empty");
    if (z.size() != x.size() || z.size() % static_cast<std::size_t>(dim) != 0)
      throw SchemaError("dataset: record storage inconsistent with dim");
  }
};

namespace detail {

// Full round-trip precision (17 significant digits).
inline void append_double(std::string& out, double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  out.append(buf, static_cast<std::size_t>(len));
}

inline std::string expected_header(int dim) {
  std::string h;
  for (int i = 0; i < dim; ++i) h += "z_" + std::to_string(i + 1) + ",";
  for (int i = 0; i < dim; ++i) {
    h += "x_" + std::to_string(i + 1);
    if (i + 1 < dim) h += ",";
  }
  return h;
}

inline std::string sidecar_path(const std::string& path) { return path + ".meta.json"; }

}  // namespace detail

// Writes the record CSV plus a sidecar JSON (<path>.meta.json) holding
// t_star, dim, seed and the aborted-trajectory count.
inline void save_dataset(const BurstDataset& ds, const std::string& path) {
  ds.validate();
  std::string body = detail::expected_header(ds.dim) + "\n";
  const std::size_t n = ds.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto zi = ds.z_at(i);
    const auto xi = ds.x_at(i);
    for (int k = 0; k < ds.dim; ++k) {
      detail::append_double(body, zi[static_cast<std::size_t>(k)]);
      body += ',';
    }
    for (int k = 0; k < ds.dim; ++k) {
      detail::append_double(body, xi[static_cast<std::size_t>(k)]);
      body += (k + 1 < ds.dim) ? ',' : '\n';
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << body;
  if (!out) throw IoError("write failed for '" + path + "'");

  nlohmann::json meta{{"t_star", ds.t_star},
                      {"dim", ds.dim},
                      {"seed", ds.seed},
                      {"aborted_trajectories", ds.aborted_trajectories}};
  std::ofstream mout(detail::sidecar_path(path), std::ios::binary);
  if (!mout) throw IoError("cannot open '" + detail::sidecar_path(path) + "' for writing");
  mout << meta.dump(2) << '\n';
}

inline BurstDataset load_dataset(const std::string& path) {
  std::ifstream min(detail::sidecar_path(path), std::ios::binary);
  if (!min) throw IoError("missing sidecar '" + detail::sidecar_path(path) + "'");
  nlohmann::json meta;
  try {
    min >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("sidecar JSON malformed: " + std::string(e.what()));
  }
  BurstDataset ds;
  try {
    ds.t_star = meta.at("t_star").get<double>();
    ds.dim = meta.at("dim").get<int>();
    ds.seed = meta.value("seed", std::uint64_t{0});
    ds.aborted_trajectories = meta.value("aborted_trajectories", std::size_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("sidecar JSON missing required field: " + std::string(e.what()));
  }
  if (ds.dim < 1) throw SchemaError("sidecar: dim must be >= 1");
  if (!(ds.t_star > 0.0)) throw SchemaError("sidecar: t_star must be positive");

  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw SchemaError("dataset file is empty: '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != detail::expected_header(ds.dim))
    throw SchemaError("header mismatch: expected '" + detail::expected_header(ds.dim) + "', got '" + line + "'");

  const std::size_t cols = 2 * static_cast<std::size_t>(ds.dim);
  std::vector<double> row(cols);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    for (std::size_t c = 0; c < cols; ++c) {
      auto [next, ec] = std::from_chars(p, end, row[c]);
      if (ec != std::errc{}) throw ParseError("cannot parse field " + std::to_string(c + 1), line_no);
      p = next;
      if (c + 1 < cols) {
        if (p >= end || *p != ',') throw ParseError("expected ',' after field " + std::to_string(c + 1), line_no);
        ++p;
      }
    }
    if (p != end) throw ParseError("trailing characters after last field", line_no);
    ds.z.insert(ds.z.end(), row.begin(), row.begin() + ds.dim);
    ds.x.insert(ds.x.end(), row.begin() + ds.dim, row.end());
  }
  if (ds.z.empty()) throw SchemaError("dataset '" + path + "' has no records");
  ds.validate();
  return ds;
}

}  // namespace levyx
