/*
 * Copyright (C) 2026 The feller-toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "feller/ensemble_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "json.hpp"

namespace feller {

namespace {

using nlohmann::json;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(const std::vector<std::uint8_t>& in, std::size_t at, int bytes) {
  if (at + static_cast<std::size_t>(bytes) > in.size()) throw ConfigError("ensemble file is truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in[at + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

json header_of(const PathEnsemble& e) {
  json h;
  h["dimension"] = e.dimension;
  h["n_paths"] = e.n_paths();
  h["n_times"] = e.n_times();
  h["time_grid"] = e.time_grid;
  h["start"] = std::vector<double>(e.start.data(), e.start.data() + e.start.size());
  h["scheme"] = to_string(e.scheme);
  h["seed_lineage"] = {{"root_seed", e.lineage.root_seed}, {"stream_id", e.lineage.stream_id}};
  h["decimation"] = e.decimation;
  h["step"] = e.step;
  h["symmetrized"] = e.symmetrized;
  h["mirror_stream_id"] = e.mirror_stream_id;
  h["model"] = e.model;
  h["layout"] = "path,time,coordinate";
  return h;
}

}  // namespace

std::vector<std::uint8_t> serialize_ensemble(const PathEnsemble& e) {
  const std::string header = header_of(e).dump();
  std::vector<std::uint8_t> out;
  const auto n = static_cast<std::size_t>(e.positions.size());
  out.reserve(20 + header.size() + 8 * n);
  for (char c : {'F', 'L', 'P', 'E'}) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, kEnsembleFormatVersion);
  put_u64(out, header.size());
  out.insert(out.end(), header.begin(), header.end());
  const double* p = e.positions.data();
  for (std::size_t k = 0; k < n; ++k) put_u64(out, std::bit_cast<std::uint64_t>(p[k]));
  return out;
}

PathEnsemble deserialize_ensemble(const std::vector<std::uint8_t>& in) {
  if (in.size() < 16 || std::memcmp(in.data(), "FLPE", 4) != 0) throw ConfigError("not an FLPE ensemble file");
  const auto version = static_cast<std::uint32_t>(get_u64(in, 4, 4));
  if (version != kEnsembleFormatVersion) throw ConfigError("unsupported FLPE version " + std::to_string(version));
  const std::uint64_t len = get_u64(in, 8, 8);
  if (16 + len > in.size()) throw ConfigError("ensemble file is truncated");
  json h;
  try {
    h = json::parse(in.begin() + 16, in.begin() + 16 + static_cast<std::ptrdiff_t>(len));
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("bad FLPE header: ") + ex.what());
  }
  PathEnsemble e;
  try {
    e.dimension = h.at("dimension").get<int>();
    e.time_grid = h.at("time_grid").get<std::vector<double>>();
    const auto start = h.at("start").get<std::vector<double>>();
    e.start = Eigen::Map<const Vector>(start.data(), static_cast<Eigen::Index>(start.size()));
    e.scheme = scheme_from_string(h.at("scheme").get<std::string>());
    e.lineage.root_seed = h.at("seed_lineage").at("root_seed").get<std::uint64_t>();
    e.lineage.stream_id = h.at("seed_lineage").at("stream_id").get<std::uint32_t>();
    e.decimation = h.at("decimation").get<int>();
    e.step = h.at("step").get<double>();
    e.symmetrized = h.at("symmetrized").get<bool>();
    e.mirror_stream_id = h.at("mirror_stream_id").get<std::uint32_t>();
    e.model = h.at("model").get<std::string>();
    const auto rows = h.at("n_paths").get<std::size_t>();
    if (h.at("n_times").get<std::size_t>() != e.time_grid.size()) throw ConfigError("FLPE header: n_times mismatch");
    e.positions.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(e.time_grid.size()) * e.dimension);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("bad FLPE header: ") + ex.what());
  }
  const auto n = static_cast<std::size_t>(e.positions.size());
  const std::size_t body = 16 + len;
  if (in.size() != body + 8 * n) throw ConfigError("FLPE payload size does not match its header");
  double* p = e.positions.data();
  for (std::size_t k = 0; k < n; ++k) p[k] = std::bit_cast<double>(get_u64(in, body + 8 * k, 8));
  return e;
}

void write_ensemble(const PathEnsemble& e, const std::filesystem::path& file) {
  const auto bytes = serialize_ensemble(e);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + file.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ConfigError("failed writing " + file.string());
}

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + file.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

PathEnsemble read_ensemble(const std::filesystem::path& file) { return deserialize_ensemble(slurp(file)); }

void write_ensemble_csv(const PathEnsemble& e, const std::filesystem::path& file) {
  std::FILE* f = std::fopen(file.string().c_str(), "w");
  if (!f) throw ConfigError("cannot open " + file.string() + " for writing");
  std::fprintf(f, "path,t");
  for (int i = 0; i < e.dimension; ++i) std::fprintf(f, ",x%d", i + 1);
  std::fprintf(f, "\n");
  for (std::size_t p = 0; p < e.n_paths(); ++p)
    for (std::size_t k = 0; k < e.n_times(); ++k) {
      std::fprintf(f, "%zu,%.17g", p, e.time_grid[k]);
      for (int i = 0; i < e.dimension; ++i) std::fprintf(f, ",%.17g", e.coordinate(p, k, i));
      std::fprintf(f, "\n");
    }
  std::fclose(f);
}

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t k = 0; k < n; ++k) {
    h ^= data[k];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t file_checksum(const std::filesystem::path& file) {
  const auto bytes = slurp(file);
  return fnv1a64(bytes.data(), bytes.size());
}

std::string checksum_hex(std::uint64_t c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(c));
  return buf;
}

}  // namespace feller
