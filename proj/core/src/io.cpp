// Copyright 2026 The obslab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "obslab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "obslab/types.hpp"
#include "obslab/version.hpp"

namespace obslab {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // drop digits while the value still round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    double back;
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

CsvWriter::CsvWriter(std::string path, const std::vector<std::string>& header)
    : path_(std::move(path)), columns_(header.size()) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += header[i];
  }
  buf_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw ConfigError("CsvWriter: row width does not match header");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += cells[i];
  }
  buf_ += '\n';
}

void CsvWriter::row_values(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(fmt_double(v));
  row(cells);
}

void CsvWriter::close() {
  if (closed_) return;
  write_file(path_, buf_);
  closed_ = true;
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
    // destructor must not throw; an explicit close() surfaces the error
  }
}

uint64_t fnv1a64(const void* data, size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = 0xcbf29ce484222325ull;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t fnv1a64_str(const std::string& s) { return fnv1a64(s.data(), s.size()); }

uint64_t fnv1a64_file(const std::string& path) {
  return fnv1a64_str(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
  out.close();
  if (!out) throw ConfigError("write failed for file: " + path);
}

void write_manifest(const std::string& out_dir, const std::string& experiment,
                    const std::string& config_path, uint64_t config_hash,
                    const std::vector<ArtifactRecord>& artifacts) {
  nlohmann::ordered_json j;
  j["tool"] = "obslab";
  j["version"] = kVersion;
  j["experiment"] = experiment;
  j["config_path"] = config_path;
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(config_hash));
  j["config_fnv64"] = hex;
  j["artifacts"] = nlohmann::ordered_json::array();
  for (const auto& a : artifacts) {
    nlohmann::ordered_json e;
    e["file"] = a.file;
    e["bytes"] = a.bytes;
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(a.fnv64));
    e["fnv64"] = hex;
    j["artifacts"].push_back(e);
  }
  write_file(out_dir + "/run.json", j.dump(2) + "\n");
}

ArtifactRecord hash_artifact(const std::string& out_dir,
                             const std::string& rel_path) {
  std::string content = read_file(out_dir + "/" + rel_path);
  ArtifactRecord rec;
  rec.file = rel_path;
  rec.bytes = content.size();
  rec.fnv64 = fnv1a64_str(content);
  return rec;
}

}  // namespace obslab
