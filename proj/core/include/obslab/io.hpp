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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace obslab {

// Shortest round-trip decimal form (%.17g trimmed by the C library); the
// same double always prints the same bytes, which is what makes reruns
// byte-identical.
std::string fmt_double(double v);

// Comma-separated table with a header row, '.' decimal point, '\n' line
// endings; numeric cells via fmt_double.
class CsvWriter {
 public:
  CsvWriter(std::string path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);
  void close();  // writes the file; called by the destructor if needed
  ~CsvWriter();

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string buf_;
  size_t columns_ = 0;
  bool closed_ = false;
};

uint64_t fnv1a64(const void* data, size_t len);
uint64_t fnv1a64_str(const std::string& s);
uint64_t fnv1a64_file(const std::string& path);  // throws ConfigError if unreadable

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

struct ArtifactRecord {
  std::string file;  // path relative to the output directory
  uint64_t bytes = 0;
  uint64_t fnv64 = 0;
};

// run.json: tool version, experiment name, config hash, and a content hash
// for every artifact the run produced.
void write_manifest(const std::string& out_dir, const std::string& experiment,
                    const std::string& config_path, uint64_t config_hash,
                    const std::vector<ArtifactRecord>& artifacts);

ArtifactRecord hash_artifact(const std::string& out_dir,
                             const std::string& rel_path);

}  // namespace obslab
