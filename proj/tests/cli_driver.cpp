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

// Drives the installed command-line binary end to end. The binary path
// arrives as the first program argument (wired up by the build).

#define DOCTEST_CONFIG_IMPLEMENT
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "obslab/experiments.hpp"
#include "obslab/io.hpp"

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string g_cli;

struct CmdResult {
  int code = -1;
  std::string output;
};

CmdResult run_cmd(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  std::string capture =
      (fs::temp_directory_path() /
       ("obslab_cli_capture_" + std::to_string(counter++) + ".txt"))
          .string();
  std::string cmd = env + (env.empty() ? "" : " ") + g_cli + " " + args +
                    " > " + capture + " 2>&1";
  int status = std::system(cmd.c_str());
  CmdResult res;
  if (WIFEXITED(status)) res.code = WEXITSTATUS(status);
  res.output = obslab::read_file(capture);
  fs::remove(capture);
  return res;
}

std::string fresh_dir(const std::string& tag) {
  auto d = fs::temp_directory_path() / ("obslab_cli_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d.string();
}

std::string spectrum_config(const std::string& dir, const std::string& out) {
  std::string cfg = dir + "/spectrum.json";
  obslab::write_file(cfg, R"({
  "grid": {"x_min": -10, "x_max": 10, "n": 64},
  "potential": {"kind": "sine", "amplitude": 1.0},
  "thickset": {"kind": "periodic", "L": 1.0, "zeta": 0.3},
  "experiment": {"name": "spectrum", "seed": 4},
  "output": {"directory": ")" + out + R"("}
})");
  return cfg;
}

}  // namespace

TEST_CASE("listing shows every catalog experiment") {
  CmdResult plain = run_cmd("list");
  REQUIRE(plain.code == 0);
  for (const auto& info : obslab::experiment_catalog()) {
    CHECK(plain.output.find(info.name) != std::string::npos);
  }

  CmdResult as_json = run_cmd("list --json");
  REQUIRE(as_json.code == 0);
  auto j = nlohmann::json::parse(as_json.output);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == obslab::experiment_catalog().size());
  for (const auto& entry : j) {
    CHECK(entry.contains("name"));
    CHECK(entry.contains("description"));
  }
}

TEST_CASE("version flag reports and exits cleanly") {
  CmdResult res = run_cmd("--version");
  CHECK(res.code == 0);
  CHECK(res.output.find("1.0.0") != std::string::npos);
  // a bare invocation must not silently succeed
  CHECK(run_cmd("").code != 0);
}

TEST_CASE("validate accepts good configs and rejects bad ones") {
  std::string dir = fresh_dir("validate");
  std::string good = spectrum_config(dir, dir + "/out");
  CHECK(run_cmd("validate " + good).code == 0);

  std::string broken = dir + "/broken.json";
  obslab::write_file(broken, "{ not json");
  CHECK(run_cmd("validate " + broken).code == 1);

  std::string unknown_key = dir + "/unknown_key.json";
  obslab::write_file(unknown_key, R"({
  "grid": {"x_min": -10, "x_max": 10, "n": 64, "spacing": 0.1},
  "experiment": {"name": "spectrum"}
})");
  CHECK(run_cmd("validate " + unknown_key).code == 1);

  std::string unknown_name = dir + "/unknown_name.json";
  obslab::write_file(unknown_name, R"({"experiment": {"name": "warp"}})");
  CHECK(run_cmd("validate " + unknown_name).code == 1);

  CHECK(run_cmd("validate " + dir + "/missing.json").code == 1);
  fs::remove_all(dir);
}

TEST_CASE("a run writes artifacts plus a manifest with true hashes") {
  std::string dir = fresh_dir("run");
  std::string out = dir + "/out";
  std::string cfg = spectrum_config(dir, out);
  CmdResult res = run_cmd("run " + cfg);
  REQUIRE(res.code == 0);

  auto manifest = nlohmann::json::parse(obslab::read_file(out + "/run.json"));
  CHECK(manifest["experiment"] == "spectrum");
  CHECK(manifest["tool"] == "obslab");
  char expect_cfg_hash[32];
  std::snprintf(expect_cfg_hash, sizeof expect_cfg_hash, "%016llx",
                static_cast<unsigned long long>(obslab::fnv1a64_file(cfg)));
  CHECK(manifest["config_fnv64"] == expect_cfg_hash);

  REQUIRE(manifest["artifacts"].size() >= 2);
  bool saw_csv = false;
  for (const auto& art : manifest["artifacts"]) {
    std::string rel = art["file"];
    std::string full = out + "/" + rel;
    REQUIRE(fs::exists(full));
    CHECK(art["bytes"].get<uint64_t>() == fs::file_size(full));
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(obslab::fnv1a64_file(full)));
    CHECK(art["fnv64"] == hash);
    saw_csv = saw_csv || rel == "spectrum.csv";
  }
  CHECK(saw_csv);
  // the table has a header and one line per mode
  std::string csv = obslab::read_file(out + "/spectrum.csv");
  CHECK(csv.rfind("k,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);
  fs::remove_all(dir);
}

TEST_CASE("reruns are byte-identical, also across worker counts") {
  std::string dir = fresh_dir("determinism");
  std::string out1 = dir + "/out1";
  std::string out2 = dir + "/out2";
  std::string out3 = dir + "/out3";
  std::string base = dir + "/sweep.json";
  auto config_for = [&](const std::string& out) {
    return std::string(R"({
  "grid": {"x_min": -10, "x_max": 10, "n": 48},
  "potential": {"kind": "sine", "amplitude": 1.0},
  "thickset": {"kind": "periodic", "L": 1.0, "zeta": 0.3, "offset": 0.5},
  "experiment": {"name": "obs-sweep", "seed": 2,
                 "sweeps": {"T": [0.4, 0.6, 0.9, 1.3]}},
  "output": {"directory": ")") + out + R"("}
})";
  };
  obslab::write_file(base, config_for(out1));
  REQUIRE(run_cmd("run " + base).code == 0);
  obslab::write_file(base, config_for(out2));
  REQUIRE(run_cmd("run " + base).code == 0);
  obslab::write_file(base, config_for(out3));
  REQUIRE(run_cmd("run " + base, "OBSLAB_THREADS=2").code == 0);

  for (const char* artifact : {"sweep.csv", "summary.json"}) {
    auto h1 = obslab::fnv1a64_file(out1 + "/" + artifact);
    CHECK(h1 == obslab::fnv1a64_file(out2 + "/" + artifact));
    CHECK(h1 == obslab::fnv1a64_file(out3 + "/" + artifact));
  }
  fs::remove_all(dir);
}

TEST_CASE("config errors exit with the validation code") {
  std::string dir = fresh_dir("thin");
  std::string cfg = dir + "/thin.json";
  // one isolated island is not thick at this window scale
  obslab::write_file(cfg, R"({
  "grid": {"x_min": -10, "x_max": 10, "n": 64},
  "potential": {"kind": "sine", "amplitude": 1.0},
  "thickset": {"kind": "explicit", "L": 1.0, "zeta": 0.3,
               "intervals": [[-0.5, 0.5]]},
  "experiment": {"name": "obs-sweep"},
  "output": {"directory": ")" + dir + R"(/out"}
})");
  CmdResult res = run_cmd("run " + cfg);
  CHECK(res.code == 1);
  CHECK(res.output.find("config error") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("numerical breakdown exits with the numerical code") {
  std::string dir = fresh_dir("rankwall");
  std::string cfg = dir + "/rankwall.json";
  // a frequency cutoff admitting more modes than observed nodes
  obslab::write_file(cfg, R"({
  "grid": {"x_min": -10, "x_max": 10, "n": 96},
  "potential": {"kind": "sine", "amplitude": 1.0},
  "thickset": {"kind": "periodic", "L": 2.0, "zeta": 0.15, "offset": 0.25},
  "experiment": {"name": "spectral-sweep",
                 "sweeps": {"mu": [2.0, 3.0, 50.0]}},
  "output": {"directory": ")" + dir + R"(/out"}
})");
  CmdResult res = run_cmd("run " + cfg);
  CHECK(res.code == 2);
  fs::remove_all(dir);
}

int main(int argc, char** argv) {
  doctest::Context ctx;
  std::vector<char*> pass;
  pass.push_back(argv[0]);
  int start = 1;
  if (argc > 1 && argv[1][0] != '-') {
    g_cli = argv[1];
    start = 2;
  }
  for (int i = start; i < argc; ++i) pass.push_back(argv[i]);
  ctx.applyCommandLine(static_cast<int>(pass.size()), pass.data());
  return ctx.run();
}
