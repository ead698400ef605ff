// Copyright 2026 The clx authors.
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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "clx/cli.hpp"
#include "clx/dataio.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace clx;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "clx");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct Workdir {
  std::filesystem::path path;
  Workdir() {
    path = std::filesystem::temp_directory_path() /
           ("clx-cli-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~Workdir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = (path / name).string();
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
  std::string at(const std::string& name) const { return (path / name).string(); }
};

const std::string kData = CLX_TEST_DATA;

}  // namespace

TEST_CASE("profile") {
  const auto r = run({"profile", "--input", kData + "/medical.txt"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("#") == 0);
  CHECK(r.out.find("\"CPT-00350\"") != std::string::npos);
  CHECK(r.out.find("  #") != std::string::npos);

  const auto j = run({"profile", "--input", kData + "/medical.txt", "--json"});
  CHECK(j.code == kExitOk);
  CHECK(nlohmann::json::parse(j.out)["roots"].is_array());

  const auto csv = run({"profile", "--input", kData + "/products.csv", "--column", "code"});
  CHECK(csv.code == kExitOk);
  CHECK(csv.out.find("(1 empty rows)") != std::string::npos);
}

TEST_CASE("synth and apply") {
  Workdir w;
  const auto prog = w.at("prog.json");
  const auto s = run({"synth", "--input", kData + "/dates.txt", "--target", "<D>2'-'<D>2'-'<D>4",
                      "--program", prog});
  CHECK(s.code == kExitOk);
  CHECK(s.out.rfind("Replace '/^", 0) == 0);
  CHECK(s.out.find("  * #0 dl=") != std::string::npos);

  const auto a = run({"apply", "--input", kData + "/dates.txt", "--program", prog});
  CHECK(a.code == kExitOk);
  CHECK(a.out ==
        "column1,status\n25-12-2017,Transformed\n01-02-2018,Transformed\n03-04-2019,Transformed\n");
  CHECK(a.err == "3 transformed, 0 already conforming, 0 unmatched\n");

  const auto v = run({"apply", "--input", kData + "/dates.txt", "--program", prog, "--values-only",
                      "--out", w.at("out.txt")});
  CHECK(v.out.empty());
  CHECK(read_file(w.at("out.txt")) == "25-12-2017\n01-02-2018\n03-04-2019\n");

  const auto j = run({"apply", "--input", kData + "/dates.txt", "--program", prog, "--json"});
  CHECK(nlohmann::json::parse(j.out)["counts"]["Transformed"] == 3);

  const auto sj = run({"synth", "--input", kData + "/dates.txt", "--target",
                       "<D>2'-'<D>2'-'<D>4", "--json", "-k", "1"});
  const auto doc = nlohmann::json::parse(sj.out);
  CHECK(doc["branches"][0]["alternates"].size() <= 2);
  CHECK(doc.contains("program"));
}

TEST_CASE("strict apply and exit codes") {
  Workdir w;
  const auto input = w.file("in.txt", "25/12/2017\nN/A\n");
  const auto prog = w.at("p.json");
  REQUIRE(run({"synth", "--input", input, "--target", "<D>2'-'<D>2'-'<D>4", "--program", prog})
              .code == kExitOk);
  CHECK(run({"apply", "--input", input, "--program", prog}).code == kExitOk);
  CHECK(run({"apply", "--input", input, "--program", prog, "--strict"}).code == kExitUnmatched);

  CHECK(run({}).code == kExitUsage);
  CHECK(run({"bogus"}).code == kExitUsage);
  CHECK(run({"synth", "--input", input}).code == kExitUsage);
  CHECK(run({"synth", "--input", input, "--target", "<Q>"}).code == kExitData);
  CHECK(run({"profile", "--input", w.at("missing.txt")}).code == kExitData);
  CHECK(run({"profile", "--input", kData + "/products.csv", "--column", "nope"}).code == kExitData);
  CHECK(run({"apply", "--input", input, "--program", w.file("bad.json", "{")}).code == kExitData);
  CHECK(run({"apply", "--input", input, "--program", w.file("bad2.json", R"({"branches":1})")})
            .code == kExitData);
  CHECK(run({"serve", "--listen", "nonsense"}).code == kExitData);
  CHECK(run({"--help"}).code == kExitOk);
}
