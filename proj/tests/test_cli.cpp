// Copyright 2026 The targsent Authors.
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "targsent/cli.hpp"
#include "targsent/common.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using targsent::read_file;
namespace cli = targsent::cli;

namespace {

struct Captured {
  int code;
  std::string out;
};

Captured run(std::vector<std::string> args) {
  std::ostringstream buf;
  std::streambuf* old = std::cout.rdbuf(buf.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(nullptr);
  const int code = cli::run(args);
  std::cout.rdbuf(old);
  std::cerr.rdbuf(old_err);
  return {code, buf.str()};
}

// Fresh scratch directory holding a small synthetic corpus and its split.
class Workspace {
 public:
  Workspace() : dir_(fs::temp_directory_path() / "targsent_cli_test") {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    REQUIRE(run({"--seed", "3", "synth", "--out", path("corpus.jsonl"), "--posts", "120",
                 "--lexicon-dir", path("lex")})
                .code == 0);
    REQUIRE(run({"split", "--corpus", path("corpus.jsonl"), "--out-dir", path("split")})
                .code == 0);
  }
  ~Workspace() { fs::remove_all(dir_); }
  std::string path(const std::string& rel) const { return (dir_ / rel).string(); }

 private:
  fs::path dir_;
};

}  // namespace

TEST_CASE("version, help and usage errors") {
  const Captured v = run({"--version"});
  CHECK(v.code == cli::kExitOk);
  CHECK(v.out.find("1.0.0") != std::string::npos);
  CHECK(v.out.find("model format 1") != std::string::npos);
  CHECK(run({"--help"}).code == cli::kExitOk);
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"tokenize", "--corpus", "x.jsonl", "--scheme", "d5"}).code == cli::kExitUsage);
  CHECK(run({"evaluate", "--gold", "/nonexistent/gold.jsonl", "--predictions",
             "/nonexistent/p.tsv"})
            .code == cli::kExitData);
}

TEST_CASE("end to end: train, predict, evaluate, replay") {
  Workspace ws;
  CHECK(fs::exists(ws.path("lex/prior.tsv")));
  CHECK(fs::exists(ws.path("lex/scored.tsv")));
  CHECK(fs::exists(ws.path("lex/gloss.tsv")));
  CHECK(fs::exists(ws.path("corpus.jsonl.manifest.json")));

  for (const char* task : {"target", "sentiment"})
    REQUIRE(run({"train", "--task", task, "--scheme", "lemma_d3", "--train",
                 ws.path("split/train.jsonl"), "--out",
                 ws.path(std::string(task) + ".model"), "--features", "best", "--lexicon",
                 "prior:" + ws.path("lex/prior.tsv")})
                .code == 0);
  REQUIRE(run({"predict", "--target-model", ws.path("target.model"), "--sentiment-model",
               ws.path("sentiment.model"), "--corpus", ws.path("split/dev.jsonl"), "--out",
               ws.path("pred.tsv")})
              .code == 0);
  CHECK(run({"predict", "--target-model", ws.path("target.model"), "--sentiment-model",
             ws.path("sentiment.model"), "--corpus", ws.path("split/dev.jsonl"), "--out",
             ws.path("bad.tsv"), "--combined"})
            .code == cli::kExitUsage);

  const Captured ev = run({"evaluate", "--gold", ws.path("split/dev.jsonl"), "--predictions",
                           ws.path("pred.tsv"), "--report", ws.path("report.json")});
  REQUIRE(ev.code == 0);
  CHECK(ev.out.find("F-all") != std::string::npos);
  const json report = json::parse(read_file(ws.path("report.json")));
  CHECK(report["metrics"]["f_all"].get<double>() >= 0.7);

  const json manifest = json::parse(read_file(ws.path("pred.tsv.manifest.json")));
  for (const char* key : {"tool", "version", "model_format_version", "command", "args",
                          "working_directory", "config", "seed", "derived_seeds", "threads",
                          "inputs", "outputs", "timings"})
    CHECK_MESSAGE(manifest.contains(key), key);
  CHECK(manifest["inputs"].size() == 4);

  const std::string before = read_file(ws.path("pred.tsv"));
  const Captured rp = run({"replay", ws.path("pred.tsv.manifest.json")});
  CHECK(rp.code == 0);
  CHECK(rp.out.find("replay reproduced all outputs") != std::string::npos);
  CHECK(read_file(ws.path("pred.tsv")) == before);
  CHECK(run({"replay", ws.path("target.model.manifest.json")}).code == 0);
  CHECK(run({"replay", ws.path("split/split.manifest.json")}).code == 0);

  // A tampered digest is reported.
  json bad = manifest;
  bad["outputs"][0]["fnv1a64"] = "0000000000000000";
  targsent::write_file(ws.path("bad.manifest.json"), bad.dump());
  CHECK(run({"replay", ws.path("bad.manifest.json")}).code == cli::kExitData);
}

TEST_CASE("baselines, significance test and tokenization") {
  Workspace ws;
  const std::string dev = ws.path("split/dev.jsonl");
  const Captured maj = run({"baseline", "--corpus", dev, "--allnp", "--majority", "--out",
                            ws.path("maj.tsv"), "--report", ws.path("maj.json")});
  CHECK(maj.code == 0);
  CHECK(json::parse(read_file(ws.path("maj.json")))["metrics"]["target_recall"] == 1.0);
  CHECK(run({"baseline", "--corpus", dev, "--lexicon", ws.path("lex/scored.tsv"),
             "--lexicon-kind", "scored", "--out", ws.path("lex.tsv")})
            .code == 0);

  CHECK(run({"--seed", "5", "sigtest", "--gold", dev, "--a", ws.path("maj.tsv"), "--b",
             ws.path("lex.tsv"), "--iters", "200", "--metric", "f_all,f_pos", "--out",
             ws.path("sig.tsv")})
            .code == 0);
  const std::string sig = read_file(ws.path("sig.tsv"));
  CHECK(sig.rfind("metric\tdelta_observed\tp\tR\tseed\n", 0) == 0);
  CHECK(targsent::split(sig, '\n').size() >= 3);
  CHECK(run({"replay", ws.path("sig.tsv.manifest.json")}).code == 0);

  CHECK(run({"tokenize", "--corpus", dev, "--scheme", "lemma_d3", "--out",
             ws.path("tok.txt")})
            .code == 0);
  CHECK(read_file(ws.path("tok.txt")).find("Al+") != std::string::npos);

  const Captured lc = run({"lexicon", "check", ws.path("lex/scored.tsv"), "--kind", "scored"});
  CHECK(lc.code == 0);
  CHECK(lc.out.find("subjective") != std::string::npos);
  CHECK(run({"lexicon", "check", ws.path("corpus.jsonl"), "--kind", "scored"}).code ==
        cli::kExitData);
}

TEST_CASE("embeddings, clusters and the k sweep") {
  Workspace ws;
  REQUIRE(run({"embed", "train", "--corpus", ws.path("split/train.jsonl"), "--out",
               ws.path("vec.txt"), "--dim", "16", "--epochs", "2"})
              .code == 0);
  CHECK(run({"embed", "import", "--in", ws.path("vec.txt"), "--out", ws.path("vec2.txt")})
            .code == 0);
  CHECK(run({"cluster", "--embeddings", ws.path("vec.txt"), "--k", "8", "--out",
             ws.path("cl.tsv")})
            .code == 0);
  CHECK(run({"replay", ws.path("cl.tsv.manifest.json")}).code == 0);
  CHECK(run({"replay", ws.path("vec.txt.manifest.json")}).code == 0);
  CHECK(run({"cluster", "--embeddings", ws.path("vec.txt"), "--k", "100000", "--out",
             ws.path("cl2.tsv")})
            .code == cli::kExitUsage);
  CHECK(run({"train", "--task", "target", "--train", ws.path("split/train.jsonl"), "--out",
             ws.path("cl.model"), "--features", "basic,cluster"})
            .code == cli::kExitUsage);
  CHECK(run({"sweep-k", "--embeddings", ws.path("vec.txt"), "--grid", "4,8", "--train",
             ws.path("split/train.jsonl"), "--dev", ws.path("split/dev.jsonl"), "--out-dir",
             ws.path("sweep")})
            .code == 0);
  const auto rows = targsent::split(read_file(ws.path("sweep/sweep.tsv")), '\n');
  CHECK(rows.size() >= 3);
}

TEST_CASE("relative paths resolve against the data directory variable") {
  Workspace ws;
  ::setenv(cli::kDataDirEnv, ws.path("").c_str(), 1);
  const Captured r = run({"baseline", "--corpus", "split/dev.jsonl", "--out", "np.tsv"});
  ::unsetenv(cli::kDataDirEnv);
  CHECK(r.code == 0);
  CHECK(fs::exists(ws.path("np.tsv")));
}
