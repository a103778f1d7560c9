// Copyright 2026 The ste-forge Authors
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

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "steforge/cli.hpp"
#include "steforge/generator.hpp"
#include "steforge/metrics.hpp"
#include "steforge/png_io.hpp"
#include "test_support.hpp"

using namespace steforge;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string config_path() { return (fs::path(STE_FORGE_SOURCE_DIR) / "configs" / "default.toml").string(); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit 2") {
    const Run missing = run({"generate", "--count", "3", "--out", "/tmp/never"});
    CHECK(missing.code == kExitUsage);
    CHECK(missing.err.find("--config") != std::string::npos);
    CHECK(missing.err.find("Usage") != std::string::npos);
    CHECK(missing.out.empty());

    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"loss", "--loss", "l2", "--inputs", "only_one.png"}).code == kExitUsage);
    CHECK(run({"loss", "--loss", "huber", "--inputs", "a", "b"}).code == kExitUsage);
    CHECK(run({"loss", "--loss", "total", "--inputs", "1", "1", "1", "1", "1", "1"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
  }

  TEST_CASE("generate: empty and deterministic datasets") {
    testing::TempDir dir("cligen");
    const Run zero = run({"generate", "--config", config_path(), "--count", "0", "--out", (dir / "zero").string()});
    CHECK(zero.code == kExitOk);
    CHECK(zero.out == (dir / "zero" / "manifest.json").string() + "\n");
    CHECK(read_manifest(dir / "zero").count == 0);

    const auto gen = [&](const std::string& leaf, const std::string& threads) {
      return run({"generate", "--config", config_path(), "--count", "16", "--seed", "7", "--threads", threads,
                  "--out", (dir / leaf).string()});
    };
    CHECK(gen("a", "1").code == kExitOk);
    CHECK(gen("b", "1").code == kExitOk);
    CHECK(gen("c", "4").code == kExitOk);
    const auto a = testing::tree_contents(dir / "a");
    CHECK(a.size() == 16 * 8 + 2);
    CHECK(a == testing::tree_contents(dir / "b"));
    CHECK(a == testing::tree_contents(dir / "c"));
    CHECK(read_manifest(dir / "a").master_seed == 7);

    ::setenv("STE_FORGE_THREADS", "3", 1);
    const Run env = run({"generate", "--config", config_path(), "--count", "16", "--seed", "7", "--out",
                         (dir / "d").string()});
    ::unsetenv("STE_FORGE_THREADS");
    CHECK(env.code == kExitOk);
    CHECK(a == testing::tree_contents(dir / "d"));
  }

  TEST_CASE("generate: config and io failures") {
    testing::TempDir dir("cligenerr");
    std::ofstream(dir / "bad.toml") << "canvas = [64, 256]\nunknown_key = 3\n";
    CHECK(run({"generate", "--config", (dir / "bad.toml").string(), "--count", "1", "--out", (dir / "o").string()})
              .code == kExitUsage);
    CHECK(run({"generate", "--config", (dir / "nope.toml").string(), "--count", "1", "--out",
               (dir / "o").string()})
              .code == kExitUsage);
    std::ofstream(dir / "occupied.txt") << "x";
    CHECK(run({"generate", "--config", config_path(), "--count", "1", "--out", dir.path().string()}).code == kExitIo);
  }

  TEST_CASE("evaluate: self comparison, csv, fid, exit codes") {
    testing::TempDir dir("clieval");
    REQUIRE(run({"generate", "--config", config_path(), "--count", "4", "--seed", "1", "--out",
                 (dir / "ds").string()})
                .code == kExitOk);
    const std::string x = (dir / "ds" / "t_f").string();

    const Run self = run({"evaluate", "--pred", x, "--gt", x});
    CHECK(self.code == kExitOk);
    const auto j = nlohmann::json::parse(self.out);
    CHECK(j["mse"] == 0.0);
    CHECK(j["ssim"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(j["psnr_db"] == "inf");
    CHECK_FALSE(j.contains("fid"));
    CHECK_FALSE(j.contains("wra"));

    const Run csv = run({"evaluate", "--pred", x, "--gt", x, "--format", "csv"});
    CHECK(csv.code == kExitOk);
    CHECK(csv.out.substr(0, csv.out.find('\n')) == "mse,psnr_db,ssim,fid,wra,n_pairs");

    std::ofstream(dir / "f.csv") << "1,2,3\n2,2,1\n0,1,1\n5,4,4\n";
    const std::string f = (dir / "f.csv").string();
    const Run fid = run({"evaluate", "--pred", x, "--gt", x, "--fid-features-a", f, "--fid-features-b", f, "--out",
                         (dir / "report.json").string()});
    CHECK(fid.code == kExitOk);
    CHECK(fid.out.empty());
    const auto r = nlohmann::json::parse(testing::slurp(dir / "report.json"));
    CHECK(std::abs(r["fid"].get<double>()) <= 1e-6);

    std::ofstream(dir / "broken.csv") << "1,2\n3\n";
    CHECK(run({"evaluate", "--pred", x, "--gt", x, "--fid-features-a", (dir / "broken.csv").string(),
               "--fid-features-b", f})
              .code == kExitMalformed);
    std::ofstream(dir / "p.txt") << "a\nb\n";
    std::ofstream(dir / "q.txt") << "a\nb\nc\n";
    CHECK(run({"evaluate", "--pred", x, "--gt", x, "--wra-pred", (dir / "p.txt").string(), "--wra-target",
               (dir / "q.txt").string()})
              .code == kExitMalformed);

    fs::create_directories(dir / "empty");
    CHECK(run({"evaluate", "--pred", x, "--gt", (dir / "empty").string()}).code == kExitNoPairs);
    CHECK(run({"evaluate", "--pred", x, "--gt", (dir / "missing").string()}).code == kExitIo);
  }

  TEST_CASE("tool subcommands") {
    testing::TempDir dir("clitool");
    const auto p = [&](const std::string& leaf) { return (dir / leaf).string(); };

    Mask line(9, 20);
    for (int x = 2; x < 18; ++x) line.at(4, x) = 1;
    write_mask(p("line.png"), line);
    CHECK(run({"tool", "skeletonize", "--in", p("line.png"), "--out", p("line_sk.png")}).code == kExitOk);
    CHECK(testing::slurp(p("line.png")) == testing::slurp(p("line_sk.png")));

    std::mt19937_64 rng(3);
    const Mask blob = testing::random_blob_mask(rng, 30, 40);
    write_mask(p("blob.png"), blob);
    CHECK(run({"tool", "invert", "--in", p("blob.png"), "--out", p("inv1.png")}).code == kExitOk);
    CHECK(run({"tool", "invert", "--in", p("inv1.png"), "--out", p("inv2.png")}).code == kExitOk);
    CHECK(testing::slurp(p("blob.png")) == testing::slurp(p("inv2.png")));

    CHECK(run({"tool", "content", "--text", "test", "--out", p("content.png")}).code == kExitOk);
    const ByteRaster content = read_png(p("content.png"));
    CHECK(content.height == 64);
    CHECK(content.width == 256);

    write_image(p("gray.png"), Image(10, 10, 1, 0.6f));
    const Run nonbinary = run({"tool", "skeletonize", "--in", p("gray.png"), "--out", p("x.png")});
    CHECK(nonbinary.code == kExitInvalidImage);
    const Run thresholded =
        run({"tool", "skeletonize", "--in", p("gray.png"), "--out", p("x.png"), "--threshold", "0.5"});
    CHECK(thresholded.code == kExitOk);
    CHECK(thresholded.err.find("warning") != std::string::npos);

    CHECK(run({"tool", "mask", "--in", p("gray.png"), "--out", p("m.png")}).code == kExitOk);
    CHECK(read_mask(p("m.png")).count() == 100);

    write_image(p("fg.png"), Image(10, 10, 3, 1.0f));
    write_image(p("alpha.png"), Image(10, 10, 1, 0.0f));
    write_image(p("bg.png"), Image(10, 10, 3, 0.2f));
    CHECK(run({"tool", "composite", "--fg", p("fg.png"), "--alpha", p("alpha.png"), "--bg", p("bg.png"), "--out",
               p("comp.png")})
              .code == kExitOk);
    CHECK(testing::slurp(p("comp.png")) == testing::slurp(p("bg.png")));

    CHECK(run({"tool", "invert", "--in", p("absent.png"), "--out", p("y.png")}).code == kExitIo);
  }

  TEST_CASE("loss subcommands") {
    testing::TempDir dir("cliloss");
    const auto p = [&](const std::string& leaf) { return (dir / leaf).string(); };
    write_image(p("zero.png"), Image(8, 8, 3, 0.0f));
    write_image(p("half.png"), Image(8, 8, 3, 0.5f));
    Mask m(8, 8);
    m.at(1, 1) = m.at(2, 5) = m.at(6, 6) = 1;
    write_mask(p("m.png"), m);

    const Run l2 = run({"loss", "--loss", "l2", "--inputs", p("zero.png"), p("half.png")});
    CHECK(l2.code == kExitOk);
    // 0.5 is stored as byte 128, i.e. 128/255.
    const double stored = 128.0 / 255.0;
    CHECK(std::stod(l2.out) == doctest::Approx(stored * stored).epsilon(1e-6));
    CHECK(std::abs(std::stod(l2.out) - 0.25) < 2.5e-3);

    CHECK(run({"loss", "--loss", "dice", "--inputs", p("m.png"), p("m.png")}).out == "0.000000\n");
    CHECK(run({"loss", "--loss", "dice", "--inputs", p("half.png"), p("m.png")}).code == kExitInvalidImage);
    CHECK(run({"loss", "--loss", "gan", "--inputs", "0.5", "0.5"}).out == "-1.386294\n");
    CHECK(run({"loss", "--loss", "gan", "--inputs", "0.9,0.9", "0.1"}).out == "-0.210721\n");
    CHECK(run({"loss", "--loss", "total", "--inputs", "1", "1", "1", "1", "1", "1", "1", "1", "1"}).out ==
          "525.100000\n");

    std::ofstream probs(p("probs.csv"));
    probs.precision(17);
    for (int s = 0; s < 3; ++s) {
      for (int c = 0; c < 52; ++c) probs << (c ? "," : "") << (1.0 / 52.0);
      probs << "\n";
    }
    probs.close();
    CHECK(run({"loss", "--loss", "rec", "--inputs", p("probs.csv"), "abC"}).out == "3.951244\n");
    CHECK(run({"loss", "--loss", "rec", "--inputs", p("probs.csv"), "a1"}).code == kExitUsage);
  }
}
