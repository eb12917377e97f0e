#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "lensremap/image.hpp"
#include "lensremap/io.hpp"
#include "support/fixtures.hpp"

using namespace lensremap;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

/// Writes the base calibration (optionally scaled) to a JSON file in dir.
std::string base_config(const fixtures::TempDir& dir, double factor = 1.0) {
  const std::string path = dir.file("cfg_" + std::to_string(factor) + ".json");
  fixtures::write_text(path, lens_config_to_json(fixtures::base_at(factor)));
  return path;
}

std::string identity_config_file(const fixtures::TempDir& dir) {
  const std::string path = dir.file("identity.json");
  fixtures::write_text(path, R"({"image_width": 64, "image_height": 48,
      "intrinsics": {"fx": 40, "fy": 40, "cx": 31.5, "cy": 23.5}})");
  return path;
}

}  // namespace

TEST_CASE("cli: usage") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  const Outcome help = run({"--help"});
  CHECK(help.code == cli::kOk);
  CHECK(help.out.find("gen-map") != std::string::npos);
  CHECK(run({"gen-map", "--help"}).code == cli::kOk);
  CHECK(run({"estimate", "--bogus"}).code == cli::kUsage);
}

TEST_CASE("cli: gen-map") {
  fixtures::TempDir dir;
  const std::string cfg = base_config(dir);

  SUBCASE("identity config writes the pixel grid") {
    const Outcome o = run({"gen-map", "--config", identity_config_file(dir), "--approach", "reference", "--out",
                           dir.file("id.fmap")});
    REQUIRE(o.code == cli::kOk);
    CHECK(std::get<RemapField>(read_map_file(dir.file("id.fmap"))) == RemapField::identity(64, 48));
    REQUIRE(run({"gen-map", "--config", identity_config_file(dir), "--approach", "onthefly", "--frac-bits", "10",
                 "--out", dir.file("id2.fmap")})
                .code == cli::kOk);
    CHECK(std::get<RemapField>(read_map_file(dir.file("id2.fmap"))) == RemapField::identity(64, 48));
  }
  SUBCASE("sampled map of the base fixture") {
    const std::vector<std::string> args{"gen-map", "--config", cfg, "--approach", "sampled", "--n", "5", "--out",
                                        dir.file("a.smap")};
    REQUIRE(run(args).code == cli::kOk);
    const auto s = std::get<SubsampledMap>(read_map_file(dir.file("a.smap")));
    CHECK(s.sample_count() == 336);
    auto again = args;
    again.back() = dir.file("b.smap");
    REQUIRE(run(again).code == cli::kOk);
    CHECK(fixtures::slurp(dir.file("a.smap")) == fixtures::slurp(dir.file("b.smap")));
  }
  SUBCASE("deterministic across thread counts") {
    for (const char* threads : {"1", "3"}) {
      REQUIRE(run({"--threads", threads, "gen-map", "--config", cfg, "--approach", "onthefly", "--frac-bits", "16",
                   "--factor", "3", "--out", dir.file(std::string("t") + threads + ".fmap")})
                  .code == cli::kOk);
    }
    CHECK(fixtures::slurp(dir.file("t1.fmap")) == fixtures::slurp(dir.file("t3.fmap")));
  }
  SUBCASE("parameters of other approaches are rejected") {
    const std::string out = dir.file("x");
    CHECK(run({"gen-map", "--config", cfg, "--approach", "sampled", "--n", "5", "--frac-bits", "12", "--out", out})
              .code == cli::kUsage);
    CHECK(run({"gen-map", "--config", cfg, "--approach", "onthefly", "--frac-bits", "12", "--n", "5", "--out", out})
              .code == cli::kUsage);
    CHECK(run({"gen-map", "--config", cfg, "--approach", "reference", "--n", "5", "--out", out}).code == cli::kUsage);
    CHECK(run({"gen-map", "--config", cfg, "--approach", "full-lut", "--int-bits", "14", "--out", out}).code ==
          cli::kUsage);
    CHECK(run({"gen-map", "--config", cfg, "--approach", "onthefly", "--out", out}).code == cli::kUsage);
    CHECK(run({"gen-map", "--config", cfg, "--approach", "sampled", "--out", out}).code == cli::kUsage);
    CHECK(run({"gen-map", "--config", cfg, "--approach", "magic", "--out", out}).code == cli::kUsage);
    CHECK(run({"gen-map", "--approach", "reference", "--out", out}).code == cli::kUsage);
    CHECK_FALSE(std::filesystem::exists(out));
  }
  SUBCASE("invalid inputs") {
    const std::string out = dir.file("x");
    CHECK(run({"gen-map", "--config", dir.file("nope.json"), "--approach", "reference", "--out", out}).code ==
          cli::kUsage);
    fixtures::write_text(dir.file("bad.json"), R"({"image_width": 64})");
    const Outcome bad = run({"gen-map", "--config", dir.file("bad.json"), "--approach", "reference", "--out", out});
    CHECK(bad.code == cli::kUsage);
    CHECK(bad.err.find("image_height") != std::string::npos);
    CHECK(run({"gen-map", "--config", cfg, "--approach", "onthefly", "--frac-bits", "40", "--out", out}).code ==
          cli::kUsage);
    CHECK(run({"gen-map", "--config", cfg, "--approach", "sampled", "--n", "9", "--out", out}).code == cli::kUsage);
    CHECK(run({"gen-map", "--config", cfg, "--approach", "reference", "--factor", "-1", "--out", out}).code ==
          cli::kUsage);
  }
  SUBCASE("runtime failures") {
    CHECK(run({"gen-map", "--config", cfg, "--approach", "reference", "--out", dir.file("no/such/dir/m.fmap")})
              .code == cli::kRuntime);
    const std::string degenerate = dir.file("degenerate.json");
    fixtures::write_text(degenerate, R"({"image_width": 64, "image_height": 48,
        "intrinsics": {"fx": 40, "fy": 40, "cx": 32, "cy": 23.5},
        "rotation": [0, 0, 1, 0, 1, 0, -1, 0, 0]})");
    const Outcome o = run({"gen-map", "--config", degenerate, "--approach", "reference", "--out", dir.file("d")});
    CHECK(o.code == cli::kRuntime);
    CHECK(o.err.find("pixel") != std::string::npos);
  }
}

TEST_CASE("cli: undistort") {
  fixtures::TempDir dir;
  const std::string cfg = base_config(dir);
  const std::string image = dir.file("in.ppm");
  write_pnm(image, fixtures::pattern(640, 480, 3));

  SUBCASE("identity map leaves the image unchanged") {
    const std::string small = dir.file("small.pgm");
    write_pnm(small, fixtures::pattern(64, 48, 1));
    REQUIRE(run({"gen-map", "--config", identity_config_file(dir), "--approach", "reference", "--out",
                 dir.file("id.fmap")})
                .code == cli::kOk);
    for (const char* mode : {"offline", "stream"}) {
      REQUIRE(run({"undistort", "--image", small, "--map", dir.file("id.fmap"), "--mode", mode, "--out",
                   dir.file("o.pgm")})
                  .code == cli::kOk);
      CHECK(fixtures::slurp(dir.file("o.pgm")) == fixtures::slurp(small));
    }
  }
  SUBCASE("offline and stream outputs are identical") {
    REQUIRE(run({"gen-map", "--config", cfg, "--approach", "sampled", "--n", "6", "--out", dir.file("m.smap")}).code ==
            cli::kOk);
    for (const std::vector<std::string>& source :
         {std::vector<std::string>{"--map", dir.file("m.smap")},
          std::vector<std::string>{"--config", cfg, "--approach", "onthefly", "--frac-bits", "14", "--factor", "4"},
          std::vector<std::string>{"--config", cfg, "--approach", "full-lut", "--factor", "2"}}) {
      std::vector<std::string> offline{"undistort", "--image", image, "--out", dir.file("off.ppm")};
      offline.insert(offline.end(), source.begin(), source.end());
      std::vector<std::string> stream{"undistort", "--image", image, "--out", dir.file("str.ppm"), "--mode", "stream"};
      stream.insert(stream.end(), source.begin(), source.end());
      REQUIRE(run(offline).code == cli::kOk);
      const Outcome s = run(stream);
      REQUIRE(s.code == cli::kOk);
      CHECK(s.out.find("lines") != std::string::npos);
      CHECK(s.out.find("read delay") != std::string::npos);
      CHECK(fixtures::slurp(dir.file("off.ppm")) == fixtures::slurp(dir.file("str.ppm")));
    }
  }
  SUBCASE("undersized buffer fails loudly") {
    const Outcome o = run({"undistort", "--image", image, "--config", cfg, "--approach", "reference", "--factor", "5",
                           "--mode", "stream", "--lines", "20", "--out", dir.file("o.ppm")});
    CHECK(o.code == cli::kRuntime);
    CHECK(o.err.find("needs row") != std::string::npos);
    CHECK(o.err.find("output pixel") != std::string::npos);
  }
  SUBCASE("argument errors") {
    const std::string out = dir.file("o.ppm");
    CHECK(run({"undistort", "--image", image, "--out", out}).code == cli::kUsage);
    REQUIRE(run({"gen-map", "--config", cfg, "--approach", "reference", "--out", dir.file("r.fmap")}).code == cli::kOk);
    CHECK(run({"undistort", "--image", image, "--map", dir.file("r.fmap"), "--config", cfg, "--approach", "reference",
               "--out", out})
              .code == cli::kUsage);
    CHECK(run({"undistort", "--image", image, "--map", dir.file("r.fmap"), "--lines", "30", "--out", out}).code ==
          cli::kUsage);
    CHECK(run({"undistort", "--image", image, "--map", dir.file("r.fmap"), "--mode", "stream", "--lines", "many",
               "--out", out})
              .code == cli::kUsage);
    CHECK(run({"undistort", "--image", image, "--map", dir.file("r.fmap"), "--mode", "batch", "--out", out}).code ==
          cli::kUsage);
    const std::string small = dir.file("small.pgm");
    write_pnm(small, fixtures::pattern(64, 48, 1));
    CHECK(run({"undistort", "--image", small, "--map", dir.file("r.fmap"), "--out", out}).code == cli::kUsage);
  }
}

TEST_CASE("cli: sweep") {
  fixtures::TempDir dir;
  SUBCASE("default grid") {
    const Outcome o = run({"sweep", "--out", dir.file("a.csv")});
    REQUIRE(o.code == cli::kOk);
    const std::string csv = fixtures::slurp(dir.file("a.csv"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);
    REQUIRE(run({"--threads", "1", "sweep", "--out", dir.file("b.csv")}).code == cli::kOk);
    CHECK(fixtures::slurp(dir.file("b.csv")) == csv);
  }
  SUBCASE("zero distortion") {
    REQUIRE(run({"sweep", "--config", base_config(dir), "--factors", "0", "--full-lut", "--out", dir.file("z.csv")})
                .code == cli::kOk);
    std::istringstream in(fixtures::slurp(dir.file("z.csv")));
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      std::vector<std::string> cols;
      std::stringstream ls(line);
      for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
      REQUIRE(cols.size() == 10);
      CHECK(cols[3] == "0");
      ++rows;
    }
    CHECK(rows == 7);
  }
  SUBCASE("heatmaps and error planes") {
    REQUIRE(run({"sweep", "--factors", "1", "--frac-bits", "", "--n", "6", "--heatmaps", dir.file("h"),
                 "--error-planes", dir.file("p"), "--heatmap-scale", "0.5", "--out", dir.file("c.csv")})
                .code == cli::kOk);
    const Image heat = read_pnm(dir.file("h/sampled_p6_f1.pgm"));
    CHECK(heat.width() == 640);
    CHECK(std::filesystem::file_size(dir.file("p/sampled_p6_f1.f32")) == 640u * 480u * 4u);
  }
  SUBCASE("invalid grids") {
    CHECK(run({"sweep", "--factors", "1,x", "--out", dir.file("c.csv")}).code == cli::kUsage);
    CHECK(run({"sweep", "--factors", "1", "--n", "2.5", "--out", dir.file("c.csv")}).code == cli::kUsage);
    CHECK(run({"sweep", "--factors", "1", "--frac-bits", "0", "--out", dir.file("c.csv")}).code == cli::kUsage);
    CHECK(run({"sweep", "--factors", "1", "--n", "9", "--out", dir.file("c.csv")}).code == cli::kUsage);
    CHECK(run({"sweep", "--factors", "1", "--heatmap-scale", "0", "--heatmaps", dir.file("h2"), "--out",
               dir.file("c.csv")})
              .code == cli::kUsage);
  }
}

TEST_CASE("cli: estimate and inspect") {
  fixtures::TempDir dir;
  const Outcome e = run({"estimate"});
  REQUIRE(e.code == cli::kOk);
  CHECK(e.out.find("onthefly") != std::string::npos);
  CHECK(e.out.find("14112") != std::string::npos);
  CHECK(e.out.find("19660800") != std::string::npos);
  CHECK(run({"estimate", "--n", "12"}).code == cli::kUsage);

  const std::string cfg = base_config(dir, 1.0);
  const Outcome i = run({"inspect", "--config", cfg, "--approach", "reference"});
  REQUIRE(i.code == cli::kOk);
  CHECK(i.out.find("17 lines, read delay 9 rows") != std::string::npos);
  REQUIRE(run({"gen-map", "--config", cfg, "--approach", "sampled", "--n", "5", "--out", dir.file("m.smap")}).code ==
          cli::kOk);
  const Outcome s = run({"inspect", "--map", dir.file("m.smap")});
  REQUIRE(s.code == cli::kOk);
  CHECK(s.out.find("336 samples") != std::string::npos);
  fixtures::write_text(dir.file("junk.map"), "nothing useful");
  CHECK(run({"inspect", "--map", dir.file("junk.map")}).code == cli::kUsage);
  CHECK(run({"inspect"}).code == cli::kUsage);
}
