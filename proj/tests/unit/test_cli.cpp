#include "unit/test_support.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const test::TempDir& dir, const std::string& args) {
  const std::string out = dir.file("stdout.txt"), err = dir.file("stderr.txt");
  const std::string cmd = std::string("\"") + PHONEMV_TOOL_PATH + "\" " + args + " >\"" + out +
                          "\" 2>\"" + err + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, test::read_text(out), test::read_text(err)};
}

const char* kSmallSynth = R"({"num_classes": 3, "train_per_class": 6, "dev_per_class": 3,
  "test_per_class": 4, "bottleneck_dims": 6, "max_frames": 12})";

const char* kSmallRun = R"({"net": {"hidden": 4, "num_layers": 1, "fc_dims": [6, 4]},
  "pipeline": {"target_frames": 8, "pca_dims": 4},
  "schedule": {"max_epochs": 2, "ap_every": 1, "batch_size": 8},
  "optimizer": {"lr": 1.0}})";

struct Corpus {
  test::TempDir dir{"cli"};
  std::string data = dir.file("data");
  Corpus() {
    test::write_text(dir.file("synth.json"), kSmallSynth);
    test::write_text(dir.file("run.json"), kSmallRun);
    const auto r = run(dir, "corpus synth --config " + dir.file("synth.json") + " --seed 7 --out " + data);
    REQUIRE(r.code == 0);
  }
};

}  // namespace

TEST_SUITE("cli corpus") {
  TEST_CASE("synth, validate and stats") {
    Corpus c;
    CHECK(fs::exists(fs::path(c.data) / "manifest.jsonl"));
    CHECK(fs::exists(fs::path(c.data) / "run_manifest.json"));
    CHECK(run(c.dir, "corpus validate " + c.data).code == 0);
    const auto stats = run(c.dir, "corpus stats " + c.data);
    CHECK(stats.code == 0);
    CHECK_FALSE(stats.out.empty());
  }

  TEST_CASE("truncated feature file fails validation with its path") {
    Corpus c;
    const auto victim = fs::path(c.data) / "feats" / "train-000000.acoustic.phnf";
    REQUIRE(fs::exists(victim));
    fs::resize_file(victim, fs::file_size(victim) - 5);
    const auto r = run(c.dir, "corpus validate " + c.data);
    CHECK(r.code == 1);
    CHECK(r.err.find("train-000000.acoustic.phnf") != std::string::npos);
  }

  TEST_CASE("malformed manifest is a failure, not a crash") {
    test::TempDir dir("cli-bad");
    test::write_text(dir.file("data/manifest.jsonl"), "{broken\n");
    CHECK(run(dir, "corpus validate " + dir.file("data")).code == 1);
  }

  TEST_CASE("usage errors exit 2") {
    test::TempDir dir("cli-usage");
    CHECK(run(dir, "").code == 2);
    CHECK(run(dir, "frobnicate").code == 2);
    CHECK(run(dir, "corpus synth").code == 2);
    CHECK(run(dir, "gradcheck --tolerance abc").code == 2);
  }
}

TEST_SUITE("cli train and score") {
  TEST_CASE("single-view train, embed, eval and ap") {
    Corpus c;
    const std::string model = c.dir.file("model");
    const auto t = run(c.dir, "train --quiet --mode single --corpus " + c.data + " --config " +
                                  c.dir.file("run.json") + " --out " + model);
    REQUIRE(t.code == 0);
    for (const char* f : {"model.phnm", "model.json", "history.csv", "run_manifest.json"}) {
      CHECK(fs::exists(fs::path(model) / f));
    }
    const auto manifest = nlohmann::json::parse(test::read_text(model + "/run_manifest.json"));
    CHECK(manifest.at("config_sha256").get<std::string>().size() == 64);
    CHECK(manifest.at("corpus_sha256").get<std::string>().size() == 64);

    const std::string scored = c.dir.file("scored");
    const auto e = run(c.dir, "score embed --model " + model + " --corpus " + c.data +
                                  " --threshold 0.4 --strategy centroid --out " + scored);
    REQUIRE(e.code == 0);
    const auto metrics = nlohmann::json::parse(test::read_text(scored + "/metrics.json"));
    CHECK(metrics.at("threshold") == 0.4);
    CHECK(metrics.at("strategy") == "centroid");
    CHECK(metrics.at("counts").at("mis_accepted").get<int>() + metrics.at("counts").at("mis_rejected").get<int>() == 3);

    const std::string evaluated = c.dir.file("evaluated");
    const auto ev = run(c.dir, "score eval --outcomes " + scored + "/outcomes.csv --model " + model +
                                   " --pr-curve --out " + evaluated);
    CHECK(ev.code == 0);
    const auto again = nlohmann::json::parse(test::read_text(evaluated + "/metrics.json"));
    for (const char* key : {"frr", "far", "da", "counts", "checkpoint_sha256"}) {
      CHECK(again.at(key) == metrics.at(key));
    }
    CHECK(fs::exists(evaluated + "/pr_curve.csv"));

    const auto ap = run(c.dir, "score ap --model " + model + " --corpus " + c.data + " --split dev");
    CHECK(ap.code == 0);
    const double value = std::stod(ap.out);
    CHECK(value >= 0.0);
    CHECK(value <= 1.0);

    CHECK(run(c.dir, "score embed --model " + c.dir.file("nope") + " --corpus " + c.data +
                         " --out " + c.dir.file("x")).code == 1);
    CHECK_FALSE(fs::exists(c.dir.file("x")));
  }

  TEST_CASE("multi-view train writes f and g; crossview scoring works") {
    Corpus c;
    const std::string model = c.dir.file("mv");
    const auto t = run(c.dir, "train --quiet --mode multi --view attribute --objective both --corpus " +
                                  c.data + " --config " + c.dir.file("run.json") + " --out " + model);
    REQUIRE(t.code == 0);
    CHECK(fs::exists(model + "/f.phnm"));
    CHECK(fs::exists(model + "/g.phnm"));
    CHECK(run(c.dir, "score embed --model " + model + " --corpus " + c.data +
                         " --strategy crossview --out " + c.dir.file("s")).code == 0);
  }

  TEST_CASE("bad objective exits 2 and leaves no output") {
    Corpus c;
    const auto r = run(c.dir, "train --mode multi --objective obj7 --corpus " + c.data + " --out " +
                                  c.dir.file("m"));
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(c.dir.file("m")));
  }

  TEST_CASE("gop scoring") {
    Corpus c;
    const auto r = run(c.dir, "score gop --lattices " + c.data + " --threshold 0.1");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("id,canonical,", 0) == 0);
    CHECK(run(c.dir, "score gop --lattices " + c.data + " --out " + c.dir.file("g")).code == 0);
    CHECK(fs::exists(c.dir.file("g/gop.csv")));
    CHECK(fs::exists(c.dir.file("g/metrics.json")));
  }
}

TEST_SUITE("cli gradcheck") {
  TEST_CASE("default passes, tight tolerance fails, seed is deterministic") {
    test::TempDir dir("cli-gc");
    CHECK(run(dir, "gradcheck").code == 0);
    CHECK(run(dir, "gradcheck --tolerance 1e-12").code == 1);
    const auto a = run(dir, "gradcheck --seed 5");
    const auto b = run(dir, "gradcheck --seed 5");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}
