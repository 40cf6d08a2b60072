#include "phonemv/corpus/attributes.hpp"
#include "phonemv/corpus/feature_file.hpp"
#include "phonemv/corpus/manifest.hpp"
#include "phonemv/corpus/normalize.hpp"
#include "phonemv/corpus/pca.hpp"
#include "phonemv/corpus/pipeline.hpp"
#include "phonemv/corpus/synth.hpp"
#include "phonemv/errors.hpp"
#include "phonemv/util/binary_io.hpp"
#include "unit/test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

using namespace phonemv;
using namespace phonemv::corpus;

namespace {

std::string manifest_line(const std::string& id, const std::string& spoken,
                          const std::string& split = "train") {
  return R"({"id":")" + id + R"(","spoken":")" + spoken + R"(","canonical":")" + spoken +
         R"(","speaker":"s1","split":")" + split +
         R"(","views":{"acoustic":"feats/)" + id + R"(.phnf"}})" + "\n";
}

std::string phnf_header(std::uint32_t frames, std::uint32_t dims) {
  util::ByteWriter w;
  w.put_bytes("PHNF");
  w.put_u32(1);
  w.put_u32(frames);
  w.put_u32(dims);
  return w.bytes();
}

FeatureMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  FeatureMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

}  // namespace

TEST_SUITE("manifest") {
  TEST_CASE("three valid records load in order") {
    const auto set = parse_manifest(
        manifest_line("a", "b") + manifest_line("c", "d", "dev") + manifest_line("e", "b"),
        "/tmp");
    CHECK(set.size() == 3);
    CHECK(set.at(1).id == "c");
    CHECK(set.at(1).split == Split::kDev);
    CHECK(set.find("e") == std::optional<std::size_t>(2));
    CHECK_FALSE(set.find("zz").has_value());
  }

  TEST_CASE("empty manifest is an empty set") {
    CHECK(parse_manifest("", "/tmp").size() == 0);
  }

  TEST_CASE("duplicate id is rejected by name") {
    try {
      parse_manifest(manifest_line("dup", "a") + manifest_line("dup", "b"), "/tmp");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("dup") != std::string::npos);
    }
  }

  TEST_CASE("malformed record reports its line") {
    try {
      parse_manifest(manifest_line("a", "b") + "{not json\n", "/tmp");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_manifest(R"({"id":"x"})" "\n", "/tmp"), ParseError);
  }

  TEST_CASE("missing view file names the segment") {
    test::TempDir dir("manifest");
    test::write_text(dir.file("manifest.jsonl"), manifest_line("seg1", "a"));
    const auto set = load_manifest(dir.str());
    try {
      set.load_view(set.at(0), kAcousticView);
      FAIL("expected ResolutionError");
    } catch (const ResolutionError& e) {
      CHECK(e.segment_id() == "seg1");
    }
    CHECK_THROWS_AS(set.load_view(set.at(0), kBottleneckView), ResolutionError);
  }

  TEST_CASE("serialize then parse is the identity on bytes") {
    const std::string text = manifest_line("a", "b") + manifest_line("c", "d", "test");
    const auto set = parse_manifest(text, "/tmp");
    const auto again = serialize_manifest(set.segments());
    CHECK(serialize_manifest(parse_manifest(again, "/tmp").segments()) == again);
  }

  TEST_CASE("filter keeps one split in order") {
    const auto set = parse_manifest(manifest_line("a", "x") + manifest_line("b", "x", "dev") +
                                        manifest_line("c", "y"),
                                    "/tmp");
    const auto train = set.filter(Split::kTrain);
    REQUIRE(train.size() == 2);
    CHECK(train.at(0).id == "a");
    CHECK(train.at(1).id == "c");
  }
}

TEST_SUITE("feature file") {
  TEST_CASE("2x3 header and payload decode row-major") {
    util::ByteWriter w;
    w.put_bytes(phnf_header(2, 3));
    for (float v : {1.f, 2.f, 3.f, 4.f, 5.f, 6.f}) w.put_f32(v);
    const auto m = decode_feature_matrix(w.bytes());
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 3);
    CHECK(m(0, 2) == 3.0);
    CHECK(m(1, 0) == 4.0);
  }

  TEST_CASE("short payload is a truncation error") {
    util::ByteWriter w;
    w.put_bytes(phnf_header(2, 2));
    for (float v : {1.f, 2.f, 3.f}) w.put_f32(v);
    CHECK_THROWS_AS(decode_feature_matrix(w.bytes()), TruncatedError);
    CHECK_THROWS_AS(decode_feature_matrix(std::string("PHNF\x01")), TruncatedError);
  }

  TEST_CASE("NaN payload is a validation error") {
    util::ByteWriter w;
    w.put_bytes(phnf_header(1, 2));
    w.put_f32(1.f);
    w.put_f32(std::numeric_limits<float>::quiet_NaN());
    CHECK_THROWS_AS(decode_feature_matrix(w.bytes()), ValidationError);
  }

  TEST_CASE("bad magic, version and trailing bytes are format errors") {
    CHECK_THROWS_AS(decode_feature_matrix(std::string("XXXX") + std::string(12, '\0')),
                    FormatError);
    util::ByteWriter w;
    w.put_bytes("PHNF");
    w.put_u32(2);
    w.put_u32(1);
    w.put_u32(1);
    w.put_f32(0.f);
    CHECK_THROWS_AS(decode_feature_matrix(w.bytes()), FormatError);
    util::ByteWriter t;
    t.put_bytes(phnf_header(1, 1));
    t.put_f32(0.f);
    t.put_bytes("x");
    CHECK_THROWS_AS(decode_feature_matrix(t.bytes()), FormatError);
  }

  TEST_CASE("write -> read -> write is byte identical") {
    test::TempDir dir("phnf");
    std::mt19937_64 rng(3);
    const FeatureMatrix m = random_matrix(rng, 7, 5).cast<float>().cast<double>();
    write_feature_matrix(dir.file("a.phnf"), m);
    const auto back = read_feature_matrix(dir.file("a.phnf"));
    CHECK(back == m);
    write_feature_matrix(dir.file("b.phnf"), back);
    CHECK(test::read_text(dir.file("a.phnf")) == test::read_text(dir.file("b.phnf")));
  }

  TEST_CASE("CSV import") {
    test::TempDir dir("csv");
    test::write_text(dir.file("f.csv"), "# header\n1,2\n\n3.5,-4\n");
    const auto m = read_feature_csv(dir.file("f.csv"));
    REQUIRE(m.rows() == 2);
    CHECK(m(1, 0) == 3.5);
    CHECK(m(1, 1) == -4.0);
    test::write_text(dir.file("ragged.csv"), "1,2\n3\n");
    CHECK_THROWS_AS(read_feature_csv(dir.file("ragged.csv")), ParseError);
  }
}

TEST_SUITE("cmvn") {
  TEST_CASE("two frames [0,0] and [2,2]") {
    FeatureMatrix m(2, 2);
    m << 0, 0, 2, 2;
    const std::vector<FeatureMatrix> v{m};
    const auto s = fit_cmvn(std::span<const FeatureMatrix>(v));
    CHECK(s.mean(0) == 1.0);
    CHECK(s.mean(1) == 1.0);
    CHECK(s.stddev(0) == 1.0);
    CHECK(s.stddev(1) == 1.0);
    CHECK(s.count == 2);
  }

  TEST_CASE("constant dims get the floor") {
    FeatureMatrix one(1, 1);
    one << 5;
    const std::vector<FeatureMatrix> a{one};
    const auto s = fit_cmvn(std::span<const FeatureMatrix>(a));
    CHECK(s.mean(0) == 5.0);
    CHECK(s.stddev(0) == kStddevFloor);
    const std::vector<FeatureMatrix> z{FeatureMatrix::Zero(4, 3)};
    const auto sz = fit_cmvn(std::span<const FeatureMatrix>(z));
    CHECK(sz.mean.isZero(0.0));
    CHECK((sz.stddev.array() == kStddevFloor).all());
  }

  TEST_CASE("apply examples") {
    CmvnStats s{VectorXd::Ones(2), VectorXd::Ones(2), 1};
    FeatureMatrix in(1, 2);
    in << 1, 1;
    CHECK(apply_cmvn(in, s).isZero(0.0));
    CmvnStats s1{VectorXd::Constant(1, 1.0), VectorXd::Constant(1, 2.0), 1};
    FeatureMatrix x(1, 1);
    x << 3;
    CHECK(apply_cmvn(x, s1)(0, 0) == 1.0);
  }

  TEST_CASE("own stats standardize the training frames; inverse recovers input") {
    std::mt19937_64 rng(11);
    std::vector<FeatureMatrix> v{random_matrix(rng, 20, 4, 3.0), random_matrix(rng, 13, 4, 3.0)};
    const auto s = fit_cmvn(std::span<const FeatureMatrix>(v));
    VectorXd sum = VectorXd::Zero(4), sq = VectorXd::Zero(4);
    double n = 0;
    for (const auto& m : v) {
      const auto z = apply_cmvn(m, s);
      sum += z.colwise().sum().transpose();
      sq += z.array().square().colwise().sum().matrix().transpose();
      n += static_cast<double>(z.rows());
      CHECK((invert_cmvn(z, s) - m).cwiseAbs().maxCoeff() < 1e-9);
    }
    const VectorXd mean = sum / n;
    const VectorXd var = sq / n - mean.cwiseAbs2();
    CHECK(mean.cwiseAbs().maxCoeff() < 1e-9);
    CHECK((var.array().sqrt() - 1.0).abs().maxCoeff() < 1e-9);
  }

  TEST_CASE("mismatched dims are rejected") {
    std::vector<FeatureMatrix> v{FeatureMatrix::Zero(2, 2), FeatureMatrix::Zero(2, 3)};
    CHECK_THROWS_AS(fit_cmvn(std::span<const FeatureMatrix>(v)), ValidationError);
  }
}

TEST_SUITE("pad_or_truncate") {
  TEST_CASE("target length is identity") {
    std::mt19937_64 rng(1);
    const auto m = random_matrix(rng, 58, 13);
    CHECK(pad_or_truncate(m) == m);
  }

  TEST_CASE("short input is zero padded at the end") {
    std::mt19937_64 rng(2);
    const auto m = random_matrix(rng, 10, 13);
    const auto p = pad_or_truncate(m);
    REQUIRE(p.rows() == 58);
    CHECK(p.topRows(10) == m);
    CHECK(p.bottomRows(48).isZero(0.0));
  }

  TEST_CASE("long input keeps the centered window") {
    std::mt19937_64 rng(3);
    const auto m = random_matrix(rng, 60, 13);
    const auto p = pad_or_truncate(m);
    REQUIRE(p.rows() == 58);
    CHECK(p == FeatureMatrix(m.middleRows(1, 58)));
    const auto odd = random_matrix(rng, 63, 2);
    CHECK(pad_or_truncate(odd, 58) == FeatureMatrix(odd.middleRows(2, 58)));
  }

  TEST_CASE("idempotent") {
    std::mt19937_64 rng(4);
    for (int frames : {1, 30, 58, 90}) {
      const auto once = pad_or_truncate(random_matrix(rng, frames, 3));
      CHECK(pad_or_truncate(once) == once);
    }
  }
}

TEST_SUITE("attributes") {
  const auto& inv = default_inventory();

  TEST_CASE("default inventory has 31 attributes and the documented splits") {
    CHECK(inv.attributes().size() == 31);
    CHECK(inv.split_map().at("iang") == std::vector<PhoneId>{"i", "a", "ng"});
    CHECK(inv.split_map().at("ai") == std::vector<PhoneId>{"a", "i"});
    CHECK(parse_inventory(inv.to_json()).to_json() == inv.to_json());
  }

  TEST_CASE("iang fills three rows") {
    const auto p = encode_attribute_pattern("iang", inv);
    REQUIRE(p.rows() == 3);
    REQUIRE(p.cols() == 31);
    CHECK(p.row(0).transpose() == inv.vector_of("i"));
    CHECK(p.row(1).transpose() == inv.vector_of("a"));
    CHECK(p.row(2).transpose() == inv.vector_of("ng"));
  }

  TEST_CASE("b fills row 0, ai fills two rows") {
    const auto b = encode_attribute_pattern("b", inv);
    CHECK(b.row(0).transpose() == inv.vector_of("b"));
    CHECK(b.bottomRows(2).isZero(0.0));
    const auto ai = encode_attribute_pattern("ai", inv);
    CHECK(ai.row(0).transpose() == inv.vector_of("a"));
    CHECK(ai.row(1).transpose() == inv.vector_of("i"));
    CHECK(ai.row(2).isZero(0.0));
  }

  TEST_CASE("every phone has 1-3 nonzero rows matching inventory vectors") {
    for (const auto& phone : inv.all_phones()) {
      const auto p = encode_attribute_pattern(phone, inv);
      int nonzero = 0;
      for (int r = 0; r < 3; ++r) {
        if (p.row(r).isZero(0.0)) continue;
        ++nonzero;
        bool matches = false;
        for (const auto& [q, v] : inv.phone_map()) {
          if (p.row(r).transpose() == v) matches = true;
        }
        CHECK(matches);
      }
      CHECK(nonzero >= 1);
      CHECK(nonzero <= 3);
    }
  }

  TEST_CASE("unknown phone and malformed inventories are rejected") {
    CHECK_THROWS_AS(encode_attribute_pattern("nope", inv), ValidationError);
    std::vector<std::string> attrs;
    for (int i = 0; i < 30; ++i) attrs.push_back("a" + std::to_string(i));
    CHECK_THROWS_AS(AttributeInventory(attrs, {{"p", {"a0"}}}, {}), ValidationError);
    attrs.push_back("a30");
    CHECK_THROWS_AS(AttributeInventory(attrs, {{"p", {}}}, {}), ValidationError);
    CHECK_THROWS_AS(AttributeInventory(attrs, {{"p", {"a0"}}}, {{"pp", {"p"}}}),
                    ValidationError);
    CHECK_NOTHROW(AttributeInventory(attrs, {{"p", {"a0"}}, {"q", {"a1"}}}, {{"pq", {"p", "q"}}}));
  }
}

TEST_SUITE("pca") {
  TEST_CASE("points on the x axis project onto [1, 0]") {
    RowMatrix<double> m(4, 2);
    m << -2, 0, -1, 0, 1, 0, 3, 0;
    const std::vector<RowMatrix<double>> v{m};
    const auto model = fit_pca<double>(std::span<const RowMatrix<double>>(v), 1);
    CHECK(model.projection(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(model.projection(1, 0)) < 1e-12);
  }

  TEST_CASE("kept variance equals the top eigenvalues of a full decomposition") {
    std::mt19937_64 rng(5);
    RowMatrix<double> m = random_matrix(rng, 400, 6);
    m.col(0) *= 3.0;
    m.col(3) *= 2.0;
    const std::vector<RowMatrix<double>> v{m};
    const auto model = fit_pca<double>(std::span<const RowMatrix<double>>(v), 3);
    // Oracle: covariance and its eigenvalues, sorted descending.
    const RowMatrix<double> c = m.rowwise() - m.colwise().mean();
    const MatrixXd cov = c.transpose() * c / static_cast<double>(m.rows());
    Eigen::EigenSolver<MatrixXd> es(cov);
    std::vector<double> eig;
    for (int i = 0; i < 6; ++i) eig.push_back(es.eigenvalues()(i).real());
    std::sort(eig.rbegin(), eig.rend());
    const RowMatrix<double> proj = apply_pca(m, model);
    const RowMatrix<double> pc = proj.rowwise() - proj.colwise().mean();
    for (int k = 0; k < 3; ++k) {
      const double var = pc.col(k).squaredNorm() / static_cast<double>(m.rows());
      CHECK(var == doctest::Approx(eig[k]).epsilon(1e-9));
      CHECK(model.variances(k) == doctest::Approx(eig[k]).epsilon(1e-9));
      if (k > 0) CHECK(model.variances(k) <= model.variances(k - 1));
    }
    const MatrixXd ptp = model.projection.transpose() * model.projection;
    CHECK((ptp - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-6);
  }

  TEST_CASE("full rank is lossless") {
    std::mt19937_64 rng(6);
    const RowMatrix<double> m = random_matrix(rng, 50, 5);
    const std::vector<RowMatrix<double>> v{m};
    const auto model = fit_pca<double>(std::span<const RowMatrix<double>>(v), 5);
    const MatrixXd ptp = model.projection.transpose() * model.projection;
    CHECK((ptp - MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((reconstruct_pca(apply_pca(m, model), model) - m).cwiseAbs().maxCoeff() < 1e-8);
  }

  TEST_CASE("apply examples") {
    std::mt19937_64 rng(7);
    const RowMatrix<double> m = random_matrix(rng, 30, 4);
    const std::vector<RowMatrix<double>> v{m};
    const auto model = fit_pca<double>(std::span<const RowMatrix<double>>(v), 2);
    RowMatrix<double> frame = (model.mean + model.projection.col(0)).transpose();
    const auto out = apply_pca(frame, model);
    CHECK(out(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(out(0, 1)) < 1e-12);

    PcaModel<double> zero{VectorXd::Zero(4), model.projection, model.variances};
    CHECK(apply_pca(RowMatrix<double>(RowMatrix<double>::Zero(3, 4)), zero).isZero(0.0));
  }

  TEST_CASE("850-dim bottleneck frames reduce to 40") {
    std::mt19937_64 rng(8);
    const RowMatrix<double> train = random_matrix(rng, 120, 850);
    const std::vector<RowMatrix<double>> v{train};
    const auto model = fit_pca<double>(std::span<const RowMatrix<double>>(v), 40);
    const auto out = apply_pca(RowMatrix<double>(random_matrix(rng, 5, 850)), model);
    CHECK(out.rows() == 5);
    CHECK(out.cols() == 40);
  }

  TEST_CASE("float instantiation") {
    std::mt19937_64 rng(9);
    const RowMatrix<float> m = random_matrix(rng, 40, 3).cast<float>();
    const std::vector<RowMatrix<float>> v{m};
    const auto model = fit_pca<float>(std::span<const RowMatrix<float>>(v), 2);
    CHECK(model.projection.cols() == 2);
  }

  TEST_CASE("bad out_dims or too few frames") {
    const std::vector<RowMatrix<double>> v{RowMatrix<double>::Ones(3, 4)};
    CHECK_THROWS_AS(fit_pca<double>(std::span<const RowMatrix<double>>(v), 0), ValidationError);
    CHECK_THROWS_AS(fit_pca<double>(std::span<const RowMatrix<double>>(v), 5), ValidationError);
    CHECK_THROWS_AS(fit_pca<double>(std::span<const RowMatrix<double>>(v), 3), ValidationError);
  }
}

TEST_SUITE("synth") {
  SynthConfig small() {
    SynthConfig c;
    c.train_per_class = 20;
    c.dev_per_class = 4;
    c.test_per_class = 20;
    c.bottleneck_dims = 8;
    return c;
  }

  TEST_CASE("counts and exact mispronunciation quota") {
    test::TempDir dir("synth");
    const auto summary = synth_corpus(small(), 5, dir.str());
    CHECK(summary.train == 100);
    CHECK(summary.test == 100);
    CHECK(summary.mispronounced == 25);
    const auto set = load_manifest(dir.str());
    CHECK(set.filter(Split::kTrain).size() == 100);
    std::size_t mis = 0;
    for (const auto& s : set.filter(Split::kTest).segments()) mis += s.correct() ? 0 : 1;
    CHECK(mis == 25);
    for (const auto& s : set.filter(Split::kTrain).segments()) CHECK(s.correct());
  }

  TEST_CASE("same seed gives byte-identical corpora") {
    test::TempDir a("synth-a"), b("synth-b");
    synth_corpus(small(), 9, a.str());
    synth_corpus(small(), 9, b.str());
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(a.str())) {
      if (!entry.is_regular_file()) continue;
      const auto rel = std::filesystem::relative(entry.path(), a.str());
      CHECK(test::read_text(entry.path().string()) ==
            test::read_text((std::filesystem::path(b.str()) / rel).string()));
      ++files;
    }
    CHECK(files > 100);
  }

  TEST_CASE("config JSON round trip and validation") {
    const auto c = small();
    CHECK(synth_config_to_json(parse_synth_config(synth_config_to_json(c))) ==
          synth_config_to_json(c));
    test::TempDir dir("synth-bad");
    CHECK_THROWS_AS(synth_corpus(parse_synth_config(R"({"num_classes": 1})"), 1, dir.str()),
                    ValidationError);
    CHECK_THROWS_AS(synth_corpus(parse_synth_config(R"({"mispronunciation_rate": 2})"), 1, dir.str()),
                    ValidationError);
    CHECK_THROWS_AS(parse_synth_config(R"({"num_classes": "five"})"), ValidationError);
  }
}

TEST_SUITE("pipeline") {
  TEST_CASE("fitted pipeline standardizes, pads and survives JSON") {
    test::TempDir dir("pipe");
    SynthConfig c;
    c.train_per_class = 6;
    c.dev_per_class = 2;
    c.test_per_class = 2;
    c.bottleneck_dims = 12;
    synth_corpus(c, 4, dir.str());
    const auto train = load_manifest(dir.str()).filter(Split::kTrain);
    PipelineConfig pc{20, 5};
    const auto bn = FeaturePipeline::fit(train, kBottleneckView, pc);
    CHECK(bn.output_dims() == 5);
    const auto raw = train.load_view(train.at(0), kBottleneckView);
    const auto out = bn.apply(raw);
    CHECK(out.rows() == 20);
    CHECK(out.cols() == 5);
    const auto back = FeaturePipeline::from_json(bn.to_json());
    CHECK(back.apply(raw) == out);
    CHECK(back.to_json() == bn.to_json());

    const auto attr = FeaturePipeline::fit(train, kAttributeView, pc);
    const auto pattern = train.load_view(train.at(0), kAttributeView);
    CHECK(attr.apply(pattern) == pattern);
    CHECK(attr.output_dims() == 31);
    CHECK_THROWS_AS(FeaturePipeline::fit(train, "spectrogram", pc), ValidationError);
  }
}
