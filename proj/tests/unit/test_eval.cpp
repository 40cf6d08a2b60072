#include "phonemv/corpus/manifest.hpp"
#include "phonemv/errors.hpp"
#include "phonemv/eval/discrimination.hpp"
#include "phonemv/eval/verification.hpp"
#include "oracles/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace phonemv;
using namespace phonemv::eval;

namespace {

std::vector<ScoredPair> pairs_of(std::initializer_list<std::pair<double, bool>> xs) {
  std::vector<ScoredPair> out;
  int i = 0;
  for (const auto& [d, same] : xs) {
    out.push_back({"a" + std::to_string(i), "b" + std::to_string(i), d, same});
    ++i;
  }
  return out;
}

std::vector<oracle::Pair> to_oracle(const std::vector<ScoredPair>& ps) {
  std::vector<oracle::Pair> out;
  for (const auto& p : ps) out.push_back({p.distance, p.same_label});
  return out;
}

// Distinct distances, at least one positive.
std::vector<ScoredPair> random_pairs(std::mt19937_64& rng) {
  const int n = std::uniform_int_distribution<int>(1, 50)(rng);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::set<double> used;
  std::vector<ScoredPair> out;
  for (int i = 0; i < n; ++i) {
    double d;
    do d = u(rng); while (!used.insert(d).second);
    out.push_back({"s" + std::to_string(i), "t" + std::to_string(i), d, (rng() & 1) != 0});
  }
  out[std::uniform_int_distribution<int>(0, n - 1)(rng)].same_label = true;
  return out;
}

corpus::SegmentSet labels(const std::vector<std::string>& ls) {
  std::string text;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    text += R"({"id":"s)" + std::to_string(i) + R"(","spoken":")" + ls[i] + R"(","canonical":")" +
            ls[i] + R"(","speaker":"x","split":"dev","views":{"acoustic":"f.phnf"}})" + "\n";
  }
  return corpus::parse_manifest(text, "/tmp");
}

VerificationOutcome outcome(bool correct, Decision d) {
  return {"s", "a", 0.0, d, correct};
}

}  // namespace

TEST_SUITE("average precision") {
  TEST_CASE("hand example") {
    const auto p = pairs_of({{0.1, true}, {0.2, false}, {0.3, true}, {0.4, false}});
    CHECK(std::abs(average_precision(p) - (1.0 + 2.0 / 3.0) / 2.0) < 1e-15);
    CHECK(average_precision(p) == doctest::Approx(0.8333).epsilon(1e-4));
  }

  TEST_CASE("perfect ranking and single pair") {
    CHECK(average_precision(pairs_of({{0.1, true}, {0.2, true}, {0.5, false}})) == 1.0);
    CHECK(average_precision(pairs_of({{0.7, true}})) == 1.0);
    CHECK_THROWS_AS(average_precision(pairs_of({{0.1, false}})), ValidationError);
  }

  TEST_CASE("ties break by segment ids") {
    std::vector<ScoredPair> p{{"b", "c", 0.5, false}, {"a", "z", 0.5, true}};
    const auto ranked = rank_pairs(p);
    CHECK(ranked[0].a == "a");
    CHECK(average_precision(p) == 1.0);
  }

  TEST_CASE("matches the threshold-sweep oracle exactly") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 500; ++i) {
      const auto p = random_pairs(rng);
      CHECK(average_precision(p) == oracle::threshold_sweep_ap(to_oracle(p)));
    }
  }

  TEST_CASE("strictly monotone transforms leave AP unchanged") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 200; ++i) {
      auto p = random_pairs(rng);
      const double ap = average_precision(p);
      for (auto& x : p) x.distance = std::exp(3.0 * x.distance) + 7.0;
      CHECK(average_precision(p) == ap);
    }
  }

  TEST_CASE("PR curve") {
    const auto c = pr_curve(pairs_of({{0.1, true}, {0.2, false}, {0.3, true}, {0.4, false}}));
    REQUIRE(c.size() == 4);
    CHECK(c[1].precision == 0.5);
    CHECK(c[2].recall == 1.0);
    CHECK(c[2].threshold == 0.3);
    const auto csv = pr_curve_csv(c);
    CHECK(csv.rfind("threshold,precision,recall\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  }
}

TEST_SUITE("discrimination pairs") {
  TEST_CASE("three segments give three pairs") {
    const auto set = labels({"a", "a", "b"});
    std::vector<Embedding> e{VectorXd::Unit(2, 0), VectorXd::Unit(2, 0), VectorXd::Unit(2, 1)};
    const auto p = discrimination_pairs(set, e, 3, 1);
    REQUIRE(p.size() == 3);
    CHECK(p[0].a == "s0");
    CHECK(p[0].b == "s1");
    CHECK(p[0].same_label);
    CHECK(p[1].distance == 1.0);
    CHECK_FALSE(p[2].same_label);
  }

  TEST_CASE("identical embeddings, sampling determinism and errors") {
    std::vector<std::string> ls;
    for (int i = 0; i < 40; ++i) ls.push_back(i % 3 ? "x" : "y");
    const auto set = labels(ls);
    std::vector<Embedding> same(40, VectorXd::Constant(3, 0.7));
    for (const auto& p : discrimination_pairs(set, same, 10000, 1)) CHECK(p.distance < 1e-12);

    const auto a = discrimination_pairs(set, same, 100, 5);
    const auto b = discrimination_pairs(set, same, 100, 5);
    CHECK(a.size() == 100);
    std::set<std::pair<std::string, std::string>> distinct;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].a == b[i].a);
      CHECK(a[i].b == b[i].b);
      CHECK(a[i].a != a[i].b);
      distinct.insert({a[i].a, a[i].b});
    }
    CHECK(distinct.size() == 100);
    CHECK_THROWS_AS(discrimination_pairs(labels({"a"}), std::vector<Embedding>{VectorXd::Ones(2)}, 10, 1),
                    ValidationError);
    std::map<std::string, Embedding> missing{{"s0", VectorXd::Ones(2)}};
    CHECK_THROWS_AS(discrimination_pairs(labels({"a", "b"}), missing, 10, 1), ResolutionError);
  }
}

TEST_SUITE("templates") {
  TEST_CASE("examples") {
    const auto one = build_templates({{"a", {VectorXd::Unit(2, 0)}}});
    CHECK(one[0].centroid == VectorXd::Unit(2, 0));
    CHECK(one[0].support == 1);
    const auto two = build_templates({{"a", {VectorXd::Unit(2, 0), VectorXd::Unit(2, 1)}}});
    CHECK(two[0].centroid == VectorXd::Constant(2, 0.5));
    CHECK_THROWS_AS(build_templates({{"a", {}}}), ValidationError);
  }

  TEST_CASE("input order does not matter") {
    std::mt19937_64 rng(43);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<Embedding> v;
    for (int i = 0; i < 25; ++i) {
      VectorXd x(5);
      for (int k = 0; k < 5; ++k) x(k) = n(rng);
      v.push_back(x);
    }
    const auto base = build_templates({{"p", v}});
    for (int t = 0; t < 10; ++t) {
      std::shuffle(v.begin(), v.end(), rng);
      CHECK((build_templates({{"p", v}})[0].centroid - base[0].centroid).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_SUITE("verification") {
  TEST_CASE("examples and boundary") {
    const References refs{{"a", VectorXd::Unit(2, 0)}};
    CHECK(verify_segment("s", VectorXd::Unit(2, 0), "a", true, refs).decision == Decision::kAccept);
    const auto o = verify_segment("s", VectorXd::Unit(2, 1), "a", false, refs);
    CHECK(o.distance == 1.0);
    CHECK(o.decision == Decision::kReject);
    CHECK(decide(0.4, 0.4) == Decision::kReject);
    CHECK(decide(0.39999, 0.4) == Decision::kAccept);
    CHECK_THROWS_AS(verify_segment("s", VectorXd::Unit(2, 0), "zz", true, refs), ResolutionError);
  }

  TEST_CASE("raising the threshold never flips accept to reject") {
    std::mt19937_64 rng(44);
    std::normal_distribution<double> n(0.0, 1.0);
    const References refs{{"a", VectorXd::Ones(4)}};
    for (int i = 0; i < 200; ++i) {
      VectorXd e(4);
      for (int k = 0; k < 4; ++k) e(k) = n(rng);
      bool accepted = false;
      for (int step = 0; step <= 200; ++step) {
        const auto d = verify_segment("s", e, "a", true, refs, step * 0.01).decision;
        if (accepted) CHECK(d == Decision::kAccept);
        accepted = d == Decision::kAccept;
      }
    }
  }

  TEST_CASE("strategy names") {
    CHECK(parse_strategy("centroid") == Strategy::kCentroid);
    CHECK(parse_strategy("crossview") == Strategy::kCrossView);
    CHECK_THROWS_AS(parse_strategy("nearest"), ValidationError);
  }
}

TEST_SUITE("metrics") {
  TEST_CASE("ten-segment hand example") {
    std::vector<VerificationOutcome> o;
    o.push_back(outcome(false, Decision::kAccept));
    for (int i = 0; i < 3; ++i) o.push_back(outcome(false, Decision::kReject));
    for (int i = 0; i < 2; ++i) o.push_back(outcome(true, Decision::kReject));
    for (int i = 0; i < 4; ++i) o.push_back(outcome(true, Decision::kAccept));
    const auto r = compute_metrics(o);
    CHECK(*r.frr == 0.25);
    CHECK(*r.far == doctest::Approx(0.3333).epsilon(1e-4));
    CHECK(r.da == doctest::Approx(0.70).epsilon(1e-15));
  }

  TEST_CASE("perfect and accept-all verifiers") {
    std::vector<VerificationOutcome> perfect{outcome(false, Decision::kReject), outcome(true, Decision::kAccept)};
    const auto p = compute_metrics(perfect);
    CHECK(*p.frr == 0.0);
    CHECK(*p.far == 0.0);
    CHECK(p.da == 1.0);
    std::vector<VerificationOutcome> all{outcome(false, Decision::kAccept), outcome(true, Decision::kAccept),
                                         outcome(true, Decision::kAccept)};
    const auto a = compute_metrics(all);
    CHECK(*a.frr == 1.0);
    CHECK(*a.far == 0.0);
    CHECK(a.da == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }

  TEST_CASE("undefined rates are null, empty input is an error") {
    const auto r = compute_metrics({outcome(true, Decision::kAccept)});
    CHECK_FALSE(r.frr.has_value());
    const auto j = metrics_json(r, 0.4, "centroid", "abc");
    CHECK(j.at("frr").is_null());
    CHECK(j.at("far") == 0.0);
    CHECK(j.at("checkpoint_sha256") == "abc");
    CHECK(j.at("counts").at("cor_accepted") == 1);
    CHECK_THROWS_AS(compute_metrics({}), ValidationError);
  }

  TEST_CASE("rational identities on random outcome sets") {
    std::mt19937_64 rng(45);
    for (int i = 0; i < 1000; ++i) {
      const int n = std::uniform_int_distribution<int>(1, 60)(rng);
      std::vector<VerificationOutcome> o;
      for (int k = 0; k < n; ++k) {
        o.push_back(outcome((rng() & 1) != 0, (rng() & 1) != 0 ? Decision::kAccept : Decision::kReject));
      }
      const auto r = compute_metrics(o);
      const auto& c = r.counts;
      const auto total = static_cast<std::int64_t>(c.total());
      const auto n_mis = static_cast<std::int64_t>(c.mispronounced());
      const auto n_cor = static_cast<std::int64_t>(c.correct());
      const auto da = oracle::Fraction::make(static_cast<std::int64_t>(c.mis_rejected + c.cor_accepted), total);
      CHECK(r.da == da.value());
      auto loss = oracle::Fraction::make(0, 1);
      if (n_mis > 0) {
        const auto frr = oracle::Fraction::make(static_cast<std::int64_t>(c.mis_accepted), n_mis);
        CHECK(*r.frr == frr.value());
        loss = loss + frr * oracle::Fraction::make(n_mis, 1);
      } else {
        CHECK_FALSE(r.frr.has_value());
      }
      if (n_cor > 0) {
        const auto far = oracle::Fraction::make(static_cast<std::int64_t>(c.cor_rejected), n_cor);
        CHECK(*r.far == far.value());
        loss = loss + far * oracle::Fraction::make(n_cor, 1);
      } else {
        CHECK_FALSE(r.far.has_value());
      }
      CHECK(da == oracle::Fraction::make(1, 1) - loss / oracle::Fraction::make(total, 1));
      CHECK(r.da >= 0.0);
      CHECK(r.da <= 1.0);
    }
  }

  TEST_CASE("outcomes CSV") {
    const auto csv = outcomes_csv({{"seg1", "a", 0.25, Decision::kAccept, true}});
    CHECK(csv.rfind("segment,canonical,distance,decision,truth_correct\n", 0) == 0);
    CHECK(csv.find("seg1,a,") != std::string::npos);
  }
}
