#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "srf/decision.hpp"
#include "srf/metrics.hpp"
#include "support/corpus_gen.hpp"
#include "support/reference_metrics.hpp"

using namespace srf;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

Query make_query(const std::string& id, std::vector<std::string> terms) {
    Query q;
    q.query_id = id;
    q.terms = std::move(terms);
    return q;
}

RankedList list_of(const std::string& query_id, const std::vector<std::string>& docs) {
    RankedList list;
    list.query_id = query_id;
    list.k = static_cast<std::int32_t>(docs.size());
    double score = static_cast<double>(docs.size());
    for (const auto& d : docs) list.entries.push_back(ScoredDoc{d, score--});
    return list;
}

Qrels qrels_of(const std::string& query_id,
               const std::vector<std::pair<std::string, int>>& judged) {
    Qrels qrels;
    auto& docs = qrels.grades[query_id];
    for (const auto& [d, g] : judged) docs.emplace(d, g);
    return qrels;
}

}  // namespace

TEST_CASE("label_query applies the strict improvement rule") {
    const auto qrels = qrels_of("q", {{"d1", 1}, {"d3", 1}});
    const auto pre = list_of("q", {"d1", "d2", "d3"});

    SUBCASE("strictly better post list labels 1") {
        const auto post = list_of("q", {"d1", "d3", "d2"});
        const auto label = label_query("q", pre, post, qrels);
        CHECK(label.y == 1);
        CHECK(label.ap_pre == doctest::Approx(0.8333).epsilon(1e-4));
        CHECK(label.ap_post == doctest::Approx(1.0));
    }
    SUBCASE("equal AP labels 0") {
        const auto label = label_query("q", pre, pre, qrels);
        CHECK(label.y == 0);
        CHECK(label.ap_pre == label.ap_post);
    }
    SUBCASE("query absent from qrels is rejected") {
        const auto other = qrels_of("different", {{"d1", 1}});
        CHECK_THROWS_WITH_AS(label_query("q", pre, pre, other), doctest::Contains("'q'"),
                             std::invalid_argument);
    }
}

TEST_CASE("label_query matches an independent AP comparison on random instances") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 100; ++trial) {
        const auto qrels = testsupport::random_qrels(rng, {"q"}, 40, 0.2, 1);
        const auto pre = testsupport::random_ranked_list(rng, "q", 40, 25);
        const auto post = testsupport::random_ranked_list(rng, "q", 40, 25);
        const auto label = label_query("q", pre, post, qrels);

        std::set<std::string> relevant;
        for (const auto& [d, g] : qrels.grades.at("q")) {
            if (g >= 1) relevant.insert(d);
        }
        auto ranked = [](const RankedList& list) {
            std::vector<std::string> docs;
            for (const auto& e : list.entries) docs.push_back(e.doc_id);
            return docs;
        };
        const double ref_pre =
            testsupport::reference_average_precision(ranked(pre), relevant, 1000);
        const double ref_post =
            testsupport::reference_average_precision(ranked(post), relevant, 1000);
        CHECK(label.y == (ref_post > ref_pre ? 1 : 0));
    }
}

TEST_CASE("clarity worked examples") {
    SUBCASE("mixture equal to the collection model gives zero") {
        const auto index = build_index({{"d1", "a b"}, {"d2", "a b"}});
        CHECK(clarity(index, list_of("q", {"d1", "d2"}), 2) == doctest::Approx(0.0));
    }
    SUBCASE("single skewed document against a balanced collection") {
        const auto index = build_index({{"d1", "a"}, {"d2", "b"}});
        CHECK(clarity(index, list_of("q", {"d1"}), 1) ==
              doctest::Approx(std::log(2.0)).epsilon(1e-12));
    }
    SUBCASE("clarity is never negative") {
        std::mt19937_64 rng(71);
        for (int trial = 0; trial < 20; ++trial) {
            const auto corpus = testsupport::random_corpus(rng, 30, 10, 1, 20);
            const auto index = build_index(corpus.docs);
            const auto query = testsupport::random_query(rng, "q", 10, 3);
            const auto list = search_bm25(index, query, 10);
            if (list.entries.empty()) continue;
            CHECK(clarity(index, list, 5) >= 0.0);
        }
    }
    SUBCASE("empty list is rejected") {
        const auto index = build_index({{"d1", "a"}});
        RankedList empty;
        empty.query_id = "q";
        CHECK_THROWS_AS(clarity(index, empty, 5), std::invalid_argument);
    }
}

TEST_CASE("normalize_scores maps to the unit interval") {
    CHECK(normalize_scores({{"q1", 2.0}, {"q2", 4.0}, {"q3", 6.0}}) ==
          std::map<std::string, double>{{"q1", 0.0}, {"q2", 0.5}, {"q3", 1.0}});
    CHECK(normalize_scores({{"q1", 3.0}, {"q2", 3.0}}) ==
          std::map<std::string, double>{{"q1", 0.5}, {"q2", 0.5}});
    CHECK(normalize_scores({{"q1", 7.0}}) == std::map<std::string, double>{{"q1", 0.5}});
    CHECK_THROWS_AS(normalize_scores({}), std::invalid_argument);
}

TEST_CASE("decide_qpp_srf thresholds with strict inequality") {
    CHECK_FALSE(decide_qpp_srf("q", 0.9, 0.5).apply_prf);
    CHECK(decide_qpp_srf("q", 0.1, 0.5).apply_prf);
    CHECK_FALSE(decide_qpp_srf("q", 0.5, 0.5).apply_prf);  // boundary: strict <
    CHECK(decide_qpp_srf("q", 0.1, 0.5).theta == doctest::Approx(0.9));
    CHECK(decide_qpp_srf("q", 0.3, 0.5).method == "qpp-srf");
    CHECK_THROWS_AS(decide_qpp_srf("q", 1.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(decide_qpp_srf("q", 0.5, -0.1), std::invalid_argument);
}

TEST_CASE("td2f divergence properties") {
    std::mt19937_64 rng(73);
    const auto corpus = testsupport::random_corpus(rng, 40, 12, 2, 25);
    const auto index = build_index(corpus.docs);

    SUBCASE("identical lists give exactly zero") {
        const auto list = list_of("q", {"d0", "d1", "d2"});
        CHECK(td2f_divergence(index, list, list) == 0.0);
    }
    SUBCASE("swapping the lists negates the value") {
        for (int trial = 0; trial < 30; ++trial) {
            const auto a = testsupport::random_ranked_list(rng, "q", 40, 8);
            const auto b = testsupport::random_ranked_list(rng, "q", 40, 8);
            const double ab = td2f_divergence(index, a, b);
            const double ba = td2f_divergence(index, b, a);
            CHECK(ab == doctest::Approx(-ba).epsilon(1e-12));
        }
    }
    SUBCASE("hand-evaluated two-term case") {
        // mixtures {a:3/4, b:1/4} vs {a:1/2, b:1/2} over V = {a, b}:
        // theta = (1/2)(ln(0.75/0.5) + ln(0.25/0.5)) = (1/2) ln(3/4)
        const auto small = build_index({{"p", "a a a b"}, {"u", "a b"}});
        const double got = td2f_divergence(small, list_of("q", {"p"}), list_of("q", {"u"}));
        CHECK(got == doctest::Approx(0.5 * std::log(0.75)).epsilon(1e-4));
    }
}

TEST_CASE("calibrate_td2f_threshold picks the 95% order statistic") {
    std::vector<double> scores;
    for (int i = 1; i <= 20; ++i) scores.push_back(i);
    CHECK(calibrate_td2f_threshold(scores) == 19.0);

    std::vector<double> constant(25, 3.5);
    CHECK(calibrate_td2f_threshold(constant) == 3.5);

    scores.clear();
    for (int i = 1; i <= 100; ++i) scores.push_back(i);
    CHECK(calibrate_td2f_threshold(scores) == 95.0);

    CHECK_THROWS_AS(calibrate_td2f_threshold({1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("calibrated threshold covers 95% and is minimal") {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> scores;
        const int n = 20 + static_cast<int>(rng() % 200);
        for (int i = 0; i < n; ++i) scores.push_back(dist(rng));
        const double tau = calibrate_td2f_threshold(scores);
        int covered = 0, strictly_below = 0;
        for (const double s : scores) {
            if (s <= tau) ++covered;
            if (s < tau) ++strictly_below;
        }
        CHECK(covered * 20 >= n * 19);  // >= 95%
        // minimality: dropping tau itself from the candidates breaks coverage
        CHECK(strictly_below * 20 < n * 19);
    }
}

TEST_CASE("decide_td2f applies feedback at or below the threshold") {
    CHECK(decide_td2f("q", 0.1, 0.5).apply_prf);
    CHECK(decide_td2f("q", 0.5, 0.5).apply_prf);   // boundary: <=
    CHECK_FALSE(decide_td2f("q", 0.7, 0.5).apply_prf);
    CHECK(decide_td2f("q", 0.7, 0.5).theta == 0.0);
    CHECK(decide_td2f("q", 0.1, 0.5).theta == 1.0);
}

TEST_CASE("extract_lr_features degenerate cases") {
    const auto index = build_index({{"d1", "a b"}, {"d2", "a b"}, {"d3", "c d"}});

    SUBCASE("identical feedback documents zero the JS feature") {
        ExpandedQuery expanded;
        expanded.query_id = "q";
        expanded.term_weights = {{"a", 0.5}, {"b", 0.5}};
        expanded.fb_docs = 2;
        const auto f = extract_lr_features(index, make_query("q", {"a"}),
                                           list_of("q", {"d1", "d2"}), expanded,
                                           list_of("q", {"d1", "d2"}));
        CHECK(f.js_feedback_docs == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("expansion equal to the query model zeroes the KL feature") {
        ExpandedQuery expanded;
        expanded.query_id = "q";
        expanded.term_weights = {{"a", 0.5}, {"b", 0.5}};
        expanded.fb_docs = 1;
        const auto f = extract_lr_features(index, make_query("q", {"a", "b"}),
                                           list_of("q", {"d1"}), expanded, list_of("q", {"d1"}));
        CHECK(std::abs(f.kl_query_vs_rm) < 1e-9);
    }
    SUBCASE("query model equal to the collection model zeroes the clarity feature") {
        const auto balanced = build_index({{"d1", "a b"}, {"d2", "b a"}});
        ExpandedQuery expanded;
        expanded.query_id = "q";
        expanded.term_weights = {{"a", 0.5}, {"b", 0.5}};
        expanded.fb_docs = 1;
        const auto f = extract_lr_features(balanced, make_query("q", {"a", "b"}),
                                           list_of("q", {"d1"}), expanded, list_of("q", {"d1"}));
        CHECK(std::abs(f.clarity_query_lm) < 1e-9);
    }
    SUBCASE("empty inputs are rejected") {
        ExpandedQuery expanded;
        expanded.term_weights = {{"a", 1.0}};
        RankedList empty;
        empty.query_id = "q";
        CHECK_THROWS_AS(extract_lr_features(index, make_query("q", {"a"}), empty, expanded,
                                            list_of("q", {"d1"})),
                        std::invalid_argument);
        CHECK_THROWS_AS(extract_lr_features(index, make_query("q", {"a"}), list_of("q", {"d1"}),
                                            ExpandedQuery{}, list_of("q", {"d1"})),
                        std::invalid_argument);
    }
}

TEST_CASE("lr feature invariants on random pipelines") {
    std::mt19937_64 rng(83);
    const double ln2 = std::log(2.0);
    for (int trial = 0; trial < 15; ++trial) {
        const auto corpus = testsupport::random_corpus(rng, 50, 15, 2, 25);
        const auto index = build_index(corpus.docs);
        const auto query = testsupport::random_query(rng, "q", 15, 3);
        const auto initial = search_bm25(index, query, 10);
        if (initial.entries.size() < 2) continue;
        FeedbackParams params;
        params.fb_docs = 4;
        params.fb_terms = 8;
        const auto expanded = expand_query(index, query, initial, params);
        const auto post = search_expanded(index, expanded, 10, ScoringConfig{});
        const auto f = extract_lr_features(index, query, initial, expanded, post);
        CHECK(f.clarity_topdocs >= 0.0);
        CHECK(f.clarity_query_lm >= 0.0);
        CHECK(f.kl_query_vs_rm >= 0.0);
        CHECK(f.js_feedback_docs >= 0.0);
        CHECK(f.js_feedback_docs <= ln2 + 1e-12);
    }
}

TEST_CASE("train_logistic learns the separable synthetic task") {
    // y = 1 iff feature one exceeds 0.5, with a 0.2 margin around it
    std::mt19937_64 rng(89);
    std::uniform_real_distribution<double> low(0.0, 0.4), high(0.6, 1.0), noise(0.0, 1.0);
    std::vector<std::pair<FeatureVector, std::int32_t>> examples;
    for (int i = 0; i < 200; ++i) {
        const bool positive = i % 2 == 0;
        FeatureVector f;
        f.clarity_topdocs = positive ? high(rng) : low(rng);
        f.kl_query_vs_rm = noise(rng);
        f.js_feedback_docs = noise(rng);
        f.clarity_query_lm = noise(rng);
        examples.emplace_back(f, positive ? 1 : 0);
    }
    const auto model = train_logistic(examples);
    int correct = 0;
    for (const auto& [f, y] : examples) {
        const auto outcome = decide_lr(model, "q", f);
        if (outcome.apply_prf == (y == 1)) ++correct;
    }
    CHECK(correct >= 190);  // >= 0.95 training accuracy
}

TEST_CASE("zero-initialized model predicts one half everywhere") {
    LogisticModel zero;
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        FeatureVector f{dist(rng), dist(rng), dist(rng), dist(rng)};
        const auto outcome = decide_lr(zero, "q", f);
        CHECK(outcome.theta == 0.5);
        CHECK_FALSE(outcome.apply_prf);  // strict >
    }
}

TEST_CASE("logistic gradient matches finite differences and vanishes at the optimum") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<std::pair<FeatureVector, std::int32_t>> examples;
    for (int i = 0; i < 10; ++i) {
        FeatureVector f{dist(rng), dist(rng), dist(rng), dist(rng)};
        examples.emplace_back(f, i % 2);
    }
    const double l2 = 1e-4;

    SUBCASE("finite differences") {
        LogisticModel model;
        model.weights = {0.3, -0.2, 0.5, 0.1};
        model.bias = -0.4;
        const auto [loss, grad] = logistic_loss_and_gradient(model, examples, l2);
        (void)loss;
        const double eps = 1e-6;
        for (int j = 0; j < 5; ++j) {
            auto plus = model;
            auto minus = model;
            if (j < 4) {
                plus.weights[static_cast<std::size_t>(j)] += eps;
                minus.weights[static_cast<std::size_t>(j)] -= eps;
            } else {
                plus.bias += eps;
                minus.bias -= eps;
            }
            const double numeric = (logistic_loss_and_gradient(plus, examples, l2).first -
                                    logistic_loss_and_gradient(minus, examples, l2).first) /
                                   (2.0 * eps);
            CHECK(grad[static_cast<std::size_t>(j)] == doctest::Approx(numeric).epsilon(1e-5));
        }
    }
    SUBCASE("gradient norm at the trained optimum") {
        LogisticTrainConfig config;
        config.epochs = 20000;  // drive the strongly convex problem to convergence
        const auto model = train_logistic(examples, config);
        const auto [loss, grad] = logistic_loss_and_gradient(model, examples, l2);
        (void)loss;
        double norm = 0.0;
        for (const double g : grad) norm += g * g;
        CHECK(std::sqrt(norm) < 1e-4);
    }
}

TEST_CASE("train_logistic rejects degenerate inputs") {
    std::vector<std::pair<FeatureVector, std::int32_t>> single_class;
    single_class.emplace_back(FeatureVector{1, 0, 0, 0}, 1);
    single_class.emplace_back(FeatureVector{0, 1, 0, 0}, 1);
    CHECK_THROWS_WITH_AS(train_logistic(single_class), doctest::Contains("degenerate"),
                         std::invalid_argument);
    CHECK_THROWS_AS(train_logistic({}), std::invalid_argument);
}

TEST_CASE("decide_lr worked values and range") {
    SUBCASE("sigmoid of ln 3 is three quarters") {
        LogisticModel model;
        model.weights = {1.0, 0.0, 0.0, 0.0};
        FeatureVector f{std::log(3.0), 0.0, 0.0, 0.0};
        CHECK(decide_lr(model, "q", f).theta == doctest::Approx(0.75).epsilon(1e-12));
    }
    SUBCASE("theta stays strictly inside (0,1) and the bit flips at one half") {
        std::mt19937_64 rng(103);
        std::uniform_real_distribution<double> dist(-3.0, 3.0);
        for (int i = 0; i < 100; ++i) {
            LogisticModel model;
            model.weights = {dist(rng), dist(rng), dist(rng), dist(rng)};
            model.bias = dist(rng);
            FeatureVector f{dist(rng), dist(rng), dist(rng), dist(rng)};
            const auto outcome = decide_lr(model, "q", f);
            CHECK(outcome.theta > 0.0);
            CHECK(outcome.theta < 1.0);
            CHECK(outcome.apply_prf == (outcome.theta > 0.5));
        }
    }
}

TEST_CASE("logistic model file round trips through the versioned text format") {
    const auto path = temp_path("srf_test_model.txt");
    LogisticModel model;
    model.weights = {0.125, -2.5, 3.0e-7, 42.0};
    model.bias = -0.0625;
    save_logistic_model(path, model);
    const auto loaded = load_logistic_model(path);
    CHECK(loaded.weights == model.weights);
    CHECK(loaded.bias == model.bias);

    {
        std::ofstream out(path);
        out << "something-else v9\n";
    }
    CHECK_THROWS_WITH_AS(load_logistic_model(path), doctest::Contains("srf-logistic-model"),
                         std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("labels and decisions TSV files round trip") {
    const auto labels_path = temp_path("srf_test_labels.tsv");
    std::vector<QueryLabel> labels{{"q1", 1, 0.25, 0.5}, {"q2", 0, 0.5, 0.5}};
    write_labels_tsv(labels_path, labels);
    const auto loaded_labels = read_labels_tsv(labels_path);
    REQUIRE(loaded_labels.size() == 2);
    CHECK(loaded_labels[0].query_id == "q1");
    CHECK(loaded_labels[0].y == 1);
    CHECK(loaded_labels[0].ap_pre == 0.25);
    CHECK(loaded_labels[1].ap_post == 0.5);

    const auto decisions_path = temp_path("srf_test_decisions.tsv");
    std::vector<DecisionOutcome> decisions{{"q1", 0.75, true, "lr-srf"},
                                           {"q2", 0.25, false, "qpp-srf"}};
    write_decisions_tsv(decisions_path, decisions);
    const auto loaded_decisions = read_decisions_tsv(decisions_path);
    REQUIRE(loaded_decisions.size() == 2);
    CHECK(loaded_decisions[0].theta == 0.75);
    CHECK(loaded_decisions[0].apply_prf);
    CHECK(loaded_decisions[1].method == "qpp-srf");
    CHECK_FALSE(loaded_decisions[1].apply_prf);

    std::remove(labels_path.c_str());
    std::remove(decisions_path.c_str());
}
