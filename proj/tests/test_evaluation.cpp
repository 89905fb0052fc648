#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "swe/metrics.hpp"

TEST_CASE("rmse worked examples") {
    CHECK(swe::rmse({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(swe::rmse({0, 5}, {0, 0}) == Catch::Approx(std::sqrt(25.0 / 2.0)).epsilon(1e-12));
    CHECK(swe::rmse({2, 2, 2, 2}, {1, 1, 1, 1}) == Catch::Approx(1.0));
    CHECK_THROWS(swe::rmse({1, 2}, {1}));
    CHECK_THROWS(swe::rmse({}, {}));
}

TEST_CASE("pearson on exact linear relationships") {
    std::vector<double> x = {1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<double> up, down;
    for (double v : x) {
        up.push_back(3.0 * v + 1.0);
        down.push_back(-2.0 * v + 5.0);
    }
    const auto [r1, p1] = swe::pearson(x, up);
    CHECK(r1 == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(p1 == Catch::Approx(0.0).margin(1e-12));
    const auto [r2, p2] = swe::pearson(x, down);
    CHECK(r2 == Catch::Approx(-1.0).epsilon(1e-12));
    CHECK(p2 == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("pearson p-value matches a hand-checked table entry") {
    // r = 0.8 at n = 12 gives t = 4.216, two-tailed p ~= 0.00177
    // (standard t-table arithmetic, df = 10)
    std::vector<double> x, y;
    // construct a sequence with r very close to a target via mixing
    std::mt19937_64 gen(2);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double a = noise(gen), b = noise(gen);
        x.push_back(a);
        y.push_back(a + b);  // r -> 1/sqrt(2) ~ 0.7071 as n grows
    }
    const auto [r, p] = swe::pearson(x, y);
    CHECK(r == Catch::Approx(1.0 / std::sqrt(2.0)).margin(0.03));
    CHECK(p < 1e-6);
}

TEST_CASE("independent noise shows near-zero correlation and a large p") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> x(10000), y(10000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = dist(gen);
        y[i] = dist(gen);
    }
    const auto [r, p] = swe::pearson(x, y);
    CHECK(std::abs(r) < 0.05);
    CHECK(p > 1e-6);
    CHECK(p <= 1.0);
}

TEST_CASE("pearson rejects degenerate input") {
    CHECK_THROWS(swe::pearson({1, 2}, {3, 4}));                // too short
    CHECK_THROWS(swe::pearson({1, 1, 1, 1}, {1, 2, 3, 4}));    // constant x
    CHECK_THROWS(swe::pearson({1, 2, 3, 4}, {5, 5, 5, 5}));    // constant y
}

TEST_CASE("percent_error worked examples") {
    CHECK(swe::percent_error(1.0, {2, 2, 2}) == Catch::Approx(50.0));
    // published-style magnitudes: rmse 1.859 over labels averaging 0.666
    CHECK(swe::percent_error(1.859, std::vector<double>(10, 0.666)) ==
          Catch::Approx(100.0 * 1.859 / 0.666).epsilon(1e-12));
    CHECK(swe::percent_error(1.859, std::vector<double>(10, 0.666)) ==
          Catch::Approx(279.1).margin(0.5));
    CHECK_THROWS(swe::percent_error(1.0, {}));
    CHECK_THROWS(swe::percent_error(1.0, {0, 0, 0}));
    CHECK_THROWS(swe::percent_error(1.0, {-1, -1}));
}

TEST_CASE("filter_agreement worked examples") {
    // label zero + no voice, or label non-zero + voice
    const std::vector<double> labels = {0.0, 0.0, 1.0, 2.0, 0.0, 3.0};
    const std::vector<bool> vad = {false, true, true, false, false, true};
    CHECK(swe::filter_agreement(labels, vad) == std::vector<std::size_t>{0, 2, 4, 5});
    CHECK_THROWS(swe::filter_agreement({0.0}, {true, false}));
}

TEST_CASE("filter_agreement matches its definition on random input") {
    std::mt19937 gen(13);
    std::uniform_int_distribution<int> lab_dist(0, 3), coin(0, 1);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> labels(80);
        std::vector<bool> vad(80);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            labels[i] = lab_dist(gen);
            vad[i] = coin(gen) == 1;
        }
        const auto keep = swe::filter_agreement(labels, vad);
        std::vector<std::size_t> expect;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const bool agree = labels[i] == 0.0 ? !vad[i] : vad[i];
            if (agree) expect.push_back(i);
        }
        REQUIRE(keep == expect);
    }
}

TEST_CASE("loso_splits covers every participant exactly once") {
    const auto splits = swe::loso_splits({"p1", "p2", "p3", "p4"});
    REQUIRE(splits.size() == 4);
    for (const auto& s : splits) {
        CHECK(s.train_ids.size() == 3);
        for (const auto& id : s.train_ids) CHECK(id != s.test_id);
    }
    CHECK(splits[0].test_id == "p1");
    CHECK(splits[3].test_id == "p4");

    const auto pair = swe::loso_splits({"a", "b"});
    REQUIRE(pair.size() == 2);
    CHECK(pair[0].train_ids == std::vector<std::string>{"b"});

    CHECK_THROWS(swe::loso_splits({"a", "a", "b"}));
    CHECK_THROWS(swe::loso_splits({"only"}));
}

TEST_CASE("cross_paradigm_splits yields both directions") {
    const auto folds = swe::cross_paradigm_splits("driving", "supervisory");
    REQUIRE(folds.size() == 2);
    CHECK(folds[0].train_paradigm == "driving");
    CHECK(folds[0].test_paradigm == "supervisory");
    CHECK(folds[1].train_paradigm == "supervisory");
    CHECK(folds[1].test_paradigm == "driving");
    CHECK_THROWS(swe::cross_paradigm_splits("same", "same"));
}

TEST_CASE("build_report separates filtered and unfiltered datasets") {
    std::vector<swe::EvalInstance> insts;
    // condition A: perfect estimates, all in agreement
    for (int i = 0; i < 6; ++i)
        insts.push_back({1.0 + i * 0.5, 1.0 + i * 0.5, true, "A"});
    // condition B: off-by-one estimates, half disagree with the vad flag
    for (int i = 0; i < 6; ++i)
        insts.push_back({2.0 + i * 0.25, 1.0 + i * 0.25, i % 2 == 0, "B"});

    const auto rows = swe::build_report(insts);
    auto find = [&](const std::string& ds, const std::string& cond) -> const swe::ReportRow& {
        for (const auto& r : rows)
            if (r.dataset == ds && r.condition == cond) return r;
        throw std::runtime_error("row missing: " + ds + "/" + cond);
    };

    CHECK(find("unfiltered", "A").rmse_value == Catch::Approx(0.0).margin(1e-12));
    CHECK(find("unfiltered", "B").rmse_value == Catch::Approx(1.0));
    CHECK(find("unfiltered", "All").n == 12);
    CHECK(find("unfiltered", "A").pearson_r.has_value());
    CHECK(*find("unfiltered", "A").pearson_r == Catch::Approx(1.0));

    // filtered keeps the agreeing half of B and all of A
    CHECK(find("filtered", "B").n == 3);
    CHECK(find("filtered", "All").n == 9);
    CHECK_FALSE(find("filtered", "All").pearson_r.has_value());

    CHECK_THROWS(swe::build_report({}));
}

TEST_CASE("report serializations carry every row") {
    std::vector<swe::EvalInstance> insts;
    for (int i = 0; i < 8; ++i) insts.push_back({0.5 * i, 0.4 * i + 0.1, true, "C"});
    const auto rows = swe::build_report(insts);
    const auto csv = swe::report_csv(rows);
    CHECK(csv.find("dataset,condition,n,rmse,percent_error,pearson_r,p_value") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(rows.size()));
    const auto text = swe::report_text(rows);
    CHECK(text.find("RMSE") != std::string::npos);
    for (const auto& r : rows) CHECK(text.find(r.condition) != std::string::npos);
}
