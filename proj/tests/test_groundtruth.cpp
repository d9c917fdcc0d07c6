#include <doctest.h>

#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "causal/errors.hpp"
#include "causal/groundtruth.hpp"
#include "causal/rng.hpp"

using namespace causal;

namespace {

// One covariate, configurable treatments; outcome values supplied per cell.
FactorialDataset grid(int subjects, int treatments,
                      const std::function<std::string(int, int)>& outcome) {
    std::vector<std::string> treat_names;
    for (int p = 0; p < treatments; ++p)
        treat_names.push_back("T" + std::to_string(p + 1));
    std::vector<FactorialRecord> records;
    for (int s = 0; s < subjects; ++s)
        for (int mask = 0; mask < (1 << treatments); ++mask) {
            FactorialRecord r;
            r.subject = "s" + std::to_string(1000 + s);
            r.trial = 0;
            r.covariates = {std::to_string(s % 3 + 1)};
            for (int p = 0; p < treatments; ++p)
                r.treatments.push_back((mask >> p) & 1);
            r.outcomes = {outcome(s, mask)};
            records.push_back(std::move(r));
        }
    return FactorialDataset::create({"C"}, treat_names, {"O1"}, records);
}

}  // namespace

TEST_CASE("friedman statistic pinned on the consistent-shift example") {
    // 20 blocks, arm 1 strictly larger in every block: Q = 20 exactly and the
    // chi-square(1) tail equals erfc(sqrt(Q/2)).
    const FactorialDataset d = grid(20, 1, [](int s, int mask) {
        return std::to_string(10.0 + s + (mask ? 5.0 : 0.0));
    });
    const auto [q, p] = friedman_test(d, "T1", "O1");
    CHECK(q == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(p == doctest::Approx(std::erfc(std::sqrt(10.0))).epsilon(1e-7));
    CHECK(p == doctest::Approx(7.744e-6).epsilon(1e-3));
}

TEST_CASE("friedman on flat and tied data") {
    const FactorialDataset same = grid(12, 1, [](int s, int) {
        return std::to_string(3 + s);
    });
    const auto [q, p] = friedman_test(same, "T1", "O1");
    CHECK(q == doctest::Approx(0.0));
    CHECK(p == doctest::Approx(1.0));

    const FactorialDataset constant = grid(12, 1, [](int, int) { return "7"; });
    const auto [q2, p2] = friedman_test(constant, "T1", "O1");
    CHECK(q2 == doctest::Approx(0.0));
    CHECK(p2 == doctest::Approx(1.0));
}

TEST_CASE("friedman input validation") {
    const FactorialDataset d = grid(5, 1, [](int, int mask) {
        return std::to_string(mask);
    });
    CHECK_THROWS_AS(friedman_test(d, "T9", "O1"), IdentifierError);
    CHECK_THROWS_AS(friedman_test(d, "T1", "O9"), IdentifierError);
    const FactorialDataset one = grid(1, 1, [](int, int mask) {
        return std::to_string(mask);
    });
    CHECK_THROWS_AS(friedman_test(one, "T1", "O1"), ParameterError);
}

TEST_CASE("friedman is invariant to block order and monotone transforms") {
    Rng rng(88);
    std::vector<std::vector<double>> noise(30, std::vector<double>(2));
    for (auto& row : noise)
        for (double& x : row)
            x = rng.uniform();

    auto make = [&](bool reversed, bool transformed) {
        return grid(30, 1, [&, reversed, transformed](int s, int mask) {
            const int block = reversed ? 29 - s : s;
            double v = noise[block][mask] + (mask ? 0.3 : 0.0);
            if (transformed)
                v = std::exp(3.0 * v);  // strictly monotone
            return std::to_string(v);
        });
    };
    const auto base = friedman_test(make(false, false), "T1", "O1");
    const auto reordered = friedman_test(make(true, false), "T1", "O1");
    const auto warped = friedman_test(make(false, true), "T1", "O1");
    CHECK(base.first == doctest::Approx(reordered.first).epsilon(1e-12));
    CHECK(base.first == doctest::Approx(warped.first).epsilon(1e-12));
    CHECK(base.second == doctest::Approx(warped.second).epsilon(1e-12));
}

TEST_CASE("friedman marginalizes the other treatments") {
    // T2 shifts the outcome strongly; T1 does nothing. The T1 test must not
    // pick up T2's effect because it averages over T2's arms.
    const FactorialDataset d = grid(25, 2, [](int s, int mask) {
        const double v = s * 0.01 + ((mask >> 1) & 1 ? 2.0 : 0.0);
        return std::to_string(v);
    });
    const auto t1 = friedman_test(d, "T1", "O1");
    const auto t2 = friedman_test(d, "T2", "O1");
    CHECK(t1.first == doctest::Approx(0.0));
    CHECK(t2.first == doctest::Approx(25.0).epsilon(1e-12));
    CHECK(t2.second < 1e-5);
}

TEST_CASE("consistent dag wiring") {
    // T1 affects O1, T2 does not.
    const FactorialDataset d = grid(30, 2, [](int s, int mask) {
        return std::to_string(s * 0.001 + ((mask & 1) ? 1.0 : 0.0));
    });
    const auto [g, ledger] = consistent_dag(d, "C", 0.05);
    CHECK(g.num_variables() == 4);
    CHECK(g.has_edge(g.index_of("C"), g.index_of("T1")));
    CHECK(g.has_edge(g.index_of("C"), g.index_of("T2")));
    CHECK(g.has_edge(g.index_of("T1"), g.index_of("O1")));
    CHECK_FALSE(g.has_edge(g.index_of("T2"), g.index_of("O1")));
    CHECK(g.edge_count() == 3);

    REQUIRE(ledger.entries.size() == 2);
    for (const auto& e : ledger.entries)
        CHECK(e.causally_related == (e.p_value < 0.05));

    std::ostringstream csv;
    ledger.write_csv(csv);
    CHECK(csv.str().find("treatment,outcome,statistic,p_value,causally_related") == 0);
    CHECK(csv.str().find("T1,O1,") != std::string::npos);

    CHECK_THROWS_AS(consistent_dag(d, "missing", 0.05), IdentifierError);
    CHECK_THROWS_AS(consistent_dag(d, "C", 0.0), ParameterError);
}

TEST_CASE("effect decisions are monotone in alpha") {
    Rng rng(17);
    const FactorialDataset d = grid(15, 2, [&](int, int mask) {
        return std::to_string(rng.uniform() + 0.25 * (mask & 1));
    });
    const auto strict = consistent_dag(d, "C", 0.01).second;
    const auto loose = consistent_dag(d, "C", 0.20).second;
    REQUIRE(strict.entries.size() == loose.entries.size());
    for (std::size_t i = 0; i < strict.entries.size(); ++i) {
        CHECK(strict.entries[i].p_value ==
              doctest::Approx(loose.entries[i].p_value).epsilon(1e-12));
        if (strict.entries[i].causally_related)
            CHECK(loose.entries[i].causally_related);
    }
}

TEST_CASE("empirical do distribution counts grid records") {
    // Two subjects, binary treatment: outcomes A/B as in the worked example.
    std::vector<FactorialRecord> records{
        {"s1", 0, {"1"}, {0}, {"A"}},
        {"s1", 0, {"1"}, {1}, {"B"}},
        {"s2", 0, {"2"}, {0}, {"A"}},
        {"s2", 0, {"2"}, {1}, {"A"}},
    };
    const FactorialDataset d = FactorialDataset::create({"C"}, {"T1"}, {"O1"}, records);
    const CategoricalDistribution p1 = empirical_do_distribution(d, "O1", "T1", 1);
    REQUIRE(p1.domain == std::vector<std::string>{"A", "B"});
    CHECK(p1.probabilities[0] == doctest::Approx(0.5));
    CHECK(p1.probabilities[1] == doctest::Approx(0.5));

    const CategoricalDistribution p0 = empirical_do_distribution(d, "O1", "T1", 0);
    CHECK(p0.probabilities[0] == doctest::Approx(1.0));

    double total = 0.0;
    for (double x : p1.probabilities)
        total += x;
    CHECK(total == doctest::Approx(1.0));

    CHECK_THROWS_AS(empirical_do_distribution(d, "O1", "T1", 2), ParameterError);
    CHECK_THROWS_AS(empirical_do_distribution(d, "O1", "T9", 1), IdentifierError);
}

TEST_CASE("empirical do distribution averages over the other treatments") {
    // With two treatments, do(T1 = t) counts both T2 arms uniformly.
    const FactorialDataset d = grid(2, 2, [](int, int mask) {
        return std::to_string(mask & 1 ? 10 + ((mask >> 1) & 1) : 0);
    });
    const CategoricalDistribution p = empirical_do_distribution(d, "O1", "T1", 1);
    // Outcomes at T1=1: "10" when T2=0 and "11" when T2=1, equally often.
    REQUIRE(p.domain == std::vector<std::string>{"0", "10", "11"});
    CHECK(p.probabilities[0] == doctest::Approx(0.0));
    CHECK(p.probabilities[1] == doctest::Approx(0.5));
    CHECK(p.probabilities[2] == doctest::Approx(0.5));
}
