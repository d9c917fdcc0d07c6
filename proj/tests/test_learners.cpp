#include <doctest.h>

#include <chrono>
#include <cmath>

#include "causal/bayesnet.hpp"
#include "causal/errors.hpp"
#include "causal/learners.hpp"

using namespace causal;

namespace {

// X -> Y -> Z with strong links; good recovery signal at moderate n.
DiscreteBayesNet strong_chain() {
    Dag g({"X", "Y", "Z"});
    g.add_edge("X", "Y");
    g.add_edge("Y", "Z");
    DiscreteBayesNet net(g, {{"0", "1"}, {"0", "1"}, {"0", "1"}});
    net.set_cpt(0, {{0.4, 0.6}});
    net.set_cpt(1, {{0.85, 0.15}, {0.2, 0.8}});
    net.set_cpt(2, {{0.9, 0.1}, {0.25, 0.75}});
    return net;
}

DiscreteBayesNet strong_collider() {
    Dag g({"X", "Y", "Z"});
    g.add_edge("X", "Z");
    g.add_edge("Y", "Z");
    DiscreteBayesNet net(g, {{"0", "1"}, {"0", "1"}, {"0", "1"}});
    net.set_cpt(0, {{0.5, 0.5}});
    net.set_cpt(1, {{0.5, 0.5}});
    // Monotone in both parents, so each edge is marginally visible too.
    net.set_cpt(2, {{0.9, 0.1}, {0.6, 0.4}, {0.55, 0.45}, {0.1, 0.9}});
    return net;
}

}  // namespace

TEST_CASE("g2 test on exact tables") {
    // Perfectly balanced independent table: statistic identically zero.
    Dataset ind({"X", "Y"}, {{"0", "1"}, {"0", "1"}});
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int k = 0; k < 25; ++k)
                ind.add_row({x, y});
    auto d = g2_test(ind, "X", "Y", {}, 0.05);
    CHECK(d.statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d.p_value == doctest::Approx(1.0));
    CHECK(d.independent);
    CHECK(d.degrees_of_freedom == 1);
    CHECK_FALSE(d.low_power);

    // Deterministic copy: decisive rejection.
    Dataset dep({"X", "Y"}, {{"0", "1"}, {"0", "1"}});
    for (int x = 0; x < 2; ++x)
        for (int k = 0; k < 50; ++k)
            dep.add_row({x, x});
    auto d2 = g2_test(dep, "X", "Y", {}, 0.05);
    CHECK_FALSE(d2.independent);
    CHECK(d2.p_value < 1e-6);
    // G2 for a perfect 2x2 diagonal with 50/50 rows is 2 * 100 * ln 2.
    CHECK(d2.statistic == doctest::Approx(200.0 * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("g2 degrees of freedom count nonempty strata only") {
    Dataset d({"X", "Y", "Z"}, {{"0", "1"}, {"0", "1"}, {"0", "1", "2"}});
    // Z = 2 never occurs: two nonempty strata.
    for (int k = 0; k < 30; ++k) {
        d.add_row({k % 2, (k / 2) % 2, 0});
        d.add_row({(k / 2) % 2, k % 2, 1});
    }
    auto dec = g2_test(d, "X", "Y", {"Z"}, 0.05);
    CHECK(dec.degrees_of_freedom == 2);

    // Sparse data against a wide table trips the low-power flag.
    Dataset tiny({"X", "Y", "Z"}, {{"0", "1"}, {"0", "1"}, {"0", "1", "2"}});
    tiny.add_row({0, 0, 0});
    tiny.add_row({1, 1, 1});
    tiny.add_row({0, 1, 2});
    auto weak = g2_test(tiny, "X", "Y", {"Z"}, 0.05);
    CHECK(weak.low_power);
}

TEST_CASE("g2 separates chain data conditionally") {
    Dataset data = forward_sample(strong_chain(), 8000, 31);
    CHECK_FALSE(g2_test(data, "X", "Z", {}, 0.01).independent);
    CHECK(g2_test(data, "X", "Z", {"Y"}, 0.01).independent);
}

TEST_CASE("g2 argument validation") {
    Dataset d({"X", "Y"}, {{"0", "1"}, {"0", "1"}});
    d.add_row({0, 1});
    CHECK_THROWS_AS(g2_test(d, "X", "X", {}, 0.05), ParameterError);
    CHECK_THROWS_AS(g2_test(d, "X", "Y", {"X"}, 0.05), ParameterError);
    CHECK_THROWS_AS(g2_test(d, "X", "Q", {}, 0.05), IdentifierError);
    CHECK_THROWS_AS(g2_test(d, "X", "Y", {}, 0.0), ParameterError);
    CHECK_THROWS_AS(g2_test(d, "X", "Y", {}, 1.0), ParameterError);
}

TEST_CASE("bdeu score pinned by hand") {
    // Rows (0,0), (0,1), (1,1); ess = 2. Closed-form Dirichlet-multinomial
    // marginals: P(X data) = 1/12, P(Y | X data) = 1/16, so the X -> Y score
    // is ln(1/192).
    Dataset d({"X", "Y"}, {{"0", "1"}, {"0", "1"}});
    d.add_row({0, 0});
    d.add_row({0, 1});
    d.add_row({1, 1});
    Dag xy({"X", "Y"});
    xy.add_edge("X", "Y");
    CHECK(bdeu_score(d, xy, 2.0) == doctest::Approx(std::log(1.0 / 192.0)).epsilon(1e-12));

    Dag empty({"X", "Y"});
    // Empty graph: two independent marginals, 1/12 each.
    CHECK(bdeu_score(d, empty, 2.0) ==
          doctest::Approx(2.0 * std::log(1.0 / 12.0)).epsilon(1e-12));

    CHECK_THROWS_AS(bdeu_score(d, xy, 0.0), ParameterError);
    CHECK_THROWS_AS(bdeu_score(d, xy, -1.0), ParameterError);
}

TEST_CASE("bdeu is score equivalent across an equivalence class") {
    Dataset data = forward_sample(strong_chain(), 500, 77);
    Dag fwd({"X", "Y", "Z"});
    fwd.add_edge("X", "Y");
    fwd.add_edge("Y", "Z");
    Dag rev({"X", "Y", "Z"});
    rev.add_edge("Z", "Y");
    rev.add_edge("Y", "X");
    Dag fork({"X", "Y", "Z"});
    fork.add_edge("Y", "X");
    fork.add_edge("Y", "Z");
    const double s = bdeu_score(data, fwd, 10.0);
    CHECK(bdeu_score(data, rev, 10.0) == doctest::Approx(s).epsilon(1e-10));
    CHECK(bdeu_score(data, fork, 10.0) == doctest::Approx(s).epsilon(1e-10));
    // The collider is in a different class and scores differently on chain data.
    Dag coll({"X", "Y", "Z"});
    coll.add_edge("X", "Y");
    coll.add_edge("Z", "Y");
    CHECK(std::abs(bdeu_score(data, coll, 10.0) - s) > 1e-6);
}

TEST_CASE("bdeu prefers the generating structure at scale") {
    DiscreteBayesNet truth = strong_chain();
    Dataset data = forward_sample(truth, 5000, 13);
    Dag empty({"X", "Y", "Z"});
    CHECK(bdeu_score(data, truth.dag(), 10.0) > bdeu_score(data, empty, 10.0));
}

TEST_CASE("pc with a separation oracle recovers the class exactly") {
    for (int rep = 0; rep < 30; ++rep) {
        const Dag truth = random_dag(6, 2.0, 5200 + rep);
        const Pdag found = pc_oracle(truth, LearnerConfig{});
        REQUIRE(found == cpdag_of(truth));
    }
}

TEST_CASE("pc on sampled data finds the canonical structures") {
    LearnerConfig cfg;
    Dataset chain_data = forward_sample(strong_chain(), 12000, 41);
    const Pdag chain_found = pc(chain_data, cfg);
    CHECK(chain_found == cpdag_of(strong_chain().dag()));

    Dataset coll_data = forward_sample(strong_collider(), 12000, 42);
    const Pdag coll_found = pc(coll_data, cfg);
    CHECK(coll_found == cpdag_of(strong_collider().dag()));
}

TEST_CASE("pc is deterministic") {
    Dataset data = forward_sample(dirichlet_parameterize(random_dag(8, 2.0, 9), 2, 1.0, 9),
                                  2000, 9);
    CHECK(pc(data, LearnerConfig{}) == pc(data, LearnerConfig{}));
}

TEST_CASE("ges recovers canonical structures and never scores below empty") {
    LearnerConfig cfg;
    Dataset chain_data = forward_sample(strong_chain(), 12000, 51);
    const Pdag chain_found = ges(chain_data, cfg);
    CHECK(chain_found == cpdag_of(strong_chain().dag()));

    Dataset coll_data = forward_sample(strong_collider(), 12000, 52);
    CHECK(ges(coll_data, cfg) == cpdag_of(strong_collider().dag()));

    for (int rep = 0; rep < 6; ++rep) {
        const Dag truth = random_dag(6, 2.0, 6400 + rep);
        Dataset data = forward_sample(dirichlet_parameterize(truth, 2, 0.5, 6500 + rep),
                                      20000, 6600 + rep);
        const Pdag found = ges(data, cfg);
        const double fitted = bdeu_score(data, consistent_extension(found), cfg.ess);
        const double empty = bdeu_score(data, Dag(data.columns()), cfg.ess);
        CHECK(fitted >= empty);
        CHECK(ges(data, cfg) == found);  // deterministic
    }
}

TEST_CASE("ges handles pure-noise data without inventing structure") {
    Dag independent({"A", "B", "C", "D"});
    DiscreteBayesNet net(independent, {{"0", "1"}, {"0", "1"}, {"0", "1"}, {"0", "1"}});
    for (int v = 0; v < 4; ++v)
        net.set_cpt(v, {{0.5, 0.5}});
    Dataset data = forward_sample(net, 5000, 3);
    const Pdag found = ges(data, LearnerConfig{});
    CHECK(found.directed_edge_count() + found.undirected_edge_count() <= 1);
}

TEST_CASE("mmhc recovers canonical structures") {
    LearnerConfig cfg;
    Dataset chain_data = forward_sample(strong_chain(), 12000, 61);
    const Dag chain_found = mmhc(chain_data, cfg);
    CHECK(cpdag_of(chain_found) == cpdag_of(strong_chain().dag()));

    Dataset coll_data = forward_sample(strong_collider(), 12000, 62);
    const Dag coll_found = mmhc(coll_data, cfg);
    CHECK(cpdag_of(coll_found) == cpdag_of(strong_collider().dag()));

    CHECK(mmhc(chain_data, cfg) == chain_found);  // deterministic

    // The hill climb only ever helps the score.
    const double fitted = bdeu_score(chain_data, chain_found, cfg.ess);
    const double empty = bdeu_score(chain_data, Dag(chain_data.columns()), cfg.ess);
    CHECK(fitted >= empty);
}

TEST_CASE("learner throughput stays within the experiment budget") {
    const Dag truth = random_dag(14, 2.0, 777);
    Dataset data = forward_sample(dirichlet_parameterize(truth, 2, 1.0, 778), 5000, 779);

    const auto t0 = std::chrono::steady_clock::now();
    const Pdag found = ges(data, LearnerConfig{});
    const auto t1 = std::chrono::steady_clock::now();
    CHECK(found.directed_edge_count() + found.undirected_edge_count() > 0);
    const double seconds = std::chrono::duration<double>(t1 - t0).count();
    CHECK(seconds < 30.0);

    const auto t2 = std::chrono::steady_clock::now();
    (void)mmhc(data, LearnerConfig{});
    (void)pc(data, LearnerConfig{});
    const auto t3 = std::chrono::steady_clock::now();
    CHECK(std::chrono::duration<double>(t3 - t2).count() < 60.0);
}
