#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "provex/error.hpp"
#include "provex/oracle.hpp"
#include "support/fixture.hpp"
#include "support/synth.hpp"

using namespace provex;
using testsupport::NbaFixture;

namespace {

AptTable fixture_apt(const NbaFixture& fx) {
    return materialize(fx.q, fx.project.db, fx.pt, fx.omega1(), fx.project.schema);
}

}  // namespace

TEST_CASE("brute force over the fixture puts a perfect pattern at rank one") {
    NbaFixture fx;
    const AptTable apt = fixture_apt(fx);
    // Pools aligned with the star-player pattern: boundary 23 included.
    oracle::ConstantPools pools = oracle::ConstantPools::from_apt(apt, 4);
    for (auto& p : pools.numeric) {
        if (p.attr == "PlayerGameScoring_1.pts") p.boundaries = {23.0};
    }
    const auto top =
        oracle::brute_force_top_k(apt, {fx.t_2015, fx.t_2012}, 2, pools, 50);
    REQUIRE(!top.empty());
    CHECK(top[0].metrics.fscore == doctest::Approx(1.0));

    bool phi1_found = false;
    for (const auto& sp : top) {
        if (sp.pattern == fx.phi1() && sp.target == fx.t_2015) {
            phi1_found = true;
            CHECK(sp.metrics.fscore == doctest::Approx(1.0));
            CHECK(sp.metrics.tp == 2);
            CHECK(sp.metrics.fp == 0);
            CHECK(sp.metrics.fn == 0);
        }
    }
    CHECK(phi1_found);
}

TEST_CASE("max_attrs zero leaves only the discarded empty pattern") {
    NbaFixture fx;
    const AptTable apt = fixture_apt(fx);
    const auto pools = oracle::ConstantPools::from_apt(apt, 4);
    CHECK(oracle::brute_force_top_k(apt, {fx.t_2015, fx.t_2012}, 0, pools, 10).empty());
    CHECK(pools.pattern_space(0) == 0);
}

TEST_CASE("a single-row table yields its value pattern with recall one") {
    Database db;
    Table t;
    t.name = "T";
    t.columns = {{"g", ColumnKind::categorical}, {"attr", ColumnKind::categorical}};
    t.rows.push_back({Value{std::string("only")}, Value{std::string("v")}});
    db.tables.emplace("T", std::move(t));
    const Query q = parse_query("SELECT g, count(*) AS n FROM T GROUP BY g", db);
    const auto pt = provenance(q, db);
    const AptTable apt = materialize(q, db, pt, JoinGraph::pt_only(), SchemaGraph{});
    const auto pools = oracle::ConstantPools::from_apt(apt, 4);
    const auto top = oracle::brute_force_top_k(apt, {0}, 1, pools, 5);
    REQUIRE(top.size() == 1);
    CHECK(top[0].metrics.recall == doctest::Approx(1.0));
    CHECK(top[0].pattern.constrains("prov_T.attr"));
}

TEST_CASE("the space guard refuses oversized searches with a count") {
    NbaFixture fx;
    const AptTable apt = fixture_apt(fx);
    const auto pools = oracle::ConstantPools::from_apt(apt, 4);
    const std::size_t space = pools.pattern_space(3);
    CHECK(space > 10);
    const std::string space_text = std::to_string(space);
    CHECK_THROWS_WITH_AS(
        oracle::brute_force_top_k(apt, {fx.t_2015, fx.t_2012}, 3, pools, 10, /*guard=*/10),
        doctest::Contains(space_text.c_str()), LimitError);
}

TEST_CASE("pattern space counting matches enumeration") {
    NbaFixture fx;
    const AptTable apt = fixture_apt(fx);
    const auto pools = oracle::ConstantPools::from_apt(apt, 4);
    // Count enumerated patterns via a full sweep at max k.
    const auto all = oracle::brute_force_top_k(apt, {fx.t_2015}, 2,
                                               pools, 1'000'000);
    CHECK(all.size() == pools.pattern_space(2));
}

TEST_CASE("naive apt equals the fixture rows") {
    NbaFixture fx;
    const auto naive =
        oracle::naive_apt(fx.q, fx.project.db, fx.pt, fx.omega1(), fx.project.schema);
    CHECK(naive.rows.size() == 6);
    const AptTable apt = fixture_apt(fx);
    CHECK(oracle::encode_apt(apt) == naive.rows);
    CHECK(naive.columns.size() == apt.columns.size());

    const auto pt_only = oracle::naive_apt(fx.q, fx.project.db, fx.pt, JoinGraph::pt_only(),
                                           fx.project.schema);
    CHECK(pt_only.rows.size() == fx.pt.rows.size());
}

TEST_CASE("oracle metrics use the same zero-denominator conventions") {
    NbaFixture fx;
    const AptTable apt = fixture_apt(fx);
    Pattern p;
    p.predicates["PlayerGameScoring_1.player"] =
        Predicate{"PlayerGameScoring_1.player", CmpOp::eq, Value{std::string("nobody")}};
    const MetricSet m = oracle::exact_metrics(apt, p, fx.t_2015, fx.t_2012);
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK(m.fscore == 0.0);
}

TEST_CASE("ranking comparisons cover the spec examples") {
    using List = std::vector<std::pair<std::string, double>>;

    SUBCASE("identical lists") {
        const List ref = {{"a", 1.0}, {"b", 0.8}, {"c", 0.5}};
        const auto cmp = oracle::ranking_quality(ref, {"a", "b", "c"}, 3);
        CHECK(cmp.kendall_tau == 0);
        CHECK(cmp.ndcg == doctest::Approx(1.0));
    }

    SUBCASE("a fully reversed list of length four has six inversions") {
        const List ref = {{"a", 1.0}, {"b", 0.9}, {"c", 0.8}, {"d", 0.7}};
        const auto cmp = oracle::ranking_quality(ref, {"d", "c", "b", "a"}, 4);
        CHECK(cmp.kendall_tau == 6);
        CHECK(cmp.ndcg < 1.0);
    }

    SUBCASE("one adjacent swap in a length-five list") {
        const List ref = {{"a", 1.0}, {"b", 0.9}, {"c", 0.8}, {"d", 0.7}, {"e", 0.6}};
        const auto cmp = oracle::ranking_quality(ref, {"a", "c", "b", "d", "e"}, 5);
        CHECK(cmp.kendall_tau == 1);
    }

    SUBCASE("n beyond the list length truncates silently") {
        const List ref = {{"a", 1.0}, {"b", 0.5}};
        const auto cmp = oracle::ranking_quality(ref, {"a", "b"}, 10);
        CHECK(cmp.ndcg == doctest::Approx(1.0));
    }

    SUBCASE("items missing from the reference score zero relevance") {
        const List ref = {{"a", 1.0}, {"b", 0.5}};
        const auto cmp = oracle::ranking_quality(ref, {"zz", "a"}, 2);
        CHECK(cmp.ndcg < 1.0);
    }
}

TEST_CASE("oracle best never falls below pipeline best on random instances") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        testsupport::SynthOptions opt;
        opt.fact_rows = 60;
        opt.dim_rows = 10;
        opt.cat_domain = 4;
        auto inst = testsupport::make_synth(seed, opt);
        const AptTable apt = materialize(inst.q, inst.db, inst.pt, inst.graph, inst.schema);

        MiningParams params;
        params.seed = seed;
        params.pat_sample = 1.0;
        params.f1_sample = 1.0;
        params.feature_filter = false;
        params.k = 5;
        const auto mined = mine_apt(inst.db, inst.q, inst.pt, inst.graph, inst.schema,
                                    {inst.t1, inst.t2}, params);

        const auto pools = oracle::ConstantPools::from_apt(apt, params.fragments);
        const auto top = oracle::brute_force_top_k(
            apt, {inst.t1, inst.t2},
            static_cast<int>(pools.categorical.size() + pools.numeric.size()), pools, 1);
        REQUIRE(!top.empty());
        const double oracle_best = top[0].metrics.fscore;
        const double pipeline_best = mined.empty() ? 0.0 : mined[0].metrics.fscore;
        CAPTURE(seed);
        CHECK(oracle_best >= pipeline_best - 1e-12);
    }
}
