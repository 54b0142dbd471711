#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "test_util.hpp"

using namespace charp;

TEST_CASE("JSON round-trip reproduces every registry scenario verbatim") {
    for (const auto& entry : registry_list()) {
        Scenario s = make_scenario(entry.name);
        Json j = scenario_to_json(s);
        Scenario back = scenario_from_json(j);
        back.validate();
        CHECK(scenario_to_json(back).dump() == j.dump());
        ScenarioReport ra = run_scenario(s);
        ScenarioReport rb = run_scenario(back);
        CHECK(ra.ok);
        CHECK(report_to_json(ra).dump() == report_to_json(rb).dump());
    }
}

TEST_CASE("reports are deterministic byte for byte") {
    Scenario s = make_scenario("affine-2chart");
    std::string a = report_to_json(run_scenario(s)).dump(2);
    std::string b = report_to_json(run_scenario(make_scenario("affine-2chart"))).dump(2);
    CHECK(a == b);
    CHECK(report_to_text(run_scenario(s)) == report_to_text(run_scenario(s)));
}

TEST_CASE("load_scenario reads what scenario_to_json writes") {
    Scenario s = make_scenario("p1-log-rank2");
    std::string path = "/tmp/charp_scenario_roundtrip.json";
    {
        std::ofstream out(path);
        out << scenario_to_json(s).dump(2) << "\n";
    }
    Scenario back = load_scenario(path);
    CHECK(back.name == s.name);
    CHECK(run_scenario(back).ok);
    std::remove(path.c_str());
    try {
        (void)load_scenario("/tmp/charp_no_such_file.json");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrKind::BadInput);
    }
}

TEST_CASE("truncation order above p-1 is rejected with the chart named") {
    Scenario s = make_scenario("affine-2chart");
    s.r = s.prime;
    try {
        s.validate();
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrKind::ExponentTooLarge);
        CHECK(std::string(e.what()).find("r <= p-1") != std::string::npos);
    }
}

TEST_CASE("unknown check names are input errors") {
    Scenario s = make_scenario("affine-2chart");
    try {
        (void)run_scenario(s, {"frobnicate"});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrKind::BadInput);
    }
}

// A^1 covered by x != 0, x != 1, x != 2, with the triple overlap recorded.
static std::shared_ptr<Covering> three_chart_covering(int p) {
    int64_t m = int64_t(p) * p;
    auto cov = std::make_shared<Covering>();
    cov->mod = Modulus::w2(p);
    auto shifted = [&](int64_t c) {
        Poly q;
        q[{1}] = 1;
        if (c) q[{0}] = m - c;
        return q;
    };
    std::vector<Poly> polys = {shifted(0), shifted(1), shifted(2)};
    for (int i = 0; i < 3; ++i)
        cov->charts.push_back(RingDescriptor::make({{"x", false}}, {polys[size_t(i)]}));
    auto side = [&](const RingPtr& chart, const RingPtr& oring) {
        OverlapSide s;
        s.rho = RingHom(chart, oring, cov->mod, {RingElem::var(oring, cov->mod, size_t(0))});
        s.num = {RingElem::var(chart, cov->mod, size_t(0))};
        s.den = {RingElem::constant(chart, cov->mod, 1)};
        return s;
    };
    for (auto [i, j] : {std::pair<size_t, size_t>{0, 1}, {0, 2}, {1, 2}}) {
        Overlap ov;
        ov.i = i;
        ov.j = j;
        ov.ring = RingDescriptor::make({{"x", false}}, {polys[i], polys[j]});
        ov.side_i = side(cov->charts[i], ov.ring);
        ov.side_j = side(cov->charts[j], ov.ring);
        cov->overlaps.push_back(std::move(ov));
    }
    TripleOverlap t;
    t.i = 0;
    t.j = 1;
    t.k = 2;
    t.ring = RingDescriptor::make({{"x", false}}, polys);
    auto into = [&](size_t oi) {
        return RingHom(cov->overlaps[oi].ring, t.ring, cov->mod,
                       {RingElem::var(t.ring, cov->mod, size_t(0))});
    };
    t.from_ij = into(0);
    t.from_ik = into(1);
    t.from_jk = into(2);
    cov->triples.push_back(std::move(t));
    return cov;
}

TEST_CASE("cocycle check on a genuine triple overlap") {
    int p = 5;
    auto cov = three_chart_covering(p);
    cov->validate();
    Modulus m1 = Modulus::fp(p);
    DerivationCochain c;
    for (const auto& ov : cov->overlaps)
        c.entries.push_back(
            TwistedDerivation::zero(RingHom::identity(ov.ring, m1)));
    std::string where;
    CHECK(check_cocycle(c, *cov, &where));
    // consistent nonzero values: delta_02 = delta_01 + delta_12
    c.entries[0].values[0] = RingElem::constant(cov->overlaps[0].ring, m1, 2);
    c.entries[2].values[0] = RingElem::constant(cov->overlaps[2].ring, m1, 3);
    c.entries[1].values[0] = RingElem::constant(cov->overlaps[1].ring, m1, 5 % p);
    CHECK(check_cocycle(c, *cov, &where));
    // break it
    c.entries[1].values[0] = RingElem::constant(cov->overlaps[1].ring, m1, 1);
    CHECK_FALSE(check_cocycle(c, *cov, &where));
    CHECK(where == "triple (0,1,2) at dx");
}
