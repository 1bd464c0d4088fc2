#include "brickforge/mw_generator.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <unistd.h>

using namespace brickforge;
using namespace brickforge::mw;
using fibration::build_fibre;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
    const auto p = std::filesystem::temp_directory_path() / (name + "-" + std::to_string(::getpid()));
    std::ofstream(p) << body;
    return p;
}

// M over plain integers, independent of master_core.
bool oracle_hit(const Int& a, const Int& b, const Int& m, const Int& n) {
    const Int U1 = a * a - b * b, V1 = 2 * a * b;
    const Int U2 = m * m - n * n, V2 = 2 * m * n;
    const Int M = V1 * U2 * V1 * U2 + U1 * V2 * U1 * V2;
    const Int r = sqrt(M);
    return r * r == M;
}

}  // namespace

TEST_SUITE("mw_generator") {

TEST_CASE("naive_quartic_search") {
    const auto c = build_fibre(44, 9);
    const auto hits = naive_quartic_search(c, 60);
    CHECK(std::find(hits.begin(), hits.end(), EuclidPair{55, 48}) != hits.end());
    for (const auto& h : hits) CHECK(oracle_hit(h.a, h.b, 44, 9));

    const auto none = naive_quartic_search(build_fibre(2, 1), 20);
    std::size_t expected = 0;
    for (long a = 2; a <= 20; ++a)
        for (long b = 1; b < a; ++b)
            if ((a - b) % 2 == 1 && std::gcd(a, b) == 1 && oracle_hit(Int(a), Int(b), 2, 1)) ++expected;
    CHECK(none.size() == expected);
    CHECK(none.empty());

    CHECK_THROWS_AS(naive_quartic_search(c, 1), std::invalid_argument);
}

TEST_CASE("coefficient_vectors") {
    const auto v = coefficient_vectors(2, 1);
    // 3^2 - 1 nonzero vectors, half of them with a positive leader
    CHECK(v.size() == 4);
    for (const auto& x : v) {
        const auto f = std::find_if(x.begin(), x.end(), [](int e) { return e != 0; });
        REQUIRE(f != x.end());
        CHECK(*f > 0);
    }
    CHECK(coefficient_vectors(3, 2).size() == (125 - 1) / 2);
    CHECK(coefficient_vectors(1, 3) == std::vector<std::vector<int>>{{1}, {2}, {3}});
    CHECK(coefficient_vectors(0, 3).empty());
    // graded by max |c|
    const auto w = coefficient_vectors(2, 3);
    for (std::size_t i = 1; i < w.size(); ++i) {
        auto mx = [](const std::vector<int>& x) {
            int r = 0;
            for (int e : x) r = std::max(r, std::abs(e));
            return r;
        };
        CHECK(mx(w[i - 1]) <= mx(w[i]));
    }
}

TEST_CASE("seeds_from_hits") {
    const auto c = build_fibre(44, 9);
    const auto g = seeds_from_hits(c, {{55, 48}, {55, 48}});
    CHECK(g.points.size() == 1);
    CHECK(g.source == SeedSource::naive_search);
    CHECK_THROWS_AS(seeds_from_hits(c, {{2, 1}}), std::invalid_argument);

    // torsion points are dropped
    const auto d = build_fibre(2, 1);
    const auto t = seeds_from_points(d, {CurvePoint::affine(80, 672), CurvePoint::affine(32, 0)});
    CHECK(t.points.empty());
    CHECK_THROWS_AS(seeds_from_points(d, {CurvePoint::affine(1, 1)}), std::invalid_argument);
}

TEST_CASE("K = 1 recovers the seed and every output certifies") {
    const auto c = build_fibre(44, 9);
    const auto g = seeds_from_hits(c, {{55, 48}});
    const auto tg = ecq::torsion_subgroup(c);
    const auto run = enumerate_and_certify(g, 1, tg);
    CHECK(std::find(run.outputs.begin(), run.outputs.end(), MasterTuple{{44, 9}, {55, 48}}) != run.outputs.end());
    CHECK(run.stats.vectors == 1);
    CHECK(run.stats.candidates == tg.order());
    CHECK(run.provenance() == "MW-44-9");
    for (const auto& t : run.outputs) {
        CHECK(oracle_hit(t.a(), t.b(), t.m(), t.n()));
        CHECK(is_master_hit(t));
        CHECK(is_admissible(t.a(), t.b(), t.m(), t.n()));
        CHECK_FALSE(is_perfect_cuboid(t));
        CHECK(sigma_canonical(t) == t);
    }
    CHECK(run.stats.certified == run.outputs.size() + run.stats.duplicates);
}

TEST_CASE("larger K only adds outputs and worker count does not matter") {
    const auto c = build_fibre(44, 9);
    const auto g = seeds_from_hits(c, naive_quartic_search(c, 60));
    const auto tg = ecq::torsion_subgroup(c);
    const auto r2 = enumerate_and_certify(g, 2, tg);
    const auto r3 = enumerate_and_certify(g, 3, tg, {10'000, 4});
    CHECK(r3.outputs.size() >= 3);
    CHECK(std::includes(r3.outputs.begin(), r3.outputs.end(), r2.outputs.begin(), r2.outputs.end()));
    CHECK(r3.outputs == enumerate_and_certify(g, 3, tg, {10'000, 1}).outputs);
    for (const auto& t : r3.outputs) {
        CHECK(is_master_hit(t));
        CHECK_FALSE(is_perfect_cuboid(t));
    }
}

TEST_CASE("R and -R lift to the same pair") {
    const auto c = build_fibre(44, 9);
    const auto P = fibration::point_from_hit(c, {55, 48});
    const auto R = ecq::scalar_mul(c, 3, P);
    CHECK(fibration::tau(c, R) == fibration::tau(c, ecq::neg(c, R)));
    CHECK(fibration::lift_point(c, R) == fibration::lift_point(c, ecq::neg(c, R)));
}

TEST_CASE("empty seeds and bad K") {
    const auto c = build_fibre(2, 1);
    const auto tg = ecq::torsion_subgroup(c);
    const GeneratorSet g{c, {}, SeedSource::naive_search};
    const auto run = enumerate_and_certify(g, 3, tg);
    CHECK(run.outputs.empty());
    CHECK(run.seed_count == 0);
    CHECK_THROWS_AS(enumerate_and_certify(g, 0, tg), std::invalid_argument);
}

TEST_CASE("digit cap skips large points") {
    const auto c = build_fibre(44, 9);
    const auto g = seeds_from_hits(c, {{55, 48}});
    const auto run = enumerate_and_certify(g, 3, ecq::torsion_subgroup(c), {5, 1});
    CHECK(run.stats.digit_cap_skipped == run.stats.candidates);
    CHECK(run.outputs.empty());
}

TEST_CASE("parse_seed_file") {
    const auto c = build_fibre(44, 9);
    const auto P = fibration::point_from_hit(c, {55, 48});
    const auto ok = temp_file("seeds-ok", "# seeds\n\nt 55/48\n" + P.x.get_str() + " " + P.y.get_str() + "\n");
    const auto g = parse_seed_file(c, ok);
    CHECK(g.source == SeedSource::imported);
    CHECK(g.points.size() == 1);
    CHECK(g.points.front() == P);

    const auto off = temp_file("seeds-off", "t 55/48\n1 1\n");
    try {
        parse_seed_file(c, off);
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_seed_file(c, temp_file("seeds-nsq", "t 2/1\n")), std::runtime_error);
    CHECK_THROWS_AS(parse_seed_file(c, temp_file("seeds-junk", "x\n")), std::runtime_error);
    CHECK_THROWS_AS(parse_seed_file(c, temp_file("seeds-zero", "t 0\n")), std::runtime_error);
    CHECK_THROWS_AS(parse_seed_file(c, "/nonexistent/seeds"), std::runtime_error);
    for (auto n : {"seeds-ok", "seeds-off", "seeds-nsq", "seeds-junk", "seeds-zero"})
        std::filesystem::remove(std::filesystem::temp_directory_path() / (std::string(n) + "-" + std::to_string(::getpid())));
}

}  // TEST_SUITE
