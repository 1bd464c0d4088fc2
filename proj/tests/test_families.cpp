#include "brickforge/families.hpp"

#include "brickforge/blocker_lab.hpp"
#include "brickforge/master_core.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <unistd.h>

using namespace brickforge;
using namespace brickforge::families;

namespace {

EdgeTriple E(long x, long y, long z) { return {Int(x), Int(y), Int(z)}; }

bool has(const std::vector<GeneratedBrick>& v, const EdgeTriple& e) {
    return std::any_of(v.begin(), v.end(), [&](const GeneratedBrick& g) { return g.edges == e; });
}

bool square(const Int& n) {
    const Int r = sqrt(n);
    return r * r == n;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
    const auto p = std::filesystem::temp_directory_path() / (name + "-" + std::to_string(::getpid()));
    std::ofstream(p) << body;
    return p;
}

}  // namespace

TEST_SUITE("families") {

TEST_CASE("tags") {
    for (auto t : {FamilyTag::Saunderson, FamilyTag::Lenhart, FamilyTag::HimaneT1, FamilyTag::HimaneT2,
                   FamilyTag::HimaneT3, FamilyTag::Euler, FamilyTag::Sporadic})
        CHECK(parse_tag(to_string(t)) == t);
    CHECK(to_string(FamilyTag::HimaneT2) == "Himane-T2");
    CHECK_FALSE(parse_tag("himane"));
}

TEST_CASE("primitive_sorted and is_body_cuboid") {
    CHECK(primitive_sorted(240, 117, 44) == E(44, 117, 240));
    CHECK(primitive_sorted(480, 234, 88) == E(44, 117, 240));
    CHECK(is_body_cuboid(44, 117, 240));
    CHECK_FALSE(is_body_cuboid(1, 2, 3));
    CHECK_FALSE(is_body_cuboid(0, 117, 240));
    CHECK_FALSE(is_body_cuboid(-44, 117, 240));
}

TEST_CASE("saunderson") {
    const auto s = saunderson_generate(50);
    CHECK(has(s, E(44, 117, 240)));
    for (const auto& g : s) {
        const auto& [x, y, z] = g.edges;
        CHECK(x > 0);
        CHECK(square(x * x + y * y));
        CHECK(square(x * x + z * z));
        CHECK(square(y * y + z * z));
        CHECK(g.generator[0] * g.generator[0] + g.generator[1] * g.generator[1] == g.generator[2] * g.generator[2]);
        CHECK(g.generator[2] <= 50);
    }
    CHECK(saunderson_generate(4).empty());
    CHECK_FALSE(saunderson_generate(5).empty());
}

TEST_CASE("lenhart") {
    const auto l = lenhart_generate(50);
    CHECK(has(l, primitive_sorted(60480, 282568, 155610)));
    for (const auto& g : l) {
        const auto& [x, y, z] = g.edges;
        CHECK(x > 0);
        CHECK(square(x * x + y * y));
        CHECK(square(x * x + z * z));
        CHECK(square(y * y + z * z));
        const auto& [u, v, w] = g.generator;
        CHECK(u * u + v * v == 5 * w * w);
        CHECK(u != w);
        CHECK(v != w);
    }
    // w = 1 gives only (1, 2) and (2, 1), both degenerate
    CHECK(lenhart_generate(1).empty());
}

TEST_CASE("recoverable saunderson tuples are strictly semi-scaled") {
    std::size_t recovered = 0;
    for (const auto& g : saunderson_generate(50))
        for (const auto& t : recover_scaled_master_tuple(g.edges[0], g.edges[1], g.edges[2])) {
            if (!is_master_hit(t)) continue;
            ++recovered;
            CHECK(blocker::is_strictly_semiscaled(t));
        }
    CHECK(recovered > 0);
}

TEST_CASE("himane_import") {
    const auto p = temp_file("himane", "# catalogue\n44 117 240\n240,117,44\n1,2,3\n5 6\nx 1 2\n\n");
    const auto r = himane_import(p);
    CHECK(r.bricks.size() == 2);
    CHECK(r.bricks[0] == E(44, 117, 240));
    REQUIRE(r.rejected.size() == 3);
    CHECK(r.rejected[0].line == 4);
    CHECK(r.rejected[0].reason == "not a body cuboid");
    CHECK(r.rejected[1].line == 5);
    CHECK(r.rejected[2].line == 6);

    const auto e = temp_file("himane-empty", "");
    CHECK(himane_import(e).bricks.empty());
    CHECK(himane_import(e).rejected.empty());
    CHECK_THROWS_AS(himane_import("/nonexistent/himane"), std::runtime_error);
    std::filesystem::remove(p);
    std::filesystem::remove(e);
}

TEST_CASE("classify") {
    FamilyTables t;
    t.add(FamilyTag::Saunderson, saunderson_generate(50));
    t.add(FamilyTag::Lenhart, lenhart_generate(50));
    t.add(FamilyTag::HimaneT1, std::vector<EdgeTriple>{E(44, 117, 240)});
    CHECK(classify(88, 234, 480, t) == std::set<FamilyTag>{FamilyTag::Saunderson, FamilyTag::HimaneT1});
    CHECK(classify(60480, 282568, 155610, t) == std::set<FamilyTag>{FamilyTag::Lenhart});
    // the (55,48,44,9) brick is in neither table
    CHECK(classify(1337455, 9794400, 571032, t) == std::set<FamilyTag>{FamilyTag::Sporadic});
}

}  // TEST_SUITE
