#pragma once

// Closed-form body cuboid families and tagging of bricks against them.

#include "brickforge/ntkernel.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace brickforge::families {

enum class FamilyTag { Saunderson, Lenhart, HimaneT1, HimaneT2, HimaneT3, Euler, Sporadic };

// "Saunderson", "Lenhart", "Himane-T1", "Himane-T2", "Himane-T3", "Euler", "Sporadic"
std::string to_string(FamilyTag t);
std::optional<FamilyTag> parse_tag(const std::string& s);

// Edges divided by their gcd and sorted ascending.
using EdgeTriple = std::array<Int, 3>;
EdgeTriple primitive_sorted(const Int& x, const Int& y, const Int& z);

// Positive edges with all three face diagonals integral.
bool is_body_cuboid(const Int& x, const Int& y, const Int& z);

struct GeneratedBrick {
    EdgeTriple edges;
    std::array<Int, 3> generator;  // (u, v, w)
};

// u(3v^2 - u^2), v(3u^2 - v^2), 4uvw over primitive Pythagorean (u, v, w)
// with w <= max_g, both leg orders. Non-positive edges are skipped.
std::vector<GeneratedBrick> saunderson_generate(const Int& max_g);

// (u^2 - w^2)(v^2 - w^2), 4uvw^2, 2uw(v^2 - w^2) over positive solutions of
// u^2 + v^2 = 5 w^2 with w <= max_w. Degenerate and negative edges skipped.
std::vector<GeneratedBrick> lenhart_generate(const Int& max_w);

struct ImportRejection {
    std::size_t line = 0;
    std::string reason;
};

struct ImportResult {
    std::vector<EdgeTriple> bricks;
    std::vector<ImportRejection> rejected;
};

// One edge triple per line, separated by whitespace or commas; '#' starts a
// comment. std::runtime_error if the file cannot be read.
ImportResult himane_import(const std::filesystem::path& path);

struct FamilyTables {
    std::map<FamilyTag, std::set<EdgeTriple>> tables;
    void add(FamilyTag tag, const std::vector<GeneratedBrick>& bricks);
    void add(FamilyTag tag, const std::vector<EdgeTriple>& bricks);
};

// Tags whose table holds the primitive sorted edges; {Sporadic} if none.
std::set<FamilyTag> classify(const Int& x, const Int& y, const Int& z, const FamilyTables& t);

}  // namespace brickforge::families
