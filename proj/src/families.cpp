#include "brickforge/families.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace brickforge::families {
namespace {

bool is_square(const Int& v) { return nt::is_perfect_square(v).has_value(); }

void emit(std::vector<GeneratedBrick>& out, const Int& x, const Int& y, const Int& z, std::array<Int, 3> gen) {
    if (x <= 0 || y <= 0 || z <= 0) return;
    if (!is_body_cuboid(x, y, z))
        throw std::logic_error("family generator produced a non-cuboid at (" + gen[0].get_str() + "," +
                               gen[1].get_str() + "," + gen[2].get_str() + ")");
    out.push_back({primitive_sorted(x, y, z), std::move(gen)});
}

}  // namespace

std::string to_string(FamilyTag t) {
    switch (t) {
        case FamilyTag::Saunderson: return "Saunderson";
        case FamilyTag::Lenhart: return "Lenhart";
        case FamilyTag::HimaneT1: return "Himane-T1";
        case FamilyTag::HimaneT2: return "Himane-T2";
        case FamilyTag::HimaneT3: return "Himane-T3";
        case FamilyTag::Euler: return "Euler";
        case FamilyTag::Sporadic: return "Sporadic";
    }
    return "?";
}

std::optional<FamilyTag> parse_tag(const std::string& s) {
    for (auto t : {FamilyTag::Saunderson, FamilyTag::Lenhart, FamilyTag::HimaneT1, FamilyTag::HimaneT2,
                   FamilyTag::HimaneT3, FamilyTag::Euler, FamilyTag::Sporadic})
        if (to_string(t) == s) return t;
    return std::nullopt;
}

EdgeTriple primitive_sorted(const Int& x, const Int& y, const Int& z) {
    const Int g = gcd(gcd(x, y), z);
    if (g == 0) throw std::invalid_argument("primitive_sorted: all edges zero");
    EdgeTriple e{abs(x) / g, abs(y) / g, abs(z) / g};
    std::sort(e.begin(), e.end());
    return e;
}

bool is_body_cuboid(const Int& x, const Int& y, const Int& z) {
    if (x <= 0 || y <= 0 || z <= 0) return false;
    return is_square(x * x + y * y) && is_square(x * x + z * z) && is_square(y * y + z * z);
}

std::vector<GeneratedBrick> saunderson_generate(const Int& max_g) {
    std::vector<GeneratedBrick> out;
    for (Int p = 2; p * p < max_g; ++p)
        for (Int q = 1; q < p; ++q) {
            const Int w = p * p + q * q;
            if (w > max_g) break;
            if ((p - q) % 2 == 0 || gcd(p, q) != 1) continue;
            const Int l1 = p * p - q * q, l2 = 2 * p * q;
            for (const auto& [u, v] : {std::pair{l1, l2}, std::pair{l2, l1}})
                emit(out, u * (3 * v * v - u * u), v * (3 * u * u - v * v), 4 * u * v * w, {u, v, w});
        }
    return out;
}

std::vector<GeneratedBrick> lenhart_generate(const Int& max_w) {
    std::vector<GeneratedBrick> out;
    for (Int w = 1; w <= max_w; ++w) {
        const Int target = 5 * w * w;
        for (Int u = 1; u * u < target; ++u) {
            const auto v = nt::is_perfect_square(target - u * u);
            if (!v || *v == 0 || u == w || *v == w) continue;
            const Int v2w2 = *v * *v - w * w;
            emit(out, (u * u - w * w) * v2w2, 4 * u * *v * w * w, 2 * u * w * v2w2, {u, *v, w});
        }
    }
    return out;
}

ImportResult himane_import(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    ImportResult res;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::vector<std::string> tok;
        for (std::string t; ss >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok.size() != 3) {
            res.rejected.push_back({lineno, "expected 3 fields, got " + std::to_string(tok.size())});
            continue;
        }
        std::array<Int, 3> e;
        bool ok = true;
        for (int i = 0; i < 3; ++i)
            if (tok[i].find_first_not_of("0123456789") != std::string::npos || e[i].set_str(tok[i], 10) != 0) ok = false;
        if (!ok) {
            res.rejected.push_back({lineno, "malformed integer"});
            continue;
        }
        if (!is_body_cuboid(e[0], e[1], e[2])) {
            res.rejected.push_back({lineno, "not a body cuboid"});
            continue;
        }
        res.bricks.push_back(primitive_sorted(e[0], e[1], e[2]));
    }
    return res;
}

void FamilyTables::add(FamilyTag tag, const std::vector<GeneratedBrick>& bricks) {
    auto& s = tables[tag];
    for (const auto& b : bricks) s.insert(b.edges);
}

void FamilyTables::add(FamilyTag tag, const std::vector<EdgeTriple>& bricks) {
    tables[tag].insert(bricks.begin(), bricks.end());
}

std::set<FamilyTag> classify(const Int& x, const Int& y, const Int& z, const FamilyTables& t) {
    const auto key = primitive_sorted(x, y, z);
    std::set<FamilyTag> tags;
    for (const auto& [tag, table] : t.tables)
        if (tag != FamilyTag::Sporadic && table.count(key)) tags.insert(tag);
    if (tags.empty()) tags.insert(FamilyTag::Sporadic);
    return tags;
}

}  // namespace brickforge::families
