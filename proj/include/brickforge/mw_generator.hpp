#pragma once

// Seeds, bounded combination enumeration and certification of new master
// hits on one fibre.

#include "brickforge/ecq.hpp"
#include "brickforge/fibration.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace brickforge::mw {

enum class SeedSource { database_lift, naive_search, imported };
std::string to_string(SeedSource s);

struct GeneratorSet {
    FibreCurve fibre;
    std::vector<CurvePoint> points;  // on the curve, none of them torsion; not assumed independent
    SeedSource source = SeedSource::naive_search;
};

struct MwStats {
    std::uint64_t vectors = 0;
    std::uint64_t candidates = 0;  // (vector, torsion point) pairs
    std::uint64_t lifted = 0;      // tau a positive square with an admissible pair
    std::uint64_t certified = 0;   // M re-verified as a square
    std::uint64_t duplicates = 0;  // certified but already emitted
    std::uint64_t digit_cap_skipped = 0;
};

struct MwOptions {
    std::size_t digit_cap = 10'000;  // skip points with a coordinate longer than this
    unsigned jobs = 1;
};

struct MwRun {
    FibreCurve fibre;
    unsigned K = 0;
    std::vector<MasterTuple> outputs;  // sigma-canonical, sorted
    MwStats stats;
    std::vector<CurvePoint> torsion_reps;
    SeedSource source = SeedSource::naive_search;
    std::size_t seed_count = 0;

    std::string provenance() const { return fibre.provenance(); }
};

// Admissible (a, b) with a <= height_bound and M(a, b, m, n) square.
// height_bound must be at least 2.
std::vector<EuclidPair> naive_quartic_search(const FibreCurve& c, const Int& height_bound);

// Hits on this fibre mapped through phi. std::invalid_argument for a pair
// that is not a hit; duplicates and torsion images are dropped.
GeneratorSet seeds_from_hits(const FibreCurve& c, const std::vector<EuclidPair>& hits,
                             SeedSource source = SeedSource::naive_search);

// Cubic-side seeds. std::invalid_argument for off-curve points.
GeneratorSet seeds_from_points(const FibreCurve& c, const std::vector<CurvePoint>& pts,
                               SeedSource source = SeedSource::imported);

// Every nonzero coefficient vector in [-K, K]^r whose first nonzero entry
// is positive, ordered by max |c_i| and then lexicographically.
std::vector<std::vector<int>> coefficient_vectors(std::size_t r, unsigned K);

// R = sum c_i P_i + T over the coefficient vectors and all torsion points,
// lifted through tau and certified with exact integer arithmetic. K >= 1.
MwRun enumerate_and_certify(const GeneratorSet& g, unsigned K, const ecq::TorsionGroup& torsion,
                            const MwOptions& opt = {});

// Seed file lines:
//   X_num/X_den Y_num/Y_den     a point on the cubic
//   t a/b                       quartic-side seed, s taken from the quartic
// Blank lines and lines starting with '#' are ignored. std::runtime_error
// names the line on malformed input or a t with non-square quartic value.
GeneratorSet parse_seed_file(const FibreCurve& c, const std::filesystem::path& path);

}  // namespace brickforge::mw
