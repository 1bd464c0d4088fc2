#include "brickforge/mw_generator.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace brickforge::mw {
namespace {

std::size_t digits(const Rat& q) {
    return std::max(mpz_sizeinbase(q.get_num_mpz_t(), 10), mpz_sizeinbase(q.get_den_mpz_t(), 10));
}

bool too_big(const CurvePoint& P, std::size_t cap) {
    return !P.infinity && (digits(P.x) > cap || digits(P.y) > cap);
}

// M square, admissible, and the three face diagonals exact.
bool certify(const MasterTuple& t) {
    if (!is_admissible(t.a(), t.b(), t.m(), t.n())) return false;
    if (!is_master_hit(t)) return false;
    const Brick br = edges(t);
    if (!br.dyz) return false;
    return br.dxy * br.dxy == br.x * br.x + br.y * br.y && br.dxz * br.dxz == br.x * br.x + br.z * br.z &&
           *br.dyz * *br.dyz == br.y * br.y + br.z * br.z;
}

Rat parse_rational(const std::string& tok) {
    Rat q;
    if (tok.empty() || q.set_str(tok, 10) != 0) throw std::invalid_argument("not a rational: '" + tok + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + tok + "'");
    q.canonicalize();
    return q;
}

void add_unique(const FibreCurve& c, std::vector<CurvePoint>& pts, const CurvePoint& P) {
    if (P.infinity || ecq::small_order(c, P) != 0) return;
    if (std::find(pts.begin(), pts.end(), P) != pts.end()) return;
    pts.push_back(P);
}

}  // namespace

std::string to_string(SeedSource s) {
    switch (s) {
        case SeedSource::database_lift: return "database_lift";
        case SeedSource::naive_search: return "naive_search";
        case SeedSource::imported: return "imported";
    }
    return "?";
}

std::vector<EuclidPair> naive_quartic_search(const FibreCurve& c, const Int& height_bound) {
    if (height_bound < 2) throw std::invalid_argument("naive_quartic_search: height bound must be >= 2");
    std::vector<EuclidPair> out;
    const EuclidPair mn{c.m, c.n};
    for (Int a = 2; a <= height_bound; ++a)
        for (Int b = 1 + (a % 2 == 1 ? 1 : 0); b < a; b += 2) {
            if (gcd(a, b) != 1) continue;
            if (is_master_hit(MasterTuple{{a, b}, mn})) out.push_back({a, b});
        }
    return out;
}

GeneratorSet seeds_from_hits(const FibreCurve& c, const std::vector<EuclidPair>& hits, SeedSource source) {
    GeneratorSet g{c, {}, source};
    for (const auto& h : hits) add_unique(c, g.points, fibration::point_from_hit(c, h));
    return g;
}

GeneratorSet seeds_from_points(const FibreCurve& c, const std::vector<CurvePoint>& pts, SeedSource source) {
    GeneratorSet g{c, {}, source};
    for (const auto& P : pts) {
        if (!fibration::on_curve(c, P))
            throw std::invalid_argument("seed " + P.to_string() + " is not on " + c.provenance());
        add_unique(c, g.points, P);
    }
    return g;
}

std::vector<std::vector<int>> coefficient_vectors(std::size_t r, unsigned K) {
    std::vector<std::vector<int>> out;
    if (r == 0) return out;
    const int k = static_cast<int>(K);
    for (int h = 1; h <= k; ++h) {
        std::vector<int> v(r, -h);
        while (true) {
            const auto first = std::find_if(v.begin(), v.end(), [](int x) { return x != 0; });
            const bool graded = std::any_of(v.begin(), v.end(), [h](int x) { return x == h || x == -h; });
            if (first != v.end() && *first > 0 && graded) out.push_back(v);
            std::size_t i = r;
            while (i > 0 && v[i - 1] == h) v[--i] = -h;
            if (i == 0) break;
            ++v[i - 1];
        }
    }
    return out;
}

MwRun enumerate_and_certify(const GeneratorSet& g, unsigned K, const ecq::TorsionGroup& torsion,
                            const MwOptions& opt) {
    if (K < 1) throw std::invalid_argument("enumerate_and_certify: K must be >= 1");
    const FibreCurve& c = g.fibre;
    MwRun run;
    run.fibre = c;
    run.K = K;
    run.torsion_reps = torsion.points;
    run.source = g.source;
    run.seed_count = g.points.size();
    if (g.points.empty()) return run;

    const std::vector<CurvePoint> tors =
        torsion.points.empty() ? std::vector<CurvePoint>{CurvePoint::at_infinity()} : torsion.points;
    const int k = static_cast<int>(K);

    // multiples[i][j] = (j - K) P_i
    std::vector<std::vector<CurvePoint>> multiples(g.points.size());
    for (std::size_t i = 0; i < g.points.size(); ++i) {
        auto& row = multiples[i];
        row.resize(2 * K + 1);
        row[K] = CurvePoint::at_infinity();
        for (int j = 1; j <= k; ++j) {
            row[K + j] = ecq::add(c, row[K + j - 1], g.points[i]);
            row[K - j] = ecq::neg(c, row[K + j]);
        }
    }

    const auto vectors = coefficient_vectors(g.points.size(), K);
    run.stats.vectors = vectors.size();

    struct Local {
        MwStats stats;
        std::vector<MasterTuple> hits;
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(vectors.size())));
    std::vector<Local> locals(jobs);
    std::atomic<std::size_t> next{0};

    auto worker = [&](Local& L) {
        for (std::size_t idx; (idx = next.fetch_add(1)) < vectors.size();) {
            const auto& v = vectors[idx];
            CurvePoint R = CurvePoint::at_infinity();
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i] != 0) R = ecq::add(c, R, multiples[i][K + v[i]]);
            for (const auto& T : tors) {
                ++L.stats.candidates;
                const CurvePoint S = ecq::add(c, R, T);
                if (too_big(S, opt.digit_cap)) {
                    ++L.stats.digit_cap_skipped;
                    continue;
                }
                const auto ab = fibration::lift_point(c, S);
                if (!ab) continue;
                ++L.stats.lifted;
                const MasterTuple t{*ab, {c.m, c.n}};
                if (!certify(t)) continue;
                ++L.stats.certified;
                L.hits.push_back(sigma_canonical(t));
            }
        }
    };

    if (jobs == 1) {
        worker(locals[0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker, std::ref(locals[j]));
        for (auto& th : pool) th.join();
    }

    std::set<MasterTuple> uniq;
    for (const auto& L : locals) {
        run.stats.candidates += L.stats.candidates;
        run.stats.lifted += L.stats.lifted;
        run.stats.certified += L.stats.certified;
        run.stats.digit_cap_skipped += L.stats.digit_cap_skipped;
        uniq.insert(L.hits.begin(), L.hits.end());
    }
    run.stats.duplicates = run.stats.certified - uniq.size();
    run.outputs.assign(uniq.begin(), uniq.end());
    return run;
}

GeneratorSet parse_seed_file(const FibreCurve& c, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open seed file " + path.string());
    std::vector<CurvePoint> pts;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        const auto fail = [&](const std::string& why) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + why);
        };
        std::istringstream ss(line);
        std::string a, b, extra;
        if (!(ss >> a) || a[0] == '#') continue;
        if (!(ss >> b) || (ss >> extra)) fail("expected two fields");
        try {
            if (a == "t") {
                const Rat t = parse_rational(b);
                if (sgn(t) == 0) fail("t = 0 maps to the point at infinity");
                const auto s = nt::is_square_rational(fibration::quartic_rhs(c, t));
                if (!s) fail("quartic value at t = " + t.get_str() + " is not a rational square");
                pts.push_back(fibration::phi(c, t, *s));
            } else {
                const auto P = CurvePoint::affine(parse_rational(a), parse_rational(b));
                if (!fibration::on_curve(c, P)) fail("point " + P.to_string() + " is not on " + c.provenance());
                pts.push_back(P);
            }
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    return seeds_from_points(c, pts, SeedSource::imported);
}

}  // namespace brickforge::mw
