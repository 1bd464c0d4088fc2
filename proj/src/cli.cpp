#include "brickforge/cli.hpp"

#include "brickforge/blocker_lab.hpp"
#include "brickforge/ecq.hpp"
#include "brickforge/families.hpp"
#include "brickforge/fibration.hpp"
#include "brickforge/mw_generator.hpp"
#include "brickforge/store.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

namespace brickforge {
namespace {

namespace fs = std::filesystem;
using store::F1Status;
using store::Store;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// fn(i) for i in [0, n) on up to `jobs` threads, results in index order.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, unsigned jobs, F fn) {
    std::vector<R> out(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex fail_mu;
    auto work = [&] {
        try {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) out[i] = fn(i);
        } catch (...) {
            std::lock_guard lk(fail_mu);
            if (!failure) failure = std::current_exception();
            next = n;
        }
    };
    const unsigned w = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    if (w <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < w; ++j) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

Int parse_int(const std::string& s, const char* what) {
    Int v;
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || v.set_str(s, 10) != 0)
        throw UsageError(std::string(what) + ": expected a non-negative integer, got '" + s + "'");
    return v;
}

struct Options {
    std::string db;
    unsigned jobs = 1;
    double budget = 60.0;

    std::string m, n, a, b;
    unsigned K = 1;
    std::string seed_height;
    std::string seeds;
    bool db_lift = false;
    std::size_t digit_cap = 10'000;

    long saunderson_max = 500;
    long lenhart_max = 300;
    std::string himane_t1, himane_t2, himane_t3;

    std::string what;
    std::string provenance;
};

class Cli {
public:
    Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int verify_theorem();
    int verify_perfect();
    int verify_consistency();
    int verify_single_blocker();
    int verify_e1();
    int factorize();
    int mw_run();
    int families(bool build);
    int report();
    int add();

    Options o;

private:
    std::ostream& out_;
    std::ostream& err_;

    fs::path db_path() const {
        if (o.db.empty()) throw UsageError("no store given; pass --db DIR or set BRICKFORGE_DB");
        return o.db;
    }
    Store load(bool must_exist) const {
        const fs::path p = db_path();
        if (must_exist && !fs::is_directory(p)) throw std::runtime_error("store directory " + p.string() + " not found");
        return store::import_csv(p);
    }
    void save(const Store& s) const { store::export_csv(s, db_path()); }

    families::FamilyTables build_tables() const;
};

int Cli::verify_theorem() {
    const Store s = load(true);
    struct Row {
        bool skipped = true;
        blocker::Verdict v = blocker::Verdict::violated;
        std::string note;
    };
    const auto& hits = s.hits();
    auto rows = parallel_map<Row>(hits.size(), o.jobs, [&](std::size_t i) {
        Row r;
        const auto f = s.factorization(hits[i].id);
        if (hits[i].f1_status == F1Status::none || !f) return r;
        r.skipped = false;
        try {
            r.v = blocker::verify_blocker_conjecture(hits[i].t, *f).verdict;
        } catch (const std::invalid_argument& e) {
            r.note = e.what();
        }
        return r;
    });
    std::map<blocker::Verdict, std::size_t> count;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].skipped) {
            ++skipped;
            continue;
        }
        ++count[rows[i].v];
        if (rows[i].v == blocker::Verdict::violated)
            out_ << "VIOLATION id=" << hits[i].id << " tuple=" << hits[i].t.to_string()
                 << (rows[i].note.empty() ? "" : " (" + rows[i].note + ")") << '\n';
    }
    out_ << "theorem: verified=" << count[blocker::Verdict::verified]
         << " violated=" << count[blocker::Verdict::violated]
         << " undecidable_partial=" << count[blocker::Verdict::undecidable_partial] << " skipped=" << skipped << '\n';
    return count[blocker::Verdict::violated] == 0 ? kExitOk : kExitViolation;
}

int Cli::verify_perfect() {
    const Store s = load(true);
    std::size_t found = 0;
    for (const auto& h : s.hits()) {
        const Int sum = h.x * h.x + h.y * h.y + h.z * h.z;
        const Int r = nt::isqrt(sum);
        bool perfect = r * r == sum;
        if (is_admissible(h.t.a(), h.t.b(), h.t.m(), h.t.n()) && is_perfect_cuboid(h.t)) perfect = true;
        if (perfect) {
            ++found;
            out_ << "PERFECT CUBOID id=" << h.id << " edges=(" << h.x << "," << h.y << "," << h.z << ")\n";
        }
    }
    out_ << "perfect: checked=" << s.hits().size() << " found=" << found << '\n';
    return found == 0 ? kExitOk : kExitViolation;
}

int Cli::verify_consistency() {
    const Store s = load(true);
    const auto v = store::validate_consistency(s);
    for (const auto& x : v) out_ << "VIOLATION id=" << x.id << ' ' << x.detail << '\n';
    out_ << "consistency: records=" << s.hits().size() << " violations=" << v.size() << '\n';
    return v.empty() ? kExitOk : kExitViolation;
}

int Cli::verify_single_blocker() {
    const Store s = load(true);
    std::size_t single = 0, ok = 0, failed = 0, skipped = 0;
    for (const auto& h : s.hits()) {
        const auto f = s.factorization(h.id);
        if (h.f1_status != F1Status::full || !f) {
            ++skipped;
            continue;
        }
        if (blocker::blockers(*f).size() != 1) continue;
        ++single;
        bool good = false;
        std::string why;
        try {
            blocker::semiscaled(h.t);
            good = blocker::is_strictly_semiscaled(h.t);
            if (!good) why = "not strictly semi-scaled";
        } catch (const std::logic_error& e) {
            why = e.what();
        }
        if (good) {
            ++ok;
        } else {
            ++failed;
            out_ << "VIOLATION id=" << h.id << " tuple=" << h.t.to_string() << ' ' << why << '\n';
        }
    }
    out_ << "single-blocker: single=" << single << " strictly_semiscaled=" << ok << " failed=" << failed
         << " skipped=" << skipped << '\n';
    return failed == 0 ? kExitOk : kExitViolation;
}

int Cli::verify_e1() {
    const Store s = load(true);
    const auto& hits = s.hits();
    const auto res = parallel_map<char>(hits.size(), o.jobs, [&](std::size_t i) { return char(blocker::verify_E1(hits[i].t)); });
    std::size_t failed = 0;
    for (std::size_t i = 0; i < hits.size(); ++i)
        if (!res[i]) {
            ++failed;
            out_ << "VIOLATION id=" << hits[i].id << " tuple=" << hits[i].t.to_string() << " xi^2+eta^2 is a square\n";
        }
    out_ << "e1: checked=" << hits.size() << " failed=" << failed << '\n';
    return failed == 0 ? kExitOk : kExitViolation;
}

int Cli::factorize() {
    if (o.budget < 0) throw UsageError("--budget must be non-negative");
    Store s = load(true);
    std::vector<std::uint64_t> todo;
    std::size_t already = 0;
    for (const auto& h : s.hits()) {
        if (h.f1_status == F1Status::full)
            ++already;
        else
            todo.push_back(h.id);
    }
    const auto budget = nt::FactorBudget::seconds(o.budget);
    auto results = parallel_map<nt::Factorization>(todo.size(), o.jobs, [&](std::size_t i) {
        return blocker::factor_f1(s.find(todo[i])->t, budget);
    });
    std::size_t full = 0, partial = 0;
    for (std::size_t i = 0; i < todo.size(); ++i) {
        s.set_factorization(todo[i], results[i]);
        if (results[i].is_full()) {
            ++full;
        } else {
            ++partial;
            out_ << "partial id=" << todo[i] << " residual=" << results[i].residual << '\n';
        }
    }
    if (!todo.empty()) save(s);
    out_ << "factorize: attempted=" << todo.size() << " full=" << full << " partial=" << partial
         << " already_full=" << already << '\n';
    return kExitOk;
}

int Cli::mw_run() {
    if (o.K < 1) throw UsageError("--K must be at least 1");
    if (o.seed_height.empty() && o.seeds.empty() && !o.db_lift)
        throw UsageError("mw run needs --seed-height, --seeds or --db-lift");
    const Int m = parse_int(o.m, "--m"), n = parse_int(o.n, "--n");
    if (auto adm = pair_admissibility(m, n); !adm)
        throw UsageError("(" + o.m + "," + o.n + ") is not admissible: " + adm.reason);

    const FibreCurve c = fibration::build_fibre(m, n);
    const auto tors = ecq::torsion_subgroup(c);
    out_ << "fibre " << c.provenance() << " torsion Z/" << tors.d1 << " x Z/" << tors.d2 << " bound=" << tors.order_bound
         << (tors.lower_bound_only ? " (lower bound only)" : "") << '\n';

    const bool use_db = !o.db.empty();
    Store s = use_db ? load(false) : Store{};

    std::vector<CurvePoint> pts;
    mw::SeedSource source = mw::SeedSource::database_lift;
    if (!o.seeds.empty()) {
        auto g = mw::parse_seed_file(c, o.seeds);
        pts.insert(pts.end(), g.points.begin(), g.points.end());
        source = mw::SeedSource::imported;
    }
    if (!o.seed_height.empty()) {
        const Int H = parse_int(o.seed_height, "--seed-height");
        if (H < 2) throw UsageError("--seed-height must be at least 2");
        const auto found = mw::naive_quartic_search(c, H);
        out_ << "naive search to " << H << ": " << found.size() << " hits\n";
        auto g = mw::seeds_from_hits(c, found);
        pts.insert(pts.end(), g.points.begin(), g.points.end());
        if (source != mw::SeedSource::imported) source = mw::SeedSource::naive_search;
    }
    if (o.db_lift) {
        if (!use_db) throw UsageError("--db-lift needs a store");
        std::vector<EuclidPair> lifts;
        for (const auto& h : s.hits()) {
            if (h.t.second == EuclidPair{m, n}) lifts.push_back(h.t.first);
            if (h.t.first == EuclidPair{m, n}) lifts.push_back(h.t.second);
        }
        auto g = mw::seeds_from_hits(c, lifts, mw::SeedSource::database_lift);
        out_ << "database lift: " << g.points.size() << " points\n";
        pts.insert(pts.end(), g.points.begin(), g.points.end());
    }
    const auto gen = mw::seeds_from_points(c, pts, source);
    out_ << "seeds: " << gen.points.size() << " (" << mw::to_string(gen.source) << ")\n";

    const auto run = mw::enumerate_and_certify(gen, o.K, tors, {o.digit_cap, o.jobs});
    const auto& st = run.stats;
    out_ << "K=" << run.K << " vectors=" << st.vectors << " candidates=" << st.candidates << " lifted=" << st.lifted
         << " certified=" << st.certified << " duplicates=" << st.duplicates
         << " digit_cap_skipped=" << st.digit_cap_skipped << '\n';

    std::size_t perfect = 0, inserted = 0;
    for (const auto& t : run.outputs) {
        out_ << "hit " << t.a() << ' ' << t.b() << ' ' << t.m() << ' ' << t.n() << '\n';
        if (is_perfect_cuboid(t)) {
            ++perfect;
            out_ << "PERFECT CUBOID " << t.to_string() << '\n';
        }
        if (use_db && s.insert_hit(t, run.provenance()).inserted) ++inserted;
    }
    out_ << "outputs=" << run.outputs.size() << " perfect=" << perfect;
    if (use_db) {
        out_ << " inserted=" << inserted << " duplicate=" << run.outputs.size() - inserted;
        store::FibreRow row{m, n, tors.d1, tors.d2, std::nullopt, gen.points};
        if (auto it = s.fibres().find({m, n}); it != s.fibres().end()) row.rank_lb = it->second.rank_lb;
        s.upsert_fibre(std::move(row));
        save(s);
    }
    out_ << '\n';
    return perfect == 0 ? kExitOk : kExitViolation;
}

families::FamilyTables Cli::build_tables() const {
    using families::FamilyTag;
    if (o.saunderson_max < 5) throw UsageError("--saunderson-max must be at least 5");
    if (o.lenhart_max < 1) throw UsageError("--lenhart-max must be at least 1");
    families::FamilyTables t;
    t.add(FamilyTag::Saunderson, families::saunderson_generate(o.saunderson_max));
    t.add(FamilyTag::Lenhart, families::lenhart_generate(o.lenhart_max));
    const std::pair<FamilyTag, const std::string*> himane[] = {
        {FamilyTag::HimaneT1, &o.himane_t1}, {FamilyTag::HimaneT2, &o.himane_t2}, {FamilyTag::HimaneT3, &o.himane_t3}};
    for (const auto& [tag, file] : himane) {
        if (file->empty()) continue;
        const auto res = families::himane_import(*file);
        for (const auto& r : res.rejected) err_ << *file << ":" << r.line << ": rejected: " << r.reason << '\n';
        t.add(tag, res.bricks);
    }
    for (const auto& [tag, table] : t.tables) out_ << "table " << families::to_string(tag) << ' ' << table.size() << '\n';
    return t;
}

int Cli::families(bool build) {
    const auto tables = build_tables();
    if (o.db.empty()) {
        if (!build) throw UsageError("families classify needs a store");
        return kExitOk;
    }
    Store s = load(!build);
    if (build) {
        std::size_t inserted = 0;
        for (const auto& e : tables.tables.at(families::FamilyTag::Saunderson))
            for (const auto& t : recover_scaled_master_tuple(e[0], e[1], e[2]))
                if (is_master_hit(t) && s.insert_hit(t, "Saunderson-Generator").inserted) ++inserted;
        out_ << "saunderson hits inserted=" << inserted << '\n';
    }
    std::map<std::string, std::size_t> count;
    bool changed = false;
    for (const auto& h : s.hits()) {
        std::set<std::string> tags;
        for (auto tag : families::classify(h.x_prim, h.y_prim, h.z_prim, tables)) tags.insert(families::to_string(tag));
        for (const auto& tg : tags) ++count[tg];
        if (tags != h.family_tags) {
            s.set_family_tags(h.id, std::move(tags));
            changed = true;
        }
    }
    for (const auto& [tag, k] : count) out_ << "tagged " << tag << ' ' << k << '\n';
    if (changed || build) save(s);
    return kExitOk;
}

int Cli::report() {
    const Store s = load(true);
    if (o.what == "k-distribution") {
        std::map<Int, std::size_t> hist;
        std::size_t skipped = 0, failed = 0;
        for (const auto& h : s.hits()) {
            const auto f = s.factorization(h.id);
            if (h.f1_status != F1Status::full || !f) {
                ++skipped;
                continue;
            }
            try {
                if (auto k = blocker::k_invariant(h.t, *f))
                    ++hist[k->k];
                else
                    ++skipped;
            } catch (const std::logic_error& e) {
                ++failed;
                out_ << "VIOLATION id=" << h.id << ' ' << e.what() << '\n';
            }
        }
        out_ << "canonical_k count\n";
        for (const auto& [k, c] : hist) out_ << k << ' ' << c << '\n';
        out_ << "skipped=" << skipped << '\n';
        return failed == 0 ? kExitOk : kExitViolation;
    }
    if (o.what == "blockers") {
        std::map<std::size_t, std::size_t> hist;
        std::size_t skipped = 0;
        for (const auto& h : s.hits()) {
            const auto f = s.factorization(h.id);
            if (h.f1_status != F1Status::full || !f) {
                ++skipped;
                continue;
            }
            ++hist[blocker::blockers(*f).size()];
        }
        out_ << "blockers count\n";
        for (const auto& [b, c] : hist) out_ << b << ' ' << c << '\n';
        out_ << "skipped=" << skipped << '\n';
        return kExitOk;
    }
    // fibres: a hit lies on the fibre of each of its two pairs
    std::map<std::pair<Int, Int>, std::size_t> hits;
    for (const auto& h : s.hits()) {
        ++hits[{h.t.first.a, h.t.first.b}];
        if (h.t.second != h.t.first) ++hits[{h.t.second.a, h.t.second.b}];
    }
    for (const auto& [key, row] : s.fibres()) hits.try_emplace(key, 0);
    out_ << "m n hits torsion rank_lb\n";
    for (const auto& [key, c] : hits) {
        out_ << key.first << ' ' << key.second << ' ' << c << ' ';
        if (auto it = s.fibres().find(key); it != s.fibres().end()) {
            out_ << it->second.torsion_d1 << 'x' << it->second.torsion_d2 << ' '
                 << (it->second.rank_lb ? std::to_string(*it->second.rank_lb) : "-");
        } else {
            out_ << "- -";
        }
        out_ << '\n';
    }
    return kExitOk;
}

int Cli::add() {
    const MasterTuple t{{parse_int(o.a, "--a"), parse_int(o.b, "--b")}, {parse_int(o.m, "--m"), parse_int(o.n, "--n")}};
    Store s = load(false);
    store::InsertResult r;
    try {
        r = s.insert_hit(t, o.provenance);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    out_ << (r.inserted ? "inserted" : "duplicate") << " id=" << r.id << '\n';
    if (r.inserted) save(s);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"brickforge: master hits, blockers and fibre generators"};
    app.require_subcommand(1);
    Cli cli(out, err);
    Options& o = cli.o;
    int (Cli::*action)() = nullptr;
    bool build = false;

    auto db_opt = [&](CLI::App* sub) {
        sub->add_option("--db", o.db, "store directory")->envname("BRICKFORGE_DB");
    };
    auto jobs_opt = [&](CLI::App* sub) { sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber); };

    auto* verify = app.add_subcommand("verify", "checks over every stored record");
    verify->require_subcommand(1);
    const std::pair<const char*, int (Cli::*)()> checks[] = {{"theorem", &Cli::verify_theorem},
                                                             {"perfect", &Cli::verify_perfect},
                                                             {"consistency", &Cli::verify_consistency},
                                                             {"single-blocker", &Cli::verify_single_blocker},
                                                             {"e1", &Cli::verify_e1}};
    for (const auto& [name, fn] : checks) {
        auto* sub = verify->add_subcommand(name);
        db_opt(sub);
        jobs_opt(sub);
        sub->callback([&action, fn = fn] { action = fn; });
    }

    auto* fz = app.add_subcommand("factorize", "factor f1 of records not yet fully factored");
    db_opt(fz);
    jobs_opt(fz);
    fz->add_option("--budget", o.budget, "seconds per record");
    fz->callback([&] { action = &Cli::factorize; });

    auto* mwc = app.add_subcommand("mw", "Mordell-Weil generator");
    mwc->require_subcommand(1);
    auto* mwr = mwc->add_subcommand("run");
    db_opt(mwr);
    jobs_opt(mwr);
    mwr->add_option("--m", o.m)->required();
    mwr->add_option("--n", o.n)->required();
    mwr->add_option("--K", o.K, "coefficient bound")->required();
    auto* sh = mwr->add_option("--seed-height", o.seed_height, "naive quartic search bound");
    auto* sf = mwr->add_option("--seeds", o.seeds, "seed file");
    sh->excludes(sf);
    mwr->add_flag("--db-lift", o.db_lift, "seed from stored hits on this fibre");
    mwr->add_option("--digit-cap", o.digit_cap, "skip points with longer coordinates");
    mwr->callback([&] { action = &Cli::mw_run; });

    auto* fam = app.add_subcommand("families", "closed-form families and tagging");
    fam->require_subcommand(1);
    for (const char* name : {"build", "classify"}) {
        auto* sub = fam->add_subcommand(name);
        db_opt(sub);
        sub->add_option("--saunderson-max", o.saunderson_max);
        sub->add_option("--lenhart-max", o.lenhart_max);
        sub->add_option("--himane,--himane-t1", o.himane_t1, "Himane table (tag Himane-T1)");
        sub->add_option("--himane-t2", o.himane_t2);
        sub->add_option("--himane-t3", o.himane_t3);
        const bool is_build = std::string(name) == "build";
        sub->callback([&, is_build] {
            build = is_build;
            action = nullptr;
        });
    }

    auto* rep = app.add_subcommand("report", "text tables");
    db_opt(rep);
    rep->add_option("--what", o.what)->required()->check(CLI::IsMember({"k-distribution", "blockers", "fibres"}));
    rep->callback([&] { action = &Cli::report; });

    auto* addc = app.add_subcommand("add", "insert one master hit");
    db_opt(addc);
    addc->add_option("--a", o.a)->required();
    addc->add_option("--b", o.b)->required();
    addc->add_option("--m", o.m)->required();
    addc->add_option("--n", o.n)->required();
    addc->add_option("--provenance", o.provenance)->required();
    addc->callback([&] { action = &Cli::add; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitError;
    }

    try {
        if (action) return (cli.*action)();
        return cli.families(build);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitError;
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace brickforge
