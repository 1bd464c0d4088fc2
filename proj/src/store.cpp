#include "brickforge/store.hpp"

#include "brickforge/sha256.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace brickforge::store {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

template <class It>
std::string join(It first, It last, const std::string& sep) {
    std::string out;
    for (It it = first; it != last; ++it) {
        if (it != first) out += sep;
        out += *it;
    }
    return out;
}

Int parse_int(const std::string& s) {
    Int v;
    if (s.empty() || v.set_str(s, 10) != 0) throw std::invalid_argument("bad integer '" + s + "'");
    return v;
}

Rat parse_rat(const std::string& s) {
    Rat q;
    if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) throw std::invalid_argument("bad rational '" + s + "'");
    q.canonicalize();
    return q;
}

std::uint64_t parse_u64(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad unsigned '" + s + "'");
    return std::stoull(s);
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
    out.close();
    if (!out) throw std::runtime_error("write failed on " + p.string());
}

// Data lines of a CSV with the expected header; empty when the file is absent.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_csv(const fs::path& p, const std::string& header) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    if (!fs::exists(p)) return rows;
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw std::runtime_error(p.string() + ":1: expected header '" + header + "'");
    const std::size_t ncols = split(header, ',').size();
    for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
        if (line.empty()) continue;
        auto cols = split(line, ',');
        if (cols.size() != ncols)
            throw std::runtime_error(p.string() + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(ncols) + " fields");
        rows.emplace_back(lineno, std::move(cols));
    }
    return rows;
}

const std::string kHitsHeader = "id,a,b,m,n,x,y,z,g_scale,provenance,family_tags,f1_status";
const std::string kFactorsHeader = "hit_id,prime,exponent,is_residual";
const std::string kFibresHeader = "m,n,torsion_d1,torsion_d2,rank_lb,generators";

bool same(const HitRecord& l, const HitRecord& r) {
    return l.id == r.id && l.t == r.t && l.x == r.x && l.y == r.y && l.z == r.z && l.g_scale == r.g_scale &&
           l.x_prim == r.x_prim && l.y_prim == r.y_prim && l.z_prim == r.z_prim && l.provenance == r.provenance &&
           l.family_tags == r.family_tags && l.f1_status == r.f1_status;
}

bool same(const nt::Factorization& l, const nt::Factorization& r) {
    return l.factors == r.factors && l.residual == r.residual && l.status == r.status;
}

bool same(const FibreRow& l, const FibreRow& r) {
    return l.m == r.m && l.n == r.n && l.torsion_d1 == r.torsion_d1 && l.torsion_d2 == r.torsion_d2 &&
           l.rank_lb == r.rank_lb && l.generators == r.generators;
}

}  // namespace

std::string to_string(F1Status s) {
    switch (s) {
        case F1Status::none: return "none";
        case F1Status::partial: return "partial";
        case F1Status::full: return "full";
    }
    return "?";
}

std::optional<F1Status> parse_f1_status(const std::string& s) {
    if (s == "none") return F1Status::none;
    if (s == "partial") return F1Status::partial;
    if (s == "full") return F1Status::full;
    return std::nullopt;
}

HitRecord derive_record(const MasterTuple& t) {
    HitRecord r;
    r.t = t;
    const Brick b = edges(t);
    r.x = b.x;
    r.y = b.y;
    r.z = b.z;
    r.g_scale = gcd(gcd(b.x, b.y), b.z);
    r.x_prim = b.x / r.g_scale;
    r.y_prim = b.y / r.g_scale;
    r.z_prim = b.z / r.g_scale;
    return r;
}

std::size_t Store::pos(std::uint64_t id) const {
    auto it = std::lower_bound(hits_.begin(), hits_.end(), id, [](const HitRecord& h, std::uint64_t v) { return h.id < v; });
    if (it == hits_.end() || it->id != id) throw std::out_of_range("no hit with id " + std::to_string(id));
    return static_cast<std::size_t>(it - hits_.begin());
}

InsertResult Store::insert_hit(const MasterTuple& t, const std::string& provenance) {
    if (provenance.empty() || provenance.find_first_of(",\r\n") != std::string::npos)
        throw std::invalid_argument("provenance must be nonempty without commas or line breaks");
    if (auto adm = is_admissible(t.a(), t.b(), t.m(), t.n()); !adm)
        throw std::invalid_argument(t.to_string() + " is not admissible: " + adm.reason);
    if (!is_master_hit(t)) throw std::invalid_argument(t.to_string() + " is not a master hit");
    const MasterTuple c = sigma_canonical(t);
    if (auto it = index_.find(c); it != index_.end()) return {it->second, false};

    HitRecord r = derive_record(c);
    r.id = next_id_;
    r.provenance = provenance;
    raw_append(std::move(r));
    return {hits_.back().id, true};
}

const HitRecord* Store::find(std::uint64_t id) const {
    try {
        return &hits_[pos(id)];
    } catch (const std::out_of_range&) {
        return nullptr;
    }
}

std::optional<std::uint64_t> Store::find_tuple(const MasterTuple& t) const {
    if (auto it = index_.find(sigma_canonical(t)); it != index_.end()) return it->second;
    return std::nullopt;
}

void Store::set_factorization(std::uint64_t id, const nt::Factorization& f) {
    const HitRecord& h = hits_[pos(id)];
    if (f.product() != brickforge::f1(h.t))
        throw std::logic_error("factorization of hit " + std::to_string(id) + " does not multiply back to f1");
    raw_set_factorization(id, f);
}

std::optional<nt::Factorization> Store::factorization(std::uint64_t id) const {
    if (auto it = factors_.find(id); it != factors_.end()) return it->second;
    return std::nullopt;
}

std::vector<FactorRow> Store::factor_rows() const {
    std::vector<FactorRow> rows;
    for (const auto& [id, f] : factors_) {
        for (const auto& pp : f.factors) rows.push_back({id, pp.prime, pp.exponent, false});
        if (f.residual != 1) rows.push_back({id, f.residual, 1, true});
    }
    return rows;
}

void Store::set_family_tags(std::uint64_t id, std::set<std::string> tags) {
    hits_[pos(id)].family_tags = std::move(tags);
}

void Store::upsert_fibre(FibreRow row) {
    auto key = std::make_pair(row.m, row.n);
    fibres_[key] = std::move(row);
}

HitRecord& Store::raw(std::uint64_t id) { return hits_[pos(id)]; }

void Store::raw_append(HitRecord r) {
    if (r.id < next_id_ && !hits_.empty())
        throw std::invalid_argument("hit ids must increase; got " + std::to_string(r.id));
    next_id_ = r.id + 1;
    index_.emplace(sigma_canonical(r.t), r.id);
    hits_.push_back(std::move(r));
}

void Store::raw_set_factorization(std::uint64_t id, nt::Factorization f) {
    HitRecord& h = hits_[pos(id)];
    h.f1_status = f.is_full() ? F1Status::full : F1Status::partial;
    factors_[id] = std::move(f);
}

bool operator==(const Store& l, const Store& r) {
    if (l.hits_.size() != r.hits_.size() || l.factors_.size() != r.factors_.size() ||
        l.fibres_.size() != r.fibres_.size())
        return false;
    for (std::size_t i = 0; i < l.hits_.size(); ++i)
        if (!same(l.hits_[i], r.hits_[i])) return false;
    for (auto a = l.factors_.begin(), b = r.factors_.begin(); a != l.factors_.end(); ++a, ++b)
        if (a->first != b->first || !same(a->second, b->second)) return false;
    for (auto a = l.fibres_.begin(), b = r.fibres_.begin(); a != l.fibres_.end(); ++a, ++b)
        if (!same(a->second, b->second)) return false;
    return true;
}

std::vector<Violation> validate_consistency(const Store& s) {
    std::vector<Violation> out;
    std::set<MasterTuple> seen;
    for (const auto& h : s.hits()) {
        auto bad = [&](const std::string& what) { out.push_back({h.id, what}); };
        const MasterTuple& t = h.t;
        if (auto adm = is_admissible(t.a(), t.b(), t.m(), t.n()); !adm) {
            bad("inadmissible: " + adm.reason);
            continue;
        }
        if (!is_master_hit(t)) bad("M is not a square");
        if (sigma_canonical(t) != t) bad("tuple not sigma-canonical");
        if (!seen.insert(sigma_canonical(t)).second) bad("duplicate sigma-orbit");
        const HitRecord d = derive_record(t);
        if (h.x != d.x) bad("x != U1 U2");
        if (h.y != d.y) bad("y != V1 U2");
        if (h.z != d.z) bad("z != U1 V2");
        if (h.g_scale != gcd(gcd(h.x, h.y), h.z)) bad("g_scale != gcd(x, y, z)");
        if (h.g_scale != 0 && (h.x_prim * h.g_scale != h.x || h.y_prim * h.g_scale != h.y || h.z_prim * h.g_scale != h.z))
            bad("primitive edges != edges / g_scale");
        const auto f = s.factorization(h.id);
        if (h.f1_status == F1Status::none && f) bad("factor rows present with f1_status none");
        if (h.f1_status != F1Status::none) {
            if (!f) {
                bad("f1_status " + to_string(h.f1_status) + " without factor rows");
            } else {
                if (f->product() != brickforge::f1(t)) bad("factor rows do not multiply back to f1");
                if ((h.f1_status == F1Status::full) != (f->residual == 1)) bad("f1_status disagrees with residual");
            }
        }
    }
    return out;
}

std::vector<ManifestEntry> export_csv(const Store& s, const std::filesystem::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    std::ostringstream hits;
    hits << kHitsHeader << '\n';
    for (const auto& h : s.hits()) {
        hits << h.id << ',' << h.t.a() << ',' << h.t.b() << ',' << h.t.m() << ',' << h.t.n() << ',' << h.x << ','
             << h.y << ',' << h.z << ',' << h.g_scale << ',' << h.provenance << ','
             << join(h.family_tags.begin(), h.family_tags.end(), ";") << ',' << to_string(h.f1_status) << '\n';
    }

    std::ostringstream factors;
    factors << kFactorsHeader << '\n';
    for (const auto& r : s.factor_rows())
        factors << r.hit_id << ',' << r.prime << ',' << r.exponent << ',' << (r.is_residual ? 1 : 0) << '\n';

    std::ostringstream fibres;
    fibres << kFibresHeader << '\n';
    for (const auto& [key, f] : s.fibres()) {
        std::vector<std::string> pts;
        for (const auto& P : f.generators) pts.push_back(P.x.get_str() + ":" + P.y.get_str());
        fibres << f.m << ',' << f.n << ',' << f.torsion_d1 << ',' << f.torsion_d2 << ','
               << (f.rank_lb ? std::to_string(*f.rank_lb) : "") << ',' << join(pts.begin(), pts.end(), ";") << '\n';
    }

    const std::vector<std::pair<std::string, std::string>> files{
        {kFactorsFile, factors.str()}, {kFibresFile, fibres.str()}, {kHitsFile, hits.str()}};
    std::vector<ManifestEntry> manifest;
    std::string mtext;
    for (const auto& [name, content] : files) {
        write_file(dir / name, content);
        manifest.push_back({name, sha256_hex(content)});
        mtext += manifest.back().sha256 + "  " + name + "\n";
    }
    write_file(dir / kManifestFile, mtext);
    return manifest;
}

Store import_csv(const std::filesystem::path& dir) {
    Store s;
    auto where = [](const fs::path& p, std::size_t line) { return p.string() + ":" + std::to_string(line) + ": "; };

    const fs::path hp = dir / kHitsFile;
    for (const auto& [line, c] : read_csv(hp, kHitsHeader)) {
        try {
            HitRecord r;
            r.id = parse_u64(c[0]);
            r.t = MasterTuple{{parse_int(c[1]), parse_int(c[2])}, {parse_int(c[3]), parse_int(c[4])}};
            r.x = parse_int(c[5]);
            r.y = parse_int(c[6]);
            r.z = parse_int(c[7]);
            r.g_scale = parse_int(c[8]);
            if (r.g_scale != 0) {
                r.x_prim = r.x / r.g_scale;
                r.y_prim = r.y / r.g_scale;
                r.z_prim = r.z / r.g_scale;
            }
            r.provenance = c[9];
            if (!c[10].empty())
                for (auto& tag : split(c[10], ';')) r.family_tags.insert(tag);
            auto st = parse_f1_status(c[11]);
            if (!st) throw std::invalid_argument("bad f1_status '" + c[11] + "'");
            r.f1_status = *st;
            s.raw_append(std::move(r));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(where(hp, line) + e.what());
        }
    }

    const fs::path fp = dir / kFactorsFile;
    std::map<std::uint64_t, nt::Factorization> facts;
    for (const auto& [line, c] : read_csv(fp, kFactorsHeader)) {
        try {
            const std::uint64_t id = parse_u64(c[0]);
            if (!s.find(id)) throw std::invalid_argument("unknown hit_id " + c[0]);
            auto& f = facts[id];
            if (c[3] == "1") {
                f.residual = parse_int(c[1]);
            } else if (c[3] == "0") {
                f.factors.push_back({parse_int(c[1]), static_cast<unsigned>(parse_u64(c[2]))});
            } else {
                throw std::invalid_argument("is_residual must be 0 or 1");
            }
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(where(fp, line) + e.what());
        }
    }
    for (auto& [id, f] : facts) {
        const F1Status st = s.find(id)->f1_status;
        f.status = st == F1Status::full ? nt::FactorStatus::full : nt::FactorStatus::partial;
        s.raw_set_factorization(id, std::move(f));
        s.raw(id).f1_status = st;
    }

    const fs::path gp = dir / kFibresFile;
    for (const auto& [line, c] : read_csv(gp, kFibresHeader)) {
        try {
            FibreRow f;
            f.m = parse_int(c[0]);
            f.n = parse_int(c[1]);
            f.torsion_d1 = static_cast<unsigned>(parse_u64(c[2]));
            f.torsion_d2 = static_cast<unsigned>(parse_u64(c[3]));
            if (!c[4].empty()) f.rank_lb = static_cast<unsigned>(parse_u64(c[4]));
            if (!c[5].empty())
                for (const auto& pt : split(c[5], ';')) {
                    const auto xy = split(pt, ':');
                    if (xy.size() != 2) throw std::invalid_argument("bad point '" + pt + "'");
                    f.generators.push_back(CurvePoint::affine(parse_rat(xy[0]), parse_rat(xy[1])));
                }
            s.upsert_fibre(std::move(f));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(where(gp, line) + e.what());
        }
    }
    return s;
}

std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
    std::ifstream in(dir / kManifestFile);
    if (!in) throw std::runtime_error("cannot read " + (dir / kManifestFile).string());
    std::vector<std::string> bad;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto sp = line.find("  ");
        if (sp == std::string::npos) throw std::runtime_error("malformed manifest line '" + line + "'");
        const std::string digest = line.substr(0, sp), name = line.substr(sp + 2);
        if (!fs::exists(dir / name) || sha256_file(dir / name) != digest) bad.push_back(name);
    }
    return bad;
}

}  // namespace brickforge::store
