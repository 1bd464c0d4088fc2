#pragma once

// CSV-backed record store: master hits, f1 factor rows and fibre metadata.
//
// A Store is not synchronized. Worker pools compute values and hand them to
// the one thread that owns the store.

#include "brickforge/curve_point.hpp"
#include "brickforge/master_core.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace brickforge::store {

enum class F1Status { none, partial, full };
std::string to_string(F1Status s);
std::optional<F1Status> parse_f1_status(const std::string& s);

struct HitRecord {
    std::uint64_t id = 0;
    MasterTuple t;  // sigma-canonical
    Int x, y, z;
    Int g_scale;
    Int x_prim, y_prim, z_prim;
    std::string provenance;
    std::set<std::string> family_tags;
    F1Status f1_status = F1Status::none;
};

struct FactorRow {
    std::uint64_t hit_id = 0;
    Int prime;
    unsigned exponent = 0;
    bool is_residual = false;
};

struct FibreRow {
    Int m, n;
    unsigned torsion_d1 = 0;
    unsigned torsion_d2 = 0;
    std::optional<unsigned> rank_lb;  // imported metadata, never computed
    std::vector<CurvePoint> generators;
};

struct InsertResult {
    std::uint64_t id = 0;
    bool inserted = false;  // false: the sigma-orbit was already present under id
};

class Store {
public:
    // Canonicalizes, fills the derived fields and keeps the first
    // provenance seen for an orbit. std::invalid_argument for a non-hit or a
    // provenance containing ',' or a line break.
    InsertResult insert_hit(const MasterTuple& t, const std::string& provenance);

    // Ascending id.
    const std::vector<HitRecord>& hits() const { return hits_; }
    const HitRecord* find(std::uint64_t id) const;
    std::optional<std::uint64_t> find_tuple(const MasterTuple& t) const;

    // std::logic_error unless the factorization multiplies back to f1.
    void set_factorization(std::uint64_t id, const nt::Factorization& f);
    std::optional<nt::Factorization> factorization(std::uint64_t id) const;
    std::vector<FactorRow> factor_rows() const;

    void set_family_tags(std::uint64_t id, std::set<std::string> tags);

    void upsert_fibre(FibreRow row);
    const std::map<std::pair<Int, Int>, FibreRow>& fibres() const { return fibres_; }

    // Unchecked access for import and fault injection.
    HitRecord& raw(std::uint64_t id);
    void raw_append(HitRecord r);
    void raw_set_factorization(std::uint64_t id, nt::Factorization f);

    friend bool operator==(const Store& l, const Store& r);

private:
    std::vector<HitRecord> hits_;
    std::map<MasterTuple, std::uint64_t> index_;
    std::map<std::uint64_t, nt::Factorization> factors_;
    std::map<std::pair<Int, Int>, FibreRow> fibres_;
    std::uint64_t next_id_ = 1;

    std::size_t pos(std::uint64_t id) const;
};

// Record fields re-derived from (a, b, m, n).
HitRecord derive_record(const MasterTuple& t);

struct Violation {
    std::uint64_t id = 0;
    std::string detail;
};

std::vector<Violation> validate_consistency(const Store& s);

inline constexpr const char* kHitsFile = "master_hits.csv";
inline constexpr const char* kFactorsFile = "f1_factors.csv";
inline constexpr const char* kFibresFile = "fibers.csv";
inline constexpr const char* kManifestFile = "manifest.txt";

struct ManifestEntry {
    std::string file;
    std::string sha256;
};

// Writes the three CSVs and manifest.txt (sha256sum format) into dir,
// creating it if needed. std::runtime_error naming the path on I/O failure.
std::vector<ManifestEntry> export_csv(const Store& s, const std::filesystem::path& dir);

// Loads what export_csv wrote. Fields are taken as stored, so a corrupted
// record surfaces through validate_consistency rather than here; malformed
// rows raise std::runtime_error with file and line. A missing directory or
// missing files give an empty store.
Store import_csv(const std::filesystem::path& dir);

// Files whose recorded digest differs from the current contents.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

}  // namespace brickforge::store
