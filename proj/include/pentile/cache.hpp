#pragma once

// Versioned binary caches for ball tables and class censuses, keyed by
// (kind, cap, format version) with an FNV-1a payload checksum. Ball caches
// persist the chamber words only; adjacency, centers and wall signs are
// rebuilt on load. A CSV summary sits next to each binary file.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pentile/census.hpp"
#include "pentile/davis.hpp"
#include "pentile/version.hpp"

namespace pentile {

namespace cachedetail {

inline uint64_t fnv1a(const void* data, size_t n, uint64_t h = 1469598103934665603ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

struct Header {
    char magic[4] = {'P', 'T', 'L', 'C'};
    uint32_t format_version = kCacheFormatVersion;
    uint32_t kind = 0;  // 1 = ball, 2 = cube census, 3 = hyp census
    uint32_t cap = 0;   // radius or cap*100 for hyp
    uint64_t count = 0;
    uint64_t checksum = 0;
};

inline void write_all(const std::string& path, const Header& h, const void* payload, size_t bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cache: cannot write " + path);
    out.write(reinterpret_cast<const char*>(&h), sizeof(h));
    out.write(static_cast<const char*>(payload), static_cast<std::streamsize>(bytes));
    if (!out) throw std::runtime_error("cache: short write to " + path);
}

inline bool read_header(std::ifstream& in, Header& h, uint32_t kind, uint32_t cap) {
    if (!in.read(reinterpret_cast<char*>(&h), sizeof(h))) return false;
    if (std::string(h.magic, 4) != "PTLC") return false;
    if (h.format_version != static_cast<uint32_t>(kCacheFormatVersion)) return false;
    return h.kind == kind && h.cap == cap;
}

} // namespace cachedetail

inline std::string default_cache_dir() {
    if (const char* env = std::getenv("PENTILE_CACHE_DIR")) return env;
    return "pentile-cache";
}

inline std::string ball_cache_path(const std::string& dir, int radius) {
    return dir + "/ball-r" + std::to_string(radius) + "-v" + std::to_string(kCacheFormatVersion) +
           ".bin";
}

inline void save_ball(const Ball& ball, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::vector<uint64_t> words;
    words.reserve(ball.size());
    for (const auto& w : ball.words) words.push_back(pack_word(w));
    cachedetail::Header h;
    h.kind = 1;
    h.cap = static_cast<uint32_t>(ball.radius);
    h.count = words.size();
    h.checksum = cachedetail::fnv1a(words.data(), words.size() * sizeof(uint64_t));
    cachedetail::write_all(ball_cache_path(dir, ball.radius), h, words.data(),
                           words.size() * sizeof(uint64_t));
    // CSV summary: radius, chamber count
    std::ofstream csv(dir + "/balls.csv", std::ios::app);
    csv << ball.radius << "," << ball.size() << "\n";
}

inline std::optional<std::vector<Word>> load_ball_words(int radius, const std::string& dir) {
    std::ifstream in(ball_cache_path(dir, radius), std::ios::binary);
    if (!in) return std::nullopt;
    cachedetail::Header h;
    if (!cachedetail::read_header(in, h, 1, static_cast<uint32_t>(radius))) return std::nullopt;
    std::vector<uint64_t> packed(h.count);
    if (!in.read(reinterpret_cast<char*>(packed.data()),
                 static_cast<std::streamsize>(packed.size() * sizeof(uint64_t))))
        return std::nullopt;
    if (cachedetail::fnv1a(packed.data(), packed.size() * sizeof(uint64_t)) != h.checksum)
        return std::nullopt;  // corrupted cache: caller rebuilds
    std::vector<Word> words;
    words.reserve(packed.size());
    for (uint64_t k : packed) words.push_back(unpack_word(k));
    return words;
}

// --- census caches ---------------------------------------------------------------

struct PackedClass {
    uint64_t rep;
    double len_hyp;
    int32_t len_word;
    int32_t len_cube;
    uint8_t hyperbolic;
    uint8_t primitive;
    uint8_t pad[6] = {0, 0, 0, 0, 0, 0};
};

inline std::string census_cache_path(const std::string& dir, GrowthMetric metric, double cap) {
    int capkey = metric == GrowthMetric::cube ? static_cast<int>(cap)
                                              : static_cast<int>(std::lround(cap * 100));
    return dir + "/census-" + (metric == GrowthMetric::cube ? "cube" : "hyp") + "-" +
           std::to_string(capkey) + "-v" + std::to_string(kCacheFormatVersion) + ".bin";
}

inline void save_census(const ClassCensus& census, GrowthMetric metric, double cap,
                        const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::vector<PackedClass> rows;
    rows.reserve(census.classes.size());
    for (const auto& c : census.classes) {
        PackedClass r{};
        r.rep = pack_word(c.rep);
        r.len_hyp = c.len_hyp.value_or(-1.0);
        r.len_word = c.len_word;
        r.len_cube = c.len_cube;
        r.hyperbolic = c.hyperbolic ? 1 : 0;
        r.primitive = c.primitive ? 1 : 0;
        rows.push_back(r);
    }
    cachedetail::Header h;
    h.kind = metric == GrowthMetric::cube ? 2 : 3;
    h.cap = metric == GrowthMetric::cube ? static_cast<uint32_t>(cap)
                                         : static_cast<uint32_t>(std::lround(cap * 100));
    h.count = rows.size();
    h.checksum = cachedetail::fnv1a(rows.data(), rows.size() * sizeof(PackedClass),
                                    cachedetail::fnv1a(&census.elliptic_count, sizeof(uint64_t)));
    std::string path = census_cache_path(dir, metric, cap);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cache: cannot write " + path);
    out.write(reinterpret_cast<const char*>(&h), sizeof(h));
    out.write(reinterpret_cast<const char*>(&census.elliptic_count), sizeof(uint64_t));
    out.write(reinterpret_cast<const char*>(rows.data()),
              static_cast<std::streamsize>(rows.size() * sizeof(PackedClass)));
    std::ofstream csv(dir + "/censuses.csv", std::ios::app);
    csv << (metric == GrowthMetric::cube ? "cube" : "hyp") << "," << cap << "," << rows.size()
        << "," << census.elliptic_count << "\n";
}

inline std::optional<ClassCensus> load_census(GrowthMetric metric, double cap,
                                              const std::string& dir) {
    std::ifstream in(census_cache_path(dir, metric, cap), std::ios::binary);
    if (!in) return std::nullopt;
    cachedetail::Header h;
    uint32_t kind = metric == GrowthMetric::cube ? 2 : 3;
    uint32_t capkey = metric == GrowthMetric::cube ? static_cast<uint32_t>(cap)
                                                   : static_cast<uint32_t>(std::lround(cap * 100));
    if (!cachedetail::read_header(in, h, kind, capkey)) return std::nullopt;
    uint64_t elliptic = 0;
    if (!in.read(reinterpret_cast<char*>(&elliptic), sizeof(uint64_t))) return std::nullopt;
    std::vector<PackedClass> rows(h.count);
    if (!in.read(reinterpret_cast<char*>(rows.data()),
                 static_cast<std::streamsize>(rows.size() * sizeof(PackedClass))))
        return std::nullopt;
    if (cachedetail::fnv1a(rows.data(), rows.size() * sizeof(PackedClass),
                           cachedetail::fnv1a(&elliptic, sizeof(uint64_t))) != h.checksum)
        return std::nullopt;
    ClassCensus census;
    census.elliptic_count = elliptic;
    census.cube_cap = metric == GrowthMetric::cube
                          ? static_cast<int>(cap)
                          : static_cast<int>(std::floor(cap / pentagon().c + 1e-12));
    for (const auto& r : rows) {
        ConjClass c;
        c.rep = unpack_word(r.rep);
        c.len_word = r.len_word;
        c.len_cube = r.len_cube;
        c.hyperbolic = r.hyperbolic != 0;
        if (r.len_hyp >= 0.0) c.len_hyp = r.len_hyp;
        c.primitive = r.primitive != 0;
        census.classes.push_back(std::move(c));
    }
    detail::fill_len_hyp_index(census);
    return census;
}

// Cached census accessor used by the CLI and the acceptance suite.
inline ClassCensus census_cached(GrowthMetric metric, double cap, int workers,
                                 const std::string& dir) {
    if (auto hit = load_census(metric, cap, dir)) return *hit;
    ClassCensus census = metric == GrowthMetric::cube
                             ? class_census_cube(static_cast<int>(cap), workers)
                             : class_census_hyp(cap, workers);
    save_census(census, metric, cap, dir);
    return census;
}

} // namespace pentile
