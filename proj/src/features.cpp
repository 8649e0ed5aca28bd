#include "mcpr/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace mcpr {

namespace {

void append_scaled(std::vector<double>& out, std::span<const float> v, double scale) {
    for (float x : v) out.push_back(scale * static_cast<double>(x));
}

// Group norm over float inputs, accumulated in double.
double group_norm(std::span<const CueVector> vectors) {
    double s = 0;
    for (const auto& cv : vectors) {
        for (float x : cv.values) s += static_cast<double>(x) * static_cast<double>(x);
    }
    return std::sqrt(s);
}

void require_finite(const CueVector& cv) {
    for (float x : cv.values) {
        if (!std::isfinite(x)) {
            throw DataError("non-finite value in cue '" + cv.cue_name + "'");
        }
    }
}

}  // namespace

int CueStack::total_dim() const {
    int total = 0;
    for (const auto& [name, dim] : cues) total += dim;
    return total;
}

FusionMode parse_fusion_mode(std::string_view name) {
    if (name == "concat") return FusionMode::Concat;
    if (name == "l2concat") return FusionMode::L2Concat;
    if (name == "weighted") return FusionMode::Weighted;
    throw ConfigError("unknown fusion mode '" + std::string(name) + "'");
}

std::string fusion_mode_name(FusionMode m) {
    switch (m) {
        case FusionMode::Concat: return "concat";
        case FusionMode::L2Concat: return "l2concat";
        case FusionMode::Weighted: return "weighted";
    }
    throw ConfigError("invalid fusion mode value");
}

std::vector<double> fuse(std::span<const CueVector> vectors, const FusionConfig& config) {
    if (vectors.empty()) throw DataError("fuse requires at least one cue vector");
    for (const auto& cv : vectors) require_finite(cv);
    if (config.lambda < 0) throw DataError("fusion lambda must be non-negative");

    std::vector<double> out;
    switch (config.mode) {
        case FusionMode::Concat: {
            for (const auto& cv : vectors) append_scaled(out, cv.values, 1.0);
            break;
        }
        case FusionMode::L2Concat: {
            for (const auto& cv : vectors) {
                double norm = group_norm({&cv, 1});
                append_scaled(out, cv.values, norm == 0 ? 1.0 : 1.0 / norm);
            }
            break;
        }
        case FusionMode::Weighted: {
            if (vectors.size() < 2) {
                throw DataError("weighted fusion needs a base group and an extra cue");
            }
            auto base = vectors.first(vectors.size() - 1);
            const auto& extra = vectors.back();
            const double base_norm = group_norm(base);
            const double base_scale = base_norm == 0 ? 1.0 : 1.0 / base_norm;
            for (const auto& cv : base) append_scaled(out, cv.values, base_scale);
            const double extra_norm = group_norm({&extra, 1});
            append_scaled(out, extra.values,
                          config.lambda * (extra_norm == 0 ? 1.0 : 1.0 / extra_norm));
            break;
        }
    }
    return out;
}

void check_against_stack(std::span<const CueVector> vectors, const CueStack& stack) {
    if (vectors.size() != stack.cues.size()) {
        throw DataError("cue count mismatch for method '" + stack.method_name + "'");
    }
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].cue_name != stack.cues[i].first) {
            throw DataError("cue order mismatch: expected '" + stack.cues[i].first + "', got '" +
                            vectors[i].cue_name + "'");
        }
        if (static_cast<int>(vectors[i].values.size()) != stack.cues[i].second) {
            throw DataError("dimension mismatch for cue '" + vectors[i].cue_name + "': expected " +
                            std::to_string(stack.cues[i].second) + ", got " +
                            std::to_string(vectors[i].values.size()));
        }
    }
}

std::vector<double> lambda_grid() {
    std::vector<double> grid;
    grid.reserve(61);
    for (int i = 0; i <= 60; ++i) grid.push_back(static_cast<double>(i) / 20.0);
    return grid;
}

std::pair<double, double> optimize_lambda(const std::function<double(double)>& eval_fn,
                                          std::span<const double> grid) {
    if (grid.empty()) throw DataError("lambda grid is empty");
    double best_lambda = grid.front();
    double best_value = eval_fn(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double v = eval_fn(grid[i]);
        if (v > best_value) {
            best_value = v;
            best_lambda = grid[i];
        }
    }
    return {best_lambda, best_value};
}

CueVector rgb_baseline_feature(const ImageRgb& head_crop) {
    if (head_crop.pixels.empty()) throw DataError("empty head crop");
    const ImageRgb resized = bilinear_resize(head_crop, 40, 40);
    const ImageRgb blurred = box_blur(resized, 1);
    CueVector cv;
    cv.cue_name = "head_rgb";
    cv.values.reserve(blurred.pixels.size());
    for (std::uint8_t p : blurred.pixels) cv.values.push_back(static_cast<float>(p));
    return cv;
}

SyntheticEmbedder::SyntheticEmbedder(SyntheticEmbedderConfig config)
    : config_(std::move(config)) {
    if (config_.dim <= 0) throw ConfigError("embedder dim must be positive");
    if (config_.identity_signal < 0) throw ConfigError("identity_signal must be >= 0");
    if (config_.noise_sigma < 0) throw ConfigError("noise_sigma must be >= 0");
    for (const auto& [cue, table] : config_.viewpoint_attenuation) {
        for (const auto& [vp, factor] : table) {
            if (factor < 0 || factor > 1) {
                throw ConfigError("attenuation factor out of [0,1] for cue '" + cue + "'");
            }
        }
    }
    for (const auto& [cue, w] : config_.day_signal) {
        if (w < 0 || w > 1) throw ConfigError("day_signal out of [0,1] for cue '" + cue + "'");
    }
}

double SyntheticEmbedder::attenuation(const std::string& cue_name, Viewpoint v) const {
    auto it = config_.viewpoint_attenuation.find(cue_name);
    if (it == config_.viewpoint_attenuation.end()) return 1.0;
    auto jt = it->second.find(v);
    return jt == it->second.end() ? 1.0 : jt->second;
}

CueVector SyntheticEmbedder::embed(const Instance& instance, const std::string& cue_name,
                                   const std::string& day_tag) const {
    CueVector cv;
    cv.cue_name = cue_name;
    cv.values.assign(static_cast<std::size_t>(config_.dim), 0.0f);

    if (config_.face_cue_missing_on_nfd && cue_name == "face" &&
        instance.viewpoint == Viewpoint::NFD && !instance.is_background()) {
        return cv;  // missing feature, kept as an exact zero vector
    }

    const double inv_sqrt_dim = 1.0 / std::sqrt(static_cast<double>(config_.dim));

    if (instance.identity) {
        const double att = attenuation(cue_name, instance.viewpoint);
        double day_w = 0.0;
        if (auto it = config_.day_signal.find(cue_name); it != config_.day_signal.end()) {
            day_w = it->second;
        }
        Rng proto_rng(hash_mix(config_.seed,
                               hash_mix(hash_str("proto"),
                                        hash_mix(hash_str(*instance.identity), hash_str(cue_name)))));
        Rng day_rng(hash_mix(config_.seed,
                             hash_mix(hash_str("dayproto"),
                                      hash_mix(hash_str(*instance.identity),
                                               hash_mix(hash_str(cue_name), hash_str(day_tag))))));
        const double scale = config_.identity_signal * att * inv_sqrt_dim;
        for (auto& v : cv.values) {
            const double p = (1.0 - day_w) * proto_rng.gaussian() + day_w * day_rng.gaussian();
            v = static_cast<float>(scale * p);
        }
    }

    if (config_.noise_sigma > 0) {
        Rng noise_rng(hash_mix(config_.seed,
                               hash_mix(hash_str("noise"),
                                        hash_mix(hash_str(instance.instance_id), hash_str(cue_name)))));
        const double scale = config_.noise_sigma * inv_sqrt_dim;
        for (auto& v : cv.values) {
            v = static_cast<float>(static_cast<double>(v) + scale * noise_rng.gaussian());
        }
    }
    return cv;
}

SyntheticProvider::SyntheticProvider(SyntheticEmbedderConfig config,
                                     std::map<std::string, std::string> day_tags)
    : embedder_(std::move(config)), day_tags_(std::move(day_tags)) {}

CueVector SyntheticProvider::embed(const Corpus&, const Instance& instance, Region region) const {
    auto it = day_tags_.find(instance.instance_id);
    return embedder_.embed(instance, region_name(region),
                           it == day_tags_.end() ? std::string() : it->second);
}

SyntheticProvider SyntheticProvider::for_region(Region region) const {
    SyntheticProvider p(embedder_.config(), day_tags_);
    p.cue_name_ = region_name(region);
    return p;
}

RgbCropProvider::RgbCropProvider(std::string crops_dir, std::string cue_name)
    : crops_dir_(std::move(crops_dir)), cue_name_(std::move(cue_name)) {}

CueVector RgbCropProvider::embed(const Corpus&, const Instance& instance, Region region) const {
    if (region != Region::Head) {
        throw DataError("rgb crop provider only supports the head region");
    }
    ImageRgb crop = read_ppm(crops_dir_ + "/" + instance.instance_id + ".ppm");
    CueVector cv = rgb_baseline_feature(crop);
    cv.cue_name = cue_name_;
    return cv;
}

EmbeddingCache::EmbeddingCache(std::string cue_name, int dim)
    : cue_name_(std::move(cue_name)), dim_(dim) {
    if (dim_ <= 0) throw DataError("cache dimension must be positive");
}

void EmbeddingCache::put(const std::string& instance_id, std::vector<float> values) {
    if (static_cast<int>(values.size()) != dim_) {
        throw DataError("dimension mismatch inserting '" + instance_id + "' into cache '" +
                        cue_name_ + "'");
    }
    auto [it, inserted] = index_.emplace(instance_id, entries_.size());
    if (!inserted) {
        entries_[it->second].second = std::move(values);
        return;
    }
    entries_.emplace_back(instance_id, std::move(values));
}

bool EmbeddingCache::contains(const std::string& instance_id) const {
    return index_.contains(instance_id);
}

const std::vector<float>& EmbeddingCache::at(const std::string& instance_id) const {
    auto it = index_.find(instance_id);
    if (it == index_.end()) {
        throw DataError("no embedding for instance '" + instance_id + "' in cache '" + cue_name_ +
                        "'");
    }
    return entries_[it->second].second;
}

CueVector EmbeddingCache::cue_vector(const std::string& instance_id) const {
    return {cue_name_, at(instance_id)};
}

namespace {

constexpr char kCacheMagic[8] = {'M', 'C', 'E', 'M', 'B', '0', '0', '1'};

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
    write_u32(os, static_cast<std::uint32_t>(v));
    write_u32(os, static_cast<std::uint32_t>(v >> 32));
}

std::uint32_t read_u32(std::istream& is, const std::string& path) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw DataError("truncated cache file '" + path + "'");
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

std::uint64_t read_u64(std::istream& is, const std::string& path) {
    const std::uint64_t lo = read_u32(is, path);
    const std::uint64_t hi = read_u32(is, path);
    return lo | hi << 32;
}

}  // namespace

void save_embedding_cache(const std::string& path, const EmbeddingCache& cache) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write cache file '" + path + "'");
    out.write(kCacheMagic, sizeof(kCacheMagic));
    write_u32(out, static_cast<std::uint32_t>(cache.cue_name().size()));
    out.write(cache.cue_name().data(), static_cast<std::streamsize>(cache.cue_name().size()));
    write_u32(out, static_cast<std::uint32_t>(cache.dim()));
    write_u64(out, cache.size());
    for (const auto& [id, values] : cache.entries()) {
        write_u32(out, static_cast<std::uint32_t>(id.size()));
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
        static_assert(sizeof(float) == 4);
        out.write(reinterpret_cast<const char*>(values.data()),
                  static_cast<std::streamsize>(values.size() * sizeof(float)));
    }
    if (!out.flush()) throw DataError("write failed for '" + path + "'");
}

EmbeddingCache load_embedding_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError("cannot open cache file '" + path + "'");
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCacheMagic, 8) != 0) {
        throw DataError("bad magic in cache file '" + path + "'");
    }
    const std::uint32_t name_len = read_u32(in, path);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const std::uint32_t dim = read_u32(in, path);
    const std::uint64_t count = read_u64(in, path);
    if (!in || dim == 0) throw DataError("bad header in cache file '" + path + "'");
    EmbeddingCache cache(name, static_cast<int>(dim));
    for (std::uint64_t r = 0; r < count; ++r) {
        const std::uint32_t id_len = read_u32(in, path);
        std::string id(id_len, '\0');
        in.read(id.data(), id_len);
        std::vector<float> values(dim);
        in.read(reinterpret_cast<char*>(values.data()),
                static_cast<std::streamsize>(values.size() * sizeof(float)));
        if (!in) throw DataError("truncated cache file '" + path + "'");
        cache.put(id, std::move(values));
    }
    return cache;
}

CachedProvider::CachedProvider(EmbeddingCache cache) : cache_(std::move(cache)) {}

bool CachedProvider::supports(Region region) const {
    // A cache named after a canonical region serves only that region;
    // any other name serves all regions.
    for (Region r : {Region::Face, Region::Head, Region::Upper, Region::Body, Region::Scene}) {
        if (cache_.cue_name() == region_name(r)) return r == region;
    }
    return true;
}

CueVector CachedProvider::embed(const Corpus&, const Instance& instance, Region) const {
    return cache_.cue_vector(instance.instance_id);
}

CueVector embed(const CueProvider& provider, const Corpus& corpus, const Instance& instance,
                Region region) {
    if (!corpus.has_instance(instance.instance_id)) {
        throw DataError("instance '" + instance.instance_id + "' is not part of the corpus");
    }
    if (!provider.supports(region)) {
        throw DataError("provider '" + provider.cue_name() + "' does not support region '" +
                        region_name(region) + "'");
    }
    CueVector cv = provider.embed(corpus, instance, region);
    if (static_cast<int>(cv.values.size()) != provider.dim()) {
        throw DataError("provider '" + provider.cue_name() + "' emitted a wrong dimension");
    }
    return cv;
}

}  // namespace mcpr
