#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mcpr/corpus.hpp"
#include "mcpr/geometry.hpp"
#include "mcpr/image.hpp"

namespace mcpr {

/// One embedding for one (cue, instance). Stored as float32; fusion
/// and training accumulate in float64.
struct CueVector {
    std::string cue_name;
    std::vector<float> values;
};

/// Ordered cue list defining a method's feature layout.
struct CueStack {
    std::string method_name;
    std::vector<std::pair<std::string, int>> cues;  // (name, dim)

    int total_dim() const;
};

enum class FusionMode { Concat, L2Concat, Weighted };

struct FusionConfig {
    FusionMode mode = FusionMode::Concat;
    double lambda = 0.0;  // Weighted only; must be >= 0
};

FusionMode parse_fusion_mode(std::string_view name);
std::string fusion_mode_name(FusionMode m);

/// Fuses cue vectors into one feature vector.
///   Concat:   plain concatenation.
///   L2Concat: each vector divided by its L2 norm (exact-zero vectors
///             pass through unchanged), then concatenated.
///   Weighted: the leading vectors form the base group and the last
///             vector is the extra cue; the output is
///             base/||base|| ++ lambda * extra/||extra||,
///             each group normalised as a whole.
/// Weighted requires at least two vectors.
std::vector<double> fuse(std::span<const CueVector> vectors, const FusionConfig& config);

/// Dimension check against a declared stack; throws DataError on
/// mismatch in order, name, or length.
void check_against_stack(std::span<const CueVector> vectors, const CueStack& stack);

/// The 61 search points {0, 0.05, 0.10, ..., 3.00}.
std::vector<double> lambda_grid();

/// Grid point of maximal value; ties go to the smaller lambda.
std::pair<double, double> optimize_lambda(const std::function<double(double)>& eval_fn,
                                          std::span<const double> grid);

/// Head crop -> 4800-dim vector: bilinear resize to 40x40, 3x3 box
/// blur, RGB-interleaved flatten.
CueVector rgb_baseline_feature(const ImageRgb& head_crop);

/// Controls the deterministic test-double embedder. Per (identity,
/// cue) a pseudo-random prototype is drawn; instances get
///   identity_signal * attenuation(cue, viewpoint) * prototype + noise
/// with everything derived by hashing (seed, ids, cue_name).
/// day_signal in [0,1] blends in a second prototype keyed also by the
/// instance's day tag, so a cue can be made to carry appearance that
/// does not transfer across day groups. Background instances are
/// noise only.
struct SyntheticEmbedderConfig {
    std::uint64_t seed = 0;
    int dim = 64;
    double identity_signal = 4.0;
    double noise_sigma = 1.0;
    std::map<std::string, std::map<Viewpoint, double>> viewpoint_attenuation;
    bool face_cue_missing_on_nfd = true;
    std::map<std::string, double> day_signal;
};

class SyntheticEmbedder {
public:
    explicit SyntheticEmbedder(SyntheticEmbedderConfig config);

    /// day_tag may be empty when the corpus has no day structure.
    CueVector embed(const Instance& instance, const std::string& cue_name,
                    const std::string& day_tag) const;

    const SyntheticEmbedderConfig& config() const { return config_; }

private:
    double attenuation(const std::string& cue_name, Viewpoint v) const;

    SyntheticEmbedderConfig config_;
};

/// Read-only embedding source for one cue. Implementations must be
/// safe for concurrent use.
class CueProvider {
public:
    virtual ~CueProvider() = default;
    virtual std::string cue_name() const = 0;
    virtual int dim() const = 0;
    virtual bool supports(Region region) const = 0;
    virtual CueVector embed(const Corpus& corpus, const Instance& instance,
                            Region region) const = 0;
};

/// Wraps SyntheticEmbedder behind the provider contract; the cue name
/// equals the region name.
class SyntheticProvider : public CueProvider {
public:
    SyntheticProvider(SyntheticEmbedderConfig config,
                      std::map<std::string, std::string> day_tags);

    std::string cue_name() const override { return cue_name_; }
    int dim() const override { return embedder_.config().dim; }
    bool supports(Region) const override { return true; }
    CueVector embed(const Corpus& corpus, const Instance& instance, Region region) const override;

    /// Same provider restricted to one region/cue.
    SyntheticProvider for_region(Region region) const;

private:
    SyntheticEmbedder embedder_;
    std::map<std::string, std::string> day_tags_;  // instance_id -> day tag
    std::string cue_name_ = "head";
};

/// Reads `<instance_id>.ppm` head crops from a directory. Supports the
/// head region only.
class RgbCropProvider : public CueProvider {
public:
    explicit RgbCropProvider(std::string crops_dir, std::string cue_name = "head_rgb");

    std::string cue_name() const override { return cue_name_; }
    int dim() const override { return 40 * 40 * 3; }
    bool supports(Region region) const override { return region == Region::Head; }
    CueVector embed(const Corpus& corpus, const Instance& instance, Region region) const override;

private:
    std::string crops_dir_;
    std::string cue_name_;
};

/// On-disk embedding table for one cue, keyed by instance id. Entry
/// order is preserved and meaningful (file bytes are deterministic).
class EmbeddingCache {
public:
    EmbeddingCache() = default;
    EmbeddingCache(std::string cue_name, int dim);

    const std::string& cue_name() const { return cue_name_; }
    int dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }

    void put(const std::string& instance_id, std::vector<float> values);
    bool contains(const std::string& instance_id) const;
    const std::vector<float>& at(const std::string& instance_id) const;
    CueVector cue_vector(const std::string& instance_id) const;

    const std::vector<std::pair<std::string, std::vector<float>>>& entries() const {
        return entries_;
    }

private:
    std::string cue_name_;
    int dim_ = 0;
    std::vector<std::pair<std::string, std::vector<float>>> entries_;
    std::map<std::string, std::size_t> index_;
};

// Little-endian binary: magic, cue name, dim, count, then
// (id_len, id, dim x float32) records.
void save_embedding_cache(const std::string& path, const EmbeddingCache& cache);
EmbeddingCache load_embedding_cache(const std::string& path);

/// Cache-backed provider (region is only checked against the cue name
/// when one of the five canonical names is used).
class CachedProvider : public CueProvider {
public:
    explicit CachedProvider(EmbeddingCache cache);

    std::string cue_name() const override { return cache_.cue_name(); }
    int dim() const override { return cache_.dim(); }
    bool supports(Region region) const override;
    CueVector embed(const Corpus& corpus, const Instance& instance, Region region) const override;

private:
    EmbeddingCache cache_;
};

/// Provider-contract entry point: checks region support and the
/// fixed-dimension postcondition.
CueVector embed(const CueProvider& provider, const Corpus& corpus, const Instance& instance,
                Region region);

}  // namespace mcpr
