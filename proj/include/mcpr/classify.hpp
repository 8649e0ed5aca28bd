#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcpr/common.hpp"

namespace mcpr {

struct LabeledVector {
    std::vector<double> features;
    std::string identity;
};

struct SvmConfig {
    double c = 1.0;
    double tolerance = 1e-6;  // max KKT violation over an epoch
    int max_epochs = 1000;
    std::uint64_t seed = 0;  // coordinate shuffling
};

/// K one-vs-rest linear score functions over a fixed feature space.
/// Identity order is lexicographic and is the tie-break order for
/// every argmax in the project.
struct GalleryModel {
    std::vector<std::string> identities;
    std::vector<double> weights;  // K x D, row-major
    std::vector<double> biases;   // K
    int feature_dim = 0;

    std::span<const double> weights_for(std::size_t k) const {
        return {weights.data() + k * static_cast<std::size_t>(feature_dim),
                static_cast<std::size_t>(feature_dim)};
    }
};

/// Per-identity scores aligned with GalleryModel::identities.
using ScoreVector = std::vector<double>;

/// Trains K binary L2-regularised L1-hinge SVMs (one per identity,
/// that identity versus the rest) by dual coordinate descent. The
/// bias is an augmented always-1 feature, so it is regularised; the
/// per-class primal objective being minimised is
///   1/2 (||w||^2 + b^2) + C * sum_i max(0, 1 - y_i (w.x_i + b)).
/// Deterministic given config.seed; per-class runs are independent.
GalleryModel train_svm_ovr(std::span<const LabeledVector> samples, const SvmConfig& config);

/// That per-class primal objective, for diagnostics and oracles.
double svm_primal_objective(std::span<const double> weights, double bias, double c,
                            std::span<const LabeledVector> samples,
                            const std::string& positive_identity);

ScoreVector score(const GalleryModel& model, std::span<const double> x);

/// argmax_k S_k(x); ties go to the first identity in list order.
const std::string& predict_closed(const GalleryModel& model, std::span<const double> x);

/// Background (nullopt) iff max_k S_k(x) < tau.
std::optional<std::string> predict_open(const GalleryModel& model, std::span<const double> x,
                                        double tau);

std::size_t argmax_index(std::span<const double> scores);

struct NnModel {
    std::vector<LabeledVector> samples;
};

NnModel train_nn(std::span<const LabeledVector> samples);

/// Identity of the Euclidean-nearest training vector; ties go to the
/// earliest sample. Brute-force linear scan is the contract.
const std::string& predict_nn(const NnModel& model, std::span<const double> x);

struct ChanceModel {
    std::string identity;
};

/// Most frequent training identity; ties go to the lexicographically
/// first.
ChanceModel train_chance(std::span<const LabeledVector> samples);

inline const std::string& predict_chance(const ChanceModel& model) { return model.identity; }

// Binary model file: magic, K, D, identity table, float64 weights
// (row-major) and biases. Little-endian.
void save_gallery_model(const std::string& path, const GalleryModel& model);
GalleryModel load_gallery_model(const std::string& path);

}  // namespace mcpr
