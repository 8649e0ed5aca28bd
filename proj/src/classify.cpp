#include "mcpr/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

namespace mcpr {

namespace {

// Dual coordinate descent for one binary problem over augmented
// vectors (trailing constant 1). Follows the classic L1-loss update:
//   G = y_i w.x_i - 1,  alpha_i <- clip(alpha_i - G / ||x_i||^2, 0, C)
// with a projected-gradient stopping rule. Returns the augmented
// weight vector of size D+1.
std::vector<double> solve_binary(const std::vector<std::vector<double>>& x,
                                 const std::vector<double>& q_diag, const std::vector<int>& y,
                                 const SvmConfig& config, std::uint64_t class_seed) {
    const std::size_t n = x.size();
    const std::size_t dim = x[0].size();
    std::vector<double> w(dim, 0.0);
    std::vector<double> alpha(n, 0.0);
    std::vector<std::size_t> index(n);
    std::iota(index.begin(), index.end(), std::size_t{0});
    Rng rng(class_seed);

    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        rng.shuffle(index);
        double max_violation = 0.0;
        for (std::size_t i : index) {
            const auto& xi = x[i];
            double g = 0.0;
            for (std::size_t d = 0; d < dim; ++d) g += w[d] * xi[d];
            g = g * y[i] - 1.0;

            double pg = g;
            if (alpha[i] == 0.0) {
                pg = std::min(g, 0.0);
            } else if (alpha[i] == config.c) {
                pg = std::max(g, 0.0);
            }
            max_violation = std::max(max_violation, std::fabs(pg));

            if (std::fabs(pg) > 1e-14) {
                const double old = alpha[i];
                alpha[i] = std::clamp(old - g / q_diag[i], 0.0, config.c);
                const double delta = (alpha[i] - old) * y[i];
                if (delta != 0.0) {
                    for (std::size_t d = 0; d < dim; ++d) w[d] += delta * xi[d];
                }
            }
        }
        if (max_violation < config.tolerance) break;
    }
    return w;
}

}  // namespace

GalleryModel train_svm_ovr(std::span<const LabeledVector> samples, const SvmConfig& config) {
    if (config.c <= 0) throw ConfigError("svm C must be positive");
    if (config.tolerance <= 0) throw ConfigError("svm tolerance must be positive");
    if (samples.empty()) throw DataError("no training samples");

    const std::size_t dim = samples[0].features.size();
    std::set<std::string> identity_set;
    for (const auto& s : samples) {
        if (s.features.size() != dim) throw DataError("feature dimension mismatch in training set");
        for (double v : s.features) {
            if (!std::isfinite(v)) throw DataError("non-finite feature in training set");
        }
        identity_set.insert(s.identity);
    }
    if (identity_set.size() < 2) {
        throw DataError("one-vs-rest training needs at least two identities");
    }

    // Augmented copies are shared across the K binary problems.
    std::vector<std::vector<double>> x(samples.size());
    std::vector<double> q_diag(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        x[i] = samples[i].features;
        x[i].push_back(1.0);
        q_diag[i] = 0.0;
        for (double v : x[i]) q_diag[i] += v * v;
    }

    GalleryModel model;
    model.identities.assign(identity_set.begin(), identity_set.end());
    model.feature_dim = static_cast<int>(dim);
    model.weights.resize(model.identities.size() * dim);
    model.biases.resize(model.identities.size());

    std::vector<int> y(samples.size());
    for (std::size_t k = 0; k < model.identities.size(); ++k) {
        const std::string& identity = model.identities[k];
        for (std::size_t i = 0; i < samples.size(); ++i) {
            y[i] = samples[i].identity == identity ? 1 : -1;
        }
        // Seeded per class so the result does not depend on class order.
        const std::vector<double> w_aug =
            solve_binary(x, q_diag, y, config, hash_mix(config.seed, hash_str(identity)));
        std::copy(w_aug.begin(), w_aug.end() - 1, model.weights.begin() + k * dim);
        model.biases[k] = w_aug.back();
    }
    return model;
}

double svm_primal_objective(std::span<const double> weights, double bias, double c,
                            std::span<const LabeledVector> samples,
                            const std::string& positive_identity) {
    double reg = bias * bias;
    for (double w : weights) reg += w * w;
    double hinge = 0.0;
    for (const auto& s : samples) {
        const double label = s.identity == positive_identity ? 1.0 : -1.0;
        double margin = bias;
        for (std::size_t d = 0; d < weights.size(); ++d) margin += weights[d] * s.features[d];
        hinge += std::max(0.0, 1.0 - label * margin);
    }
    return 0.5 * reg + c * hinge;
}

ScoreVector score(const GalleryModel& model, std::span<const double> x) {
    if (static_cast<int>(x.size()) != model.feature_dim) {
        throw DataError("score: feature dimension mismatch");
    }
    ScoreVector s(model.identities.size());
    for (std::size_t k = 0; k < model.identities.size(); ++k) {
        double v = model.biases[k];
        const auto w = model.weights_for(k);
        for (std::size_t d = 0; d < x.size(); ++d) v += w[d] * x[d];
        s[k] = v;
    }
    return s;
}

std::size_t argmax_index(std::span<const double> scores) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < scores.size(); ++k) {
        if (scores[k] > scores[best]) best = k;
    }
    return best;
}

const std::string& predict_closed(const GalleryModel& model, std::span<const double> x) {
    const ScoreVector s = score(model, x);
    return model.identities[argmax_index(s)];
}

std::optional<std::string> predict_open(const GalleryModel& model, std::span<const double> x,
                                        double tau) {
    const ScoreVector s = score(model, x);
    const std::size_t best = argmax_index(s);
    if (s[best] < tau) return std::nullopt;
    return model.identities[best];
}

NnModel train_nn(std::span<const LabeledVector> samples) {
    if (samples.empty()) throw DataError("nearest neighbour needs at least one sample");
    const std::size_t dim = samples[0].features.size();
    for (const auto& s : samples) {
        if (s.features.size() != dim) throw DataError("feature dimension mismatch in training set");
    }
    return NnModel{{samples.begin(), samples.end()}};
}

const std::string& predict_nn(const NnModel& model, std::span<const double> x) {
    if (x.size() != model.samples[0].features.size()) {
        throw DataError("predict_nn: feature dimension mismatch");
    }
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < model.samples.size(); ++i) {
        double d2 = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d) {
            const double diff = model.samples[i].features[d] - x[d];
            d2 += diff * diff;
        }
        if (d2 < best_dist) {
            best_dist = d2;
            best = i;
        }
    }
    return model.samples[best].identity;
}

ChanceModel train_chance(std::span<const LabeledVector> samples) {
    if (samples.empty()) throw DataError("chance classifier needs at least one sample");
    std::map<std::string, std::size_t> counts;
    for (const auto& s : samples) ++counts[s.identity];
    // counts is ordered by identity, so the first maximal entry is the
    // lexicographic tie-break.
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
        if (it->second > best->second) best = it;
    }
    return ChanceModel{best->first};
}

namespace {

constexpr char kModelMagic[8] = {'M', 'C', 'G', 'A', 'L', '0', '0', '1'};

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& is, const std::string& path) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw DataError("truncated model file '" + path + "'");
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

}  // namespace

void save_gallery_model(const std::string& path, const GalleryModel& model) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write model file '" + path + "'");
    out.write(kModelMagic, sizeof(kModelMagic));
    write_u32(out, static_cast<std::uint32_t>(model.identities.size()));
    write_u32(out, static_cast<std::uint32_t>(model.feature_dim));
    for (const auto& id : model.identities) {
        write_u32(out, static_cast<std::uint32_t>(id.size()));
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
    }
    static_assert(sizeof(double) == 8);
    out.write(reinterpret_cast<const char*>(model.weights.data()),
              static_cast<std::streamsize>(model.weights.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(model.biases.data()),
              static_cast<std::streamsize>(model.biases.size() * sizeof(double)));
    if (!out.flush()) throw DataError("write failed for '" + path + "'");
}

GalleryModel load_gallery_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError("cannot open model file '" + path + "'");
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kModelMagic, 8) != 0) {
        throw DataError("bad magic in model file '" + path + "'");
    }
    GalleryModel model;
    const std::uint32_t k = read_u32(in, path);
    model.feature_dim = static_cast<int>(read_u32(in, path));
    model.identities.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        const std::uint32_t len = read_u32(in, path);
        std::string id(len, '\0');
        in.read(id.data(), len);
        model.identities.push_back(std::move(id));
    }
    model.weights.resize(static_cast<std::size_t>(k) * model.feature_dim);
    model.biases.resize(k);
    in.read(reinterpret_cast<char*>(model.weights.data()),
            static_cast<std::streamsize>(model.weights.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(model.biases.data()),
            static_cast<std::streamsize>(model.biases.size() * sizeof(double)));
    if (!in) throw DataError("truncated model file '" + path + "'");
    return model;
}

}  // namespace mcpr
