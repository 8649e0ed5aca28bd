#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mcpr/classify.hpp"
#include "mcpr/corpus.hpp"
#include "mcpr/splits.hpp"

namespace mcpr {

enum class ClassifierKind { Svm, Nn, Chance };

ClassifierKind parse_classifier_kind(std::string_view name);
std::string classifier_kind_name(ClassifierKind k);

/// A runnable method: a feature map plus a classifier choice. The
/// feature map must be a pure function of the instance.
struct Method {
    std::string name;
    std::function<std::vector<double>(const Instance&)> featurize;
    ClassifierKind classifier = ClassifierKind::Svm;
    SvmConfig svm;
};

struct PredictionRecord {
    std::string instance_id;
    std::string truth;
    std::string predicted;
};

struct FoldResult {
    int test_fold = 0;
    std::vector<PredictionRecord> predictions;
    std::size_t correct = 0;

    std::size_t total() const { return predictions.size(); }
    double accuracy() const {
        return predictions.empty() ? 0.0
                                   : static_cast<double>(correct) / static_cast<double>(total());
    }
};

struct TwoFoldResult {
    std::array<FoldResult, 2> folds;  // indexed by the fold tested
    double mean_accuracy = 0.0;
    std::vector<std::string> warnings;
};

/// Trains on fold i and tests on fold 1-i, both ways, and reports the
/// arithmetic mean of the two fold accuracies. Identities without a
/// training sample in a direction are dropped from that direction's
/// gallery (and their probes from its denominator), with a warning.
TwoFoldResult run_two_fold(const Corpus& corpus, const SplitAssignment& assignment,
                           const Method& method);

struct IdentityAccuracy {
    std::string identity;
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy = 0.0;
};

struct PerIdentityReport {
    std::vector<IdentityAccuracy> sorted;  // accuracy descending
    std::size_t identities_at_one = 0;
    std::size_t identities_at_zero = 0;
};

PerIdentityReport per_identity_accuracy(std::span<const FoldResult> folds);

struct SubsetAccuracy {
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy = 0.0;
};

/// Accuracy within each tag of a total partition of the test
/// instances. The size-weighted mean over tags equals the overall
/// accuracy.
std::map<std::string, SubsetAccuracy> subset_accuracy(
    const Corpus& corpus, std::span<const FoldResult> folds,
    const std::function<std::string(const Instance&)>& tag_fn);

/// Tagger for head-height resolution bins with the given ascending
/// thresholds, e.g. {50,100,200} -> [0,50) [50,100) [100,200) [200,inf).
std::function<std::string(const Instance&)> make_resolution_tagger(std::vector<double> thresholds);

std::function<std::string(const Instance&)> viewpoint_tagger();

/// method accuracy / reference accuracy; the reference must be > 0.
std::map<std::string, double> relative_accuracy(
    const std::map<std::string, double>& method_accuracies, double reference_accuracy);

struct CrossViewpointMatrix {
    std::vector<std::string> train_tags;
    std::vector<std::string> test_tags;
    std::vector<std::optional<double>> cells;  // row-major over (train, test)

    const std::optional<double>& cell(std::size_t train_i, std::size_t test_j) const {
        return cells[train_i * test_tags.size() + test_j];
    }
};

/// Cell (i, j): train only on instances tagged i, test only on those
/// tagged j, two-fold averaged. Directions with an empty training
/// cell are skipped; a cell with no usable direction stays absent.
CrossViewpointMatrix cross_viewpoint_matrix(
    const Corpus& corpus, const SplitAssignment& assignment, const Method& method,
    std::span<const std::string> train_tags, std::span<const std::string> test_tags,
    const std::function<std::string(const Instance&)>& tag_fn);

struct SweepPoint {
    std::size_t n = 0;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
};

/// For each n: `runs` independent seeded subsamples of at most n
/// training instances per identity (per direction), each giving a
/// two-fold mean accuracy; reports their mean and population standard
/// deviation.
std::vector<SweepPoint> sample_count_sweep(const Corpus& corpus,
                                           const SplitAssignment& assignment, const Method& method,
                                           std::span<const std::size_t> counts, int runs,
                                           std::uint64_t seed);

struct OpenWorldCounts {
    double tau = 0.0;
    std::size_t tp_sound = 0;    // foreground, correct identity
    std::size_t tp_unsound = 0;  // foreground, wrong identity
    std::size_t fp = 0;          // background predicted foreground
    std::size_t fn = 0;          // gallery probe predicted background
    std::size_t n_eval = 0;      // gallery probes evaluated
    std::size_t n_images = 0;
};

struct CurvePoint {
    double tau = 0.0;
    double rr = 0.0;
    double fppi = 0.0;
};

/// Precomputed scores for the open-world evaluation. n_images counts
/// the distinct photos behind the evaluated instances.
struct OpenWorldData {
    std::vector<std::pair<std::string, ScoreVector>> gallery;  // truth, scores
    std::vector<ScoreVector> background;
    std::size_t n_images = 0;
};

OpenWorldData prepare_open_world(const GalleryModel& model, const Corpus& corpus,
                                 std::span<const std::string> gallery_instance_ids,
                                 std::span<const std::string> background_instance_ids,
                                 const std::function<std::vector<double>(const Instance&)>& featurize);

/// Foreground iff max_k S_k >= tau. tp_sound + tp_unsound + fn always
/// equals n_eval.
OpenWorldCounts open_world_counts(const GalleryModel& model, const OpenWorldData& data,
                                  double tau);

/// All observed max-scores plus -inf/+inf sentinels, ascending: the
/// exact step grid of the curve.
std::vector<double> default_tau_grid(const OpenWorldData& data);

/// RR(tau) = TP_s / n_eval, FPPI(tau) = FP / n_images. Both are
/// non-increasing in tau.
std::vector<CurvePoint> rr_fppi_curve(const GalleryModel& model, const OpenWorldData& data,
                                      std::span<const double> tau_grid);

// CSV writers (fixed headers, shortest round-trip number formatting).
void write_two_fold_csv(std::ostream& os, const TwoFoldResult& result);
void write_predictions_csv(std::ostream& os, const TwoFoldResult& result);
void write_per_identity_csv(std::ostream& os, const PerIdentityReport& report);
void write_subset_csv(std::ostream& os, const std::map<std::string, SubsetAccuracy>& subsets);
void write_matrix_csv(std::ostream& os, const CrossViewpointMatrix& matrix);
void write_sweep_csv(std::ostream& os, std::span<const SweepPoint> points);
void write_curve_csv(std::ostream& os, std::span<const CurvePoint> points);
void write_open_world_counts_csv(std::ostream& os, std::span<const OpenWorldCounts> counts);

}  // namespace mcpr
