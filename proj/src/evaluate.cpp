#include "mcpr/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace mcpr {

namespace {

// One trained classifier behind a common predict() face.
class TrainedPredictor {
public:
    TrainedPredictor(ClassifierKind kind, std::span<const LabeledVector> train,
                     const SvmConfig& svm)
        : kind_(kind) {
        switch (kind_) {
            case ClassifierKind::Svm: svm_ = train_svm_ovr(train, svm); break;
            case ClassifierKind::Nn: nn_ = train_nn(train); break;
            case ClassifierKind::Chance: chance_ = train_chance(train); break;
        }
    }

    const std::string& predict(std::span<const double> x) const {
        switch (kind_) {
            case ClassifierKind::Svm: return predict_closed(svm_, x);
            case ClassifierKind::Nn: return predict_nn(nn_, x);
            case ClassifierKind::Chance: return predict_chance(chance_);
        }
        throw DataError("invalid classifier kind");
    }

private:
    ClassifierKind kind_;
    GalleryModel svm_;
    NnModel nn_;
    ChanceModel chance_;
};

// Instances of one fold in corpus order, optionally tag-filtered.
std::vector<const Instance*> fold_instances(const Corpus& corpus,
                                            const SplitAssignment& assignment, int fold) {
    std::vector<const Instance*> out;
    for (const auto& inst : corpus.instances()) {
        auto it = assignment.fold.find(inst.instance_id);
        if (it != assignment.fold.end() && it->second == fold) out.push_back(&inst);
    }
    return out;
}

// Tests one direction: train on `train`, predict every member of
// `test` whose identity is in the gallery. Probes of absent
// identities are skipped and reported.
FoldResult evaluate_direction(const Method& method, std::span<const Instance* const> train,
                              std::span<const Instance* const> test, int test_fold,
                              std::vector<std::string>* warnings) {
    std::set<std::string> gallery;
    std::vector<LabeledVector> train_vecs;
    train_vecs.reserve(train.size());
    for (const Instance* inst : train) {
        train_vecs.push_back({method.featurize(*inst), *inst->identity});
        gallery.insert(*inst->identity);
    }
    if (train_vecs.empty()) throw DataError("empty training fold");

    TrainedPredictor predictor(method.classifier, train_vecs, method.svm);

    FoldResult result;
    result.test_fold = test_fold;
    std::set<std::string> skipped;
    for (const Instance* inst : test) {
        if (!gallery.contains(*inst->identity)) {
            skipped.insert(*inst->identity);
            continue;
        }
        const std::string& predicted = predictor.predict(method.featurize(*inst));
        result.predictions.push_back({inst->instance_id, *inst->identity, predicted});
        if (predicted == *inst->identity) ++result.correct;
    }
    if (warnings) {
        for (const auto& identity : skipped) {
            warnings->push_back("identity '" + identity + "' has no training sample for test fold " +
                                std::to_string(test_fold) + "; probes skipped");
        }
    }
    return result;
}

double population_std(std::span<const double> values, double mean) {
    if (values.empty()) return 0.0;
    double s = 0;
    for (double v : values) s += (v - mean) * (v - mean);
    return std::sqrt(s / static_cast<double>(values.size()));
}

}  // namespace

ClassifierKind parse_classifier_kind(std::string_view name) {
    if (name == "svm") return ClassifierKind::Svm;
    if (name == "nn") return ClassifierKind::Nn;
    if (name == "chance") return ClassifierKind::Chance;
    throw ConfigError("unknown classifier '" + std::string(name) + "'");
}

std::string classifier_kind_name(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::Svm: return "svm";
        case ClassifierKind::Nn: return "nn";
        case ClassifierKind::Chance: return "chance";
    }
    throw ConfigError("invalid classifier kind value");
}

TwoFoldResult run_two_fold(const Corpus& corpus, const SplitAssignment& assignment,
                           const Method& method) {
    TwoFoldResult result;
    const std::array<std::vector<const Instance*>, 2> folds = {
        fold_instances(corpus, assignment, 0), fold_instances(corpus, assignment, 1)};
    for (int test_fold = 0; test_fold < 2; ++test_fold) {
        result.folds[static_cast<std::size_t>(test_fold)] =
            evaluate_direction(method, folds[static_cast<std::size_t>(1 - test_fold)],
                               folds[static_cast<std::size_t>(test_fold)], test_fold,
                               &result.warnings);
    }
    result.mean_accuracy =
        (result.folds[0].accuracy() + result.folds[1].accuracy()) / 2.0;
    return result;
}

PerIdentityReport per_identity_accuracy(std::span<const FoldResult> folds) {
    std::map<std::string, IdentityAccuracy> acc;
    for (const auto& fold : folds) {
        for (const auto& p : fold.predictions) {
            auto& entry = acc[p.truth];
            entry.identity = p.truth;
            ++entry.total;
            if (p.predicted == p.truth) ++entry.correct;
        }
    }
    PerIdentityReport report;
    for (auto& [identity, entry] : acc) {
        entry.accuracy = static_cast<double>(entry.correct) / static_cast<double>(entry.total);
        if (entry.correct == entry.total) ++report.identities_at_one;
        if (entry.correct == 0) ++report.identities_at_zero;
        report.sorted.push_back(entry);
    }
    // Descending accuracy; ties keep identity order for stable output.
    std::stable_sort(report.sorted.begin(), report.sorted.end(),
                     [](const IdentityAccuracy& l, const IdentityAccuracy& r) {
                         return l.accuracy > r.accuracy;
                     });
    return report;
}

std::map<std::string, SubsetAccuracy> subset_accuracy(
    const Corpus& corpus, std::span<const FoldResult> folds,
    const std::function<std::string(const Instance&)>& tag_fn) {
    std::map<std::string, SubsetAccuracy> subsets;
    for (const auto& fold : folds) {
        for (const auto& p : fold.predictions) {
            auto& entry = subsets[tag_fn(corpus.instance(p.instance_id))];
            ++entry.total;
            if (p.predicted == p.truth) ++entry.correct;
        }
    }
    for (auto& [tag, entry] : subsets) {
        entry.accuracy = static_cast<double>(entry.correct) / static_cast<double>(entry.total);
    }
    return subsets;
}

std::function<std::string(const Instance&)> make_resolution_tagger(
    std::vector<double> thresholds) {
    if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
        throw ConfigError("resolution thresholds must be ascending");
    }
    return [thresholds = std::move(thresholds)](const Instance& inst) {
        const double h = inst.head.h;
        double lo = 0;
        for (double t : thresholds) {
            if (h < t) {
                return "[" + format_double(lo) + "," + format_double(t) + ")";
            }
            lo = t;
        }
        return "[" + format_double(lo) + ",inf)";
    };
}

std::function<std::string(const Instance&)> viewpoint_tagger() {
    return [](const Instance& inst) { return viewpoint_name(inst.viewpoint); };
}

std::map<std::string, double> relative_accuracy(
    const std::map<std::string, double>& method_accuracies, double reference_accuracy) {
    if (!(reference_accuracy > 0)) {
        throw DataError("relative accuracy needs a positive reference");
    }
    std::map<std::string, double> out;
    for (const auto& [name, acc] : method_accuracies) out[name] = acc / reference_accuracy;
    return out;
}

CrossViewpointMatrix cross_viewpoint_matrix(
    const Corpus& corpus, const SplitAssignment& assignment, const Method& method,
    std::span<const std::string> train_tags, std::span<const std::string> test_tags,
    const std::function<std::string(const Instance&)>& tag_fn) {
    CrossViewpointMatrix matrix;
    matrix.train_tags.assign(train_tags.begin(), train_tags.end());
    matrix.test_tags.assign(test_tags.begin(), test_tags.end());
    matrix.cells.assign(train_tags.size() * test_tags.size(), std::nullopt);

    const std::array<std::vector<const Instance*>, 2> folds = {
        fold_instances(corpus, assignment, 0), fold_instances(corpus, assignment, 1)};

    auto filtered = [&](int fold, const std::string& tag) {
        std::vector<const Instance*> out;
        for (const Instance* inst : folds[static_cast<std::size_t>(fold)]) {
            if (tag_fn(*inst) == tag) out.push_back(inst);
        }
        return out;
    };

    for (std::size_t ti = 0; ti < train_tags.size(); ++ti) {
        for (std::size_t tj = 0; tj < test_tags.size(); ++tj) {
            double acc_sum = 0;
            int directions = 0;
            for (int test_fold = 0; test_fold < 2; ++test_fold) {
                const auto train = filtered(1 - test_fold, train_tags[ti]);
                const auto test = filtered(test_fold, test_tags[tj]);
                // At least two identities are needed to train at all.
                std::set<std::string> ids;
                for (const Instance* inst : train) ids.insert(*inst->identity);
                if (ids.size() < 2 || test.empty()) continue;
                const FoldResult r = evaluate_direction(method, train, test, test_fold, nullptr);
                if (r.total() == 0) continue;
                acc_sum += r.accuracy();
                ++directions;
            }
            if (directions > 0) {
                matrix.cells[ti * test_tags.size() + tj] = acc_sum / directions;
            }
        }
    }
    return matrix;
}

std::vector<SweepPoint> sample_count_sweep(const Corpus& corpus,
                                           const SplitAssignment& assignment, const Method& method,
                                           std::span<const std::size_t> counts, int runs,
                                           std::uint64_t seed) {
    if (runs <= 0) throw ConfigError("sample sweep needs at least one run");
    for (std::size_t n : counts) {
        if (n == 0) throw ConfigError("sample sweep counts must be positive");
    }
    const std::array<std::vector<const Instance*>, 2> folds = {
        fold_instances(corpus, assignment, 0), fold_instances(corpus, assignment, 1)};

    std::vector<SweepPoint> points;
    for (std::size_t n : counts) {
        std::vector<double> run_acc;
        for (int run = 0; run < runs; ++run) {
            double acc_sum = 0;
            for (int test_fold = 0; test_fold < 2; ++test_fold) {
                // Uniform subsample of at most n per identity.
                std::map<std::string, std::vector<const Instance*>> per_identity;
                for (const Instance* inst : folds[static_cast<std::size_t>(1 - test_fold)]) {
                    per_identity[*inst->identity].push_back(inst);
                }
                std::vector<const Instance*> train;
                for (auto& [identity, members] : per_identity) {
                    Rng rng(hash_mix(seed, hash_mix(hash_mix(n, static_cast<std::uint64_t>(run)),
                                                    hash_mix(hash_str(identity),
                                                             static_cast<std::uint64_t>(test_fold)))));
                    rng.shuffle(members);
                    const std::size_t take = std::min(n, members.size());
                    train.insert(train.end(), members.begin(),
                                 members.begin() + static_cast<std::ptrdiff_t>(take));
                }
                const FoldResult r =
                    evaluate_direction(method, train, folds[static_cast<std::size_t>(test_fold)],
                                       test_fold, nullptr);
                acc_sum += r.accuracy();
            }
            run_acc.push_back(acc_sum / 2.0);
        }
        SweepPoint p;
        p.n = n;
        for (double a : run_acc) p.mean_accuracy += a;
        p.mean_accuracy /= static_cast<double>(run_acc.size());
        p.std_accuracy = population_std(run_acc, p.mean_accuracy);
        points.push_back(p);
    }
    return points;
}

OpenWorldData prepare_open_world(
    const GalleryModel& model, const Corpus& corpus,
    std::span<const std::string> gallery_instance_ids,
    std::span<const std::string> background_instance_ids,
    const std::function<std::vector<double>(const Instance&)>& featurize) {
    OpenWorldData data;
    std::set<std::string> photos;
    for (const auto& id : gallery_instance_ids) {
        const Instance& inst = corpus.instance(id);
        if (!inst.identity) throw DataError("gallery probe '" + id + "' has no identity");
        data.gallery.emplace_back(*inst.identity, score(model, featurize(inst)));
        photos.insert(inst.photo_id);
    }
    for (const auto& id : background_instance_ids) {
        const Instance& inst = corpus.instance(id);
        data.background.push_back(score(model, featurize(inst)));
        photos.insert(inst.photo_id);
    }
    data.n_images = photos.size();
    return data;
}

OpenWorldCounts open_world_counts(const GalleryModel& model, const OpenWorldData& data,
                                  double tau) {
    OpenWorldCounts counts;
    counts.tau = tau;
    counts.n_eval = data.gallery.size();
    counts.n_images = data.n_images;
    for (const auto& [truth, scores] : data.gallery) {
        const std::size_t best = argmax_index(scores);
        if (scores[best] >= tau) {
            if (model.identities[best] == truth) {
                ++counts.tp_sound;
            } else {
                ++counts.tp_unsound;
            }
        } else {
            ++counts.fn;
        }
    }
    for (const auto& scores : data.background) {
        if (scores[argmax_index(scores)] >= tau) ++counts.fp;
    }
    return counts;
}

std::vector<double> default_tau_grid(const OpenWorldData& data) {
    std::set<double> taus;
    for (const auto& [truth, scores] : data.gallery) taus.insert(scores[argmax_index(scores)]);
    for (const auto& scores : data.background) taus.insert(scores[argmax_index(scores)]);
    std::vector<double> grid;
    grid.push_back(-std::numeric_limits<double>::infinity());
    grid.insert(grid.end(), taus.begin(), taus.end());
    grid.push_back(std::numeric_limits<double>::infinity());
    return grid;
}

std::vector<CurvePoint> rr_fppi_curve(const GalleryModel& model, const OpenWorldData& data,
                                      std::span<const double> tau_grid) {
    if (data.gallery.empty()) throw DataError("open-world evaluation set is empty");
    if (data.n_images == 0) throw DataError("open-world evaluation needs n_images > 0");
    if (!std::is_sorted(tau_grid.begin(), tau_grid.end())) {
        throw DataError("tau grid must be ascending");
    }
    std::vector<CurvePoint> curve;
    curve.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        const OpenWorldCounts c = open_world_counts(model, data, tau);
        CurvePoint p;
        p.tau = tau;
        p.rr = static_cast<double>(c.tp_sound) / static_cast<double>(c.n_eval);
        p.fppi = static_cast<double>(c.fp) / static_cast<double>(c.n_images);
        curve.push_back(p);
    }
    return curve;
}

void write_two_fold_csv(std::ostream& os, const TwoFoldResult& result) {
    os << "fold,correct,total,accuracy\n";
    for (const auto& fold : result.folds) {
        os << fold.test_fold << ',' << fold.correct << ',' << fold.total() << ','
           << format_double(fold.accuracy()) << '\n';
    }
    os << "mean,,," << format_double(result.mean_accuracy) << '\n';
}

void write_predictions_csv(std::ostream& os, const TwoFoldResult& result) {
    os << "fold,instance_id,truth,predicted,correct\n";
    for (const auto& fold : result.folds) {
        for (const auto& p : fold.predictions) {
            os << fold.test_fold << ',' << p.instance_id << ',' << p.truth << ',' << p.predicted
               << ',' << (p.predicted == p.truth ? 1 : 0) << '\n';
        }
    }
}

void write_per_identity_csv(std::ostream& os, const PerIdentityReport& report) {
    os << "identity,correct,total,accuracy\n";
    for (const auto& e : report.sorted) {
        os << e.identity << ',' << e.correct << ',' << e.total << ',' << format_double(e.accuracy)
           << '\n';
    }
}

void write_subset_csv(std::ostream& os, const std::map<std::string, SubsetAccuracy>& subsets) {
    os << "tag,correct,total,accuracy\n";
    for (const auto& [tag, e] : subsets) {
        os << tag << ',' << e.correct << ',' << e.total << ',' << format_double(e.accuracy)
           << '\n';
    }
}

void write_matrix_csv(std::ostream& os, const CrossViewpointMatrix& matrix) {
    os << "train_tag,test_tag,accuracy\n";
    for (std::size_t i = 0; i < matrix.train_tags.size(); ++i) {
        for (std::size_t j = 0; j < matrix.test_tags.size(); ++j) {
            const auto& cell = matrix.cell(i, j);
            os << matrix.train_tags[i] << ',' << matrix.test_tags[j] << ','
               << (cell ? format_double(*cell) : "nan") << '\n';
        }
    }
}

void write_sweep_csv(std::ostream& os, std::span<const SweepPoint> points) {
    os << "n,mean_acc,std_acc\n";
    for (const auto& p : points) {
        os << p.n << ',' << format_double(p.mean_accuracy) << ',' << format_double(p.std_accuracy)
           << '\n';
    }
}

void write_curve_csv(std::ostream& os, std::span<const CurvePoint> points) {
    os << "tau,rr,fppi\n";
    for (const auto& p : points) {
        os << format_double(p.tau) << ',' << format_double(p.rr) << ',' << format_double(p.fppi)
           << '\n';
    }
}

void write_open_world_counts_csv(std::ostream& os, std::span<const OpenWorldCounts> counts) {
    os << "tau,tp_sound,tp_unsound,fp,fn,n_eval,n_images\n";
    for (const auto& c : counts) {
        os << format_double(c.tau) << ',' << c.tp_sound << ',' << c.tp_unsound << ',' << c.fp
           << ',' << c.fn << ',' << c.n_eval << ',' << c.n_images << '\n';
    }
}

}  // namespace mcpr
