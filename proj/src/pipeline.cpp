#include "mcpr/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mcpr/evaluate.hpp"
#include "mcpr/synthetic.hpp"

namespace fs = std::filesystem;

namespace mcpr {

namespace {

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

// All artifact writers go through a temp file + rename.
void atomic_write_text(const std::string& path,
                       const std::function<void(std::ostream&)>& writer) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp + "'");
        writer(out);
        if (!out.flush()) throw DataError("write failed for '" + tmp + "'");
    }
    fs::rename(tmp, path);
}

template <typename SaveFn>
void atomic_save(const std::string& path, SaveFn save) {
    const std::string tmp = path + ".tmp";
    save(tmp);
    fs::rename(tmp, path);
}

std::uint64_t global_seed(const Config& config) {
    return static_cast<std::uint64_t>(config.get_int("seed", 0));
}

Viewpoint parse_viewpoint(const std::string& name) {
    if (name == "FR") return Viewpoint::FR;
    if (name == "NFR") return Viewpoint::NFR;
    if (name == "NFD") return Viewpoint::NFD;
    throw ConfigError("unknown viewpoint '" + name + "'");
}

// `cue:VP:factor` triples, comma separated.
void parse_attenuation(const Config& config, SyntheticEmbedderConfig& embedder) {
    if (!config.has("embed.attenuation")) return;
    for (const std::string& item : config.get_list("embed.attenuation")) {
        const auto c1 = item.find(':');
        const auto c2 = item.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw ConfigError("bad attenuation entry '" + item + "' (want cue:VP:factor)");
        }
        const std::string cue = item.substr(0, c1);
        const Viewpoint vp = parse_viewpoint(item.substr(c1 + 1, c2 - c1 - 1));
        embedder.viewpoint_attenuation[cue][vp] =
            parse_double(item.substr(c2 + 1), "embed.attenuation");
    }
}

// `cue:weight` pairs, comma separated.
void parse_day_signal(const Config& config, SyntheticEmbedderConfig& embedder) {
    if (!config.has("embed.day_signal")) return;
    for (const std::string& item : config.get_list("embed.day_signal")) {
        const auto c = item.find(':');
        if (c == std::string::npos) {
            throw ConfigError("bad day_signal entry '" + item + "' (want cue:weight)");
        }
        embedder.day_signal[item.substr(0, c)] =
            parse_double(item.substr(c + 1), "embed.day_signal");
    }
}

SyntheticEmbedderConfig embedder_config(const Config& config) {
    SyntheticEmbedderConfig e;
    e.seed = static_cast<std::uint64_t>(config.get_int("embed.seed",
                                                       static_cast<std::int64_t>(global_seed(config))));
    e.dim = static_cast<int>(config.get_int("embed.dim", 64));
    e.identity_signal = config.get_double("embed.identity_signal", 4.0);
    e.noise_sigma = config.get_double("embed.noise_sigma", 1.0);
    e.face_cue_missing_on_nfd = config.get_bool("embed.face_missing_on_nfd", true);
    parse_attenuation(config, e);
    parse_day_signal(config, e);
    return e;
}

std::string annotations_path(const Config& config, const std::string& out_dir) {
    return config.get_string("corpus.annotations", join(out_dir, "annotations.txt"));
}

std::string photos_path(const Config& config, const std::string& out_dir) {
    return config.get_string("corpus.photos", join(out_dir, "photos.txt"));
}

std::string day_labels_path(const Config& config, const std::string& out_dir) {
    return config.get_string("split.day_labels", join(out_dir, "day_labels.txt"));
}

SplitKind config_split_kind(const Config& config) {
    return parse_split_kind(config.get_string("split.kind", "original"));
}

std::string split_path(const Config& config, const std::string& out_dir) {
    return config.get_string(
        "split.file", join(out_dir, "split_" + split_kind_name(config_split_kind(config)) + ".txt"));
}

std::string cache_path(const Config& config, const std::string& out_dir, const std::string& cue) {
    return config.get_string("cue." + cue + ".cache", join(out_dir, "emb_" + cue + ".bin"));
}

const std::vector<std::string> kCanonicalCues = {"face", "head", "upper", "body", "scene"};

std::vector<std::string> cue_names(const Config& config) {
    return config.get_list("cues", {"head", "upper", "body", "scene", "face"});
}

SvmConfig svm_config(const Config& config) {
    SvmConfig svm;
    svm.c = config.get_double("svm.c", 1.0);
    svm.tolerance = config.get_double("svm.tolerance", 1e-6);
    svm.max_epochs = static_cast<int>(config.get_int("svm.max_epochs", 1000));
    svm.seed = static_cast<std::uint64_t>(
        config.get_int("svm.seed", static_cast<std::int64_t>(global_seed(config))));
    return svm;
}

double sweep_best_lambda(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        throw MissingArtifactError("fusion.lambda is 'sweep' but '" + csv_path +
                                   "' is missing; run sweep-lambda first");
    }
    std::string line;
    std::getline(in, line);  // header
    double best_lambda = 0, best_acc = -1;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        const double lambda = parse_double(line.substr(0, comma), csv_path);
        const double acc = parse_double(line.substr(comma + 1), csv_path);
        if (acc > best_acc) {
            best_acc = acc;
            best_lambda = lambda;
        }
    }
    if (best_acc < 0) throw DataError("no sweep rows in '" + csv_path + "'");
    return best_lambda;
}

FusionConfig fusion_config(const Config& config, const std::string& out_dir) {
    FusionConfig fusion;
    fusion.mode = parse_fusion_mode(config.get_string("fusion.mode", "l2concat"));
    if (fusion.mode == FusionMode::Weighted) {
        const std::string lambda = config.get_string("fusion.lambda", "1");
        fusion.lambda = lambda == "sweep"
                            ? sweep_best_lambda(join(out_dir, "lambda_sweep.csv"))
                            : parse_double(lambda, "fusion.lambda");
        if (fusion.lambda < 0) throw ConfigError("fusion.lambda must be >= 0");
    }
    return fusion;
}

// Corpus + split + per-cue embedding tables, as named by the config.
struct LoadedRun {
    Corpus corpus;
    SplitAssignment assignment;
    std::vector<EmbeddingCache> caches;  // in cue order
    std::vector<std::string> cues;
};

LoadedRun load_run(const Config& config, const std::string& out_dir, bool need_split = true) {
    LoadedRun run;
    run.corpus = load_corpus(annotations_path(config, out_dir), photos_path(config, out_dir));
    if (need_split) {
        run.assignment = load_split(split_path(config, out_dir), config_split_kind(config));
    }
    run.cues = cue_names(config);
    for (const std::string& cue : run.cues) {
        run.caches.push_back(load_embedding_cache(cache_path(config, out_dir, cue)));
    }
    return run;
}

Method build_method(const Config& config, const LoadedRun& run, FusionConfig fusion) {
    Method method;
    method.name = config.get_string("method.name", "method");
    method.classifier = parse_classifier_kind(config.get_string("classifier", "svm"));
    method.svm = svm_config(config);
    const std::vector<EmbeddingCache>* caches = &run.caches;
    method.featurize = [caches, fusion](const Instance& inst) {
        std::vector<CueVector> vectors;
        vectors.reserve(caches->size());
        for (const auto& cache : *caches) vectors.push_back(cache.cue_vector(inst.instance_id));
        return fuse(vectors, fusion);
    };
    return method;
}

void emit_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::vector<const Instance*> assigned_fold(const Corpus& corpus, const SplitAssignment& assignment,
                                           int fold) {
    std::vector<const Instance*> out;
    for (const auto& inst : corpus.instances()) {
        auto it = assignment.fold.find(inst.instance_id);
        if (it != assignment.fold.end() && it->second == fold) out.push_back(&inst);
    }
    return out;
}

}  // namespace

void cmd_gen_synthetic(const Config& config, const std::string& out_dir) {
    SyntheticCorpusSpec spec;
    spec.n_identities = static_cast<int>(config.get_int("synthetic.identities", 50));
    spec.instances_per_identity =
        static_cast<int>(config.get_int("synthetic.instances_per_identity", 20));
    spec.total_instances =
        static_cast<std::size_t>(config.get_int("synthetic.total_instances", 0));
    spec.albums_per_identity = static_cast<int>(config.get_int("synthetic.albums_per_identity", 4));
    spec.day_groups_per_identity = static_cast<int>(config.get_int("synthetic.day_groups", 2));
    if (config.has("synthetic.viewpoint_mix")) {
        const auto mix = config.get_list("synthetic.viewpoint_mix");
        if (mix.size() != 3) throw ConfigError("synthetic.viewpoint_mix wants three proportions");
        spec.frac_fr = parse_double(mix[0], "synthetic.viewpoint_mix");
        spec.frac_nfr = parse_double(mix[1], "synthetic.viewpoint_mix");
        spec.frac_nfd = parse_double(mix[2], "synthetic.viewpoint_mix");
    }
    spec.background_instances = static_cast<int>(config.get_int("synthetic.background", 0));
    spec.missing_time_fraction = config.get_double("synthetic.missing_time_fraction", 0.0);
    spec.seed = static_cast<std::uint64_t>(
        config.get_int("synthetic.seed", static_cast<std::int64_t>(global_seed(config))));
    spec.embedder = embedder_config(config);

    const SyntheticCorpus data = generate_synthetic_corpus(spec);

    fs::create_directories(out_dir);
    const std::string anno = annotations_path(config, out_dir);
    const std::string photos = photos_path(config, out_dir);
    atomic_save(anno, [&](const std::string& tmp) {
        // save_corpus writes both files; stage them under one temp pair
        save_corpus(data.corpus, tmp, photos + ".tmp");
    });
    fs::rename(photos + ".tmp", photos);
    atomic_save(day_labels_path(config, out_dir),
                [&](const std::string& tmp) { save_day_labels(tmp, data.day_labels); });
    for (const std::string& cue : kCanonicalCues) {
        const EmbeddingCache cache = synthesize_cache(data, spec.embedder, cue);
        atomic_save(cache_path(config, out_dir, cue),
                    [&](const std::string& tmp) { save_embedding_cache(tmp, cache); });
    }
}

void cmd_split(const Config& config, const std::string& out_dir) {
    const Corpus corpus =
        load_corpus(annotations_path(config, out_dir), photos_path(config, out_dir));
    const SplitKind kind = config_split_kind(config);
    const std::uint64_t seed = static_cast<std::uint64_t>(
        config.get_int("split.seed", static_cast<std::int64_t>(global_seed(config))));

    SplitAssignment assignment;
    switch (kind) {
        case SplitKind::Original: assignment = split_original(corpus, seed); break;
        case SplitKind::Album: assignment = split_album(corpus, seed); break;
        case SplitKind::Time: assignment = split_time(corpus); break;
        case SplitKind::Day:
            assignment =
                split_day(corpus, load_day_labels(day_labels_path(config, out_dir)), seed);
            break;
    }
    emit_warnings(assignment.warnings);

    const auto violations = validate_split(corpus, assignment);
    if (!violations.empty()) {
        throw DataError("generated split violates its constraints: " + violations.front());
    }
    fs::create_directories(out_dir);
    const std::string path = split_path(config, out_dir);
    save_split(path + ".tmp", assignment, corpus);
    fs::rename(path + ".tmp", path);
    fs::rename(path + ".tmp.discarded", path + ".discarded");
    if (assignment.kind == SplitKind::Album) {
        fs::rename(path + ".tmp.shared", path + ".shared");
    }
}

void cmd_embed(const Config& config, const std::string& out_dir) {
    const Corpus corpus =
        load_corpus(annotations_path(config, out_dir), photos_path(config, out_dir));
    const std::string provider = config.get_string("embed.provider", "synthetic");
    fs::create_directories(out_dir);

    if (provider == "synthetic") {
        SyntheticCorpus data;
        data.corpus = corpus;
        const std::string labels = day_labels_path(config, out_dir);
        if (fs::exists(labels)) data.day_labels = load_day_labels(labels);
        const SyntheticEmbedderConfig e = embedder_config(config);
        for (const std::string& cue : config.get_list("cues", kCanonicalCues)) {
            const EmbeddingCache cache = synthesize_cache(data, e, cue);
            atomic_save(cache_path(config, out_dir, cue),
                        [&](const std::string& tmp) { save_embedding_cache(tmp, cache); });
        }
        return;
    }
    if (provider == "rgb") {
        const RgbCropProvider rgb(config.get_string("rgb.crops_dir"),
                                  config.get_string("rgb.cue_name", "head_rgb"));
        EmbeddingCache cache(rgb.cue_name(), rgb.dim());
        for (const auto& inst : corpus.instances()) {
            cache.put(inst.instance_id, embed(rgb, corpus, inst, Region::Head).values);
        }
        atomic_save(cache_path(config, out_dir, rgb.cue_name()),
                    [&](const std::string& tmp) { save_embedding_cache(tmp, cache); });
        return;
    }
    throw ConfigError("unknown embed.provider '" + provider + "'");
}

void cmd_train(const Config& config, const std::string& out_dir) {
    const LoadedRun run = load_run(config, out_dir);
    const Method method = build_method(config, run, fusion_config(config, out_dir));
    if (method.classifier != ClassifierKind::Svm) {
        throw ConfigError("cmd train persists SVM gallery models; classifier must be 'svm'");
    }
    fs::create_directories(out_dir);
    for (int fold = 0; fold < 2; ++fold) {
        std::vector<LabeledVector> train;
        for (const Instance* inst : assigned_fold(run.corpus, run.assignment, fold)) {
            train.push_back({method.featurize(*inst), *inst->identity});
        }
        if (train.empty()) throw DataError("fold " + std::to_string(fold) + " has no instances");
        const GalleryModel model = train_svm_ovr(train, method.svm);
        atomic_save(join(out_dir, "model_fold" + std::to_string(fold) + ".bin"),
                    [&](const std::string& tmp) { save_gallery_model(tmp, model); });
    }
}

void cmd_eval(const Config& config, const std::string& out_dir) {
    const LoadedRun run = load_run(config, out_dir);
    const Method method = build_method(config, run, fusion_config(config, out_dir));
    const auto analyses =
        config.get_list("analyses", {"two_fold", "per_identity", "viewpoint", "resolution"});

    const TwoFoldResult result = run_two_fold(run.corpus, run.assignment, method);
    emit_warnings(result.warnings);
    fs::create_directories(out_dir);

    for (const std::string& analysis : analyses) {
        if (analysis == "two_fold") {
            atomic_write_text(join(out_dir, "two_fold.csv"),
                              [&](std::ostream& os) { write_two_fold_csv(os, result); });
            atomic_write_text(join(out_dir, "predictions.csv"),
                              [&](std::ostream& os) { write_predictions_csv(os, result); });
        } else if (analysis == "per_identity") {
            const PerIdentityReport report = per_identity_accuracy(result.folds);
            atomic_write_text(join(out_dir, "per_identity.csv"),
                              [&](std::ostream& os) { write_per_identity_csv(os, report); });
        } else if (analysis == "viewpoint") {
            const auto subsets = subset_accuracy(run.corpus, result.folds, viewpoint_tagger());
            atomic_write_text(join(out_dir, "subset_viewpoint.csv"),
                              [&](std::ostream& os) { write_subset_csv(os, subsets); });
        } else if (analysis == "resolution") {
            std::vector<double> bins;
            for (const std::string& b : config.get_list("resolution.bins", {"50", "100", "200"})) {
                bins.push_back(parse_double(b, "resolution.bins"));
            }
            const auto subsets =
                subset_accuracy(run.corpus, result.folds, make_resolution_tagger(bins));
            atomic_write_text(join(out_dir, "subset_resolution.csv"),
                              [&](std::ostream& os) { write_subset_csv(os, subsets); });
        } else if (analysis == "cross_viewpoint") {
            const std::vector<std::string> tags = {"FR", "NFR", "NFD"};
            const CrossViewpointMatrix matrix = cross_viewpoint_matrix(
                run.corpus, run.assignment, method, tags, tags, viewpoint_tagger());
            atomic_write_text(join(out_dir, "cross_viewpoint.csv"),
                              [&](std::ostream& os) { write_matrix_csv(os, matrix); });
        } else if (analysis == "sample_sweep") {
            std::vector<std::size_t> counts;
            for (const std::string& c : config.get_list("sweep.counts", {"1", "2", "5", "10"})) {
                const std::int64_t v = parse_int(c, "sweep.counts");
                if (v <= 0) throw ConfigError("sweep.counts must be positive");
                counts.push_back(static_cast<std::size_t>(v));
            }
            const int runs = static_cast<int>(config.get_int("sweep.runs", 10));
            const std::uint64_t seed = static_cast<std::uint64_t>(
                config.get_int("sweep.seed", static_cast<std::int64_t>(global_seed(config))));
            const auto points =
                sample_count_sweep(run.corpus, run.assignment, method, counts, runs, seed);
            atomic_write_text(join(out_dir, "sample_sweep.csv"),
                              [&](std::ostream& os) { write_sweep_csv(os, points); });
        } else if (analysis == "relative") {
            // Baselines on the same features, relative to this method.
            std::map<std::string, double> accs;
            accs[method.name] = result.mean_accuracy;
            for (ClassifierKind kind : {ClassifierKind::Nn, ClassifierKind::Chance}) {
                Method baseline = method;
                baseline.name = classifier_kind_name(kind);
                baseline.classifier = kind;
                accs[baseline.name] =
                    run_two_fold(run.corpus, run.assignment, baseline).mean_accuracy;
            }
            const auto rel = relative_accuracy(accs, result.mean_accuracy);
            atomic_write_text(join(out_dir, "relative.csv"), [&](std::ostream& os) {
                os << "method,accuracy,relative\n";
                for (const auto& [name, acc] : accs) {
                    os << name << ',' << format_double(acc) << ',' << format_double(rel.at(name))
                       << '\n';
                }
            });
        } else {
            throw ConfigError("unknown analysis '" + analysis + "'");
        }
    }
}

void cmd_openworld(const Config& config, const std::string& out_dir) {
    const LoadedRun run = load_run(config, out_dir);
    const Method method = build_method(config, run, fusion_config(config, out_dir));
    const int train_fold = static_cast<int>(config.get_int("openworld.train_fold", 0));
    if (train_fold != 0 && train_fold != 1) throw ConfigError("openworld.train_fold must be 0 or 1");

    const GalleryModel model =
        load_gallery_model(join(out_dir, "model_fold" + std::to_string(train_fold) + ".bin"));

    std::vector<std::string> gallery_ids;
    std::vector<std::string> background_ids;
    std::vector<std::string> warnings;
    const std::set<std::string> known(model.identities.begin(), model.identities.end());
    for (const Instance* inst : assigned_fold(run.corpus, run.assignment, 1 - train_fold)) {
        if (known.contains(*inst->identity)) {
            gallery_ids.push_back(inst->instance_id);
        } else {
            warnings.push_back("identity '" + *inst->identity + "' missing from the model; probe '" +
                               inst->instance_id + "' skipped");
        }
    }
    for (const auto& inst : run.corpus.instances()) {
        if (inst.is_background()) background_ids.push_back(inst.instance_id);
    }
    emit_warnings(warnings);

    const OpenWorldData data =
        prepare_open_world(model, run.corpus, gallery_ids, background_ids, method.featurize);
    const std::vector<double> grid = default_tau_grid(data);
    const std::vector<CurvePoint> curve = rr_fppi_curve(model, data, grid);
    std::vector<OpenWorldCounts> counts;
    counts.reserve(grid.size());
    for (double tau : grid) counts.push_back(open_world_counts(model, data, tau));

    fs::create_directories(out_dir);
    atomic_write_text(join(out_dir, "openworld_curve.csv"),
                      [&](std::ostream& os) { write_curve_csv(os, curve); });
    atomic_write_text(join(out_dir, "openworld_counts.csv"),
                      [&](std::ostream& os) { write_open_world_counts_csv(os, counts); });
}

void cmd_sweep_lambda(const Config& config, const std::string& out_dir) {
    const LoadedRun run = load_run(config, out_dir);
    if (parse_fusion_mode(config.get_string("fusion.mode", "weighted")) != FusionMode::Weighted) {
        throw ConfigError("sweep-lambda requires fusion.mode = weighted");
    }
    const std::vector<double> grid = lambda_grid();
    std::vector<std::pair<double, double>> rows;
    rows.reserve(grid.size());
    const auto eval_fn = [&](double lambda) {
        FusionConfig fusion{FusionMode::Weighted, lambda};
        const Method method = build_method(config, run, fusion);
        return run_two_fold(run.corpus, run.assignment, method).mean_accuracy;
    };
    for (double lambda : grid) rows.emplace_back(lambda, eval_fn(lambda));
    // Same argmax rule as optimize_lambda: ties go to the smaller lambda.
    std::pair<double, double> best = rows.front();
    for (const auto& row : rows) {
        if (row.second > best.second) best = row;
    }
    const auto [best_lambda, best_acc] = best;

    fs::create_directories(out_dir);
    atomic_write_text(join(out_dir, "lambda_sweep.csv"), [&](std::ostream& os) {
        os << "lambda,accuracy\n";
        for (const auto& [lambda, acc] : rows) {
            os << format_double(lambda) << ',' << format_double(acc) << '\n';
        }
    });
    std::cerr << "lambda* = " << format_double(best_lambda)
              << " (accuracy " << format_double(best_acc) << ")\n";
}

void cmd_report(const Config& config, const std::string& out_dir) {
    using nlohmann::json;
    const std::vector<std::string> tables = {
        "two_fold.csv",       "per_identity.csv",   "subset_viewpoint.csv",
        "subset_resolution.csv", "cross_viewpoint.csv", "sample_sweep.csv",
        "relative.csv",       "lambda_sweep.csv",   "openworld_curve.csv",
        "openworld_counts.csv"};

    json summary;
    summary["config"] = json::object();
    for (const auto& [key, value] : config.values()) summary["config"][key] = value;
    summary["seeds"]["global"] = global_seed(config);
    summary["seeds"]["split"] = static_cast<std::uint64_t>(
        config.get_int("split.seed", static_cast<std::int64_t>(global_seed(config))));
    summary["seeds"]["svm"] = svm_config(config).seed;
    summary["seeds"]["embed"] = embedder_config(config).seed;

    json loaded = json::object();
    std::size_t found = 0;
    for (const std::string& name : tables) {
        const std::string path = join(out_dir, name);
        std::ifstream in(path);
        if (!in) continue;
        ++found;
        json rows = json::array();
        std::string line;
        std::getline(in, line);  // header
        std::vector<std::string> header;
        {
            std::istringstream hs(line);
            std::string cell;
            while (std::getline(hs, cell, ',')) header.push_back(cell);
        }
        while (std::getline(in, line)) {
            json row = json::object();
            std::istringstream ls(line);
            std::string cell;
            std::size_t col = 0;
            while (std::getline(ls, cell, ',')) {
                row[col < header.size() ? header[col] : std::to_string(col)] = cell;
                ++col;
            }
            rows.push_back(row);
        }
        loaded[name.substr(0, name.size() - 4)] = rows;
    }
    if (found == 0) {
        throw MissingArtifactError("no result tables under '" + out_dir + "'; run eval first");
    }
    summary["tables"] = loaded;

    atomic_write_text(join(out_dir, "summary.json"),
                      [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
}

int run_command(const std::string& name, const Config& config, const std::string& out_dir) {
    try {
        if (name == "gen-synthetic") {
            cmd_gen_synthetic(config, out_dir);
        } else if (name == "split") {
            cmd_split(config, out_dir);
        } else if (name == "embed") {
            cmd_embed(config, out_dir);
        } else if (name == "train") {
            cmd_train(config, out_dir);
        } else if (name == "eval") {
            cmd_eval(config, out_dir);
        } else if (name == "openworld") {
            cmd_openworld(config, out_dir);
        } else if (name == "sweep-lambda") {
            cmd_sweep_lambda(config, out_dir);
        } else if (name == "report") {
            cmd_report(config, out_dir);
        } else {
            std::cerr << "error: config: unknown subcommand '" << name << "'\n";
            return 2;
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return 2;
    } catch (const MissingArtifactError& e) {
        std::cerr << "error: missing-artifact: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: data: " << e.what() << '\n';
        return 4;
    }
}

}  // namespace mcpr
