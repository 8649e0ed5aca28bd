#include "mcpr/synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace mcpr {

namespace {

std::string zero_pad(int value, int width) {
    std::string s = std::to_string(value);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

// Integer quotas summing to `total`, each within one of total * frac.
std::vector<std::size_t> largest_remainder(std::size_t total, std::span<const double> fracs) {
    std::vector<std::size_t> quota(fracs.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < fracs.size(); ++i) {
        const double exact = static_cast<double>(total) * fracs[i];
        quota[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += quota[i];
        remainders.push_back({exact - std::floor(exact), i});
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& l, const auto& r) { return l.first > r.first; });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned) {
        ++quota[remainders[i % remainders.size()].second];
    }
    return quota;
}

FaceDetection make_face(const BBox& head, FaceComponent component, Rng& rng) {
    FaceDetection face;
    face.box = {head.x + 0.15 * head.w, head.y + 0.2 * head.h, 0.7 * head.w, 0.6 * head.h};
    face.score = 0.5 + 0.5 * rng.uniform();
    face.component = component;
    return face;
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusSpec& spec) {
    if (spec.n_identities <= 0) throw ConfigError("n_identities must be positive");
    if (spec.instances_per_identity <= 0 && spec.total_instances == 0) {
        throw ConfigError("instances_per_identity must be positive");
    }
    if (spec.albums_per_identity <= 0) throw ConfigError("albums_per_identity must be positive");
    if (spec.day_groups_per_identity <= 0) {
        throw ConfigError("day_groups_per_identity must be positive");
    }
    // The published mix is rounded to two decimals and sums to 0.9999;
    // accept near-1 and renormalise.
    const double frac_sum = spec.frac_fr + spec.frac_nfr + spec.frac_nfd;
    if (std::fabs(frac_sum - 1.0) > 1e-3) {
        throw ConfigError("viewpoint proportions must sum to 1");
    }
    if (spec.background_instances < 0) throw ConfigError("background count must be >= 0");
    if (spec.missing_time_fraction < 0 || spec.missing_time_fraction > 1) {
        throw ConfigError("missing_time_fraction must be in [0,1]");
    }

    const std::size_t total = spec.total_instances != 0
                                  ? spec.total_instances
                                  : static_cast<std::size_t>(spec.n_identities) *
                                        static_cast<std::size_t>(spec.instances_per_identity);
    std::vector<std::size_t> per_identity(static_cast<std::size_t>(spec.n_identities),
                                          total / spec.n_identities);
    for (std::size_t i = 0; i < total % spec.n_identities; ++i) ++per_identity[i];

    // Global viewpoint quota, shuffled so viewpoints mix across
    // identities rather than clustering at the tail.
    const double fracs[3] = {spec.frac_fr / frac_sum, spec.frac_nfr / frac_sum,
                             spec.frac_nfd / frac_sum};
    const auto vp_quota = largest_remainder(total, fracs);
    std::vector<Viewpoint> vp_sequence;
    vp_sequence.reserve(total);
    for (std::size_t i = 0; i < vp_quota[0]; ++i) vp_sequence.push_back(Viewpoint::FR);
    for (std::size_t i = 0; i < vp_quota[1]; ++i) vp_sequence.push_back(Viewpoint::NFR);
    for (std::size_t i = 0; i < vp_quota[2]; ++i) vp_sequence.push_back(Viewpoint::NFD);
    Rng vp_rng(hash_mix(spec.seed, hash_str("viewpoints")));
    vp_rng.shuffle(vp_sequence);

    const FaceComponent nfr_components[4] = {FaceComponent::M45, FaceComponent::P45,
                                             FaceComponent::M90, FaceComponent::P90};

    std::vector<PhotoMeta> photos;
    std::vector<Instance> instances;
    DayLabels day_labels;
    std::size_t vp_cursor = 0;
    std::size_t nfr_cursor = 0;
    const int id_width = static_cast<int>(std::to_string(spec.n_identities - 1).size());

    for (int id = 0; id < spec.n_identities; ++id) {
        const std::string identity = "id" + zero_pad(id, std::max(4, id_width));
        Rng rng(hash_mix(spec.seed, hash_str(identity)));
        const std::size_t n = per_identity[static_cast<std::size_t>(id)];
        const int days = spec.day_groups_per_identity;
        const int albums = std::max(spec.albums_per_identity, days);

        // Instances spread across day groups, albums round-robin
        // inside their day group.
        std::vector<double> day_fracs(static_cast<std::size_t>(days),
                                      1.0 / static_cast<double>(days));
        const auto day_quota = largest_remainder(n, day_fracs);
        std::vector<int> album_of_day(static_cast<std::size_t>(albums));
        for (int a = 0; a < albums; ++a) album_of_day[static_cast<std::size_t>(a)] = a % days;

        std::size_t member = 0;
        for (int g = 0; g < days; ++g) {
            std::vector<int> day_albums;
            for (int a = 0; a < albums; ++a) {
                if (album_of_day[static_cast<std::size_t>(a)] == g) day_albums.push_back(a);
            }
            for (std::size_t k = 0; k < day_quota[static_cast<std::size_t>(g)]; ++k, ++member) {
                const std::string instance_id =
                    "i" + identity.substr(2) + "_" + zero_pad(static_cast<int>(member), 3);
                const int album = day_albums[k % day_albums.size()];

                PhotoMeta photo;
                photo.photo_id = "ph_" + instance_id;
                photo.album_id = "al_" + identity.substr(2) + "_" + std::to_string(album);
                // Days are far apart in time; instances within a day
                // are minutes apart.
                const std::int64_t t = 1'000'000'000LL + static_cast<std::int64_t>(id) * 100'000'000LL +
                                       static_cast<std::int64_t>(g) * 10'000'000LL +
                                       static_cast<std::int64_t>(member) * 60LL;
                if (rng.uniform() >= spec.missing_time_fraction) photo.taken_at = t;
                photo.width = 1024;
                photo.height = 768;

                Instance inst;
                inst.instance_id = instance_id;
                inst.photo_id = photo.photo_id;
                const double head_h = 24.0 + 276.0 * rng.uniform();
                const double head_w = 0.8 * head_h;
                inst.head = {rng.uniform() * (photo.width - head_w),
                             rng.uniform() * (photo.height - head_h), head_w, head_h};
                inst.identity = identity;
                inst.viewpoint = vp_sequence[vp_cursor++];
                if (inst.viewpoint == Viewpoint::FR) {
                    inst.matched_face = make_face(inst.head, FaceComponent::F0, rng);
                } else if (inst.viewpoint == Viewpoint::NFR) {
                    inst.matched_face =
                        make_face(inst.head, nfr_components[nfr_cursor++ % 4], rng);
                }
                day_labels[instance_id] = "d" + std::to_string(g);

                photos.push_back(std::move(photo));
                instances.push_back(std::move(inst));
            }
        }
    }

    Rng bg_rng(hash_mix(spec.seed, hash_str("background")));
    const FaceComponent bg_components[5] = {FaceComponent::F0, FaceComponent::P45,
                                            FaceComponent::M45, FaceComponent::P90,
                                            FaceComponent::M90};
    for (int b = 0; b < spec.background_instances; ++b) {
        const std::string instance_id = "bg_" + zero_pad(b, 4);
        PhotoMeta photo;
        photo.photo_id = "ph_" + instance_id;
        photo.taken_at = 2'000'000'000LL + b;
        photo.width = 1024;
        photo.height = 768;
        Instance inst;
        inst.instance_id = instance_id;
        inst.photo_id = photo.photo_id;
        const double head_h = 24.0 + 276.0 * bg_rng.uniform();
        const double head_w = 0.8 * head_h;
        inst.head = {bg_rng.uniform() * (photo.width - head_w),
                     bg_rng.uniform() * (photo.height - head_h), head_w, head_h};
        inst.matched_face = make_face(inst.head, bg_components[b % 5], bg_rng);
        inst.viewpoint = viewpoint_from_face(inst.matched_face);
        photos.push_back(std::move(photo));
        instances.push_back(std::move(inst));
    }

    SyntheticCorpus out;
    out.corpus = Corpus(std::move(photos), std::move(instances));
    out.day_labels = std::move(day_labels);
    return out;
}

EmbeddingCache synthesize_cache(const SyntheticCorpus& data, const SyntheticEmbedderConfig& config,
                                const std::string& cue_name) {
    SyntheticEmbedder embedder(config);
    EmbeddingCache cache(cue_name, config.dim);
    for (const auto& inst : data.corpus.instances()) {
        auto it = data.day_labels.find(inst.instance_id);
        const std::string day_tag = it == data.day_labels.end() ? std::string() : it->second;
        cache.put(inst.instance_id, embedder.embed(inst, cue_name, day_tag).values);
    }
    return cache;
}

}  // namespace mcpr
