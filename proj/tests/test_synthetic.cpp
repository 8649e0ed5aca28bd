#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "mcpr/synthetic.hpp"
#include "test_util.hpp"

using namespace mcpr;
using testutil::TempDir;
using testutil::slurp;

TEST_CASE("instance count is the identity-instance product") {
    SyntheticCorpusSpec spec;
    spec.n_identities = 50;
    spec.instances_per_identity = 20;
    spec.seed = 7;
    const SyntheticCorpus data = generate_synthetic_corpus(spec);
    const CorpusStats stats = corpus_stats(data.corpus);
    CHECK(stats.instances == 1000);
    CHECK(stats.identities == 50);
    for (const auto& [id, n] : stats.instances_per_identity) CHECK(n == 20);
}

TEST_CASE("total_instances spreads unevenly sized identities") {
    // The published test-set scale: 581 identities, 6443 instances.
    SyntheticCorpusSpec spec;
    spec.n_identities = 581;
    spec.total_instances = 6443;
    spec.albums_per_identity = 2;
    spec.seed = 1;
    const SyntheticCorpus data = generate_synthetic_corpus(spec);
    const CorpusStats stats = corpus_stats(data.corpus);
    CHECK(stats.identities == 581);
    CHECK(stats.instances == 6443);
    for (const auto& [id, n] : stats.instances_per_identity) {
        CHECK(n >= 6443 / 581);
        CHECK(n <= 6443 / 581 + 1);
    }
}

TEST_CASE("viewpoint mix lands within one instance of the quotas") {
    SyntheticCorpusSpec spec;
    spec.n_identities = 37;
    spec.instances_per_identity = 13;
    spec.seed = 3;
    const SyntheticCorpus data = generate_synthetic_corpus(spec);
    std::map<Viewpoint, std::size_t> counts;
    std::size_t total = 0;
    for (const auto& inst : data.corpus.instances()) {
        if (inst.is_background()) continue;
        ++counts[inst.viewpoint];
        ++total;
    }
    const double sum = spec.frac_fr + spec.frac_nfr + spec.frac_nfd;
    CHECK(std::fabs(counts[Viewpoint::FR] - total * spec.frac_fr / sum) <= 1.0);
    CHECK(std::fabs(counts[Viewpoint::NFR] - total * spec.frac_nfr / sum) <= 1.0);
    CHECK(std::fabs(counts[Viewpoint::NFD] - total * spec.frac_nfd / sum) <= 1.0);
}

TEST_CASE("matched faces agree with the assigned viewpoints") {
    SyntheticCorpusSpec spec;
    spec.n_identities = 10;
    spec.instances_per_identity = 12;
    spec.background_instances = 15;
    spec.seed = 5;
    const SyntheticCorpus data = generate_synthetic_corpus(spec);
    std::size_t background_seen = 0;
    for (const auto& inst : data.corpus.instances()) {
        CHECK(inst.viewpoint == viewpoint_from_face(inst.matched_face));
        if (inst.is_background()) {
            ++background_seen;
            CHECK(inst.matched_face.has_value());  // background rows are detector hits
        }
    }
    CHECK(background_seen == 15);
}

TEST_CASE("day labels cover every identified instance with ordered timestamps") {
    SyntheticCorpusSpec spec;
    spec.n_identities = 6;
    spec.instances_per_identity = 10;
    spec.day_groups_per_identity = 2;
    spec.seed = 11;
    const SyntheticCorpus data = generate_synthetic_corpus(spec);
    std::map<std::string, std::set<std::string>> groups_per_identity;
    std::map<std::string, std::int64_t> d0_max, d1_min;
    for (const auto& inst : data.corpus.instances()) {
        if (inst.is_background()) continue;
        REQUIRE(data.day_labels.contains(inst.instance_id));
        const std::string tag = data.day_labels.at(inst.instance_id);
        groups_per_identity[*inst.identity].insert(tag);
        const auto t = data.corpus.photo(inst.photo_id).taken_at;
        REQUIRE(t.has_value());
        if (tag == "d0") {
            auto [it, fresh] = d0_max.try_emplace(*inst.identity, *t);
            if (!fresh) it->second = std::max(it->second, *t);
        } else {
            auto [it, fresh] = d1_min.try_emplace(*inst.identity, *t);
            if (!fresh) it->second = std::min(it->second, *t);
        }
    }
    for (const auto& [identity, groups] : groups_per_identity) {
        CHECK(groups.size() == 2);
        // day groups are separated in time
        CHECK(d0_max.at(identity) < d1_min.at(identity));
    }
}

TEST_CASE("albums never straddle day groups") {
    SyntheticCorpusSpec spec;
    spec.n_identities = 8;
    spec.instances_per_identity = 12;
    spec.albums_per_identity = 3;
    spec.day_groups_per_identity = 2;
    spec.seed = 13;
    const SyntheticCorpus data = generate_synthetic_corpus(spec);
    std::map<std::string, std::set<std::string>> album_days;
    for (const auto& inst : data.corpus.instances()) {
        if (inst.is_background()) continue;
        const auto& album = data.corpus.photo(inst.photo_id).album_id;
        REQUIRE(album.has_value());
        album_days[*album].insert(data.day_labels.at(inst.instance_id));
    }
    for (const auto& [album, days] : album_days) CHECK(days.size() == 1);
}

TEST_CASE("same seed gives byte-identical artifacts") {
    SyntheticCorpusSpec spec;
    spec.n_identities = 9;
    spec.instances_per_identity = 8;
    spec.background_instances = 5;
    spec.missing_time_fraction = 0.2;
    spec.seed = 17;

    TempDir tmp("determinism");
    for (int round = 0; round < 2; ++round) {
        const SyntheticCorpus data = generate_synthetic_corpus(spec);
        const std::string suffix = std::to_string(round);
        save_corpus(data.corpus, tmp.file("a" + suffix), tmp.file("p" + suffix));
        save_day_labels(tmp.file("d" + suffix), data.day_labels);
        save_embedding_cache(tmp.file("e" + suffix),
                             synthesize_cache(data, spec.embedder, "head"));
    }
    CHECK(slurp(tmp.file("a0")) == slurp(tmp.file("a1")));
    CHECK(slurp(tmp.file("p0")) == slurp(tmp.file("p1")));
    CHECK(slurp(tmp.file("d0")) == slurp(tmp.file("d1")));
    CHECK(slurp(tmp.file("e0")) == slurp(tmp.file("e1")));
    CHECK(!slurp(tmp.file("e0")).empty());
}

TEST_CASE("different seeds change the corpus") {
    SyntheticCorpusSpec spec;
    spec.n_identities = 4;
    spec.instances_per_identity = 6;
    spec.seed = 1;
    const SyntheticCorpus a = generate_synthetic_corpus(spec);
    spec.seed = 2;
    const SyntheticCorpus b = generate_synthetic_corpus(spec);
    CHECK(!(a.corpus == b.corpus));
}

TEST_CASE("caches cover every instance in corpus order") {
    SyntheticCorpusSpec spec;
    spec.n_identities = 5;
    spec.instances_per_identity = 6;
    spec.background_instances = 4;
    spec.seed = 23;
    spec.embedder.dim = 12;
    const SyntheticCorpus data = generate_synthetic_corpus(spec);
    const EmbeddingCache cache = synthesize_cache(data, spec.embedder, "body");
    REQUIRE(cache.size() == data.corpus.instances().size());
    CHECK(cache.dim() == 12);
    for (std::size_t i = 0; i < cache.entries().size(); ++i) {
        CHECK(cache.entries()[i].first == data.corpus.instances()[i].instance_id);
    }
}

TEST_CASE("invalid specs are rejected") {
    SyntheticCorpusSpec spec;
    spec.n_identities = 0;
    CHECK_THROWS_AS(generate_synthetic_corpus(spec), ConfigError);
    spec.n_identities = 2;
    spec.frac_fr = 0.9;
    spec.frac_nfr = 0.9;
    spec.frac_nfd = 0.9;
    CHECK_THROWS_AS(generate_synthetic_corpus(spec), ConfigError);
}
