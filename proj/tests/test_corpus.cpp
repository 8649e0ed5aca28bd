#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcpr/corpus.hpp"
#include "test_util.hpp"

using namespace mcpr;
using testutil::TempDir;
using testutil::spit;

namespace {

Corpus load_from(const std::string& anno, const std::string& photos) {
    TempDir tmp("corpus");
    spit(tmp.file("a.txt"), anno);
    spit(tmp.file("p.txt"), photos);
    return load_corpus(tmp.file("a.txt"), tmp.file("p.txt"));
}

// Randomised but reproducible corpus for the round-trip property.
Corpus random_corpus(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<PhotoMeta> photos;
    const int n_photos = 2 + static_cast<int>(rng.below(6));
    for (int p = 0; p < n_photos; ++p) {
        PhotoMeta photo;
        photo.photo_id = "p" + std::to_string(p);
        if (rng.uniform() < 0.6) photo.album_id = "alb" + std::to_string(rng.below(3));
        if (rng.uniform() < 0.7) photo.taken_at = static_cast<std::int64_t>(rng.below(100000));
        photo.width = 100 + rng.uniform() * 900;
        photo.height = 100 + rng.uniform() * 900;
        photos.push_back(photo);
    }
    std::vector<Instance> instances;
    const int n_inst = 1 + static_cast<int>(rng.below(12));
    for (int i = 0; i < n_inst; ++i) {
        Instance inst;
        inst.instance_id = "i" + std::to_string(i);
        inst.photo_id = "p" + std::to_string(rng.below(static_cast<std::size_t>(n_photos)));
        inst.head = {rng.uniform() * 50 - 10, rng.uniform() * 50 - 10, 1 + rng.uniform() * 40,
                     1 + rng.uniform() * 40};
        if (rng.uniform() < 0.8) inst.identity = "id" + std::to_string(rng.below(4));
        if (rng.uniform() < 0.5) {
            FaceDetection face;
            face.box = {inst.head.x + 1, inst.head.y + 1, inst.head.w / 2, inst.head.h / 2};
            face.score = rng.uniform();
            const FaceComponent comps[5] = {FaceComponent::M90, FaceComponent::M45,
                                            FaceComponent::F0, FaceComponent::P45,
                                            FaceComponent::P90};
            face.component = comps[rng.below(5)];
            inst.matched_face = face;
        }
        inst.viewpoint = viewpoint_from_face(inst.matched_face);
        instances.push_back(inst);
    }
    return Corpus(std::move(photos), std::move(instances));
}

}  // namespace

TEST_CASE("empty files give an empty corpus") {
    const Corpus c = load_from("", "");
    CHECK(c.photos().empty());
    CHECK(c.instances().empty());
}

TEST_CASE("minimal one photo one instance") {
    const Corpus c = load_from("i1 p1 10 20 30 40 alice - - - - - -\n", "p1 - - 640 480\n");
    REQUIRE(c.photos().size() == 1);
    REQUIRE(c.instances().size() == 1);
    const Instance& inst = c.instances()[0];
    CHECK(inst.instance_id == "i1");
    CHECK(inst.head == BBox{10, 20, 30, 40});
    CHECK(inst.identity == "alice");
    CHECK_FALSE(inst.matched_face.has_value());
    CHECK(inst.viewpoint == Viewpoint::NFD);
    CHECK(c.photo("p1").width == 640);
    CHECK_FALSE(c.photo("p1").album_id.has_value());
}

TEST_CASE("face columns populate the detection and viewpoint") {
    const Corpus c =
        load_from("i1 p1 0 0 10 10 bob 1 2 3 4 0.9 f0\n"
                  "i2 p1 20 0 10 10 bob 21 2 3 4 0.8 p90\n",
                  "p1 alb1 1500000000 640 480\n");
    CHECK(c.instances()[0].viewpoint == Viewpoint::FR);
    CHECK(c.instances()[0].matched_face->score == 0.9);
    CHECK(c.instances()[1].viewpoint == Viewpoint::NFR);
    CHECK(c.instances()[1].matched_face->component == FaceComponent::P90);
}

TEST_CASE("comments and blank lines are skipped") {
    const Corpus c =
        load_from("# header\n\ni1 p1 0 0 1 1 - - - - - - -\n", "# photos\np1 - - 10 10\n");
    CHECK(c.instances().size() == 1);
    CHECK(c.instances()[0].is_background());
}

TEST_CASE("dangling photo reference reports the problem") {
    CHECK_THROWS_WITH_AS(load_from("i1 nope 0 0 1 1 a - - - - - -\n", "p1 - - 10 10\n"),
                         doctest::Contains("dangling photo reference"), DataError);
}

TEST_CASE("duplicate instance id is rejected") {
    CHECK_THROWS_WITH_AS(
        load_from("i1 p1 0 0 1 1 a - - - - - -\ni1 p1 5 5 1 1 b - - - - - -\n", "p1 - - 10 10\n"),
        doctest::Contains("duplicate instance_id"), DataError);
}

TEST_CASE("parse errors carry the line number") {
    CHECK_THROWS_WITH_AS(load_from("i1 p1 0 0 1 1 a - - - - - -\nbroken line\n", "p1 - - 10 10\n"),
                         doctest::Contains(":2"), DataError);
    CHECK_THROWS_WITH_AS(load_from("i1 p1 0 0 NaNoNum 1 a - - - - - -\n", "p1 - - 10 10\n"),
                         doctest::Contains(":1"), DataError);
}

TEST_CASE("duplicate (photo, box, identity) triple is rejected") {
    CHECK_THROWS_WITH_AS(
        load_from("i1 p1 0 0 1 1 a - - - - - -\ni2 p1 0 0 1 1 a - - - - - -\n", "p1 - - 10 10\n"),
        doctest::Contains("duplicate (photo, head box, identity)"), DataError);
}

TEST_CASE("save then load is the identity") {
    TempDir tmp("roundtrip");
    // 3 photos / 5 instances covering the optional fields: missing
    // timestamps, missing albums, background instances.
    const Corpus original = load_from(
        "i1 p1 0.5 1.25 10 10 a 1 2 3 4 0.5 f0\n"
        "i2 p1 20 0 10 10 b - - - - - -\n"
        "i3 p2 -5 -5 30 40 a 0 0 5 5 0.25 m45\n"
        "i4 p2 1 1 2 2 - 1 1 1 1 0.125 p45\n"
        "i5 p3 7 8 9 10 c - - - - - -\n",
        "p1 alb1 1000 640 480\np2 - - 1024 768\np3 alb2 2000 320 240\n");
    save_corpus(original, tmp.file("a.txt"), tmp.file("p.txt"));
    const Corpus reloaded = load_corpus(tmp.file("a.txt"), tmp.file("p.txt"));
    CHECK(original == reloaded);
}

TEST_CASE("round-trip property on random corpora") {
    TempDir tmp("roundtrip_prop");
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const Corpus original = random_corpus(seed);
        save_corpus(original, tmp.file("a.txt"), tmp.file("p.txt"));
        const Corpus reloaded = load_corpus(tmp.file("a.txt"), tmp.file("p.txt"));
        REQUIRE(original == reloaded);
    }
}

TEST_CASE("instance iteration preserves file order") {
    const Corpus c = load_from(
        "iz p1 0 0 1 1 a - - - - - -\nia p1 2 2 1 1 b - - - - - -\nim p1 4 4 1 1 c - - - - - -\n",
        "p1 - - 10 10\n");
    REQUIRE(c.instances().size() == 3);
    CHECK(c.instances()[0].instance_id == "iz");
    CHECK(c.instances()[1].instance_id == "ia");
    CHECK(c.instances()[2].instance_id == "im");
}

TEST_CASE("corpus_stats counts directly") {
    const Corpus c = load_from(
        "i1 p1 0 0 1 1 a - - - - - -\n"
        "i2 p1 2 0 1 1 a - - - - - -\n"
        "i3 p2 0 0 1 1 a - - - - - -\n"
        "i4 p2 2 0 1 1 b - - - - - -\n",
        "p1 alb1 - 10 10\np2 alb2 - 10 10\n");
    const CorpusStats s = corpus_stats(c);
    CHECK(s.instances == 4);
    CHECK(s.identities == 2);
    CHECK(s.photos == 2);
    CHECK(s.albums == 2);
    CHECK(s.instances_per_identity.at("a") == 3);
    CHECK(s.instances_per_identity.at("b") == 1);
}

TEST_CASE("background-only corpus has zero identities") {
    const Corpus c = load_from("i1 p1 0 0 1 1 - - - - - - -\ni2 p1 2 0 1 1 - - - - - - -\n",
                               "p1 - - 10 10\n");
    const CorpusStats s = corpus_stats(c);
    CHECK(s.identities == 0);
    CHECK(s.background_instances == 2);
}

TEST_CASE("stats equal a brute-force recount on random corpora") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const Corpus c = random_corpus(seed);
        const CorpusStats s = corpus_stats(c);
        std::size_t background = 0;
        std::map<std::string, std::size_t> per_identity;
        for (const auto& inst : c.instances()) {
            if (inst.identity) {
                ++per_identity[*inst.identity];
            } else {
                ++background;
            }
        }
        CHECK(s.instances == c.instances().size());
        CHECK(s.background_instances == background);
        CHECK(s.instances_per_identity == per_identity);
        CHECK(s.identities == per_identity.size());
    }
}
