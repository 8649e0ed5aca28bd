#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "mcpr/geometry.hpp"

using namespace mcpr;

namespace {

BBox random_box(Rng& rng) {
    return {rng.uniform() * 100 - 50, rng.uniform() * 100 - 50, 0.5 + rng.uniform() * 50,
            0.5 + rng.uniform() * 50};
}

Instance head_instance(const std::string& id, const BBox& box) {
    Instance inst;
    inst.instance_id = id;
    inst.photo_id = "p";
    inst.head = box;
    inst.identity = "x";
    return inst;
}

// Brute force over every one-to-one face->head assignment; the greedy
// matcher must never produce more pairs than the best assignment.
std::size_t max_matching_size(std::span<const Instance> heads,
                              std::span<const FaceDetection> faces, double threshold) {
    std::size_t best = 0;
    const std::size_t options = heads.size() + 1;
    std::size_t combos = 1;
    for (std::size_t f = 0; f < faces.size(); ++f) combos *= options;
    for (std::size_t code = 0; code < combos; ++code) {
        std::size_t rest = code;
        std::vector<bool> used(heads.size(), false);
        bool valid = true;
        std::size_t pairs = 0;
        for (std::size_t f = 0; f < faces.size() && valid; ++f) {
            const std::size_t pick = rest % options;
            rest /= options;
            if (pick == heads.size()) continue;  // unmatched
            if (used[pick] || iou(heads[pick].head, faces[f].box) < threshold) {
                valid = false;
                break;
            }
            used[pick] = true;
            ++pairs;
        }
        if (valid) best = std::max(best, pairs);
    }
    return best;
}

}  // namespace

TEST_CASE("iou basics") {
    const BBox a{0, 0, 2, 2};
    CHECK(iou(a, a) == 1.0);
    CHECK(iou(a, BBox{10, 10, 2, 2}) == 0.0);
    CHECK(iou(a, BBox{2, 0, 2, 2}) == 0.0);  // half-open: touching edges do not overlap
    // (0,0,2,2) vs (1,0,2,2): intersection 1x2 = 2, union 4+4-2 = 6
    CHECK(iou(a, BBox{1, 0, 2, 2}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("iou properties over random boxes") {
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        const BBox a = random_box(rng);
        const BBox b = random_box(rng);
        const double ab = iou(a, b);
        CHECK(ab == iou(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        const double dx = rng.uniform() * 20 - 10;
        const double dy = rng.uniform() * 20 - 10;
        const BBox at{a.x + dx, a.y + dy, a.w, a.h};
        const BBox bt{b.x + dx, b.y + dy, b.w, b.h};
        CHECK(iou(at, bt) == doctest::Approx(ab).epsilon(1e-9));
        if (ab == 1.0) CHECK(a == b);
        CHECK(iou(a, a) == 1.0);
    }
}

TEST_CASE("matching: single candidate above and below threshold") {
    const std::vector<Instance> heads = {head_instance("h1", {0, 0, 10, 10})};
    std::vector<FaceDetection> faces = {{{1, 1, 9, 9}, 0.7, FaceComponent::F0}};
    const double ov = iou(heads[0].head, faces[0].box);
    REQUIRE(ov > 0.5);

    MatchResult hit = match_faces_to_heads(heads, faces, 0.5);
    REQUIRE(hit.pairs.size() == 1);
    CHECK(hit.pairs[0].instance_id == "h1");
    CHECK(hit.pairs[0].iou == doctest::Approx(ov));
    CHECK(hit.unmatched_heads.empty());
    CHECK(hit.unmatched_faces.empty());

    faces[0].box = {7, 7, 10, 10};  // IoU well below 0.5
    MatchResult miss = match_faces_to_heads(heads, faces, 0.5);
    CHECK(miss.pairs.empty());
    CHECK(miss.unmatched_heads == std::vector<std::string>{"h1"});
    CHECK(miss.unmatched_faces == std::vector<std::size_t>{0});
}

TEST_CASE("matching: higher score wins a contested head") {
    const std::vector<Instance> heads = {head_instance("h1", {0, 0, 10, 10})};
    const std::vector<FaceDetection> faces = {{{0, 0, 10, 10}, 0.9, FaceComponent::F0},
                                              {{1, 0, 10, 10}, 0.8, FaceComponent::P45}};
    const MatchResult result = match_faces_to_heads(heads, faces, 0.5);
    REQUIRE(result.pairs.size() == 1);
    CHECK(result.pairs[0].face_index == 0);
    CHECK(result.unmatched_faces == std::vector<std::size_t>{1});

    CHECK(max_matching_size(heads, faces, 0.5) == 1);
}

TEST_CASE("matching invariants on random scenes") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Instance> heads;
        const std::size_t n_heads = 1 + rng.below(4);
        for (std::size_t h = 0; h < n_heads; ++h) {
            heads.push_back(head_instance("h" + std::to_string(h),
                                          {rng.uniform() * 30, rng.uniform() * 30,
                                           2 + rng.uniform() * 15, 2 + rng.uniform() * 15}));
        }
        std::vector<FaceDetection> faces;
        const std::size_t n_faces = rng.below(4);
        for (std::size_t f = 0; f < n_faces; ++f) {
            faces.push_back({{rng.uniform() * 30, rng.uniform() * 30, 2 + rng.uniform() * 15,
                              2 + rng.uniform() * 15},
                             rng.uniform(),
                             FaceComponent::F0});
        }
        const double threshold = 0.2 + rng.uniform() * 0.6;
        const MatchResult result = match_faces_to_heads(heads, faces, threshold);

        CHECK(result.pairs.size() + result.unmatched_heads.size() == heads.size());
        CHECK(result.pairs.size() + result.unmatched_faces.size() == faces.size());
        CHECK(result.pairs.size() <= std::min(heads.size(), faces.size()));
        std::set<std::string> seen_heads;
        std::set<std::size_t> seen_faces;
        for (const auto& p : result.pairs) {
            CHECK(p.iou >= threshold);
            CHECK(seen_heads.insert(p.instance_id).second);
            CHECK(seen_faces.insert(p.face_index).second);
        }
    }
}

TEST_CASE("detection score filter keeps order and the boundary") {
    const std::vector<FaceDetection> faces = {{{0, 0, 1, 1}, 0.9, FaceComponent::F0},
                                              {{1, 0, 1, 1}, 0.3, FaceComponent::P45},
                                              {{2, 0, 1, 1}, 0.5, FaceComponent::M45}};
    const auto kept = filter_detections_by_score(faces, 0.5);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].score == 0.9);
    CHECK(kept[1].score == 0.5);  // >= keeps the boundary
    CHECK(filter_detections_by_score(faces, 2.0).empty());
}

TEST_CASE("assign_viewpoints partitions the corpus") {
    std::vector<PhotoMeta> photos = {{"p", std::nullopt, std::nullopt, 100, 100}};
    std::vector<Instance> instances = {head_instance("a", {0, 0, 10, 10}),
                                       head_instance("b", {20, 0, 10, 10}),
                                       head_instance("c", {40, 0, 10, 10})};
    const Corpus corpus(photos, instances);

    MatchResult matches;
    matches.pairs.push_back({"a", 0, 0.9, {{0, 0, 10, 10}, 0.9, FaceComponent::F0}});
    matches.pairs.push_back({"b", 1, 0.8, {{20, 0, 10, 10}, 0.8, FaceComponent::P90}});
    matches.unmatched_heads.push_back("c");

    const Corpus updated = assign_viewpoints(corpus, matches);
    CHECK(updated.instance("a").viewpoint == Viewpoint::FR);
    CHECK(updated.instance("b").viewpoint == Viewpoint::NFR);
    CHECK(updated.instance("c").viewpoint == Viewpoint::NFD);
    int count[3] = {0, 0, 0};
    for (const auto& inst : updated.instances()) ++count[static_cast<int>(inst.viewpoint)];
    CHECK(count[0] + count[1] + count[2] == 3);
}

TEST_CASE("match CSV export") {
    MatchResult result;
    result.pairs.push_back({"a", 1, 0.75, {{0, 0, 1, 1}, 0.9, FaceComponent::F0}});
    result.unmatched_faces.push_back(0);
    const std::vector<FaceDetection> faces = {{{5, 5, 1, 1}, 0.3, FaceComponent::M90},
                                              {{0, 0, 1, 1}, 0.9, FaceComponent::F0}};
    std::ostringstream os;
    write_match_csv(os, result, faces);
    CHECK(os.str() ==
          "instance_id,face_index,iou,component\n"
          "a,1,0.75,f0\n"
          "-,0,0,m90\n");
}

TEST_CASE("derive_regions follows the body formula") {
    // head (10,20,10,10): centre x = 15, body w = 30 -> body x = 0.
    const PhotoMeta photo{"p", std::nullopt, std::nullopt, 100, 100};
    const RegionSet r = derive_regions({10, 20, 10, 10}, photo, std::nullopt, BoxRegressor{});
    CHECK(r.body == BBox{0, 20, 30, 60});
    CHECK(r.upper == BBox{0, 20, 30, 30});
    CHECK(r.scene == BBox{0, 0, 100, 100});
    CHECK(r.head == BBox{10, 20, 10, 10});
}

TEST_CASE("derive_regions face fallback uses the regressor") {
    const PhotoMeta photo{"p", std::nullopt, std::nullopt, 50, 50};
    const BBox head{0, 0, 8, 8};
    const RegionSet with_id = derive_regions(head, photo, std::nullopt, BoxRegressor{});
    REQUIRE(with_id.face.has_value());
    CHECK(*with_id.face == head);  // identity regressor

    const BBox detection{2, 2, 4, 4};
    const RegionSet with_det = derive_regions(head, photo, detection, BoxRegressor{});
    CHECK(*with_det.face == detection);
}

TEST_CASE("scene region always equals the full photo") {
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const PhotoMeta photo{"p", std::nullopt, std::nullopt, 1 + rng.uniform() * 2000,
                              1 + rng.uniform() * 2000};
        const RegionSet r = derive_regions(random_box(rng), photo, std::nullopt, BoxRegressor{});
        CHECK(r.scene == BBox{0, 0, photo.width, photo.height});
    }
}

TEST_CASE("derive_regions is translation equivariant") {
    const PhotoMeta photo{"p", std::nullopt, std::nullopt, 200, 200};
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const BBox head = random_box(rng);
        const double dx = rng.uniform() * 40 - 20;
        const double dy = rng.uniform() * 40 - 20;
        const BBox moved{head.x + dx, head.y + dy, head.w, head.h};
        const RegionSet a = derive_regions(head, photo, std::nullopt, BoxRegressor{});
        const RegionSet b = derive_regions(moved, photo, std::nullopt, BoxRegressor{});
        CHECK(b.body.x == doctest::Approx(a.body.x + dx).epsilon(1e-12));
        CHECK(b.body.y == doctest::Approx(a.body.y + dy).epsilon(1e-12));
        CHECK(b.body.w == a.body.w);
        CHECK(b.upper.x == doctest::Approx(a.upper.x + dx).epsilon(1e-12));
        CHECK(b.scene == a.scene);  // scene excepted
    }
}

TEST_CASE("box regressor exact fit on a single pair") {
    const std::pair<BBox, BBox> pair{{0, 0, 10, 10}, {2, 3, 5, 5}};
    const BoxRegressor reg = fit_box_regressor({&pair, 1});
    CHECK(reg.scale_w == doctest::Approx(0.5));
    CHECK(reg.scale_h == doctest::Approx(0.5));
    CHECK(reg.offset_x == doctest::Approx(0.2));
    CHECK(reg.offset_y == doctest::Approx(0.3));
    const BBox back = apply_box_regressor(reg, pair.first);
    CHECK(back.x == doctest::Approx(2));
    CHECK(back.y == doctest::Approx(3));
    CHECK(back.w == doctest::Approx(5));
    CHECK(back.h == doctest::Approx(5));
}

TEST_CASE("box regressor identity and empty input") {
    const BBox b{4, 5, 6, 7};
    const std::pair<BBox, BBox> pair{b, b};
    const BoxRegressor reg = fit_box_regressor({&pair, 1});
    const BBox out = apply_box_regressor(reg, b);
    CHECK(out == b);
    CHECK_THROWS_AS(fit_box_regressor({}), DataError);
}

TEST_CASE("fit then apply is exact under a shared affine relation") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        BoxRegressor truth;
        truth.scale_w = 0.2 + rng.uniform() * 2;
        truth.scale_h = 0.2 + rng.uniform() * 2;
        truth.offset_x = rng.uniform() * 2 - 1;
        truth.offset_y = rng.uniform() * 2 - 1;
        std::vector<std::pair<BBox, BBox>> pairs;
        const std::size_t n = 1 + rng.below(6);
        for (std::size_t i = 0; i < n; ++i) {
            const BBox src = random_box(rng);
            pairs.emplace_back(src, apply_box_regressor(truth, src));
        }
        const BoxRegressor fitted = fit_box_regressor(pairs);
        for (const auto& [src, dst] : pairs) {
            const BBox out = apply_box_regressor(fitted, src);
            CHECK(out.x == doctest::Approx(dst.x).epsilon(1e-9));
            CHECK(out.y == doctest::Approx(dst.y).epsilon(1e-9));
            CHECK(out.w == doctest::Approx(dst.w).epsilon(1e-9));
            CHECK(out.h == doctest::Approx(dst.h).epsilon(1e-9));
        }
    }
}
