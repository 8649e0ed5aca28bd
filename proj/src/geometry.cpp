#include "mcpr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mcpr {

std::string region_name(Region r) {
    switch (r) {
        case Region::Face: return "face";
        case Region::Head: return "head";
        case Region::Upper: return "upper";
        case Region::Body: return "body";
        case Region::Scene: return "scene";
    }
    throw DataError("invalid region value");
}

Region parse_region(std::string_view name) {
    if (name == "face") return Region::Face;
    if (name == "head") return Region::Head;
    if (name == "upper") return Region::Upper;
    if (name == "body") return Region::Body;
    if (name == "scene") return Region::Scene;
    throw DataError("unknown region '" + std::string(name) + "'");
}

double iou(const BBox& a, const BBox& b) {
    if (a == b) return 1.0;  // exact, sidestepping (x + w) - x rounding
    const double ix = std::max(a.x, b.x);
    const double iy = std::max(a.y, b.y);
    const double ix2 = std::min(a.x + a.w, b.x + b.w);
    const double iy2 = std::min(a.y + a.h, b.y + b.h);
    const double iw = ix2 - ix;
    const double ih = iy2 - iy;
    if (iw <= 0 || ih <= 0) return 0.0;
    const double inter = iw * ih;
    return std::min(inter / (a.area() + b.area() - inter), 1.0);
}

MatchResult match_faces_to_heads(std::span<const Instance> heads,
                                 std::span<const FaceDetection> faces, double iou_threshold) {
    if (!(iou_threshold > 0) || iou_threshold > 1) {
        throw DataError("iou threshold must be in (0, 1]");
    }
    // Score order, stable for equal scores.
    std::vector<std::size_t> order(faces.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return faces[a].score > faces[b].score; });

    MatchResult result;
    std::vector<bool> head_taken(heads.size(), false);
    for (std::size_t fi : order) {
        double best = 0;
        std::size_t best_head = heads.size();
        for (std::size_t hi = 0; hi < heads.size(); ++hi) {
            if (head_taken[hi]) continue;
            const double ov = iou(heads[hi].head, faces[fi].box);
            if (ov > best) {
                best = ov;
                best_head = hi;
            }
        }
        if (best_head < heads.size() && best >= iou_threshold) {
            head_taken[best_head] = true;
            result.pairs.push_back({heads[best_head].instance_id, fi, best, faces[fi]});
        } else {
            result.unmatched_faces.push_back(fi);
        }
    }
    std::sort(result.unmatched_faces.begin(), result.unmatched_faces.end());
    for (std::size_t hi = 0; hi < heads.size(); ++hi) {
        if (!head_taken[hi]) result.unmatched_heads.push_back(heads[hi].instance_id);
    }
    return result;
}

std::vector<FaceDetection> filter_detections_by_score(std::span<const FaceDetection> faces,
                                                      double min_score) {
    std::vector<FaceDetection> kept;
    for (const auto& f : faces) {
        if (f.score >= min_score) kept.push_back(f);
    }
    return kept;
}

Corpus assign_viewpoints(const Corpus& corpus, const MatchResult& matches) {
    std::map<std::string, FaceDetection> matched;
    for (const auto& p : matches.pairs) {
        if (!corpus.has_instance(p.instance_id)) {
            throw DataError("match references unknown instance '" + p.instance_id + "'");
        }
        matched.emplace(p.instance_id, p.face);
    }
    std::vector<Instance> updated = corpus.instances();
    for (auto& inst : updated) {
        auto it = matched.find(inst.instance_id);
        inst.matched_face = it == matched.end() ? std::nullopt : std::optional(it->second);
        inst.viewpoint = viewpoint_from_face(inst.matched_face);
    }
    return Corpus(corpus.photos(), std::move(updated));
}

void write_match_csv(std::ostream& os, const MatchResult& result,
                     std::span<const FaceDetection> faces) {
    os << "instance_id,face_index,iou,component\n";
    for (const auto& p : result.pairs) {
        os << p.instance_id << ',' << p.face_index << ',' << format_double(p.iou) << ','
           << face_component_token(p.face.component) << '\n';
    }
    for (std::size_t fi : result.unmatched_faces) {
        os << "-," << fi << ",0," << face_component_token(faces[fi].component) << '\n';
    }
}

RegionSet derive_regions(const BBox& head, const PhotoMeta& photo,
                         const std::optional<BBox>& face, const BoxRegressor& face_regressor) {
    RegionSet r;
    r.head = head;
    r.body = {head.x + head.w / 2 - 1.5 * head.w, head.y, 3 * head.w, 6 * head.h};
    r.upper = {r.body.x, r.body.y, r.body.w, r.body.h / 2};
    r.scene = {0, 0, photo.width, photo.height};
    r.face = face ? *face : apply_box_regressor(face_regressor, head);
    return r;
}

BoxRegressor fit_box_regressor(std::span<const std::pair<BBox, BBox>> pairs) {
    if (pairs.empty()) throw DataError("cannot fit box regressor from zero pairs");
    BoxRegressor reg{0, 0, 0, 0};
    for (const auto& [src, dst] : pairs) {
        reg.scale_w += dst.w / src.w;
        reg.scale_h += dst.h / src.h;
        reg.offset_x += (dst.x - src.x) / src.w;
        reg.offset_y += (dst.y - src.y) / src.h;
    }
    const double n = static_cast<double>(pairs.size());
    reg.scale_w /= n;
    reg.scale_h /= n;
    reg.offset_x /= n;
    reg.offset_y /= n;
    return reg;
}

BBox apply_box_regressor(const BoxRegressor& reg, const BBox& source) {
    return {source.x + reg.offset_x * source.w, source.y + reg.offset_y * source.h,
            reg.scale_w * source.w, reg.scale_h * source.h};
}

}  // namespace mcpr
