#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mcpr/corpus.hpp"

namespace mcpr {

/// The five crops derived from one head annotation: face f, head h,
/// upper body u, full body b, scene s. Boxes are not clipped to the
/// photo; pixel consumers clip at crop time.
struct RegionSet {
    std::optional<BBox> face;
    BBox head;
    BBox upper;
    BBox body;
    BBox scene;
};

enum class Region { Face, Head, Upper, Body, Scene };

std::string region_name(Region r);
Region parse_region(std::string_view name);

/// Affine box-to-box transform. Offsets are in units of the source
/// box width/height, scales are dimensionless ratios.
struct BoxRegressor {
    double scale_w = 1;
    double scale_h = 1;
    double offset_x = 0;
    double offset_y = 0;
};

struct MatchedPair {
    std::string instance_id;
    std::size_t face_index;  // position in the input detection list
    double iou = 0;
    FaceDetection face;
};

/// One-to-one matching; every pair clears the IoU threshold.
struct MatchResult {
    std::vector<MatchedPair> pairs;
    std::vector<std::string> unmatched_heads;
    std::vector<std::size_t> unmatched_faces;
};

/// Intersection over union with half-open box semantics. Symmetric,
/// in [0,1], 1 iff the boxes are identical.
double iou(const BBox& a, const BBox& b);

/// Greedy matcher: faces in descending score order each take the
/// still-unmatched head of maximal IoU, if that IoU reaches the
/// threshold. All boxes must share one photo coordinate frame.
MatchResult match_faces_to_heads(std::span<const Instance> heads,
                                 std::span<const FaceDetection> faces, double iou_threshold);

/// Detections at or above the score cutoff, order preserved. The
/// cutoff that detections must clear before matching is a run
/// parameter, not a fixed constant.
std::vector<FaceDetection> filter_detections_by_score(std::span<const FaceDetection> faces,
                                                      double min_score);

/// Relabels every instance from the match: FR for a frontal (f0)
/// component, NFR for the others, NFD when unmatched. Instances not
/// mentioned by the match lose any previous face.
Corpus assign_viewpoints(const Corpus& corpus, const MatchResult& matches);

/// CSV rows `instance_id,face_index,iou,component`; unmatched faces
/// carry instance_id "-".
void write_match_csv(std::ostream& os, const MatchResult& result,
                     std::span<const FaceDetection> faces);

/// Body is (3 x head width, 6 x head height) with the head at its top
/// centre; upper is the top half of body; scene is the full photo.
/// Face is the matched detection when given, otherwise the regressor
/// applied to the head.
RegionSet derive_regions(const BBox& head, const PhotoMeta& photo,
                         const std::optional<BBox>& face, const BoxRegressor& face_regressor);

/// Mean per-pair scale and offset statistics. Exact when all pairs
/// share a single affine relation. Throws DataError on an empty list.
BoxRegressor fit_box_regressor(std::span<const std::pair<BBox, BBox>> pairs);

BBox apply_box_regressor(const BoxRegressor& reg, const BBox& source);

}  // namespace mcpr
