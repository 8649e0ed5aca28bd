#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcpr/common.hpp"

namespace mcpr {

/// Axis-aligned rectangle, top-left origin, y grows downward.
/// Half-open semantics: [x, x+w) x [y, y+h). w > 0 and h > 0.
struct BBox {
    double x = 0;
    double y = 0;
    double w = 0;
    double h = 0;

    double area() const { return w * h; }
    bool operator==(const BBox&) const = default;
};

struct PhotoMeta {
    std::string photo_id;
    std::optional<std::string> album_id;
    std::optional<std::int64_t> taken_at;  // seconds
    double width = 0;
    double height = 0;

    bool operator==(const PhotoMeta&) const = default;
};

/// Detector component, a rough face orientation:
/// -90, -45, 0(frontal), +45, +90 degrees.
enum class FaceComponent { M90, M45, F0, P45, P90 };

struct FaceDetection {
    BBox box;
    double score = 0;
    FaceComponent component = FaceComponent::F0;

    bool operator==(const FaceDetection&) const = default;
};

/// Head-orientation class of an instance: frontal face detected,
/// non-frontal face detected, or no face detected.
enum class Viewpoint { FR, NFR, NFD };

/// One annotated person occurrence. `identity` absent means a
/// background person (not in any gallery). Head boxes may extend
/// beyond the photo bounds; they are stored unclipped.
struct Instance {
    std::string instance_id;
    std::string photo_id;
    BBox head;
    std::optional<std::string> identity;
    std::optional<FaceDetection> matched_face;
    Viewpoint viewpoint = Viewpoint::NFD;

    bool is_background() const { return !identity.has_value(); }
    bool operator==(const Instance&) const = default;
};

/// Immutable after construction; share freely across threads.
/// Instance order is file order, which fixes every downstream
/// iteration order.
class Corpus {
public:
    Corpus() = default;
    Corpus(std::vector<PhotoMeta> photos, std::vector<Instance> instances);

    const std::vector<PhotoMeta>& photos() const { return photos_; }
    const std::vector<Instance>& instances() const { return instances_; }

    const PhotoMeta& photo(const std::string& photo_id) const;
    const Instance& instance(const std::string& instance_id) const;
    bool has_instance(const std::string& instance_id) const;

    /// Distinct non-background identities, lexicographically sorted.
    std::vector<std::string> identities() const;

    bool operator==(const Corpus& other) const {
        return photos_ == other.photos_ && instances_ == other.instances_;
    }

private:
    void validate() const;

    std::vector<PhotoMeta> photos_;
    std::vector<Instance> instances_;
    std::map<std::string, std::size_t> photo_index_;
    std::map<std::string, std::size_t> instance_index_;
};

struct CorpusStats {
    std::size_t instances = 0;
    std::size_t identities = 0;  // background excluded
    std::size_t photos = 0;
    std::size_t albums = 0;
    std::size_t background_instances = 0;
    std::map<std::string, std::size_t> instances_per_identity;
};

FaceComponent parse_face_component(std::string_view token);
std::string face_component_token(FaceComponent c);
std::string viewpoint_name(Viewpoint v);

/// Viewpoint implied by a (possibly absent) matched detection.
Viewpoint viewpoint_from_face(const std::optional<FaceDetection>& face);

/// Reads the two corpus files. See the file grammar in the README;
/// columns are whitespace separated, "-" marks an absent value and
/// "#" starts a comment line. Throws DataError with a line number on
/// parse failures, duplicate ids, or dangling photo references.
Corpus load_corpus(const std::string& annotation_path, const std::string& photo_meta_path);

/// Inverse of load_corpus: load(save(c)) == c field-for-field.
void save_corpus(const Corpus& corpus, const std::string& annotation_path,
                 const std::string& photo_meta_path);

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace mcpr
