#include "mcpr/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace mcpr {

namespace {

const std::string kAbsent = "-";

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

std::string at_line(const std::string& path, std::size_t line_no) {
    return path + ":" + std::to_string(line_no);
}

}  // namespace

FaceComponent parse_face_component(std::string_view token) {
    if (token == "m90") return FaceComponent::M90;
    if (token == "m45") return FaceComponent::M45;
    if (token == "f0") return FaceComponent::F0;
    if (token == "p45") return FaceComponent::P45;
    if (token == "p90") return FaceComponent::P90;
    throw DataError("unknown face component '" + std::string(token) + "'");
}

std::string face_component_token(FaceComponent c) {
    switch (c) {
        case FaceComponent::M90: return "m90";
        case FaceComponent::M45: return "m45";
        case FaceComponent::F0: return "f0";
        case FaceComponent::P45: return "p45";
        case FaceComponent::P90: return "p90";
    }
    throw DataError("invalid face component value");
}

std::string viewpoint_name(Viewpoint v) {
    switch (v) {
        case Viewpoint::FR: return "FR";
        case Viewpoint::NFR: return "NFR";
        case Viewpoint::NFD: return "NFD";
    }
    throw DataError("invalid viewpoint value");
}

Viewpoint viewpoint_from_face(const std::optional<FaceDetection>& face) {
    if (!face) return Viewpoint::NFD;
    return face->component == FaceComponent::F0 ? Viewpoint::FR : Viewpoint::NFR;
}

Corpus::Corpus(std::vector<PhotoMeta> photos, std::vector<Instance> instances)
    : photos_(std::move(photos)), instances_(std::move(instances)) {
    for (std::size_t i = 0; i < photos_.size(); ++i) {
        if (!photo_index_.emplace(photos_[i].photo_id, i).second) {
            throw DataError("duplicate photo_id '" + photos_[i].photo_id + "'");
        }
    }
    for (std::size_t i = 0; i < instances_.size(); ++i) {
        if (!instance_index_.emplace(instances_[i].instance_id, i).second) {
            throw DataError("duplicate instance_id '" + instances_[i].instance_id + "'");
        }
    }
    validate();
}

void Corpus::validate() const {
    std::set<std::tuple<std::string, double, double, double, double, std::string>> seen;
    for (const auto& inst : instances_) {
        if (!photo_index_.contains(inst.photo_id)) {
            throw DataError("dangling photo reference '" + inst.photo_id + "' in instance '" +
                            inst.instance_id + "'");
        }
        if (!(inst.head.w > 0) || !(inst.head.h > 0)) {
            throw DataError("non-positive head box in instance '" + inst.instance_id + "'");
        }
        auto key = std::make_tuple(inst.photo_id, inst.head.x, inst.head.y, inst.head.w,
                                   inst.head.h, inst.identity.value_or(kAbsent));
        if (!seen.insert(key).second) {
            throw DataError("duplicate (photo, head box, identity) triple at instance '" +
                            inst.instance_id + "'");
        }
    }
    for (const auto& p : photos_) {
        if (!(p.width > 0) || !(p.height > 0)) {
            throw DataError("non-positive dimensions for photo '" + p.photo_id + "'");
        }
    }
}

const PhotoMeta& Corpus::photo(const std::string& photo_id) const {
    auto it = photo_index_.find(photo_id);
    if (it == photo_index_.end()) throw DataError("unknown photo_id '" + photo_id + "'");
    return photos_[it->second];
}

const Instance& Corpus::instance(const std::string& instance_id) const {
    auto it = instance_index_.find(instance_id);
    if (it == instance_index_.end()) throw DataError("unknown instance_id '" + instance_id + "'");
    return instances_[it->second];
}

bool Corpus::has_instance(const std::string& instance_id) const {
    return instance_index_.contains(instance_id);
}

std::vector<std::string> Corpus::identities() const {
    std::set<std::string> ids;
    for (const auto& inst : instances_) {
        if (inst.identity) ids.insert(*inst.identity);
    }
    return {ids.begin(), ids.end()};
}

Corpus load_corpus(const std::string& annotation_path, const std::string& photo_meta_path) {
    std::ifstream photo_in(photo_meta_path);
    if (!photo_in) throw MissingArtifactError("cannot open photo meta file '" + photo_meta_path + "'");

    std::vector<PhotoMeta> photos;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(photo_in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto cols = split_ws(line);
        if (cols.size() != 5) {
            throw DataError("expected 5 columns, got " + std::to_string(cols.size()) + " at " +
                            at_line(photo_meta_path, line_no));
        }
        PhotoMeta p;
        p.photo_id = cols[0];
        if (cols[1] != kAbsent) p.album_id = cols[1];
        if (cols[2] != kAbsent) p.taken_at = parse_int(cols[2], at_line(photo_meta_path, line_no));
        p.width = parse_double(cols[3], at_line(photo_meta_path, line_no));
        p.height = parse_double(cols[4], at_line(photo_meta_path, line_no));
        photos.push_back(std::move(p));
    }

    std::ifstream anno_in(annotation_path);
    if (!anno_in) throw MissingArtifactError("cannot open annotation file '" + annotation_path + "'");

    std::vector<Instance> instances;
    line_no = 0;
    while (std::getline(anno_in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto cols = split_ws(line);
        if (cols.size() != 13) {
            throw DataError("expected 13 columns, got " + std::to_string(cols.size()) + " at " +
                            at_line(annotation_path, line_no));
        }
        const std::string where = at_line(annotation_path, line_no);
        Instance inst;
        inst.instance_id = cols[0];
        inst.photo_id = cols[1];
        inst.head = {parse_double(cols[2], where), parse_double(cols[3], where),
                     parse_double(cols[4], where), parse_double(cols[5], where)};
        if (cols[6] != kAbsent) inst.identity = cols[6];
        const bool face_absent = cols[7] == kAbsent;
        for (std::size_t c = 8; c <= 12; ++c) {
            if ((cols[c] == kAbsent) != face_absent) {
                throw DataError("partially absent face columns at " + where);
            }
        }
        if (!face_absent) {
            FaceDetection face;
            face.box = {parse_double(cols[7], where), parse_double(cols[8], where),
                        parse_double(cols[9], where), parse_double(cols[10], where)};
            face.score = parse_double(cols[11], where);
            try {
                face.component = parse_face_component(cols[12]);
            } catch (const DataError& e) {
                throw DataError(std::string(e.what()) + " at " + where);
            }
            inst.matched_face = face;
        }
        inst.viewpoint = viewpoint_from_face(inst.matched_face);
        instances.push_back(std::move(inst));
    }

    try {
        return Corpus(std::move(photos), std::move(instances));
    } catch (const DataError& e) {
        throw DataError(std::string(e.what()) + " (while loading '" + annotation_path + "')");
    }
}

void save_corpus(const Corpus& corpus, const std::string& annotation_path,
                 const std::string& photo_meta_path) {
    std::ofstream photo_out(photo_meta_path, std::ios::trunc);
    if (!photo_out) throw DataError("cannot write photo meta file '" + photo_meta_path + "'");
    for (const auto& p : corpus.photos()) {
        photo_out << p.photo_id << ' ' << p.album_id.value_or(kAbsent) << ' '
                  << (p.taken_at ? std::to_string(*p.taken_at) : kAbsent) << ' '
                  << format_double(p.width) << ' ' << format_double(p.height) << '\n';
    }
    if (!photo_out.flush()) throw DataError("write failed for '" + photo_meta_path + "'");

    std::ofstream anno_out(annotation_path, std::ios::trunc);
    if (!anno_out) throw DataError("cannot write annotation file '" + annotation_path + "'");
    for (const auto& inst : corpus.instances()) {
        anno_out << inst.instance_id << ' ' << inst.photo_id << ' ' << format_double(inst.head.x)
                 << ' ' << format_double(inst.head.y) << ' ' << format_double(inst.head.w) << ' '
                 << format_double(inst.head.h) << ' ' << inst.identity.value_or(kAbsent);
        if (inst.matched_face) {
            const auto& f = *inst.matched_face;
            anno_out << ' ' << format_double(f.box.x) << ' ' << format_double(f.box.y) << ' '
                     << format_double(f.box.w) << ' ' << format_double(f.box.h) << ' '
                     << format_double(f.score) << ' ' << face_component_token(f.component);
        } else {
            anno_out << " - - - - - -";
        }
        anno_out << '\n';
    }
    if (!anno_out.flush()) throw DataError("write failed for '" + annotation_path + "'");
}

CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats s;
    s.instances = corpus.instances().size();
    s.photos = corpus.photos().size();
    std::set<std::string> albums;
    for (const auto& p : corpus.photos()) {
        if (p.album_id) albums.insert(*p.album_id);
    }
    s.albums = albums.size();
    for (const auto& inst : corpus.instances()) {
        if (inst.identity) {
            ++s.instances_per_identity[*inst.identity];
        } else {
            ++s.background_instances;
        }
    }
    s.identities = s.instances_per_identity.size();
    return s;
}

}  // namespace mcpr
