#include "mcpr/splits.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace mcpr {

namespace {

// Instances grouped per identity in corpus (file) order.
std::map<std::string, std::vector<const Instance*>> by_identity(const Corpus& corpus) {
    std::map<std::string, std::vector<const Instance*>> groups;
    for (const auto& inst : corpus.instances()) {
        if (inst.identity) groups[*inst.identity].push_back(&inst);
    }
    return groups;
}

void discard_all(SplitAssignment& a, const std::vector<const Instance*>& instances,
                 const std::string& identity, const std::string& reason) {
    for (const Instance* inst : instances) a.discarded.insert(inst->instance_id);
    a.warnings.push_back("identity '" + identity + "' discarded: " + reason);
}

std::string album_key(const Instance& inst, const Corpus& corpus) {
    const auto& album = corpus.photo(inst.photo_id).album_id;
    // Albumless instances act as singleton pseudo-albums.
    return album ? *album : "~" + inst.instance_id;
}

std::string shared_key(const std::string& identity, const std::string& album) {
    return identity + "\t" + album;
}

}  // namespace

SplitKind parse_split_kind(std::string_view name) {
    if (name == "original") return SplitKind::Original;
    if (name == "album") return SplitKind::Album;
    if (name == "time") return SplitKind::Time;
    if (name == "day") return SplitKind::Day;
    throw ConfigError("unknown split kind '" + std::string(name) + "'");
}

std::string split_kind_name(SplitKind k) {
    switch (k) {
        case SplitKind::Original: return "original";
        case SplitKind::Album: return "album";
        case SplitKind::Time: return "time";
        case SplitKind::Day: return "day";
    }
    throw ConfigError("invalid split kind value");
}

SplitAssignment split_original(const Corpus& corpus, std::uint64_t seed) {
    SplitAssignment a;
    a.kind = SplitKind::Original;
    for (const auto& [identity, instances] : by_identity(corpus)) {
        if (instances.size() < 2) {
            discard_all(a, instances, identity, "fewer than two instances");
            continue;
        }
        std::vector<const Instance*> order = instances;
        Rng rng(hash_mix(seed, hash_str(identity)));
        rng.shuffle(order);
        const std::size_t half = (order.size() + 1) / 2;
        for (std::size_t i = 0; i < order.size(); ++i) {
            a.fold[order[i]->instance_id] = i < half ? 0 : 1;
        }
    }
    return a;
}

SplitAssignment split_album(const Corpus& corpus, std::uint64_t seed) {
    SplitAssignment a;
    a.kind = SplitKind::Album;
    for (const auto& [identity, instances] : by_identity(corpus)) {
        if (instances.size() < 2) {
            discard_all(a, instances, identity, "fewer than two instances");
            continue;
        }
        // Album -> instances, file order preserved inside each album.
        std::map<std::string, std::vector<const Instance*>> albums;
        for (const Instance* inst : instances) albums[album_key(*inst, corpus)].push_back(inst);

        std::vector<std::pair<std::string, std::vector<const Instance*>>> ordered(albums.begin(),
                                                                                  albums.end());
        std::stable_sort(ordered.begin(), ordered.end(), [](const auto& l, const auto& r) {
            return l.second.size() > r.second.size();
        });

        std::size_t size[2] = {0, 0};
        std::vector<int> album_fold(ordered.size());
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            const int target = size[1] < size[0] ? 1 : 0;
            album_fold[i] = target;
            size[target] += ordered[i].second.size();
            for (const Instance* inst : ordered[i].second) a.fold[inst->instance_id] = target;
        }

        // Balance by sharing: move tail instances out of the largest
        // album on the heavy side until the folds differ by <= 1.
        (void)seed;  // assignment is fully determined by album sizes
        while (size[0] > size[1] + 1 || size[1] > size[0] + 1) {
            const int heavy = size[0] > size[1] ? 0 : 1;
            std::size_t donor = ordered.size();
            for (std::size_t i = 0; i < ordered.size(); ++i) {
                if (album_fold[i] != heavy || ordered[i].second.empty()) continue;
                if (donor == ordered.size() ||
                    ordered[i].second.size() > ordered[donor].second.size()) {
                    donor = i;
                }
            }
            if (donor == ordered.size()) break;  // nothing left to move
            a.shared_albums.insert(shared_key(identity, ordered[donor].first));
            while (!ordered[donor].second.empty() && size[heavy] > size[1 - heavy] + 1) {
                const Instance* moved = ordered[donor].second.back();
                ordered[donor].second.pop_back();
                a.fold[moved->instance_id] = 1 - heavy;
                --size[heavy];
                ++size[1 - heavy];
            }
        }
    }
    return a;
}

SplitAssignment split_time(const Corpus& corpus) {
    SplitAssignment a;
    a.kind = SplitKind::Time;
    for (const auto& [identity, instances] : by_identity(corpus)) {
        if (instances.size() < 2) {
            discard_all(a, instances, identity, "fewer than two instances");
            continue;
        }
        std::vector<const Instance*> timed;
        std::vector<const Instance*> untimed;
        for (const Instance* inst : instances) {
            (corpus.photo(inst->photo_id).taken_at ? timed : untimed).push_back(inst);
        }
        // Equal timestamps keep file order (stable sort).
        std::stable_sort(timed.begin(), timed.end(), [&](const Instance* l, const Instance* r) {
            return *corpus.photo(l->photo_id).taken_at < *corpus.photo(r->photo_id).taken_at;
        });
        std::size_t size[2] = {0, 0};
        const std::size_t half = (timed.size() + 1) / 2;  // oldest half, extra to fold 0
        for (std::size_t i = 0; i < timed.size(); ++i) {
            const int f = i < half ? 0 : 1;
            a.fold[timed[i]->instance_id] = f;
            ++size[f];
        }
        int next = size[1] < size[0] ? 1 : 0;
        for (const Instance* inst : untimed) {
            a.fold[inst->instance_id] = next;
            ++size[next];
            next = 1 - next;
        }
    }
    return a;
}

SplitAssignment split_day(const Corpus& corpus, const DayLabels& labels, std::uint64_t seed) {
    SplitAssignment a;
    a.kind = SplitKind::Day;
    for (const auto& [identity, instances] : by_identity(corpus)) {
        bool covered = true;
        for (const Instance* inst : instances) {
            if (!labels.contains(inst->instance_id)) {
                covered = false;
                break;
            }
        }
        if (!covered) {
            discard_all(a, instances, identity, "missing day labels");
            continue;
        }
        std::map<std::string, std::vector<const Instance*>> groups;
        for (const Instance* inst : instances) {
            groups[labels.at(inst->instance_id)].push_back(inst);
        }
        if (groups.size() < 2) {
            discard_all(a, instances, identity, "a single day group");
            continue;
        }

        std::vector<std::vector<const Instance*>> grp;
        grp.reserve(groups.size());
        for (auto& [tag, members] : groups) grp.push_back(std::move(members));

        // Fold-0 membership mask minimising the imbalance. The first
        // group is pinned to fold 0, which halves the search and makes
        // the winning mask unique-by-order.
        std::vector<int> group_fold(grp.size(), 0);
        if (grp.size() <= 15) {
            const std::size_t n_masks = std::size_t{1} << (grp.size() - 1);
            long long best_diff = std::numeric_limits<long long>::max();
            std::size_t best_mask = 0;
            for (std::size_t mask = 0; mask < n_masks; ++mask) {
                long long diff = 0;
                for (std::size_t g = 0; g < grp.size(); ++g) {
                    const bool in_fold1 = g > 0 && (mask >> (g - 1) & 1);
                    diff += in_fold1 ? -static_cast<long long>(grp[g].size())
                                     : static_cast<long long>(grp[g].size());
                }
                if (std::llabs(diff) < best_diff) {
                    best_diff = std::llabs(diff);
                    best_mask = mask;
                }
            }
            for (std::size_t g = 1; g < grp.size(); ++g) {
                group_fold[g] = best_mask >> (g - 1) & 1;
            }
        } else {
            // Greedy fallback: largest group to the smaller fold.
            std::vector<std::size_t> order(grp.size());
            for (std::size_t g = 0; g < grp.size(); ++g) order[g] = g;
            std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
                return grp[l].size() > grp[r].size();
            });
            std::size_t size[2] = {0, 0};
            for (std::size_t g : order) {
                const int target = size[1] < size[0] ? 1 : 0;
                group_fold[g] = target;
                size[target] += grp[g].size();
            }
        }

        std::vector<const Instance*> fold_members[2];
        for (std::size_t g = 0; g < grp.size(); ++g) {
            auto& dst = fold_members[group_fold[g]];
            dst.insert(dst.end(), grp[g].begin(), grp[g].end());
        }
        const std::size_t target = std::min(fold_members[0].size(), fold_members[1].size());
        if (target <= 4) {
            discard_all(a, instances, identity, "balanced fold would have <= 4 instances");
            continue;
        }
        Rng rng(hash_mix(seed, hash_str(identity)));
        for (int f = 0; f < 2; ++f) {
            auto& members = fold_members[f];
            while (members.size() > target) {
                const std::size_t victim = rng.below(members.size());
                a.discarded.insert(members[victim]->instance_id);
                members.erase(members.begin() + static_cast<std::ptrdiff_t>(victim));
            }
            for (const Instance* inst : members) a.fold[inst->instance_id] = f;
        }
    }
    return a;
}

std::vector<std::string> validate_split(const Corpus& corpus, const SplitAssignment& assignment) {
    std::vector<std::string> violations;
    auto flag = [&](const std::string& msg) { violations.push_back(msg); };

    for (const auto& [id, fold] : assignment.fold) {
        if (!corpus.has_instance(id)) {
            flag("assigned instance '" + id + "' is not in the corpus");
        } else if (corpus.instance(id).is_background()) {
            flag("background instance '" + id + "' was assigned a fold");
        }
        if (fold != 0 && fold != 1) flag("instance '" + id + "' has fold " + std::to_string(fold));
        if (assignment.discarded.contains(id)) {
            flag("instance '" + id + "' is both assigned and discarded");
        }
    }
    for (const auto& inst : corpus.instances()) {
        if (inst.is_background()) continue;
        if (!assignment.fold.contains(inst.instance_id) &&
            !assignment.discarded.contains(inst.instance_id)) {
            flag("instance '" + inst.instance_id + "' is neither assigned nor discarded");
        }
    }

    std::map<std::string, std::array<std::vector<const Instance*>, 2>> folds;
    for (const auto& [id, fold] : assignment.fold) {
        if (!corpus.has_instance(id)) continue;
        const Instance& inst = corpus.instance(id);
        if (!inst.identity || (fold != 0 && fold != 1)) continue;
        folds[*inst.identity][static_cast<std::size_t>(fold)].push_back(&inst);
    }

    for (const auto& [identity, f] : folds) {
        const std::size_t n0 = f[0].size();
        const std::size_t n1 = f[1].size();
        if (n0 == 0 || n1 == 0) {
            flag("identity '" + identity + "' has an empty fold");
            continue;
        }
        switch (assignment.kind) {
            case SplitKind::Original:
            case SplitKind::Album:
            case SplitKind::Time:
                if (n0 > n1 + 1 || n1 > n0 + 1) {
                    flag("identity '" + identity + "' folds differ by more than one (" +
                         std::to_string(n0) + "/" + std::to_string(n1) + ")");
                }
                break;
            case SplitKind::Day:
                if (n0 != n1) {
                    flag("identity '" + identity + "' day folds are unequal (" +
                         std::to_string(n0) + "/" + std::to_string(n1) + ")");
                }
                if (std::min(n0, n1) < 5) {
                    flag("identity '" + identity + "' kept below the day-split minimum");
                }
                break;
        }
        if (assignment.kind == SplitKind::Time) {
            std::int64_t max0 = std::numeric_limits<std::int64_t>::min();
            std::int64_t min1 = std::numeric_limits<std::int64_t>::max();
            for (const Instance* inst : f[0]) {
                if (auto t = corpus.photo(inst->photo_id).taken_at) max0 = std::max(max0, *t);
            }
            for (const Instance* inst : f[1]) {
                if (auto t = corpus.photo(inst->photo_id).taken_at) min1 = std::min(min1, *t);
            }
            if (max0 > min1) {
                flag("identity '" + identity + "' fold 0 is not uniformly older than fold 1");
            }
        }
        if (assignment.kind == SplitKind::Album) {
            std::map<std::string, std::set<int>> album_folds;
            for (int fi = 0; fi < 2; ++fi) {
                for (const Instance* inst : f[fi]) {
                    album_folds[album_key(*inst, corpus)].insert(fi);
                }
            }
            for (const auto& [album, used] : album_folds) {
                if (used.size() > 1 && !assignment.shared_albums.contains(shared_key(identity, album))) {
                    flag("album '" + album + "' of identity '" + identity +
                         "' spans both folds but is not marked shared");
                }
            }
        }
    }
    return violations;
}

void save_split(const std::string& path, const SplitAssignment& assignment, const Corpus& corpus) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write split file '" + path + "'");
    out << "# kind: " << split_kind_name(assignment.kind) << '\n';
    for (const auto& inst : corpus.instances()) {
        auto it = assignment.fold.find(inst.instance_id);
        if (it != assignment.fold.end()) out << inst.instance_id << ' ' << it->second << '\n';
    }
    if (!out.flush()) throw DataError("write failed for '" + path + "'");

    std::ofstream disc(path + ".discarded", std::ios::trunc);
    if (!disc) throw DataError("cannot write '" + path + ".discarded'");
    for (const auto& id : assignment.discarded) disc << id << '\n';
    if (!disc.flush()) throw DataError("write failed for '" + path + ".discarded'");

    if (assignment.kind == SplitKind::Album) {
        std::ofstream shared(path + ".shared", std::ios::trunc);
        if (!shared) throw DataError("cannot write '" + path + ".shared'");
        for (const auto& key : assignment.shared_albums) shared << key << '\n';
        if (!shared.flush()) throw DataError("write failed for '" + path + ".shared'");
    }
}

SplitAssignment load_split(const std::string& path, SplitKind kind) {
    std::ifstream in(path);
    if (!in) throw MissingArtifactError("cannot open split file '" + path + "'");
    SplitAssignment a;
    a.kind = kind;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream iss(line);
        std::string id;
        int fold = -1;
        if (!(iss >> id >> fold) || (fold != 0 && fold != 1)) {
            throw DataError("bad split line at " + path + ":" + std::to_string(line_no));
        }
        if (!a.fold.emplace(id, fold).second) {
            throw DataError("duplicate instance '" + id + "' in split file '" + path + "'");
        }
    }
    std::ifstream disc(path + ".discarded");
    if (disc) {
        while (std::getline(disc, line)) {
            if (!line.empty()) a.discarded.insert(line);
        }
    }
    if (kind == SplitKind::Album) {
        std::ifstream shared(path + ".shared");
        if (shared) {
            while (std::getline(shared, line)) {
                if (!line.empty()) a.shared_albums.insert(line);
            }
        }
    }
    return a;
}

void save_day_labels(const std::string& path, const DayLabels& labels) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write day labels file '" + path + "'");
    for (const auto& [id, tag] : labels) out << id << ' ' << tag << '\n';
    if (!out.flush()) throw DataError("write failed for '" + path + "'");
}

DayLabels load_day_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingArtifactError("cannot open day labels file '" + path + "'");
    DayLabels labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream iss(line);
        std::string id, tag;
        if (!(iss >> id >> tag)) {
            throw DataError("bad day label line at " + path + ":" + std::to_string(line_no));
        }
        labels[id] = tag;
    }
    return labels;
}

}  // namespace mcpr
