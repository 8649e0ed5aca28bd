#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mcpr/corpus.hpp"

namespace mcpr {

enum class SplitKind { Original, Album, Time, Day };

SplitKind parse_split_kind(std::string_view name);
std::string split_kind_name(SplitKind k);

/// Two-fold partition of the non-background instances. Every such
/// instance is either assigned a fold or discarded. For the Album
/// split, albums whose instances were spread over both folds to fix
/// the balance are recorded as shared ("identity<TAB>album_key").
struct SplitAssignment {
    SplitKind kind = SplitKind::Original;
    std::map<std::string, int> fold;  // instance_id -> 0/1
    std::set<std::string> discarded;
    std::set<std::string> shared_albums;
    std::vector<std::string> warnings;
};

/// Externally supplied per-instance day-group tags (the Day split is
/// defined by human judgement, not computed). Tags are scoped per
/// identity.
using DayLabels = std::map<std::string, std::string>;

/// Per identity, a seeded random halving; fold sizes differ by at
/// most one. Identities with fewer than two instances are discarded.
SplitAssignment split_original(const Corpus& corpus, std::uint64_t seed);

/// Per identity, whole albums go greedily (largest first) to the
/// smaller fold; instances without an album form singleton
/// pseudo-albums. If the folds end up differing by more than one
/// instance, the largest album on the heavy side is shared and its
/// instances moved over one by one until balanced.
SplitAssignment split_album(const Corpus& corpus, std::uint64_t seed);

/// Per identity, instances sorted by timestamp; the oldest half goes
/// to fold 0 (the extra one on odd counts too). Instances without a
/// timestamp alternate between the folds, starting with the smaller.
SplitAssignment split_time(const Corpus& corpus);

/// Per identity, day groups are assigned to the folds to minimise the
/// imbalance (exhaustively for up to 15 groups, greedily beyond),
/// then instances are randomly discarded from the larger fold until
/// the sizes match. Identities whose balanced fold size is <= 4, or
/// with a single day group, are discarded entirely.
SplitAssignment split_day(const Corpus& corpus, const DayLabels& labels, std::uint64_t seed);

/// Constraint report; empty means the assignment is consistent with
/// its split kind. Nothing is thrown.
std::vector<std::string> validate_split(const Corpus& corpus, const SplitAssignment& assignment);

// Text artifacts: `instance_id fold` lines plus `.discarded` and
// (album only) `.shared` sidecar files next to the given path.
void save_split(const std::string& path, const SplitAssignment& assignment, const Corpus& corpus);
SplitAssignment load_split(const std::string& path, SplitKind kind);

void save_day_labels(const std::string& path, const DayLabels& labels);
DayLabels load_day_labels(const std::string& path);

}  // namespace mcpr
