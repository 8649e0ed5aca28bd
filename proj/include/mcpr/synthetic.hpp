#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcpr/corpus.hpp"
#include "mcpr/features.hpp"
#include "mcpr/splits.hpp"

namespace mcpr {

/// Controls the synthetic test corpus. Day groups are ordered in time
/// and carry their own albums, so the four split generators all find
/// the structure they need. total_instances, when nonzero, overrides
/// n_identities * instances_per_identity and is spread as evenly as
/// possible across identities.
struct SyntheticCorpusSpec {
    int n_identities = 50;
    int instances_per_identity = 20;
    std::size_t total_instances = 0;
    int albums_per_identity = 4;
    int day_groups_per_identity = 2;
    double frac_fr = 0.4129;
    double frac_nfr = 0.2710;
    double frac_nfd = 0.3160;
    int background_instances = 0;
    double missing_time_fraction = 0.0;
    SyntheticEmbedderConfig embedder;
    std::uint64_t seed = 0;
};

struct SyntheticCorpus {
    Corpus corpus;
    DayLabels day_labels;
};

/// Deterministic for a given spec. The FR/NFR/NFD mix over the
/// identified instances is within one instance of the requested
/// proportions (largest-remainder quotas).
SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusSpec& spec);

/// Embeds every corpus instance (background included) for one cue, in
/// corpus order.
EmbeddingCache synthesize_cache(const SyntheticCorpus& data, const SyntheticEmbedderConfig& config,
                                const std::string& cue_name);

}  // namespace mcpr
