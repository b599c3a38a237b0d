#pragma once

#include <map>

#include "braids/core/types.hpp"
#include "braids/mock/corpus.hpp"

namespace braids::mock {

/// Per-source post counts a first page must contain for `config` served from
/// `corpus`, by direct enumeration of each source's fetch window. Written
/// without the feed-core code it checks.
///
/// Under StrictPriority the counts are exact: windows are claimed in the
/// order the merge drains them, so a cross-source duplicate counts for the
/// earlier group. Under WeightedInterleave a cross-source duplicate goes to
/// whichever source the draw reaches first; the counts here assume every
/// window keeps its own posts, which is exact when first_page_windows_disjoint
/// holds and an upper bound otherwise.
///
/// Every source with positive weight is present, even if its share rounds to
/// zero; an all-None config yields an empty map.
std::map<SourceCategory, int> oracle_expected_counts(const CurationConfig& config,
                                                     const Corpus& corpus);

/// True iff no two first-page fetch windows share a normalized post id.
bool first_page_windows_disjoint(const CurationConfig& config, const Corpus& corpus);

}  // namespace braids::mock
