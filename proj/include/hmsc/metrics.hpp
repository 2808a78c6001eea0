#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "hmsc/bpm.hpp"

namespace hmsc {

/// Joint label counts over pixels labeled nonzero in both segmentations.
struct ContingencyTable {
    std::map<std::pair<uint32_t, uint32_t>, uint64_t> joint;
    std::map<uint32_t, uint64_t> marg_a;
    std::map<uint32_t, uint64_t> marg_b;
    uint64_t total = 0;
};

ContingencyTable contingency(const Segmentation& a, const Segmentation& b);

/// H(A|B) + H(B|A) in nats; 0 iff the labelings agree up to relabeling.
double variation_of_information(const Segmentation& a, const Segmentation& b);

/// 1 - F-score of pairwise precision/recall: precision counts use prediction
/// marginals, recall counts use truth marginals.
double adapted_rand_error(const Segmentation& pred, const Segmentation& truth);

}  // namespace hmsc
