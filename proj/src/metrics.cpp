#include "hmsc/metrics.hpp"

#include <cmath>

#include "hmsc/error.hpp"

namespace hmsc {

ContingencyTable contingency(const Segmentation& a, const Segmentation& b) {
    if (a.width != b.width || a.height != b.height)
        throw InvalidInput("metrics: segmentation dimensions differ");
    ContingencyTable t;
    for (size_t i = 0; i < a.labels.size(); ++i) {
        uint32_t la = a.labels[i], lb = b.labels[i];
        if (la == 0 || lb == 0) continue;
        ++t.joint[{la, lb}];
        ++t.marg_a[la];
        ++t.marg_b[lb];
        ++t.total;
    }
    if (t.total == 0) throw InvalidInput("metrics: no jointly labeled pixels");
    return t;
}

double variation_of_information(const Segmentation& a, const Segmentation& b) {
    ContingencyTable t = contingency(a, b);
    double n = static_cast<double>(t.total);
    auto entropy = [n](double acc, uint64_t c) {
        double p = static_cast<double>(c) / n;
        return acc - p * std::log(p);
    };
    double h_joint = 0, h_a = 0, h_b = 0;
    for (const auto& [k, c] : t.joint) h_joint = entropy(h_joint, c);
    for (const auto& [k, c] : t.marg_a) h_a = entropy(h_a, c);
    for (const auto& [k, c] : t.marg_b) h_b = entropy(h_b, c);
    double vi = 2.0 * h_joint - h_a - h_b;
    return vi < 0 ? 0 : vi;  // clamp tiny negative round-off
}

double adapted_rand_error(const Segmentation& pred, const Segmentation& truth) {
    ContingencyTable t = contingency(pred, truth);
    double sum_joint_sq = 0, sum_pred_sq = 0, sum_truth_sq = 0;
    for (const auto& [k, c] : t.joint) sum_joint_sq += static_cast<double>(c) * c;
    for (const auto& [k, c] : t.marg_a) sum_pred_sq += static_cast<double>(c) * c;
    for (const auto& [k, c] : t.marg_b) sum_truth_sq += static_cast<double>(c) * c;
    double precision = sum_joint_sq / sum_pred_sq;
    double recall = sum_joint_sq / sum_truth_sq;
    double f = 2.0 * precision * recall / (precision + recall);
    return 1.0 - f;
}

}  // namespace hmsc
