#ifndef PRGAN_DATASET_HPP
#define PRGAN_DATASET_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "prgan/util.hpp"

namespace prgan::core {

enum class DataKind { real_valued, binary };

// Feature matrix plus per-record target and sensitive labels. Immutable by
// convention after construction; validate() checks the container invariants.
struct LabeledDataset {
    DataKind kind = DataKind::real_valued;
    int num_records = 0;
    int dim = 0;
    int image_c = 0, image_h = 0, image_w = 0;  // zero when features are flat
    std::vector<double> features;               // [num_records, dim]
    std::vector<int> target_labels;             // y_L
    std::vector<int> sensitive_labels;          // y_P
    int num_target_classes = 0;
    int num_sensitive_classes = 0;

    void validate() const;
    LabeledDataset subset(const std::vector<int>& indices) const;
    std::uint64_t content_hash() const;
    int joint_label(int i) const { return target_labels[i] * num_sensitive_classes + sensitive_labels[i]; }
};

struct SliceSplit {
    std::vector<int> train, test;
};

struct SplitPlan {
    SliceSplit slice_a, slice_b, slice_c;
    std::uint64_t seed = 0;
};

// Three slices of equal size (remainders to earlier slices), each sub-split
// 4:1 train/test (remainder to train), stratified on the joint
// (target, sensitive) label so every class pair lands in every slice.
SplitPlan slice_dataset(const LabeledDataset& dataset, std::uint64_t seed);

// 4:1 stratified sub-split of an index subset; used for validation splits.
SliceSplit stratified_split_4to1(const LabeledDataset& dataset,
                                 const std::vector<int>& indices, std::uint64_t seed);

// (target, sensitive) for one digit: parity, greater-than-five.
std::pair<int, int> derive_mnist_labels(int digit);

void to_json(nlohmann::json& j, const SplitPlan& plan);
void from_json(const nlohmann::json& j, SplitPlan& plan);
void save_split_plan(const SplitPlan& plan, const std::string& path);
SplitPlan load_split_plan(const std::string& path);

// Normalized dataset container used between pipeline stages (binary header
// + raw feature/label data; round-trips bit-exactly).
void save_dataset(const LabeledDataset& ds, const std::string& path);
LabeledDataset load_dataset(const std::string& path);

}  // namespace prgan::core

#endif
