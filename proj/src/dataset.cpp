#include "prgan/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "prgan/errors.hpp"

namespace prgan::core {

void LabeledDataset::validate() const {
    if (static_cast<int>(target_labels.size()) != num_records ||
        static_cast<int>(sensitive_labels.size()) != num_records ||
        static_cast<int>(features.size()) != static_cast<std::size_t>(num_records) * dim)
        throw SchemaMismatch("dataset: record counts of features and labels differ");
    for (double v : features) {
        if (kind == DataKind::binary) {
            if (v != 0.0 && v != 1.0) throw SchemaMismatch("binary dataset with non 0/1 feature");
        } else if (v < 0.0 || v > 1.0 || !std::isfinite(v)) {
            throw SchemaMismatch("real-valued dataset with feature outside [0,1]");
        }
    }
    auto check_labels = [](const std::vector<int>& y, int k, const char* what) {
        for (int v : y)
            if (v < 0 || v >= k) throw SchemaMismatch(std::string("label out of range: ") + what);
    };
    check_labels(target_labels, num_target_classes, "target");
    check_labels(sensitive_labels, num_sensitive_classes, "sensitive");
}

LabeledDataset LabeledDataset::subset(const std::vector<int>& indices) const {
    LabeledDataset out;
    out.kind = kind;
    out.num_records = static_cast<int>(indices.size());
    out.dim = dim;
    out.image_c = image_c;
    out.image_h = image_h;
    out.image_w = image_w;
    out.num_target_classes = num_target_classes;
    out.num_sensitive_classes = num_sensitive_classes;
    out.features.resize(static_cast<std::size_t>(out.num_records) * dim);
    out.target_labels.resize(out.num_records);
    out.sensitive_labels.resize(out.num_records);
    for (int i = 0; i < out.num_records; ++i) {
        int r = indices[i];
        if (r < 0 || r >= num_records) throw OutOfRange("subset index out of range");
        std::copy_n(features.begin() + static_cast<std::size_t>(r) * dim, dim,
                    out.features.begin() + static_cast<std::size_t>(i) * dim);
        out.target_labels[i] = target_labels[r];
        out.sensitive_labels[i] = sensitive_labels[r];
    }
    return out;
}

std::uint64_t LabeledDataset::content_hash() const {
    std::uint64_t h = fnv1a(features.data(), features.size() * sizeof(double));
    h = fnv1a(target_labels.data(), target_labels.size() * sizeof(int), h);
    h = fnv1a(sensitive_labels.data(), sensitive_labels.size() * sizeof(int), h);
    int meta[4] = {static_cast<int>(kind), num_records, dim, num_target_classes};
    return fnv1a(meta, sizeof(meta), h);
}

namespace {

// Groups records by joint label, shuffles each group, then deals counts per
// group chosen so both the per-group +-1 stratification and the exact global
// sizes hold: group remainders are spread over the parts cyclically, so part
// p receives exactly its share of the total remainder.
std::vector<std::vector<int>> deal_stratified(const LabeledDataset& ds,
                                              const std::vector<int>& indices,
                                              int parts, Rng& rng) {
    std::map<int, std::vector<int>> groups;
    for (int idx : indices) groups[ds.joint_label(idx)].push_back(idx);
    for (auto& [label, members] : groups) shuffle_vec(members, rng);

    std::vector<std::vector<int>> out(parts);
    int cyc = 0;
    for (auto& [label, members] : groups) {
        int n = static_cast<int>(members.size());
        int q = n / parts, r = n % parts;
        std::vector<int> counts(parts, q);
        for (int t = 0; t < r; ++t) counts[cyc++ % parts] += 1;
        int pos = 0;
        for (int p = 0; p < parts; ++p)
            for (int c = 0; c < counts[p]; ++c) out[p].push_back(members[pos++]);
    }
    for (auto& part : out) std::sort(part.begin(), part.end());
    return out;
}

// Splits one index set 4:1. Test quota is floor(n/5) overall; per-group test
// counts are floor(m/5) plus extras handed to the largest fractional parts,
// keeping every class pair within +-1 of its proportional share.
SliceSplit split_4to1(const LabeledDataset& ds, const std::vector<int>& indices, Rng& rng) {
    std::map<int, std::vector<int>> groups;
    for (int idx : indices) groups[ds.joint_label(idx)].push_back(idx);
    for (auto& [label, members] : groups) shuffle_vec(members, rng);

    int test_quota = static_cast<int>(indices.size()) / 5;
    int base_sum = 0;
    std::vector<std::pair<int, int>> frac_order;  // (-frac, label) for stable ordering
    for (auto& [label, members] : groups) {
        int m = static_cast<int>(members.size());
        base_sum += m / 5;
        if (m % 5 > 0) frac_order.push_back({-(m % 5), label});
    }
    std::sort(frac_order.begin(), frac_order.end());
    int extras = test_quota - base_sum;

    std::map<int, int> extra_for;
    for (int i = 0; i < extras && i < static_cast<int>(frac_order.size()); ++i)
        extra_for[frac_order[i].second] = 1;

    SliceSplit out;
    for (auto& [label, members] : groups) {
        int m = static_cast<int>(members.size());
        int t = m / 5 + (extra_for.count(label) ? 1 : 0);
        for (int i = 0; i < m; ++i)
            (i < m - t ? out.train : out.test).push_back(members[i]);
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

}  // namespace

SplitPlan slice_dataset(const LabeledDataset& dataset, std::uint64_t seed) {
    dataset.validate();
    if (dataset.num_records < 15)
        throw TooFewRecords("slice_dataset: need at least 15 records");
    std::map<int, int> group_sizes;
    for (int i = 0; i < dataset.num_records; ++i) group_sizes[dataset.joint_label(i)]++;
    for (auto& [label, n] : group_sizes)
        if (n < 3)
            throw TooFewRecords("slice_dataset: class pair " + std::to_string(label) +
                                " has fewer than 3 records and cannot appear in all slices");

    Rng rng(seed);
    std::vector<int> all(dataset.num_records);
    std::iota(all.begin(), all.end(), 0);
    auto slices = deal_stratified(dataset, all, 3, rng);

    SplitPlan plan;
    plan.seed = seed;
    plan.slice_a = split_4to1(dataset, slices[0], rng);
    plan.slice_b = split_4to1(dataset, slices[1], rng);
    plan.slice_c = split_4to1(dataset, slices[2], rng);
    return plan;
}

SliceSplit stratified_split_4to1(const LabeledDataset& dataset,
                                 const std::vector<int>& indices, std::uint64_t seed) {
    Rng rng(seed);
    return split_4to1(dataset, indices, rng);
}

std::pair<int, int> derive_mnist_labels(int digit) {
    if (digit < 0 || digit > 9) throw OutOfRange("digit must be in 0..9");
    return {digit % 2, digit > 5 ? 1 : 0};
}

namespace {
nlohmann::json slice_to_json(const SliceSplit& s) {
    return {{"train", s.train}, {"test", s.test}};
}
SliceSplit slice_from_json(const nlohmann::json& j) {
    SliceSplit s;
    s.train = j.at("train").get<std::vector<int>>();
    s.test = j.at("test").get<std::vector<int>>();
    return s;
}
}  // namespace

void to_json(nlohmann::json& j, const SplitPlan& plan) {
    j = {{"seed", plan.seed},
         {"slice_a", slice_to_json(plan.slice_a)},
         {"slice_b", slice_to_json(plan.slice_b)},
         {"slice_c", slice_to_json(plan.slice_c)}};
}

void from_json(const nlohmann::json& j, SplitPlan& plan) {
    plan.seed = j.at("seed").get<std::uint64_t>();
    plan.slice_a = slice_from_json(j.at("slice_a"));
    plan.slice_b = slice_from_json(j.at("slice_b"));
    plan.slice_c = slice_from_json(j.at("slice_c"));
}

void save_split_plan(const SplitPlan& plan, const std::string& path) {
    nlohmann::json j;
    to_json(j, plan);
    write_text_file(path, j.dump(2) + "\n");
}

SplitPlan load_split_plan(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(read_text_file(path));
    SplitPlan plan;
    from_json(j, plan);
    return plan;
}

namespace {
constexpr char kDatasetMagic[8] = {'P', 'R', 'G', 'A', 'N', 'D', 'S', '1'};
}

void save_dataset(const LabeledDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write dataset: " + path);
    out.write(kDatasetMagic, sizeof(kDatasetMagic));
    std::int32_t header[9] = {static_cast<std::int32_t>(ds.kind), ds.num_records, ds.dim,
                              ds.image_c,  ds.image_h,  ds.image_w,
                              ds.num_target_classes, ds.num_sensitive_classes, 0};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(ds.features.data()),
              static_cast<std::streamsize>(ds.features.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(ds.target_labels.data()),
              static_cast<std::streamsize>(ds.target_labels.size() * sizeof(int)));
    out.write(reinterpret_cast<const char*>(ds.sensitive_labels.data()),
              static_cast<std::streamsize>(ds.sensitive_labels.size() * sizeof(int)));
}

LabeledDataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifact("cannot open dataset: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kDatasetMagic, sizeof(kDatasetMagic)) != 0)
        throw SchemaMismatch("not a dataset container: " + path);
    std::int32_t header[9];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    LabeledDataset ds;
    ds.kind = static_cast<DataKind>(header[0]);
    ds.num_records = header[1];
    ds.dim = header[2];
    ds.image_c = header[3];
    ds.image_h = header[4];
    ds.image_w = header[5];
    ds.num_target_classes = header[6];
    ds.num_sensitive_classes = header[7];
    ds.features.resize(static_cast<std::size_t>(ds.num_records) * ds.dim);
    ds.target_labels.resize(ds.num_records);
    ds.sensitive_labels.resize(ds.num_records);
    in.read(reinterpret_cast<char*>(ds.features.data()),
            static_cast<std::streamsize>(ds.features.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(ds.target_labels.data()),
            static_cast<std::streamsize>(ds.target_labels.size() * sizeof(int)));
    in.read(reinterpret_cast<char*>(ds.sensitive_labels.data()),
            static_cast<std::streamsize>(ds.sensitive_labels.size() * sizeof(int)));
    if (!in) throw SchemaMismatch("truncated dataset container: " + path);
    ds.validate();
    return ds;
}

}  // namespace prgan::core
