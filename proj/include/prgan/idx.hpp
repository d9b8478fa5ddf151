#ifndef PRGAN_IDX_HPP
#define PRGAN_IDX_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "prgan/dataset.hpp"

namespace prgan::core {

struct IdxImages {
    int count = 0, rows = 0, cols = 0;
    std::vector<std::uint8_t> pixels;  // [count, rows, cols]
};

IdxImages read_idx_images(const std::string& path);
std::vector<std::uint8_t> read_idx_labels(const std::string& path);
void write_idx_images(const std::string& path, const IdxImages& images);
void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels);

// IDX image/label pair -> real-valued dataset in [0,1] (divide by 255),
// labels derived per digit: target = parity, sensitive = greater-than-five.
LabeledDataset load_mnist(const std::string& images_path, const std::string& labels_path);

// Dataset -> IDX pair; features are quantized back to bytes. The label file
// carries the digit reconstructed from (target, sensitive) when `digits`
// is given, else target labels.
void write_dataset_as_idx(const LabeledDataset& ds, const std::string& images_path,
                          const std::string& labels_path,
                          const std::vector<std::uint8_t>* digits = nullptr);

}  // namespace prgan::core

#endif
