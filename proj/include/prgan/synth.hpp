#ifndef PRGAN_SYNTH_HPP
#define PRGAN_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "prgan/dataset.hpp"

namespace prgan::core {

// Template-digit images: ten seven-segment glyphs on a 12x12 canvas with
// per-image intensity scaling, +-1px jitter and pixel noise. Stand-in for
// handwritten digits at desk scale; labels derive exactly like MNIST digits.
struct DigitSynthParams {
    int canvas = 12;
    double noise_sigma = 0.10;
    int jitter = 1;
    double intensity_lo = 0.75, intensity_hi = 1.0;
};

struct SynthDigits {
    LabeledDataset data;
    std::vector<std::uint8_t> digits;
};

SynthDigits synth_digits(int n, std::uint64_t seed, const DigitSynthParams& params = {});

// Emits the digit dataset as an IDX image/label file pair.
void write_synth_digits_idx(int n, std::uint64_t seed, const std::string& images_path,
                            const std::string& labels_path, const DigitSynthParams& params = {});

// Synthetic indoor-positioning fingerprints in the 520-AP CSV schema:
// 3 buildings with 4+4+5 floors, 40 APs per floor, 8 location blobs per
// floor; detection probability falls off with distance and floor gap.
void write_synth_uji_csv(const std::string& csv_path, int n, std::uint64_t seed);

// Four Gaussian blobs at the corners of [0,1]^2. target = upper half,
// sensitive = right half; the four cells carry equal counts, so an exact
// label-flipping rearrangement exists (mirror across the vertical axis).
LabeledDataset four_cell_blobs(int n, std::uint64_t seed, double sigma = 0.08);

// Two linearly separable blobs for optimizer sanity checks.
LabeledDataset two_blobs(int n, std::uint64_t seed, double gap = 0.5, double sigma = 0.05);

}  // namespace prgan::core

#endif
