#include "prgan/idx.hpp"

#include <cmath>
#include <fstream>

#include "prgan/errors.hpp"

namespace prgan::core {

namespace {

std::uint32_t read_be32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

void write_be32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

IdxImages read_idx_images(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifact("cannot open IDX image file: " + path);
    std::uint32_t magic = read_be32(in);
    if (magic != 0x00000803) throw SchemaMismatch("bad IDX image magic in " + path);
    IdxImages img;
    img.count = static_cast<int>(read_be32(in));
    img.rows = static_cast<int>(read_be32(in));
    img.cols = static_cast<int>(read_be32(in));
    img.pixels.resize(static_cast<std::size_t>(img.count) * img.rows * img.cols);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (!in) throw SchemaMismatch("truncated IDX image file: " + path);
    return img;
}

std::vector<std::uint8_t> read_idx_labels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifact("cannot open IDX label file: " + path);
    std::uint32_t magic = read_be32(in);
    if (magic != 0x00000801) throw SchemaMismatch("bad IDX label magic in " + path);
    std::vector<std::uint8_t> labels(read_be32(in));
    in.read(reinterpret_cast<char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
    if (!in) throw SchemaMismatch("truncated IDX label file: " + path);
    return labels;
}

void write_idx_images(const std::string& path, const IdxImages& images) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write IDX image file: " + path);
    write_be32(out, 0x00000803);
    write_be32(out, static_cast<std::uint32_t>(images.count));
    write_be32(out, static_cast<std::uint32_t>(images.rows));
    write_be32(out, static_cast<std::uint32_t>(images.cols));
    out.write(reinterpret_cast<const char*>(images.pixels.data()),
              static_cast<std::streamsize>(images.pixels.size()));
}

void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write IDX label file: " + path);
    write_be32(out, 0x00000801);
    write_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.write(reinterpret_cast<const char*>(labels.data()),
              static_cast<std::streamsize>(labels.size()));
}

LabeledDataset load_mnist(const std::string& images_path, const std::string& labels_path) {
    IdxImages img = read_idx_images(images_path);
    auto digits = read_idx_labels(labels_path);
    if (static_cast<int>(digits.size()) != img.count)
        throw SchemaMismatch("IDX image/label counts differ");

    LabeledDataset ds;
    ds.kind = DataKind::real_valued;
    ds.num_records = img.count;
    ds.dim = img.rows * img.cols;
    ds.image_c = 1;
    ds.image_h = img.rows;
    ds.image_w = img.cols;
    ds.num_target_classes = 2;
    ds.num_sensitive_classes = 2;
    ds.features.resize(static_cast<std::size_t>(ds.num_records) * ds.dim);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        ds.features[i] = img.pixels[i] / 255.0;
    ds.target_labels.resize(ds.num_records);
    ds.sensitive_labels.resize(ds.num_records);
    for (int i = 0; i < ds.num_records; ++i) {
        auto [yl, yp] = derive_mnist_labels(digits[i]);
        ds.target_labels[i] = yl;
        ds.sensitive_labels[i] = yp;
    }
    ds.validate();
    return ds;
}

void write_dataset_as_idx(const LabeledDataset& ds, const std::string& images_path,
                          const std::string& labels_path,
                          const std::vector<std::uint8_t>* digits) {
    if (ds.image_h <= 0 || ds.image_w <= 0)
        throw ShapeMismatch("write_dataset_as_idx: dataset has no image shape");
    IdxImages img;
    img.count = ds.num_records;
    img.rows = ds.image_h;
    img.cols = ds.image_w;
    img.pixels.resize(ds.features.size());
    for (std::size_t i = 0; i < ds.features.size(); ++i)
        img.pixels[i] = static_cast<std::uint8_t>(std::lround(ds.features[i] * 255.0));
    write_idx_images(images_path, img);

    std::vector<std::uint8_t> labels(ds.num_records);
    for (int i = 0; i < ds.num_records; ++i)
        labels[i] = digits ? (*digits)[i] : static_cast<std::uint8_t>(ds.target_labels[i]);
    write_idx_labels(labels_path, labels);
}

}  // namespace prgan::core
