#include "rill/experiments/idx.hpp"

#include <cstdint>
#include <fstream>
#include <iterator>
#include <vector>

#include "rill/errors.hpp"

namespace rill::experiments {
namespace {

std::vector<unsigned char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open IDX file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<unsigned char>& b, std::size_t at, const std::string& path) {
  if (b.size() < at + 4) throw FormatError("IDX file '" + path + "' is truncated in its header");
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) |
         std::uint32_t{b[at + 3]};
}

}  // namespace

LabelledSet ingest_mnist_idx(const std::string& images_path, const std::string& labels_path) {
  const auto img = slurp(images_path);
  const auto lab = slurp(labels_path);
  if (be32(img, 0, images_path) != 0x00000803) throw FormatError("'" + images_path + "' is not an IDX image file");
  if (be32(lab, 0, labels_path) != 0x00000801) throw FormatError("'" + labels_path + "' is not an IDX label file");
  const std::size_t n = be32(img, 4, images_path);
  const std::size_t rows = be32(img, 8, images_path);
  const std::size_t cols = be32(img, 12, images_path);
  const std::size_t n_labels = be32(lab, 4, labels_path);
  if (n != n_labels) {
    throw FormatError("image count " + std::to_string(n) + " differs from label count " + std::to_string(n_labels));
  }
  const std::size_t pixels = rows * cols;
  if (img.size() != 16 + n * pixels) throw FormatError("'" + images_path + "' is truncated or has trailing bytes");
  if (lab.size() != 8 + n) throw FormatError("'" + labels_path + "' is truncated or has trailing bytes");

  LabelledSet out{Matrix(n, pixels), std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < pixels; ++p) out.features(i, p) = img[16 + i * pixels + p] / 255.0;
    out.labels[i] = lab[8 + i];
    if (out.labels[i] > 9) throw FormatError("label " + std::to_string(out.labels[i]) + " is not a digit");
  }
  return out;
}

}  // namespace rill::experiments
