#pragma once

#include <string>

#include "rill/experiments/datasets.hpp"

namespace rill::experiments {

/// Reads an IDX image file (magic 0x00000803, big-endian dims, unsigned
/// bytes) and its label file (magic 0x00000801). Pixels are scaled to
/// [0, 1] and each image becomes one row. Throws FormatError on a bad
/// magic, truncation or mismatched counts, and ConfigError when a file
/// cannot be opened.
LabelledSet ingest_mnist_idx(const std::string& images_path, const std::string& labels_path);

}  // namespace rill::experiments
