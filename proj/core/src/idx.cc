/*
 * Copyright 2026 The SEAFL Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <array>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "seafl/dataset.h"
#include "seafl/errors.h"

namespace seafl {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t ReadBigEndian32(std::istream& in, const std::string& path) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
    throw FormatError(path + ": truncated IDX header");
  }
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

std::ifstream Open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open IDX file");
  return in;
}

}  // namespace

Dataset LoadIdx(const std::filesystem::path& images_path,
                const std::filesystem::path& labels_path,
                std::optional<std::size_t> limit) {
  if (limit && *limit == 0) throw DataError("IDX limit must be positive");

  std::ifstream images = Open(images_path);
  std::ifstream labels = Open(labels_path);
  const std::string ipath = images_path.string();
  const std::string lpath = labels_path.string();

  const std::uint32_t imagic = ReadBigEndian32(images, ipath);
  if (imagic != kImageMagic) {
    throw FormatError(fmt::format("{}: bad image magic 0x{:08x}", ipath,
                                  imagic));
  }
  const std::uint32_t lmagic = ReadBigEndian32(labels, lpath);
  if (lmagic != kLabelMagic) {
    throw FormatError(fmt::format("{}: bad label magic 0x{:08x}", lpath,
                                  lmagic));
  }
  const std::uint32_t n_images = ReadBigEndian32(images, ipath);
  const std::uint32_t rows = ReadBigEndian32(images, ipath);
  const std::uint32_t cols = ReadBigEndian32(images, ipath);
  const std::uint32_t n_labels = ReadBigEndian32(labels, lpath);
  if (n_images != n_labels) {
    throw FormatError(fmt::format("image count {} != label count {}",
                                  n_images, n_labels));
  }
  if (n_images == 0) throw DataError(ipath + ": no records");
  if (rows == 0 || cols == 0) throw FormatError(ipath + ": zero image size");

  std::size_t n = n_images;
  if (limit) n = std::min(n, *limit);
  const std::size_t dim = std::size_t{rows} * cols;

  std::vector<unsigned char> pixels(n * dim);
  if (!images.read(reinterpret_cast<char*>(pixels.data()),
                   static_cast<std::streamsize>(pixels.size()))) {
    throw FormatError(ipath + ": truncated pixel data");
  }
  std::vector<unsigned char> raw_labels(n);
  if (!labels.read(reinterpret_cast<char*>(raw_labels.data()),
                   static_cast<std::streamsize>(raw_labels.size()))) {
    throw FormatError(lpath + ": truncated label data");
  }

  std::vector<double> features(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    features[i] = static_cast<double>(pixels[i]) / 255.0;
  }
  std::vector<int> ys(raw_labels.begin(), raw_labels.end());
  int max_label = 1;
  for (int y : ys) max_label = std::max(max_label, y);
  return Dataset(std::move(features), std::move(ys), dim, max_label + 1);
}

}  // namespace seafl
