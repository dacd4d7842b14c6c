#include "kppca/mnist.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <string>

#include "kppca/errors.hpp"

namespace kppca {

namespace {

std::uint32_t read_be32(std::istream& in, const std::filesystem::path& path) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
    throw Error(Errc::Truncated, path.string() + ": header is truncated");
  }
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
         std::uint32_t{b[3]};
}

void write_be32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                              static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b.data(), 4);
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return in;
}

}  // namespace

bool is_idx_images(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) return false;
  return b[0] == 0 && b[1] == 0 && b[2] == 0x08 && b[3] == 0x03;
}

MnistData load_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                         const std::optional<std::set<int>>& filter,
                         const std::optional<std::size_t>& limit) {
  if (limit && *limit < 1) throw Error(Errc::InvalidArgument, "limit must be at least 1");
  std::ifstream img = open(images);
  std::ifstream lab = open(labels);

  if (read_be32(img, images) != kIdxImagesMagic) {
    throw Error(Errc::BadMagic, images.string() + " is not an IDX image file");
  }
  if (read_be32(lab, labels) != kIdxLabelsMagic) {
    throw Error(Errc::BadMagic, labels.string() + " is not an IDX label file");
  }
  const std::uint32_t count = read_be32(img, images);
  const std::uint32_t rows = read_be32(img, images);
  const std::uint32_t cols = read_be32(img, images);
  const std::uint32_t label_count = read_be32(lab, labels);
  if (count != label_count) {
    throw Error(Errc::CountMismatch, std::to_string(count) + " images but " +
                                         std::to_string(label_count) + " labels");
  }

  std::vector<std::uint8_t> all_labels(count);
  if (!lab.read(reinterpret_cast<char*>(all_labels.data()), count)) {
    throw Error(Errc::Truncated, labels.string() + ": fewer labels than declared");
  }

  const std::size_t pixels = std::size_t{rows} * cols;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < count; ++i) {
    if (limit && keep.size() >= *limit) break;
    if (!filter || filter->contains(all_labels[i])) keep.push_back(i);
  }

  MnistData out;
  out.rows = static_cast<int>(rows);
  out.cols = static_cast<int>(cols);
  out.pixels.resize(static_cast<Eigen::Index>(pixels), static_cast<Eigen::Index>(keep.size()));
  out.labels.reserve(keep.size());
  std::vector<unsigned char> buffer(pixels);
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const std::streamoff offset =
        16 + static_cast<std::streamoff>(keep[j]) * static_cast<std::streamoff>(pixels);
    img.seekg(offset);
    if (!img.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(pixels))) {
      throw Error(Errc::Truncated, images.string() + ": image " + std::to_string(keep[j]) +
                                       " is past the end of the file");
    }
    for (std::size_t p = 0; p < pixels; ++p) {
      out.pixels(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(j)) = buffer[p] / 255.0;
    }
    out.labels.push_back(all_labels[keep[j]]);
  }
  return out;
}

void save_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                    const MnistData& data) {
  const auto n = static_cast<std::uint32_t>(data.pixels.cols());
  if (data.labels.size() != n ||
      data.pixels.rows() != static_cast<Eigen::Index>(data.rows) * data.cols) {
    throw Error(Errc::DimensionMismatch, "MNIST pixels, labels and shape disagree");
  }
  std::ofstream img(images, std::ios::binary);
  std::ofstream lab(labels, std::ios::binary);
  if (!img || !lab) throw Error(Errc::Io, "cannot write IDX files");
  write_be32(img, kIdxImagesMagic);
  write_be32(img, n);
  write_be32(img, static_cast<std::uint32_t>(data.rows));
  write_be32(img, static_cast<std::uint32_t>(data.cols));
  for (Eigen::Index j = 0; j < data.pixels.cols(); ++j) {
    for (Eigen::Index p = 0; p < data.pixels.rows(); ++p) {
      const double v = std::clamp(data.pixels(p, j), 0.0, 1.0);
      img.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
  }
  write_be32(lab, kIdxLabelsMagic);
  write_be32(lab, n);
  lab.write(reinterpret_cast<const char*>(data.labels.data()), static_cast<std::streamsize>(n));
  if (!img || !lab) throw Error(Errc::Io, "failed writing IDX files");
}

}  // namespace kppca
