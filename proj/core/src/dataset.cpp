#include "fmp/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "fmp/error.hpp"

namespace fmp {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset,
                        const std::filesystem::path& path) {
  if (offset + 4 > bytes.size()) throw FormatError(path.string() + ": truncated header");
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put_be32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                     static_cast<char>(v)};
  out.write(b, 4);
}

}  // namespace

void Dataset::validate() const {
  if (images.size() != labels.size()) throw InvalidParameterError("image and label counts differ");
  for (int label : labels) {
    if (label < 0 || label >= class_count) throw InvalidParameterError("label out of range");
  }
}

Dataset Dataset::head(std::size_t n) const {
  n = std::min(n, size());
  Dataset d;
  d.images.assign(images.begin(), images.begin() + static_cast<std::ptrdiff_t>(n));
  d.labels.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n));
  d.class_count = class_count;
  return d;
}

Dataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
  const auto img = read_file(images_path);
  const auto lab = read_file(labels_path);
  if (read_be32(img, 0, images_path) != kImageMagic) throw FormatError(images_path.string() + ": bad magic");
  if (read_be32(lab, 0, labels_path) != kLabelMagic) throw FormatError(labels_path.string() + ": bad magic");
  const std::uint32_t count = read_be32(img, 4, images_path);
  const std::uint32_t rows = read_be32(img, 8, images_path);
  const std::uint32_t cols = read_be32(img, 12, images_path);
  const std::uint32_t label_count = read_be32(lab, 4, labels_path);
  if (count != label_count) {
    throw FormatError("image count " + std::to_string(count) + " does not match label count " +
                      std::to_string(label_count));
  }
  const std::size_t pixels = std::size_t{rows} * cols;
  if (img.size() < 16 + pixels * count) throw FormatError(images_path.string() + ": truncated data");
  if (lab.size() < 8 + std::size_t{count}) throw FormatError(labels_path.string() + ": truncated data");

  Dataset d;
  d.images.reserve(count);
  d.labels.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    Tensor3 t(static_cast<int>(rows), static_cast<int>(cols), 1);
    const unsigned char* p = img.data() + 16 + n * pixels;
    auto v = t.values();
    for (std::size_t k = 0; k < pixels; ++k) v[k] = p[k] / 255.0;
    d.images.push_back(std::move(t));
    d.labels.push_back(lab[8 + n]);
    d.class_count = std::max(d.class_count, d.labels.back() + 1);
  }
  return d;
}

void write_idx(const Dataset& data, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path) {
  data.validate();
  std::ofstream img(images_path, std::ios::binary);
  std::ofstream lab(labels_path, std::ios::binary);
  if (!img || !lab) throw FormatError("cannot write IDX files");
  const int rows = data.images.empty() ? 0 : data.images[0].height();
  const int cols = data.images.empty() ? 0 : data.images[0].width();
  put_be32(img, kImageMagic);
  put_be32(img, static_cast<std::uint32_t>(data.size()));
  put_be32(img, static_cast<std::uint32_t>(rows));
  put_be32(img, static_cast<std::uint32_t>(cols));
  put_be32(lab, kLabelMagic);
  put_be32(lab, static_cast<std::uint32_t>(data.size()));
  for (std::size_t n = 0; n < data.size(); ++n) {
    const auto& t = data.images[n];
    if (t.height() != rows || t.width() != cols || t.channels() != 1) {
      throw ShapeError("IDX images must share one single-channel size");
    }
    for (double v : t.values()) {
      img.put(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0))));
    }
    lab.put(static_cast<char>(data.labels[n]));
  }
}

Dataset load_idx_dir(const std::filesystem::path& dir, const std::string& prefix) {
  return load_idx(dir / (prefix + "-images-idx3-ubyte"), dir / (prefix + "-labels-idx1-ubyte"));
}

Tensor3 pad_to_input(const Tensor3& image, int input_size) {
  if (image.height() > input_size || image.width() > input_size) {
    throw ShapeError("image " + std::to_string(image.height()) + "x" + std::to_string(image.width()) +
                     " larger than input size " + std::to_string(input_size));
  }
  Tensor3 out(input_size, input_size, image.channels());
  const int top = (input_size - image.height()) / 2;
  const int left = (input_size - image.width()) / 2;
  for (int r = 0; r < image.height(); ++r) {
    const double* src = image.values().data() + image.index(r, 0, 0);
    const auto row_len = static_cast<std::ptrdiff_t>(image.width()) * image.channels();
    std::copy(src, src + row_len, out.values().data() + out.index(top + r, left, 0));
  }
  return out;
}

}  // namespace fmp
