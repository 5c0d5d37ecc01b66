#include "fmp/pixmap.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "fmp/error.hpp"

namespace fmp {

namespace {

int read_header_int(std::istream& in) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  if (c == EOF || !std::isdigit(c)) throw FormatError("pixmap: malformed header");
  long v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    if (v > 1 << 20) throw FormatError("pixmap: header value too large");
    c = in.get();
  }
  // exactly one whitespace byte separates the header from the raster
  if (c == EOF || !std::isspace(c)) throw FormatError("pixmap: malformed header");
  return static_cast<int>(v);
}

}  // namespace

Tensor3 read_ppm(std::istream& in) {
  char magic[2] = {};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '6') throw FormatError("pixmap: expected P6 magic");
  const int width = read_header_int(in);
  const int height = read_header_int(in);
  const int maxval = read_header_int(in);
  if (width < 1 || height < 1 || maxval < 1 || maxval > 255) throw FormatError("pixmap: unsupported header");
  Tensor3 image(height, width, 3);
  std::string raster(image.size(), '\0');
  in.read(raster.data(), static_cast<std::streamsize>(raster.size()));
  if (static_cast<std::size_t>(in.gcount()) != raster.size()) throw FormatError("pixmap: truncated raster");
  auto v = image.values();
  const double scale = 255.0 / maxval;
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<unsigned char>(raster[k]) * scale;
  return image;
}

Tensor3 read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_ppm(in);
}

void write_ppm(const Tensor3& image, std::ostream& out) {
  if (image.channels() != 3 && image.channels() != 1) throw ShapeError("pixmap needs 1 or 3 channels");
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        const double v = image.at(r, c, image.channels() == 3 ? ch : 0);
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 255.0)))));
      }
    }
  }
  if (!out) throw FormatError("failed to write pixmap");
}

void write_ppm(const Tensor3& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_ppm(image, out);
}

}  // namespace fmp
