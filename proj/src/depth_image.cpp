#include "fnav/depth_image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace fnav {

void save_depth_pgm(const DepthImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open PGM for writing: " + path);
  out << "P5\n" << image.width << " " << image.height << "\n65535\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(image.width) * 2);
  for (int v = 0; v < image.height; ++v) {
    for (int u = 0; u < image.width; ++u) {
      const float value = image.at(u, v);
      std::uint16_t mm = 0;
      if (DepthImage::defined(value))
        mm = static_cast<std::uint16_t>(std::min(65535.0, std::round(value * 1000.0)));
      row[2 * u] = static_cast<unsigned char>(mm >> 8);  // big-endian per PGM
      row[2 * u + 1] = static_cast<unsigned char>(mm & 0xff);
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
}

DepthImage load_depth_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open PGM: " + path);
  std::string magic;
  int width = 0, height = 0, maxval = 0;
  in >> magic >> width >> height >> maxval;
  if (magic != "P5" || maxval != 65535) throw std::runtime_error("unsupported PGM: " + path);
  in.get();  // single whitespace after the header
  DepthImage image(width, height);
  std::vector<unsigned char> row(static_cast<std::size_t>(width) * 2);
  for (int v = 0; v < height; ++v) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
    if (!in) throw std::runtime_error("truncated PGM: " + path);
    for (int u = 0; u < width; ++u) {
      const std::uint16_t mm = static_cast<std::uint16_t>((row[2 * u] << 8) | row[2 * u + 1]);
      image.at(u, v) = mm == 0 ? DepthImage::kUndefined : static_cast<float>(mm) / 1000.0f;
    }
  }
  return image;
}

}  // namespace fnav
