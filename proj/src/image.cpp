#include "patchrank/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace patchrank {

namespace {

// Skips whitespace and '#' comment lines between header tokens.
int read_header_int(std::istream& in, const std::string& path) {
  int c = in.peek();
  while (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#') {
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else {
      in.get();
    }
    c = in.peek();
  }
  int value = -1;
  in >> value;
  require(in.good() && value >= 0, "malformed header in " + path);
  return value;
}

void read_magic(std::istream& in, const char* magic, const std::string& path) {
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  require(in.good() && m0 == magic[0] && m1 == magic[1],
          path + " is not a " + magic + " file");
}

}  // namespace

Frame make_frame(int width, int height) {
  require(width > 0 && height > 0, "frame dimensions must be positive");
  Frame f;
  f.width = width;
  f.height = height;
  f.pixels.assign(static_cast<std::size_t>(3) * width * height, 0);
  return f;
}

Frame read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open " + path);
  read_magic(in, "P6", path);
  int width = read_header_int(in, path);
  int height = read_header_int(in, path);
  int maxval = read_header_int(in, path);
  require(maxval == 255, path + ": only maxval 255 is supported");
  in.get();  // single whitespace byte after the header
  Frame f = make_frame(width, height);
  in.read(reinterpret_cast<char*>(f.pixels.data()),
          static_cast<std::streamsize>(f.pixels.size()));
  require(in.gcount() == static_cast<std::streamsize>(f.pixels.size()),
          path + ": truncated pixel data");
  return f;
}

void write_ppm(const Frame& frame, const std::string& path) {
  require(frame.width > 0 && frame.height > 0 &&
              frame.pixels.size() == static_cast<std::size_t>(3) * frame.width * frame.height,
          "frame is not well-formed");
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot open " + path + " for writing");
  out << "P6\n" << frame.width << " " << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
  require(out.good(), "write failed for " + path);
}

void write_pgm(const std::vector<double>& values, int width, int height,
               const std::string& path) {
  require(width > 0 && height > 0 &&
              values.size() == static_cast<std::size_t>(width) * height,
          "value buffer does not match dimensions");
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot open " + path + " for writing");
  out << "P5\n" << width << " " << height << "\n255\n";
  for (double v : values) {
    double clamped = std::clamp(v, 0.0, 1.0);
    out.put(static_cast<char>(static_cast<int>(std::lround(255.0 * clamped))));
  }
  require(out.good(), "write failed for " + path);
}

std::vector<std::uint8_t> read_pgm(const std::string& path, int& width, int& height) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open " + path);
  read_magic(in, "P5", path);
  width = read_header_int(in, path);
  height = read_header_int(in, path);
  int maxval = read_header_int(in, path);
  require(maxval == 255, path + ": only maxval 255 is supported");
  in.get();
  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  require(in.gcount() == static_cast<std::streamsize>(data.size()),
          path + ": truncated pixel data");
  return data;
}

Frame resize_bilinear(const Frame& frame, int new_width, int new_height) {
  require(new_width > 0 && new_height > 0, "target dimensions must be positive");
  if (new_width == frame.width && new_height == frame.height) return frame;
  Frame out = make_frame(new_width, new_height);
  const double sx = static_cast<double>(frame.width) / new_width;
  const double sy = static_cast<double>(frame.height) / new_height;
  for (int y = 0; y < new_height; ++y) {
    // Pixel centers map to source centers; samples beyond the border clamp.
    double fy = (y + 0.5) * sy - 0.5;
    int y0 = static_cast<int>(std::floor(fy));
    double ty = fy - y0;
    int y1 = std::min(y0 + 1, frame.height - 1);
    y0 = std::max(y0, 0);
    for (int x = 0; x < new_width; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      int x0 = static_cast<int>(std::floor(fx));
      double tx = fx - x0;
      int x1 = std::min(x0 + 1, frame.width - 1);
      x0 = std::max(x0, 0);
      for (int ch = 0; ch < 3; ++ch) {
        double top = (1.0 - tx) * frame.at(x0, y0, ch) + tx * frame.at(x1, y0, ch);
        double bot = (1.0 - tx) * frame.at(x0, y1, ch) + tx * frame.at(x1, y1, ch);
        double val = (1.0 - ty) * top + ty * bot;
        out.at(x, y, ch) = static_cast<std::uint8_t>(
            std::clamp(static_cast<int>(std::lround(val)), 0, 255));
      }
    }
  }
  return out;
}

}  // namespace patchrank
