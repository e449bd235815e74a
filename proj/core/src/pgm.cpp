#include "awaken/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "awaken/ltn1.hpp"

namespace awaken {

double pgm_byte_to_latent(int v) { return 2.0 * static_cast<double>(v) / 255.0 - 1.0; }

int latent_to_pgm_byte(double x) {
  const double v = (std::clamp(x, -1.0, 1.0) + 1.0) * 127.5;
  return static_cast<int>(std::lround(v));
}

FrameLatent read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileFormatError(path.string() + ": cannot open");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) { return FileFormatError(path.string() + ": " + why); };
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (std::isspace(bytes[pos])) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space();
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) throw fail("malformed PGM header");
    long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos++] - '0');
      if (v > 1 << 20) throw fail("PGM header value too large");
    }
    return static_cast<std::size_t>(v);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw fail("not a binary PGM (P5) file");
  pos = 2;
  const std::size_t w = read_int();
  const std::size_t h = read_int();
  const std::size_t maxval = read_int();
  if (w == 0 || h == 0) throw fail("PGM has zero size");
  if (maxval != 255) throw fail("only 8-bit PGM with maxval 255 is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw fail("malformed PGM header");
  ++pos;
  if (bytes.size() - pos != w * h) throw fail("PGM payload has wrong size");
  FrameLatent f(1, h, w);
  for (std::size_t i = 0; i < w * h; ++i) f.values()[i] = pgm_byte_to_latent(bytes[pos + i]);
  return f;
}

void write_pgm(const std::filesystem::path& path, const FrameLatent& frame, std::size_t channel) {
  if (channel >= frame.channels()) throw std::out_of_range("write_pgm: channel out of range");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileFormatError(path.string() + ": cannot open for writing");
  out << "P5\n" << frame.width() << " " << frame.height() << "\n255\n";
  for (std::size_t y = 0; y < frame.height(); ++y)
    for (std::size_t x = 0; x < frame.width(); ++x) out.put(static_cast<char>(latent_to_pgm_byte(frame.at(channel, y, x))));
  if (!out) throw FileFormatError(path.string() + ": write failed");
}

}  // namespace awaken
