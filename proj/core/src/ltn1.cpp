#include "awaken/ltn1.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace awaken {
namespace {

constexpr char kMagic[4] = {'L', 'T', 'N', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(const std::uint8_t* p, int n) {
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_ltn1(const Tensor& t) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + 4 * t.rank() + 8 * t.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, static_cast<std::uint32_t>(t.rank()));
  for (std::size_t d : t.shape()) put_u32(out, static_cast<std::uint32_t>(d));
  for (double v : t.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

Tensor decode_ltn1(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
  auto fail = [&](const std::string& why) -> FileFormatError {
    return FileFormatError(origin + ": " + why);
  };
  if (bytes.size() < 8) throw fail("truncated LTN1 header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw fail("bad LTN1 magic");
  const auto rank = static_cast<std::size_t>(get_le(bytes.data() + 4, 4));
  if (rank > 16) throw fail("implausible LTN1 rank " + std::to_string(rank));
  std::size_t pos = 8;
  if (bytes.size() < pos + 4 * rank) throw fail("truncated LTN1 dims");
  Shape shape(rank);
  for (std::size_t i = 0; i < rank; ++i, pos += 4) shape[i] = get_le(bytes.data() + pos, 4);
  const std::size_t n = shape_size(shape);
  if (bytes.size() != pos + 8 * n) {
    throw fail("LTN1 payload size mismatch for shape " + shape_string(shape));
  }
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i, pos += 8) data[i] = std::bit_cast<double>(get_le(bytes.data() + pos, 8));
  try {
    return Tensor(std::move(shape), std::move(data));
  } catch (const std::exception& e) {
    throw fail(e.what());
  }
}

void write_ltn1(const std::filesystem::path& path, const Tensor& t) {
  const auto bytes = encode_ltn1(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileFormatError(path.string() + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FileFormatError(path.string() + ": write failed");
}

Tensor read_ltn1(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileFormatError(path.string() + ": cannot open");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_ltn1(bytes, path.string());
}

bool has_ltn1_magic(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char head[4] = {};
  if (!in.read(head, 4)) return false;
  return std::memcmp(head, kMagic, 4) == 0;
}

}  // namespace awaken
