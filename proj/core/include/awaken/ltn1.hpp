#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "awaken/tensor.hpp"

namespace awaken {

// Raised for unreadable, truncated or malformed files. The message names the file.
class FileFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// LTN1 layout: "LTN1", u32 LE rank, rank x u32 LE dims, f64 LE payload (row-major).
std::vector<std::uint8_t> encode_ltn1(const Tensor& t);
Tensor decode_ltn1(const std::vector<std::uint8_t>& bytes, const std::string& origin = "<memory>");

void write_ltn1(const std::filesystem::path& path, const Tensor& t);
Tensor read_ltn1(const std::filesystem::path& path);

bool has_ltn1_magic(const std::filesystem::path& path);

}  // namespace awaken
