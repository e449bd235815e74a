#pragma once

#include <filesystem>

#include "awaken/latent.hpp"

namespace awaken {

// 8-bit binary PGM (P5). Byte v maps to the latent value 2v/255 - 1.
FrameLatent read_pgm(const std::filesystem::path& path);

// Writes one channel; latents are clamped to [-1, 1] and rounded to bytes.
void write_pgm(const std::filesystem::path& path, const FrameLatent& frame, std::size_t channel = 0);

double pgm_byte_to_latent(int v);
int latent_to_pgm_byte(double x);

}  // namespace awaken
