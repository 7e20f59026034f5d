#pragma once

#include "mcbench/mesh.hpp"

#include <filesystem>

namespace mcbench {

/// Loads a PNG or JPEG image (detected by magic bytes) as an RGB texture.
/// 8-bit channels are mapped to [0, 1] by division by 255; 16-bit PNGs are
/// reduced to 8 bits, grayscale is expanded and alpha dropped.
/// Throws std::runtime_error on missing, corrupt or unsupported files.
TextureImage load_texture(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG. Channels are clamped to [0, 1] and rounded, so a
/// reload matches the original within 1/255 per channel.
void save_texture_png(const TextureImage& image, const std::filesystem::path& path);

}  // namespace mcbench
