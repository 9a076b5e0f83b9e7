#pragma once

#include "cmtest/scalar_field.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cmtest {

enum class FieldFormat { Csv, Cmtf, Pgm };

std::string_view to_string(FieldFormat format);
FieldFormat parse_field_format(std::string_view text);
/// From the extension: .csv, .cmtf, .pgm. Throws ValidationError otherwise.
FieldFormat field_format_for(const std::filesystem::path& path);

/// CSV: a header line "width,height,x0,x1,y0,y1" with the actual values,
/// then one line per row (row 0 = y0) of comma-separated values.
std::string encode_field_csv(const ScalarField& field);
ScalarField decode_field_csv(std::string_view text);

/// CMTF: 32-byte little-endian header (magic "CMTF", u32 version, u32
/// width, u32 height, f32 x0, x1, y0, y1) followed by width*height f32
/// values in row-major order.
std::string encode_field_cmtf(const ScalarField& field);
ScalarField decode_field_cmtf(std::string_view bytes);

/// Binary PGM (P5), 8 or 16 bit. Values are divided by maxval; the top
/// image row becomes the last field row. Domain is [0, w] x [0, h].
ScalarField decode_pgm(std::string_view bytes);

ScalarField load_field(const std::filesystem::path& path, FieldFormat format);
ScalarField load_field(const std::filesystem::path& path);
/// PGM is input only.
void write_field(const ScalarField& field, const std::filesystem::path& path, FieldFormat format);
void write_field(const ScalarField& field, const std::filesystem::path& path);

/// 8-bit sRGB, rows top to bottom, RGB interleaved.
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> rgb;

    Image() = default;
    Image(std::size_t w, std::size_t h) : width(w), height(h), rgb(w * h * 3, 0) {}

    std::uint8_t* pixel(std::size_t x, std::size_t y) { return &rgb[(y * width + x) * 3]; }
    const std::uint8_t* pixel(std::size_t x, std::size_t y) const { return &rgb[(y * width + x) * 3]; }

    friend bool operator==(const Image&, const Image&) = default;
};

enum class ImageFormat { Png, Ppm };

ImageFormat image_format_for(const std::filesystem::path& path);

std::string encode_ppm(const Image& img);
std::string encode_png(const Image& img);
Image decode_png(std::string_view bytes);

void write_image(const Image& img, const std::filesystem::path& path, ImageFormat format);
void write_image(const Image& img, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

} // namespace cmtest
