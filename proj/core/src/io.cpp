#include "cmtest/io.hpp"

#include "cmtest/errors.hpp"

#include <png.h>

#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace cmtest {

namespace {

constexpr std::size_t kCmtfHeader = 32;
constexpr std::uint32_t kCmtfVersion = 1;

void put_u32(std::string& out, std::uint32_t v)
{
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

void put_f32(std::string& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

std::uint32_t get_u32(std::string_view in, std::size_t at)
{
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + b])) << (8 * b);
    return v;
}

float get_f32(std::string_view in, std::size_t at) { return std::bit_cast<float>(get_u32(in, at)); }

void append_number(std::string& out, double v)
{
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, end);
}

double csv_number(std::string_view token, std::size_t line)
{
    while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r'))
        token.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
        throw ValidationError("csv line " + std::to_string(line) + ": '" + std::string(token) +
                              "' is not a number");
    return v;
}

std::vector<double> csv_row(std::string_view line, std::size_t number)
{
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(csv_number(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start),
                                 number));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::size_t dimension(double v, const char* what)
{
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e9)
        throw ValidationError(std::string("csv header: ") + what + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

// PGM header token reader that skips whitespace and comments.
struct PgmHeader {
    std::string_view in;
    std::size_t pos = 0;

    long long next()
    {
        while (pos < in.size()) {
            if (in[pos] == '#') {
                while (pos < in.size() && in[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(in[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
        long long v = 0;
        auto [ptr, ec] = std::from_chars(in.data() + pos, in.data() + in.size(), v);
        if (ec != std::errc()) throw ValidationError("pgm: malformed header");
        pos = static_cast<std::size_t>(ptr - in.data());
        return v;
    }
};

void check_image(const Image& img)
{
    if (img.width == 0 || img.height == 0) throw ValidationError("image has zero dimension");
    if (img.rgb.size() != img.width * img.height * 3) throw ValidationError("image buffer size mismatch");
}

std::string lowercase_extension(const std::filesystem::path& path)
{
    std::string ext = path.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

} // namespace

std::string_view to_string(FieldFormat format)
{
    switch (format) {
    case FieldFormat::Csv: return "csv";
    case FieldFormat::Cmtf: return "cmtf";
    case FieldFormat::Pgm: return "pgm";
    }
    return "?";
}

FieldFormat parse_field_format(std::string_view text)
{
    if (text == "csv") return FieldFormat::Csv;
    if (text == "cmtf") return FieldFormat::Cmtf;
    if (text == "pgm") return FieldFormat::Pgm;
    throw ValidationError("unknown field format '" + std::string(text) + "' (expected csv, cmtf or pgm)");
}

FieldFormat field_format_for(const std::filesystem::path& path)
{
    const std::string ext = lowercase_extension(path);
    if (ext == ".csv") return FieldFormat::Csv;
    if (ext == ".cmtf") return FieldFormat::Cmtf;
    if (ext == ".pgm") return FieldFormat::Pgm;
    throw ValidationError("cannot infer field format from '" + path.string() + "' (use .csv, .cmtf or .pgm)");
}

std::string encode_field_csv(const ScalarField& field)
{
    std::string out;
    out.reserve(field.size() * 12 + 64);
    const Domain& d = field.domain();
    out += std::to_string(field.width()) + "," + std::to_string(field.height());
    for (double v : {d.x0, d.x1, d.y0, d.y1}) {
        out += ',';
        append_number(out, v);
    }
    out += '\n';
    for (std::size_t j = 0; j < field.height(); ++j) {
        for (std::size_t i = 0; i < field.width(); ++i) {
            if (i) out += ',';
            append_number(out, field.at(i, j));
        }
        out += '\n';
    }
    return out;
}

ScalarField decode_field_csv(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        start = nl + 1;
    }
    if (lines.empty()) throw ValidationError("csv: empty input");
    const auto header = csv_row(lines[0], 1);
    if (header.size() != 6)
        throw ValidationError("csv header must have 6 values (width,height,x0,x1,y0,y1), got " +
                              std::to_string(header.size()));
    const std::size_t w = dimension(header[0], "width");
    const std::size_t h = dimension(header[1], "height");
    if (lines.size() - 1 != h)
        throw ValidationError("csv: expected " + std::to_string(h) + " rows, got " + std::to_string(lines.size() - 1));
    std::vector<double> values;
    values.reserve(w * h);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto row = csv_row(lines[r], r + 1);
        if (row.size() != w)
            throw ValidationError("csv line " + std::to_string(r + 1) + ": expected " + std::to_string(w) +
                                  " values, got " + std::to_string(row.size()));
        values.insert(values.end(), row.begin(), row.end());
    }
    return ScalarField(w, h, {header[2], header[3], header[4], header[5]}, std::move(values));
}

std::string encode_field_cmtf(const ScalarField& field)
{
    std::string out;
    out.reserve(kCmtfHeader + field.size() * 4);
    out += "CMTF";
    put_u32(out, kCmtfVersion);
    put_u32(out, static_cast<std::uint32_t>(field.width()));
    put_u32(out, static_cast<std::uint32_t>(field.height()));
    const Domain& d = field.domain();
    for (double v : {d.x0, d.x1, d.y0, d.y1}) put_f32(out, static_cast<float>(v));
    for (double v : field.values()) put_f32(out, static_cast<float>(v));
    return out;
}

ScalarField decode_field_cmtf(std::string_view bytes)
{
    if (bytes.size() < kCmtfHeader)
        throw ValidationError("cmtf: expected at least a 32-byte header, got " + std::to_string(bytes.size()) +
                              " bytes");
    if (bytes.substr(0, 4) != "CMTF") throw ValidationError("cmtf: bad magic");
    const std::uint32_t version = get_u32(bytes, 4);
    if (version != kCmtfVersion) throw ValidationError("cmtf: unsupported version " + std::to_string(version));
    const std::size_t w = get_u32(bytes, 8);
    const std::size_t h = get_u32(bytes, 12);
    const std::size_t expected = kCmtfHeader + w * h * 4;
    if (bytes.size() != expected)
        throw ValidationError("cmtf: expected " + std::to_string(expected) + " bytes for " + std::to_string(w) + "x" +
                              std::to_string(h) + ", got " + std::to_string(bytes.size()));
    const Domain d{get_f32(bytes, 16), get_f32(bytes, 20), get_f32(bytes, 24), get_f32(bytes, 28)};
    std::vector<double> values(w * h);
    for (std::size_t p = 0; p < values.size(); ++p) values[p] = get_f32(bytes, kCmtfHeader + 4 * p);
    return ScalarField(w, h, d, std::move(values));
}

ScalarField decode_pgm(std::string_view bytes)
{
    if (bytes.size() < 2 || bytes.substr(0, 2) != "P5") throw ValidationError("pgm: expected binary P5 magic");
    PgmHeader hdr{bytes, 2};
    const long long w = hdr.next();
    const long long h = hdr.next();
    const long long maxval = hdr.next();
    if (w <= 0 || h <= 0) throw ValidationError("pgm: dimensions must be positive");
    if (maxval <= 0 || maxval > 65535) throw ValidationError("pgm: maxval must be in 1..65535");
    if (hdr.pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[hdr.pos])))
        throw ValidationError("pgm: missing whitespace after header");
    const std::size_t data = hdr.pos + 1;
    const std::size_t bpp = maxval > 255 ? 2 : 1;
    const std::size_t expected = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * bpp;
    if (bytes.size() - data < expected)
        throw ValidationError("pgm: expected " + std::to_string(expected) + " data bytes, got " +
                              std::to_string(bytes.size() - data));
    const std::size_t W = static_cast<std::size_t>(w);
    const std::size_t H = static_cast<std::size_t>(h);
    ScalarField field(W, H, {0.0, static_cast<double>(w), 0.0, static_cast<double>(h)});
    for (std::size_t row = 0; row < H; ++row) {
        for (std::size_t i = 0; i < W; ++i) {
            const std::size_t at = data + (row * W + i) * bpp;
            unsigned v = static_cast<unsigned char>(bytes[at]);
            if (bpp == 2) v = (v << 8) | static_cast<unsigned char>(bytes[at + 1]);
            if (v > static_cast<unsigned>(maxval)) throw ValidationError("pgm: sample exceeds maxval");
            field.at(i, H - 1 - row) = static_cast<double>(v) / static_cast<double>(maxval);
        }
    }
    field.set_value_range_hint(std::pair{0.0, 1.0});
    return field;
}

ScalarField load_field(const std::filesystem::path& path, FieldFormat format)
{
    const std::string bytes = read_file(path);
    try {
        switch (format) {
        case FieldFormat::Csv: return decode_field_csv(bytes);
        case FieldFormat::Cmtf: return decode_field_cmtf(bytes);
        case FieldFormat::Pgm: return decode_pgm(bytes);
        }
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    throw ValidationError("unknown field format");
}

ScalarField load_field(const std::filesystem::path& path) { return load_field(path, field_format_for(path)); }

void write_field(const ScalarField& field, const std::filesystem::path& path, FieldFormat format)
{
    switch (format) {
    case FieldFormat::Csv: write_file_atomic(path, encode_field_csv(field)); return;
    case FieldFormat::Cmtf: write_file_atomic(path, encode_field_cmtf(field)); return;
    case FieldFormat::Pgm: break;
    }
    throw ValidationError("pgm is an input-only field format");
}

void write_field(const ScalarField& field, const std::filesystem::path& path)
{
    write_field(field, path, field_format_for(path));
}

ImageFormat image_format_for(const std::filesystem::path& path)
{
    const std::string ext = lowercase_extension(path);
    if (ext == ".png") return ImageFormat::Png;
    if (ext == ".ppm") return ImageFormat::Ppm;
    throw ValidationError("cannot infer image format from '" + path.string() + "' (use .png or .ppm)");
}

std::string encode_ppm(const Image& img)
{
    check_image(img);
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
    return out;
}

std::string encode_png(const Image& img)
{
    check_image(img);
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width);
    image.height = static_cast<png_uint_32>(img.height);
    image.format = PNG_FORMAT_RGB;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.rgb.data(), 0, nullptr))
        throw IoError(std::string("png: ") + image.message);
    std::string out(size, '\0');
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.rgb.data(), 0, nullptr))
        throw IoError(std::string("png: ") + image.message);
    out.resize(size);
    return out;
}

Image decode_png(std::string_view bytes)
{
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
        throw ValidationError(std::string("png: ") + image.message);
    image.format = PNG_FORMAT_RGB;
    Image img(image.width, image.height);
    if (!png_image_finish_read(&image, nullptr, img.rgb.data(), 0, nullptr)) {
        png_image_free(&image);
        throw ValidationError(std::string("png: ") + image.message);
    }
    return img;
}

void write_image(const Image& img, const std::filesystem::path& path, ImageFormat format)
{
    write_file_atomic(path, format == ImageFormat::Png ? encode_png(img) : encode_ppm(img));
}

void write_image(const Image& img, const std::filesystem::path& path)
{
    write_image(img, path, image_format_for(path));
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path.string() + "'");
    return std::move(ss).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes)
{
    static std::atomic<unsigned> counter{0};
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("error writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at '" + path.string() + "'");
    }
}

} // namespace cmtest
