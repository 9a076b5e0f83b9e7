#include "cmtest/report.hpp"

#include "cmtest/errors.hpp"
#include "cmtest/io.hpp"
#include "cmtest/render.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <unistd.h>

namespace cmtest {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("sha256 failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

nlohmann::json provenance_json(const EvaluationBundle& b)
{
    const std::string cmap = serialize_colormap(b.colormap);
    nlohmann::json p{{"colormap_sha256", sha256_hex(cmap)},
                     {"metric", std::string(to_string(b.options.metric))},
                     {"normalization", to_string(b.options.normalization)},
                     {"aggregation", std::string(to_string(b.options.aggregation))},
                     {"size", {b.source.width(), b.source.height()}}};
    if (b.test) {
        const nlohmann::json spec = to_json(*b.test);
        p["test_spec"] = spec;
        p["test_spec_sha256"] = sha256_hex(spec.dump());
    } else {
        p["test_spec"] = nullptr;
        p["field_sha256"] = sha256_hex(encode_field_cmtf(b.source));
    }
    return p;
}

void write_report(const EvaluationBundle& b, const fs::path& dir)
{
    if (fs::exists(dir)) {
        if (!fs::is_directory(dir)) throw IoError("'" + dir.string() + "' exists and is not a directory");
        if (!fs::is_empty(dir) && !fs::exists(dir / "statistics.json"))
            throw IoError("'" + dir.string() + "' is a non-empty directory that is not a report; refusing to replace");
    }

    static std::atomic<unsigned> counter{0};
    fs::path stage = dir;
    stage += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    std::error_code ec;
    fs::remove_all(stage, ec);
    if (!fs::create_directories(stage, ec) || ec)
        throw IoError("cannot create '" + stage.string() + "': " + ec.message());

    try {
        const Aggregation how = b.options.aggregation;
        const Domain& d = b.source.domain();
        write_field(aggregate(b.value, how, d), stage / "value.csv", FieldFormat::Csv);
        write_field(aggregate(b.color, how, d), stage / "color.csv", FieldFormat::Csv);
        write_field(aggregate(b.subtraction, how, d), stage / "subtraction.csv", FieldFormat::Csv);
        for (Panel p : kAllPanels)
            write_image(render_panel(b, p, how), stage / (std::string(to_string(p)) + ".png"), ImageFormat::Png);
        write_file_atomic(stage / "statistics.json", statistics_json(b).dump(2) + "\n");
        write_file_atomic(stage / "provenance.json", provenance_json(b).dump(2) + "\n");
        write_file_atomic(stage / "colormap.json", serialize_colormap(b.colormap));

        fs::path old;
        if (fs::exists(dir)) {
            old = dir;
            old += ".old." + std::to_string(::getpid()) + "." + std::to_string(counter++);
            fs::rename(dir, old);
        }
        fs::rename(stage, dir);
        if (!old.empty()) fs::remove_all(old, ec);
    } catch (const fs::filesystem_error& e) {
        fs::remove_all(stage, ec);
        throw IoError(std::string("writing report: ") + e.what());
    } catch (...) {
        fs::remove_all(stage, ec);
        throw;
    }
}

nlohmann::json read_report(const fs::path& dir)
{
    auto load = [&](const char* name) {
        const std::string text = read_file(dir / name);
        try {
            return nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError((dir / name).string() + ": " + e.what());
        }
    };
    return {{"statistics", load("statistics.json")}, {"provenance", load("provenance.json")}};
}

} // namespace cmtest
