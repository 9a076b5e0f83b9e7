#pragma once

#include <cmtest/scalar_field.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace cmtest::testing {

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(CMTEST_TEST_DATA_DIR) / name; }

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir()
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("cmtest-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

struct SharmaPair {
    std::array<double, 3> lab1;
    std::array<double, 3> lab2;
    double expected;
};

inline std::vector<SharmaPair> load_sharma_pairs()
{
    std::ifstream in(data_path("ciede2000_sharma.csv"));
    std::vector<SharmaPair> pairs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::array<double, 7> v{};
        for (double& x : v) {
            std::string tok;
            std::getline(ss, tok, ',');
            x = std::stod(tok);
        }
        pairs.push_back({{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, v[6]});
    }
    return pairs;
}

inline ScalarField field_from(std::size_t w, std::size_t h, std::vector<double> values)
{
    return ScalarField(w, h, {0.0, static_cast<double>(w), 0.0, static_cast<double>(h)}, std::move(values));
}

} // namespace cmtest::testing
