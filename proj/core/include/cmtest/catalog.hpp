#pragma once

#include "cmtest/scalar_field.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cmtest {

enum class FunctionId {
    Step,
    Gradient,
    MinMaxSaddle,
    RidgeValley,
    Frequency,
    Threshold,
    LittleBit,
    Bukin6,
    Langermann,
    CrossInTray,
    Levy13,
    Schwefel,
    SixHumpCamel,
    Mandelbrot,
};

std::string_view to_string(FunctionId id);
/// Throws UnknownNameError naming the available ids.
FunctionId parse_function_id(std::string_view text);

enum class ParamKind { Real, Integer, Choice, RealList, Flag };

struct ParamSchema {
    std::string name;
    ParamKind kind = ParamKind::Real;
    /// Unset means the parameter is optional with no default.
    std::optional<std::string> default_value;
    std::string description;
    std::vector<std::string> choices;
};

struct FunctionInfo {
    FunctionId id;
    std::string description;
    /// Domain at the default parameters (step and frequency depend on them).
    Domain domain;
    std::vector<ParamSchema> params;
};

const std::vector<FunctionInfo>& catalog();
const FunctionInfo& function_info(FunctionId id);
/// Parameters accepted by every function to inject noise.
const std::vector<ParamSchema>& noise_params();

/// A named test function with its parameters and grid: the unit of
/// reproducibility. Parameter values are kept as text and validated
/// against the catalog schema when generated.
struct TestSpec {
    FunctionId function = FunctionId::Gradient;
    std::map<std::string, std::string> params;
    Resolution resolution{512, 512};
    std::uint64_t seed = 0;

    friend bool operator==(const TestSpec&, const TestSpec&) = default;
};

struct GeneratedField {
    ScalarField field;
    std::vector<std::string> warnings;
};

/// Validates params against the schema and produces the field, with noise
/// applied when the `noise` parameter is not "none". Unknown parameter
/// names raise UnknownNameError; bad values ValidationError.
GeneratedField generate(const TestSpec& spec);

nlohmann::json to_json(const TestSpec& spec);
TestSpec test_spec_from_json(const nlohmann::json& doc);
nlohmann::json catalog_json();
std::string catalog_text();

/// Parses "WxH".
Resolution parse_resolution(std::string_view text);

} // namespace cmtest
