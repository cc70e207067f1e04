#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chialvo {

enum class ValueType { real, integer, uint64, boolean, text };

struct KeySpec {
    std::string name;
    ValueType type = ValueType::real;
    std::optional<std::string> default_value;  // nullopt: required
    std::vector<std::string> choices;           // text keys only; empty = free text
};

using Schema = std::vector<KeySpec>;

struct ConfigError : std::runtime_error {
    int line;  // 0 when not tied to a line
    ConfigError(const std::string& msg, int line_no)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
};

// shortest representation that parses back to the same double
std::string format_double(double v);
std::optional<double> parse_double(const std::string& s);

class RunConfig {
public:
    explicit RunConfig(const Schema* schema) : schema_(schema) {}

    // validates and stores the canonical text; line is used in error messages
    void set(const std::string& key, const std::string& value, int line = 0);
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    double real(const std::string& key) const;
    long integer(const std::string& key) const;
    std::uint64_t u64(const std::string& key) const;
    bool flag(const std::string& key) const;
    const std::string& text(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }
    const std::vector<std::string>& defaulted() const { return defaulted_; }
    const Schema& schema() const { return *schema_; }

    // fills absent keys from defaults; a missing required key is an error
    void apply_defaults();

private:
    const KeySpec& spec(const std::string& key, int line) const;
    const Schema* schema_;
    std::map<std::string, std::string> values_;
    std::vector<std::string> defaulted_;
};

// the tool's full key set
const Schema& default_schema();

// `key = value` lines, '#' comments. Later assignments override earlier ones.
RunConfig parse_config(const std::string& text, const Schema& schema = default_schema(),
                       bool apply_defaults = true);

// one `key = value` line per key in schema order
std::string emit_config(const RunConfig& cfg);

}  // namespace chialvo
