#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tg {

// Unknown key or unparsable value. key() is the full dotted path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class ValueType { String, Real, Integer, Bool, IntList };

// Flat dotted-path configuration with typed defaults for every key. Precedence is
// defaults < config file < command-line overrides.
class RunConfig {
public:
    struct Entry {
        std::string key;
        ValueType type;
        std::string value;  // lists are stored comma-separated
    };

    static RunConfig defaults();

    // Reads a YAML file (scalars, nested maps, lists of scalars). Throws ConfigError on an
    // unknown key or a bad value, IoError when the file cannot be read.
    void load_file(const std::filesystem::path& path);
    void load_yaml(const std::string& text);

    // Throws ConfigError for unknown keys and values that do not parse as the key's type.
    void set(const std::string& key, const std::string& value);
    bool has(std::string_view key) const noexcept;

    std::string get_string(std::string_view key) const;
    double get_real(std::string_view key) const;
    std::int64_t get_int(std::string_view key) const;
    bool get_bool(std::string_view key) const;
    std::vector<std::size_t> get_list(std::string_view key) const;

    // Effective configuration as nested YAML that load_yaml accepts.
    std::string to_yaml() const;

    const std::vector<Entry>& entries() const noexcept { return entries_; }

private:
    const Entry& find(std::string_view key) const;

    std::vector<Entry> entries_;
};

}  // namespace tg
