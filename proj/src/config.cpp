#include "tg/config.hpp"

#include <algorithm>
#include <charconv>
#include <yaml-cpp/yaml.h>

#include "tg/io.hpp"
#include "tg/text.hpp"

namespace tg {

RunConfig RunConfig::defaults() {
    RunConfig c;
    c.entries_ = {
        {"dataset", ValueType::String, ""},
        {"out", ValueType::String, "out"},
        {"seed", ValueType::Integer, "42"},
        {"directed", ValueType::Bool, "false"},
        {"scorer", ValueType::String, "edgebank-inf"},
        {"split.train", ValueType::Real, "0.7"},
        {"split.val", ValueType::Real, "0.15"},
        {"split.test", ValueType::Real, "0.15"},
        {"sampler.strategy", ValueType::String, "most-recent"},
        {"sampler.window", ValueType::Real, "1"},
        {"sampler.fanouts", ValueType::IntList, "10,10"},
        {"sampler.time_bound", ValueType::String, "seed"},
        {"sample.seeds", ValueType::String, ""},
        {"sample.batch_size", ValueType::Integer, "200"},
        {"sample.max_batches", ValueType::Integer, "0"},
        {"negatives.strategy", ValueType::String, "random"},
        {"negatives.per_positive", ValueType::Integer, "1"},
        {"negatives.fallback", ValueType::String, "to-random"},
        {"negatives.corrupt", ValueType::String, "destination"},
        {"snapshot.mode", ValueType::String, "fixed-count"},
        {"snapshot.k", ValueType::Integer, "10"},
        {"snapshot.width", ValueType::Real, "1"},
        {"snapshot.events", ValueType::Integer, "1000"},
        {"snapshot.coalesce", ValueType::String, "count-weight"},
        {"snapshot.accumulation", ValueType::String, "interval"},
        {"edgebank.window", ValueType::Real, "0"},
        {"eval.batch_size", ValueType::Integer, "200"},
        {"node.dynamic", ValueType::Bool, "true"},
        {"node.classifier", ValueType::String, "persistence"},
        {"stats.name", ValueType::String, ""},
    };
    return c;
}

bool RunConfig::has(std::string_view key) const noexcept {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
}

const RunConfig::Entry& RunConfig::find(std::string_view key) const {
    for (const auto& e : entries_)
        if (e.key == key) return e;
    throw ConfigError(std::string(key), "unknown config key");
}

namespace {

template <typename T>
bool parse_number(std::string_view text, T& out) {
    text = trim(text);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size() && !text.empty();
}

std::string normalize(const std::string& key, ValueType type, std::string value) {
    value = std::string(trim(value));
    switch (type) {
        case ValueType::String:
            return value;
        case ValueType::Real: {
            double x = 0;
            if (!parse_number(value, x)) throw ConfigError(key, "expected a real number, got '" + value + "'");
            return format_real(x);
        }
        case ValueType::Integer: {
            std::int64_t x = 0;
            if (!parse_number(value, x)) throw ConfigError(key, "expected an integer, got '" + value + "'");
            return std::to_string(x);
        }
        case ValueType::Bool:
            if (value == "true" || value == "1" || value == "yes") return "true";
            if (value == "false" || value == "0" || value == "no") return "false";
            throw ConfigError(key, "expected true or false, got '" + value + "'");
        case ValueType::IntList: {
            std::string_view body = value;
            if (body.size() >= 2 && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
            std::string out;
            for (auto part : split(body, ',')) {
                std::size_t x = 0;
                if (!parse_number(part, x)) throw ConfigError(key, "expected a list of integers, got '" + value + "'");
                out += (out.empty() ? "" : ",") + std::to_string(x);
            }
            return out;
        }
    }
    return value;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    for (auto& e : entries_) {
        if (e.key == key) {
            e.value = normalize(key, e.type, value);
            return;
        }
    }
    throw ConfigError(key, "unknown config key");
}

std::string RunConfig::get_string(std::string_view key) const { return find(key).value; }

double RunConfig::get_real(std::string_view key) const {
    double x = 0;
    parse_number(find(key).value, x);
    return x;
}

std::int64_t RunConfig::get_int(std::string_view key) const {
    std::int64_t x = 0;
    parse_number(find(key).value, x);
    return x;
}

bool RunConfig::get_bool(std::string_view key) const { return find(key).value == "true"; }

std::vector<std::size_t> RunConfig::get_list(std::string_view key) const {
    std::vector<std::size_t> out;
    const std::string& v = find(key).value;
    if (v.empty()) return out;
    for (auto part : split(v, ',')) {
        std::size_t x = 0;
        parse_number(part, x);
        out.push_back(x);
    }
    return out;
}

namespace {

void flatten(const YAML::Node& node, const std::string& prefix, RunConfig& config) {
    if (node.IsMap()) {
        for (const auto& kv : node) {
            const auto name = kv.first.as<std::string>();
            flatten(kv.second, prefix.empty() ? name : prefix + "." + name, config);
        }
        return;
    }
    if (prefix.empty()) return;
    if (node.IsSequence()) {
        std::string joined;
        for (const auto& item : node) joined += (joined.empty() ? "" : ",") + item.as<std::string>();
        config.set(prefix, joined);
        return;
    }
    config.set(prefix, node.IsNull() ? "" : node.as<std::string>());
}

}  // namespace

void RunConfig::load_yaml(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError("<file>", std::string("invalid YAML: ") + e.what());
    }
    if (root.IsNull()) return;
    if (!root.IsMap()) throw ConfigError("<file>", "config root must be a mapping");
    flatten(root, "", *this);
}

void RunConfig::load_file(const std::filesystem::path& path) { load_yaml(read_text_file(path)); }

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string RunConfig::to_yaml() const {
    std::string out;
    std::string open_section;
    for (const auto& e : entries_) {
        const auto dot = e.key.find('.');
        std::string name = e.key;
        std::string indent;
        if (dot != std::string::npos) {
            const std::string section = e.key.substr(0, dot);
            if (section != open_section) {
                out += section + ":\n";
                open_section = section;
            }
            name = e.key.substr(dot + 1);
            indent = "  ";
        } else {
            open_section.clear();
        }
        std::string value = e.value;
        if (e.type == ValueType::String) value = quote(value);
        if (e.type == ValueType::IntList) {
            value = "[";
            const auto parts = split(e.value, ',');
            for (std::size_t i = 0; i < parts.size() && !e.value.empty(); ++i)
                value += (i ? ", " : "") + std::string(parts[i]);
            value += "]";
        }
        out += indent + name + ": " + value + "\n";
    }
    return out;
}

}  // namespace tg
