#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brw/model.hpp"

namespace brw {

/// Parsed run configuration. INI-style text: [section] headers (dots allowed
/// for nesting), key = value lines, # comments. Values stay as trimmed
/// strings; typed accessors convert on demand and name the offending
/// "section.key" in errors.
class RunConfig {
public:
    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section,
                           const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    std::int64_t get_int(const std::string& section,
                         const std::string& key) const;
    std::uint64_t get_u64(const std::string& section,
                          const std::string& key) const;

    std::optional<std::string> maybe_string(const std::string& section,
                                            const std::string& key) const;
    std::optional<double> maybe_double(const std::string& section,
                                       const std::string& key) const;
    std::optional<std::uint64_t> maybe_u64(const std::string& section,
                                           const std::string& key) const;

    void set(const std::string& section, const std::string& key,
             const std::string& value);

    // section -> key -> value, fully resolved (after any overrides)
    const std::map<std::string, std::map<std::string, std::string>>&
    sections() const {
        return sections_;
    }

    // canonical text form; parse_string(render()) round-trips to equal maps
    std::string render() const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Build the validated model from [model] (keys: offspring, step).
CheckedModel model_from_config(const RunConfig& config);

} // namespace brw
