#include "brw/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "brw/errors.hpp"

namespace brw {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double to_double(const std::string& v, const std::string& where) {
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(where + ": not a number: '" + v + "'");
    return d;
}

// "k:p" pairs for offspring / lattice atoms
std::pair<double, double> split_colon(const std::string& tok,
                                      const std::string& where) {
    std::size_t c = tok.find(':');
    if (c == std::string::npos)
        throw ConfigError(where + ": expected value:probability, got '" + tok +
                          "'");
    return {to_double(tok.substr(0, c), where),
            to_double(tok.substr(c + 1), where)};
}

OffspringLaw offspring_from_spec(const std::string& spec) {
    const std::string where = "model.offspring";
    auto toks = split_ws(spec);
    if (toks.empty()) throw ConfigError(where + ": empty");
    if (toks[0] == "zeta") {
        if (toks.size() != 2) throw ConfigError(where + ": zeta needs beta");
        return OffspringLaw::zeta_tail(to_double(toks[1], where));
    }
    bool declared_zeta = false;
    std::size_t first = 0;
    if (toks[0] == "finite") {
        first = 1;
    } else if (toks[0] == "finite_zeta_declared") {
        first = 1;
        declared_zeta = true;
    }
    std::vector<std::pair<std::uint64_t, double>> support;
    for (std::size_t i = first; i < toks.size(); ++i) {
        auto [k, p] = split_colon(toks[i], where);
        if (k < 0.0 || k != static_cast<double>(static_cast<std::uint64_t>(k)))
            throw ConfigError(where + ": offspring count must be a nonnegative integer");
        support.emplace_back(static_cast<std::uint64_t>(k), p);
    }
    if (support.empty()) throw ConfigError(where + ": no support points");
    return OffspringLaw::finite(std::move(support), declared_zeta);
}

StepLaw step_from_spec(const std::string& spec) {
    const std::string where = "model.step";
    auto toks = split_ws(spec);
    if (toks.empty()) throw ConfigError(where + ": empty");
    const std::string& kind = toks[0];
    auto need = [&](std::size_t n) {
        if (toks.size() != n + 1)
            throw ConfigError(where + ": '" + kind + "' takes " +
                              std::to_string(n) + " parameter(s)");
    };
    if (kind == "normal") {
        need(1);
        return StepLaw::normal(to_double(toks[1], where));
    }
    if (kind == "rademacher") {
        need(0);
        return StepLaw::rademacher();
    }
    if (kind == "two_point") {
        need(3);
        return StepLaw::two_point(to_double(toks[1], where),
                                  to_double(toks[2], where),
                                  to_double(toks[3], where));
    }
    if (kind == "uniform") {
        need(1);
        return StepLaw::uniform(to_double(toks[1], where));
    }
    if (kind == "tilted_poly") {
        need(0);
        return StepLaw::tilted_polynomial_density();
    }
    if (kind == "lattice") {
        std::vector<std::pair<double, double>> atoms;
        for (std::size_t i = 1; i < toks.size(); ++i)
            atoms.push_back(split_colon(toks[i], where));
        if (atoms.empty()) throw ConfigError(where + ": lattice needs atoms");
        return StepLaw::lattice(std::move(atoms));
    }
    throw ConfigError(where + ": unknown step kind '" + kind + "'");
}

} // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

RunConfig RunConfig::parse_string(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": empty section name");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) +
                              ": key outside any [section]");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string RunConfig::get_string(const std::string& section,
                                  const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end() || s->second.count(key) == 0)
        throw ConfigError("missing field " + section + "." + key);
    return s->second.at(key);
}

double RunConfig::get_double(const std::string& section,
                             const std::string& key) const {
    return to_double(get_string(section, key), section + "." + key);
}

std::int64_t RunConfig::get_int(const std::string& section,
                                const std::string& key) const {
    double d = get_double(section, key);
    auto i = static_cast<std::int64_t>(d);
    if (static_cast<double>(i) != d)
        throw ConfigError(section + "." + key + ": not an integer");
    return i;
}

std::uint64_t RunConfig::get_u64(const std::string& section,
                                 const std::string& key) const {
    std::string v = get_string(section, key);
    char* end = nullptr;
    std::uint64_t u = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(section + "." + key + ": not an unsigned integer: '" +
                          v + "'");
    return u;
}

std::optional<std::string> RunConfig::maybe_string(const std::string& section,
                                                   const std::string& key) const {
    if (!has(section, key)) return std::nullopt;
    return get_string(section, key);
}

std::optional<double> RunConfig::maybe_double(const std::string& section,
                                              const std::string& key) const {
    if (!has(section, key)) return std::nullopt;
    return get_double(section, key);
}

std::optional<std::uint64_t> RunConfig::maybe_u64(const std::string& section,
                                                  const std::string& key) const {
    if (!has(section, key)) return std::nullopt;
    return get_u64(section, key);
}

void RunConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
    sections_[section][key] = value;
}

std::string RunConfig::render() const {
    std::ostringstream out;
    for (const auto& [section, kv] : sections_) {
        out << '[' << section << "]\n";
        for (const auto& [key, value] : kv)
            out << key << " = " << value << '\n';
        out << '\n';
    }
    return out.str();
}

CheckedModel model_from_config(const RunConfig& config) {
    OffspringLaw offspring =
        offspring_from_spec(config.get_string("model", "offspring"));
    StepLaw step = step_from_spec(config.get_string("model", "step"));
    return validate_model(std::move(offspring), std::move(step));
}

} // namespace brw
