#include "mlgrf/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace mlgrf
{

namespace
{

std::string trim(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

} // namespace

Config Config::parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_text(text.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& origin)
{
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (line.front() == '[')
        {
            if (line.back() != ']')
                throw ConfigError(where + ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(where + ": empty section name");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(where + ": empty key");
        if (!section.empty())
            key = section + "." + key;
        if (cfg.values_.count(key))
            throw ConfigError(where + ": duplicate key '" + key + "'");
        cfg.values_[key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& key) const
{
    if (values_.count(key))
    {
        touched_.insert(key);
        return true;
    }
    return false;
}

std::string Config::get_string(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError(origin_ + ": missing required key '" + key + "'");
    touched_.insert(key);
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const
{
    return has(key) ? get_string(key) : fallback;
}

double Config::parse_double(const std::string& key, const std::string& raw) const
{
    try
    {
        std::size_t pos = 0;
        const double v = std::stod(raw, &pos);
        if (pos != raw.size())
            throw std::invalid_argument("trailing characters");
        return v;
    }
    catch (const std::exception&)
    {
        throw ConfigError(origin_ + ": key '" + key + "' is not a number: '" + raw + "'");
    }
}

long long Config::parse_int(const std::string& key, const std::string& raw) const
{
    try
    {
        std::size_t pos = 0;
        const long long v = std::stoll(raw, &pos);
        if (pos != raw.size())
            throw std::invalid_argument("trailing characters");
        return v;
    }
    catch (const std::exception&)
    {
        throw ConfigError(origin_ + ": key '" + key + "' is not an integer: '" + raw + "'");
    }
}

double Config::get_double(const std::string& key) const
{
    return parse_double(key, get_string(key));
}

double Config::get_double(const std::string& key, double fallback) const
{
    return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const
{
    return parse_int(key, get_string(key));
}

long long Config::get_int(const std::string& key, long long fallback) const
{
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const
{
    if (!has(key))
        return fallback;
    const std::string raw = get_string(key);
    try
    {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(raw, &pos);
        if (pos != raw.size())
            throw std::invalid_argument("trailing characters");
        return v;
    }
    catch (const std::exception&)
    {
        throw ConfigError(origin_ + ": key '" + key + "' is not an unsigned integer: '" + raw + "'");
    }
}

bool Config::get_bool(const std::string& key, bool fallback) const
{
    if (!has(key))
        return fallback;
    const std::string raw = get_string(key);
    if (raw == "true" || raw == "1" || raw == "yes" || raw == "on")
        return true;
    if (raw == "false" || raw == "0" || raw == "no" || raw == "off")
        return false;
    throw ConfigError(origin_ + ": key '" + key + "' is not a boolean: '" + raw + "'");
}

std::vector<double> Config::get_doubles(const std::string& key) const
{
    std::istringstream in(get_string(key));
    std::vector<double> out;
    std::string tok;
    while (in >> tok)
        out.push_back(parse_double(key, tok));
    if (out.empty())
        throw ConfigError(origin_ + ": key '" + key + "' has no values");
    return out;
}

std::vector<long long> Config::get_ints(const std::string& key) const
{
    std::istringstream in(get_string(key));
    std::vector<long long> out;
    std::string tok;
    while (in >> tok)
        out.push_back(parse_int(key, tok));
    if (out.empty())
        throw ConfigError(origin_ + ": key '" + key + "' has no values");
    return out;
}

void Config::set(const std::string& key, const std::string& value)
{
    values_[key] = value;
    touched_.insert(key);
}

void Config::reject_unknown_keys() const
{
    for (const auto& [key, value] : values_)
        if (!touched_.count(key))
            throw ConfigError(origin_ + ": unknown key '" + key + "'");
}

std::vector<std::string> Config::resolved_lines() const
{
    std::vector<std::string> out;
    out.reserve(values_.size());
    for (const auto& [key, value] : values_)
        out.push_back(key + " = " + value);
    return out;
}

} // namespace mlgrf
