#ifndef MLGRF_CONFIG_HPP
#define MLGRF_CONFIG_HPP

#include <map>
#include <optional>
#include <set>
#include <string>

#include "mlgrf/common.hpp"

namespace mlgrf
{

/**
   Line-oriented configuration: `[section]` headers and `key = value`
   entries, `#` comments. Keys are addressed as "section.key". Values may
   be scalars or space-separated lists. Lookups record which keys were
   touched so a command can reject entries it does not understand.
*/
class Config
{
public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text, const std::string& origin = "<memory>");

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<long long> get_ints(const std::string& key) const;

    /// Inject or override a value (CLI flags resolve on top of the file).
    void set(const std::string& key, const std::string& value);

    /// Fails if the file contains keys that were never read or overridden.
    void reject_unknown_keys() const;

    /// Canonical `key = value` listing of every entry, for output headers.
    std::vector<std::string> resolved_lines() const;

private:
    double parse_double(const std::string& key, const std::string& raw) const;
    long long parse_int(const std::string& key, const std::string& raw) const;

    std::string origin_;
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> touched_;
};

} // namespace mlgrf

#endif
