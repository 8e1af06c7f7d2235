#ifndef QTELEPORT_IO_HPP
#define QTELEPORT_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "qteleport/protocol.hpp"

namespace qteleport {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat key-value configuration with INI-style sections; keys are
/// "section.key". Unknown keys are rejected so typos fail loudly.
class Config {
public:
    Config();  // defaults

    void load_file(const std::string& path);
    void set(const std::string& dotted_key, const std::string& value);

    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

    ProtocolConfig to_protocol_config() const;

private:
    std::map<std::string, std::string> values_;
};

struct CsvColumn {
    std::string name;
    std::vector<double> values;
};

/// Floats at 12 significant digits, '#'-prefixed header comments.
void write_csv(const std::string& path, const std::vector<std::string>& comments,
               const std::vector<CsvColumn>& columns);
std::string format_double(double v);

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal self-contained SVG line chart.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<SvgSeries>& series);

struct RunManifest {
    std::map<std::string, std::string> config_snapshot;
    std::string version;
    std::uint64_t seed = 0;
    double wall_clock_seconds = 0.0;
    std::vector<std::string> outputs;

    void write(const std::string& path) const;
};

extern const char* kVersionString;

}  // namespace qteleport

#endif
