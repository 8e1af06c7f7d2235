#include "qteleport/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qteleport {

const char* kVersionString = "qteleport 0.1.0";

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config::Config() {
    values_ = {
        {"input.a_re", "0.70710678118654752"},
        {"input.a_im", "0"},
        {"input.b_re", "0.70710678118654752"},
        {"input.b_im", "0"},
        {"pulse.T", "40"},
        {"pulse.n_steps", "4000"},
        {"pulse.peak", "20"},
        {"pulse.width", "5.65685424949238"},  // sqrt(2)*T/10
        {"pulse.amplitude", "0"},             // 0 -> C_g1/C_Omega0
        {"pulse.ratio", "0"},                 // 0 -> matched sqrt(2/3) value
        {"pulse.delay", "0"},
        {"system.kappa", "1"},
        {"system.gamma", "0"},
        {"system.s_A", "1"},
        {"system.s_B", "1"},
        {"cg.C_Omega0", "0.57735026918962576"},  // sqrt(1/3)
        {"cg.C_Omega1", "0.70710678118654752"},  // sqrt(1/2)
        {"cg.C_Omega2", "1.2247448713915890"},   // sqrt(3/2), matched ratio
        {"cg.C_g1", "1"},
        {"cg.C_g2", "1"},
        {"detection.efficiency", "1"},
        {"detection.transmission_A", "1"},
        {"detection.transmission_B", "1"},
        {"detection.number_resolving", "false"},
        {"run.mode", "analytic"},
        {"run.n_trajectories", "10000"},
        {"run.seed", "1"},
        {"run.force_overlap_one", "false"},
        {"run.compute_adiabaticity", "true"},
    };
}

void Config::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[' && s.back() == ']') {
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        set(key, value);
    }
}

void Config::set(const std::string& dotted_key, const std::string& value) {
    auto it = values_.find(dotted_key);
    if (it == values_.end())
        throw ConfigError("unknown config key: " + dotted_key);
    it->second = value;
}

const std::string& Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key: " + key);
    return it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string& s = get(key);
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not a number: '" + s + "'");
    }
}

int Config::get_int(const std::string& key) const {
    double v = get_double(key);
    int i = static_cast<int>(v);
    if (i != v) throw ConfigError("config key " + key + ": not an integer");
    return i;
}

bool Config::get_bool(const std::string& key) const {
    const std::string& s = get(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("config key " + key + ": not a boolean: '" + s + "'");
}

ProtocolConfig Config::to_protocol_config() const {
    ProtocolConfig pc;
    pc.a = Complex(get_double("input.a_re"), get_double("input.a_im"));
    pc.b = Complex(get_double("input.b_re"), get_double("input.b_im"));

    CgTable cg;
    cg.C_Omega0 = get_double("cg.C_Omega0");
    cg.C_Omega1 = get_double("cg.C_Omega1");
    cg.C_Omega2 = get_double("cg.C_Omega2");
    cg.C_g1 = get_double("cg.C_g1");
    cg.C_g2 = get_double("cg.C_g2");

    pc.alice.cg = cg;
    pc.alice.kappa = get_double("system.kappa");
    pc.alice.gamma = get_double("system.gamma");
    pc.alice.spatial_mode_value = get_double("system.s_A");
    pc.bob = pc.alice;
    pc.bob.spatial_mode_value = get_double("system.s_B");

    pc.grid = TimeGrid(get_double("pulse.T"), get_int("pulse.n_steps"));
    pc.pulse_peak = get_double("pulse.peak");
    pc.pulse_width = get_double("pulse.width");
    pc.pulse_amplitude = get_double("pulse.amplitude");
    pc.pulse_ratio = get_double("pulse.ratio");
    pc.pulse_delay = get_double("pulse.delay");

    pc.detection.set_uniform_efficiency(get_double("detection.efficiency"));
    pc.detection.arm_transmission = {get_double("detection.transmission_A"),
                                     get_double("detection.transmission_B")};
    pc.detection.number_resolving = get_bool("detection.number_resolving");

    const std::string& mode = get("run.mode");
    if (mode == "analytic")
        pc.mode = ProtocolMode::Analytic;
    else if (mode == "trajectory")
        pc.mode = ProtocolMode::Trajectory;
    else
        throw ConfigError("run.mode must be 'analytic' or 'trajectory'");
    pc.n_trajectories = get_int("run.n_trajectories");
    pc.seed = static_cast<std::uint64_t>(get_double("run.seed"));
    pc.force_overlap_one = get_bool("run.force_overlap_one");
    pc.compute_adiabaticity = get_bool("run.compute_adiabaticity");
    return pc;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& comments,
               const std::vector<CsvColumn>& columns) {
    if (columns.empty()) throw std::invalid_argument("write_csv: no columns");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    for (const auto& c : comments) out << "# " << c << "\n";
    for (size_t i = 0; i < columns.size(); ++i)
        out << columns[i].name << (i + 1 < columns.size() ? "," : "\n");
    size_t rows = columns[0].values.size();
    for (const auto& c : columns)
        if (c.values.size() != rows)
            throw std::invalid_argument("write_csv: ragged columns");
    for (size_t r = 0; r < rows; ++r)
        for (size_t i = 0; i < columns.size(); ++i)
            out << format_double(columns[i].values[r])
                << (i + 1 < columns.size() ? "," : "\n");
}

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<SvgSeries>& series) {
    const int W = 720, H = 480, ML = 60, MR = 20, MT = 40, MB = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_svg_chart: cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n"
        << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR
        << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML
        << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        double xv = xmin + k * (xmax - xmin) / 4;
        double yv = ymin + k * (ymax - ymin) / 4;
        out << "<text x=\"" << px(xv) << "\" y=\"" << H - MB + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << format_double(xv) << "</text>\n"
            << "<text x=\"" << ML - 6 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << format_double(yv) << "</text>\n";
    }
    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        out << "<polyline fill=\"none\" stroke=\"" << colors[si % 4]
            << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < s.x.size(); ++i)
            out << px(s.x[i]) << "," << py(s.y[i]) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << W - MR - 10 << "\" y=\"" << MT + 18 * (si + 1)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
            << "fill=\"" << colors[si % 4] << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("RunManifest: cannot open " + path);
    out << "version = " << version << "\n";
    out << "seed = " << seed << "\n";
    out << "wall_clock_seconds = " << format_double(wall_clock_seconds) << "\n";
    for (const auto& o : outputs) out << "output = " << o << "\n";
    out << "[config]\n";
    for (const auto& [k, v] : config_snapshot) out << k << " = " << v << "\n";
}

}  // namespace qteleport
