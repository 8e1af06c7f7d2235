#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qteleport/io.hpp"
#include "qteleport/protocol.hpp"

namespace fs = std::filesystem;
using namespace qteleport;

namespace {

struct CommonOpts {
    std::string config_file;
    std::vector<std::string> sets;
    std::string out_dir = ".";
    int jobs = 1;
    std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_file, "Config file (INI-style)");
    cmd->add_option("--set", opts.sets, "Override a config key, section.key=value");
    cmd->add_option("--seed", opts.seed, "RNG seed (overrides run.seed)");
    cmd->add_option("--jobs", opts.jobs, "Worker count for sweeps");
    cmd->add_option("--out", opts.out_dir, "Output directory");
}

Config build_config(const CommonOpts& opts) {
    Config cfg;
    if (!opts.config_file.empty()) cfg.load_file(opts.config_file);
    for (const auto& s : opts.sets) {
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects section.key=value, got '" + s + "'");
        cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (opts.seed >= 0) cfg.set("run.seed", std::to_string(opts.seed));
    return cfg;
}

RunManifest make_manifest(const Config& cfg) {
    RunManifest m;
    m.config_snapshot = cfg.entries();
    m.version = kVersionString;
    m.seed = static_cast<std::uint64_t>(cfg.get_double("run.seed"));
    return m;
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
    fs::create_directories(opts.out_dir);
    return (fs::path(opts.out_dir) / name).string();
}

std::vector<double> time_axis(const TimeGrid& grid) {
    std::vector<double> t(grid.n_samples());
    for (int i = 0; i < grid.n_samples(); ++i) t[i] = grid.t(i);
    return t;
}

int cmd_pulses(const CommonOpts& opts) {
    auto t_start = std::chrono::steady_clock::now();
    Config cfg = build_config(opts);
    ProtocolConfig pc = cfg.to_protocol_config();

    DrivePulse pulse1 = gaussian_pulse(pc.grid, pc.pulse_peak, pc.pulse_width,
                                       pc.effective_amplitude());
    DrivePulse pulse2 = scale_pulse(pulse1, pc.effective_ratio());
    PhotonMode f_a0 = normalize_mode(
        photon_pulse_shape(mixing_angle_alice(pulse1, pc.alice.cg, 0), pc.alice.kappa));
    PhotonMode f_a1 = normalize_mode(
        photon_pulse_shape(mixing_angle_alice(pulse1, pc.alice.cg, 1), pc.alice.kappa));
    PhotonMode f_b = normalize_mode(
        photon_pulse_shape(mixing_angle_bob(pulse2, pc.bob.cg), pc.bob.kappa));
    double one_minus_delta = overlap(f_a0, f_a1);

    RunManifest manifest = make_manifest(cfg);
    std::vector<double> t = time_axis(pc.grid);
    struct Curve {
        const char* file;
        const char* quantity;
        const PhotonMode* mode;
    };
    for (const Curve& c : {Curve{"pulse_fA0.csv", "f_A0(t)", &f_a0},
                           Curve{"pulse_fA1.csv", "f_A1(t)", &f_a1},
                           Curve{"pulse_fB.csv", "f_B(t)", &f_b}}) {
        std::string path = out_path(opts, c.file);
        write_csv(path,
                  {std::string("normalized photon pulse shape ") + c.quantity,
                   "t in units of 1/kappa, f in units of sqrt(kappa)"},
                  {{"t", t}, {c.quantity, c.mode->samples}});
        manifest.outputs.push_back(path);
    }
    std::string svg = out_path(opts, "pulses.svg");
    write_svg_chart(svg, "Photon pulse shapes",
                    {{"f_A0", t, f_a0.samples},
                     {"f_A1", t, f_a1.samples},
                     {"f_B", t, f_b.samples}});
    manifest.outputs.push_back(svg);

    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    manifest.write(out_path(opts, "pulses_manifest.txt"));

    std::cout << "one_minus_delta = " << format_double(one_minus_delta) << "\n";
    return 0;
}

void print_report(const ProtocolReport& r, std::ostream& os) {
    os << "outcome_dominant = " << bsm::to_string(r.dominant_outcome) << "\n"
       << "p_plus = " << format_double(r.p_plus) << "\n"
       << "p_minus = " << format_double(r.p_minus) << "\n"
       << "p_success = " << format_double(r.p_success) << "\n"
       << "p_failure = " << format_double(r.p_failure) << "\n"
       << "fidelity = " << format_double(r.fidelity) << "\n"
       << "formula_prediction = " << format_double(r.eq_formula_prediction) << "\n"
       << "delta = " << format_double(r.delta) << "\n"
       << "overlap_A0_B = " << format_double(r.overlap_A0_B) << "\n"
       << "overlap_A1_B = " << format_double(r.overlap_A1_B) << "\n"
       << "emit_prob_A0 = " << format_double(r.emit_prob_A0) << "\n"
       << "emit_prob_A1 = " << format_double(r.emit_prob_A1) << "\n"
       << "emit_prob_B = " << format_double(r.emit_prob_B) << "\n"
       << "adiabaticity_alice = " << format_double(r.adiabaticity_alice) << "\n"
       << "adiabaticity_bob = " << format_double(r.adiabaticity_bob) << "\n";
    os << "conditional_state = ";
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            os << format_double(r.conditional_state(i, j).real()) << "+"
               << format_double(r.conditional_state(i, j).imag()) << "i"
               << (i == 1 && j == 1 ? "\n" : " ");
    if (r.trajectory) {
        const auto& s = *r.trajectory;
        os << "traj_shots = " << s.n_shots << "\n"
           << "traj_both_emitted = " << s.n_both_emitted << "\n"
           << "traj_success = " << s.n_success << "\n"
           << "traj_plus = " << s.n_plus << "\n"
           << "traj_minus = " << s.n_minus << "\n"
           << "traj_spontaneous = " << s.n_spontaneous << "\n"
           << "traj_empirical_success = " << format_double(s.empirical_success) << "\n"
           << "traj_success_error = " << format_double(s.success_error) << "\n"
           << "traj_mean_fidelity = " << format_double(s.mean_fidelity) << "\n";
    }
}

int cmd_teleport(const CommonOpts& opts) {
    auto t_start = std::chrono::steady_clock::now();
    Config cfg = build_config(opts);
    ProtocolConfig pc = cfg.to_protocol_config();
    ProtocolReport report = run_teleportation(pc);

    print_report(report, std::cout);
    std::string path = out_path(opts, "teleport_report.txt");
    {
        std::ofstream out(path, std::ios::binary);
        print_report(report, out);
    }
    RunManifest manifest = make_manifest(cfg);
    manifest.outputs.push_back(path);
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    manifest.write(out_path(opts, "teleport_manifest.txt"));
    return report.dominant_outcome == bsm::OutcomeClass::Failure ? 1 : 0;
}

struct SweepOpts {
    std::string param;
    std::string values;
    std::string range;  // lo:hi:n
};

int cmd_sweep(const CommonOpts& opts, const SweepOpts& sweep) {
    auto t_start = std::chrono::steady_clock::now();
    Config base = build_config(opts);

    std::vector<double> values;
    if (!sweep.values.empty()) {
        std::stringstream ss(sweep.values);
        std::string tok;
        while (std::getline(ss, tok, ',')) values.push_back(std::stod(tok));
    } else if (!sweep.range.empty()) {
        double lo, hi;
        int n;
        if (std::sscanf(sweep.range.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 1)
            throw ConfigError("--range expects lo:hi:n");
        for (int i = 0; i < n; ++i)
            values.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    }
    if (values.empty()) throw ConfigError("sweep: no parameter values given");
    base.get(sweep.param);  // validates the parameter path early
    std::sort(values.begin(), values.end());

    auto run_point = [&](double v) {
        Config cfg = base;
        cfg.set(sweep.param, format_double(v));
        return run_teleportation(cfg.to_protocol_config());
    };

    std::vector<ProtocolReport> reports(values.size());
    int jobs = std::max(1, opts.jobs);
    for (size_t begin = 0; begin < values.size(); begin += jobs) {
        size_t end = std::min(values.size(), begin + jobs);
        std::vector<std::future<ProtocolReport>> futs;
        for (size_t i = begin; i < end; ++i)
            futs.push_back(std::async(std::launch::async, run_point, values[i]));
        for (size_t i = begin; i < end; ++i)
            reports[i] = futs[i - begin].get();
    }

    CsvColumn c_val{sweep.param, {}}, c_fid{"fidelity", {}},
        c_suc{"p_success", {}}, c_delta{"delta", {}}, c_adA{"adiabaticity_alice", {}},
        c_adB{"adiabaticity_bob", {}};
    for (size_t i = 0; i < values.size(); ++i) {
        c_val.values.push_back(values[i]);
        c_fid.values.push_back(reports[i].fidelity);
        c_suc.values.push_back(reports[i].p_success);
        c_delta.values.push_back(reports[i].delta);
        c_adA.values.push_back(reports[i].adiabaticity_alice);
        c_adB.values.push_back(reports[i].adiabaticity_bob);
    }
    std::string path = out_path(opts, "sweep.csv");
    write_csv(path,
              {"parameter sweep over " + sweep.param,
               "columns: parameter value, success-conditioned fidelity, "
               "success probability, mode mismatch delta, adiabaticity per side"},
              {c_val, c_fid, c_suc, c_delta, c_adA, c_adB});

    RunManifest manifest = make_manifest(base);
    manifest.outputs.push_back(path);
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    manifest.write(out_path(opts, "sweep_manifest.txt"));
    std::cout << "wrote " << path << " (" << values.size() << " points)\n";
    return 0;
}

int cmd_audit(const CommonOpts& opts) {
    auto t_start = std::chrono::steady_clock::now();
    Config cfg = build_config(opts);

    std::vector<double> overlaps;
    for (int i = 1; i <= 10; ++i) overlaps.push_back(0.1 * i);
    auto rows = paper_formula_audit(bloch_grid8(), overlaps);

    CsvColumn a_re{"a_re", {}}, a_im{"a_im", {}}, b_re{"b_re", {}}, b_im{"b_im", {}},
        ov{"overlap", {}}, oracle{"oracle_fidelity", {}},
        formula{"formula_fidelity", {}}, omd{"one_minus_delta", {}},
        dev{"deviation", {}};
    double max_dev = 0.0;
    for (const auto& r : rows) {
        a_re.values.push_back(r.a.real());
        a_im.values.push_back(r.a.imag());
        b_re.values.push_back(r.b.real());
        b_im.values.push_back(r.b.imag());
        ov.values.push_back(r.mode_overlap);
        oracle.values.push_back(r.oracle_fidelity);
        formula.values.push_back(r.formula_fidelity);
        omd.values.push_back(r.one_minus_delta);
        dev.values.push_back(r.deviation);
        max_dev = std::max(max_dev, std::abs(r.deviation));
    }
    std::string path = out_path(opts, "audit.csv");
    write_csv(path,
              {"closed-form fidelity vs brute-force two-photon oracle",
               "8-point Bloch grid x 10 overlap values"},
              {a_re, a_im, b_re, b_im, ov, oracle, formula, omd, dev});

    RunManifest manifest = make_manifest(cfg);
    manifest.outputs.push_back(path);
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    manifest.write(out_path(opts, "audit_manifest.txt"));
    std::cout << "max_abs_deviation = " << format_double(max_dev) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cavity-decay teleportation simulator"};
    app.require_subcommand(1);

    CommonOpts pulses_opts, teleport_opts, sweep_common, audit_opts;
    SweepOpts sweep_opts;

    CLI::App* pulses = app.add_subcommand("pulses", "Photon pulse shapes and 1-delta");
    add_common(pulses, pulses_opts);
    CLI::App* teleport = app.add_subcommand("teleport", "Run the teleportation protocol");
    add_common(teleport, teleport_opts);
    CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep");
    add_common(sweep, sweep_common);
    sweep->add_option("--param", sweep_opts.param, "Config key to sweep")->required();
    sweep->add_option("--values", sweep_opts.values, "Comma-separated values");
    sweep->add_option("--range", sweep_opts.range, "lo:hi:n linear range");
    CLI::App* audit = app.add_subcommand("audit", "Formula-vs-oracle fidelity table");
    add_common(audit, audit_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (pulses->parsed()) return cmd_pulses(pulses_opts);
        if (teleport->parsed()) return cmd_teleport(teleport_opts);
        if (sweep->parsed()) return cmd_sweep(sweep_common, sweep_opts);
        if (audit->parsed()) return cmd_audit(audit_opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
