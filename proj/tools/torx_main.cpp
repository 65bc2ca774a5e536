#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "torx/observables.hpp"
#include "torx/sweep.hpp"

namespace {

int run_table(const std::string& table, const std::string& config_path,
              const std::string& out_dir, int workers) {
    torx::SweepSpec spec = torx::parse_config(config_path);
    spec.outputs = {table};
    spec.validate();
    const torx::RunManifest manifest = torx::run_sweep(spec, out_dir, workers);
    for (const auto& t : manifest.tables)
        std::cout << t.name << ": " << t.rows << " rows\n";
    for (const auto& f : manifest.failures) std::cerr << "failed " << f << "\n";
    return static_cast<int>(manifest.status);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

/// plateau report for every (E, B, t_hop) curve of an angle scan
std::string analyze_angle_scan(const std::string& path, double tolerance, int min_steps) {
    const auto rows = torx::read_table(path);
    std::map<std::tuple<double, double, double>, std::vector<const torx::SweepRow*>> curves;
    for (const auto& r : rows) curves[{r.e, r.b, r.t_hop}].push_back(&r);

    std::ostringstream out;
    for (auto& [key, curve] : curves) {
        std::sort(curve.begin(), curve.end(),
                  [](const torx::SweepRow* a, const torx::SweepRow* b) { return a->alpha < b->alpha; });
        std::vector<double> alpha, t;
        for (const auto* r : curve) {
            alpha.push_back(r->alpha);
            t.push_back(r->t);
        }
        out << "curve E=" << fmt(std::get<0>(key)) << " B=" << fmt(std::get<1>(key))
            << " t_hop=" << fmt(std::get<2>(key)) << "\n";
        try {
            const auto report = torx::detect_plateaus(alpha, t, tolerance, min_steps);
            for (const auto& p : report.plateaus)
                out << "  plateau " << fmt(p.alpha_start) << " .. " << fmt(p.alpha_end)
                    << " deg, mean_T = " << fmt(p.mean_t) << "\n";
            for (double s : report.center_spacings)
                out << "  center_spacing_deg = " << fmt(s) << "\n";
            if (report.plateaus.empty()) out << "  no plateaus\n";
        } catch (const std::exception& ex) {
            out << "  error: " << ex.what() << "\n";
        }
    }
    return out.str();
}

/// dominant oscillation periods of every I(B) curve of a flux scan
std::string analyze_flux_scan(const std::string& path, double b_per_phi0,
                              double major_radius) {
    const auto rows = torx::read_table(path);
    std::map<std::tuple<double, double, double>, std::vector<const torx::SweepRow*>> curves;
    for (const auto& r : rows) curves[{r.alpha, r.t_hop, r.v_sd}].push_back(&r);

    const double b_geom = torx::b_per_phi0_geometric(major_radius);
    std::ostringstream out;
    out << "flux axis: label convention " << fmt(b_per_phi0)
        << " T per phi0; geometric (pi R^2) " << fmt(b_geom) << " T per phi0\n";
    for (auto& [key, curve] : curves) {
        std::sort(curve.begin(), curve.end(),
                  [](const torx::SweepRow* a, const torx::SweepRow* b) { return a->b < b->b; });
        std::vector<double> b, i;
        for (const auto* r : curve) {
            b.push_back(r->b);
            i.push_back(r->i_over_e_h);
        }
        out << "curve alpha=" << fmt(std::get<0>(key)) << " t_hop=" << fmt(std::get<1>(key))
            << " V_sd=" << fmt(std::get<2>(key)) << "\n";
        try {
            const auto peaks = torx::extract_flux_period(b, i);
            const std::size_t top = std::min<std::size_t>(3, peaks.size());
            for (std::size_t k = 0; k < top; ++k)
                out << "  period_T = " << fmt(peaks[k].period)
                    << " (label " << fmt(peaks[k].period / b_per_phi0)
                    << " phi0, geometric " << fmt(peaks[k].period / b_geom)
                    << " phi0), weight = " << fmt(peaks[k].weight) << "\n";
        } catch (const std::exception& ex) {
            out << "  error: " << ex.what() << "\n";
        }
    }
    return out.str();
}

int run_analyze(const std::string& config_path, const std::string& out_dir) {
    torx::SweepSpec spec = torx::parse_config(config_path);
    namespace fs = std::filesystem;
    bool any = false;
    if (fs::exists(out_dir + "/angle_scan.csv")) {
        const std::string report = analyze_angle_scan(
            out_dir + "/angle_scan.csv", spec.plateau_tolerance, spec.plateau_min_steps);
        std::ofstream(out_dir + "/plateaus.txt") << report;
        std::cout << report;
        any = true;
    }
    if (fs::exists(out_dir + "/flux_scan.csv")) {
        const std::string report = analyze_flux_scan(
            out_dir + "/flux_scan.csv", spec.flux.b_per_phi0, spec.geometry.major_radius);
        std::ofstream(out_dir + "/flux_period.txt") << report;
        std::cout << report;
        any = true;
    }
    if (!any) {
        std::cerr << "analyze: no angle_scan.csv or flux_scan.csv under " << out_dir << "\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum transport through a toroidal carbon nanotube with metallic leads"};
    app.require_subcommand(1);
    app.fallthrough();  // accept --config etc. after the subcommand

    std::string config_path, out_dir = "out";
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    bool seedless = false;
    app.add_option("--config", config_path, "flat key = value sweep configuration")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--workers", workers, "worker threads");
    app.add_flag("--seedless", seedless, "assert that no RNG is used anywhere (it is not)");

    const std::vector<std::pair<std::string, std::string>> tables = {
        {"dos", "density of states over the energy grid"},
        {"transmission", "transmission function over the energy grid"},
        {"current", "integrated source-drain current per bias"},
        {"angle-scan", "transmission versus lead opening angle"},
        {"flux-scan", "current versus magnetic field"},
    };
    for (const auto& [name, desc] : tables) app.add_subcommand(name, desc);
    app.add_subcommand("analyze", "plateau and flux-period reports from existing tables");

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        if (sub == "analyze") return run_analyze(config_path, out_dir);
        std::string table = sub;
        std::replace(table.begin(), table.end(), '-', '_');
        return run_table(table, config_path, out_dir, workers);
    } catch (const torx::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 4;
    }
}
