#include "torx/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "torx/constants.hpp"
#include "torx/greens.hpp"

namespace torx {

namespace {

const char* kCsvHeader = "E_eV,B_T,alpha_deg,t_hop_eV,V_sd_eV,T,D_total,I_over_e_h\n";

const std::vector<std::string> kKnownOutputs = {
    "dos", "transmission", "current", "flux_scan", "angle_scan"};

bool is_spectral(const std::string& table) {
    return table == "dos" || table == "transmission" || table == "angle_scan";
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (trim(v.substr(used)).empty() && std::isfinite(x)) return x;
    } catch (...) {
    }
    throw ConfigError("bad numeric value for '" + key + "': " + v);
}

int parse_int(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    if (x != std::floor(x)) throw ConfigError("'" + key + "' must be an integer");
    return static_cast<int>(x);
}

/// comma list of numbers, or linspace(a, b, n)
std::vector<double> parse_list(const std::string& key, const std::string& v) {
    const std::string body = trim(v);
    if (body.rfind("linspace(", 0) == 0 && body.back() == ')') {
        const std::string args = body.substr(9, body.size() - 10);
        std::vector<std::string> parts;
        std::stringstream ss(args);
        std::string item;
        while (std::getline(ss, item, ',')) parts.push_back(trim(item));
        if (parts.size() != 3) throw ConfigError("linspace needs (start, stop, count) in '" + key + "'");
        const double a = parse_double(key, parts[0]);
        const double b = parse_double(key, parts[1]);
        const int n = parse_int(key, parts[2]);
        if (n < 1) throw ConfigError("linspace count must be >= 1 in '" + key + "'");
        std::vector<double> out;
        out.reserve(n);
        for (int i = 0; i < n; ++i)
            out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        return out;
    }
    std::vector<double> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw ConfigError("empty list for '" + key + "'");
    return out;
}

std::vector<std::string> parse_names(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string name = trim(item);
        if (!name.empty()) out.push_back(name);
    }
    return out;
}

void refresh_lead_grid(SweepSpec& spec) {
    const auto grid = default_lead(spec.geometry).contact_yz;
    // default grid is built for a 10 x 10 cross-section; recenter for the
    // configured one while keeping the torus-derived spacings
    LeadParams ref;
    for (int k = 0; k < 4; ++k) {
        spec.lead.contact_yz[k][0] = grid[k][0] - 0.5 * ref.ly + 0.5 * spec.lead.ly;
        spec.lead.contact_yz[k][1] = grid[k][1] - 0.5 * ref.lz + 0.5 * spec.lead.lz;
    }
}

std::string format_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string format_row(const SweepRow& r) {
    std::string line;
    const double vals[8] = {r.e, r.b, r.alpha, r.t_hop, r.v_sd, r.t, r.d_total, r.i_over_e_h};
    for (int i = 0; i < 8; ++i) {
        if (i) line += ',';
        line += format_g(vals[i]);
    }
    line += '\n';
    return line;
}

struct Tuple {
    double b = 0.0;
    double alpha = 0.0;  // realized
    double t_hop = 0.0;
    LeadPlacement leads;
};

/// results of one tuple's energy grid
struct TupleData {
    std::vector<double> t;
    std::vector<double> d;
    std::atomic<bool> failed{false};
};

struct Job {
    int tuple = 0;
    int e_begin = 0;
    int e_end = 0;
};

class Engine {
public:
    Engine(const SweepSpec& spec, double eta)
        : spec_(spec), eta_(eta), sites_(build_torus(spec.geometry)),
          bonds_(find_bonds(sites_, spec.geometry)) {}

    std::vector<Tuple> make_tuples() const {
        std::vector<Tuple> tuples;
        for (double b : spec_.b_list)
            for (double alpha : spec_.alpha_list)
                for (double t_hop : spec_.t_hop_list) {
                    Tuple t;
                    t.b = b;
                    t.t_hop = t_hop;
                    t.leads = place_leads(sites_, spec_.geometry, alpha);
                    t.alpha = t.leads.alpha_realized;
                    tuples.push_back(t);
                }
        return tuples;
    }

    /// compute T(E) and D(E) for every tuple over the grid, in parallel
    void run(const std::vector<Tuple>& tuples, std::vector<TupleData>& data,
             int workers, std::vector<std::string>& failures) const {
        const int n_e = spec_.grid.n_points();
        constexpr int kChunk = 64;
        std::vector<Job> jobs;
        for (std::size_t t = 0; t < tuples.size(); ++t)
            for (int e = 0; e < n_e; e += kChunk)
                jobs.push_back({static_cast<int>(t), e, std::min(e + kChunk, n_e)});

        std::atomic<std::size_t> next{0};
        std::mutex fail_mutex;
        auto work = [&] {
            // worker-local Hamiltonian cache, keyed by field value
            double cached_b = std::nan("");
            BlockHamiltonian h;
            for (;;) {
                const std::size_t j = next.fetch_add(1);
                if (j >= jobs.size()) break;
                const Job& job = jobs[j];
                const Tuple& tup = tuples[job.tuple];
                TupleData& out = data[job.tuple];
                if (out.failed.load()) continue;
                try {
                    if (!(cached_b == tup.b)) {
                        h = assemble(sites_, spec_.geometry, bonds_,
                                     device_params(tup.t_hop), FieldConfig{tup.b});
                        cached_b = tup.b;
                    }
                    SolveOptions opt;
                    opt.keep_columns = true;
                    for (int e = job.e_begin; e < job.e_end && !out.failed.load(); ++e) {
                        const double energy = spec_.grid.at(e);
                        const ContactSelfEnergy sigma =
                            self_energy(energy, spec_.lead, tup.t_hop);
                        const EffectiveSystem sys = make_effective_system(
                            h, tup.leads, sigma, sigma, energy, eta_);
                        const GreensResult g = solve_recursive(sys, opt);
                        out.t[e] = transmission(g, sigma, sigma);
                        out.d[e] = density_of_states(g, sigma, sigma).total;
                    }
                } catch (const std::exception& ex) {
                    out.failed.store(true);
                    std::lock_guard<std::mutex> lock(fail_mutex);
                    std::ostringstream msg;
                    msg << "tuple(B=" << tup.b << ", alpha=" << tup.alpha
                        << ", t_hop=" << tup.t_hop << "): " << ex.what();
                    failures.push_back(msg.str());
                }
            }
        };

        if (workers <= 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(work);
            for (auto& th : pool) th.join();
        }
        std::sort(failures.begin(), failures.end());
    }

    const std::vector<AtomSite>& sites() const { return sites_; }

private:
    HoppingParams device_params(double t_hop) const {
        HoppingParams p = spec_.hopping;
        p.t_hop = t_hop;
        return p;
    }

    const SweepSpec& spec_;
    double eta_;
    std::vector<AtomSite> sites_;
    std::vector<Bond> bonds_;
};

std::string write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("short write to " + path);
    return fnv1a_digest(content);
}

void echo_spec(RunManifest& m, const SweepSpec& spec, int workers) {
    auto put = [&m](const std::string& k, const std::string& v) {
        m.echo.emplace_back(k, v);
    };
    auto put_d = [&put](const std::string& k, double v) { put(k, format_g(v)); };
    auto put_list = [&put](const std::string& k, const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ", ";
            s += format_g(v[i]);
        }
        put(k, s);
    };
    put("constants", constants::table_version);
    put_d("major_radius_A", spec.geometry.major_radius);
    put_d("minor_radius_A", spec.geometry.minor_radius);
    put("n_layers", std::to_string(spec.geometry.n_layers));
    put_d("v_device_eV", spec.hopping.v_device);
    put_d("onsite_eV", spec.hopping.onsite);
    put_d("fermi_energy_eV", spec.lead.fermi_energy);
    put_d("a_lead_A", spec.lead.a_lead);
    put_d("ly_A", spec.lead.ly);
    put_d("lz_A", spec.lead.lz);
    put("mode_cutoff", std::to_string(spec.lead.mode_cutoff));
    put("modes_effective",
        std::to_string(std::min(spec.lead.mode_cutoff, spec.lead.lattice_mode_limit_y())) +
            " x " +
            std::to_string(std::min(spec.lead.mode_cutoff, spec.lead.lattice_mode_limit_z())));
    put_d("e_min_eV", spec.grid.e_min);
    put_d("e_max_eV", spec.grid.e_max);
    put_d("e_step_eV", spec.grid.step);
    put_list("b_list_T", spec.b_list);
    put_list("alpha_list_deg", spec.alpha_list);
    put_list("t_hop_list_eV", spec.t_hop_list);
    put_list("bias_list_eV", spec.bias_list);
    put_d("eta_eV", spec.eta);
    put_d("eta_current_eV", spec.eta_current);
    put_d("kT_eV", spec.kt);
    put_d("b_per_phi0_T", spec.flux.b_per_phi0);
    put("peierls_gauge", "symmetric, midpoint rule");
    put("workers", std::to_string(workers));
    put("seedless", "true");
}

std::string geometry_echo(const SweepSpec& spec, const std::vector<Tuple>& tuples,
                          const Engine& engine) {
    std::ostringstream out;
    out << "major_radius_A = " << format_g(spec.geometry.major_radius) << "\n";
    out << "minor_radius_A = " << format_g(spec.geometry.minor_radius) << "\n";
    out << "n_layers = " << spec.geometry.n_layers << "\n";
    out << "n_sites = " << spec.geometry.n_sites() << "\n";
    out << "alpha_grid_deg = " << format_g(360.0 / spec.geometry.n_layers) << "\n";
    (void)engine;
    std::vector<double> seen;
    for (const Tuple& t : tuples) {
        if (std::find(seen.begin(), seen.end(), t.alpha) != seen.end()) continue;
        seen.push_back(t.alpha);
        out << "alpha_realized_deg = " << format_g(t.alpha) << "\n";
        out << "contacts_left[" << format_g(t.alpha) << "] =";
        for (auto s : t.leads.left_sites) out << " " << s;
        out << "\n";
        out << "contacts_right[" << format_g(t.alpha) << "] =";
        for (auto s : t.leads.right_sites) out << " " << s;
        out << "\n";
    }
    return out.str();
}

} // namespace

void SweepSpec::validate() const {
    geometry.validate();
    grid.validate();
    lead.validate();
    if (outputs.empty()) throw ConfigError("no outputs requested");
    for (const auto& o : outputs)
        if (std::find(kKnownOutputs.begin(), kKnownOutputs.end(), o) == kKnownOutputs.end())
            throw ConfigError("unknown output table '" + o + "'");
    if (b_list.empty() || alpha_list.empty() || t_hop_list.empty())
        throw ConfigError("b_list, alpha_list and t_hop_list must be non-empty");
    const bool integrated =
        std::find(outputs.begin(), outputs.end(), "current") != outputs.end() ||
        std::find(outputs.begin(), outputs.end(), "flux_scan") != outputs.end();
    if (integrated && bias_list.empty())
        throw ConfigError("current / flux_scan outputs need a non-empty bias_list");
    for (double a : alpha_list)
        if (a < 45.0 || a > 315.0)
            throw ConfigError("alpha " + format_g(a) + " outside the sweep range [45, 315] deg");
    if (!(eta > 0.0) || !(eta_current > 0.0))
        throw ConfigError("eta values must be positive");
    if (!(kt > 0.0)) throw ConfigError("kT must be positive");
    if (!(plateau_tolerance > 0.0) || plateau_min_steps < 2)
        throw ConfigError("bad plateau detection parameters");
}

SweepSpec parse_config_text(const std::string& text) {
    SweepSpec spec;
    spec.lead = default_lead(spec.geometry);
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "major_radius") spec.geometry.major_radius = parse_double(key, value);
        else if (key == "minor_radius") spec.geometry.minor_radius = parse_double(key, value);
        else if (key == "n_layers") spec.geometry.n_layers = parse_int(key, value);
        else if (key == "v_device") spec.hopping.v_device = parse_double(key, value);
        else if (key == "onsite") spec.hopping.onsite = parse_double(key, value);
        else if (key == "fermi_energy") spec.lead.fermi_energy = parse_double(key, value);
        else if (key == "a_lead") spec.lead.a_lead = parse_double(key, value);
        else if (key == "ly") spec.lead.ly = parse_double(key, value);
        else if (key == "lz") spec.lead.lz = parse_double(key, value);
        else if (key == "mode_cutoff") spec.lead.mode_cutoff = parse_int(key, value);
        else if (key == "e_min") spec.grid.e_min = parse_double(key, value);
        else if (key == "e_max") spec.grid.e_max = parse_double(key, value);
        else if (key == "e_step") spec.grid.step = parse_double(key, value);
        else if (key == "b_list") spec.b_list = parse_list(key, value);
        else if (key == "alpha_list") spec.alpha_list = parse_list(key, value);
        else if (key == "t_hop_list") spec.t_hop_list = parse_list(key, value);
        else if (key == "bias_list") spec.bias_list = parse_list(key, value);
        else if (key == "outputs") spec.outputs = parse_names(value);
        else if (key == "eta") spec.eta = parse_double(key, value);
        else if (key == "eta_current") spec.eta_current = parse_double(key, value);
        else if (key == "kt") spec.kt = parse_double(key, value);
        else if (key == "b_per_phi0") spec.flux.b_per_phi0 = parse_double(key, value);
        else if (key == "plateau_tolerance") spec.plateau_tolerance = parse_double(key, value);
        else if (key == "plateau_min_steps") spec.plateau_min_steps = parse_int(key, value);
        else throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    // lexicographic row order over the parameter tuple
    std::sort(spec.b_list.begin(), spec.b_list.end());
    std::sort(spec.alpha_list.begin(), spec.alpha_list.end());
    std::sort(spec.t_hop_list.begin(), spec.t_hop_list.end());
    std::sort(spec.bias_list.begin(), spec.bias_list.end());
    refresh_lead_grid(spec);
    spec.validate();
    return spec;
}

SweepSpec parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

RunManifest run_sweep(const SweepSpec& spec, const std::string& out_dir, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    spec.validate();
    if (workers < 1) workers = 1;
    std::filesystem::create_directories(out_dir);

    RunManifest manifest;
    echo_spec(manifest, spec, workers);

    const bool want_spectral = std::any_of(spec.outputs.begin(), spec.outputs.end(),
                                           [](const std::string& o) { return is_spectral(o); });
    const bool want_integrated = std::any_of(
        spec.outputs.begin(), spec.outputs.end(),
        [](const std::string& o) { return o == "current" || o == "flux_scan"; });

    std::string geometry_text;
    std::size_t unit_count = 0, failed_count = 0;

    auto run_pass = [&](double eta, std::vector<Tuple>& tuples,
                        std::vector<TupleData>& data) {
        const Engine engine(spec, eta);
        tuples = engine.make_tuples();
        unit_count += tuples.size();
        data = std::vector<TupleData>(tuples.size());
        for (auto& d : data) {
            d.t.assign(spec.grid.n_points(), 0.0);
            d.d.assign(spec.grid.n_points(), 0.0);
        }
        engine.run(tuples, data, workers, manifest.failures);
        if (geometry_text.empty()) geometry_text = geometry_echo(spec, tuples, engine);
        for (const auto& d : data)
            if (d.failed.load()) ++failed_count;
    };

    std::vector<Tuple> spectral_tuples, integrated_tuples;
    std::vector<TupleData> spectral_data, integrated_data;
    if (want_spectral) run_pass(spec.eta, spectral_tuples, spectral_data);
    if (want_integrated) run_pass(spec.eta_current, integrated_tuples, integrated_data);

    // finalize the integrated rows once; a failed quadrature drops only its
    // own row
    std::vector<SweepRow> integrated_rows;
    for (std::size_t t = 0; t < integrated_tuples.size(); ++t) {
        if (integrated_data[t].failed.load()) continue;
        const Tuple& tup = integrated_tuples[t];
        for (double v_sd : spec.bias_list) {
            ++unit_count;
            BiasConfig bias;
            bias.v_sd = v_sd;
            bias.kt = spec.kt;
            SweepRow r;
            r.b = tup.b;
            r.alpha = tup.alpha;
            r.t_hop = tup.t_hop;
            r.v_sd = v_sd;
            try {
                r.i_over_e_h = current(integrated_data[t].t, spec.grid, bias);
            } catch (const std::exception& ex) {
                ++failed_count;
                std::ostringstream msg;
                msg << "tuple(B=" << tup.b << ", alpha=" << tup.alpha
                    << ", t_hop=" << tup.t_hop << ", V_sd=" << v_sd
                    << "): " << ex.what();
                manifest.failures.push_back(msg.str());
                continue;
            }
            integrated_rows.push_back(r);
        }
    }

    for (const std::string& table : spec.outputs) {
        std::string content = kCsvHeader;
        std::size_t rows = 0;
        if (is_spectral(table)) {
            for (std::size_t t = 0; t < spectral_tuples.size(); ++t) {
                if (spectral_data[t].failed.load()) continue;
                const Tuple& tup = spectral_tuples[t];
                for (int e = 0; e < spec.grid.n_points(); ++e) {
                    SweepRow r;
                    r.e = spec.grid.at(e);
                    r.b = tup.b;
                    r.alpha = tup.alpha;
                    r.t_hop = tup.t_hop;
                    r.t = spectral_data[t].t[e];
                    r.d_total = spectral_data[t].d[e];
                    content += format_row(r);
                    ++rows;
                }
            }
        } else {
            for (const SweepRow& r : integrated_rows) {
                content += format_row(r);
                ++rows;
            }
        }
        const std::string name = table + ".csv";
        TableInfo info;
        info.name = name;
        info.rows = rows;
        info.digest = write_file(out_dir + "/" + name, content);
        manifest.tables.push_back(info);
    }

    {
        TableInfo info;
        info.name = "geometry.txt";
        info.rows = 0;
        info.digest = write_file(out_dir + "/geometry.txt", geometry_text);
        manifest.tables.push_back(info);
    }

    manifest.status = failed_count == 0 ? RunStatus::ok
                      : failed_count >= unit_count ? RunStatus::hard_failure
                                                   : RunStatus::partial;
    manifest.wall_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();

    std::ostringstream out;
    out << "torx-manifest\n";
    out << "status = "
        << (manifest.status == RunStatus::ok ? "ok"
            : manifest.status == RunStatus::partial ? "partial"
                                                    : "hard_failure")
        << "\n";
    for (const auto& [k, v] : manifest.echo) out << k << " = " << v << "\n";
    out << "wall_ms = " << format_g(manifest.wall_ms) << "\n";
    for (const auto& t : manifest.tables)
        out << "table " << t.name << " rows=" << t.rows << " digest=fnv1a:" << t.digest << "\n";
    for (const auto& f : manifest.failures) out << "failure " << f << "\n";
    write_file(out_dir + "/manifest.txt", out.str());
    return manifest;
}

PlateauReport detect_plateaus(const std::vector<double>& alpha_deg,
                              const std::vector<double>& t_values,
                              double tolerance, int min_steps) {
    if (alpha_deg.size() != t_values.size())
        throw std::invalid_argument("plateau detection: size mismatch");
    const int n = static_cast<int>(alpha_deg.size());
    if (n < min_steps)
        throw std::invalid_argument("plateau detection needs at least min_steps points");
    for (int i = 2; i < n; ++i) {
        const double d0 = alpha_deg[1] - alpha_deg[0];
        if (std::abs((alpha_deg[i] - alpha_deg[i - 1]) - d0) > 1e-9 * std::abs(d0))
            throw std::invalid_argument("plateau detection needs uniform angle spacing");
    }

    PlateauReport report;
    int i = 0;
    while (i < n) {
        int j = i;
        double sum = t_values[i];
        // greedily extend while every member stays within +-tol of the mean
        while (j + 1 < n) {
            const double trial_sum = sum + t_values[j + 1];
            const double mean = trial_sum / (j + 2 - i);
            bool ok = true;
            for (int k = i; k <= j + 1 && ok; ++k)
                ok = std::abs(t_values[k] - mean) <= tolerance * std::abs(mean);
            if (!ok) break;
            ++j;
            sum = trial_sum;
        }
        if (j - i + 1 >= min_steps) {
            Plateau p;
            p.alpha_start = alpha_deg[i];
            p.alpha_end = alpha_deg[j];
            p.mean_t = sum / (j - i + 1);
            report.plateaus.push_back(p);
        }
        i = j + 1;
    }
    for (std::size_t k = 1; k < report.plateaus.size(); ++k) {
        const auto& a = report.plateaus[k - 1];
        const auto& b = report.plateaus[k];
        report.center_spacings.push_back(0.5 * (b.alpha_start + b.alpha_end) -
                                         0.5 * (a.alpha_start + a.alpha_end));
    }
    return report;
}

std::vector<FluxPeak> extract_flux_period(const std::vector<double>& flux,
                                          const std::vector<double>& current) {
    if (flux.size() != current.size())
        throw std::invalid_argument("flux period extraction: size mismatch");
    const int n = static_cast<int>(flux.size());
    if (n < 8) throw std::invalid_argument("flux period extraction needs at least 8 samples");
    const double d0 = flux[1] - flux[0];
    for (int i = 2; i < n; ++i)
        if (std::abs((flux[i] - flux[i - 1]) - d0) > 1e-9 * std::abs(d0))
            throw std::invalid_argument("flux period extraction needs uniform spacing");

    double mean = 0.0;
    for (double y : current) mean += y;
    mean /= n;

    const double span = n * d0;  // implicit DFT period
    std::vector<FluxPeak> peaks;
    double total = 0.0;
    for (int k = 1; k <= n / 2; ++k) {
        cdouble c = 0.0;
        for (int j = 0; j < n; ++j) {
            const double ph = -2.0 * constants::pi * j * k / n;
            c += (current[j] - mean) * cdouble(std::cos(ph), std::sin(ph));
        }
        const double power = std::norm(c);
        total += power;
        peaks.push_back({span / k, power});
    }
    if (total > 0.0)
        for (auto& p : peaks) p.weight /= total;
    std::sort(peaks.begin(), peaks.end(),
              [](const FluxPeak& a, const FluxPeak& b) { return a.weight > b.weight; });
    return peaks;
}

std::string fnv1a_digest(const std::string& content) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<SweepRow> read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != trim(std::string(kCsvHeader)))
        throw std::runtime_error("unexpected CSV header in " + path);
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        SweepRow r;
        double* fields[8] = {&r.e, &r.b, &r.alpha, &r.t_hop, &r.v_sd, &r.t, &r.d_total, &r.i_over_e_h};
        std::stringstream ss(line);
        std::string item;
        int i = 0;
        while (std::getline(ss, item, ',') && i < 8) *fields[i++] = std::stod(item);
        if (i != 8) throw std::runtime_error("short CSV row in " + path);
        rows.push_back(r);
    }
    return rows;
}

} // namespace torx
