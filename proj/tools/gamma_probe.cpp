#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "gammaprobe/dynsys.hpp"
#include "gammaprobe/findiff.hpp"
#include "gammaprobe/format.hpp"
#include "gammaprobe/measures.hpp"
#include "gammaprobe/response.hpp"

using json = nlohmann::ordered_json;
using namespace gammaprobe;

namespace {

// Fully resolved run description. Embedded in every output so a run can be
// reproduced from its own metadata; the output path is delivery, not part of
// the experiment, and stays out.
struct ExperimentConfig {
    std::string command;
    std::string map = "tent";
    double t = 0.7;
    double r = 3.7;
    double K = 0.6;
    double alpha = 0.41421356237309515;
    double x0 = 0.0; // resolved per map before running
    double I0 = 0.5;
    double theta0 = 0.2;
    unsigned long N = 30000;
    bool stim = false;
    double eps = 1e-4;
    long tau = 10;
    long tau_max = 100;
    std::string grid;  // "a:b:step", empty when unused
    std::string input; // external series path, empty when unused
    std::string format;
    std::string overflow = "wrap";
    unsigned long burn_in = 0;
    double mu_window = 0.0; // 0 disables the mu_s column
    unsigned long n_max = 200;
    unsigned long L = 64;
    unsigned long k = 0; // 0 resolves to n_max + L + 1
};

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["command"] = c.command;
    j["map"] = c.map;
    j["t"] = c.t;
    j["r"] = c.r;
    j["K"] = c.K;
    j["alpha"] = c.alpha;
    j["x0"] = c.x0;
    j["I0"] = c.I0;
    j["theta0"] = c.theta0;
    j["N"] = c.N;
    j["stim"] = c.stim;
    j["eps"] = c.eps;
    j["tau"] = c.tau;
    j["tau_max"] = c.tau_max;
    j["grid"] = c.grid;
    j["input"] = c.input;
    j["format"] = c.format;
    j["overflow"] = c.overflow;
    j["burn_in"] = c.burn_in;
    j["mu_window"] = c.mu_window;
    j["n_max"] = c.n_max;
    j["L"] = c.L;
    j["k"] = c.k;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    c.command = j.at("command").get<std::string>();
    c.map = j.value("map", c.map);
    c.t = j.value("t", c.t);
    c.r = j.value("r", c.r);
    c.K = j.value("K", c.K);
    c.alpha = j.value("alpha", c.alpha);
    c.x0 = j.value("x0", c.x0);
    c.I0 = j.value("I0", c.I0);
    c.theta0 = j.value("theta0", c.theta0);
    c.N = j.value("N", c.N);
    c.stim = j.value("stim", c.stim);
    c.eps = j.value("eps", c.eps);
    c.tau = j.value("tau", c.tau);
    c.tau_max = j.value("tau_max", c.tau_max);
    c.grid = j.value("grid", c.grid);
    c.input = j.value("input", c.input);
    c.format = j.value("format", c.format);
    c.overflow = j.value("overflow", c.overflow);
    c.burn_in = j.value("burn_in", c.burn_in);
    c.mu_window = j.value("mu_window", c.mu_window);
    c.n_max = j.value("n_max", c.n_max);
    c.L = j.value("L", c.L);
    c.k = j.value("k", c.k);
    return c;
}

SystemSpec make_spec(const ExperimentConfig& c) {
    if (c.map == "tent") return SystemSpec::tent(c.t, c.x0);
    if (c.map == "logistic") return SystemSpec::logistic(c.r, c.x0);
    if (c.map == "standard")
        return SystemSpec::standard_theta(c.K, c.I0, c.theta0);
    if (c.map == "frac") return SystemSpec::fractional(c.alpha);
    throw std::invalid_argument("unknown map: " + c.map);
}

OverflowPolicy make_policy(const ExperimentConfig& c) {
    if (c.overflow == "wrap") return OverflowPolicy::Wrap;
    if (c.overflow == "clamp") return OverflowPolicy::Clamp;
    throw std::invalid_argument("unknown overflow policy: " + c.overflow);
}

std::optional<Stimulation> make_stim(const ExperimentConfig& c) {
    if (!c.stim) return std::nullopt;
    return Stimulation(c.eps, c.tau);
}

std::vector<double> parse_grid(const std::string& text) {
    double a = 0.0;
    double b = 0.0;
    double step = 0.0;
    {
        std::istringstream is(text);
        char c1 = 0;
        char c2 = 0;
        if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' ||
            (is >> std::ws, !is.eof())) {
            throw std::invalid_argument("grid must be a:b:step");
        }
    }
    if (!(step > 0.0) || b < a)
        throw std::invalid_argument("grid requires b >= a and step > 0");
    const long long count = std::llround((b - a) / step) + 1;
    if (count < 1 || count > 1000000)
        throw std::invalid_argument("grid size out of range");
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = a + static_cast<double>(i) * step;
    }
    return grid;
}

// Accepts both this tool's `index,value` CSV and bare one-value-per-line
// files: the last comma-separated field of each line is taken, `#` lines and
// non-numeric lines (headers) are skipped.
std::vector<double> load_values(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t comma = line.find_last_of(',');
        std::string field =
            comma == std::string::npos ? line : line.substr(comma + 1);
        const std::size_t from = field.find_first_not_of(" \t");
        if (from == std::string::npos) continue;
        field = field.substr(from);
        char* end = nullptr;
        const double v = std::strtod(field.c_str(), &end);
        if (end == field.c_str() || *end != '\0') continue;
        values.push_back(v);
    }
    return values;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path);
}

std::string config_line(const ExperimentConfig& c) {
    return "# config: " + config_to_json(c).dump() + "\n";
}

void require_format(const ExperimentConfig& c, const char* wanted) {
    if (c.format != wanted) {
        throw std::invalid_argument("command " + c.command +
                                    " only supports format " + wanted);
    }
}

void cmd_orbit(const ExperimentConfig& cfg, const std::string& out) {
    require_format(cfg, "csv");
    const Orbit orbit = generate_orbit(make_spec(cfg), cfg.N, make_stim(cfg),
                                       make_policy(cfg), cfg.burn_in);
    std::string body;
    body += "# gamma_probe orbit\n";
    body += config_line(cfg);
    body += "index,value\n";
    for (std::size_t i = 0; i < orbit.values.size(); ++i) {
        body += std::to_string(i + 1);
        body += ',';
        body += format_double(orbit.values[i]);
        body += '\n';
    }
    write_file(out, body);
    std::cout << "wrote " << out << "\n";
}

void cmd_gamma(const ExperimentConfig& cfg, const std::string& out) {
    require_format(cfg, "json");
    GammaEstimate est;
    if (!cfg.input.empty()) {
        Orbit orbit;
        orbit.values = load_values(cfg.input);
        orbit.provenance = "external";
        est = gamma_from_orbit(orbit, cfg.N);
    } else {
        est = gamma_estimate(make_spec(cfg), cfg.N, make_stim(cfg),
                             make_policy(cfg), cfg.burn_in);
    }
    json j;
    j["gamma"] = est.gamma;
    j["flip_count"] = est.flip_count;
    j["N"] = est.N;
    j["k"] = est.k;
    j["convergence_diagnostic"] = est.convergence_diagnostic;
    j["config"] = config_to_json(cfg);
    write_file(out, j.dump(2) + "\n");
    std::cout << "gamma=" << format_double(est.gamma) << "\n";
}

void cmd_sweep_tau(const ExperimentConfig& cfg, const std::string& out) {
    require_format(cfg, "csv");
    const TauSweep sweep = sweep_tau(make_spec(cfg), cfg.eps, 2, cfg.tau_max,
                                     cfg.N, make_policy(cfg), cfg.burn_in);
    std::string body;
    body += "# gamma_probe sweep-tau\n";
    body += config_line(cfg);
    body += "# sizing: k=2N+1\n";
    body += "# baseline_gamma: " + format_double(sweep.baseline_gamma) + "\n";
    body += "# near_max_density: " + format_double(near_max_density(sweep)) +
            "\n";
    body += "tau,gamma\n";
    for (std::size_t i = 0; i < sweep.tau_values.size(); ++i) {
        body += std::to_string(sweep.tau_values[i]);
        body += ',';
        body += format_double(sweep.gammas[i]);
        body += '\n';
    }
    write_file(out, body);
    std::cout << "wrote " << out << "\n";
}

void cmd_sweep_param(const ExperimentConfig& cfg, const std::string& out) {
    require_format(cfg, "csv");
    if (cfg.grid.empty())
        throw std::invalid_argument("sweep-param needs --grid a:b:step");
    const ParamSweep sweep =
        sweep_param(make_spec(cfg), parse_grid(cfg.grid), cfg.N,
                    make_policy(cfg), cfg.burn_in);
    std::string body;
    body += "# gamma_probe sweep-param\n";
    body += config_line(cfg);
    body += "# sizing: k=2N+1\n";
    if (sweep.family == MapKind::StandardTheta) {
        body += "# lambda_valid:";
        for (std::size_t i = 0; i < sweep.lambda_valid.size(); ++i) {
            body += i == 0 ? " " : ",";
            body += sweep.lambda_valid[i] ? '1' : '0';
        }
        body += '\n';
    }
    body += "param,gamma,lambda\n";
    for (std::size_t i = 0; i < sweep.param_grid.size(); ++i) {
        body += format_double(sweep.param_grid[i]);
        body += ',';
        body += format_double(sweep.gammas[i]);
        body += ',';
        body += format_double(sweep.lambdas[i]);
        body += '\n';
    }
    write_file(out, body);
    std::cout << "wrote " << out << "\n";
}

void cmd_sweep_eps(const ExperimentConfig& cfg, const std::string& out) {
    require_format(cfg, "csv");
    if (cfg.grid.empty())
        throw std::invalid_argument("sweep-eps needs --grid a:b:step");
    const EpsilonSweep sweep =
        sweep_epsilon(make_spec(cfg), parse_grid(cfg.grid), cfg.tau_max, cfg.N,
                      make_policy(cfg), cfg.burn_in);
    std::vector<std::pair<double, double>> mu;
    if (cfg.mu_window > 0.0) mu = mu_smooth(sweep, cfg.mu_window);

    std::string body;
    body += "# gamma_probe sweep-eps\n";
    body += config_line(cfg);
    body += "# sizing: k=2N+1\n";
    body += mu.empty() ? "epsilon,gamma_max,tau_argmax\n"
                       : "epsilon,gamma_max,tau_argmax,mu_s\n";
    for (std::size_t i = 0; i < sweep.epsilon_grid.size(); ++i) {
        body += format_double(sweep.epsilon_grid[i]);
        body += ',';
        body += format_double(sweep.gamma_max[i]);
        body += ',';
        body += std::to_string(sweep.tau_argmax[i]);
        if (!mu.empty()) {
            body += ',';
            body += format_double(mu[i].second);
        }
        body += '\n';
    }
    write_file(out, body);
    std::cout << "wrote " << out << "\n";
}

void cmd_theorem1(const ExperimentConfig& cfg, const std::string& out) {
    require_format(cfg, "json");
    const std::size_t k = cfg.k > 0 ? cfg.k : cfg.n_max + cfg.L + 1;
    const Orbit orbit = fractional_parts_orbit(cfg.alpha, k);
    const ConjugateOrbit conj = conjugate_orbit(orbit, cfg.n_max, cfg.L);
    const auto period = detect_period(conj.terms);

    // Smallest order from which every later term is all-zero, if any.
    std::optional<std::size_t> tail;
    {
        std::size_t last_nonzero = 0;
        for (std::size_t n = 1; n <= conj.terms.size(); ++n) {
            for (std::uint8_t b : conj.terms[n - 1]) {
                if (b) {
                    last_nonzero = n;
                    break;
                }
            }
        }
        if (last_nonzero < conj.terms.size()) tail = last_nonzero + 1;
    }

    const long floor_inv = static_cast<long>(std::floor(1.0 / cfg.alpha));
    const bool pow2m1 = floor_inv >= 1 &&
                        ((floor_inv & (floor_inv + 1)) == 0);

    json j;
    if (period) {
        j["period"] = period->period;
        j["preperiod"] = period->preperiod;
        j["verified_matches"] = period->verified;
    } else {
        j["period"] = nullptr;
        j["preperiod"] = nullptr;
        j["verified_matches"] = 0;
    }
    j["first_all_zero_order"] =
        tail ? json(*tail) : json(nullptr);
    j["floor_inv_alpha"] = floor_inv;
    j["is_2p_minus_1"] = pow2m1;
    j["config"] = config_to_json(cfg);
    write_file(out, j.dump(2) + "\n");
    std::cout << "wrote " << out << "\n";
}

std::string default_out(const std::string& command) {
    if (command == "orbit") return "orbit.csv";
    if (command == "gamma") return "gamma.json";
    if (command == "sweep-tau") return "sweep_tau.csv";
    if (command == "sweep-param") return "sweep_param.csv";
    if (command == "sweep-eps") return "sweep_eps.csv";
    return "theorem1.json";
}

std::string default_format(const std::string& command) {
    return (command == "gamma" || command == "theorem1") ? "json" : "csv";
}

void resolve_defaults(ExperimentConfig& cfg, bool x0_given) {
    if (!x0_given) {
        cfg.x0 = cfg.map == "logistic" ? 0.317 : 0.17;
    }
    if (cfg.format.empty()) cfg.format = default_format(cfg.command);
}

void apply_threads(int threads) {
    if (threads <= 0) {
        if (const char* env = std::getenv("GAMMA_PROBE_THREADS")) {
            threads = std::atoi(env);
        }
    }
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

void run(const ExperimentConfig& cfg, const std::string& out) {
    if (cfg.command == "orbit") return cmd_orbit(cfg, out);
    if (cfg.command == "gamma") return cmd_gamma(cfg, out);
    if (cfg.command == "sweep-tau") return cmd_sweep_tau(cfg, out);
    if (cfg.command == "sweep-param") return cmd_sweep_param(cfg, out);
    if (cfg.command == "sweep-eps") return cmd_sweep_eps(cfg, out);
    if (cfg.command == "theorem1") return cmd_theorem1(cfg, out);
    throw std::invalid_argument("unknown command: " + cfg.command);
}

} // namespace

int main(int argc, char** argv) {
    ExperimentConfig cfg;
    std::string config_path;
    std::string out;
    int threads = 0;

    CLI::App app{"orbit irregularity probe"};
    app.require_subcommand(0, 1);
    app.add_option("--config", config_path,
                   "run a previously emitted JSON config");
    app.add_option("--out", out, "output path (overrides the default)");
    app.add_option("--threads", threads,
                   "worker threads (env GAMMA_PROBE_THREADS as fallback)");

    CLI::Option* x0_opt = nullptr;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--map", cfg.map, "tent|logistic|standard|frac");
        sub->add_option("--t", cfg.t, "tent slope");
        sub->add_option("--r", cfg.r, "logistic rate");
        sub->add_option("--K", cfg.K, "standard-map stochasticity");
        sub->add_option("--alpha", cfg.alpha, "fractional-parts step");
        x0_opt = sub->add_option("--x0", cfg.x0, "initial value");
        sub->add_option("--I0", cfg.I0, "standard-map initial action");
        sub->add_option("--theta0", cfg.theta0, "standard-map initial angle");
        sub->add_option("--N", cfg.N, "estimate size (orbit length for orbit)");
        sub->add_option("--overflow", cfg.overflow, "wrap|clamp");
        sub->add_option("--burn-in", cfg.burn_in, "unstimulated lead-in steps");
        sub->add_option("--format", cfg.format, "csv|json");
        sub->add_option("--out", out, "output path");
        sub->add_option("--threads", threads, "worker threads");
    };

    bool x0_given = false;
    CLI::Option* stim_tau = nullptr;
    CLI::Option* stim_eps = nullptr;

    CLI::App* orbit = app.add_subcommand("orbit", "emit one orbit as CSV");
    add_common(orbit);
    CLI::Option* orbit_x0 = x0_opt;
    stim_eps = orbit->add_option("--eps", cfg.eps, "stimulation intensity");
    stim_tau = orbit->add_option("--tau", cfg.tau, "stimulation period");
    CLI::Option* orbit_eps = stim_eps;
    CLI::Option* orbit_tau = stim_tau;

    CLI::App* gamma = app.add_subcommand("gamma", "estimate gamma");
    add_common(gamma);
    CLI::Option* gamma_x0 = x0_opt;
    CLI::Option* gamma_eps =
        gamma->add_option("--eps", cfg.eps, "stimulation intensity");
    CLI::Option* gamma_tau =
        gamma->add_option("--tau", cfg.tau, "stimulation period");
    gamma->add_option("--input", cfg.input, "external series CSV");

    CLI::App* stau = app.add_subcommand("sweep-tau", "gamma over tau=2..bound");
    add_common(stau);
    CLI::Option* stau_x0 = x0_opt;
    stau->add_option("--eps", cfg.eps, "stimulation intensity");
    stau->add_option("--tau-max", cfg.tau_max, "largest tau");

    CLI::App* sparam =
        app.add_subcommand("sweep-param", "gamma and lambda over a grid");
    add_common(sparam);
    CLI::Option* sparam_x0 = x0_opt;
    sparam->add_option("--grid", cfg.grid, "a:b:step over t, r, or K");

    CLI::App* seps =
        app.add_subcommand("sweep-eps", "gamma_max over an intensity grid");
    add_common(seps);
    CLI::Option* seps_x0 = x0_opt;
    seps->add_option("--grid", cfg.grid, "a:b:step over epsilon");
    seps->add_option("--tau-max", cfg.tau_max, "largest tau");
    seps->add_option("--mu-window", cfg.mu_window, "emit mu_s for window s");

    CLI::App* thm = app.add_subcommand("theorem1", "conjugate-orbit report");
    add_common(thm);
    CLI::Option* thm_x0 = x0_opt;
    thm->add_option("--n-max", cfg.n_max, "largest difference order");
    thm->add_option("--L", cfg.L, "term width in bits");
    thm->add_option("--k", cfg.k, "orbit length (0 = n_max + L + 1)");

    try {
        app.parse(argc, argv);

        if (!config_path.empty()) {
            if (app.get_subcommands().size() > 0)
                throw std::invalid_argument(
                    "use either --config or a subcommand, not both");
            std::ifstream in(config_path);
            if (!in)
                throw std::invalid_argument("cannot open config " +
                                            config_path);
            json j = json::parse(in);
            ExperimentConfig loaded = config_from_json(j);
            if (loaded.format.empty())
                loaded.format = default_format(loaded.command);
            apply_threads(threads);
            run(loaded, out.empty() ? default_out(loaded.command) : out);
            return 0;
        }

        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return 2;
        }

        CLI::App* sub = app.get_subcommands().front();
        cfg.command = sub->get_name();
        if (cfg.command == "orbit") {
            x0_given = orbit_x0->count() > 0;
            cfg.stim = orbit_tau->count() > 0 || orbit_eps->count() > 0;
        } else if (cfg.command == "gamma") {
            x0_given = gamma_x0->count() > 0;
            cfg.stim = gamma_tau->count() > 0 || gamma_eps->count() > 0;
        } else if (cfg.command == "sweep-tau") {
            x0_given = stau_x0->count() > 0;
        } else if (cfg.command == "sweep-param") {
            x0_given = sparam_x0->count() > 0;
        } else if (cfg.command == "sweep-eps") {
            x0_given = seps_x0->count() > 0;
        } else {
            x0_given = thm_x0->count() > 0;
        }
        resolve_defaults(cfg, x0_given);
        apply_threads(threads);
        run(cfg, out.empty() ? default_out(cfg.command) : out);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
