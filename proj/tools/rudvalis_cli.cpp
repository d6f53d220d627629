// Command-line front end.
//
// Subcommands: spectrum, bound, tv-exact, card-tv, simulate, coupling.
// JSON outputs carry schema_version plus an echo of the resolved config;
// CSV uses '.' decimals with 17 significant digits. Exit codes: 0 success,
// 2 validation error, 3 solver failure, 4 capacity cap exceeded.
//
// When RUDVALIS_OUT_DIR is set, bare output filenames (no '/') are written
// inside that directory.

#include <CLI11.hpp>
#include <json.hpp>

#include "rudvalis/bounds.hpp"
#include "rudvalis/exact.hpp"
#include "rudvalis/montecarlo.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::json;
using namespace rudvalis;

namespace {

constexpr int kSchemaVersion = 1;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string resolve_out(const std::string& path) {
    if (path == "-") return path;
    if (path.find('/') == std::string::npos) {
        if (const char* dir = std::getenv("RUDVALIS_OUT_DIR")) {
            std::string d = dir;
            if (!d.empty()) return d + "/" + path;
        }
    }
    return path;
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    const std::string resolved = resolve_out(path);
    std::ofstream f(resolved, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + resolved);
    f << content;
}

struct ShuffleArgs {
    std::string shuffle;
    int n = 0;
    double p = 0.0;
    bool p_set = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--shuffle", shuffle, "rudvalis | shift-or-swap | symmetrized")->required();
        cmd->add_option("--n", n, "deck size")->required();
        cmd->add_option("--p", p, "rudvalis swap probability")->each([this](const std::string&) {
            p_set = true;
        });
    }

    ShuffleSpec make() const {
        if (shuffle == "rudvalis") {
            if (!p_set) throw std::invalid_argument("rudvalis requires --p");
            return ShuffleSpec::rudvalis(n, p);
        }
        if (p_set) throw std::invalid_argument("--p only applies to the rudvalis shuffle");
        if (shuffle == "shift-or-swap") return ShuffleSpec::shift_or_swap(n);
        if (shuffle == "symmetrized") return ShuffleSpec::symmetrized(n);
        throw std::invalid_argument("unknown shuffle: " + shuffle);
    }

    json echo(const char* command) const {
        json cfg{{"command", command}, {"shuffle", shuffle}, {"n", n}};
        if (p_set)
            cfg["p"] = p;
        else
            cfg["p"] = nullptr;
        return cfg;
    }
};

json eigensystem_json(const EigenSystem& es) {
    json out{{"lambda_re", es.lambda.real()},
             {"lambda_im", es.lambda.imag()},
             {"gamma", es.gamma},
             {"psi_max", es.psi_max},
             {"r_bound", es.r_bound},
             {"residual", es.residual},
             {"verify_residual", verify_eigensystem(es)},
             {"used_fallback", es.used_fallback}};
    if (es.spec.kind == ShuffleKind::symmetrized) {
        out["theta"] = es.theta;
        out["delta"] = es.delta;
    } else {
        out["chi_re"] = es.chi.real();
        out["chi_im"] = es.chi.imag();
    }
    return out;
}

// ---------- subcommand runners ----------

void run_spectrum(const ShuffleArgs& args, const std::string& out) {
    const auto es = solve_eigensystem(args.make());
    json doc{{"schema_version", kSchemaVersion}, {"config", args.echo("spectrum")}};
    doc.update(eigensystem_json(es));
    write_output(out, doc.dump(2) + "\n");
}

void run_bound(const ShuffleArgs& args, std::vector<int> n_list, double epsilon,
               const std::string& out) {
    if (n_list.empty()) n_list.push_back(args.n);
    json cfg = args.echo("bound");
    cfg["epsilon"] = epsilon;
    cfg["n_list"] = n_list;
    json reports = json::array();
    for (int n : n_list) {
        ShuffleArgs a = args;
        a.n = n;
        const auto rep = make_bound_report(solve_eigensystem(a.make()), epsilon);
        reports.push_back(json{{"n", rep.n},
                               {"lambda_re", rep.lambda_re},
                               {"lambda_im", rep.lambda_im},
                               {"gamma", rep.gamma},
                               {"psi_max", rep.psi_max},
                               {"r_bound", rep.r_bound},
                               {"t_lower", rep.t_lower},
                               {"theorem_constant", rep.theorem_constant},
                               {"reference_constant", rep.reference_constant},
                               {"diagnostic", rep.diagnostic}});
    }
    json doc{{"schema_version", kSchemaVersion}, {"config", cfg}, {"reports", reports}};
    write_output(out, doc.dump(2) + "\n");
}

void run_tv_exact(const ShuffleArgs& args, long long t_max, const std::string& marginal,
                  const std::string& out) {
    if (t_max < 0) throw std::invalid_argument("--t must be nonnegative");
    const Marginal marg = marginal == "lifted" ? Marginal::lifted : Marginal::permutation;
    if (marginal != "lifted" && marginal != "perm")
        throw std::invalid_argument("--marginal must be perm or lifted");

    const auto spec = args.make();
    const auto es = solve_eigensystem(spec);
    LiftedChain chain(spec);
    const auto psi = chain.psi_table(es);

    std::ostringstream csv;
    csv << "t,tv,mean_re,mean_im,var\n";
    std::vector<double> cur(chain.num_states(), 0.0), nxt(chain.num_states());
    cur[chain.start_index()] = 1.0;
    for (long long t = 0; t <= t_max; ++t) {
        if (t > 0) {
            chain.step(cur, nxt);
            cur.swap(nxt);
        }
        cxd mean(0.0);
        double second = 0.0;
        for (long long s = 0; s < chain.num_states(); ++s) {
            mean += cur[s] * psi[s];
            second += cur[s] * std::norm(psi[s]);
        }
        const double tv = tv_to_uniform(DistVector{cur}, spec.n, marg);
        csv << t << ',' << fmt(tv) << ',' << fmt(mean.real()) << ',' << fmt(mean.imag()) << ','
            << fmt(second - std::norm(mean)) << '\n';
    }
    write_output(out, csv.str());
}

void run_card_tv(const ShuffleArgs& args, const std::string& t_grid, double threshold,
                 const std::string& out) {
    const auto spec = args.make();
    std::ostringstream csv;
    csv << "n,t,tv\n";
    if (t_grid == "auto") {
        SingleCardChain chain(spec);
        std::vector<double> dist(spec.n, 0.0);
        dist[0] = 1.0;
        long long t = 0, probe = 0;
        for (int k = 0; k < 62; ++k) {
            probe = k == 0 ? 0 : (k == 1 ? 1 : probe * 2);
            for (; t < probe; ++t) chain.step(dist);
            const double tv = SingleCardChain::tv_uniform(dist);
            csv << spec.n << ',' << probe << ',' << fmt(tv) << '\n';
            if (tv < threshold) break;
        }
    } else {
        std::vector<long long> grid;
        std::stringstream ss(t_grid);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            std::size_t pos = 0;
            const long long val = std::stoll(tok, &pos);
            if (pos != tok.size() || val < 0) throw std::invalid_argument("bad --t-grid entry: " + tok);
            grid.push_back(val);
        }
        if (grid.empty()) throw std::invalid_argument("--t-grid is empty");
        for (const auto& [t, tv] : single_card_tv_curve(spec, grid))
            csv << spec.n << ',' << t << ',' << fmt(tv) << '\n';
    }
    write_output(out, csv.str());
}

void run_simulate(const ShuffleArgs& args, long long t, int trials, std::uint64_t seed,
                  int stationary, double epsilon, bool serial, const std::string& out,
                  const std::string& summary_out) {
    if (t < 0) throw std::invalid_argument("--t must be nonnegative");
    if (trials <= 0) throw std::invalid_argument("--trials must be positive");
    if (out == "-" && summary_out == "-")
        throw std::invalid_argument("--out and --summary-out cannot both be stdout");

    const auto es = solve_eigensystem(args.make());
    const auto batch = sample_psi(es, t, trials, seed, !serial);

    std::ostringstream csv;
    csv << "trial,psi_re,psi_im,psi_abs\n";
    for (int i = 0; i < trials; ++i) {
        const cxd& v = batch.psi[i];
        csv << i << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << ',' << fmt(std::abs(v)) << '\n';
    }
    write_output(out, csv.str());

    json cfg = args.echo("simulate");
    cfg["t"] = t;
    cfg["trials"] = trials;
    cfg["seed"] = seed;
    cfg["stationary"] = stationary;
    cfg["epsilon"] = epsilon;
    cfg["serial"] = serial;

    cxd mean(0.0);
    double second = 0.0;
    for (const cxd& v : batch.psi) {
        mean += v;
        second += std::norm(v);
    }
    mean /= static_cast<double>(trials);
    second /= static_cast<double>(trials);
    json doc{{"schema_version", kSchemaVersion},
             {"config", cfg},
             {"mean_re", mean.real()},
             {"mean_im", mean.imag()},
             {"second_abs_moment", second},
             {"variance", second - std::norm(mean)}};
    if (stationary > 0) {
        const auto sep = separation_test(batch, es, stationary, epsilon);
        doc["separation"] = json{{"threshold", sep.threshold},
                                 {"p_chain", sep.p_chain},
                                 {"p_stationary", sep.p_stationary},
                                 {"tv_lower_bound", sep.tv_lower_bound}};
    }
    write_output(summary_out, doc.dump(2) + "\n");
}

void run_coupling(int n, long long shifts, long long steps, std::uint64_t seed,
                  const std::string& out) {
    const auto parity = swap_run_parity(shifts, seed);
    const auto equiv = shift_count_equivalence(n, steps, seed + 1);
    json doc{{"schema_version", kSchemaVersion},
             {"config", json{{"command", "coupling"},
                             {"n", n},
                             {"shifts", shifts},
                             {"steps", steps},
                             {"seed", seed}}},
             {"parity", json{{"shifts", parity.shifts},
                             {"odd_runs", parity.odd_runs},
                             {"fraction_odd", parity.fraction_odd}}},
             {"equivalence", json{{"steps", equiv.steps},
                                  {"shift_epochs", equiv.shift_epochs},
                                  {"all_match", equiv.all_match},
                                  {"first_mismatch", equiv.first_mismatch},
                                  {"epoch_frequency", equiv.epoch_frequency}}}};
    write_output(out, doc.dump(2) + "\n");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lower-bound machinery for cyclic-shift card shuffles"};
    app.require_subcommand(1);

    ShuffleArgs spec_args, bound_args, tv_args, card_args, sim_args;
    std::string spectrum_out = "-", bound_out = "-", tv_out = "-", card_out = "-";
    std::string sim_out = "-", sim_summary_out = "-", coupling_out = "-";

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalue, eigenvector diagnostics");
    spec_args.attach(spectrum);
    spectrum->add_option("--out", spectrum_out, "output path or - for stdout");

    auto* bound = app.add_subcommand("bound", "mixing-time lower bound report");
    bound_args.attach(bound);
    std::vector<int> bound_n_list;
    double bound_eps = 0.25;
    bound->add_option("--n-list", bound_n_list, "comma-separated deck sizes (overrides --n)")
        ->delimiter(',');
    bound->add_option("--epsilon", bound_eps, "separation parameter (default 0.25)");
    bound->add_option("--out", bound_out, "output path or - for stdout");

    auto* tv = app.add_subcommand("tv-exact", "exact TV curve on a small deck (CSV)");
    tv_args.attach(tv);
    long long tv_t = 100;
    std::string tv_marginal = "perm";
    tv->add_option("--t", tv_t, "final time (rows 0..t)");
    tv->add_option("--marginal", tv_marginal, "perm | lifted");
    tv->add_option("--out", tv_out, "output path or - for stdout");

    auto* card = app.add_subcommand("card-tv", "tracked-card TV curve (CSV)");
    card_args.attach(card);
    std::string card_grid = "auto";
    double card_threshold = 0.25;
    card->add_option("--t-grid", card_grid, "auto or comma-separated times");
    card->add_option("--threshold", card_threshold, "stop threshold for auto grid");
    card->add_option("--out", card_out, "output path or - for stdout");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo psi samples (CSV + JSON summary)");
    sim_args.attach(sim);
    long long sim_t = 0;
    int sim_trials = 1000, sim_stationary = 0;
    std::uint64_t sim_seed = 1;
    double sim_eps = 0.25;
    bool sim_serial = false;
    sim->add_option("--t", sim_t, "steps per trial")->required();
    sim->add_option("--trials", sim_trials, "number of trials");
    sim->add_option("--seed", sim_seed, "master seed");
    sim->add_option("--stationary", sim_stationary, "stationary samples for the separation test");
    sim->add_option("--epsilon", sim_eps, "separation parameter");
    sim->add_flag("--serial", sim_serial, "disable the parallel trial loop");
    sim->add_option("--out", sim_out, "per-trial CSV path or - for stdout");
    sim->add_option("--summary-out", sim_summary_out, "JSON summary path or - for stdout");

    auto* coupling = app.add_subcommand("coupling", "shift_or_swap vs rudvalis(1/3) coupling checks");
    int coup_n = 6;
    long long coup_shifts = 100000, coup_steps = 10000;
    std::uint64_t coup_seed = 1;
    coupling->add_option("--n", coup_n, "deck size for the equivalence run");
    coupling->add_option("--shifts", coup_shifts, "shift count for the parity estimate");
    coupling->add_option("--steps", coup_steps, "steps for the deck equivalence run");
    coupling->add_option("--seed", coup_seed, "seed");
    coupling->add_option("--out", coupling_out, "output path or - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(spectrum)) run_spectrum(spec_args, spectrum_out);
        if (app.got_subcommand(bound)) run_bound(bound_args, bound_n_list, bound_eps, bound_out);
        if (app.got_subcommand(tv)) run_tv_exact(tv_args, tv_t, tv_marginal, tv_out);
        if (app.got_subcommand(card)) run_card_tv(card_args, card_grid, card_threshold, card_out);
        if (app.got_subcommand(sim))
            run_simulate(sim_args, sim_t, sim_trials, sim_seed, sim_stationary, sim_eps, sim_serial,
                         sim_out, sim_summary_out);
        if (app.got_subcommand(coupling))
            run_coupling(coup_n, coup_shifts, coup_steps, coup_seed, coupling_out);
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
