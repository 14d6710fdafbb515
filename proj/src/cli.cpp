#include "signet/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "signet/config.hpp"
#include "signet/csv.hpp"
#include "signet/graph.hpp"
#include "signet/keychain.hpp"
#include "signet/meanfield.hpp"
#include "signet/rates.hpp"
#include "signet/sim.hpp"

namespace signet {

namespace {

// fixed integration horizon behind the reference tables (see REPRODUCTION.md):
// the published survival integrals were truncated at T=300 with no tail term
constexpr double kTableHorizon = 300.0;
constexpr double kTableGamma = 0.4;

struct Flags {
    std::optional<std::string> config, out_dir, preset, lambda, mu, mode;
    std::optional<double> rtol, atol, gamma, horizon, eps_tail, assort_target, curve_max,
        rate_t_max;
    std::optional<int> k, k_max, rate_points;
    std::optional<std::size_t> n, m, replicates, curve_points, max_swaps;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    int table = 0;
};

RunConfig assemble(const Flags& f) {
    RunConfig rc;
    if (f.config) rc = parse_config_file(*f.config);
    if (f.preset && (f.lambda || f.mu))
        throw config_error("give either --preset or --lambda/--mu, not both");
    if (f.preset) {
        rc.preset_name = *f.preset;
        rc.lambda_spec.reset();
        rc.mu_spec.reset();
    } else if (f.lambda || f.mu) {
        rc.preset_name.reset();
        if (f.lambda) rc.lambda_spec = parse_rate_spec(*f.lambda);
        if (f.mu) rc.mu_spec = parse_rate_spec(*f.mu);
    }
    auto positive = [](double v, const char* what) {
        if (!(v > 0)) throw config_error(std::string(what) + " must be positive");
        return v;
    };
    if (f.rtol) rc.rtol = positive(*f.rtol, "rtol");
    if (f.atol) rc.atol = positive(*f.atol, "atol");
    if (f.gamma) {
        rc.gamma = *f.gamma;
        if (!(rc.gamma > 0 && rc.gamma < 1)) throw config_error("gamma must lie in (0,1)");
    }
    if (f.horizon) rc.horizon = positive(*f.horizon, "horizon");
    if (f.eps_tail) rc.eps_tail = positive(*f.eps_tail, "eps-tail");
    if (f.mode) rc.mode = parse_mode(*f.mode);
    if (f.k) {
        rc.k = *f.k;
        if (rc.k < 1) throw config_error("k must be >= 1");
    }
    if (f.k_max) {
        rc.k_max = *f.k_max;
        if (rc.k_max < 1) throw config_error("kmax must be >= 1");
    }
    if (f.rate_points) {
        rc.rate_points = *f.rate_points;
        if (rc.rate_points < 2) throw config_error("points must be >= 2");
    }
    if (f.rate_t_max) rc.rate_t_max = positive(*f.rate_t_max, "tmax");
    if (f.n) rc.n = *f.n;
    if (f.m) rc.m = *f.m;
    if (f.replicates) {
        rc.replicates = *f.replicates;
        if (rc.replicates < 1) throw config_error("replicates must be >= 1");
    }
    if (f.seed) rc.seed = *f.seed;
    if (f.assort_target) {
        if (!(*f.assort_target >= -1.0 && *f.assort_target <= 0.0))
            throw config_error("assort-target must lie in [-1, 0]");
        rc.assort_target = *f.assort_target;
    }
    if (f.threads) {
        rc.threads = *f.threads;
        if (rc.threads < 1) throw config_error("threads must be >= 1");
    }
    if (f.curve_points) {
        rc.curve_points = *f.curve_points;
        if (rc.curve_points < 2) throw config_error("curve-points must be >= 2");
    }
    if (f.curve_max) rc.curve_max = positive(*f.curve_max, "curve-max");
    if (f.max_swaps) rc.max_swaps = *f.max_swaps;
    if (f.out_dir) rc.out_dir = *f.out_dir;
    return rc;
}

std::vector<double> linspace(double a, double b, std::size_t pts) {
    std::vector<double> g(pts);
    for (std::size_t i = 0; i < pts; ++i)
        g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(pts - 1);
    g.back() = b;
    return g;
}

std::optional<std::filesystem::path> output_dir(const RunConfig& rc) {
    if (rc.out_dir.empty()) return std::nullopt;
    std::error_code ec;
    std::filesystem::create_directories(rc.out_dir, ec);
    if (ec) throw io_error("cannot create output directory " + rc.out_dir + ": " + ec.message());
    return std::filesystem::path(rc.out_dir);
}

void write_file(const std::optional<std::filesystem::path>& dir, const std::string& name,
                const std::string& body) {
    if (!dir) return;
    std::ofstream f(*dir / name);
    if (!f) throw io_error("cannot write " + (*dir / name).string());
    f << body;
}

ChainMode mode_for_k(const RunConfig& rc, int k) {
    return k == 1 ? rc.mode : ChainMode::absorbing;
}

// starting horizon cap for survival integrals: 100*max(1, tau_hat) when the
// threshold is reachable, 1e6 otherwise; an explicit horizon wins
double hitting_cap(const RunConfig& rc, const RatePair& rp) {
    if (rc.horizon > 0) return rc.horizon;
    const TriggerResult tr = trigger_time(rp, rc.gamma, rc.solver());
    return tr.reached ? 100.0 * std::max(1.0, tr.tau_hat) : 1e6;
}

int cmd_meanfield(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const RatePair rp = rc.rates();
    const SolverOptions so = rc.solver();
    const auto dir = output_dir(rc);

    const std::vector<double> fps = fixed_points(rp);
    const double horizon = rc.horizon > 0 ? rc.horizon : default_horizon(rp);
    const Trajectory traj = solve_activation(rp, horizon, so);

    std::ostringstream csv;
    csv << "t,a_hat\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        csv << fmt_full(traj.times[i]) << ',' << fmt_full(traj.values[i]) << '\n';
    write_file(dir, "meanfield_trajectory.csv", csv.str());

    for (double fp : fps) out << "fixed_point," << fmt_full(fp) << '\n';
    const TriggerResult tr = trigger_time(rp, rc.gamma, so);
    if (!tr.reached) {
        out << "unreachable_gamma," << fmt_full(tr.gamma) << '\n';
        err << "threshold " << fmt_sig(tr.gamma) << " is unreachable: activation saturates at "
            << fmt_sig(tr.fixed_point) << '\n';
        return 3;
    }
    out << "tau_hat_gamma," << fmt_sig(tr.tau_hat) << '\n';
    return 0;
}

int cmd_hitting(const RunConfig& rc, std::ostream& out, std::ostream&) {
    const RatePair rp = rc.rates();
    const SolverOptions so = rc.solver();
    const auto dir = output_dir(rc);
    const double cap = hitting_cap(rc, rp);

    std::vector<int> ks;
    if (rc.k > 0)
        ks.push_back(rc.k);
    else
        for (int k = 1; k <= rc.k_max; ++k) ks.push_back(k);

    std::ostringstream csv;
    csv << "k,E_tau_k,tail_bound\n";
    for (int k : ks) {
        // an explicit horizon is a hard limit; the automatic one may grow
        const HittingResult r =
            rc.horizon > 0
                ? expected_hitting_time(rp, k, so, rc.eps_tail, mode_for_k(rc, k), cap)
                : expected_hitting_time_auto(rp, k, so, rc.eps_tail, mode_for_k(rc, k), cap);
        csv << k << ',' << fmt_full(r.value) << ',' << fmt_full(r.tail_bound) << '\n';
    }
    out << csv.str();
    write_file(dir, "hitting.csv", csv.str());
    return 0;
}

int cmd_kc(const RunConfig& rc, std::ostream& out, std::ostream&) {
    const RatePair rp = rc.rates();
    const SolverOptions so = rc.solver();
    const auto dir = output_dir(rc);

    const HittingSummary s = optimal_k(rp, rc.gamma, rc.k_max, rc.mode, so, rc.eps_tail);
    const ChainMode other =
        rc.mode == ChainMode::absorbing ? ChainMode::literal_k1 : ChainMode::absorbing;
    const HittingSummary s2 = optimal_k(rp, rc.gamma, rc.k_max, other, so, rc.eps_tail);
    const int kc_abs = rc.mode == ChainMode::absorbing ? s.k_c : s2.k_c;
    const int kc_lit = rc.mode == ChainMode::literal_k1 ? s.k_c : s2.k_c;

    std::ostringstream csv;
    csv << "k,E_tau_k,tail_bound\n";
    for (const auto& r : s.records)
        csv << r.k << ',' << fmt_full(r.value) << ',' << fmt_full(r.tail_bound) << '\n';
    csv << "tau_hat_gamma," << fmt_full(s.tau_hat) << '\n';
    csv << "k_c_minus," << s.k_c_minus << '\n';
    csv << "k_c_plus," << s.k_c_plus << '\n';
    csv << "k_c," << s.k_c << '\n';
    csv << "k_c_absorbing," << kc_abs << '\n';
    csv << "k_c_literal_k1," << kc_lit << '\n';
    csv << "mode_flag," << (kc_abs == kc_lit ? "same" : "differs") << '\n';
    out << csv.str();
    write_file(dir, "kc.csv", csv.str());
    return 0;
}

int cmd_rate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const RatePair rp = rc.rates();
    const SolverOptions so = rc.solver();
    const auto dir = output_dir(rc);
    const int k = rc.k > 0 ? rc.k : 1;

    double tmax = rc.rate_t_max;
    if (tmax <= 0) {
        const TriggerResult tr = trigger_time(rp, rc.gamma, so);
        tmax = tr.reached ? 2.0 * std::max(1.0, tr.tau_hat) : std::min(default_horizon(rp), 1e3);
    }
    const std::vector<double> grid = linspace(0.0, tmax, static_cast<std::size_t>(rc.rate_points));
    const RateCurve c = activation_rate(rp, k, grid, so, mode_for_k(rc, k));
    if (c.truncated)
        err << "note: rate curve truncated after t=" << fmt_sig(c.times.back())
            << " (survival underflow)\n";

    std::ostringstream csv;
    csv << "t,m_k\n";
    for (std::size_t i = 0; i < c.times.size(); ++i)
        csv << fmt_full(c.times[i]) << ',' << fmt_full(c.values[i]) << '\n';
    out << csv.str();
    write_file(dir, "rate.csv", csv.str());
    return 0;
}

int cmd_simulate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const RatePair rp = rc.rates();
    const auto dir = output_dir(rc);

    NetworkGraph graph = generate_pa(rc.n, rc.m, rc.seed);
    if (rc.assort_target) {
        RewireResult rw = rewire_disassortative(graph, *rc.assort_target, rc.max_swaps,
                                                rc.seed + 1);
        graph = std::move(rw.graph);
        err << "rewiring: assortativity " << fmt_sig(rw.achieved) << " after " << rw.accepted
            << " swaps (" << rw.attempted << " attempts)\n";
    }

    double horizon = rc.horizon;
    if (horizon <= 0) {
        const TriggerResult tr = trigger_time(rp, rc.gamma, rc.solver());
        if (!tr.reached)
            throw config_error("horizon is required: threshold unreachable under mean field");
        horizon = 10.0 * tr.tau_hat;
    }

    SimConfig sc;
    sc.n = rc.n;
    sc.m = rc.m;
    if (rc.assort_target) sc.assortativity_target = *rc.assort_target;
    sc.rates = rp;
    sc.gamma = rc.gamma;
    sc.k = static_cast<std::size_t>(rc.k > 0 ? rc.k : 1);
    sc.replicates = rc.replicates;
    sc.master_seed = rc.seed;
    sc.horizon = horizon;
    const double curve_max = rc.curve_max > 0 ? std::min(rc.curve_max, horizon) : horizon;
    sc.curve_grid = linspace(0.0, curve_max, rc.curve_points);
    sc.threads = rc.threads;

    const SimEstimate est = simulate(graph, sc);

    std::ostringstream ecsv;
    ecsv << "target,mean,std,stderr,censored\n";
    auto row = [&](const char* name, const TargetStats& s) {
        ecsv << name << ',' << fmt_full(s.mean) << ',' << fmt_full(s.stddev) << ','
             << fmt_full(s.std_err) << ',' << s.censored << '\n';
    };
    row("tau_gamma", est.trigger);
    row("tau_k", est.hit);
    out << ecsv.str();
    out << "assortativity," << fmt_full(est.achieved_assortativity) << '\n';
    write_file(dir, "estimate.csv", ecsv.str());

    std::ostringstream scsv;
    scsv << "replicate,tau_gamma,tau_k\n";
    for (std::size_t r = 0; r < est.trigger_samples.size(); ++r)
        scsv << r << ',' << fmt_full(est.trigger_samples[r]) << ','
             << fmt_full(est.hit_samples[r]) << '\n';
    write_file(dir, "samples.csv", scsv.str());

    std::ostringstream ccsv;
    ccsv << "t,a_bar\n";
    for (std::size_t i = 0; i < est.curve_times.size(); ++i)
        ccsv << fmt_full(est.curve_times[i]) << ',' << fmt_full(est.curve_values[i]) << '\n';
    write_file(dir, "curve.csv", ccsv.str());

    if (dir) {
        std::ostringstream g;
        write_edge_list(g, graph);
        write_file(dir, "graph.edges", g.str());
    }

    if (est.trigger.used == 0 || est.hit.used == 0) {
        err << "all replicates censored at the horizon for "
            << (est.trigger.used == 0 ? "tau_gamma" : "tau_k") << '\n';
        return 5;
    }
    return 0;
}

int cmd_tables(const RunConfig& rc, int which, std::ostream& out, std::ostream&) {
    const SolverOptions so = rc.solver();
    const auto dir = output_dir(rc);

    if (which == 1) {
        const std::vector<std::string> cols = {"const", "exp-const", "const-exp", "power-const",
                                               "log-log"};
        const std::size_t nc = cols.size();
        std::vector<double> tau(nc), k1lit(nc), k1abs(nc);
        std::vector<std::vector<double>> kv(5, std::vector<double>(nc)); // k=2..6
        std::vector<int> kclit(nc), kcabs(nc);
        for (std::size_t c = 0; c < nc; ++c) {
            const RatePair rp = preset(cols[c]);
            const TriggerResult tr = trigger_time(rp, kTableGamma, so);
            tau[c] = tr.tau_hat;
            k1lit[c] = hitting_time_fixed_horizon(rp, 1, kTableHorizon, so, ChainMode::literal_k1);
            k1abs[c] = expected_hitting_time_auto(rp, 1, so, rc.eps_tail, ChainMode::absorbing,
                                                  100.0 * std::max(1.0, tr.tau_hat))
                           .value;
            for (int k = 2; k <= 6; ++k)
                kv[static_cast<std::size_t>(k - 2)][c] =
                    hitting_time_fixed_horizon(rp, k, kTableHorizon, so, ChainMode::absorbing);
            kclit[c] = optimal_k(rp, kTableGamma, 6, ChainMode::literal_k1, so).k_c;
            kcabs[c] = optimal_k(rp, kTableGamma, 6, ChainMode::absorbing, so).k_c;
        }

        auto line = [&](std::ostream& o, const std::string& label, auto&& get) {
            o << label;
            for (std::size_t c = 0; c < nc; ++c) {
                std::ostringstream v;
                v << get(c);
                o << std::string(label.size() < 18 ? 0 : 1, ' ')
                  << std::string(v.str().size() < 12 ? 12 - v.str().size() : 1, ' ') << v.str();
            }
            o << '\n';
        };
        std::ostringstream txt;
        line(txt, "row               ", [&](std::size_t c) { return cols[c]; });
        line(txt, "tau_hat           ", [&](std::size_t c) { return fmt_sig(tau[c]); });
        line(txt, "k=1 (literal-k1)  ", [&](std::size_t c) { return fmt_sig(k1lit[c]); });
        line(txt, "k=1 (absorbing)   ", [&](std::size_t c) { return fmt_sig(k1abs[c]); });
        for (int k = 2; k <= 6; ++k) {
            std::string lbl = "k=" + std::to_string(k) + "               ";
            line(txt, lbl.substr(0, 18),
                 [&](std::size_t c) { return fmt_sig(kv[static_cast<std::size_t>(k - 2)][c]); });
        }
        line(txt, "k_c (literal-k1)  ", [&](std::size_t c) { return kclit[c]; });
        line(txt, "k_c (absorbing)   ", [&](std::size_t c) { return kcabs[c]; });
        txt << "note: the k=1 row of the reference table follows the literal-k1 convention;\n"
               "      the absorbing (first-passage) convention gives the larger k=1 values "
               "above.\n";
        bool any = false;
        for (std::size_t c = 0; c < nc; ++c) {
            if (kclit[c] != kcabs[c]) {
                txt << "note: k_c for '" << cols[c] << "' depends on the k=1 convention ("
                    << kclit[c] << " literal-k1 vs " << kcabs[c] << " absorbing)\n";
                any = true;
            }
        }
        if (!any) txt << "note: k_c agrees between the two k=1 conventions for every column\n";
        out << txt.str();

        std::ostringstream csv;
        csv << "row";
        for (const auto& c : cols) csv << ',' << c;
        csv << '\n';
        auto crow = [&](const std::string& label, auto&& get) {
            csv << label;
            for (std::size_t c = 0; c < nc; ++c) csv << ',' << get(c);
            csv << '\n';
        };
        crow("tau_hat", [&](std::size_t c) { return fmt_full(tau[c]); });
        crow("k1_literal", [&](std::size_t c) { return fmt_full(k1lit[c]); });
        crow("k1_absorbing", [&](std::size_t c) { return fmt_full(k1abs[c]); });
        for (int k = 2; k <= 6; ++k)
            crow("k" + std::to_string(k), [&](std::size_t c) {
                return fmt_full(kv[static_cast<std::size_t>(k - 2)][c]);
            });
        crow("kc_literal", [&](std::size_t c) { return std::to_string(kclit[c]); });
        crow("kc_absorbing", [&](std::size_t c) { return std::to_string(kcabs[c]); });
        write_file(dir, "table1.csv", csv.str());
        return 0;
    }

    if (which == 2) {
        const RatePair rp = preset("aging");
        std::ostringstream csv, txt;
        csv << "k,E_tau_k\n";
        txt << "k    E_tau_k\n";
        for (int k = 1; k <= 7; ++k) {
            const double v = hitting_time_fixed_horizon(rp, k, kTableHorizon, so,
                                                        ChainMode::absorbing);
            csv << k << ',' << fmt_full(v) << '\n';
            txt << k << "    " << fmt_sig(v) << '\n';
        }
        out << txt.str();
        write_file(dir, "table2.csv", csv.str());
        return 0;
    }

    // table 3
    const RatePair rp = preset("aging");
    std::ostringstream csv, txt;
    csv << "gamma,tau_hat\n";
    txt << "gamma    tau_hat\n";
    for (double g : {0.2, 0.3, 0.4, 0.5, 0.6}) {
        const TriggerResult tr = trigger_time(rp, g, so);
        csv << fmt_full(g) << ',' << fmt_full(tr.tau_hat) << '\n';
        txt << fmt_sig(g) << "      " << fmt_sig(tr.tau_hat) << '\n';
    }
    out << txt.str();
    write_file(dir, "table3.csv", csv.str());
    return 0;
}

} // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"signal-network activation toolkit"};
    Flags f;
    app.add_option("--config", f.config, "config file (key = value sections)");
    app.add_option("--out", f.out_dir, "output directory for CSV files");
    app.add_option("--preset", f.preset, "named rate pair");
    app.add_option("--lambda", f.lambda, "activation rate spec, e.g. expscale(1,-1)");
    app.add_option("--mu", f.mu, "deactivation rate spec");
    app.add_option("--gamma", f.gamma, "trigger threshold in (0,1)");
    app.add_option("--k", f.k, "key-node count");
    app.add_option("--kmax", f.k_max, "largest k for ranges");
    app.add_option("--mode", f.mode, "absorbing | literal-k1");
    app.add_option("--rtol", f.rtol, "relative tolerance");
    app.add_option("--atol", f.atol, "absolute tolerance");
    app.add_option("--horizon", f.horizon, "integration / censoring horizon");
    app.add_option("--eps-tail", f.eps_tail, "survival cutoff for hitting times");
    app.add_option("--points", f.rate_points, "rate-curve grid size");
    app.add_option("--tmax", f.rate_t_max, "rate-curve end time");
    app.add_option("--n", f.n, "node count");
    app.add_option("--m", f.m, "edges per attached node");
    app.add_option("--replicates", f.replicates, "Monte Carlo replicates");
    app.add_option("--seed", f.seed, "master seed");
    app.add_option("--threads", f.threads, "worker threads for replicates");
    app.add_option("--assort-target", f.assort_target, "rewire to this assortativity");
    app.add_option("--curve-points", f.curve_points, "activation-curve grid size");
    app.add_option("--curve-max", f.curve_max, "activation-curve end time");
    app.add_option("--max-swaps", f.max_swaps, "rewiring attempt budget");

    auto* sub_meanfield = app.add_subcommand("meanfield", "activation trajectory + trigger time");
    auto* sub_hitting = app.add_subcommand("hitting", "expected hitting times E[tau_k]");
    auto* sub_rate = app.add_subcommand("rate", "key-node activation rate m_k(t)");
    auto* sub_kc = app.add_subcommand("kc", "optimal key-node count");
    auto* sub_simulate = app.add_subcommand("simulate", "Monte Carlo validation");
    auto* sub_tables = app.add_subcommand("tables", "reproduce the reference tables");
    sub_tables->add_option("table", f.table, "which table (1-3)")
        ->required()
        ->check(CLI::Range(1, 3));
    for (auto* s : {sub_meanfield, sub_hitting, sub_rate, sub_kc, sub_simulate, sub_tables})
        s->fallthrough();
    app.require_subcommand(1);

    try {
        std::vector<const char*> argv;
        argv.reserve(args.size());
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "argument error: " << e.what() << '\n';
        return 2;
    }

    try {
        const RunConfig rc = assemble(f);
        if (sub_meanfield->parsed()) return cmd_meanfield(rc, out, err);
        if (sub_hitting->parsed()) return cmd_hitting(rc, out, err);
        if (sub_rate->parsed()) return cmd_rate(rc, out, err);
        if (sub_kc->parsed()) return cmd_kc(rc, out, err);
        if (sub_simulate->parsed()) return cmd_simulate(rc, out, err);
        if (sub_tables->parsed()) return cmd_tables(rc, f.table, out, err);
        err << "no subcommand given\n";
        return 2;
    } catch (const config_error& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const spec_error& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const unknown_preset& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const invalid_params& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const invalid_k& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const mode_error& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const domain_error& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const io_error& e) {
        err << "io error: " << e.what() << '\n';
        return 2;
    } catch (const unreachable_gamma& e) {
        err << e.what() << '\n';
        return 3;
    } catch (const error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        err << "unexpected failure: " << e.what() << '\n';
        return 4;
    }
}

} // namespace signet
