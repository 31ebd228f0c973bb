// Copyright 2026 The cvbell Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: single-point Bell factors, parameter sweeps,
// threshold curves, fit checks and analytic-vs-Fock oracle audits.
// All tabular output is plain CSV with 12-significant-digit formatting.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cvbell/cvbell.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAuditFail = 1;
constexpr int kExitDomain = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitIo = 4;

constexpr long kMaxRows = 100000;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

struct Defaults {
    std::optional<int> cutoff;
    double tol = cvbell::analytic::kDefaultTol;
    std::string output_dir;
};

Defaults load_config(const std::string& path) {
    Defaults d;
    if (path.empty()) return d;
    std::ifstream in(path);
    if (!in) throw cvbell::io_error("cannot read config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw cvbell::config_error("config line is not key=value: " + line);
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "cutoff")
            d.cutoff = std::stoi(val);
        else if (key == "tol")
            d.tol = std::stod(val);
        else if (key == "output_dir")
            d.output_dir = val;
        else
            throw cvbell::config_error("unknown config key: " + key);
    }
    return d;
}

std::filesystem::path resolve_output(const std::string& out, const Defaults& d) {
    std::filesystem::path p(out);
    if (p.is_absolute()) return p;
    const char* env = std::getenv("CVBELL_OUTPUT_DIR");
    if (!d.output_dir.empty()) return std::filesystem::path(d.output_dir) / p;
    if (env && *env) return std::filesystem::path(env) / p;
    return p;
}

std::ofstream open_output(const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw cvbell::io_error("cannot open output file: " + p.string());
    return out;
}

// Resolves the --r/--lambda and --R/--gamma flag alternatives.
struct PointFlags {
    double r = -1.0;
    double lambda = -1.0;
    double rA = 0.0, rB = 0.0;
    double gammaA = -1.0, gammaB = -1.0;

    cvbell::analytic::ChannelParams params() const {
        double a = gammaA >= 0.0 ? cvbell::threshold::R_from_gamma(gammaA) : rA;
        double b = gammaB >= 0.0 ? cvbell::threshold::R_from_gamma(gammaB) : rB;
        if (r >= 0.0 && lambda >= 0.0)
            throw cvbell::domain_error("give either --r or --lambda, not both");
        if (lambda >= 0.0) return cvbell::analytic::params_from_lambda(lambda, a, b);
        if (r >= 0.0) return cvbell::analytic::params_from_r(r, a, b);
        throw cvbell::domain_error("one of --r or --lambda is required");
    }
};

cvbell::threshold::Mode parse_mode(const std::string& s) {
    if (s == "symmetric") return cvbell::threshold::Mode::symmetric;
    if (s == "asymmetric") return cvbell::threshold::Mode::asymmetric;
    throw cvbell::domain_error("scenario must be 'symmetric' or 'asymmetric'");
}

cvbell::fock::FockCutoff cutoff_for(const Defaults& d, int flag_cutoff, double r) {
    if (flag_cutoff > 0) return cvbell::fock::FockCutoff(flag_cutoff);
    if (d.cutoff) return cvbell::fock::FockCutoff(*d.cutoff);
    return cvbell::fock::default_cutoff(r);
}

double fock_bmax(const cvbell::analytic::ChannelParams& p, cvbell::fock::FockCutoff c) {
    auto state = cvbell::fock::lossy_state_purified(p.lambda, p.rA, p.rB, c);
    auto spins = cvbell::fock::pseudo_spin_ops(c);
    return cvbell::nonlocality::horodecki_bmax(
               cvbell::fock::correlation_matrix(state, spins))
        .bmax;
}

void print_bell(const cvbell::analytic::BellResult& res) {
    std::cout << "alpha = " << fmt(res.alpha) << "\n"
              << "beta = " << fmt(res.beta) << "\n"
              << "bmax = " << fmt(res.bmax) << "\n"
              << "violated = " << (res.violated ? "true" : "false") << "\n"
              << "terms_used = " << res.terms_used << "\n"
              << "tail_estimate = " << fmt(res.tail_estimate) << "\n";
}

int cmd_bell(const PointFlags& pf, const Defaults& d, bool oracle, int flag_cutoff) {
    auto p = pf.params();
    auto res = cvbell::analytic::bmax_analytic(p, d.tol);
    print_bell(res);
    if (oracle) {
        auto c = cutoff_for(d, flag_cutoff, p.r);
        double fb = fock_bmax(p, c);
        std::cout << "oracle_bmax = " << fmt(fb) << "\n"
                  << "oracle_cutoff = " << c.dim << "\n"
                  << "discrepancy = " << fmt(std::abs(fb - res.bmax)) << "\n";
    }
    return kExitOk;
}

int cmd_sweep(const std::string& var, double start, double stop, double step,
              const std::string& scenario, double fixed_r, double fixed_R,
              const std::string& out, const Defaults& d) {
    if (!(start < stop) || !(step > 0.0))
        throw cvbell::config_error("sweep requires start < stop and step > 0");
    const long rows = static_cast<long>(std::llround((stop - start) / step)) + 1;
    if (rows > kMaxRows) throw cvbell::config_error("sweep exceeds 100000 rows");
    const auto mode = parse_mode(scenario);

    auto params_at = [&](double x) {
        double R, r;
        if (var == "r") {
            r = x;
            R = fixed_R;
        } else {
            r = fixed_r;
            R = var == "gamma" ? cvbell::threshold::R_from_gamma(x) : x;
        }
        return cvbell::threshold::at_damping({mode, r}, R);
    };
    if (var != "R" && var != "r" && var != "gamma")
        throw cvbell::config_error("sweep variable must be R, r or gamma");
    if (var != "r" && fixed_r < 0.0)
        throw cvbell::domain_error("--r (fixed squeezing) is required for this sweep");

    auto file = open_output(resolve_output(out, d));
    file << "r,lambda,R_A,R_B,alpha,beta,bmax,violated\n";
    for (long i = 0; i < rows; ++i) {
        const double x = start + i * step;
        if (x > stop + 1e-12) break;
        auto p = params_at(x);
        auto res = cvbell::analytic::bmax_analytic(p, d.tol);
        file << fmt(p.r) << ',' << fmt(p.lambda) << ',' << fmt(p.rA) << ','
             << fmt(p.rB) << ',' << fmt(res.alpha) << ',' << fmt(res.beta) << ','
             << fmt(res.bmax) << ',' << (res.violated ? 1 : 0) << "\n";
    }
    if (!file) throw cvbell::io_error("write failure: " + out);
    return kExitOk;
}

int cmd_threshold(const std::string& scenario, double r_start, double r_stop,
                  double r_step, const std::string& out, const Defaults& d,
                  double rtol) {
    if (r_start < 0.1) throw cvbell::domain_error("threshold curve needs r_start >= 0.1");
    if (!(r_start <= r_stop) || !(r_step > 0.0))
        throw cvbell::config_error("threshold requires r_start <= r_stop and r_step > 0");
    const auto mode = parse_mode(scenario);
    auto file = open_output(resolve_output(out, d));
    file << "r,r_max,fit,gamma_max,rel_fit_error\n";
    for (double r = r_start; r <= r_stop + 1e-12; r += r_step) {
        auto pt = cvbell::threshold::rmax({mode, r}, rtol, d.tol);
        const double rel = std::abs(pt.r_max - pt.fit_value) / pt.r_max;
        file << fmt(pt.r) << ',' << fmt(pt.r_max) << ',' << fmt(pt.fit_value) << ','
             << fmt(pt.gamma_max) << ',' << fmt(rel) << "\n";
    }
    if (!file) throw cvbell::io_error("write failure: " + out);
    return kExitOk;
}

int cmd_fit_check(const std::string& scenario, const Defaults& d) {
    std::vector<cvbell::threshold::Mode> modes;
    if (scenario == "both") {
        modes = {cvbell::threshold::Mode::symmetric, cvbell::threshold::Mode::asymmetric};
    } else {
        modes = {parse_mode(scenario)};
    }
    bool ok = true;
    std::cout << "scenario,r,r_max,fit,rel_error,within_10pct\n";
    for (auto mode : modes) {
        for (double r : {1.5, 2.0, 2.5, 3.0}) {
            auto pt = cvbell::threshold::rmax({mode, r}, 1e-4, d.tol);
            const double rel = std::abs(pt.r_max - pt.fit_value) / pt.r_max;
            const bool pass = rel <= 0.10;
            ok = ok && pass;
            std::cout << (mode == cvbell::threshold::Mode::symmetric ? "symmetric"
                                                                     : "asymmetric")
                      << ',' << fmt(r) << ',' << fmt(pt.r_max) << ',' << fmt(pt.fit_value)
                      << ',' << fmt(rel) << ',' << (pass ? 1 : 0) << "\n";
        }
    }
    return ok ? kExitOk : kExitAuditFail;
}

int cmd_oracle_audit(int cutoff_dim, double tol, double td_tol, const Defaults& d) {
    cvbell::fock::FockCutoff c(cutoff_dim);
    auto spins = cvbell::fock::pseudo_spin_ops(c);
    const std::vector<double> lambdas = {0.0, 0.3, std::tanh(1.0), std::tanh(1.5)};
    const std::vector<double> refls = {0.0, 0.25, 0.5, 0.75, 1.0};
    double worst_db = 0.0, worst_td = 0.0;
    std::string worst_db_at, worst_td_at;
    for (double lam : lambdas) {
        for (double rA : refls) {
            for (double rB : refls) {
                auto direct = cvbell::fock::lossy_state_direct(lam, rA, rB, c);
                auto purified = cvbell::fock::lossy_state_purified(lam, rA, rB, c);
                const double td = cvbell::fock::trace_distance(direct, purified);
                auto h = cvbell::nonlocality::horodecki_bmax(
                    cvbell::fock::correlation_matrix(purified, spins));
                auto an = cvbell::analytic::bmax_analytic(
                    cvbell::analytic::params_from_lambda(lam, rA, rB), d.tol);
                const double db = std::abs(h.bmax - an.bmax);
                const std::string at = "lambda=" + fmt(lam) + " rA=" + fmt(rA) +
                                       " rB=" + fmt(rB);
                if (td > worst_td) { worst_td = td; worst_td_at = at; }
                if (db > worst_db) { worst_db = db; worst_db_at = at; }
            }
        }
    }
    std::cout << "grid_points = " << lambdas.size() * refls.size() * refls.size() << "\n"
              << "worst_delta_bmax = " << fmt(worst_db) << " at " << worst_db_at << "\n"
              << "worst_trace_distance = " << fmt(worst_td) << " at " << worst_td_at
              << "\n";
    if (worst_db >= tol || worst_td >= td_tol) {
        std::cout << "audit = FAIL (tol " << fmt(tol) << ", trace tol " << fmt(td_tol)
                  << ")\n";
        return kExitAuditFail;
    }
    std::cout << "audit = PASS\n";
    return kExitOk;
}

int cmd_eve(const PointFlags& pf, const Defaults& d, int flag_cutoff) {
    auto p = pf.params();  // rB carries Eve-side reflectivity
    auto c = cutoff_for(d, flag_cutoff, p.r);
    auto state = cvbell::fock::eve_state(p.lambda, p.rB, c);
    auto spins = cvbell::fock::pseudo_spin_ops(c);
    auto cm = cvbell::fock::correlation_matrix(state, spins);
    auto h = cvbell::nonlocality::horodecki_bmax(cm);
    std::cout << "bmax = " << fmt(h.bmax) << "\n"
              << "u = " << fmt(h.u) << "\n"
              << "u_prime = " << fmt(h.u_prime) << "\n"
              << "violated = " << (h.bmax > 2.0 ? "true" : "false") << "\n"
              << "cutoff = " << c.dim << "\n"
              << "trace_deficit = " << fmt(state.trace_deficit) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CHSH nonlocality of the two-mode squeezed vacuum in lossy channels"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key=value config file (cutoff, tol, output_dir)");

    PointFlags pf;
    double tol_flag = -1.0;
    int cutoff_flag = 0;
    bool oracle = false;

    auto add_point_flags = [&](CLI::App* sub) {
        sub->add_option("--r", pf.r, "squeezing parameter r");
        sub->add_option("--lambda", pf.lambda, "lambda = tanh r (alternative to --r)");
        sub->add_option("--R", pf.rA, "damping R_A");
        sub->add_option("--R2", pf.rB, "damping R_B");
        sub->add_option("--gamma", pf.gammaA, "absorption coefficient for arm A (alternative to --R)");
        sub->add_option("--gamma2", pf.gammaB, "absorption coefficient for arm B (alternative to --R2)");
        sub->add_option("--tol", tol_flag, "series tolerance");
        sub->add_option("--cutoff", cutoff_flag, "Fock cutoff for oracle computations");
    };

    auto* bell = app.add_subcommand("bell", "Bell factor at one parameter point");
    add_point_flags(bell);
    bell->add_flag("--oracle", oracle, "also run the Fock-space path and print the discrepancy");

    auto* sweep = app.add_subcommand("sweep", "CSV sweep of the Bell factor");
    std::string sweep_var = "R", sweep_scenario = "symmetric", sweep_out;
    double sweep_start = 0.0, sweep_stop = 0.0, sweep_step = 0.0;
    double sweep_r = -1.0, sweep_R = 0.0;
    sweep->add_option("--var", sweep_var, "sweep variable: R, r or gamma");
    sweep->add_option("--start", sweep_start)->required();
    sweep->add_option("--stop", sweep_stop)->required();
    sweep->add_option("--step", sweep_step)->required();
    sweep->add_option("--scenario", sweep_scenario, "symmetric or asymmetric");
    sweep->add_option("--r", sweep_r, "fixed squeezing (for R/gamma sweeps)");
    sweep->add_option("--R", sweep_R, "fixed damping (for r sweeps)");
    sweep->add_option("--out", sweep_out, "output CSV path")->required();
    sweep->add_option("--tol", tol_flag, "series tolerance");

    auto* thr = app.add_subcommand("threshold", "CSV threshold curve R_max(r)");
    std::string thr_scenario = "symmetric", thr_out;
    double thr_start = 0.5, thr_stop = 3.0, thr_step = 0.25, thr_rtol = 1e-4;
    thr->add_option("--scenario", thr_scenario);
    thr->add_option("--r-start", thr_start);
    thr->add_option("--r-stop", thr_stop);
    thr->add_option("--r-step", thr_step);
    thr->add_option("--rtol", thr_rtol, "bisection tolerance on R");
    thr->add_option("--out", thr_out, "output CSV path")->required();
    thr->add_option("--tol", tol_flag, "series tolerance");

    auto* fit = app.add_subcommand("fit-check", "compare solver thresholds with the exponential fits");
    std::string fit_scenario = "both";
    fit->add_option("--scenario", fit_scenario, "symmetric, asymmetric or both");
    fit->add_option("--tol", tol_flag, "series tolerance");

    auto* audit = app.add_subcommand("oracle-audit", "analytic-vs-Fock equivalence over a parameter grid");
    int audit_cutoff = 40;
    double audit_tol = 1e-6, audit_td_tol = 1e-10;
    audit->add_option("--cutoff", audit_cutoff, "Fock cutoff (even)");
    audit->add_option("--tol", audit_tol, "Bell-factor tolerance");
    audit->add_option("--td-tol", audit_td_tol, "trace-distance tolerance");

    auto* eve = app.add_subcommand("eve", "Bell factor of the Alice-Eve state (losses on Bob's arm)");
    add_point_flags(eve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitDomain;
    }

    try {
        Defaults defaults = load_config(config_path);
        if (tol_flag > 0.0) defaults.tol = tol_flag;
        if (bell->parsed()) return cmd_bell(pf, defaults, oracle, cutoff_flag);
        if (sweep->parsed())
            return cmd_sweep(sweep_var, sweep_start, sweep_stop, sweep_step,
                             sweep_scenario, sweep_r, sweep_R, sweep_out, defaults);
        if (thr->parsed())
            return cmd_threshold(thr_scenario, thr_start, thr_stop, thr_step, thr_out,
                                 defaults, thr_rtol);
        if (fit->parsed()) return cmd_fit_check(fit_scenario, defaults);
        if (audit->parsed())
            return cmd_oracle_audit(audit_cutoff, audit_tol, audit_td_tol, defaults);
        if (eve->parsed()) return cmd_eve(pf, defaults, cutoff_flag);
    } catch (const cvbell::convergence_error& e) {
        std::cerr << "convergence error: " << e.what()
                  << " (partial sum " << e.partial_sum() << " after " << e.terms()
                  << " terms)\n";
        return kExitConvergence;
    } catch (const cvbell::bracketing_error& e) {
        std::cerr << "bracketing error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const cvbell::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitOk;
}
