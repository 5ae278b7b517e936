#include "cli.hpp"

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "duosim/audit.hpp"
#include "duosim/bargaining.hpp"
#include "duosim/errors.hpp"
#include "duosim/trace.hpp"

namespace duosim {
namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct RunFlags {
    std::string config_path;
    std::string scheme, loss, format, out;
    int dim = 0, rounds = 0, warmup = 0, n_per_firm = 0, max_inner = 0;
    std::uint64_t seed = 0;
    double qhmax = 0, asymmetry = 0, skew = 0, tolerance = 0, tilde_b = 0;
};

// Config file first, then only the flags the user actually passed.
RunConfig resolve_config(const CLI::App& cmd, const RunFlags& f) {
    RunConfig cfg;
    if (!f.config_path.empty()) cfg = load_config_file(f.config_path, cfg);
    auto given = [&](const char* name) { return cmd.get_option(name)->count() > 0; };
    if (given("--scheme")) cfg.scheme = parse_scheme(f.scheme);
    if (given("--loss")) cfg.loss = parse_loss_kind(f.loss);
    if (given("--format")) cfg.format = parse_trace_format(f.format);
    if (given("--out")) cfg.out = f.out;
    if (given("--dim")) cfg.dim = f.dim;
    if (given("--rounds")) cfg.rounds = f.rounds;
    if (given("--seed")) cfg.seed = f.seed;
    if (given("--qhmax")) cfg.target_q_h_max = f.qhmax;
    if (given("--asymmetry")) cfg.asymmetry = f.asymmetry;
    if (given("--warmup")) cfg.warmup = f.warmup;
    if (given("--n-per-firm")) cfg.n_per_firm = f.n_per_firm;
    if (given("--skew")) cfg.skew = f.skew;
    if (given("--tolerance")) cfg.tolerance = f.tolerance;
    if (given("--tilde-b")) cfg.tilde_b = f.tilde_b;
    if (given("--max-inner")) cfg.max_inner = f.max_inner;
    if (cfg.out.empty()) throw ConfigError("--out is required (flag or config key 'out')");
    cfg.validate();
    return cfg;
}

int report_audit(const AuditReport& rep, std::ostream& out, std::ostream& err) {
    out << rep.format();
    if (rep.passed()) return kExitOk;
    for (const CheckResult& c : rep.checks) {
        if (c.status == CheckStatus::fail) {
            err << "audit failed: " << c.name;
            if (c.failing_round >= 0) err << " at round " << c.failing_round;
            err << '\n';
        }
    }
    return kExitAudit;
}

int cmd_run(const CLI::App& cmd, const RunFlags& flags, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = resolve_config(cmd, flags);
    const auto model = build_model(cfg);
    Trace trace;
    try {
        trace = execute(cfg);
    } catch (const DefectionDetected& e) {
        trace.config = cfg;
        trace.records = e.records();
        summarise(trace);
        trace.summary.error = e.what();
        write_trace(trace, cfg.out, cfg.format);
        err << "invariant violated: " << e.what() << " (partial trace in " << cfg.out << ")\n";
        return kExitAudit;
    }
    write_trace(trace, cfg.out, cfg.format);

    const TraceSummary& s = trace.summary;
    out << "scheme " << to_string(cfg.scheme) << ", " << trace.records.size() << " records -> "
        << cfg.out << '\n'
        << "nash target q_l* " << num(s.target.q_low) << ", q_h* " << num(s.target.q_high)
        << ", rho* " << num(s.target.ratio) << '\n'
        << "final gaps q_h " << num(s.q_h_gap) << ", rho " << num(s.rho_gap) << ", nash "
        << num(s.nash_gap) << '\n'
        << "defections low " << s.defections_l << ", high " << s.defections_h << '\n';
    return report_audit(audit_trace(trace, model.get()), out, err);
}

int cmd_audit(const std::string& path, std::ostream& out, std::ostream& err) {
    Trace trace;
    try {
        trace = read_trace(path);
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitConfig;
    }
    std::shared_ptr<const LossModel> model;
    try {
        model = build_model(trace.config);
    } catch (const std::exception& e) {
        err << "note: cannot rebuild the loss model (" << e.what() << "); model checks skipped\n";
    }
    return report_audit(audit_trace(trace, model.get()), out, err);
}

int cmd_nash(double ql0, double qh0, double qhmax, std::ostream& out) {
    const DisagreementPoint d(QualityPair(ql0, qh0));
    const NashSolution s = solve_nash(d, qhmax);
    out << "q_l* " << num(s.q_low) << '\n'
        << "q_h* " << num(s.q_high) << '\n'
        << "rho* " << num(s.ratio) << '\n'
        << "objective " << num(s.objective) << '\n'
        << "u_l0 " << num(s.u_low0) << '\n'
        << "u_h0 " << num(s.u_high0) << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-firm collaborative learning simulator", "duosim"};
    app.require_subcommand(1);

    RunFlags rf;
    CLI::App* run = app.add_subcommand("run", "Run a collaboration scheme and write its trace");
    run->add_option("--config", rf.config_path, "JSON file with run settings");
    run->add_option("--scheme", rf.scheme,
                    "complete | one-sided-high | one-sided-low | defection-free");
    run->add_option("--loss", rf.loss, "quadratic | logistic");
    run->add_option("--dim", rf.dim, "Parameter dimension");
    run->add_option("--rounds", rf.rounds, "Number of rounds T");
    run->add_option("--seed", rf.seed, "Instance seed");
    run->add_option("--qhmax", rf.qhmax, "Best attainable quality (1 - optimum loss)");
    run->add_option("--asymmetry", rf.asymmetry, "Quadratic: gap between per-firm minima");
    run->add_option("--warmup", rf.warmup, "Extra steps for the high firm before round 0");
    run->add_option("--n-per-firm", rf.n_per_firm, "Logistic: samples per firm");
    run->add_option("--skew", rf.skew, "Logistic: class-0 share of the low firm");
    run->add_option("--tolerance", rf.tolerance, "Revenue drop counted as defection");
    run->add_option("--tilde-b", rf.tilde_b, "Growth cap on q_h (default: computed)");
    run->add_option("--max-inner", rf.max_inner, "Low-firm inner steps per round");
    run->add_option("--out", rf.out, "Trace output path");
    run->add_option("--format", rf.format, "csv | json");

    std::string audit_path;
    CLI::App* audit = app.add_subcommand("audit", "Check a trace against the scheme guarantees");
    audit->add_option("path", audit_path, "Trace file (csv or json)")->required();

    double ql0 = 0, qh0 = 0, qhmax = 1.0;
    CLI::App* nash = app.add_subcommand("nash", "Solve the bargaining problem");
    nash->add_option("--ql0", ql0, "Low firm's disagreement quality")->required();
    nash->add_option("--qh0", qh0, "High firm's disagreement quality")->required();
    nash->add_option("--qhmax", qhmax, "Best attainable quality")->capture_default_str();

    double step = 1e-3, bmax = 2.0;
    CLI::App* tb = app.add_subcommand("tilde-b", "Compute the growth cap on q_h");
    tb->add_option("--step", step, "Ratio grid step")->capture_default_str();
    tb->add_option("--bmax", bmax, "Search ceiling for b")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(*run, rf, out, err);
        if (audit->parsed()) return cmd_audit(audit_path, out, err);
        if (nash->parsed()) return cmd_nash(ql0, qh0, qhmax, out);
        if (tb->parsed()) {
            const TildeB r = compute_tilde_b(step, bmax);
            out << "tilde_b " << num(r.tilde_b) << '\n' << "argmin_rho " << num(r.argmin_rho) << '\n';
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidTarget& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InfeasibleDisagreement& e) {
        err << "infeasible: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitAudit;
    }
    return kExitConfig;
}

}  // namespace duosim
