#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "output.hpp"
#include "sp4/cyclic.hpp"
#include "sp4/harmonic.hpp"
#include "sp4/higgs.hpp"
#include "sp4/liealg.hpp"
#include "sp4/moduli.hpp"
#include "sp4/solver.hpp"

using namespace sp4;
using cli::Record;
using cli::RunConfig;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNoConvergence = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const RunConfig& c, const std::vector<Record>& recs, const std::string& default_format)
{
    const std::string format = c.format.empty() ? default_format : c.format;
    const std::string body = format == "csv" ? cli::to_csv(recs) : cli::to_text(recs);
    if (c.file.empty()) {
        std::cout << body;
        return;
    }
    const std::string path = cli::resolve_output(c, c.file);
    std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << body;
}

higgs::HiggsData make_higgs(const RunConfig& c)
{
    higgs::HiggsData h = higgs::make_constant(c.mu, c.nu, c.q2, c.genus, c.degree);
    if (c.preset == "mu_cos") {
        const cplx mu = c.mu;
        h.mu = Field::sample(c.n, [mu](double s, double) { return mu * (1.0 + 0.1 * std::cos(2.0 * std::numbers::pi * s)); });
    }
    return h;
}

solver::TorusDomain make_domain(const RunConfig& c)
{
    solver::TorusDomain d;
    d.tau = c.tau;
    d.n = c.n;
    d.area = c.area;
    return d;
}

solver::SolveOptions make_options(const RunConfig& c)
{
    solver::SolveOptions o;
    o.mode = c.full ? solver::Mode::full : solver::Mode::diagonal;
    o.init = c.init == "random" ? solver::InitKind::random
             : c.init == "nondiagonal" ? solver::InitKind::nondiagonal
                                       : solver::InitKind::zero;
    o.seed = c.seed;
    o.tol = c.tol;
    o.max_iter = c.max_iter;
    o.background = c.background == "flat" ? solver::BackgroundKind::flat : solver::BackgroundKind::degree;
    return o;
}

void add_report(Record& r, const RunConfig& c, const solver::SolveReport& rep)
{
    r.add("mode", c.full ? "full" : "diagonal")
        .add("n", c.n)
        .add("tau", c.tau)
        .add("area", c.area)
        .add("background", c.background)
        .add("init", c.init)
        .add("iterations", rep.iterations)
        .add("relaxation_sweeps", rep.relaxation_sweeps)
        .add("converged", rep.converged)
        .add("residual_sup", rep.residual_sup)
        .add("residual_l2", rep.residual_l2);
    if (c.full) r.add("offdiag_sup", rep.offdiag_sup);
    r.add("message", rep.message);
}

void dump_fields(const RunConfig& c, const solver::TorusDomain& dom, const solver::MetricField& m)
{
    std::vector<Record> rows;
    const double a = dom.scale();
    for (int j = 0; j < dom.n; ++j)
        for (int i = 0; i < dom.n; ++i) {
            const std::size_t k = i + std::size_t(dom.n) * j;
            const cplx z = a * (double(i) / dom.n + dom.tau * (double(j) / dom.n));
            const Mat2 H = m.block(k);
            Record r;
            r.add("node", static_cast<long long>(k))
                .add("x", z.real())
                .add("y", z.imag())
                .add("u1", std::log(H(0, 0).real()))
                .add("u2", std::log(H(1, 1).real()));
            if (m.mode == solver::Mode::full)
                r.add("h11", H(0, 0).real()).add("h12_re", H(0, 1).real()).add("h12_im", H(0, 1).imag()).add("h22", H(1, 1).real());
            rows.push_back(std::move(r));
        }
    const std::string path = cli::resolve_output(c, c.dump_fields);
    std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << cli::to_csv(rows);
}

int cmd_algebra(const RunConfig& c, const std::string& what)
{
    if (what == "dump") {
        std::cout << liealg::dump_table();
        return kOk;
    }
    std::vector<Record> recs;
    bool ok = true;
    for (const auto& chk : liealg::invariant_suite()) {
        Record r;
        r.add("check", chk.name).add("defect", chk.defect).add("pass", chk.pass);
        recs.push_back(std::move(r));
        ok = ok && chk.pass;
    }
    Record s;
    s.add("status", ok ? "ok" : "fail");
    recs.push_back(std::move(s));
    emit(c, recs, "text");
    return ok ? kOk : kNoConvergence;
}

int cmd_higgs(const RunConfig& c)
{
    if (c.preset != "constant") throw UsageError("higgs invariants takes constant data only");
    const higgs::HiggsData h = higgs::make_constant(c.mu, c.nu, c.q2, c.genus, c.degree);
    const auto inv = higgs::hitchin_invariants(higgs::build_sl4(h));
    const auto st = higgs::stability_flag(h);
    const auto cay = higgs::cayley_partner(h);
    const auto nf = higgs::normal_form(h);
    Record r;
    r.add("mu", c.mu).add("nu", c.nu).add("q2", c.q2).add("genus", c.genus).add("degree", c.degree);
    r.add("p1", inv.p1.at(0)).add("p2", inv.p2.at(0)).add("odd_trace_sup", inv.odd_trace_sup);
    r.add("stability", st.flag == higgs::Stability::stable ? "stable" : "flagged").add("stability_note", st.note);
    r.add("psi11", cay.psi[0](0, 0)).add("psi12", cay.psi[0](0, 1)).add("psi21", cay.psi[0](1, 0)).add("psi22", cay.psi[0](1, 1));
    r.add("zeta4_fixed", c.q2 == cplx(0.0) ? (higgs::zeta4_fixed_point_check(h) ? "true" : "false") : "n/a");
    r.add("normal_form_mu", nf.mu.at(0)).add("normal_form_nu", nf.nu.at(0));
    emit(c, {r}, "text");
    return kOk;
}

int cmd_solve(const RunConfig& c)
{
    const auto h = make_higgs(c);
    const auto dom = make_domain(c);
    const auto opts = make_options(c);
    const auto res = solver::solve(h, dom, opts);
    Record r;
    add_report(r, c, res.report);
    if (c.preset == "constant" && c.q2 == cplx(0.0)) {
        const auto o = solver::constant_oracle(c.mu, c.nu, dom, opts.background, c.genus, c.degree);
        double dev = 0.0;
        for (std::size_t k = 0; k < dom.nodes(); ++k) {
            const Mat2 H = res.metric.block(k);
            dev = std::max({dev, std::abs(std::log(H(0, 0).real()) - o.u1), std::abs(std::log(H(1, 1).real()) - o.u2)});
        }
        r.add("oracle_u1", o.u1).add("oracle_u2", o.u2).add("oracle_max_deviation", dev);
    }
    if (!c.dump_fields.empty()) dump_fields(c, dom, res.metric);
    emit(c, {r}, "text");
    return res.report.converged ? kOk : kNoConvergence;
}

int cmd_hopf(const RunConfig& c)
{
    const auto h = make_higgs(c);
    const auto dom = make_domain(c);
    dom.validate();
    const Field q = harmonic::hopf(h, solver::MetricField::identity(solver::Mode::diagonal, dom.n));
    double dev = 0.0;
    for (std::size_t k = 0; k < q.v.size(); ++k) dev = std::max(dev, std::abs(q.v[k] - 4.0 * h.q2.at(k)));
    Record r;
    r.add("hopf_node0", q.at(0)).add("hopf_sup", q.sup()).add("hopf_minus_4q2_sup", dev).add("branched_minimal", q.sup() == 0.0);
    r.add("immersion", harmonic::immersion_check(h));
    emit(c, {r}, "text");
    return kOk;
}

int cmd_energy(const RunConfig& c)
{
    const auto h = make_higgs(c);
    const auto dom = make_domain(c);
    const auto res = solver::solve(h, dom, make_options(c));
    Record r;
    add_report(r, c, res.report);
    r.add("energy", harmonic::energy(h, res.metric, dom));
    emit(c, {r}, "text");
    return res.report.converged ? kOk : kNoConvergence;
}

int cmd_holonomy(const RunConfig& c)
{
    if (c.background != "flat") throw UsageError("holonomy needs the flat background");
    const auto h = make_higgs(c);
    const auto dom = make_domain(c);
    const auto res = solver::solve(h, dom, make_options(c));
    Record r;
    add_report(r, c, res.report);
    if (!res.report.converged) {
        emit(c, {r}, "text");
        return kNoConvergence;
    }
    const auto hol = harmonic::holonomy(h, res.metric, dom);
    r.add("commutator_defect", hol.commutator_defect)
        .add("symplectic_defect", hol.symplectic_defect)
        .add("det_defect", hol.det_defect)
        .add("reality_defect", hol.reality_defect)
        .add("plaquette_defect", hol.plaquette)
        .add("trace_Ma", hol.Ma.trace())
        .add("trace_Mb", hol.Mb.trace());
    emit(c, {r}, "text");
    return kOk;
}

int cmd_rigidity(const RunConfig& c)
{
    const auto frame = higgs::to_frame(higgs::make_constant(c.mu, c.nu, 0.0, c.genus, c.degree));
    const auto zeroed = c.zero_root == "a2" ? cyclic::alpha2() : cyclic::alpha1();
    const auto res = cyclic::rigidity_nullspace(frame, zeroed, c.allow_degenerate);
    std::ostringstream sv;
    for (std::size_t i = 0; i < res.singular_values.size(); ++i)
        sv << (i ? " " : "") << cli::fmt(res.singular_values[i]);
    Record r;
    r.add("mu", c.mu).add("nu", c.nu).add("zeroed", c.zero_root).add("hypothesis_met", res.hypothesis_met);
    r.add("dimension", res.dimension).add("singular_values", sv.str());
    emit(c, {r}, "text");
    return kOk;
}

int cmd_moduli(const RunConfig& c)
{
    const auto cen = moduli::component_census(c.genus);
    std::vector<Record> recs;
    Record r;
    r.add("genus", cen.genus)
        .add("maximal_count", static_cast<long long>(cen.maximal_count))
        .add("smooth_count", static_cast<long long>(cen.smooth_count))
        .add("hitchin_count", static_cast<long long>(cen.hitchin_count))
        .add("w1_nonzero_count", static_cast<long long>(cen.w1_nonzero_count))
        .add("gothen_degree_min_exclusive", cen.gothen_degrees.first)
        .add("gothen_degree_max", cen.gothen_degrees.second)
        .add("toledo_min", cen.toledo_range.first)
        .add("toledo_max", cen.toledo_range.second)
        .add("identity_holds", cen.identity_holds);
    recs.push_back(std::move(r));
    const int lo = c.degree_set ? c.degree : c.genus - 1;
    const int hi = c.degree_set ? c.degree : 3 * c.genus - 3;
    for (int d = lo; d <= hi; ++d) {
        const auto rr = moduli::rr_dims(c.genus, d);
        const auto br = moduli::dimension_breakdown(c.genus, d);
        Record row;
        row.add("genus", c.genus).add("degree", d);
        row.add("a", rr.a ? std::to_string(*rr.a) : std::string("N-dependent")).add("b", rr.b);
        if (rr.a) {
            const auto fm = moduli::fiber_model(*rr.a, rr.b);
            row.add("fiber", fm.description).add("fiber_dimension", fm.dimension);
        } else {
            row.add("fiber", "N-dependent").add("fiber_dimension", "n/a");
        }
        row.add("component_dimension", br.in_range ? std::to_string(br.total) : std::string("n/a"))
            .add("target", br.target)
            .add("dimension_check", br.in_range ? (br.total == br.target ? "true" : "false") : "n/a");
        recs.push_back(std::move(row));
    }
    emit(c, recs, "csv");
    return kOk;
}

int run(const RunConfig& c, const std::string& sub = "")
{
    cli::validate(c);
    if (c.command == "algebra") return cmd_algebra(c, sub.empty() ? "check" : sub);
    if (c.command == "algebra-check") return cmd_algebra(c, "check");
    if (c.command == "algebra-dump") return cmd_algebra(c, "dump");
    if (c.command == "higgs" || c.command == "higgs-invariants") return cmd_higgs(c);
    if (c.command == "solve") return cmd_solve(c);
    if (c.command == "hopf") return cmd_hopf(c);
    if (c.command == "energy") return cmd_energy(c);
    if (c.command == "holonomy") return cmd_holonomy(c);
    if (c.command == "rigidity") return cmd_rigidity(c);
    if (c.command == "moduli") return cmd_moduli(c);
    throw UsageError("unknown command '" + c.command + "'");
}

// Command-line values, applied over the config file.
struct Overrides {
    std::string config;
    std::map<std::string, std::string> values;
    std::vector<std::pair<CLI::Option*, std::string>> opts;
    CLI::Option* full = nullptr;
    CLI::Option* degenerate = nullptr;

    CLI::Option* option(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help)
    {
        opts.emplace_back(app->add_option(flag, values[key], help), key);
        return opts.back().first;
    }

    RunConfig build(RunConfig base) const
    {
        RunConfig c = config.empty() ? base : cli::load_config(config, base);
        for (const auto& [opt, key] : opts) {
            if (opt->count() == 0) continue;
            const auto dot = key.find('.');
            cli::set_value(c, key.substr(0, dot), key.substr(dot + 1), values.at(key));
        }
        if (full && full->count()) c.full = true;
        if (degenerate && degenerate->count()) c.allow_degenerate = true;
        return c;
    }
};

void output_flags(CLI::App* s, Overrides& o)
{
    s->add_option("--config", o.config, "key=value config file");
    o.option(s, "--out", "output.file", "write the report to this file (relative to the output directory)");
    o.option(s, "--output-dir", "output.dir", "output directory (SP4_OUTPUT_DIR takes precedence)");
    o.option(s, "--format", "output.format", "text or csv");
}

void higgs_flags(CLI::App* s, Overrides& o)
{
    o.option(s, "--mu", "higgs.mu", "mu as a, a+bi or re,im");
    o.option(s, "--nu", "higgs.nu", "nu as a, a+bi or re,im");
    o.option(s, "--q2", "higgs.q2", "quadratic differential q2");
    o.option(s, "--genus,-g", "higgs.genus", "genus");
    o.option(s, "--degree,-d", "higgs.degree", "degree of N");
}

void solver_flags(CLI::App* s, Overrides& o)
{
    higgs_flags(s, o);
    o.option(s, "--preset", "higgs.preset", "constant or mu_cos");
    o.option(s, "--tau", "grid.tau", "torus modulus re,im");
    o.option(s, "--n", "grid.n", "grid points per side");
    o.option(s, "--area", "grid.area", "torus area");
    o.option(s, "--tol", "solver.tol", "residual tolerance");
    o.option(s, "--max-iter", "solver.max_iter", "Newton iteration limit");
    o.option(s, "--init", "solver.init", "zero, random or nondiagonal");
    o.option(s, "--background", "solver.background", "flat or degree");
    o.option(s, "--seed", "run.seed", "seed for random initial data");
    o.option(s, "--dump-fields", "output.dump_fields", "write the metric as CSV");
    o.full = s->add_flag("--full", "solve for a full Hermitian metric");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sp(4) Lie theory, cyclic Higgs bundles, Hitchin equations and moduli counts"};
    app.require_subcommand(1);

    std::map<std::string, Overrides> ov;
    std::map<std::string, CLI::App*> subs;
    auto make = [&](const std::string& name, const std::string& help) {
        subs[name] = app.add_subcommand(name, help);
        return subs[name];
    };

    auto* alg = make("algebra", "root data, involutions and gradings");
    alg->require_subcommand(1);
    auto* alg_check = alg->add_subcommand("check", "run the invariant suite");
    auto* alg_dump = alg->add_subcommand("dump", "print basis, bracket and involution tables");
    output_flags(alg_check, ov["algebra-check"]);
    output_flags(alg_dump, ov["algebra-dump"]);

    auto* hg = make("higgs", "Higgs field invariants");
    hg->require_subcommand(1);
    auto* hg_inv = hg->add_subcommand("invariants", "Hitchin invariants, stability and Cayley partner");
    output_flags(hg_inv, ov["higgs-invariants"]);
    higgs_flags(hg_inv, ov["higgs-invariants"]);

    for (const char* name : {"solve", "hopf", "energy", "holonomy"}) {
        auto* s = make(name, std::string(name) + " on the flat torus");
        output_flags(s, ov[name]);
        solver_flags(s, ov[name]);
    }

    auto* rig = make("rigidity", "nullspace of the pointwise rigidity system");
    output_flags(rig, ov["rigidity"]);
    ov["rigidity"].option(rig, "--mu", "higgs.mu", "highest-root component");
    ov["rigidity"].option(rig, "--nu", "higgs.nu", "-alpha2 component");
    ov["rigidity"].option(rig, "--zero-root", "run.zero_root", "a1 or a2");
    ov["rigidity"].degenerate = rig->add_flag("--allow-degenerate", "accept frames with a vanishing simple-root component");

    auto* mod = make("moduli", "component census and dimension tables");
    output_flags(mod, ov["moduli"]);
    ov["moduli"].option(mod, "--genus,-g", "higgs.genus", "genus")->required();
    ov["moduli"].option(mod, "--degree,-d", "higgs.degree", "single degree");

    auto* runc = make("run", "execute the command named in a config file");
    std::string run_config;
    runc->add_option("config", run_config, "config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (runc->parsed()) return run(cli::load_config(run_config));
        std::string key;
        RunConfig base;
        if (alg->parsed()) {
            key = alg_check->parsed() ? "algebra-check" : "algebra-dump";
            base.command = key;
        } else if (hg->parsed()) {
            key = "higgs-invariants";
            base.command = key;
        } else {
            for (const auto& [name, s] : subs)
                if (s->parsed()) key = name;
            base.command = key;
            if (key == "holonomy") base.background = "flat";
        }
        RunConfig c = ov.at(key).build(base);
        c.command = key;
        return run(c);
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error (line " << e.line << ", " << e.field << "): " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNoConvergence;
    }
}
