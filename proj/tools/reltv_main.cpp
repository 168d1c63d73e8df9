// reltv: command-line front end for the relative state-sum library.
//
// Subcommands: tv, sixj, geometry, verify, asymptotics.  Exit codes:
//   0 success, 1 usage error, 2 input error, 3 numeric-domain error,
//   4 non-convergence (or failed verification checks).

#include <array>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reltv/harness.hpp"
#include "reltv/potential.hpp"
#include "reltv/quantum.hpp"
#include "reltv/sixj.hpp"
#include "reltv/statesum.hpp"

namespace {

using nlohmann::json;

struct GlobalOpts {
    std::string precision = "double";
    int threads = 1;
    unsigned long seed = 12345;
};

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw reltv::InputError(std::string("cannot parse ") + what + ": '" + item + "'");
        }
    }
    if (out.empty()) throw reltv::InputError(std::string("empty list for ") + what);
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw reltv::InputError(std::string("cannot parse ") + what + ": '" + item + "'");
        }
    }
    if (out.empty()) throw reltv::InputError(std::string("empty list for ") + what);
    return out;
}

reltv::Root parse_root(const std::string& name) {
    if (name == "e2pir" || name == "2pir") return reltv::Root::E2PIR;
    if (name == "epir" || name == "pir") return reltv::Root::EPIR;
    throw reltv::InputError("unknown root '" + name + "' (expected e2pir or epir)");
}

reltv::Precision parse_precision(const std::string& name) {
    if (name == "double") return reltv::Precision::Double;
    if (name == "extended") return reltv::Precision::Extended;
    throw reltv::InputError("unknown precision '" + name + "'");
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Reproducibility echo included in every output.
std::string invocation_line(const std::string& sub, const GlobalOpts& g,
                            const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ostringstream os;
    os << "reltv " << sub << " schema_version=1 precision=" << g.precision
       << " threads=" << g.threads << " seed=" << g.seed;
    for (const auto& [k, v] : kv) os << " " << k << "=" << v;
    return os.str();
}

int cmd_tv(const GlobalOpts& g, const std::string& input, int r,
           const std::string& root_name, const std::string& colors,
           const std::string& parity_name, const std::string& summation_name,
           int parallel_width, bool csv, bool timings) {
    const auto tri = reltv::Triangulation::from_file(input);
    std::vector<int> b(tri.num_edges(), 0);
    if (!colors.empty()) b = parse_int_list(colors, "--b");
    reltv::QuantumContext ctx(r, parse_root(root_name), parse_precision(g.precision));
    reltv::StateSumOptions opts;
    opts.parity = (parity_name == "even") ? reltv::Parity::EvenOnly : reltv::Parity::All;
    opts.summation = (summation_name == "kahan") ? reltv::Summation::Compensated
                                                 : reltv::Summation::Plain;
    opts.parallel_width = parallel_width;
    opts.threads = g.threads;
    opts.record_seconds = timings;
    const auto res = reltv::relative_tv(tri, b, ctx, opts);

    std::ostringstream bs;
    for (std::size_t i = 0; i < b.size(); ++i) bs << (i ? "," : "") << b[i];
    const std::string header = invocation_line(
        "tv", g,
        {{"input", input},
         {"r", std::to_string(r)},
         {"root", root_name},
         {"b", bs.str()},
         {"parity", parity_name},
         {"summation", summation_name},
         {"parallel_width", std::to_string(parallel_width)}});
    const double scaled = res.zero ? res.log_abs : 2.0 * 3.14159265358979323846 / r * res.log_abs;

    if (csv) {
        std::cout << "# " << header << "\n";
        std::cout << "r,re,im,abs,log_abs,scaled_log,colorings,seconds\n";
        std::cout << r << "," << fmt(res.value.real()) << "," << fmt(res.value.imag())
                  << "," << fmt(std::abs(res.value)) << "," << fmt(res.log_abs) << ","
                  << fmt(scaled) << "," << res.num_colorings << "," << fmt(res.seconds)
                  << "\n";
    } else {
        json out;
        out["schema_version"] = 1;
        out["invocation"] = header;
        out["r"] = r;
        out["value"] = {res.value.real(), res.value.imag()};
        out["abs"] = std::abs(res.value);
        out["log_abs"] = res.log_abs;
        out["scaled_log"] = scaled;
        out["colorings"] = res.num_colorings;
        out["zero"] = res.zero;
        out["seconds"] = res.seconds;
        std::cout << out.dump(2) << "\n";
    }
    return 0;
}

int cmd_sixj(const GlobalOpts& g, int r, const std::string& root_name,
             const std::string& tuple_text, const std::string& method) {
    const auto vals = parse_int_list(tuple_text, "--tuple");
    if (vals.size() != 6) throw reltv::InputError("--tuple needs exactly 6 entries");
    std::array<int, 6> a{};
    std::copy(vals.begin(), vals.end(), a.begin());
    reltv::QuantumContext ctx(r, parse_root(root_name), parse_precision(g.precision));

    json out;
    out["schema_version"] = 1;
    out["invocation"] = invocation_line("sixj", g,
                                        {{"r", std::to_string(r)},
                                         {"root", root_name},
                                         {"tuple", tuple_text},
                                         {"method", method}});
    out["admissible"] = reltv::is_admissible_tuple(a, r);
    out["hyperideal"] = reltv::is_hyperideal_type(a, r);
    reltv::cplx v;
    if (method == "potential")
        v = reltv::sixj_via_potential(a, ctx);
    else
        v = reltv::sixj_direct(a, ctx);
    out["value"] = {v.real(), v.imag()};
    out["abs"] = std::abs(v);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_geometry(const GlobalOpts& g, const std::string& input, const std::string& cone) {
    const auto tri = reltv::Triangulation::from_file(input);
    std::vector<double> target(tri.num_edges(), 0.0);
    if (!cone.empty()) target = parse_double_list(cone, "--cone");
    if (static_cast<int>(target.size()) != tri.num_edges())
        throw reltv::InputError("--cone needs one value per edge");
    const auto metric = reltv::solve_polyhedral_metric(tri, target);

    json out;
    out["schema_version"] = 1;
    out["invocation"] = invocation_line("geometry", g, {{"input", input}});
    out["name"] = tri.name();
    out["edge_lengths"] = metric.edge_lengths;
    out["cone_angles"] = metric.cone_angles;
    out["tet_volumes"] = metric.tet_volumes;
    json ang = json::array();
    for (const auto& th : metric.tet_angles) ang.push_back(std::vector<double>(th.begin(), th.end()));
    out["tet_angles"] = ang;
    out["total_volume"] = metric.total_volume;
    out["residual_inf"] = metric.residual_inf;
    out["iterations"] = metric.iterations;
    out["converged"] = metric.converged;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_verify(const GlobalOpts& g, const std::string& input, const std::string& theta_text,
               const std::string& eps_text, const std::string& mu_text) {
    const auto tri = reltv::Triangulation::from_file(input);
    std::vector<double> theta(tri.num_edges(), 0.0);
    if (!theta_text.empty()) theta = parse_double_list(theta_text, "--theta");
    std::vector<int> eps(tri.num_edges(), 1);
    if (!eps_text.empty()) eps = parse_int_list(eps_text, "--eps");
    std::vector<int> mu;
    if (!mu_text.empty()) mu = parse_int_list(mu_text, "--mu");
    if (static_cast<int>(theta.size()) != tri.num_edges() ||
        static_cast<int>(eps.size()) != tri.num_edges())
        throw reltv::InputError("--theta/--eps need one value per edge");

    const auto rep = reltv::run_verification(tri, theta, eps, mu);

    json out;
    out["schema_version"] = 1;
    out["invocation"] = invocation_line("verify", g, {{"input", input}});
    out["name"] = tri.name();
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json jc;
        jc["name"] = c.name;
        jc["pass"] = c.pass;
        jc["value"] = c.value;
        jc["threshold"] = c.threshold;
        if (!c.detail.empty()) jc["detail"] = c.detail;
        checks.push_back(jc);
    }
    out["checks"] = checks;
    out["total_volume"] = rep.metric.total_volume;
    out["all_pass"] = rep.all_pass;
    out["cut_nudges"] = reltv::cut_nudge_count();
    std::cout << out.dump(2) << "\n";
    return rep.all_pass ? 0 : 4;
}

int cmd_asymptotics(const GlobalOpts& g, const std::string& input,
                    const std::string& theta_text, bool b_zero, int r_min, int r_max,
                    const std::string& r_list_text, const std::string& mu_text,
                    const std::string& parity_name, double synthetic,
                    bool have_synthetic, const std::string& output, bool timings,
                    int parallel_width) {
    const auto tri = reltv::Triangulation::from_file(input);
    reltv::AsymptoticsPlan plan;
    plan.theta.assign(tri.num_edges(), 0.0);
    if (!theta_text.empty()) plan.theta = parse_double_list(theta_text, "--theta");
    if (!mu_text.empty()) plan.mu = parse_int_list(mu_text, "--mu");
    plan.parity = (parity_name == "even") ? reltv::Parity::EvenOnly : reltv::Parity::All;
    plan.b_zero = b_zero;
    plan.threads = g.threads;
    plan.parallel_width = parallel_width;
    plan.timings = timings;
    if (have_synthetic) plan.synthetic_v0 = synthetic;
    if (!r_list_text.empty()) {
        plan.r_list = parse_int_list(r_list_text, "--r-list");
    } else {
        if (r_min % 2 == 0) ++r_min;
        for (int r = r_min; r <= r_max; r += 2) plan.r_list.push_back(r);
    }

    const auto rep = reltv::run_asymptotics(tri, plan);

    std::ostringstream ts;
    for (std::size_t i = 0; i < plan.theta.size(); ++i)
        ts << (i ? "," : "") << fmt(plan.theta[i]);
    std::vector<std::string> header{
        invocation_line("asymptotics", g,
                        {{"input", input},
                         {"theta", ts.str()},
                         {"parity", parity_name},
                         {"b_zero", b_zero ? "1" : "0"},
                         {"parallel_width", std::to_string(parallel_width)}}),
        "geom_vol=" + fmt(rep.geom_vol) + " extrapolated=" + fmt(rep.extrapolated)};

    if (output.empty() || output == "-") {
        reltv::write_asymptotics_csv(std::cout, rep, header);
    } else {
        std::ofstream out(output);
        if (!out) throw reltv::InputError("cannot open output file " + output);
        reltv::write_asymptotics_csv(out, rep, header);
        std::cerr << "wrote " << rep.rows.size() << " rows to " << output
                  << " (geom_vol=" << fmt(rep.geom_vol)
                  << ", extrapolated=" << fmt(rep.extrapolated) << ")\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relative state-sum invariants, hyperbolic polyhedral metrics, "
                 "and growth-rate experiments on ideal triangulations"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--precision", g.precision, "double | extended")
        ->check(CLI::IsMember({"double", "extended"}));
    app.add_option("--threads", g.threads, "worker threads for the state sum");
    app.add_option("--seed", g.seed,
                   "seed recorded in output headers (reserved for randomized diagnostics)");

    // tv
    std::string tv_input, tv_root = "e2pir", tv_b, tv_parity = "all", tv_sum = "plain";
    int tv_r = 7, tv_width = 1;
    bool tv_csv = false, tv_timings = false;
    auto* tv = app.add_subcommand("tv", "relative invariant of a colored triangulation");
    tv->add_option("-i,--input", tv_input, "triangulation JSON file")->required();
    tv->add_option("-r,--r", tv_r, "level (odd for e2pir)")->required();
    tv->add_option("--root", tv_root, "e2pir | epir");
    tv->add_option("-b,--b", tv_b, "comma-separated boundary colors (default all 0)");
    tv->add_option("--parity", tv_parity, "all | even")
        ->check(CLI::IsMember({"all", "even"}));
    tv->add_option("--summation", tv_sum, "plain | kahan")
        ->check(CLI::IsMember({"plain", "kahan"}));
    tv->add_option("--parallel-width", tv_width, "blocks for the first color split");
    tv->add_flag("--csv", tv_csv, "CSV instead of JSON");
    tv->add_flag("--timings", tv_timings, "record wall-clock seconds (breaks byte determinism)");

    // sixj
    std::string sj_root = "e2pir", sj_tuple, sj_method = "direct";
    int sj_r = 7;
    auto* sj = app.add_subcommand("sixj", "one 6j-symbol");
    sj->add_option("-r,--r", sj_r)->required();
    sj->add_option("--root", sj_root, "e2pir | epir");
    sj->add_option("--tuple", sj_tuple, "six comma-separated colors")->required();
    sj->add_option("--method", sj_method, "direct | potential")
        ->check(CLI::IsMember({"direct", "potential"}));

    // geometry
    std::string ge_input, ge_cone;
    auto* ge = app.add_subcommand("geometry", "solve the polyhedral metric for cone angles");
    ge->add_option("-i,--input", ge_input)->required();
    ge->add_option("--cone", ge_cone, "comma-separated cone angles (default all 0)");

    // verify
    std::string ve_input, ve_theta, ve_eps, ve_mu;
    auto* ve = app.add_subcommand("verify", "run the critical-point self checks");
    ve->add_option("-i,--input", ve_input)->required();
    ve->add_option("--theta", ve_theta, "cone angles (default all 0)");
    ve->add_option("--eps", ve_eps, "comma-separated +-1 (default all +1)");
    ve->add_option("--mu", ve_mu, "comma-separated +-1 (default from beta rule)");

    // asymptotics
    std::string as_input, as_theta, as_rlist, as_mu, as_parity = "all", as_output;
    int as_rmin = 11, as_rmax = 101, as_width = 1;
    bool as_bzero = false, as_timings = false;
    double as_synth = 0.0;
    auto* as = app.add_subcommand("asymptotics", "growth sweep over odd r");
    as->add_option("-i,--input", as_input)->required();
    as->add_option("--theta", as_theta, "target cone angles (default all 0)");
    as->add_flag("--b-zero", as_bzero, "use b = 0 instead of the angle-tracking rule");
    as->add_option("--r-min", as_rmin);
    as->add_option("--r-max", as_rmax);
    as->add_option("--r-list", as_rlist, "explicit comma-separated odd r values");
    as->add_option("--mu", as_mu, "comma-separated +-1 signs");
    as->add_option("--parity", as_parity, "all | even")
        ->check(CLI::IsMember({"all", "even"}));
    auto* synth_opt =
        as->add_option("--synthetic", as_synth, "inject TV_r = exp(r v0 / 2 pi)");
    as->add_option("-o,--output", as_output, "CSV path (default stdout)");
    as->add_flag("--timings", as_timings, "record wall-clock seconds");
    as->add_option("--parallel-width", as_width, "blocks for the first color split");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (tv->parsed())
            return cmd_tv(g, tv_input, tv_r, tv_root, tv_b, tv_parity, tv_sum, tv_width,
                          tv_csv, tv_timings);
        if (sj->parsed()) return cmd_sixj(g, sj_r, sj_root, sj_tuple, sj_method);
        if (ge->parsed()) return cmd_geometry(g, ge_input, ge_cone);
        if (ve->parsed()) return cmd_verify(g, ve_input, ve_theta, ve_eps, ve_mu);
        if (as->parsed())
            return cmd_asymptotics(g, as_input, as_theta, as_bzero, as_rmin, as_rmax,
                                   as_rlist, as_mu, as_parity, as_synth,
                                   synth_opt->count() > 0, as_output, as_timings,
                                   as_width);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const reltv::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const reltv::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 4;
    } catch (const reltv::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
