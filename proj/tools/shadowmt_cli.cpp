#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "shadowmt/barrier_sim.hpp"
#include "shadowmt/coupling.hpp"
#include "shadowmt/error.hpp"
#include "shadowmt/io.hpp"
#include "shadowmt/mot.hpp"
#include "shadowmt/shadow.hpp"

using nlohmann::json;
using namespace shadowmt;
namespace fs = std::filesystem;

namespace {

enum Exit { kPass = 0, kOrder = 2, kMalformed = 3, kTolerance = 4 };

int exit_code(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::NotInConvexOrder:
    case ErrorKind::NotDominated:
    case ErrorKind::OrderViolation: return kOrder;
    case ErrorKind::MaxStepsExceeded: return kTolerance;
    default: return kMalformed;
    }
}

struct Inputs {
    std::string mu_path, nu_path;
    DiscreteMeasure mu, nu;
};

DiscreteMeasure load_measure(const std::string& path, cli::RunManifest& m) {
    const std::string text = read_file(path);
    m.add_input(path, text);
    return measure_from_json(text);
}

Lift resolve_lift(const std::string& spec, const DiscreteMeasure& mu, cli::RunManifest& m) {
    if (spec == "left-curtain" || spec == "right-curtain" || spec == "sunset" || spec == "middle")
        return lift_preset(spec, mu);
    const std::string text = read_file(spec);
    m.add_input(spec, text);
    Lift l = lift_from_json(text);
    if (!validate(l, mu)) throw Error(ErrorKind::MassError, "lift marginal differs from mu");
    return l;
}

int refinement(const Lift& l, int slices) {
    return std::max(1, static_cast<int>(std::lround(static_cast<double>(slices) / static_cast<double>(l.size()))));
}

void emit(const std::string& path, const std::string& contents, cli::RunManifest& m) {
    m.add_output(path, contents);
    if (path.empty() || path == "-")
        std::cout << contents;
    else
        write_file(path, contents);
}

void finish_manifest(const cli::RunManifest& m, const std::string& path) {
    const std::string text = m.to_json().dump(2) + "\n";
    if (path.empty())
        std::cerr << m.to_json().dump() << "\n";
    else
        write_file(path, text);
}

std::string to_csv(const auto& writer, const auto& value) {
    std::ostringstream os;
    writer(os, value);
    return os.str();
}

json report_json(const CheckReport& r) {
    json details = json::array();
    for (std::size_t i = 0; i < r.details.size() && i < 20; ++i) details.push_back(r.details[i]);
    return {{"pass", r.pass}, {"worst", r.worst}, {"violations", r.details.size()}, {"details", details}};
}

json cert_json(const CertReport& r) {
    json checks = json::array();
    for (const CertCheck& c : r.checks)
        checks.push_back(
            {{"p", c.p}, {"q", c.q}, {"coupling_cost", c.coupling_cost}, {"lp_value", c.lp_value}, {"pass", c.pass}});
    return {{"checks", checks}, {"pass", r.pass}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shadow martingale couplings between finitely-atomic measures"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cli::kVersion);
    std::string manifest_path;

    // check-order
    std::string co_mu, co_nu;
    auto* check = app.add_subcommand("check-order", "Compare two measures in the four orders; exit 2 unless mu <=_c nu");
    check->add_option("mu", co_mu, "measure JSON")->required();
    check->add_option("nu", co_nu, "measure JSON")->required();
    check->add_option("--manifest", manifest_path, "write the run manifest here (default: stderr)");

    // shadow
    std::string sh_nu, sh_src, sh_out = "-";
    auto* shadow_cmd = app.add_subcommand("shadow", "Shadow of a source measure in a target");
    shadow_cmd->add_option("nu", sh_nu, "target measure JSON")->required();
    shadow_cmd->add_option("source", sh_src, "source measure JSON")->required();
    shadow_cmd->add_option("-o,--out", sh_out, "output JSON path ('-' for stdout)");
    shadow_cmd->add_option("--manifest", manifest_path, "write the run manifest here (default: stderr)");

    // shared by couple / verify / simulate
    std::string mu_path, nu_path, lift_spec = "left-curtain", rule_name = "dilation", out_dir = ".";
    int slices = 256;
    auto add_common = [&](CLI::App* c) {
        c->add_option("mu", mu_path, "source measure JSON")->required();
        c->add_option("nu", nu_path, "target measure JSON")->required();
        c->add_option("--lift", lift_spec,
                      "left-curtain | right-curtain | sunset | middle | path to a lift JSON")->capture_default_str();
        c->add_option("--slices", slices, "total slab count; each lift piece gets round(K / pieces) slabs")
            ->capture_default_str()->check(CLI::PositiveNumber);
        c->add_option("--rule", rule_name, "slab rule: dilation | atomwise")
            ->capture_default_str()->check(CLI::IsMember({"dilation", "atomwise"}));
        c->add_option("--manifest", manifest_path, "manifest path (default: <out-dir>/manifest.json)");
    };

    auto* couple = app.add_subcommand("couple", "Build the lifted shadow coupling and its barrier");
    add_common(couple);
    couple->add_option("--out-dir", out_dir, "directory for coupling.csv, lifted.csv, barrier.csv")->capture_default_str();

    std::string lifted_path, checks_list = "martingale,monotone,shadow,lipschitz,optimal", verify_out = "-";
    double tol = 1e-9, lip_tol = 1e-6, mono_tol = 1e-6, cert_tol = 1e-7;
    auto* verify = app.add_subcommand("verify", "Run verification checks on a lifted coupling; exit 4 on failure");
    add_common(verify);
    verify->add_option("--lifted", lifted_path, "lifted coupling CSV (default: build it)");
    verify->add_option("--checks", checks_list, "comma list of martingale,monotone,shadow,lipschitz,optimal")
        ->capture_default_str();
    verify->add_option("--tol", tol, "martingale and shadow-property tolerance")->capture_default_str();
    verify->add_option("--lipschitz-tol", lip_tol, "Lipschitz slack")->capture_default_str();
    verify->add_option("--monotone-tol", mono_tol, "monotone support tolerance in y")->capture_default_str();
    verify->add_option("--cert-tol", cert_tol, "relative certification tolerance")->capture_default_str();
    verify->add_option("-o,--out", verify_out, "report JSON path ('-' for stdout)");

    SimConfig cfg;
    std::string stop_rule = "closed";
    double sim_tol = 0.02;
    bool both_rules = false;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo barrier embedding against the constructed coupling");
    add_common(simulate_cmd);
    simulate_cmd->add_option("--paths", cfg.paths, "number of paths N")->capture_default_str()->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--step", cfg.step, "variance h of one walk step")->capture_default_str()->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", cfg.seed, "generator seed")->capture_default_str();
    simulate_cmd->add_option("--max-steps", cfg.max_steps, "step cap per path")->capture_default_str();
    simulate_cmd->add_option("--threads", cfg.threads, "worker threads (output does not depend on it)")->capture_default_str();
    simulate_cmd->add_option("--stop", stop_rule, "stopping rule: closed | open")
        ->capture_default_str()->check(CLI::IsMember({"closed", "open"}));
    simulate_cmd->add_flag("--open-vs-closed", both_rules, "also run the other rule on the same seed and report the distance");
    simulate_cmd->add_option("--tol", sim_tol, "pass threshold for the projected distance")->capture_default_str();
    simulate_cmd->add_option("--out-dir", out_dir, "directory for empirical.csv, barrier.csv, report.json")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    cli::RunManifest manifest;
    manifest.command = app.get_subcommands().front()->get_name();
    const SlabRule rule = rule_name == "atomwise" ? SlabRule::Atomwise : SlabRule::Dilation;

    try {
        if (*check) {
            const DiscreteMeasure mu = load_measure(co_mu, manifest), nu = load_measure(co_nu, manifest);
            const json out{{"convex", leq_convex(mu, nu)},
                           {"convex_positive", leq_convex_positive(mu, nu)},
                           {"stochastic", leq_stochastic(mu, nu)},
                           {"diatomic", leq_diatomic(mu, nu)}};
            emit("-", out.dump(2) + "\n", manifest);
            finish_manifest(manifest, manifest_path);
            return out["convex"].get<bool>() ? kPass : kOrder;
        }

        if (*shadow_cmd) {
            const DiscreteMeasure nu = load_measure(sh_nu, manifest), src = load_measure(sh_src, manifest);
            emit(sh_out, measure_to_json(shadow(nu, src)) + "\n", manifest);
            finish_manifest(manifest, manifest_path);
            return kPass;
        }

        const DiscreteMeasure mu = load_measure(mu_path, manifest), nu = load_measure(nu_path, manifest);
        const Lift lift = resolve_lift(lift_spec, mu, manifest);
        const int k = refinement(lift, slices);
        manifest.parameters = {{"lift", lift_spec}, {"slices", slices}, {"refinement", k}, {"rule", rule_name}};

        if (*couple) {
            fs::create_directories(out_dir);
            const LiftedCoupling lc = shadow_coupling(lift, nu, k, rule);
            const Barrier b = exact_barrier(lift, nu);
            const fs::path dir(out_dir);
            emit((dir / "coupling.csv").string(), to_csv(write_coupling_csv, project(lc)), manifest);
            emit((dir / "lifted.csv").string(), to_csv(write_lifted_csv, lc), manifest);
            emit((dir / "barrier.csv").string(), to_csv(write_barrier_csv, b), manifest);
            finish_manifest(manifest, manifest_path.empty() ? (dir / "manifest.json").string() : manifest_path);
            return kPass;
        }

        if (*verify) {
            LiftedCoupling lc;
            if (lifted_path.empty()) {
                lc = shadow_coupling(lift, nu, k, rule);
            } else {
                const std::string text = read_file(lifted_path);
                manifest.add_input(lifted_path, text);
                std::istringstream is(text);
                lc = read_lifted_csv(is);
            }
            manifest.parameters["checks"] = checks_list;
            manifest.parameters["tol"] = tol;
            json out = json::object();
            bool pass = true;
            std::stringstream list(checks_list);
            std::string name;
            while (std::getline(list, name, ',')) {
                if (name == "martingale") {
                    out["martingale"] = report_json(check_martingale(lc, tol));
                } else if (name == "monotone") {
                    out["monotone"] = report_json(check_monotone(lc, mono_tol));
                } else if (name == "shadow") {
                    out["shadow"] = report_json(check_shadow_property(lc, lift, nu, tol));
                } else if (name == "lipschitz") {
                    out["lipschitz"] = report_json(check_lipschitz(project(lc), lip_tol));
                } else if (name == "optimal") {
                    out["optimal"] = cert_json(certify_optimal(lc, lift, nu, cert_tol));
                } else {
                    throw Error(ErrorKind::Parse, "unknown check '" + name + "'");
                }
                pass = pass && out[name]["pass"].get<bool>();
            }
            const json report{{"checks", out}, {"pass", pass}};
            emit(verify_out, report.dump(2) + "\n", manifest);
            finish_manifest(manifest, manifest_path);
            return pass ? kPass : kTolerance;
        }

        if (*simulate_cmd) {
            fs::create_directories(out_dir);
            cfg.rule = stop_rule == "open" ? StopRule::Open : StopRule::Closed;
            manifest.seed = cfg.seed;
            manifest.parameters.update({{"paths", cfg.paths}, {"step", cfg.step}, {"max_steps", cfg.max_steps},
                                        {"stop", stop_rule}, {"tol", sim_tol}});
            const LiftedCoupling ref = shadow_coupling(lift, nu, k, rule);
            const Barrier b = exact_barrier(lift, nu);
            SimResult res;
            json report;
            if (both_rules) {
                OpenClosedReport oc = open_vs_closed(lift, b, cfg);
                report["open_vs_closed"] = oc.distance;
                res = cfg.rule == StopRule::Open ? std::move(oc.open) : std::move(oc.closed);
            } else {
                res = simulate(lift, b, cfg);
            }
            const CompareReport cmp = compare(res.coupling, ref, static_cast<int>(lift.size()));
            const double bary = mu.barycenter();
            const bool embedded = std::abs(res.mean_stop - bary) <= 3.0 * res.stderr_stop;
            const bool pass = cmp.projected <= sim_tol && embedded;
            report.update({{"projected_distance", cmp.projected},
                           {"bin_distances", cmp.bins},
                           {"mean_stop", res.mean_stop},
                           {"stderr_stop", res.stderr_stop},
                           {"barycenter_mu", bary},
                           {"embedding_within_3se", embedded},
                           {"unfinished", res.unfinished},
                           {"mean_steps", res.mean_steps},
                           {"pass", pass}});
            const fs::path dir(out_dir);
            emit((dir / "empirical.csv").string(), to_csv(write_lifted_csv, res.coupling), manifest);
            emit((dir / "barrier.csv").string(), to_csv(write_barrier_csv, b), manifest);
            emit((dir / "report.json").string(), report.dump(2) + "\n", manifest);
            finish_manifest(manifest, manifest_path.empty() ? (dir / "manifest.json").string() : manifest_path);
            return pass ? kPass : kTolerance;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kMalformed;
    }
    return kPass;
}
