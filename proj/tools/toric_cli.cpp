#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "toric/jsonio.hpp"
#include "toric/oracle.hpp"
#include "toric/solver.hpp"
#include "toric/tracker.hpp"

using nlohmann::json;
using namespace toric;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMathFailure = 2;

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("TORIC_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

void emit_error(const std::string& kind, const std::string& what) {
    json err{{"error", kind}, {"message", what}};
    std::cerr << err.dump() << "\n";
}

expsum::ExpSumSystem require_system(const jsonio::SystemFile& file, const std::string& path) {
    if (!file.system) throw ParseError(path + " has no coefficients");
    return *file.system;
}

json trace_to_json(const tracker::PathTrace& trace, bool summary) {
    json j;
    const char* outcome = nullptr;
    switch (trace.outcome) {
        case tracker::Outcome::Success: outcome = "success"; break;
        case tracker::Outcome::InfinityDiverged: outcome = "infinity_diverged"; break;
        case tracker::Outcome::StepStalled: outcome = "step_stalled"; break;
        case tracker::Outcome::BudgetExceeded: outcome = "budget_exceeded"; break;
    }
    j["outcome"] = outcome;
    j["steps"] = trace.steps();
    j["L_hat"] = trace.L_hat;
    j["L1_hat"] = trace.L1_hat;
    j["L2_hat"] = trace.L2_hat;
    if (trace.outcome == tracker::Outcome::Success) {
        std::vector<double> re(trace.final_point.size()), im(trace.final_point.size());
        for (int k = 0; k < trace.final_point.size(); ++k) {
            re[static_cast<size_t>(k)] = trace.final_point(k).real();
            im[static_cast<size_t>(k)] = trace.final_point(k).imag();
        }
        j["final"] = {{"re", re},
                      {"im", im},
                      {"certificate", jsonio::certificate_to_json(trace.final_certificate)}};
    }
    if (trace.infinity) {
        j["infinity"] = {{"xi", trace.infinity->xi}};
    }
    if (!summary) {
        json mesh = json::array();
        for (const auto& m : trace.mesh) {
            std::vector<double> re(m.x.size()), im(m.x.size());
            for (int k = 0; k < m.x.size(); ++k) {
                re[static_cast<size_t>(k)] = m.x(k).real();
                im[static_cast<size_t>(k)] = m.x(k).imag();
            }
            mesh.push_back({{"t", m.t}, {"re", re}, {"im", im}, {"beta", m.beta}, {"mu", m.mu}});
        }
        j["mesh"] = mesh;
    }
    return j;
}

json mc_report_to_json(const oracle::McReport& rep) {
    return {{"mean", rep.mean},     {"stderr", rep.stderr_}, {"samples", rep.samples},
            {"bound", rep.bound},   {"pass", rep.pass}};
}

void write_csv(const std::string& path, const std::vector<double>& samples) {
    std::ofstream out(path);
    out << "sample,value\n";
    for (size_t i = 0; i < samples.size(); ++i) out << i << "," << samples[i] << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"toric: certified solver for sparse polynomial systems"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed_flag;
    app.add_option("--seed", seed_flag, "random seed (fallback: TORIC_SEED env)");
    int threads = 1;
    app.add_option("--threads", threads, "path-parallel worker count");

    // --- invariants ---------------------------------------------------------
    auto* cmd_inv = app.add_subcommand("invariants", "exact support-tuple invariants");
    std::string inv_path;
    cmd_inv->add_option("input", inv_path, "system or supports-only JSON")->required();

    // --- sample -------------------------------------------------------------
    auto* cmd_sample = app.add_subcommand("sample", "emit a Gaussian system");
    std::string sample_supports;
    cmd_sample->add_option("--supports", sample_supports, "supports JSON")->required();

    // --- certify ------------------------------------------------------------
    auto* cmd_cert = app.add_subcommand("certify", "alpha-certificates for candidate roots");
    std::string cert_system, cert_roots;
    double cert_alpha = newton::constants().alpha_star;
    cmd_cert->add_option("--system", cert_system)->required();
    cmd_cert->add_option("--roots", cert_roots)->required();
    cmd_cert->add_option("--alpha", cert_alpha, "certificate target alpha");

    // --- track --------------------------------------------------------------
    auto* cmd_track = app.add_subcommand("track", "track roots along g + t f");
    std::string track_start, track_target, track_roots;
    double track_t0 = 0.0;
    std::optional<double> track_T;
    bool track_summary = false;
    std::optional<double> track_H;
    cmd_track->add_option("--start", track_start, "start system g (JSON)")->required();
    cmd_track->add_option("--target", track_target, "target direction f (JSON)")->required();
    cmd_track->add_option("--roots", track_roots, "certified start roots (JSON)")->required();
    cmd_track->add_option("--t0", track_t0);
    cmd_track->add_option("--T", track_T, "end parameter (default: tail threshold)");
    cmd_track->add_option("--H", track_H, "toric-infinity abort threshold override");
    cmd_track->add_flag("--summary", track_summary, "omit the mesh from the output");

    // --- solve --------------------------------------------------------------
    auto* cmd_solve = app.add_subcommand("solve", "certified solution set for a target");
    std::string solve_target, solve_start;
    long solve_n0 = 256;
    double solve_alpha = newton::constants().alpha_star;
    double solve_wall = 0.0;
    cmd_solve->add_option("--target", solve_target)->required();
    cmd_solve->add_option("--start", solve_start, "start system+roots JSON (optional)");
    cmd_solve->add_option("--n0", solve_n0, "initial Newton budget");
    cmd_solve->add_option("--alpha", solve_alpha);
    cmd_solve->add_option("--max-wall", solve_wall, "wall-clock limit in seconds (0: none)");

    // --- oracle -------------------------------------------------------------
    auto* cmd_oracle = app.add_subcommand("oracle", "brute-force roots (n <= 2)");
    std::string oracle_system;
    cmd_oracle->add_option("--system", oracle_system)->required();

    // --- montecarlo ---------------------------------------------------------
    auto* cmd_mc = app.add_subcommand("montecarlo", "Monte Carlo bound checks");
    std::string mc_preset;
    long mc_samples = 1000;
    std::string mc_csv;
    std::string mc_supports;
    double mc_H = 2.0;
    cmd_mc->add_option("--preset", mc_preset, "em2-n1 | mu-n1 | exclusion")->required();
    cmd_mc->add_option("--samples", mc_samples);
    cmd_mc->add_option("--csv", mc_csv, "per-sample sums CSV path");
    cmd_mc->add_option("--supports", mc_supports, "override the preset supports");
    cmd_mc->add_option("--H", mc_H, "real-part window");

    CLI11_PARSE(app, argc, argv);

    try {
        const std::uint64_t seed = resolve_seed(seed_flag);

        if (*cmd_inv) {
            auto file = jsonio::load_system(inv_path);
            auto report = polytope::compute_invariants(*file.supports);
            std::cout << jsonio::invariants_to_json(report).dump(2) << "\n";
            return kExitOk;
        }

        if (*cmd_sample) {
            auto file = jsonio::load_system(sample_supports);
            Rng rng(seed);
            auto g = solver::sample_gaussian(file.supports, rng);
            std::cout << jsonio::system_to_json(g).dump(2) << "\n";
            return kExitOk;
        }

        if (*cmd_cert) {
            auto file = jsonio::load_system(cert_system);
            auto system = require_system(file, cert_system);
            auto roots = jsonio::load_roots(cert_roots, system.n());
            std::vector<newton::Certificate> certs;
            certs.reserve(roots.roots.size());
            for (const auto& r : roots.roots)
                certs.push_back(newton::certify(system, r.z, cert_alpha));
            std::cout << jsonio::roots_to_json(system, roots.roots, certs).dump(2) << "\n";
            return kExitOk;
        }

        if (*cmd_oracle) {
            auto file = jsonio::load_system(oracle_system);
            auto system = require_system(file, oracle_system);
            auto roots = oracle::solve_by_oracle(system);
            json j;
            j["method"] = roots.method;
            j["residuals"] = roots.residuals;
            j["multiplicity"] = roots.multiplicity;
            j["dropped_degenerate"] = roots.dropped_degenerate;
            std::vector<newton::Certificate> certs;
            j["roots"] = jsonio::roots_to_json(system, roots.roots, certs)["roots"];
            std::cout << j.dump(2) << "\n";
            return kExitOk;
        }

        if (*cmd_track) {
            auto start_file = jsonio::load_system(track_start);
            auto target_file = jsonio::load_system(track_target);
            auto g = require_system(start_file, track_start);
            auto f = require_system(target_file, track_target);
            auto roots = jsonio::load_roots(track_roots, g.n());
            auto basis = lattice::lattice_from_supports(*g.supports);

            tracker::TrackerConfig tcfg;
            tcfg.alpha_star = newton::constants().alpha_star;
            double T = track_T ? *track_T : tracker::tail_threshold(f, g, 1.0);
            if (track_H) {
                tcfg.H = *track_H;
            } else {
                try {
                    double dr = polytope::dr_bound(*g.supports);
                    double delta = tracker::default_exclusion_delta(dr, g.supports->S);
                    tcfg.H = tracker::h_threshold(
                        *g.supports, dr, T, delta,
                        std::sqrt(static_cast<double>(g.supports->S)));
                } catch (const Error&) {
                    tcfg.H = std::numeric_limits<double>::infinity();
                }
            }
            tracker::LinearPath path{g, f, track_t0, T};
            json out = json::array();
            bool all_ok = true;
            for (const auto& r : roots.roots) {
                auto trace = tracker::track(path, r, basis, tcfg);
                auto len = tracker::condition_length(trace, path, basis);
                trace.L_hat = len.L;
                trace.L1_hat = len.L1;
                trace.L2_hat = len.L2;
                all_ok = all_ok && trace.outcome == tracker::Outcome::Success;
                out.push_back(trace_to_json(trace, track_summary));
            }
            std::cout << out.dump(2) << "\n";
            return all_ok ? kExitOk : kExitMathFailure;
        }

        if (*cmd_solve) {
            auto target_file = jsonio::load_system(solve_target);
            auto f = require_system(target_file, solve_target);
            solver::SolveConfig cfg;
            cfg.rng_seed = seed;
            cfg.n0 = solve_n0;
            cfg.alpha_star = solve_alpha;
            cfg.threads = threads;
            solver::RunStats stats;
            solver::CertifiedSolutionSet result;
            if (!solve_start.empty()) {
                std::ifstream in(solve_start);
                if (!in) throw ParseError("cannot open " + solve_start);
                json j;
                in >> j;
                auto h_file = jsonio::parse_system(j.at("system"));
                auto h = require_system(h_file, solve_start);
                auto start_roots = jsonio::parse_roots(j.at("roots"), h.n());
                result = solver::cheater_solve(f, h, start_roots.roots, cfg, &stats);
            } else {
                result = solver::solve_small(f, cfg, &stats);
            }
            json out = jsonio::roots_to_json(f, result.roots, result.certificates);
            out["expected_count"] = result.expected_count;
            out["success"] = result.success;
            out["stats"] = {{"newton_steps", stats.newton_steps},
                            {"attempts", stats.attempts},
                            {"path_L_hat", stats.path_lengths},
                            {"failures", stats.failures}};
            std::cout << out.dump(2) << "\n";
            return result.success ? kExitOk : kExitMathFailure;
        }

        if (*cmd_mc) {
            Rng rng(seed);
            json out;
            if (mc_preset == "em2-n1" || mc_preset == "mu-n1") {
                SupportsPtr supports;
                if (!mc_supports.empty()) {
                    supports = jsonio::load_system(mc_supports).supports;
                } else {
                    supports = make_supports(1, {{{0}, {1}, {2}, {3}}});
                }
                oracle::McReport rep;
                if (mc_preset == "em2-n1") {
                    std::vector<Eigen::VectorXd> sigma;
                    for (int i = 0; i < supports->n; ++i)
                        sigma.push_back(Eigen::VectorXd::Ones(supports->Si[i]));
                    rep = oracle::mc_moment_frobenius(supports, sigma, nullptr, mc_H,
                                                      mc_samples, rng, !mc_csv.empty());
                } else {
                    rep = oracle::mc_moment_mu(supports, mc_H, mc_samples, rng,
                                               !mc_csv.empty());
                }
                if (!mc_csv.empty()) write_csv(mc_csv, rep.per_sample);
                out = mc_report_to_json(rep);
                out["preset"] = mc_preset;
                std::cout << out.dump(2) << "\n";
                return rep.pass ? kExitOk : kExitMathFailure;
            }
            if (mc_preset == "exclusion") {
                SupportsPtr supports =
                    mc_supports.empty()
                        ? make_supports(2, {{{0, 0}, {1, 0}, {0, 1}, {1, 1}},
                                            {{0, 0}, {2, 0}, {0, 1}}})
                        : jsonio::load_system(mc_supports).supports;
                Rng frng(seed + 1);
                auto f = solver::normalize_scaling(solver::sample_gaussian(supports, frng));
                auto rep = oracle::mc_exclusion(f, mc_samples, rng);
                out["preset"] = "exclusion";
                out["lambda_eps"] = mc_report_to_json(rep.lambda_eps);
                out["y_k"] = mc_report_to_json(rep.y_k);
                std::cout << out.dump(2) << "\n";
                return rep.lambda_eps.pass && rep.y_k.pass ? kExitOk : kExitMathFailure;
            }
            emit_error("usage", "unknown preset: " + mc_preset);
            return kExitUsage;
        }
    } catch (const ParseError& e) {
        emit_error("parse", e.what());
        return kExitUsage;
    } catch (const Error& e) {
        emit_error("math", e.what());
        return kExitMathFailure;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return kExitMathFailure;
    }
    return kExitUsage;
}
