// Command-line surface for the logarithmic ring-equilibrium library:
// theorem bounds, spectra, classification, mu sweeps, nonlinear simulation
// and the self-verification suite, with CSV and JSON output.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "logring/dynamics.hpp"
#include "logring/format.hpp"
#include "logring/stability.hpp"
#include "logring/verify.hpp"

using json = nlohmann::ordered_json;
using namespace logring;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Writes via a temp file plus rename so readers never observe a torn file.
void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) throw std::runtime_error("cannot write " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_atomic(out_path, content);
}

RingParams make_params(int n, double mu, bool free_ring) {
    if (n < 2) throw UsageError("n must be >= 2");
    if (!free_ring && mu <= 0.0) throw UsageError("mu must be positive");
    return free_ring ? RingParams::free_ring(n) : RingParams::central(n, mu);
}

int sweep_thread_count(int samples) {
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (const char* env = std::getenv("LOGRING_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) threads = std::min(threads, cap);
    }
    return std::min(threads, samples);
}

// ---------------------------------------------------------------- bounds

struct BoundsRow {
    int n;
    MuBounds b;
};

std::string bounds_csv(const std::vector<BoundsRow>& rows) {
    std::string s = "n,lower,lower_decimal,upper,upper_decimal,case\n";
    for (const auto& row : rows) {
        s += std::to_string(row.n) + ",";
        if (row.b.lower) s += row.b.lower->str();
        s += ",";
        if (row.b.lower) s += fmt_g17(row.b.lower->value());
        s += ",";
        if (row.b.upper) s += row.b.upper->str();
        s += ",";
        if (row.b.upper) s += fmt_g17(row.b.upper->value());
        s += ",";
        s += row.b.label();
        s += "\n";
    }
    return s;
}

json bounds_json_rows(const std::vector<BoundsRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows) {
        json r;
        r["n"] = row.n;
        r["case"] = row.b.label();
        if (row.b.lower) {
            r["lower"] = row.b.lower->str();
            r["lower_decimal"] = row.b.lower->value();
        }
        if (row.b.upper) {
            r["upper"] = row.b.upper->str();
            r["upper_decimal"] = row.b.upper->value();
        }
        arr.push_back(std::move(r));
    }
    return arr;
}

int cmd_bounds(int n_min, int n_max, const std::string& format, const std::string& out) {
    if (n_min < 2 || n_min > n_max) throw UsageError("need 2 <= n_min <= n_max");
    std::vector<BoundsRow> rows;
    for (int n = n_min; n <= n_max; ++n) rows.push_back({n, theorem_bounds(n)});
    if (format == "csv") {
        emit(out, bounds_csv(rows));
    } else {
        json doc;
        doc["n_min"] = n_min;
        doc["n_max"] = n_max;
        doc["bounds"] = bounds_json_rows(rows);
        emit(out, doc.dump(2) + "\n");
    }
    return 0;
}

// -------------------------------------------------------------- classify

int cmd_classify(int n, double mu, bool free_ring, const std::string& format,
                 const std::string& out) {
    const RingParams params = make_params(n, mu, free_ring);
    const StabilityVerdict v = classify_spectral(params);
    const StabilityStatus t = classify_theorem(n, params.mu, free_ring);
    const char* theorem_label =
        t == StabilityStatus::SpectrallyStable ? "stable" : "unstable";

    if (format == "csv") {
        std::string s =
            "n,mu,free,spectral_status,theorem_status,max_re_lambda,witness_mode,"
            "trivial_zeros_excluded,outside_physical_regime,per_mode_p\n";
        s += std::to_string(n) + "," + fmt_g17(params.mu) + "," +
             (free_ring ? "true" : "false") + "," + to_string(v.status) + "," +
             theorem_label + "," + fmt_g17(v.max_re_lambda) + ",";
        if (v.witness_mode) s += std::to_string(*v.witness_mode);
        s += "," + std::to_string(v.trivial_zeros_excluded) + ",";
        s += (!free_ring && mu > 1.0) ? "true" : "false";
        s += ",";
        for (std::size_t j = 0; j < v.per_mode_P.size(); ++j) {
            if (j) s += ";";
            s += fmt_g17(v.per_mode_P[j]);
        }
        s += "\n";
        emit(out, s);
    } else {
        json doc;
        doc["n"] = n;
        doc["mu"] = params.mu;
        doc["free"] = free_ring;
        doc["omega"] = params.omega;
        doc["spectral_status"] = to_string(v.status);
        doc["theorem_status"] = theorem_label;
        doc["max_re_lambda"] = v.max_re_lambda;
        if (v.witness_mode)
            doc["witness_mode"] = *v.witness_mode;
        else
            doc["witness_mode"] = nullptr;
        doc["trivial_zeros_excluded"] = v.trivial_zeros_excluded;
        doc["outside_physical_regime"] = !free_ring && mu > 1.0;
        doc["per_mode_p"] = v.per_mode_P;
        emit(out, doc.dump(2) + "\n");
    }
    return 0;
}

// -------------------------------------------------------------- spectrum

int cmd_spectrum(int n, double mu, bool free_ring, const std::string& format,
                 const std::string& out) {
    const RingParams params = make_params(n, mu, free_ring);
    struct Row {
        int j;
        double re, im, p, c;
    };
    std::vector<Row> rows;
    rows.reserve(4 * n);
    for (int j = 0; j < n; ++j) {
        const ModeFactor f = mode_factor(params, j);
        std::array<Complex, 4> lams = f.lambdas;
        std::sort(lams.begin(), lams.end(), [](Complex a, Complex b) {
            if (a.imag() != b.imag()) return a.imag() > b.imag();
            return a.real() > b.real();
        });
        for (const Complex lam : lams)
            rows.push_back({j, lam.real(), lam.imag(), f.P, f.c_sum});
    }

    if (format == "csv") {
        std::string s = "j,re_lambda,im_lambda,p_j,c_j\n";
        for (const Row& r : rows)
            s += std::to_string(r.j) + "," + fmt_g17(r.re) + "," + fmt_g17(r.im) + "," +
                 fmt_g17(r.p) + "," + fmt_g17(r.c) + "\n";
        emit(out, s);
    } else {
        json doc;
        doc["n"] = n;
        doc["mu"] = params.mu;
        doc["free"] = free_ring;
        doc["omega"] = params.omega;
        json arr = json::array();
        for (const Row& r : rows)
            arr.push_back({{"j", r.j},
                           {"re_lambda", r.re},
                           {"im_lambda", r.im},
                           {"p_j", r.p},
                           {"c_j", r.c}});
        doc["modes"] = std::move(arr);
        emit(out, doc.dump(2) + "\n");
    }
    return 0;
}

// ----------------------------------------------------------------- sweep

int cmd_sweep(int n, double mu_min, double mu_max, int samples, const std::string& out) {
    if (n < 2) throw UsageError("n must be >= 2");
    if (!(0.0 < mu_min && mu_min < mu_max && mu_max <= 1.0))
        throw UsageError("need 0 < mu_min < mu_max <= 1");
    if (samples < 2) throw UsageError("need samples >= 2");

    struct Row {
        double mu;
        StabilityStatus status;
        double max_re;
        double min_p;
    };
    std::vector<Row> rows(samples);

    const int threads = sweep_thread_count(samples);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= samples) return;
            const double mu = mu_min + (mu_max - mu_min) * i / (samples - 1);
            const StabilityVerdict v = classify_spectral(RingParams::central(n, mu));
            double min_p = std::numeric_limits<double>::infinity();
            for (std::size_t j = 1; j < v.per_mode_P.size(); ++j)
                min_p = std::min(min_p, v.per_mode_P[j]);
            rows[i] = {mu, v.status, v.max_re_lambda, min_p};
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::string s = "mu,status,max_re_lambda,min_nontrivial_p\n";
    for (const Row& r : rows)
        s += fmt_g17(r.mu) + "," + to_string(r.status) + "," + fmt_g17(r.max_re) + "," +
             fmt_g17(r.min_p) + "\n";
    emit(out, s);
    return 0;
}

// -------------------------------------------------------------- simulate

int cmd_simulate(int n, double mu, bool free_ring, double periods,
                 std::optional<int> perturb_mode, double perturb_eps, double tol,
                 const std::string& out) {
    const RingParams params = make_params(n, mu, free_ring);
    if (periods <= 0.0) throw UsageError("periods must be positive");
    if (perturb_mode && (*perturb_mode < 0 || *perturb_mode >= n))
        throw UsageError("perturb mode must lie in 0..n-1");

    PhaseState initial = re_configuration(params, 0.0);
    Complex mode_lambda{0.0, 0.0};
    const double eps = perturb_eps * params.r;
    if (perturb_mode) {
        const ModeFactor f = mode_factor(params, *perturb_mode);
        mode_lambda = f.lambdas[0];
        for (const Complex lam : f.lambdas)
            if (lam.real() > mode_lambda.real() ||
                (lam.real() == mode_lambda.real() && lam.imag() > mode_lambda.imag()))
                mode_lambda = lam;
        initial = perturb_along_mode(params, *perturb_mode, mode_lambda, eps);
    }

    IntegratorConfig cfg;
    if (tol > 0.0) {
        cfg.rel_tol = tol;
        cfg.abs_tol = tol * 1e-2;
    }
    const double t_final = periods * params.period();
    cfg.dense_output_stride = t_final / std::max(256.0, 64.0 * periods);

    const Trajectory traj = integrate(initial, t_final, cfg);
    if (traj.step_underflow) {
        std::cerr << "step size underflow at t = " << fmt_g17(traj.underflow_time) << "\n";
        return kExitFailure;
    }

    if (!out.empty()) {
        std::string csv = "t";
        for (std::size_t i = 0; i < initial.size(); ++i) {
            const std::string b = std::to_string(i);
            csv += ",x" + b + ",y" + b + ",vx" + b + ",vy" + b;
        }
        csv += "\n";
        for (const PhaseState& s : traj.samples) {
            csv += fmt_g17(s.time);
            for (std::size_t i = 0; i < s.size(); ++i)
                csv += "," + fmt_g17(s.positions[i].x) + "," + fmt_g17(s.positions[i].y) +
                       "," + fmt_g17(s.velocities[i].x) + "," + fmt_g17(s.velocities[i].y);
            csv += "\n";
        }
        write_atomic(out, csv);
    }

    const ConservedQuantities q0 = conserved(traj.samples.front());
    double energy_drift = 0.0, ang_mom_drift = 0.0, max_dev = 0.0;
    for (const PhaseState& s : traj.samples) {
        const ConservedQuantities q = conserved(s);
        energy_drift = std::max(energy_drift, std::abs(q.energy - q0.energy) /
                                                  std::max(1.0, std::abs(q0.energy)));
        ang_mom_drift =
            std::max(ang_mom_drift, std::abs(q.angular_momentum - q0.angular_momentum) /
                                        std::abs(q0.angular_momentum));
        max_dev = std::max(max_dev, deviation_from_re(s, params));
    }

    json doc;
    doc["n"] = n;
    doc["mu"] = params.mu;
    doc["free"] = free_ring;
    doc["periods"] = periods;
    doc["omega"] = params.omega;
    doc["samples"] = traj.samples.size();
    doc["collision"] = traj.collision;
    if (traj.collision) doc["collision_time"] = traj.collision_time;
    doc["energy_drift"] = energy_drift;
    doc["angular_momentum_drift"] = ang_mom_drift;
    doc["max_deviation"] = max_dev;
    doc["final_deviation"] = deviation_from_re(traj.back(), params);
    if (perturb_mode) {
        json p;
        p["mode"] = *perturb_mode;
        p["eps"] = eps;
        p["lambda_re"] = mode_lambda.real();
        p["lambda_im"] = mode_lambda.imag();
        const GrowthEstimate est = growth_rate(traj, params, eps);
        p["window_found"] = est.window_found;
        if (est.window_found) {
            p["rate"] = est.rate;
            p["r_squared"] = est.r_squared;
            p["window_t0"] = est.window_t0;
            p["window_t1"] = est.window_t1;
            p["samples_used"] = est.samples_used;
        }
        doc["perturbation"] = std::move(p);
    }
    std::cout << doc.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& level, const std::string& out) {
    const VerifyLevel lvl = level == "full" ? VerifyLevel::Full : VerifyLevel::Quick;
    const std::vector<CheckResult> results = run_verification(lvl);
    json doc;
    doc["level"] = level;
    bool all = true;
    std::string first_fail;
    json arr = json::array();
    for (const CheckResult& r : results) {
        arr.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        if (!r.pass && all) first_fail = r.name;
        all = all && r.pass;
    }
    doc["passed"] = all;
    doc["checks"] = std::move(arr);
    emit(out, doc.dump(2) + "\n");
    if (!all) {
        std::cerr << "verification failed: " << first_fail << "\n";
        return kExitFailure;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"regular n-gon rotating equilibria of the logarithmic n-body problem"};
    app.require_subcommand(1);

    std::string format = "csv", out_path;
    int n = 6;
    double mu = 0.5;
    bool free_ring = false;

    auto add_common = [&](CLI::App* cmd, bool with_format = true) {
        if (with_format)
            cmd->add_option("--format", format, "output format")
                ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out_path, "output path (atomic write); stdout if omitted");
    };

    int n_min = 2, n_max = 12;
    CLI::App* bounds = app.add_subcommand("bounds", "theorem stability bounds per n");
    bounds->add_option("--n-min,--n_min", n_min, "first ring size")->required();
    bounds->add_option("--n-max,--n_max", n_max, "last ring size")->required();
    add_common(bounds);

    CLI::App* classify = app.add_subcommand("classify", "stability verdicts for one ring");
    classify->add_option("-n,--n", n, "ring size")->required();
    classify->add_option("--mu", mu, "mass ratio m/M (ignored with --free)");
    classify->add_flag("--free", free_ring, "no central mass");
    add_common(classify);

    CLI::App* spectrum = app.add_subcommand("spectrum", "all 4n eigenvalues by mode");
    spectrum->add_option("-n,--n", n, "ring size")->required();
    spectrum->add_option("--mu", mu, "mass ratio m/M (ignored with --free)");
    spectrum->add_flag("--free", free_ring, "no central mass");
    add_common(spectrum);

    double mu_min = 0.01, mu_max = 1.0;
    int samples = 100;
    CLI::App* sweep = app.add_subcommand("sweep", "classification sweep over mu (CSV)");
    sweep->add_option("-n,--n", n, "ring size")->required();
    sweep->add_option("--mu-min,--mu_min", mu_min, "grid start")->required();
    sweep->add_option("--mu-max,--mu_max", mu_max, "grid end")->required();
    sweep->add_option("--samples", samples, "grid size")->required();
    add_common(sweep, false);

    double periods = 10.0, perturb_eps = 1e-8, tol = 0.0;
    int perturb_mode_flag = -1;
    CLI::App* simulate = app.add_subcommand("simulate", "nonlinear integration of the ring");
    simulate->add_option("-n,--n", n, "ring size")->required();
    simulate->add_option("--mu", mu, "mass ratio m/M (ignored with --free)");
    simulate->add_flag("--free", free_ring, "no central mass");
    simulate->add_option("--periods", periods, "integration span in ring periods");
    simulate->add_option("--perturb-mode,--perturb_mode", perturb_mode_flag,
                         "mode index to perturb along (omit for the pure equilibrium)");
    simulate->add_option("--perturb-eps,--perturb_eps", perturb_eps,
                         "perturbation size in units of r");
    simulate->add_option("--tol", tol, "integrator relative tolerance");
    simulate->add_option("--out", out_path, "trajectory CSV path (summary goes to stdout)");

    std::string level = "quick";
    CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
    verify->add_option("--level", level, "suite size")
        ->check(CLI::IsMember({"quick", "full"}));
    verify->add_option("--out", out_path, "report path; stdout if omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (bounds->parsed()) return cmd_bounds(n_min, n_max, format, out_path);
        if (classify->parsed()) return cmd_classify(n, mu, free_ring, format, out_path);
        if (spectrum->parsed()) return cmd_spectrum(n, mu, free_ring, format, out_path);
        if (sweep->parsed()) return cmd_sweep(n, mu_min, mu_max, samples, out_path);
        if (simulate->parsed()) {
            std::optional<int> pm;
            if (simulate->count("--perturb-mode")) pm = perturb_mode_flag;
            return cmd_simulate(n, mu, free_ring, periods, pm, perturb_eps, tol, out_path);
        }
        if (verify->parsed()) return cmd_verify(level, out_path);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return 0;
}
