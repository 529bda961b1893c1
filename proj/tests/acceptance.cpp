// Acceptance suite. Every criterion prints exactly one [PASS]/[FAIL] line;
// the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dxa/dxa.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

double rel_diff(double a, double b) {
    const double diff = std::abs(a - b);
    if (diff == 0.0)
        return 0.0;
    return diff / std::max(std::abs(a), std::abs(b));
}

// ---- 1. reduction identity -------------------------------------------------

Outcome reduction_identity() {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t N = 1024;
    const auto grid = dxa::scale_grid(16, N / 4, 40);
    double worst = 0.0;
    for (std::size_t i = 0; i < 100; ++i) {
        dxa::TimeSeries x = [&]() {
            if (i % 2 == 0)
                return dxa::TimeSeries(dxa::gaussian_noise(1000 + i, N));
            const double rho = 0.1 * static_cast<double>(1 + (i / 2) % 4);
            dxa::ArfimaSpec spec{rho, N, 512, 2000 + i};
            return dxa::arfima_generate(spec);
        }();
        const auto cross = dxa::dxa_curve(x, x, grid);
        const auto single = dxa::dfa_curve(x, grid);
        for (std::size_t k = 0; k < cross.f2.size(); ++k)
            worst = std::max(worst, rel_diff(cross.f2[k], single.f2[k]));
    }
    const double elapsed = seconds_since(start);
    return {worst <= 1e-10 && elapsed < 10.0,
            fmt("max_rel_err=%.2e elapsed=%.2fs (limits 1e-10, 10s)", worst, elapsed)};
}

// ---- 2. oracle equivalence ---------------------------------------------------

Outcome oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (std::size_t N : {64u, 128u, 256u}) {
        std::vector<std::pair<dxa::Profile, dxa::Profile>> pairs;
        {
            const auto a = oracle::random_values(10 + N, N, 2.0);
            const auto b = oracle::random_values(20 + N, N, 2.0);
            pairs.emplace_back(dxa::build_profile(dxa::TimeSeries(a)),
                               dxa::build_profile(dxa::TimeSeries(b)));
        }
        {
            dxa::ArfimaSpec sa{0.1, N, 256, 30 + N};
            dxa::ArfimaSpec sb{0.4, N, 256, 30 + N};
            const auto [ya, yb] = dxa::generate_pair(sa, sb, dxa::CouplingMode::Same);
            pairs.emplace_back(dxa::build_profile(ya), dxa::build_profile(yb));
        }
        {
            auto a = oracle::random_values(40 + N, N);
            auto b = oracle::random_values(50 + N, N);
            for (std::size_t i = 0; i < N; ++i) {
                a[i] += 0.2 * static_cast<double>(i);
                b[i] -= 0.1 * static_cast<double>(i);
            }
            pairs.emplace_back(dxa::build_profile(dxa::TimeSeries(a)),
                               dxa::build_profile(dxa::TimeSeries(b)));
        }
        for (const auto& [pa, pb] : pairs) {
            for (std::size_t n = 4; n + 1 <= N; ++n) {
                const double fast = dxa::detrended_covariance_at_scale(pa, pb, n);
                const double naive = oracle::detrended_covariance_naive(pa, pb, n);
                worst = std::max(worst, rel_diff(fast, naive));
            }
        }
    }
    const double elapsed = seconds_since(start);
    return {worst <= 1e-8 && elapsed < 5.0,
            fmt("max_rel_err=%.2e elapsed=%.2fs (limits 1e-8, 5s)", worst, elapsed)};
}

// ---- 3/4. coupled experiment -------------------------------------------------

dxa::CoupledReport coupled_report() {
    static const dxa::CoupledReport report = []() {
        dxa::ExperimentConfig config; // seed 42, 10 realizations, N = 2^15
        return dxa::run_coupled_experiment(config);
    }();
    return report;
}

Outcome coupled_exponents() {
    const auto start = std::chrono::steady_clock::now();
    const auto report = coupled_report();
    const double elapsed = seconds_since(start);
    const bool pass = report.pass_h_a() && report.pass_h_b() && report.pass_lambda() &&
                      report.pass_consistency() && elapsed < 120.0;
    return {pass,
            fmt("mean_H=%.3f (0.60+-0.05) mean_H'=%.3f (0.90+-0.05) mean_lambda=%.3f "
                "(0.75+-0.06) |lambda-(H+H')/2|=%.3f (<=0.04) elapsed=%.1fs (<120s)",
                report.h_a.mean, report.h_b.mean, report.lambda.mean,
                std::abs(report.lambda.mean - 0.5 * (report.h_a.mean + report.h_b.mean)),
                elapsed)};
}

Outcome negated_case() {
    const auto report = coupled_report();
    return {report.pass_negated(),
            fmt("all-negative curves in %zu/%zu seeds (need all)",
                report.negated_all_negative_count, report.runs.size())};
}

// ---- 5. uncoupled experiment --------------------------------------------------

Outcome uncoupled_diagnosis() {
    dxa::ExperimentConfig config;
    const auto report = dxa::run_uncoupled_experiment(config);
    std::string detail;
    bool pass = true;
    for (const auto& pair : report.pairs) {
        pass = pass && pair.pass();
        detail += fmt("pair(%.1f,%.1f): no_unique=%zu/%zu neg_frac=%.2f  ", pair.rho_a,
                      pair.rho_b, pair.no_unique_count, pair.runs.size(),
                      pair.mean_negative_fraction);
    }
    detail += "(need >=9/10 and neg_frac in (0.2, 0.8))";
    return {pass, detail};
}

// ---- 6. walk covariance identity ----------------------------------------------

Outcome walk_covariance_identity() {
    const auto start = std::chrono::steady_clock::now();
    const double theta = 0.6, c = 0.5;
    const double cc = std::sqrt(1.0 - c * c);
    const std::size_t M = 10000;
    double worst_z = 0.0;
    bool pass = true;
    std::string detail;
    for (std::size_t n : {2u, 5u, 10u, 50u}) {
        dxa::CorrelationFunction x;
        x.kind = dxa::CorrelationKind::Cross;
        for (std::size_t k = 0; k < n; ++k) {
            x.lags.push_back(k);
            x.values.push_back(k == 0 ? c * (1.0 + theta * theta)
                                      : (k == 1 ? c * theta : 0.0));
        }
        const double rhs = dxa::walk_covariance_rhs(x, n);

        const auto e = dxa::gaussian_noise(7000 + n, M * (n + 1));
        const auto g =
            dxa::gaussian_noise(dxa::detail::derive_seed(7000 + n, 1), M * (n + 1));
        std::vector<double> ra(M), rb(M);
        for (std::size_t m = 0; m < M; ++m) {
            const std::size_t base = m * (n + 1);
            double sa = 0.0, sb = 0.0;
            for (std::size_t i = 1; i <= n; ++i) {
                sa += e[base + i] + theta * e[base + i - 1];
                sb += (c * e[base + i] + cc * g[base + i]) +
                      theta * (c * e[base + i - 1] + cc * g[base + i - 1]);
            }
            ra[m] = sa;
            rb[m] = sb;
        }
        double ma = 0.0, mb = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            ma += ra[m];
            mb += rb[m];
        }
        ma /= static_cast<double>(M);
        mb /= static_cast<double>(M);
        std::vector<double> prod(M);
        double cov = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            prod[m] = (ra[m] - ma) * (rb[m] - mb);
            cov += prod[m];
        }
        cov /= static_cast<double>(M);
        double var = 0.0;
        for (std::size_t m = 0; m < M; ++m)
            var += (prod[m] - cov) * (prod[m] - cov);
        const double se =
            std::sqrt(var / static_cast<double>(M - 1) / static_cast<double>(M));
        const double z = std::abs(cov - rhs) / se;
        worst_z = std::max(worst_z, z);
        pass = pass && z <= 4.0;
    }
    const double elapsed = seconds_since(start);
    pass = pass && elapsed < 60.0;
    detail = fmt("max |z|=%.2f over n in {2,5,10,50} (limit 4 std errors) elapsed=%.1fs",
                 worst_z, elapsed);
    return {pass, detail};
}

// ---- 7. invariant suite --------------------------------------------------------

Outcome invariant_suite() {
    std::string failures;

    const std::size_t N = 4096;
    const auto grid = dxa::scale_grid(8, N / 4, 16);
    dxa::ArfimaSpec sa{0.1, N, 1000, 909};
    dxa::ArfimaSpec sb{0.4, N, 1000, 909};
    const auto [ya, yb] = dxa::generate_pair(sa, sb, dxa::CouplingMode::Same);

    // symmetry (exact)
    {
        const auto xy = dxa::dxa_curve(ya, yb, grid);
        const auto yx = dxa::dxa_curve(yb, ya, grid);
        for (std::size_t i = 0; i < xy.f2.size(); ++i)
            if (xy.f2[i] != yx.f2[i])
                failures += "symmetry ";
    }
    // bilinearity (1e-12)
    {
        std::vector<double> va(ya.samples()), vb(yb.samples());
        for (auto& v : va)
            v *= 2.5;
        for (auto& v : vb)
            v *= -1.25;
        const auto base = dxa::dxa_curve(ya, yb, grid);
        const auto scaled = dxa::dxa_curve(dxa::TimeSeries(va), dxa::TimeSeries(vb), grid);
        for (std::size_t i = 0; i < base.f2.size(); ++i)
            if (rel_diff(scaled.f2[i], 2.5 * -1.25 * base.f2[i]) > 1e-12) {
                failures += "bilinearity ";
                break;
            }
    }
    // shift invariance (1e-10)
    {
        std::vector<double> shifted(ya.samples());
        for (auto& v : shifted)
            v += 7.25;
        const auto base = dxa::dxa_curve(ya, yb, grid);
        const auto moved = dxa::dxa_curve(dxa::TimeSeries(shifted), yb, grid);
        for (std::size_t i = 0; i < base.f2.size(); ++i)
            if (rel_diff(moved.f2[i], base.f2[i]) > 1e-10) {
                failures += "shift-invariance ";
                break;
            }
    }
    // Cauchy-Schwarz (1e-12 slack)
    {
        const auto cross = dxa::dxa_curve(ya, yb, grid);
        const auto da = dxa::dfa_curve(ya, grid);
        const auto db = dxa::dfa_curve(yb, grid);
        for (std::size_t i = 0; i < cross.f2.size(); ++i) {
            const double bound = std::sqrt(da.f2[i] * db.f2[i]);
            if (std::abs(cross.f2[i]) > bound * (1.0 + 1e-12)) {
                failures += "cauchy-schwarz ";
                break;
            }
        }
    }
    // fit scale invariance (1e-12) and exact power-law recovery (1e-12)
    {
        dxa::FluctuationCurve curve;
        curve.kind = dxa::CurveKind::DXA;
        curve.series_length = N;
        curve.grid = grid;
        for (std::size_t n : grid.scales) {
            const double fs = 3.0 * std::pow(static_cast<double>(n), 0.75);
            curve.f_signed.push_back(fs);
            curve.f2.push_back(fs * fs);
        }
        const auto fit = dxa::fit_power_law(curve, grid.front(), grid.back());
        if (std::abs(fit.exponent - 0.75) > 1e-12 || std::abs(fit.amplitude - 3.0) > 1e-12 ||
            std::abs(fit.r_squared - 1.0) > 1e-12)
            failures += "power-law-recovery ";

        auto scaled = curve;
        for (std::size_t i = 0; i < scaled.f2.size(); ++i) {
            scaled.f2[i] *= 42.25;
            scaled.f_signed[i] *= 6.5;
        }
        const auto sfit = dxa::fit_power_law(scaled, grid.front(), grid.back());
        if (std::abs(sfit.exponent - fit.exponent) > 1e-12)
            failures += "fit-scale-invariance ";
    }

    if (failures.empty())
        return {true,
                "symmetry, bilinearity, shift invariance, Cauchy-Schwarz, fit scale "
                "invariance, exact power-law recovery"};
    return {false, "failed: " + failures};
}

// ---- 8. determinism -------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const char* cli = std::getenv("DXA_CLI");
    if (!cli)
        return {false, "DXA_CLI not set"};
    const fs::path dir = fs::temp_directory_path() / "dxa_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);

    auto run = [&](const std::string& args) {
        const std::string cmd = std::string(cli) + " " + args + " > " +
                                (dir / "out.txt").string() + " 2> " +
                                (dir / "err.txt").string();
        return std::system(cmd.c_str());
    };

    const std::string gen_args =
        "gen-arfima --rho 0.1 --rho2 0.4 --coupling same --n 4096 --seed 99 "
        "--truncation 1000 --out ";
    if (run(gen_args + (dir / "g1.csv").string()) != 0)
        return {false, "gen-arfima failed"};
    if (run(gen_args + (dir / "g2.csv").string()) != 0)
        return {false, "gen-arfima failed"};
    const bool gen_same = slurp(dir / "g1.csv") == slurp(dir / "g2.csv");

    const std::string rep_args =
        "reproduce --experiment fig1a --n 2048 --realizations 3 --truncation 500 --seed 5 "
        "--out ";
    if (run(rep_args + (dir / "r1.json").string()) != 0)
        return {false, "reproduce failed"};
    if (run(rep_args + (dir / "r2.json").string()) != 0)
        return {false, "reproduce failed"};
    const bool rep_same = slurp(dir / "r1.json") == slurp(dir / "r2.json");
    const bool nonempty = !slurp(dir / "g1.csv").empty() && !slurp(dir / "r1.json").empty();

    fs::remove_all(dir);
    return {gen_same && rep_same && nonempty,
            fmt("gen-arfima bit-identical=%s reproduce bit-identical=%s",
                gen_same ? "yes" : "no", rep_same ? "yes" : "no")};
}

// ---- 9. performance ---------------------------------------------------------------

Outcome performance() {
    const std::size_t N = 1u << 20;
    const auto na = dxa::gaussian_noise(321, N);
    const auto ng = dxa::gaussian_noise(322, N);
    std::vector<double> nb(N);
    for (std::size_t i = 0; i < N; ++i)
        nb[i] = 0.6 * na[i] + 0.8 * ng[i];
    const dxa::TimeSeries a(na), b(nb);
    const auto grid = dxa::scale_grid(16, N / 4, 40);

    const auto start = std::chrono::steady_clock::now();
    const auto curve = dxa::dxa_curve(a, b, grid);
    const double elapsed = seconds_since(start);
    const bool sane = curve.f2.size() == grid.size();
    return {sane && elapsed < 10.0,
            fmt("N=2^20, %zu scales in %.2fs (limit 10s)", grid.size(), elapsed)};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"reduction identity dxa(x,x) == dfa(x)", reduction_identity},
        {"incremental covariance matches naive refit", oracle_equivalence},
        {"coupled pairs: H, H', lambda", coupled_exponents},
        {"negated noise: all-negative covariance", negated_case},
        {"uncoupled pairs: no unique power law", uncoupled_diagnosis},
        {"walk covariance identity vs Monte Carlo", walk_covariance_identity},
        {"invariant suite", invariant_suite},
        {"bit-identical reruns of gen-arfima and reproduce", determinism},
        {"single curve at N=2^20 under 10s", performance},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %zu. %s — %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, outcome.detail.c_str());
        std::fflush(stdout);
        if (!outcome.pass)
            ++failures;
    }
    if (failures > 0) {
        std::printf("%d of %zu acceptance criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
    return 0;
}
