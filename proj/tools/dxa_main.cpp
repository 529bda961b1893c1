// dxa — command line frontend for detrended cross-correlation analysis,
// detrended fluctuation analysis, long-memory series generation, and the
// synthetic validation experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dxa/dxa.hpp"

namespace {

struct InputOptions {
    std::string path;
    std::size_t column = 0;
    std::string delimiter = ",";
    std::string header = "auto";
};

void add_input_options(CLI::App* cmd, InputOptions& opts, const std::string& suffix = "") {
    cmd->add_option("--input" + suffix, opts.path, "delimited text file")->required();
    cmd->add_option("--column" + suffix, opts.column, "0-based column index");
    cmd->add_option("--delimiter" + suffix, opts.delimiter, "field delimiter (one character)")
        ->check([](const std::string& s) {
            return s.size() == 1 ? std::string{} : std::string{"delimiter must be one character"};
        });
    cmd->add_option("--header" + suffix, opts.header, "header row handling: auto|skip|keep")
        ->check(CLI::IsMember({"auto", "skip", "keep"}));
}

dxa::TimeSeries load_series(const InputOptions& opts) {
    dxa::ColumnSpec spec;
    spec.path = opts.path;
    spec.column = opts.column;
    spec.delimiter = opts.delimiter[0];
    spec.header = opts.header == "skip"   ? dxa::HeaderMode::Skip
                  : opts.header == "keep" ? dxa::HeaderMode::Keep
                                          : dxa::HeaderMode::Auto;
    return dxa::read_series(spec);
}

dxa::TimeSeries apply_chain(dxa::TimeSeries series, const std::string& chain) {
    if (chain.empty())
        return series;
    std::size_t begin = 0, stage = 0;
    while (begin <= chain.size()) {
        const std::size_t end = chain.find(',', begin);
        const std::string token =
            chain.substr(begin, end == std::string::npos ? end : end - begin);
        ++stage;
        try {
            if (token == "diff")
                series = dxa::diff(series);
            else if (token == "log-diff")
                series = dxa::log_diff(series);
            else if (token == "abs")
                series = dxa::abs_values(series);
            else if (token == "integrate")
                series = dxa::TimeSeries(dxa::integrated_profile(series).values, series.label());
            else
                throw dxa::InvalidParameter("unknown transform '" + token + "'");
        } catch (const dxa::Error& e) {
            throw dxa::InvalidInput("transform stage " + std::to_string(stage) + " ('" + token +
                                    "'): " + e.what());
        }
        if (end == std::string::npos)
            break;
        begin = end + 1;
    }
    return series;
}

struct AnalysisOptions {
    std::string transform;
    std::size_t min_scale = 16;
    std::size_t max_scale = 0; // 0: N/4
    std::size_t points = 40;
    std::size_t fit_lo = 0; // 0: grid lower bound
    std::size_t fit_hi = 0; // 0: grid upper bound
    std::string out;
    std::string format = "json";
    double tau = 0.05;
    double r2_min = 0.98;
};

void add_analysis_options(CLI::App* cmd, AnalysisOptions& opts) {
    cmd->add_option("--transform", opts.transform,
                    "comma-separated chain of diff|log-diff|abs|integrate");
    cmd->add_option("--min-scale", opts.min_scale, "smallest box parameter n (>= 4)");
    cmd->add_option("--max-scale", opts.max_scale, "largest box parameter n (default N/4)");
    cmd->add_option("--points", opts.points, "number of log-spaced scales");
    cmd->add_option("--fit-lo", opts.fit_lo, "lower scale of the power-law fit");
    cmd->add_option("--fit-hi", opts.fit_hi, "upper scale of the power-law fit");
    cmd->add_option("--out", opts.out, "curve output file");
    cmd->add_option("--format", opts.format, "curve file format")
        ->check(CLI::IsMember({"json", "csv"}));
}

dxa::ScaleGrid resolve_grid(const AnalysisOptions& opts, std::size_t n) {
    const std::size_t max_scale = opts.max_scale ? opts.max_scale : n / 4;
    try {
        return dxa::scale_grid(opts.min_scale, max_scale, opts.points);
    } catch (const dxa::Error& e) {
        throw dxa::InvalidParameter(std::string("--min-scale/--max-scale/--points: ") + e.what() +
                                    " (series has " + std::to_string(n) + " samples)");
    }
}

void print_fit(const dxa::FluctuationCurve& curve, const dxa::PowerLawFit& fit) {
    std::printf("kind %s\n", dxa::to_string(curve.kind));
    std::printf("n %zu\n", curve.series_length);
    std::printf("scales %zu\n", curve.grid.size());
    std::printf("exponent %.6f\n", fit.exponent);
    std::printf("stderr %.6f\n", fit.exponent_stderr);
    std::printf("r2 %.6f\n", fit.r_squared);
    std::printf("amplitude %.6g\n", fit.amplitude);
    std::printf("fit_range %zu %zu\n", fit.n_lo, fit.n_hi);
}

void write_curve_if_requested(const dxa::FluctuationCurve& curve, const dxa::PowerLawFit& fit,
                              const AnalysisOptions& opts,
                              std::map<std::string, std::string> params) {
    if (opts.out.empty())
        return;
    const auto format = opts.format == "csv" ? dxa::CurveFormat::Csv : dxa::CurveFormat::Json;
    dxa::write_curve(curve, &fit, opts.out, format, params);
    std::fprintf(stderr, "wrote %s\n", opts.out.c_str());
}

std::string rho_validator(const std::string& value) {
    try {
        const double v = std::stod(value);
        if (!(v > 0.0 && v < 0.5))
            return "rho out of (0, 0.5)";
    } catch (const std::exception&) {
        return "not a number";
    }
    return {};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"detrended cross-correlation analysis toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "defaults from a key=value file");
    app.get_formatter()->column_width(30);

    // ---- gen-arfima ------------------------------------------------------
    struct {
        double rho = 0.1;
        double rho2 = 0.0;
        std::string coupling = "same";
        std::size_t n = 0;
        std::uint64_t seed = 42;
        std::size_t truncation = 10000;
        std::int64_t burn_in = -1;
        std::string out;
    } gen;
    auto* cmd_gen = app.add_subcommand("gen-arfima", "generate long-memory (ARFIMA) series");
    cmd_gen->add_option("--rho", gen.rho, "memory parameter, 0 < rho < 0.5")
        ->required()
        ->check(CLI::Validator(rho_validator, "RHO"));
    auto* opt_rho2 = cmd_gen->add_option("--rho2", gen.rho2, "second series memory parameter")
                         ->check(CLI::Validator(rho_validator, "RHO"));
    cmd_gen->add_option("--coupling", gen.coupling, "noise coupling of the pair")
        ->check(CLI::IsMember({"same", "negated", "independent"}))
        ->needs(opt_rho2);
    cmd_gen->add_option("--n", gen.n, "series length")->required()->check(CLI::PositiveNumber);
    cmd_gen->add_option("--seed", gen.seed, "noise seed");
    cmd_gen->add_option("--truncation", gen.truncation, "lag window of the recursion");
    cmd_gen->add_option("--burn-in", gen.burn_in, "discarded warmup samples (default: truncation)");
    cmd_gen->add_option("--out", gen.out, "output CSV, one column per series")->required();
    cmd_gen->callback([&]() {
        dxa::ArfimaSpec spec{gen.rho, gen.n, gen.truncation, gen.seed};
        if (gen.burn_in >= 0)
            spec.burn_in = static_cast<std::size_t>(gen.burn_in);
        if (opt_rho2->count() == 0) {
            const auto series = dxa::arfima_generate(spec);
            dxa::write_series_csv(gen.out, {&series});
        } else {
            dxa::ArfimaSpec specB = spec;
            specB.rho = gen.rho2;
            const auto mode = gen.coupling == "negated"       ? dxa::CouplingMode::Negated
                              : gen.coupling == "independent" ? dxa::CouplingMode::Independent
                                                              : dxa::CouplingMode::Same;
            const auto [a, b] = dxa::generate_pair(spec, specB, mode);
            dxa::write_series_csv(gen.out, {&a, &b});
        }
        std::fprintf(stderr, "wrote %s\n", gen.out.c_str());
    });

    // ---- dfa -------------------------------------------------------------
    struct {
        InputOptions input;
        AnalysisOptions analysis;
    } dfa;
    auto* cmd_dfa = app.add_subcommand("dfa", "detrended fluctuation analysis of one series");
    add_input_options(cmd_dfa, dfa.input);
    add_analysis_options(cmd_dfa, dfa.analysis);
    cmd_dfa->callback([&]() {
        const auto series = apply_chain(load_series(dfa.input), dfa.analysis.transform);
        const auto grid = resolve_grid(dfa.analysis, series.size());
        const auto curve = dxa::dfa_curve(series, grid);
        const std::size_t lo = dfa.analysis.fit_lo ? dfa.analysis.fit_lo : grid.front();
        const std::size_t hi = dfa.analysis.fit_hi ? dfa.analysis.fit_hi : grid.back();
        const auto fit = dxa::fit_power_law(curve, lo, hi);
        print_fit(curve, fit);
        write_curve_if_requested(curve, fit, dfa.analysis,
                                 {{"input", dfa.input.path},
                                  {"column", std::to_string(dfa.input.column)},
                                  {"transform", dfa.analysis.transform}});
    });

    // ---- dxa -------------------------------------------------------------
    struct {
        InputOptions input_a;
        InputOptions input_b;
        AnalysisOptions analysis;
    } dxa_cmd;
    auto* cmd_dxa =
        app.add_subcommand("dxa", "detrended cross-correlation analysis of two series");
    add_input_options(cmd_dxa, dxa_cmd.input_a, "-a");
    add_input_options(cmd_dxa, dxa_cmd.input_b, "-b");
    add_analysis_options(cmd_dxa, dxa_cmd.analysis);
    cmd_dxa->add_option("--tau", dxa_cmd.analysis.tau,
                        "mixed-sign threshold of the power-law diagnosis");
    cmd_dxa->add_option("--r2-min", dxa_cmd.analysis.r2_min,
                        "minimum r-squared of the power-law diagnosis");
    cmd_dxa->callback([&]() {
        const auto a = apply_chain(load_series(dxa_cmd.input_a), dxa_cmd.analysis.transform);
        const auto b = apply_chain(load_series(dxa_cmd.input_b), dxa_cmd.analysis.transform);
        const auto grid = resolve_grid(dxa_cmd.analysis, a.size());
        const auto curve = dxa::dxa_curve(a, b, grid);
        const std::size_t lo = dxa_cmd.analysis.fit_lo ? dxa_cmd.analysis.fit_lo : grid.front();
        const std::size_t hi = dxa_cmd.analysis.fit_hi ? dxa_cmd.analysis.fit_hi : grid.back();
        const auto fit = dxa::fit_power_law(curve, lo, hi);
        const auto verdict = dxa::cross_correlation_diagnosis(
            curve, fit, {dxa_cmd.analysis.tau, dxa_cmd.analysis.r2_min});
        print_fit(curve, fit);
        std::printf("negative_fraction %.6f\n", fit.negative_fraction);
        std::printf("diagnosis %s\n", dxa::to_string(verdict));
        write_curve_if_requested(curve, fit, dxa_cmd.analysis,
                                 {{"input_a", dxa_cmd.input_a.path},
                                  {"input_b", dxa_cmd.input_b.path},
                                  {"column_a", std::to_string(dxa_cmd.input_a.column)},
                                  {"column_b", std::to_string(dxa_cmd.input_b.column)},
                                  {"transform", dxa_cmd.analysis.transform}});
    });

    // ---- acorr / xcorr ---------------------------------------------------
    struct {
        InputOptions input;
        std::string transform;
        std::size_t max_lag = 100;
        std::string out;
    } acorr;
    auto* cmd_acorr = app.add_subcommand("acorr", "sample autocorrelation function");
    add_input_options(cmd_acorr, acorr.input);
    cmd_acorr->add_option("--transform", acorr.transform, "transform chain applied first");
    cmd_acorr->add_option("--max-lag", acorr.max_lag, "largest lag");
    cmd_acorr->add_option("--out", acorr.out, "output CSV (default: stdout)");
    cmd_acorr->callback([&]() {
        const auto series = apply_chain(load_series(acorr.input), acorr.transform);
        const auto corr = dxa::autocorrelation(series, acorr.max_lag);
        if (acorr.out.empty()) {
            dxa::write_correlation_csv(std::cout, corr);
        } else {
            std::ofstream out(acorr.out);
            if (!out)
                throw dxa::IoError("cannot open " + acorr.out + " for writing");
            dxa::write_correlation_csv(out, corr);
        }
    });

    struct {
        InputOptions input_a;
        InputOptions input_b;
        std::string transform;
        std::size_t max_lag = 100;
        std::string out;
    } xcorr;
    auto* cmd_xcorr = app.add_subcommand("xcorr", "sample cross-correlation function");
    add_input_options(cmd_xcorr, xcorr.input_a, "-a");
    add_input_options(cmd_xcorr, xcorr.input_b, "-b");
    cmd_xcorr->add_option("--transform", xcorr.transform, "transform chain applied to both");
    cmd_xcorr->add_option("--max-lag", xcorr.max_lag, "largest lag");
    cmd_xcorr->add_option("--out", xcorr.out, "output CSV (default: stdout)");
    cmd_xcorr->callback([&]() {
        const auto a = apply_chain(load_series(xcorr.input_a), xcorr.transform);
        const auto b = apply_chain(load_series(xcorr.input_b), xcorr.transform);
        const auto corr = dxa::cross_correlation(a, b, xcorr.max_lag);
        if (xcorr.out.empty()) {
            dxa::write_correlation_csv(std::cout, corr);
        } else {
            std::ofstream out(xcorr.out);
            if (!out)
                throw dxa::IoError("cannot open " + xcorr.out + " for writing");
            dxa::write_correlation_csv(out, corr);
        }
    });

    // ---- fit -------------------------------------------------------------
    struct {
        std::string input;
        std::size_t lo = 0;
        std::size_t hi = 0;
        double tau = 0.05;
        double r2_min = 0.98;
    } fitcmd;
    auto* cmd_fit = app.add_subcommand("fit", "power-law fit of a stored curve file");
    cmd_fit->add_option("--input", fitcmd.input, "JSON curve file")->required();
    cmd_fit->add_option("--lo", fitcmd.lo, "lower scale (default: grid bound)");
    cmd_fit->add_option("--hi", fitcmd.hi, "upper scale (default: grid bound)");
    cmd_fit->add_option("--tau", fitcmd.tau, "mixed-sign threshold of the diagnosis");
    cmd_fit->add_option("--r2-min", fitcmd.r2_min, "minimum r-squared of the diagnosis");
    cmd_fit->callback([&]() {
        const auto file = dxa::read_curve(fitcmd.input);
        const std::size_t lo = fitcmd.lo ? fitcmd.lo : file.curve.grid.front();
        const std::size_t hi = fitcmd.hi ? fitcmd.hi : file.curve.grid.back();
        const auto fit = dxa::fit_power_law(file.curve, lo, hi);
        print_fit(file.curve, fit);
        std::printf("negative_fraction %.6f\n", fit.negative_fraction);
        if (file.curve.kind == dxa::CurveKind::DXA) {
            const auto verdict =
                dxa::cross_correlation_diagnosis(file.curve, fit, {fitcmd.tau, fitcmd.r2_min});
            std::printf("diagnosis %s\n", dxa::to_string(verdict));
        }
    });

    // ---- transform -------------------------------------------------------
    struct {
        InputOptions input;
        std::string chain;
        std::string out;
    } trans;
    auto* cmd_trans = app.add_subcommand("transform", "apply a transform chain to one column");
    add_input_options(cmd_trans, trans.input);
    cmd_trans->add_option("--chain", trans.chain, "comma-separated chain of diff|log-diff|abs|integrate")
        ->required();
    cmd_trans->add_option("--out", trans.out, "output CSV")->required();
    cmd_trans->callback([&]() {
        const auto series = apply_chain(load_series(trans.input), trans.chain);
        dxa::write_series_csv(trans.out, {&series});
        std::fprintf(stderr, "wrote %s\n", trans.out.c_str());
    });

    // ---- reproduce -------------------------------------------------------
    struct {
        std::string experiment;
        std::uint64_t seed = 42;
        std::size_t realizations = 10;
        std::size_t n = 1u << 15;
        std::size_t truncation = 10000;
        std::string out;
    } rep;
    auto* cmd_rep =
        app.add_subcommand("reproduce", "synthetic coupled/uncoupled validation experiments");
    cmd_rep->add_option("--experiment", rep.experiment, "fig1a (coupled) or fig1b (uncoupled)")
        ->required()
        ->check(CLI::IsMember({"fig1a", "fig1b"}));
    cmd_rep->add_option("--seed", rep.seed, "base seed");
    cmd_rep->add_option("--realizations", rep.realizations, "number of independent realizations")
        ->check(CLI::PositiveNumber);
    cmd_rep->add_option("--n", rep.n, "series length")->check(CLI::Range(128, 1 << 24));
    cmd_rep->add_option("--truncation", rep.truncation, "lag window of the generator");
    cmd_rep->add_option("--out", rep.out, "JSON report file");
    cmd_rep->callback([&]() {
        dxa::ExperimentConfig config;
        config.seed = rep.seed;
        config.realizations = rep.realizations;
        config.length = rep.n;
        config.truncation = rep.truncation;

        nlohmann::json report_json;
        bool pass = false;
        if (rep.experiment == "fig1a") {
            const auto report = dxa::run_coupled_experiment(config);
            report_json = dxa::to_json(report, config);
            pass = report.pass();
            std::printf("experiment fig1a\n");
            std::printf("mean_h_a %.6f sd %.6f\n", report.h_a.mean, report.h_a.sd);
            std::printf("mean_h_b %.6f sd %.6f\n", report.h_b.mean, report.h_b.sd);
            std::printf("mean_lambda %.6f sd %.6f\n", report.lambda.mean, report.lambda.sd);
            std::printf("negated_all_negative %zu/%zu\n", report.negated_all_negative_count,
                        report.runs.size());
            std::printf("check h_a %s\n", report.pass_h_a() ? "pass" : "fail");
            std::printf("check h_b %s\n", report.pass_h_b() ? "pass" : "fail");
            std::printf("check lambda %s\n", report.pass_lambda() ? "pass" : "fail");
            std::printf("check consistency %s\n", report.pass_consistency() ? "pass" : "fail");
            std::printf("check negated %s\n", report.pass_negated() ? "pass" : "fail");
        } else {
            const auto report = dxa::run_uncoupled_experiment(config);
            report_json = dxa::to_json(report, config);
            pass = report.pass();
            std::printf("experiment fig1b\n");
            for (const auto& pair : report.pairs) {
                std::printf("pair rho %.2f %.2f no_unique %zu/%zu negative_fraction %.6f %s\n",
                            pair.rho_a, pair.rho_b, pair.no_unique_count, pair.runs.size(),
                            pair.mean_negative_fraction, pair.pass() ? "pass" : "fail");
            }
        }
        std::printf("result %s\n", pass ? "pass" : "fail");
        if (!rep.out.empty()) {
            std::ofstream out(rep.out);
            if (!out)
                throw dxa::IoError("cannot open " + rep.out + " for writing");
            out << report_json.dump(2) << "\n";
            std::fprintf(stderr, "wrote %s\n", rep.out.c_str());
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const dxa::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
