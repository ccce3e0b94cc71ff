#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ringspectra/cli/commands.hpp"

namespace {

std::vector<std::string> split(const std::vector<std::string>& items, char sep) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, sep))
            if (!part.empty()) out.push_back(part);
    }
    return out;
}

std::uint64_t to_natural(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || s[0] == '-')
        throw CLI::ValidationError(what, "'" + s + "' is not a natural number");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    using ringspectra::cli::ExperimentConfig;
    ExperimentConfig cfg;
    cfg.workers = ringspectra::cli::default_workers();
    std::vector<std::string> samples, params, only;

    CLI::App app{"Prime spectra of first-order sentences over residue rings"};
    app.require_subcommand(1);
    app.add_option("--workers", cfg.workers, "worker threads (RINGSPECTRA_WORKERS overrides)")->check(CLI::PositiveNumber);

    auto formula_opts = [&](CLI::App* sub) {
        auto* f = sub->add_option("--formula", cfg.formula_file, "formula file ('-' for stdin)");
        auto* t = sub->add_option("--text", cfg.formula_text, "formula given inline");
        f->excludes(t);
    };
    auto output_opt = [&](CLI::App* sub) { sub->add_option("-o,--output", cfg.output_file, "output file (default stdout)"); };

    auto* parse = app.add_subcommand("parse", "parse a formula and print it back");
    formula_opts(parse);
    parse->add_flag("--full-parens", cfg.full_parens, "print fully parenthesized");
    output_opt(parse);

    auto* eval = app.add_subcommand("eval", "evaluate a formula in Z_m");
    formula_opts(eval);
    eval->add_option("--modulus,-m", cfg.modulus, "ring size m")->required();
    eval->add_option("--engine", cfg.engine, "auto, naive, fast or both");
    output_opt(eval);

    auto* spectrum = app.add_subcommand("spectrum", "primes p <= bound with Z_p satisfying a sentence");
    formula_opts(spectrum);
    spectrum->add_option("--bound", cfg.bound, "largest prime considered");
    spectrum->add_option("--out", cfg.out_format, "csv or json");
    spectrum->add_option("--engine", cfg.engine, "auto, naive, fast or both");
    spectrum->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
    output_opt(spectrum);

    auto* classify = app.add_subcommand("classify", "fit congruence classes to a spectrum");
    classify->add_option("--spectrum", cfg.spectrum_file, "spectrum CSV or JSON")->required();
    classify->add_option("--max-d", cfg.max_d, "largest modulus tried");
    classify->add_option("--threshold", cfg.threshold, "ignore primes at or below this (default max(d, 50))");
    output_opt(classify);

    auto* density = app.add_subcommand("density", "h-density profile of a spectrum");
    density->set_help_flag("--help", "print this help message and exit");
    density->add_option("--spectrum", cfg.spectrum_file, "spectrum CSV or JSON")->required();
    density->add_option("--h", cfg.h, "identity, log or loglog");
    density->add_option("--samples", samples, "sample points, comma separated");
    density->add_option("--seq", cfg.seq, "geometric:q:kmax or doubleexp:q:kmax; terms become samples");
    output_opt(density);

    auto* construct = app.add_subcommand("construct", "build a sentence family");
    construct->add_option("--family", cfg.family, "congruence, cyclotomic, modcount, powres, psi, theta or prime")->required();
    construct->add_option("--params", params, "key=value pairs, e.g. a=1,d=4");
    construct->add_flag("--full-parens", cfg.full_parens, "print fully parenthesized");
    output_opt(construct);

    auto* verify = app.add_subcommand("verify", "run the reproduction suite and write a JSON report");
    verify->add_option("--suite", cfg.suite, "suite name");
    verify->add_option("--bound", cfg.bound, "prime bound for the spectrum claims");
    verify->add_option("--seed", cfg.seed, "seed for the random-formula claim");
    verify->add_option("--only", only, "criterion numbers, comma separated");
    verify->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
    output_opt(verify);

    try {
        app.parse(argc, argv);
        cfg.command = app.get_subcommands().front()->get_name();
        for (const auto& s : split(samples, ',')) cfg.samples.push_back(to_natural(s, "--samples"));
        for (const auto& s : split(only, ',')) cfg.only.insert(static_cast<int>(to_natural(s, "--only")));
        for (const auto& kv : split(params, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw CLI::ValidationError("--params", "expected key=value, got '" + kv + "'");
            cfg.params[kv.substr(0, eq)] = to_natural(kv.substr(eq + 1), "--params");
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ringspectra::cli::kUsage;
    }
    return ringspectra::cli::run(cfg);
}
