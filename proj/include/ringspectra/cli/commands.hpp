#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ringspectra/cli/verify.hpp"
#include "ringspectra/constructions/families.hpp"
#include "ringspectra/density/density.hpp"
#include "ringspectra/error.hpp"
#include "ringspectra/eval/engine.hpp"
#include "ringspectra/logic/parser.hpp"
#include "ringspectra/logic/printer.hpp"
#include "ringspectra/spectra/classify.hpp"
#include "ringspectra/spectra/io.hpp"
#include "ringspectra/spectra/spectrum.hpp"

namespace ringspectra::cli {

enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,
    kUsage = 2,
    kIo = 3,
    kParse = 4,
    kResource = 5,
    kEval = 6,
};

/// Input or output file trouble.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string command;
    std::string formula_file;
    std::string formula_text;
    std::string spectrum_file;
    std::string output_file;
    std::string out_format = "csv";
    std::uint64_t modulus = 0;
    std::uint64_t bound = 10000;
    std::string engine = "auto";
    std::uint64_t max_d = 12;
    std::optional<std::uint64_t> threshold;
    std::string h = "identity";
    std::vector<std::uint64_t> samples;
    std::string seq;
    std::string family;
    std::map<std::string, std::uint64_t> params;
    bool full_parens = false;
    std::string suite = "paper";
    std::set<int> only;
    std::size_t workers = 1;
    std::uint64_t seed = 1;
};

/// Worker count: RINGSPECTRA_WORKERS if set, else the given value.
inline std::size_t resolve_workers(std::size_t requested) {
    if (const char* env = std::getenv("RINGSPECTRA_WORKERS"); env && *env) {
        try {
            const long long v = std::stoll(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        throw InvalidArgument(std::string("RINGSPECTRA_WORKERS must be a positive integer, got '") + env + "'");
    }
    return requested == 0 ? 1 : requested;
}

inline std::size_t default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path + "'");
    return ss.str();
}

/// Writes to the named file, or to out when the name is empty or "-".
inline void emit(const ExperimentConfig& cfg, std::ostream& out, const std::string& text) {
    if (cfg.output_file.empty() || cfg.output_file == "-") {
        out << text;
        return;
    }
    std::ofstream f(cfg.output_file, std::ios::binary);
    if (!f) throw IoError("cannot write '" + cfg.output_file + "'");
    f << text;
    if (!f) throw IoError("error writing '" + cfg.output_file + "'");
}

inline logic::Formula load_formula(const ExperimentConfig& cfg) {
    if (!cfg.formula_text.empty()) return logic::parse(cfg.formula_text);
    if (cfg.formula_file.empty()) throw InvalidArgument("a formula is required (--formula FILE or --text FORMULA)");
    return logic::parse(cfg.formula_file == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                                                : read_file(cfg.formula_file));
}

inline spectra::Spectrum load_spectrum(const ExperimentConfig& cfg) {
    if (cfg.spectrum_file.empty()) throw InvalidArgument("--spectrum FILE is required");
    std::istringstream in(read_file(cfg.spectrum_file));
    return spectra::read_spectrum(in);
}

inline void check_format(const std::string& f) {
    if (f != "csv" && f != "json") throw InvalidArgument("unknown output format '" + f + "' (expected csv or json)");
}

inline int cmd_parse(const ExperimentConfig& cfg, std::ostream& out) {
    const logic::Formula f = load_formula(cfg);
    const auto fv = logic::free_vars(f);
    std::string text = (cfg.full_parens ? logic::to_string(f) : logic::to_text(f)) + "\n";
    if (fv.empty()) {
        text += "sentence\n";
    } else {
        text += "free:";
        for (const auto& v : fv) text += " " + v;
        text += "\n";
    }
    emit(cfg, out, text);
    return kOk;
}

inline int cmd_eval(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.modulus == 0) throw InvalidArgument("--modulus must be >= 1");
    if (cfg.modulus > std::numeric_limits<eval::Residue>::max())
        throw ResourceLimit("modulus " + std::to_string(cfg.modulus) + " too large");
    const logic::Formula f = load_formula(cfg);
    const eval::RingContext ctx(cfg.modulus);
    const eval::Engine engine = eval::parse_engine(cfg.engine);
    if (logic::free_vars(f).empty()) {
        emit(cfg, out, eval::eval_sentence(ctx, logic::Sentence(f), engine) ? "true\n" : "false\n");
        return kOk;
    }
    const eval::Relation r = eval::satisfying(ctx, f, engine);
    std::ostringstream ss;
    for (std::size_t c = 0; c < r.arity(); ++c) ss << (c ? "," : "") << r.columns()[c];
    ss << '\n';
    for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t c = 0; c < r.arity(); ++c) ss << (c ? "," : "") << r.row(i)[c];
        ss << '\n';
    }
    emit(cfg, out, ss.str());
    return kOk;
}

inline int cmd_spectrum(const ExperimentConfig& cfg, std::ostream& out) {
    check_format(cfg.out_format);
    const logic::Sentence s(load_formula(cfg));
    const spectra::Spectrum sp =
        spectra::spectrum(s, cfg.bound, {resolve_workers(cfg.workers), eval::parse_engine(cfg.engine), {}});
    std::ostringstream ss;
    if (cfg.out_format == "json") ss << spectra::to_json(sp).dump(2) << '\n';
    else spectra::write_csv(ss, sp);
    emit(cfg, out, ss.str());
    return kOk;
}

inline int cmd_classify(const ExperimentConfig& cfg, std::ostream& out) {
    const spectra::Spectrum sp = load_spectrum(cfg);
    const auto fits = spectra::fit_congruences(sp, cfg.max_d, cfg.threshold);
    json j;
    j["bound"] = sp.bound();
    j["members"] = sp.count();
    j["max_d"] = cfg.max_d;
    json arr = json::array();
    for (const auto& f : fits) {
        json e = spectra::to_json(f);
        std::vector<bool> in_b;
        for (auto a : f.cls.residues) in_b.push_back(spectra::lagarias_in_B(a, f.cls.modulus));
        e["lagarias_in_B"] = in_b;
        arr.push_back(e);
    }
    j["fits"] = arr;
    emit(cfg, out, j.dump(2) + "\n");
    return kOk;
}

inline int cmd_density(const ExperimentConfig& cfg, std::ostream& out) {
    const spectra::Spectrum sp = load_spectrum(cfg);
    const auto h = density::DensityFunction::by_name(cfg.h);
    std::vector<std::uint64_t> samples = cfg.samples;
    if (!cfg.seq.empty()) {
        for (auto t : density::Sequence::parse(cfg.seq).terms())
            if (t <= sp.bound()) samples.push_back(t);
    }
    if (samples.empty()) throw InvalidArgument("density needs --samples or --seq");
    const auto prof = density::density_profile(sp, h, samples);
    std::ostringstream ss;
    ss << "n,pi_S,pi,ratio\n";
    ss.precision(12);
    for (std::size_t i = 0; i < prof.samples.size(); ++i)
        ss << prof.samples[i] << ',' << prof.pi_s[i] << ',' << prof.pi[i] << ',' << prof.ratios[i] << '\n';
    emit(cfg, out, ss.str());
    return kOk;
}

inline int cmd_construct(const ExperimentConfig& cfg, std::ostream& out) {
    const auto fam = constructions::build_family(cfg.family, cfg.params);
    const logic::Formula& f = fam.sentence.formula();
    emit(cfg, out, (cfg.full_parens ? logic::to_string(f) : logic::to_text(f)) + "\n");
    return kOk;
}

inline int cmd_verify(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.suite != "paper") throw InvalidArgument("unknown suite '" + cfg.suite + "'");
    VerifyOptions opt;
    opt.bound = cfg.bound;
    spectra::check_bound(opt.bound);
    opt.workers = resolve_workers(cfg.workers);
    opt.seed = cfg.seed;
    opt.only = cfg.only;
    opt.progress = [&err](const Claim& c) {
        err << c.id << ' ' << to_string(c.status) << ' ' << std::fixed;
        err.precision(2);
        err << c.seconds << "s\n";
        err.flush();
    };
    const VerificationReport rep = verify_suite(opt);
    emit(cfg, out, to_json(rep).dump(2) + "\n");
    return rep.passed() ? kOk : kVerificationFailed;
}

}  // namespace detail

/// Runs one command; errors become messages on err and distinct exit codes.
inline int run(const ExperimentConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        if (cfg.workers == 0) throw InvalidArgument("worker count must be >= 1");
        if (cfg.command == "parse") return detail::cmd_parse(cfg, out);
        if (cfg.command == "eval") return detail::cmd_eval(cfg, out);
        if (cfg.command == "spectrum") return detail::cmd_spectrum(cfg, out);
        if (cfg.command == "classify") return detail::cmd_classify(cfg, out);
        if (cfg.command == "density") return detail::cmd_density(cfg, out);
        if (cfg.command == "construct") return detail::cmd_construct(cfg, out);
        if (cfg.command == "verify") return detail::cmd_verify(cfg, out, err);
        throw InvalidArgument("unknown command '" + cfg.command + "'");
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const SyntaxError& e) {
        err << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const SemanticError& e) {
        err << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const ResourceLimit& e) {
        err << "resource limit: " << e.what() << '\n';
        return kResource;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "evaluation error: " << e.what() << '\n';
        return kEval;
    }
}

}  // namespace ringspectra::cli
