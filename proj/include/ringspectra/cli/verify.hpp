#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringspectra/arith/cyclotomic.hpp"
#include "ringspectra/arith/polynomial.hpp"
#include "ringspectra/constructions/families.hpp"
#include "ringspectra/density/density.hpp"
#include "ringspectra/eval/engine.hpp"
#include "ringspectra/logic/parser.hpp"
#include "ringspectra/logic/printer.hpp"
#include "ringspectra/logic/random.hpp"
#include "ringspectra/spectra/classify.hpp"
#include "ringspectra/spectra/spectrum.hpp"

namespace ringspectra::cli {

using json = nlohmann::ordered_json;

enum class Status { Pass, Fail, Skipped };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Skipped: return "skipped";
    }
    return "?";
}

struct Claim {
    Claim() = default;
    Claim(std::string id_, std::string anchor_) : id(std::move(id_)), anchor(std::move(anchor_)) {}

    std::string id;
    std::string anchor;
    Status status = Status::Skipped;
    json measured = json::object();
    std::vector<std::uint64_t> exceptions;
    /// wall time, kept out of the JSON so reports stay reproducible
    double seconds = 0;
};

inline json to_json(const Claim& c) {
    json j;
    j["id"] = c.id;
    j["anchor"] = c.anchor;
    j["status"] = to_string(c.status);
    j["measured"] = c.measured;
    j["exceptions"] = c.exceptions;
    return j;
}

struct VerificationReport {
    std::string suite = "paper";
    std::uint64_t bound = 10000;
    std::size_t workers = 1;
    std::uint64_t seed = 1;
    std::vector<Claim> claims;

    bool passed() const {
        for (const auto& c : claims)
            if (c.status == Status::Fail) return false;
        return true;
    }
};

inline constexpr const char* kReportSchema = "ringspectra.verification/1";

inline json to_json(const VerificationReport& r) {
    json j;
    j["schema"] = kReportSchema;
    j["suite"] = r.suite;
    j["bound"] = r.bound;
    j["workers"] = r.workers;
    j["seed"] = r.seed;
    std::size_t pass = 0, fail = 0, skipped = 0;
    json claims = json::array();
    for (const auto& c : r.claims) {
        claims.push_back(to_json(c));
        (c.status == Status::Pass ? pass : c.status == Status::Fail ? fail : skipped)++;
    }
    j["claims"] = claims;
    j["summary"] = {{"pass", pass}, {"fail", fail}, {"skipped", skipped}};
    return j;
}

struct VerifyOptions {
    std::uint64_t bound = 10000;
    std::size_t workers = 1;
    std::uint64_t seed = 1;
    /// Criterion ids to run (empty: all); the determinism claim reruns 1-11.
    std::set<int> only;
    std::function<void(const Claim&)> progress;
};

namespace detail {

using spectra::Spectrum;

inline std::vector<std::uint64_t> exceptions_of(const Spectrum& got, const Spectrum& want) {
    return spectra::almost_equal(got, want).exceptions;
}

inline void append(std::vector<std::uint64_t>& out, const std::vector<std::uint64_t>& more) {
    out.insert(out.end(), more.begin(), more.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

inline Status status_of(bool ok) { return ok ? Status::Pass : Status::Fail; }

class Suite {
public:
    explicit Suite(const VerifyOptions& opt) : opt_(opt) {}

    Claim c1() {
        Claim c{"C1", "quadratic reciprocity: spectra of x^2+1 and x^2-2"};
        const auto t0 = now();
        const Spectrum f = sp(root("x^2 + 1"));
        const Spectrum g = sp(root("x^2 - 2"));
        const double secs = since(t0);
        const Spectrum want_f = pred([](std::uint64_t p) { return p == 2 || p % 4 == 1; });
        const Spectrum want_g = pred([](std::uint64_t p) { return p == 2 || p % 8 == 1 || p % 8 == 7; });
        const auto ef = exceptions_of(f, want_f), eg = exceptions_of(g, want_g);
        c.exceptions = ef;
        append(c.exceptions, eg);
        c.measured = {{"bound", opt_.bound},
                      {"members_x2p1", f.count()},
                      {"members_x2m2", g.count()},
                      {"exceptions_x2p1", ef},
                      {"exceptions_x2m2", eg},
                      {"time_limit_s", 5},
                      {"within_time_limit", secs < 5}};
        c.status = status_of(ef.empty() && eg.empty() && secs < 5);
        return c;
    }

    Claim c2() {
        Claim c{"C2", "Boolean combination: complement of Sp(x^2-2) meets Sp(x^2+1) in p = 5 mod 8"};
        const Spectrum combo = ~sp(root("x^2 - 2")) & sp(root("x^2 + 1"));
        c.exceptions = exceptions_of(combo, pred([](std::uint64_t p) { return p % 8 == 5; }));
        c.measured = {{"bound", opt_.bound}, {"members", combo.count()}, {"allowed_exceptions", {2}}};
        c.status = status_of(std::all_of(c.exceptions.begin(), c.exceptions.end(), [](auto p) { return p == 2; }));
        return c;
    }

    Claim c3() {
        Claim c{"C3", "cyclotomic spectra: p = 1 mod n inside Sp(F_n), extras divide n"};
        bool ok = true;
        json per_n = json::array();
        for (std::uint64_t n = 1; n <= 20; ++n) {
            const Spectrum s = sp(logic::Sentence(constructions::root_sentence(arith::cyclotomic(n)).formula()));
            std::vector<std::uint64_t> missing, extra_bad, extra;
            for (std::size_t i = 0; i < s.size(); ++i) {
                const std::uint64_t p = s.prime(i);
                const bool cong = p % n == 1 % n;
                if (cong && !s.member(i)) missing.push_back(p);
                if (!cong && s.member(i)) (n % p == 0 ? extra : extra_bad).push_back(p);
            }
            ok = ok && missing.empty() && extra_bad.empty();
            append(c.exceptions, missing);
            append(c.exceptions, extra_bad);
            per_n.push_back({{"n", n}, {"members", s.count()}, {"extras_dividing_n", extra}, {"missing", missing},
                             {"extras_not_dividing_n", extra_bad}});
        }
        c.measured = {{"bound", opt_.bound}, {"per_n", per_n}};
        c.status = status_of(ok);
        return c;
    }

    Claim c4() {
        Claim c{"C4", "Lagarias criterion and exceptional moduli up to 30"};
        const auto em = spectra::exceptional_moduli(30);
        const bool l25 = spectra::lagarias_in_B(2, 5), l58 = spectra::lagarias_in_B(5, 8);
        // every a in 1..d-1 passes exactly at the exceptional moduli
        bool consistent = true;
        for (std::uint64_t d = 2; d <= 30; ++d) {
            bool all = true;
            for (std::uint64_t a = 1; a < d; ++a) all = all && spectra::lagarias_in_B(a, d);
            consistent = consistent && all == std::binary_search(em.begin(), em.end(), d);
        }
        const std::vector<std::uint64_t> want{1, 2, 3, 4, 6, 8, 12, 24};
        c.measured = {{"exceptional_moduli", em}, {"lagarias_2_5", l25}, {"lagarias_5_8", l58}, {"cross_consistent", consistent}};
        c.status = status_of(em == want && !l25 && l58 && consistent);
        return c;
    }

    Claim c5() {
        Claim c{"C5", "fraction-order sentences define p = a mod d for p > d"};
        const auto t0 = now();
        std::size_t sentences = 0;
        for (std::uint64_t d = 2; d <= 12; ++d) {
            for (std::uint64_t a = 1; a < d; ++a) {
                const Spectrum s = sp(constructions::congruence_sentence(a, d));
                ++sentences;
                for (std::size_t i = 0; i < s.size(); ++i) {
                    const std::uint64_t p = s.prime(i);
                    if (p > d && s.member(i) != (p % d == a)) append(c.exceptions, {p});
                }
            }
        }
        const double secs = since(t0);
        c.measured = {{"bound", opt_.bound}, {"sentences", sentences}, {"time_limit_s", 120}, {"within_time_limit", secs < 120}};
        c.status = status_of(c.exceptions.empty() && secs < 120);
        return c;
    }

    Claim c6() {
        Claim c{"C6", "power-residue sentences: Sp =* {p = rn+1 mod nd}"};
        bool ok = true;
        json per = json::array();
        for (auto [n, d, r] : {std::array<std::uint64_t, 3>{3, 3, 1}, {4, 4, 1}, {3, 6, 4}}) {
            const Spectrum s = sp(constructions::power_residue_sentence(n, d, r));
            const std::uint64_t mod = n * d, res = (r * n + 1) % mod;
            const auto ex = exceptions_of(s, pred([=](std::uint64_t p) { return p % mod == res; }));
            const bool small = std::all_of(ex.begin(), ex.end(), [&](auto p) { return p <= mod; });
            ok = ok && small;
            append(c.exceptions, ex);
            per.push_back({{"n", n}, {"d", d}, {"r", r}, {"members", s.count()}, {"exceptions", ex}, {"exceptions_le_nd", small}});
        }
        c.measured = {{"bound", opt_.bound}, {"cases", per}};
        c.status = status_of(ok);
        return c;
    }

    Claim c7() {
        Claim c{"C7", "psi for q=3 holds exactly between even and odd powers of 3"};
        const Spectrum s = sp(constructions::psi_sentence(3));
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::uint64_t p = s.prime(i);
            if (p <= 3) continue;
            bool inside = false;
            for (std::uint64_t lo = 1; lo < p; lo *= 9) inside = inside || (lo < p && p < 3 * lo);
            if (s.member(i) != inside) append(c.exceptions, {p});
        }
        c.measured = {{"bound", opt_.bound}, {"members_above_3", s.count() - s.count_upto(3)}};
        c.status = status_of(c.exceptions.empty());
        return c;
    }

    Claim c8() {
        Claim c{"C8", "alternating set of 19^n: identity ratio oscillates, log ratio stays high"};
        const auto seq = density::Sequence::geometric(19, 5);
        const Spectrum h = density::alternating_set(seq, 150000);
        const auto id = density::oscillation_report(h, density::DensityFunction::identity(), seq, 3);
        const auto lg = density::oscillation_report(h, density::DensityFunction::log(), seq, 3);
        const double id3 = ratio_at(id, 3), id4 = ratio_at(id, 4), lg3 = ratio_at(lg, 3), lg4 = ratio_at(lg, 4);
        const bool id_ok = id3 >= 0.85 && id4 <= 0.10, lg_ok = lg3 >= 0.85 && lg4 >= 0.85;
        c.measured = {{"sieve_bound", 150000},         {"identity_ratio_s3", round6(id3)}, {"identity_ratio_s4", round6(id4)},
                      {"log_ratio_s3", round6(lg3)},   {"log_ratio_s4", round6(lg4)},      {"identity_ok", id_ok},
                      {"log_ok", lg_ok}};
        c.status = status_of(id_ok && lg_ok);
        return c;
    }

    Claim c9() {
        Claim c{"C9", "thinness: Laux premise and conclusion, identity-thin 19^n"};
        const auto table = arith::sieve(150000);
        const auto seq = density::Sequence::geometric(19, 4);
        const auto laux = density::laux_check(seq, 18.5, *table, 1);
        const bool thin = density::is_h_thin(seq, density::DensityFunction::identity(), 3.05, *table, 1);
        c.measured = {{"laux_premise", laux.premise}, {"laux_conclusion", laux.conclusion}, {"identity_thin_r3_05", thin}};
        c.status = status_of(laux.premise && laux.conclusion && thin);
        return c;
    }

    Claim c10() {
        Claim c{"C10", "SUPEXP satisfying sets; log-thinness of 7^(7^n) by the bracket surrogate"};
        const auto s2 = satisfying(constructions::supexp_family(2).supexp_q, 100000);
        const auto s3 = satisfying(constructions::supexp_family(3).supexp_q, 30);
        const std::vector<std::uint64_t> want2{2, 4, 16, 65536}, want3{3, 27};
        const auto sur = density::log_thin_surrogate(density::Sequence::doubleexp(7, 6), 3.05);
        for (auto v : s2)
            if (!std::binary_search(want2.begin(), want2.end(), v)) c.exceptions.push_back(v);
        for (auto v : want2)
            if (!std::binary_search(s2.begin(), s2.end(), v)) c.exceptions.push_back(v);
        std::sort(c.exceptions.begin(), c.exceptions.end());
        c.measured = {{"supexp_2_m100000", s2},
                      {"expected_2", want2},
                      {"supexp_3_m30", s3},
                      {"expected_3", want3},
                      {"surrogate_log_thin_7", sur.holds},
                      {"surrogate_label", "bracket surrogate, no primes counted"}};
        c.status = status_of(s2 == want2 && s3 == want3 && sur.holds);
        return c;
    }

    Claim c11() {
        Claim c{"C11", "primes a^2 + b^4: count is O(t^(3/4)), density decays"};
        const auto t0 = now();
        const Spectrum fi = density::fi_spectrum(1000000);
        json rows = json::array();
        bool bounded = true;
        double r3 = 0, r6 = 0;
        for (std::uint64_t t : {1000ULL, 10000ULL, 100000ULL, 1000000ULL}) {
            const std::uint64_t cnt = fi.count_upto(t);
            const double scaled = static_cast<double>(cnt) / std::pow(static_cast<double>(t), 0.75);
            const double ratio = static_cast<double>(cnt) / static_cast<double>(fi.table()->pi(t));
            bounded = bounded && scaled <= 2;
            if (t == 1000) r3 = ratio;
            if (t == 1000000) r6 = ratio;
            rows.push_back({{"t", t}, {"pi_fi", cnt}, {"pi_fi_over_t34", round6(scaled)}, {"identity_ratio", round6(ratio)}});
        }
        const double secs = since(t0);
        c.measured = {{"rows", rows}, {"decay_ok", r6 < r3 / 2}, {"time_limit_s", 30}, {"within_time_limit", secs < 30}};
        c.status = status_of(bounded && r6 < r3 / 2 && secs < 30);
        return c;
    }

    Claim c12() {
        Claim c{"C12", "naive and relational evaluators agree on random sentences"};
        logic::RandomFormulaGenerator gen(opt_.seed);
        std::size_t cases = 0, disagreements = 0;
        json first = json::array();
        for (int i = 0; i < 500; ++i) {
            const logic::Formula f = gen.sentence();
            const eval::FastEvaluator fast(f);
            for (std::uint64_t m = 1; m <= 40; ++m) {
                const eval::RingContext ctx(m);
                ++cases;
                if (eval::eval_naive(ctx, f) != fast.holds(ctx)) {
                    ++disagreements;
                    if (first.size() < 5) first.push_back({{"formula", logic::to_string(f)}, {"m", m}});
                }
            }
        }
        c.measured = {{"formulas", 500}, {"max_depth", 5}, {"moduli", "1..40"}, {"cases", cases}, {"disagreements", disagreements},
                      {"first_disagreements", first}};
        c.status = status_of(disagreements == 0);
        return c;
    }

    Claim c13() {
        Claim c{"C13", "prime number theorem bracket for 17 <= x <= 100000"};
        const auto rep = density::pnt_bounds_report(*arith::sieve(100000), 17);
        c.measured = {{"checked", rep.checked}, {"holds", rep.holds}};
        if (rep.first_violation) c.exceptions.push_back(*rep.first_violation);
        c.status = status_of(rep.holds);
        return c;
    }

    Claim run(int id) {
        switch (id) {
            case 1: return c1();
            case 2: return c2();
            case 3: return c3();
            case 4: return c4();
            case 5: return c5();
            case 6: return c6();
            case 7: return c7();
            case 8: return c8();
            case 9: return c9();
            case 10: return c10();
            case 11: return c11();
            case 12: return c12();
            case 13: return c13();
        }
        throw InvalidArgument("no criterion " + std::to_string(id));
    }

private:
    using Clock = std::chrono::steady_clock;
    static Clock::time_point now() { return Clock::now(); }
    static double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }
    static double round6(double x) { return std::round(x * 1e6) / 1e6; }

    static double ratio_at(const density::OscillationReport& r, std::size_t n) {
        for (const auto& row : r.rows)
            if (row.n == n) return row.ratio;
        return std::nan("");
    }

    static logic::Sentence root(const std::string& poly) {
        return constructions::root_sentence(arith::parse_int_polynomial(poly));
    }

    Spectrum sp(const logic::Sentence& s) const {
        return spectra::spectrum(s, opt_.bound, {opt_.workers, eval::Engine::Auto, {}});
    }

    template <class Pred>
    Spectrum pred(Pred p) const {
        return Spectrum::from_predicate(opt_.bound, p);
    }

    static std::vector<std::uint64_t> satisfying(const logic::Formula& f, std::uint64_t m) {
        std::vector<std::uint64_t> out;
        for (const auto& t : eval::eval_fast(eval::RingContext(m), f).tuples()) out.push_back(t.at(0));
        std::sort(out.begin(), out.end());
        return out;
    }

    VerifyOptions opt_;
};

}  // namespace detail

/// Runs the acceptance claims C1..C14. C14 reruns C1..C11 with a different
/// worker count and compares the claim records.
inline VerificationReport verify_suite(const VerifyOptions& opt) {
    VerificationReport rep;
    rep.bound = opt.bound;
    rep.workers = opt.workers;
    rep.seed = opt.seed;
    auto wanted = [&](int id) { return opt.only.empty() || opt.only.count(id) > 0; };

    detail::Suite suite(opt);
    for (int id = 1; id <= 13; ++id) {
        if (!wanted(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Claim c = suite.run(id);
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (opt.progress) opt.progress(c);
        rep.claims.push_back(std::move(c));
    }
    if (wanted(14)) {
        const auto t0 = std::chrono::steady_clock::now();
        Claim c{"C14", "determinism across worker counts"};
        VerifyOptions other = opt;
        other.workers = opt.workers == 8 ? 1 : 8;
        other.progress = nullptr;
        detail::Suite rerun(other);
        json differing = json::array();
        std::size_t compared = 0;
        for (int id = 1; id <= 11; ++id) {
            const json again = to_json(rerun.run(id));
            const Claim* first = nullptr;
            for (const auto& x : rep.claims)
                if (x.id == "C" + std::to_string(id)) first = &x;
            const json base = first ? to_json(*first) : to_json(suite.run(id));
            ++compared;
            if (base.dump() != again.dump()) differing.push_back("C" + std::to_string(id));
        }
        c.measured = {{"worker_counts", {opt.workers, other.workers}}, {"claims_compared", compared}, {"differing", differing}};
        c.status = detail::status_of(differing.empty());
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (opt.progress) opt.progress(c);
        rep.claims.push_back(std::move(c));
    }
    return rep;
}

}  // namespace ringspectra::cli
