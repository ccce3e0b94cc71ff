#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringspectra/error.hpp"
#include "ringspectra/spectra/classify.hpp"
#include "ringspectra/spectra/spectrum.hpp"

namespace ringspectra::spectra {

inline constexpr const char* kSpectrumSchema = "ringspectra.spectrum/1";

/// Header "prime,member", then one row per prime <= bound.
inline void write_csv(std::ostream& os, const Spectrum& s) {
    os << "prime,member\n";
    for (std::size_t i = 0; i < s.size(); ++i) os << s.prime(i) << ',' << (s.member(i) ? 1 : 0) << '\n';
}

/// Reads the CSV form back. The bound is the last listed prime, and the rows
/// must list every prime up to it in order.
inline Spectrum read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("prime,member", 0) != 0)
        throw InvalidArgument("spectrum CSV: expected header 'prime,member'");
    std::vector<std::pair<std::uint64_t, bool>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos) throw std::invalid_argument("no comma");
            std::size_t used = 0;
            const std::uint64_t p = std::stoull(line.substr(0, comma), &used);
            const std::string flag = line.substr(comma + 1);
            if (flag != "0" && flag != "1") throw std::invalid_argument("member must be 0 or 1");
            rows.emplace_back(p, flag == "1");
        } catch (const std::exception& e) {
            throw InvalidArgument("spectrum CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (rows.empty()) throw InvalidArgument("spectrum CSV: no rows");
    Spectrum s(rows.back().first);
    if (s.size() != rows.size()) throw InvalidArgument("spectrum CSV: rows do not list every prime up to the bound");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].first != s.prime(i))
            throw InvalidArgument("spectrum CSV: expected prime " + std::to_string(s.prime(i)) + ", got " +
                                  std::to_string(rows[i].first));
        s.set(i, rows[i].second);
    }
    return s;
}

inline nlohmann::ordered_json to_json(const Spectrum& s) {
    nlohmann::ordered_json j;
    j["schema"] = kSpectrumSchema;
    j["bound"] = s.bound();
    j["primes_total"] = s.size();
    j["count"] = s.count();
    j["members"] = s.members();
    return j;
}

inline Spectrum spectrum_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema").get<std::string>() != kSpectrumSchema)
            throw InvalidArgument("unsupported spectrum schema '" + j.at("schema").get<std::string>() + "'");
        return Spectrum::from_members(j.at("bound").get<std::uint64_t>(), j.at("members").get<std::vector<std::uint64_t>>());
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("spectrum JSON: ") + e.what());
    }
}

/// Reads either form, deciding by the first non-blank character.
inline Spectrum read_spectrum(std::istream& is) {
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument(std::string("spectrum JSON: ") + e.what());
        }
        return spectrum_from_json(j);
    }
    std::istringstream in(text);
    return read_csv(in);
}

inline nlohmann::ordered_json to_json(const ExceptionReport& r) {
    nlohmann::ordered_json j;
    j["exceptions"] = r.exceptions;
    j["largest"] = r.largest ? nlohmann::ordered_json(*r.largest) : nlohmann::ordered_json(nullptr);
    j["threshold"] = r.threshold;
    j["plausibly_equal"] = r.plausibly_equal;
    return j;
}

inline nlohmann::ordered_json to_json(const CongruenceFit& f) {
    nlohmann::ordered_json j;
    j["modulus"] = f.cls.modulus;
    j["residues"] = f.cls.residues;
    std::vector<bool> coprime(f.cls.coprime.begin(), f.cls.coprime.end());
    j["coprime"] = coprime;
    j["threshold"] = f.threshold;
    j["exact"] = f.exact;
    j["uncovered"] = f.uncovered;
    j["below_threshold"] = f.below_threshold;
    return j;
}

}  // namespace ringspectra::spectra
