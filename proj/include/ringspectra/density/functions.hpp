#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ringspectra/error.hpp"

namespace ringspectra::density {

/// A positive increasing unbounded h, with an optional semi-additivity threshold M.
class DensityFunction {
public:
    DensityFunction(std::string name, std::function<double(double)> fn, std::optional<double> semi_additive_from = std::nullopt)
        : name_(std::move(name)), fn_(std::move(fn)), m_(semi_additive_from) {}

    static DensityFunction identity() { return {"identity", [](double x) { return x; }, 0.0}; }
    static DensityFunction log() { return {"log", [](double x) { return std::log(x); }, 2.0}; }
    static DensityFunction loglog() { return {"loglog", [](double x) { return std::log(std::log(x)); }}; }
    static DensityFunction power(double k) {
        return {"x^" + std::to_string(k), [k](double x) { return std::pow(x, k); }};
    }

    /// Piecewise-linear through (x, h(x)) points; x and h must strictly increase.
    /// Beyond the last point the last slope continues.
    static DensityFunction tabulated(std::string name, std::vector<std::pair<double, double>> pts) {
        if (pts.size() < 2) throw InvalidArgument("tabulated h needs at least two points");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (pts[i].second <= 0) throw InvalidArgument("tabulated h must be positive");
            if (i > 0 && (pts[i].first <= pts[i - 1].first || pts[i].second <= pts[i - 1].second))
                throw InvalidArgument("tabulated h must be strictly increasing at x = " + std::to_string(pts[i].first));
        }
        auto fn = [pts = std::move(pts)](double x) {
            auto it = std::upper_bound(pts.begin(), pts.end(), x, [](double v, const auto& p) { return v < p.first; });
            std::size_t hi = static_cast<std::size_t>(it - pts.begin());
            hi = std::clamp<std::size_t>(hi, 1, pts.size() - 1);
            const auto& [x0, y0] = pts[hi - 1];
            const auto& [x1, y1] = pts[hi];
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        };
        return {std::move(name), std::move(fn)};
    }

    static DensityFunction by_name(const std::string& name) {
        if (name == "identity") return identity();
        if (name == "log") return log();
        if (name == "loglog") return loglog();
        throw InvalidArgument("unknown h '" + name + "' (expected identity, log or loglog)");
    }

    double operator()(double x) const { return fn_(x); }
    const std::string& name() const noexcept { return name_; }
    std::optional<double> semi_additive_from() const noexcept { return m_; }

    /// Positive and strictly increasing on the grid.
    bool valid_on(const std::vector<double>& grid) const {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double y = fn_(grid[i]);
            if (!(y > 0)) return false;
            if (i > 0 && !(y > fn_(grid[i - 1]))) return false;
        }
        return true;
    }

private:
    std::string name_;
    std::function<double(double)> fn_;
    std::optional<double> m_;
};

}  // namespace ringspectra::density
