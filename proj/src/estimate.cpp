#include "idim/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace idim {

FitResult fit_log_correction(const std::vector<double>& deltas, const std::vector<double>& s)
{
    if (deltas.size() != s.size() || deltas.size() < 2) throw std::invalid_argument("fit needs at least two points");
    const auto n = static_cast<double>(deltas.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> x(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0 && deltas[i] < 1.0)) throw std::invalid_argument("fit deltas must lie in (0, 1)");
        x[i] = 1.0 / std::log(1.0 / deltas[i]);
        sx += x[i];
        sy += s[i];
        sxx += x[i] * x[i];
        sxy += x[i] * s[i];
    }
    const double den = n * sxx - sx * sx;
    FitResult f;
    if (std::abs(den) < 1e-300) {
        f.a = sy / n;
        f.b = 0.0;
    } else {
        f.b = (n * sxy - sx * sy) / den;
        f.a = (sy - f.b * sx) / n;
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = s[i] - (f.a + f.b * x[i]);
        ss += r * r;
    }
    f.rmse = std::sqrt(ss / n);
    return f;
}

double bisect_exponent(const std::function<double(double)>& cost, double hi, double tol)
{
    double lo = 0.0;
    if (cost(lo) <= 1.0) return lo;
    if (cost(hi) > 1.0) return hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (cost(mid) > 1.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

void finish_estimate(EstimateResult& r)
{
    std::vector<double> deltas, s;
    for (const auto& row : r.rows) {
        deltas.push_back(row.delta);
        s.push_back(row.s_star);
    }
    r.fit = fit_log_correction(deltas, s);
    r.extrapolated = r.fit.a;

    auto order = r.rows;
    std::sort(order.begin(), order.end(), [](const EstimateRow& a, const EstimateRow& b) { return a.delta > b.delta; });
    r.monotone = true;
    for (std::size_t i = 1; i < order.size(); ++i)
        if (order[i].s_star > order[i - 1].s_star + 0.02) r.monotone = false;
}

double log_term(double n, double delta, double s)
{
    if (n <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(n) + s * std::log(delta);
}

double sum_from_logs(const std::vector<double>& logs)
{
    double m = -std::numeric_limits<double>::infinity();
    for (double v : logs) m = std::max(m, v);
    if (!std::isfinite(m)) return m > 0.0 ? m : 0.0;
    double acc = 0.0;
    for (double v : logs) acc += std::exp(v - m);
    return std::exp(m) * acc;
}

} // namespace idim
