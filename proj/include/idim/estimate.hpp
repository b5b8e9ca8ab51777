#ifndef IDIM_ESTIMATE_HPP
#define IDIM_ESTIMATE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace idim {

struct EstimateRow {
    double delta = 0.0;
    double s_star = 0.0;
    double inner_radius = 0.0;  // split radius of the best cover at s_star
    double cost_residual = 0.0; // cost(s_star) - 1
    std::int64_t cutoff = 0;    // first piece covered at the inner scale, 0 for pure delta
};

struct FitResult {
    std::string model = "a + b/log(1/delta)";
    double a = 0.0;
    double b = 0.0;
    double rmse = 0.0;
};

struct EstimateResult {
    double theta = 1.0;
    std::vector<EstimateRow> rows;
    double extrapolated = 0.0;
    FitResult fit;
    std::optional<double> target;
    // s_star never rises by more than 0.02 as delta decreases.
    bool monotone = true;
};

// Least squares fit of s against a + b/log(1/delta).
FitResult fit_log_correction(const std::vector<double>& deltas, const std::vector<double>& s);

// Smallest s in [0, hi] with cost(s) <= 1, to tolerance tol. cost must be
// non-increasing in s.
double bisect_exponent(const std::function<double(double)>& cost, double hi, double tol = 1e-4);

// Fills fit, extrapolated and monotone from rows.
void finish_estimate(EstimateResult& result);

// log(n delta^s) with n possibly huge; -inf for n == 0.
double log_term(double n, double delta, double s);
// Sum of exp(logs[i]) without intermediate overflow.
double sum_from_logs(const std::vector<double>& logs);

} // namespace idim

#endif // IDIM_ESTIMATE_HPP
