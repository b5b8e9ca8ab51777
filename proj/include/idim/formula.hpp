#ifndef IDIM_FORMULA_HPP
#define IDIM_FORMULA_HPP

#include "idim/setlib.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace idim {

// Increasing theta values in [0, 1]; 0 and 1 are always present.
class ThetaGrid {
public:
    ThetaGrid() : values_{0.0, 1.0} {}
    explicit ThetaGrid(std::vector<double> values);
    // a, a + step, ..., b inclusive (b appended if the steps miss it).
    static ThetaGrid range(double a, double b, double step);
    static ThetaGrid uniform(int points);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

private:
    std::vector<double> values_;
};

enum class Provenance { formula, cover_upper, measure_lower, estimate };
std::string provenance_name(Provenance p);
Provenance parse_provenance(const std::string& s);

struct DimensionProfile {
    ThetaGrid grid;
    std::vector<double> values;
    Provenance provenance = Provenance::formula;
    SetSpec spec;
};

double dim_fp(double p, double theta);
double dim_concentric(int d, double p, double theta);
double dim_spiral(double p, double theta);
double dim_elliptical(double p, double q, double theta);
double dim_product_sine(double p, double theta);
double dim_attenuated(double p, double q, double theta);

struct Bounds {
    double lower;
    double upper;
};
Bounds bounds_general_concentric(int d, double dim_seq);

struct ComparisonConditions {
    bool upper_applies;
    bool lower_applies;
    double tail_sup;          // sup of a_n n^p over the tail
    double tail_density_inf;  // inf of A_{p,n}/n over the tail
    std::string label = "empirical at horizon";
};
ComparisonConditions check_comparison_conditions(const RadiusSequence& seq, double p, std::int64_t horizon);

double dim_isolated_upper(int d, double p, double l, double theta);
double dim_isolated_lower_density(double p, double theta);

bool identity_checks(double p, double q, int d, const ThetaGrid& grid);

// Closed-form value for the family when one is known.
std::optional<double> formula_value(const SetSpec& spec, double theta);
DimensionProfile formula_profile(const SetSpec& spec, const ThetaGrid& grid);

} // namespace idim

#endif // IDIM_FORMULA_HPP
