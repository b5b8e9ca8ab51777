#ifndef IDIM_IO_HPP
#define IDIM_IO_HPP

#include "idim/covergen.hpp"
#include "idim/estimate.hpp"
#include "idim/formula.hpp"
#include "idim/massdist.hpp"
#include "idim/setlib.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace idim {

// key=value tokens. Every key must be consumed before finish() or it is
// reported as the offending token.
class KeyValues {
public:
    explicit KeyValues(const std::vector<std::string>& tokens);

    std::optional<std::string> take(const std::string& key);
    std::string take_or(const std::string& key, const std::string& fallback);
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void finish() const;

    // The raw token for a key, for error messages.
    std::string token(const std::string& key) const;

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
    std::vector<std::string> order_;
};

double parse_real(const std::string& text, const std::string& token);
std::int64_t parse_count(const std::string& text, const std::string& token); // 10^7, 1e7 or 10000000
std::vector<double> parse_deltas(const std::string& text, const std::string& token); // 2^-8..2^-20 or a,b,c
ThetaGrid parse_thetas(const std::string& text, const std::string& token);          // a:b:step or a,b,c

// Consumes family, d, p, q, radii, ratio, values, count, k, l, base.
SetSpec spec_from(KeyValues& kv);
SetSpec parse_spec(const std::string& text);
std::string format_spec(const SetSpec& spec);

std::string write_profile(const DimensionProfile& profile);
DimensionProfile read_profile(const std::string& csv);

// Formula, cover upper bound and measure lower bound side by side.
struct ProfileTable {
    std::vector<double> thetas;
    std::vector<std::optional<double>> formula;
    std::vector<std::optional<double>> upper;
    std::vector<std::optional<double>> lower;
};
std::string write_profile_table(const ProfileTable& table);
ProfileTable read_profile_table(const std::string& csv);

std::string write_cloud(const PointCloud& cloud);
PointCloud read_cloud(const std::string& csv);

std::string write_cover(const Cover& cover);
Cover read_cover(const std::string& csv);

std::string write_cover_counts(const CoverCounts& counts);
CoverCounts read_cover_counts(const std::string& text);

std::string write_estimate(const EstimateResult& result);
EstimateResult read_estimate(const std::string& csv);

std::string write_certificate(const LowerBoundCertificate& cert);
LowerBoundCertificate read_certificate(const std::string& csv);

} // namespace idim

#endif // IDIM_IO_HPP
