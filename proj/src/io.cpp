#include "idim/io.hpp"

#include "idim/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>

namespace idim {

namespace {

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string g17(double v) { return fmt("%.17g", v); }

// Shortest text that reads back to the same double.
std::string shortest(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> lines_of(const std::string& text)
{
    auto out = split(text, '\n');
    if (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

double number(const std::string& s)
{
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw UsageError("not a number: '" + s + "'", s);
    return v;
}

std::optional<double> optional_number(const std::string& s)
{
    if (s.empty() || s == "none") return std::nullopt;
    return number(s);
}

std::string optional_text(const std::optional<double>& v, const char* f)
{
    return v ? fmt(f, *v) : std::string();
}

// key=value fields of a trailer line.
std::map<std::string, std::string> trailer_fields(const std::string& line)
{
    std::map<std::string, std::string> out;
    for (const auto& tok : split(line, ' ')) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw UsageError("malformed trailer field '" + tok + "'", tok);
        out[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return out;
}

const std::string& field(const std::map<std::string, std::string>& f, const std::string& key)
{
    const auto it = f.find(key);
    if (it == f.end()) throw UsageError("missing field '" + key + "'", key);
    return it->second;
}

void expect_header(const std::vector<std::string>& lines, const std::string& header)
{
    if (lines.empty() || lines[0] != header) throw UsageError("expected header '" + header + "'", lines.empty() ? "" : lines[0]);
}

std::vector<double> numbers(const std::string& line, std::size_t n)
{
    const auto cells = split(line, ',');
    if (cells.size() != n) throw UsageError("expected " + std::to_string(n) + " columns", line);
    std::vector<double> out;
    for (const auto& c : cells) out.push_back(number(c));
    return out;
}

} // namespace

KeyValues::KeyValues(const std::vector<std::string>& tokens)
{
    for (const auto& tok : tokens) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + tok + "'", tok);
        const std::string key = tok.substr(0, eq);
        if (values_.count(key)) throw UsageError("key given twice: '" + tok + "'", tok);
        values_[key] = tok.substr(eq + 1);
        order_.push_back(key);
    }
}

std::optional<std::string> KeyValues::take(const std::string& key)
{
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
}

std::string KeyValues::take_or(const std::string& key, const std::string& fallback)
{
    auto v = take(key);
    return v ? *v : fallback;
}

void KeyValues::finish() const
{
    for (const auto& key : order_)
        if (!used_.count(key)) throw UsageError("unknown key '" + token(key) + "'", token(key));
}

std::string KeyValues::token(const std::string& key) const
{
    const auto it = values_.find(key);
    return it == values_.end() ? key : key + "=" + it->second;
}

double parse_real(const std::string& text, const std::string& token)
{
    try {
        const auto caret = text.find('^');
        if (caret == std::string::npos) return number(text);
        return std::pow(number(text.substr(0, caret)), number(text.substr(caret + 1)));
    } catch (const UsageError&) {
        throw UsageError("not a number: '" + token + "'", token);
    }
}

std::int64_t parse_count(const std::string& text, const std::string& token)
{
    const double v = parse_real(text, token);
    if (!(v >= 1.0 && v <= 9.0e18) || v != std::floor(v)) throw UsageError("expected a positive integer: '" + token + "'", token);
    return static_cast<std::int64_t>(v);
}

std::vector<double> parse_deltas(const std::string& text, const std::string& token)
{
    std::vector<double> out;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
        const auto ca = a.find('^'), cb = b.find('^');
        if (ca == std::string::npos || cb == std::string::npos || a.substr(0, ca) != b.substr(0, cb))
            throw UsageError("delta ladder must read base^e1..base^e2: '" + token + "'", token);
        const double base = parse_real(a.substr(0, ca), token);
        const double e1 = parse_real(a.substr(ca + 1), token), e2 = parse_real(b.substr(cb + 1), token);
        if (e1 != std::floor(e1) || e2 != std::floor(e2)) throw UsageError("ladder exponents must be integers: '" + token + "'", token);
        const double step = e2 >= e1 ? 1.0 : -1.0;
        for (double e = e1; step * (e2 - e) >= 0.0; e += step) out.push_back(std::pow(base, e));
    } else {
        for (const auto& part : split(text, ',')) out.push_back(parse_real(part, token));
    }
    for (double d : out)
        if (!(d > 0.0 && d < 1.0)) throw UsageError("deltas must lie in (0, 1): '" + token + "'", token);
    return out;
}

ThetaGrid parse_thetas(const std::string& text, const std::string& token)
{
    try {
        const auto parts = split(text, ':');
        if (parts.size() == 3) return ThetaGrid::range(parse_real(parts[0], token), parse_real(parts[1], token), parse_real(parts[2], token));
        if (parts.size() != 1) throw UsageError("theta grid must read a:b:step: '" + token + "'", token);
        std::vector<double> v;
        for (const auto& part : split(text, ',')) v.push_back(parse_real(part, token));
        return ThetaGrid(std::move(v));
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(e.what()) + ": '" + token + "'", token);
    }
}

SetSpec spec_from(KeyValues& kv)
{
    const auto fam = kv.take("family");
    if (!fam) throw UsageError("missing family=", "family");
    auto real = [&](const std::string& key, std::optional<double> fallback = std::nullopt) {
        const auto v = kv.take(key);
        if (!v) {
            if (fallback) return *fallback;
            throw UsageError("missing " + key + "=", key);
        }
        return parse_real(*v, kv.token(key));
    };
    auto integer = [&](const std::string& key, std::int64_t fallback) {
        const auto v = kv.take(key);
        return v ? parse_count(*v, kv.token(key)) : fallback;
    };
    const int d = static_cast<int>(integer("d", *fam == "fp" ? 1 : 2));

    SetSpec spec;
    if (*fam == "fp") {
        spec = SetSpec::fp(real("p"));
    } else if (*fam == "concentric") {
        const std::string kind = kv.take_or("radii", "power");
        RadiusSequence radii;
        if (kind == "power") {
            radii = RadiusSequence::power(real("p"));
        } else if (kind == "geometric") {
            radii = RadiusSequence::geometric(real("ratio"));
        } else if (kind == "log") {
            radii = RadiusSequence::logarithmic();
        } else if (kind == "table") {
            const auto v = kv.take("values");
            if (!v) throw UsageError("missing values=", "values");
            std::vector<double> vals;
            for (const auto& part : split(*v, ',')) vals.push_back(parse_real(part, kv.token("values")));
            radii = RadiusSequence::table(std::move(vals));
        } else {
            throw UsageError("unknown radii kind '" + kv.token("radii") + "'", kv.token("radii"));
        }
        spec = SetSpec::concentric(d, std::move(radii));
    } else if (*fam == "spiral") {
        spec = SetSpec::spiral(real("p"));
    } else if (*fam == "elliptical") {
        spec = SetSpec::elliptical(real("p"), real("q"));
    } else if (*fam == "product-sine") {
        spec = SetSpec::product_sine(real("p"));
    } else if (*fam == "attenuated") {
        spec = SetSpec::attenuated(real("p"), real("q"));
    } else if (*fam == "isolated") {
        const double p = real("p");
        const std::string kind = kv.take_or("count", "constant");
        CountRule rule;
        if (kind == "constant") rule = CountRule::constant(integer("k", 1));
        else if (kind == "power-sum") rule = CountRule::power_sum(real("l"));
        else if (kind == "exponential") rule = CountRule::exponential(integer("base", 2));
        else throw UsageError("unknown count rule '" + kv.token("count") + "'", kv.token("count"));
        spec = SetSpec::isolated(p, rule);
    } else {
        throw UsageError("unknown family '" + kv.token("family") + "'", kv.token("family"));
    }
    if (spec.family != Family::concentric && d != spec.d)
        throw UsageError(family_name(spec.family) + " has fixed dimension " + std::to_string(spec.d) + ": '" + kv.token("d") + "'", kv.token("d"));
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(e.what()) + ": '" + kv.token("family") + "'", kv.token("family"));
    }
    return spec;
}

SetSpec parse_spec(const std::string& text)
{
    std::vector<std::string> tokens;
    std::istringstream in(text);
    for (std::string tok; in >> tok;) tokens.push_back(tok);
    KeyValues kv(tokens);
    SetSpec spec = spec_from(kv);
    kv.finish();
    return spec;
}

std::string format_spec(const SetSpec& s)
{
    std::string out = "family=" + family_name(s.family);
    switch (s.family) {
    case Family::fp: return out + " p=" + shortest(s.p);
    case Family::concentric:
        out += " d=" + std::to_string(s.d);
        switch (s.radii.kind) {
        case RadiusKind::power: return out + " radii=power p=" + shortest(s.radii.param);
        case RadiusKind::geometric: return out + " radii=geometric ratio=" + shortest(s.radii.param);
        case RadiusKind::logarithmic: return out + " radii=log";
        case RadiusKind::table: {
            out += " radii=table values=";
            for (std::size_t i = 0; i < s.radii.values.size(); ++i) out += (i ? "," : "") + shortest(s.radii.values[i]);
            return out;
        }
        }
        return out;
    case Family::spiral:
    case Family::product_sine: return out + " p=" + shortest(s.p);
    case Family::elliptical:
    case Family::attenuated: return out + " p=" + shortest(s.p) + " q=" + shortest(s.q);
    case Family::isolated:
        out += " p=" + shortest(s.p);
        switch (s.count.kind) {
        case CountKind::constant: return out + " count=constant k=" + shortest(s.count.value);
        case CountKind::power_sum: return out + " count=power-sum l=" + shortest(s.count.value);
        case CountKind::exponential: return out + " count=exponential base=" + shortest(s.count.value);
        }
    }
    return out;
}

std::string write_profile(const DimensionProfile& prof)
{
    std::string out = "theta,value,provenance\n";
    const auto& th = prof.grid.values();
    for (std::size_t i = 0; i < th.size(); ++i)
        out += fmt("%.12g", th[i]) + "," + fmt("%.12f", prof.values[i]) + "," + provenance_name(prof.provenance) + "\n";
    return out;
}

DimensionProfile read_profile(const std::string& csv)
{
    const auto lines = lines_of(csv);
    expect_header(lines, "theta,value,provenance");
    std::vector<double> th, vals;
    std::optional<Provenance> prov;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i], ',');
        if (cells.size() != 3) throw UsageError("expected 3 columns", lines[i]);
        th.push_back(number(cells[0]));
        vals.push_back(number(cells[1]));
        const Provenance p = parse_provenance(cells[2]);
        if (prov && *prov != p) throw UsageError("mixed provenance in one profile", lines[i]);
        prov = p;
    }
    DimensionProfile prof;
    prof.grid = ThetaGrid(th);
    if (prof.grid.size() != th.size()) throw UsageError("profile must list 0 and 1 and increase", "theta");
    prof.values = std::move(vals);
    prof.provenance = prov.value_or(Provenance::formula);
    return prof;
}

std::string write_profile_table(const ProfileTable& t)
{
    std::string out = "theta,formula,cover-upper,measure-lower\n";
    for (std::size_t i = 0; i < t.thetas.size(); ++i)
        out += fmt("%.12g", t.thetas[i]) + "," + optional_text(t.formula[i], "%.12f") + "," +
               optional_text(t.upper[i], "%.12f") + "," + optional_text(t.lower[i], "%.12f") + "\n";
    return out;
}

ProfileTable read_profile_table(const std::string& csv)
{
    const auto lines = lines_of(csv);
    expect_header(lines, "theta,formula,cover-upper,measure-lower");
    ProfileTable t;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i], ',');
        if (cells.size() != 4) throw UsageError("expected 4 columns", lines[i]);
        t.thetas.push_back(number(cells[0]));
        t.formula.push_back(optional_number(cells[1]));
        t.upper.push_back(optional_number(cells[2]));
        t.lower.push_back(optional_number(cells[3]));
    }
    return t;
}

std::string write_cloud(const PointCloud& cloud)
{
    std::string out;
    for (int k = 0; k < cloud.d; ++k) out += (k ? ",x" : "x") + std::to_string(k + 1);
    out += "\n";
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto x = cloud.point(i);
        for (int k = 0; k < cloud.d; ++k) out += (k ? "," : "") + g17(x[k]);
        out += "\n";
    }
    return out;
}

PointCloud read_cloud(const std::string& csv)
{
    const auto lines = lines_of(csv);
    if (lines.empty()) throw UsageError("empty point cloud file", "");
    PointCloud cloud;
    cloud.d = static_cast<int>(split(lines[0], ',').size());
    std::string header;
    for (int k = 0; k < cloud.d; ++k) header += (k ? ",x" : "x") + std::to_string(k + 1);
    expect_header(lines, header);
    for (std::size_t i = 1; i < lines.size(); ++i)
        for (double v : numbers(lines[i], static_cast<std::size_t>(cloud.d))) cloud.coords.push_back(v);
    return cloud;
}

std::string write_cover(const Cover& cover)
{
    const std::size_t d = cover.elements.empty() ? 0 : cover.elements[0].center.size();
    std::string out;
    for (std::size_t k = 0; k < d; ++k) out += "c" + std::to_string(k + 1) + ",";
    out += "diameter\n";
    for (const auto& e : cover.elements) {
        for (double c : e.center) out += g17(c) + ",";
        out += g17(e.diameter) + "\n";
    }
    return out;
}

Cover read_cover(const std::string& csv)
{
    const auto lines = lines_of(csv);
    if (lines.empty()) throw UsageError("empty cover file", "");
    const std::size_t cols = split(lines[0], ',').size();
    std::string header;
    for (std::size_t k = 0; k + 1 < cols; ++k) header += "c" + std::to_string(k + 1) + ",";
    expect_header(lines, header + "diameter");
    Cover cover;
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto v = numbers(lines[i], cols);
        CoverElement e;
        e.diameter = v.back();
        v.pop_back();
        e.center = std::move(v);
        lo = std::min(lo, e.diameter);
        hi = std::max(hi, e.diameter);
        cover.elements.push_back(std::move(e));
    }
    if (!cover.elements.empty()) {
        cover.delta = lo;
        cover.theta = hi > lo ? std::log(hi) / std::log(lo) : 1.0;
    }
    return cover;
}

std::string write_cover_counts(const CoverCounts& c)
{
    nlohmann::ordered_json j;
    j["inner_boxes"] = c.inner_boxes;
    j["outer_per_piece"] = c.outer_per_piece;
    j["cutoff_M"] = c.cutoff_M;
    j["xi_d"] = c.xi_d;
    j["inner_radius"] = c.inner_radius;
    j["inner_scale"] = c.inner_scale;
    j["grid_terms"] = c.grid_terms;
    j["grid_bound"] = c.grid_bound;
    return j.dump(2) + "\n";
}

CoverCounts read_cover_counts(const std::string& text)
{
    try {
        const auto j = nlohmann::json::parse(text);
        CoverCounts c;
        c.inner_boxes = j.at("inner_boxes").get<double>();
        c.outer_per_piece = j.at("outer_per_piece").get<std::vector<double>>();
        c.cutoff_M = j.at("cutoff_M").get<std::int64_t>();
        c.xi_d = j.at("xi_d").get<double>();
        c.inner_radius = j.at("inner_radius").get<double>();
        c.inner_scale = j.at("inner_scale").get<double>();
        c.grid_terms = j.at("grid_terms").get<std::vector<double>>();
        c.grid_bound = j.at("grid_bound").get<double>();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed cover counts: ") + e.what(), "");
    }
}

std::string write_estimate(const EstimateResult& r)
{
    std::string out = "theta,delta,s_star,inner_radius,cost_residual\n";
    for (const auto& row : r.rows)
        out += fmt("%.12g", r.theta) + "," + g17(row.delta) + "," + g17(row.s_star) + "," + g17(row.inner_radius) + "," +
               g17(row.cost_residual) + "\n";
    out += "extrapolated=" + g17(r.extrapolated) + " target=" + (r.target ? g17(*r.target) : "none") + " rmse=" + g17(r.fit.rmse) +
           " a=" + g17(r.fit.a) + " b=" + g17(r.fit.b) + " monotone=" + (r.monotone ? "yes" : "no") + " model=a+b/log(1/delta)\n";
    return out;
}

EstimateResult read_estimate(const std::string& csv)
{
    const auto lines = lines_of(csv);
    expect_header(lines, "theta,delta,s_star,inner_radius,cost_residual");
    if (lines.size() < 2) throw UsageError("missing trailer line", "");
    EstimateResult r;
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
        const auto v = numbers(lines[i], 5);
        r.theta = v[0];
        r.rows.push_back({v[1], v[2], v[3], v[4], 0});
    }
    const auto f = trailer_fields(lines.back());
    r.extrapolated = number(field(f, "extrapolated"));
    r.target = optional_number(field(f, "target"));
    r.fit.rmse = number(field(f, "rmse"));
    r.fit.a = number(field(f, "a"));
    r.fit.b = number(field(f, "b"));
    r.monotone = field(f, "monotone") == "yes";
    return r;
}

std::string write_certificate(const LowerBoundCertificate& c)
{
    std::string out = "delta,total_mass,ratio_max,samples,supported\n";
    for (const auto& row : c.rows)
        out += g17(row.delta) + "," + g17(row.total_mass) + "," + g17(row.ratio_max) + "," + std::to_string(row.samples) + "," +
               (row.supported ? "yes" : "no") + "\n";
    std::string skipped;
    for (std::size_t i = 0; i < c.skipped.size(); ++i) skipped += (i ? ";" : "") + g17(c.skipped[i]);
    out += "s=" + g17(c.s) + " theta=" + g17(c.theta) + " floor=" + g17(c.floor) + " cap=" + g17(c.cap) +
           " total_mass=" + g17(c.total_mass_min) + " ratio_max=" + g17(c.ratio_max) + " samples=" + std::to_string(c.samples) +
           " skipped=" + (skipped.empty() ? "none" : skipped) + " verdict=" + c.verdict() + "\n";
    return out;
}

LowerBoundCertificate read_certificate(const std::string& csv)
{
    const auto lines = lines_of(csv);
    expect_header(lines, "delta,total_mass,ratio_max,samples,supported");
    if (lines.size() < 2) throw UsageError("missing trailer line", "");
    LowerBoundCertificate c;
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
        const auto cells = split(lines[i], ',');
        if (cells.size() != 5) throw UsageError("expected 5 columns", lines[i]);
        CertificateRow row;
        row.delta = number(cells[0]);
        row.total_mass = number(cells[1]);
        row.ratio_max = number(cells[2]);
        row.samples = static_cast<std::int64_t>(number(cells[3]));
        row.supported = cells[4] == "yes";
        c.delta_range.push_back(row.delta);
        c.rows.push_back(row);
    }
    const auto f = trailer_fields(lines.back());
    c.s = number(field(f, "s"));
    c.theta = number(field(f, "theta"));
    c.floor = number(field(f, "floor"));
    c.cap = number(field(f, "cap"));
    c.total_mass_min = number(field(f, "total_mass"));
    c.ratio_max = number(field(f, "ratio_max"));
    c.samples = static_cast<std::int64_t>(number(field(f, "samples")));
    if (field(f, "skipped") != "none")
        for (const auto& part : split(field(f, "skipped"), ';')) c.skipped.push_back(number(part));
    c.supported = field(f, "verdict") == "supported";
    return c;
}

} // namespace idim
