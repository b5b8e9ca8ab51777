#include "idim/cli.hpp"

#include "idim/boxcount.hpp"
#include "idim/covergen.hpp"
#include "idim/errors.hpp"
#include "idim/formula.hpp"
#include "idim/io.hpp"
#include "idim/massdist.hpp"

#include <fstream>
#include <ostream>

namespace idim {

namespace {

struct Output {
    std::string path; // empty for standard output
    std::string token;
    std::string text;
};

struct Context {
    KeyValues& kv;
    std::vector<Output> outputs;
};

// Outputs are held back until every key has been checked, so a typo writes nothing.
void emit(Context& ctx, const std::string& key, const std::string& text)
{
    ctx.outputs.push_back({ctx.kv.take(key).value_or(""), ctx.kv.token(key), text});
}

void flush(const Context& ctx, std::ostream& out)
{
    for (const auto& o : ctx.outputs) {
        if (o.path.empty()) {
            out << o.text;
            continue;
        }
        std::ofstream f(o.path, std::ios::binary);
        if (!f || !(f << o.text) || !f.flush()) throw UsageError("cannot write '" + o.token + "'", o.token);
    }
}

double real_or(KeyValues& kv, const std::string& key, double fallback)
{
    const auto v = kv.take(key);
    return v ? parse_real(*v, kv.token(key)) : fallback;
}

std::int64_t count_or(KeyValues& kv, const std::string& key, std::int64_t fallback)
{
    const auto v = kv.take(key);
    return v ? parse_count(*v, kv.token(key)) : fallback;
}

std::vector<double> deltas_or(KeyValues& kv, const std::string& key, const std::string& fallback)
{
    const auto v = kv.take(key);
    return parse_deltas(v ? *v : fallback, v ? kv.token(key) : fallback);
}

ThetaGrid thetas_or(KeyValues& kv, const std::string& key, const std::string& fallback)
{
    const auto v = kv.take(key);
    return parse_thetas(v ? *v : fallback, v ? kv.token(key) : fallback);
}

double theta_of(KeyValues& kv, double fallback)
{
    const double th = real_or(kv, "theta", fallback);
    if (!(th > 0.0 && th <= 1.0)) throw UsageError("theta must lie in (0, 1]: '" + kv.token("theta") + "'", kv.token("theta"));
    return th;
}

// Exponent to test: s= when given, else the closed form.
double exponent_of(KeyValues& kv, const SetSpec& spec, double theta)
{
    if (const auto v = kv.take("s")) return parse_real(*v, kv.token("s"));
    if (const auto f = formula_value(spec, theta)) return *f;
    throw UsageError("no closed form for this family; pass s=", "s");
}

std::optional<MeasureFamily> measure_for(const SetSpec& spec, double theta, double s, double cap_slack, double floor_slack)
{
    switch (spec.family) {
    case Family::concentric:
        if (spec.radii.kind != RadiusKind::power) return std::nullopt;
        return concentric_family(spec.d, spec.radii.param, theta, s, cap_slack, floor_slack);
    case Family::isolated: return points_family(spec.p, theta, cap_slack, floor_slack);
    case Family::product_sine: return sine_family(spec.p, 0.0, theta, s, cap_slack, floor_slack);
    case Family::attenuated: return sine_family(spec.p, spec.q, theta, s, cap_slack, floor_slack);
    default: return std::nullopt;
    }
}

int cmd_generate(Context& ctx)
{
    const SetSpec spec = spec_from(ctx.kv);
    const std::int64_t budget = count_or(ctx.kv, "budget", 100000);
    const double trunc = real_or(ctx.kv, "truncation", 0.01);
    const PointCloud cloud = sample(spec, budget, trunc);
    emit(ctx, "out", write_cloud(cloud));
    return exit_ok;
}

int cmd_formula(Context& ctx)
{
    const SetSpec spec = spec_from(ctx.kv);
    const ThetaGrid grid = thetas_or(ctx.kv, "thetas", "0:1:0.1");
    emit(ctx, "out", write_profile(formula_profile(spec, grid)));
    return exit_ok;
}

int cmd_profile(Context& ctx)
{
    const SetSpec spec = spec_from(ctx.kv);
    const ThetaGrid grid = thetas_or(ctx.kv, "thetas", "0:1:0.25");
    const auto deltas = deltas_or(ctx.kv, "deltas", "2^-10..2^-30");
    const auto mass_deltas = deltas_or(ctx.kv, "mass_deltas", "2^-10..2^-14");
    const std::int64_t samples = count_or(ctx.kv, "samples", 1000);
    ProfileTable t;
    for (double th : grid.values()) {
        t.thetas.push_back(th);
        const auto f = formula_value(spec, th);
        t.formula.push_back(f);
        std::optional<double> up, lo;
        if (th > 0.0) {
            try {
                up = upper_dim_estimate(spec, th, deltas).extrapolated;
            } catch (const std::invalid_argument&) {
            }
            const double s = f ? *f : 0.5;
            if (const auto fam = measure_for(spec, th, s, 1.1, 0.99)) {
                try {
                    if (verify_mass_distribution(*fam, s, th, mass_deltas, samples).supported) lo = s;
                } catch (const std::invalid_argument&) {
                }
            }
        }
        t.upper.push_back(up);
        t.lower.push_back(lo);
    }
    emit(ctx, "out", write_profile_table(t));
    return exit_ok;
}

int cmd_cover(Context& ctx)
{
    const SetSpec spec = spec_from(ctx.kv);
    const auto dv = ctx.kv.take("delta");
    if (!dv) throw UsageError("missing delta=", "delta");
    const double delta = parse_real(*dv, ctx.kv.token("delta"));
    const double theta = theta_of(ctx.kv, 1.0);
    CoverCounts counts;
    if (const auto m = ctx.kv.take("M")) {
        counts = build_cover_counts(spec, delta, theta, parse_count(*m, ctx.kv.token("M")));
    } else {
        counts = build_theorem_cover(spec, delta, theta, exponent_of(ctx.kv, spec, theta));
    }
    const std::int64_t budget = count_or(ctx.kv, "budget", 100000);
    const double trunc = real_or(ctx.kv, "truncation", 0.01);
    if (ctx.kv.has("cover_out")) {
        const PointCloud cloud = sample(spec, budget, trunc);
        const Cover cover = enumerate_grid_cover(cloud, delta, theta, counts.inner_radius);
        if (!window_ok(cover) || !covers(cover, cloud)) throw InvariantError("grid cover failed its own checks");
        emit(ctx, "cover_out", write_cover(cover));
    }
    emit(ctx, "out", write_cover_counts(counts));
    return exit_ok;
}

int cmd_estimate(Context& ctx)
{
    const SetSpec spec = spec_from(ctx.kv);
    const double theta = theta_of(ctx.kv, 1.0);
    const auto deltas = deltas_or(ctx.kv, "deltas", "2^-8..2^-16");
    const std::int64_t budget = count_or(ctx.kv, "budget", 10000000);
    emit(ctx, "out", write_estimate(estimate_dimension(spec, theta, deltas, budget)));
    return exit_ok;
}

int cmd_verify(Context& ctx)
{
    const SetSpec spec = spec_from(ctx.kv);
    const double theta = theta_of(ctx.kv, 1.0);
    const double s = spec.family == Family::isolated && !ctx.kv.has("s") ? 0.5 : exponent_of(ctx.kv, spec, theta);
    const auto deltas = deltas_or(ctx.kv, "deltas", "2^-10..2^-16");
    const std::int64_t samples = count_or(ctx.kv, "samples", 10000);
    const double cap_slack = real_or(ctx.kv, "cap_slack", 1.1);
    const double floor_slack = real_or(ctx.kv, "floor_slack", 0.99);
    const auto fam = measure_for(spec, theta, s, cap_slack, floor_slack);
    if (!fam) throw UsageError("no measure construction for '" + ctx.kv.token("family") + "'", ctx.kv.token("family"));
    emit(ctx, "out", write_certificate(verify_mass_distribution(*fam, s, theta, deltas, samples)));
    return exit_ok;
}

int cmd_identities(Context& ctx)
{
    const double p = real_or(ctx.kv, "p", 0.5);
    const double q = real_or(ctx.kv, "q", 1.0);
    const auto d = count_or(ctx.kv, "d", 2);
    const ThetaGrid grid = thetas_or(ctx.kv, "thetas", "0:1:0.01");
    if (d < 2) throw UsageError("d must be >= 2: '" + ctx.kv.token("d") + "'", ctx.kv.token("d"));
    constexpr double kTol = 1e-12;
    bool cvt = true, svt = true;
    for (double th : grid.values()) {
        const double lhs = dim_concentric(static_cast<int>(d), p, th) - (d - 1.0);
        cvt = cvt && std::abs(lhs - (dim_attenuated(p, d - 1.0, th) - 1.0)) <= kTol;
        svt = svt && std::abs(dim_elliptical(p, q, th) - dim_attenuated(q, p / q, th)) <= kTol;
    }
    emit(ctx, "out", std::string("C-vs-T: ") + (cvt ? "pass" : "fail") + "\nS-vs-T: " + (svt ? "pass" : "fail") + "\n");
    return cvt && svt ? exit_ok : exit_invariant;
}

} // namespace

std::string usage_text()
{
    return "usage: idim <command> key=value...\n"
           "commands: generate formula profile cover estimate verify-mass identities help\n"
           "set keys: family=fp|concentric|spiral|elliptical|product-sine|attenuated|isolated\n"
           "          d= p= q= radii=power|geometric|log|table ratio= values=a,b,...\n"
           "          count=constant|power-sum|exponential k= l= base=\n"
           "other keys: thetas=a:b:step theta= deltas=2^-8..2^-20 delta= s= M= budget=10^7\n"
           "            samples= truncation= cap_slack= floor_slack= mass_deltas= out= cover_out=\n"
           "exit codes: 0 ok, 2 usage, 3 resource refusal, 4 invariant violation\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    if (args.empty()) {
        err << usage_text();
        return exit_usage;
    }
    const std::string& cmd = args[0];
    if (cmd == "help" || cmd == "--help" || cmd == "-h") {
        out << usage_text();
        return exit_ok;
    }
    try {
        KeyValues kv(std::vector<std::string>(args.begin() + 1, args.end()));
        auto guarded = [&](int (*fn)(Context&)) {
            Context ctx{kv, {}};
            const int c = fn(ctx);
            kv.finish();
            flush(ctx, out);
            return c;
        };
        int code;
        if (cmd == "generate") code = guarded(cmd_generate);
        else if (cmd == "formula") code = guarded(cmd_formula);
        else if (cmd == "profile") code = guarded(cmd_profile);
        else if (cmd == "cover") code = guarded(cmd_cover);
        else if (cmd == "estimate") code = guarded(cmd_estimate);
        else if (cmd == "verify-mass") code = guarded(cmd_verify);
        else if (cmd == "identities") code = guarded(cmd_identities);
        else throw UsageError("unknown command '" + cmd + "'", cmd);
        return code;
    } catch (const UsageError& e) {
        err << "idim: " << e.what() << "\n" << "offending token: " << e.token() << "\n";
        return exit_usage;
    } catch (const ResourceError& e) {
        err << "idim: resource refusal: " << e.what() << "\n";
        return exit_resource;
    } catch (const ThresholdError& e) {
        err << "idim: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "idim: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "idim: internal error: " << e.what() << "\n";
        return exit_invariant;
    }
}

} // namespace idim
