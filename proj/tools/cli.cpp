#include "cli.hpp"

#include <charconv>
#include <complex>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include <mixlaw/mixlaw.hpp>

namespace mixlaw::cli {

namespace {

/// Malformed command-line input; exit code 64.
struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable file; exit code 73.
struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

using cplx = std::complex<double>;

std::string trim(std::string_view s)
{
    while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
    return std::string(s);
}

double parse_real(std::string_view text, std::string_view what)
{
    const std::string s = trim(text);
    std::string_view body = s;
    if (!body.empty() && body.front() == '+')
        body.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (body.empty() || ec != std::errc{} || ptr != body.data() + body.size() || std::isnan(v))
        throw UsageError("invalid " + std::string(what) + " '" + s + "'");
    return v;
}

std::vector<std::string> split(std::string_view text, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::vector<double> parse_list(std::string_view text, std::string_view what)
{
    std::vector<double> out;
    for (const auto& field : split(text, ','))
        out.push_back(parse_real(field, what));
    return out;
}

/// "inf", "-inf", "0" or a finite number.
Exponent parse_exponent(std::string_view text)
{
    return Exponent::from_double(parse_real(text, "exponent"));
}

/// Real number or complex literal "re+imi" / "re-imi" / "imi".
cplx parse_complex(std::string_view text, bool& is_complex)
{
    const std::string s = trim(text);
    is_complex = !s.empty() && s.back() == 'i' && s.find("inf") == std::string::npos;
    if (!is_complex)
        return {parse_real(s, "phase value"), 0.0};
    const std::string_view body(s.data(), s.size() - 1);
    // split at the last sign that does not belong to an exponent
    std::size_t cut = std::string_view::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            cut = i;
            break;
        }
    }
    if (cut == std::string_view::npos)
        return {0.0, parse_real(body, "imaginary part")};
    const std::string_view im = body.substr(cut);
    return {parse_real(body.substr(0, cut), "real part"),
            im.size() == 1 ? (im[0] == '-' ? -1.0 : 1.0) : parse_real(im, "imaginary part")};
}

std::string format_complex(cplx z)
{
    std::string re = format_double(z.real());
    std::string im = format_double(z.imag());
    if (im.front() != '-')
        im.insert(0, "+");
    return re + im + "i";
}

struct Phases
{
    std::vector<double> fractions;
    std::vector<cplx> values;
    bool complex = false;
};

/// Repeated "fraction:value" arguments.
Phases parse_phases(const std::vector<std::string>& args)
{
    if (args.empty())
        throw UsageError("at least one --phase fraction:value is required");
    Phases out;
    for (const auto& arg : args) {
        const auto colon = arg.find(':');
        if (colon == std::string::npos)
            throw UsageError("phase '" + arg + "' must read fraction:value");
        out.fractions.push_back(parse_real(std::string_view(arg).substr(0, colon), "fraction"));
        bool is_complex = false;
        out.values.push_back(parse_complex(std::string_view(arg).substr(colon + 1), is_complex));
        out.complex = out.complex || is_complex;
    }
    return out;
}

std::vector<double> real_parts(const Phases& phases)
{
    std::vector<double> out;
    for (const auto& z : phases.values)
        out.push_back(z.real());
    return out;
}

/// log, affine-log:a,b, power:p, affine-power:a,b,p, witness:cubic-plus-linear, witness:exp
Generator parse_generator(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    const auto params = [&](std::size_t n) {
        const auto v = args.empty() ? std::vector<double>{} : parse_list(args, "generator parameter");
        if (v.size() != n)
            throw UsageError("generator '" + name + "' takes " + std::to_string(n) + " parameter(s)");
        return v;
    };
    if (name == "log") {
        params(0);
        return Generator::affine_log();
    }
    if (name == "affine-log") {
        const auto v = params(2);
        return Generator::affine_log(v[0], v[1]);
    }
    if (name == "power")
        return Generator::power(params(1)[0]);
    if (name == "affine-power") {
        const auto v = params(3);
        return Generator::affine_power(v[0], v[1], v[2]);
    }
    if (text == "witness:cubic-plus-linear")
        return witness::cubic_plus_linear();
    if (text == "witness:exp")
        return witness::exponential();
    throw UsageError("unknown generator '" + text + "'");
}

void print_flags(std::ostream& out, const MixFlags& flags)
{
    if (!flags.empty())
        out << "flags: " << flags.to_string() << '\n';
}

std::string join(std::span<const double> v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + format_double(v[i]);
    return s;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw IoError("cannot write '" + path + "'");
    file << text;
    file.flush();
    if (!file)
        throw IoError("failed writing '" + path + "'");
}

// mix ----------------------------------------------------------------------

struct MixOptions
{
    std::string p;
    std::string generator;
    std::vector<std::string> phases;
    double scale = 1.0;
};

int cmd_mix(const MixOptions& o, std::ostream& out)
{
    if (o.p.empty() == o.generator.empty())
        throw UsageError("give exactly one of --p and --generator");
    if (!(o.scale > 0.0) || !std::isfinite(o.scale))
        throw UsageError("--scale must be positive and finite");
    Phases phases = parse_phases(o.phases);
    for (auto& z : phases.values)
        z *= o.scale;
    const Composition comp(phases.fractions);

    if (phases.complex) {
        if (!o.generator.empty())
            throw UsageError("complex phase values need --p");
        const Exponent p = parse_exponent(o.p);
        if (!p.is_finite())
            detail::raise(Errc::DomainError, "complex values need a finite nonzero exponent");
        const auto r = power_mean_complex(p.value(), comp, phases.values);
        out << format_complex(r.value) << '\n';
        print_flags(out, r.flags);
        return ok;
    }
    const auto vals = real_parts(phases);
    const auto r = o.generator.empty() ? power_mean(parse_exponent(o.p), comp, vals)
                                       : quasi_arithmetic_mean(parse_generator(o.generator), comp, vals);
    out << format_double(r.value) << '\n';
    print_flags(out, r.flags);
    return ok;
}

// invert -------------------------------------------------------------------

struct InvertOptions
{
    std::string p;
    std::string comp;
    std::string known;
    double target = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double sigma = 0.0;
    double sigma_w = 0.0;
    double phi = 0.0;
    double m = 0.0;
};

int cmd_invert_phase(const InvertOptions& o, std::ostream& out)
{
    const Exponent p = parse_exponent(o.p);
    const Composition comp(parse_list(o.comp, "fraction"));
    std::vector<double> known;
    std::size_t hole = std::string::npos;
    for (const auto& field : split(o.known, ',')) {
        if (field == "_") {
            if (hole != std::string::npos)
                throw UsageError("--known must contain exactly one '_'");
            hole = known.size();
            known.push_back(0.0);
        } else {
            known.push_back(parse_real(field, "known value"));
        }
    }
    if (hole == std::string::npos)
        throw UsageError("--known must mark the unknown phase with '_'");
    double value;
    if (p.kind() == Exponent::Kind::Zero)
        value = solve_phase_value_geometric(comp, known, hole, o.target);
    else if (p.is_finite())
        value = solve_phase_value(p.value(), comp, known, hole, o.target);
    else
        detail::raise(Errc::DomainError, "an infinite exponent does not determine a phase value");
    out << format_double(value) << '\n';
    return ok;
}

int cmd_invert_fraction(const InvertOptions& o, std::ostream& out)
{
    out << format_double(solve_fraction_two_phase(parse_exponent(o.p), o.sigma1, o.sigma2, o.target)) << '\n';
    return ok;
}

int cmd_invert_archie(const InvertOptions& o, std::ostream& out)
{
    out << format_double(archie_saturation(o.sigma, o.sigma_w, o.phi, o.m)) << '\n';
    return ok;
}

// fit ----------------------------------------------------------------------

struct FitOptions
{
    std::string csv;
    bool per_sample = false;
    double p_min = -max_fit_exponent;
    double p_max = max_fit_exponent;
};

int cmd_fit(const FitOptions& o, std::ostream& out)
{
    std::ifstream file(o.csv, std::ios::binary);
    if (!file)
        throw IoError("cannot read '" + o.csv + "'");
    const Dataset data = read_dataset_csv(file);
    if (!(o.p_min < o.p_max))
        throw UsageError("--p-min must be below --p-max");
    const auto report = fit_p_global(data, {o.p_min, o.p_max}, o.per_sample);
    out << "p_hat " << format_double(report.p_hat) << '\n';
    out << "rss " << format_double(report.rss) << '\n';
    out << "iterations " << report.iterations << '\n';
    if (report.per_sample_p) {
        for (const auto& s : *report.per_sample_p) {
            out << "sample " << s.index << ' ';
            switch (s.status) {
            case SampleStatus::Solved:
                out << "p " << format_double(s.solution.p);
                if (s.solution.capped)
                    out << " MaxExponent";
                break;
            case SampleStatus::Degenerate: out << "Degenerate"; break;
            case SampleStatus::Unsolvable: out << "Unsolvable limit " << (s.limit_hint > 0 ? "+inf" : "-inf"); break;
            }
            out << '\n';
        }
    }
    return ok;
}

// check --------------------------------------------------------------------

struct CheckOptions
{
    std::string generator;
    std::string t_values;
    std::vector<std::string> comps;
    std::vector<std::string> pairs;
};

int cmd_check(const CheckOptions& o, std::ostream& out)
{
    const Generator g = parse_generator(o.generator);
    ScaleGrid grid = ScaleGrid::default_for(g.domain());
    if (!o.t_values.empty())
        grid.t_values = parse_list(o.t_values, "scale factor");
    if (!o.comps.empty()) {
        grid.comps.clear();
        for (const auto& c : o.comps)
            grid.comps.emplace_back(parse_list(c, "fraction"));
    }
    if (!o.pairs.empty()) {
        grid.value_sets.clear();
        for (const auto& v : o.pairs)
            grid.value_sets.push_back(parse_list(v, "grid value"));
    }
    const auto report = check_scale_independence(g, grid);
    out << "generator " << o.generator << '\n';
    out << "max_residual " << format_double(report.max_abs_residual) << '\n';
    out << "argmax t=" << format_double(report.argmax_point.t) << " comp=" << join(report.argmax_point.comp)
        << " vals=" << join(report.argmax_point.vals) << '\n';
    out << "grid_size " << report.grid_size << '\n';
    out << "verdict " << to_string(report.verdict) << '\n';
    switch (report.verdict) {
    case Verdict::Conforms: return ok;
    case Verdict::Violates: return violates;
    case Verdict::Inconclusive: return inconclusive;
    }
    return inconclusive;
}

// sweep --------------------------------------------------------------------

struct SweepOptions
{
    std::string var = "p";
    std::string from;
    std::string to;
    int steps = 0;
    std::string list;
    std::string p = "1";
    std::vector<std::string> phases;
    std::string output = "-";
};

std::vector<double> sweep_points(const SweepOptions& o)
{
    const bool has_range = !o.from.empty() || !o.to.empty() || o.steps != 0;
    if (has_range == !o.list.empty())
        throw UsageError("give either --from/--to/--steps or --list");
    if (!o.list.empty())
        return parse_list(o.list, "sweep point");
    if (o.from.empty() || o.to.empty())
        throw UsageError("--from and --to are required with --steps");
    const double from = parse_real(o.from, "--from");
    const double to = parse_real(o.to, "--to");
    if (o.steps < 2)
        throw UsageError("--steps must be at least 2");
    if (!(from < to) || !std::isfinite(from) || !std::isfinite(to))
        throw UsageError("--from must be below --to, both finite");
    std::vector<double> points;
    for (int i = 0; i < o.steps; ++i)
        points.push_back(i == o.steps - 1 ? to : from + (to - from) * i / (o.steps - 1));
    return points;
}

int cmd_sweep(const SweepOptions& o, std::ostream& out)
{
    const auto points = sweep_points(o);
    const Phases phases = parse_phases(o.phases);
    if (phases.complex)
        throw UsageError("sweep takes real phase values only");
    const auto vals = real_parts(phases);

    std::size_t fraction_index = 0;
    if (o.var.size() > 1 && o.var[0] == 'a') {
        const double k = parse_real(o.var.substr(1), "fraction index");
        if (k < 1 || k > static_cast<double>(vals.size()) || k != std::floor(k))
            throw UsageError("sweep variable '" + o.var + "' names no phase");
        fraction_index = static_cast<std::size_t>(k);
    } else if (o.var != "p" && o.var != "t") {
        throw UsageError("sweep variable must be p, t or a<i>");
    }

    const Composition base(phases.fractions);
    const Exponent fixed_p = o.var == "p" ? Exponent::zero() : parse_exponent(o.p);
    std::ostringstream csv;
    csv << o.var << ",value,flags\n";
    for (double x : points) {
        MixResult<double> r;
        if (o.var == "p") {
            r = power_mean(Exponent::from_double(x), base, vals);
        } else if (o.var == "t") {
            if (!(x > 0.0) || !std::isfinite(x))
                detail::raise(Errc::DomainError, "scale factor must be positive and finite");
            std::vector<double> scaled = vals;
            for (double& v : scaled)
                v *= x;
            r = power_mean(fixed_p, base, scaled);
        } else {
            // the other fractions share 1 - x in their original proportions
            const std::size_t j = fraction_index - 1;
            if (!(x >= 0.0 && x <= 1.0))
                detail::raise(Errc::InvalidComposition, "swept fraction must lie in [0, 1]");
            const double others = base.sum() - base[j];
            if (others <= 0.0 && x < 1.0)
                detail::raise(Errc::InvalidComposition, "no other phase can take the remaining fraction");
            std::vector<double> fractions(base.fractions().begin(), base.fractions().end());
            for (std::size_t k = 0; k < fractions.size(); ++k)
                fractions[k] = k == j ? x : fractions[k] * (1.0 - x) / others;
            r = power_mean(fixed_p, Composition::normalized(fractions), vals);
        }
        csv << format_double(x) << ',' << format_double(r.value) << ',' << r.flags.to_string() << '\n';
    }
    write_output(o.output, csv.str(), out);
    return ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Scale-independent mixing laws: power and geometric means of phase values", "mixlaw"};
    app.set_config("--config", "", "TOML file mirroring the command-line options; flags override it");
    app.require_subcommand(1);
    app.set_version_flag("--version", "mixlaw 0.1.0");

    int status = ok;

    MixOptions mix;
    auto* mix_cmd = app.add_subcommand("mix", "Mixture value of the given phases");
    mix_cmd->add_option("--p", mix.p, "Exponent: a real number, 0 (geometric), inf or -inf");
    mix_cmd->add_option("--generator", mix.generator, "Generator descriptor instead of --p (e.g. log, power:2)");
    mix_cmd->add_option("--phase", mix.phases, "fraction:value, value real or re+imi; repeat per phase");
    mix_cmd->add_option("--scale", mix.scale, "Multiply every phase value by this factor");
    mix_cmd->callback([&] { status = cmd_mix(mix, out); });

    InvertOptions inv;
    auto* inv_cmd = app.add_subcommand("invert", "Solve the mixing law for an unknown quantity");
    inv_cmd->require_subcommand(1);
    auto* phase_cmd = inv_cmd->add_subcommand("phase", "Value of the phase marked '_' in --known");
    phase_cmd->add_option("--p", inv.p, "Exponent (0 for geometric)")->required();
    phase_cmd->add_option("--comp", inv.comp, "Fractions, comma separated")->required();
    phase_cmd->add_option("--known", inv.known, "Phase values with '_' for the unknown one")->required();
    phase_cmd->add_option("--target", inv.target, "Measured mixture value")->required();
    phase_cmd->callback([&] { status = cmd_invert_phase(inv, out); });
    auto* fraction_cmd = inv_cmd->add_subcommand("fraction", "Fraction of phase 1 in a two-phase mixture");
    fraction_cmd->add_option("--p", inv.p, "Exponent (0 for geometric)")->required();
    fraction_cmd->add_option("--sigma1", inv.sigma1, "Value of phase 1")->required();
    fraction_cmd->add_option("--sigma2", inv.sigma2, "Value of phase 2")->required();
    fraction_cmd->add_option("--target", inv.target, "Measured mixture value")->required();
    fraction_cmd->callback([&] { status = cmd_invert_fraction(inv, out); });
    auto* archie_cmd = inv_cmd->add_subcommand("archie-sw", "Archie water saturation (n = m)");
    archie_cmd->add_option("--sigma", inv.sigma, "Rock conductivity")->required();
    archie_cmd->add_option("--sigma-w", inv.sigma_w, "Brine conductivity")->required();
    archie_cmd->add_option("--phi", inv.phi, "Porosity")->required();
    archie_cmd->add_option("--m", inv.m, "Archie exponent")->required();
    archie_cmd->callback([&] { status = cmd_invert_archie(inv, out); });

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "Least-squares exponent for a dataset CSV");
    fit_cmd->add_option("csv", fit.csv, "Dataset file: a1..an,s1..sn,measured")->required();
    fit_cmd->add_flag("--per-sample", fit.per_sample, "Also solve every sample on its own");
    fit_cmd->add_option("--p-min", fit.p_min, "Lower end of the search bracket");
    fit_cmd->add_option("--p-max", fit.p_max, "Upper end of the search bracket");
    fit_cmd->callback([&] { status = cmd_fit(fit, out); });

    CheckOptions check;
    auto* check_cmd = app.add_subcommand("check", "Scale-independence check of a generator");
    check_cmd->add_option("generator", check.generator,
                          "log, affine-log:a,b, power:p, affine-power:a,b,p, witness:cubic-plus-linear, witness:exp")
        ->required();
    check_cmd->add_option("--t", check.t_values, "Scale factors, comma separated");
    check_cmd->add_option("--comp", check.comps, "Grid composition a1,a2; repeatable");
    check_cmd->add_option("--pair", check.pairs, "Grid value pair v1,v2; repeatable");
    check_cmd->callback([&] { status = cmd_check(check, out); });

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "CSV table of the mixture value along one variable");
    sweep_cmd->add_option("--var", sweep.var, "p, t, or a<i> (fraction of phase i)");
    sweep_cmd->add_option("--from", sweep.from, "First point");
    sweep_cmd->add_option("--to", sweep.to, "Last point");
    sweep_cmd->add_option("--steps", sweep.steps, "Number of points, at least 2");
    sweep_cmd->add_option("--list", sweep.list, "Explicit points, comma separated");
    sweep_cmd->add_option("--p", sweep.p, "Exponent when sweeping t or a fraction");
    sweep_cmd->add_option("--phase", sweep.phases, "fraction:value; repeat per phase");
    sweep_cmd->add_option("--output,-o", sweep.output, "Output file, '-' for standard output");
    sweep_cmd->callback([&] { status = cmd_sweep(sweep, out); });

    std::vector<std::string> argv_store{"mixlaw"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::FileError& e) {
        app.exit(e, out, err);
        return io_error;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    } catch (const UsageError& e) {
        err << "mixlaw: " << e.what() << '\n';
        return usage;
    } catch (const IoError& e) {
        err << "mixlaw: " << e.what() << '\n';
        return io_error;
    } catch (const Error& e) {
        err << "mixlaw: " << e.what() << '\n';
        return e.code() == Errc::MalformedData ? data_format : domain_error;
    }
    return status;
}

} // namespace mixlaw::cli
