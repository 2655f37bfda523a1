/** Command-line front end for the toolkit.
 *
 * Subcommands:
 *
 *   spectrum     eigenvalues and derivatives of chosen levels at one alpha
 *   curve        level curves lambda_j(alpha) over an alpha range (CSV wide)
 *   critical     locate zeros of lambda_j' and classify them
 *   semiclassic  classical functionals: ec | profile | constants
 *   bohr         level-by-level comparison with the semiclassical predictions
 *   verify       run the acceptance criteria and print a pass/fail table
 *
 * Output is CSV with `#`-prefixed metadata lines (gnuplot-consumable),
 * first line always `# montgomery-toolkit v1`, then the parameter echo and
 * a `# columns:` line.  Numbers are printed in shortest round-trip decimal,
 * so output is byte-identical for identical configuration and seed.
 *
 * Ranges are written `min:max:step` (right endpoint included up to half a
 * step of roundoff, matching the scan convention of the curves module);
 * level lists are comma-separated with `a..b` spans, e.g. `1,3..6`.
 *
 * Exit codes: 0 success, 1 invalid arguments, 2 numerical failure (solver
 * or quadrature diagnostics are printed with the offending parameters).
 * All parameters are validated before any solve starts.  MONT_THREADS caps
 * the sweep parallelism; assembly is ordered, so results do not depend on
 * it.
 */
#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mont/acceptance.hpp"
#include "mont/curves.hpp"
#include "mont/eig.hpp"
#include "mont/semiclassic.hpp"

namespace {

using namespace mont;

enum class Command { Spectrum, Curve, Critical, Semiclassic, Bohr, Verify };
enum class SemiMode { Ec, Profile, Constants };

/// Fully validated run description; building one performs every
/// precondition check so the solve phase only computes.
struct RunConfig {
    Command command = Command::Verify;
    double alpha = 0;                                 ///< spectrum
    std::vector<double> alphas;                       ///< curve, bohr
    std::vector<int> levels;                          ///< all spectral commands
    std::vector<double> energies;                     ///< semiclassic profile
    SemiMode mode = SemiMode::Ec;                     ///< semiclassic
    std::optional<std::pair<double, double>> bracket; ///< critical
    std::string out;                                  ///< empty = stdout
    std::uint64_t seed = 12345;
    std::string echo; ///< raw parameters, for metadata and diagnostics
};

/// Shortest decimal that round-trips to the same double.
std::string fmt(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v))
            throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": '" + text +
                                    "' is not a finite number");
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string::size_type pos = 0;
    while (true) {
        auto next = text.find(sep, pos);
        parts.push_back(text.substr(pos, next - pos));
        if (next == std::string::npos)
            break;
        pos = next + 1;
    }
    return parts;
}

/// `a` or `min:max:step`; endpoint convention as in curves::quotient_scan.
std::vector<double> parse_range(const std::string& text, const char* what) {
    auto parts = split(text, ':');
    if (parts.size() == 1)
        return {parse_double(parts[0], what)};
    if (parts.size() != 3)
        throw std::invalid_argument(std::string(what) +
                                    ": expected a number or min:max:step, got '" +
                                    text + "'");
    double lo = parse_double(parts[0], what);
    double hi = parse_double(parts[1], what);
    double step = parse_double(parts[2], what);
    if (!(step > 0))
        throw std::invalid_argument(std::string(what) + ": step must be positive");
    if (!(lo <= hi))
        throw std::invalid_argument(std::string(what) + ": min must not exceed max");
    int count = static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
    std::vector<double> values(count);
    for (int i = 0; i < count; ++i) values[i] = lo + i * step;
    return values;
}

int parse_level(const std::string& text) {
    try {
        std::size_t used = 0;
        int v = std::stoi(text, &used);
        if (used != text.size())
            throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("levels: '" + text + "' is not an integer");
    }
}

/// Comma-separated tokens, each an integer or an `a..b` span.
std::vector<int> parse_levels(const std::string& text) {
    std::vector<int> levels;
    for (const auto& token : split(text, ',')) {
        auto dots = token.find("..");
        if (dots == std::string::npos) {
            levels.push_back(parse_level(token));
        } else {
            int a = parse_level(token.substr(0, dots));
            int b = parse_level(token.substr(dots + 2));
            if (a > b)
                throw std::invalid_argument("levels: span '" + token +
                                            "' is decreasing");
            for (int j = a; j <= b; ++j) levels.push_back(j);
        }
    }
    if (levels.empty())
        throw std::invalid_argument("levels: empty list");
    for (int j : levels)
        if (j < 1)
            throw std::invalid_argument("levels: indices are 1-based, got " +
                                        std::to_string(j));
    return levels;
}

int write_out(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return 0;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file)
        throw std::invalid_argument("cannot open output file '" + cfg.out + "'");
    file << text;
    if (!file)
        throw std::invalid_argument("write to '" + cfg.out + "' failed");
    return 0;
}

std::ostringstream header(const RunConfig& cfg, const char* command,
                          const std::string& columns) {
    std::ostringstream os;
    os << "# montgomery-toolkit v1\n";
    os << "# command: " << command;
    if (!cfg.echo.empty())
        os << ' ' << cfg.echo;
    os << '\n';
    os << "# seed: " << cfg.seed << '\n';
    os << "# columns: " << columns << '\n';
    return os;
}

int cmd_spectrum(const RunConfig& cfg) {
    auto os = header(cfg, "spectrum", "j,lambda,lambda_prime");
    for (int j : cfg.levels) {
        auto s = curves::eigen_curve(j, cfg.alpha);
        os << j << ',' << fmt(s.lambda) << ',' << fmt(s.lambda_prime) << '\n';
    }
    return write_out(cfg, os.str());
}

int cmd_curve(const RunConfig& cfg) {
    std::string columns = "alpha";
    for (int j : cfg.levels) columns += ",lambda_" + std::to_string(j);
    auto os = header(cfg, "curve", columns);

    std::vector<std::vector<double>> lambda(cfg.levels.size());
    for (std::size_t c = 0; c < cfg.levels.size(); ++c) {
        auto sweep = curves::eigen_curve_sweep(cfg.levels[c], cfg.alphas);
        lambda[c].reserve(sweep.size());
        for (const auto& s : sweep) lambda[c].push_back(s.lambda);
    }
    for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
        os << fmt(cfg.alphas[i]);
        for (const auto& col : lambda) os << ',' << fmt(col[i]);
        os << '\n';
    }
    return write_out(cfg, os.str());
}

int cmd_critical(const RunConfig& cfg) {
    auto os = header(cfg, "critical", "j,alpha_c,lambda,quotient,second_deriv");
    for (int j : cfg.levels) {
        curves::CriticalPoint cp = cfg.bracket
                                       ? curves::find_critical(j, *cfg.bracket)
                                       : curves::find_critical(j);
        os << j << ',' << fmt(cp.alpha_c) << ',' << fmt(cp.lambda_at) << ','
           << fmt(cp.quotient) << ',' << fmt(cp.second_deriv) << '\n';
    }
    return write_out(cfg, os.str());
}

int cmd_semiclassic(const RunConfig& cfg) {
    if (cfg.mode == SemiMode::Ec) {
        auto os = header(cfg, "semiclassic ec", "Ec");
        os << fmt(semiclassic::find_Ec()) << '\n';
        return write_out(cfg, os.str());
    }
    if (cfg.mode == SemiMode::Profile) {
        auto os = header(cfg, "semiclassic profile", "E,C,F,Phi,moment2");
        for (double e : cfg.energies) {
            os << fmt(e) << ',' << fmt(semiclassic::capital_C(e)) << ','
               << fmt(semiclassic::capital_F(e)) << ',' << fmt(semiclassic::phi(e))
               << ',' << fmt(semiclassic::measure_moment(e, 2)) << '\n';
        }
        return write_out(cfg, os.str());
    }
    auto os = header(cfg, "semiclassic constants", "name,value");
    double ec = semiclassic::find_Ec();
    auto regime1 = semiclassic::regime1_constants();
    os << "Ec," << fmt(ec) << '\n';
    os << "action_at_Ec," << fmt(semiclassic::action(ec)) << '\n';
    os << "C_at_Ec," << fmt(semiclassic::capital_C(ec)) << '\n';
    os << "G_at_Ec," << fmt(semiclassic::capital_G(ec)) << '\n';
    os << "lambda_second_limit," << fmt(semiclassic::second_derivative_limit())
       << '\n';
    os << "deep_well_K1," << fmt(regime1.first) << '\n';
    os << "deep_well_limit," << fmt(regime1.second) << '\n';
    os << "bottom_rate," << fmt(semiclassic::bottom_regime_bound(0.0)) << '\n';
    return write_out(cfg, os.str());
}

int cmd_bohr(const RunConfig& cfg) {
    auto os = header(cfg, "bohr",
                     "alpha,j,h,E,bs_energy,bs_diff,lambda_prime_over_alpha,"
                     "phi,phi_diff,grid_moment2,measure_moment2,moment_diff");
    for (double a : cfg.alphas) {
        for (int j : cfg.levels) {
            auto c = curves::semiclassical_comparison(j, a);
            os << fmt(c.alpha) << ',' << c.j << ',' << fmt(c.h) << ','
               << fmt(c.E) << ',' << fmt(c.bs_energy) << ',' << fmt(c.bs_diff)
               << ',' << fmt(c.lambda_prime_over_alpha) << ',' << fmt(c.phi)
               << ',' << fmt(c.phi_diff) << ',' << fmt(c.grid_moment2) << ','
               << fmt(c.measure_moment2) << ',' << fmt(c.moment_diff) << '\n';
        }
    }
    return write_out(cfg, os.str());
}

int cmd_verify(const RunConfig& cfg) {
    auto results = acceptance::run_all();
    std::ostringstream os;
    os << "montgomery-toolkit acceptance criteria\n";
    int failed = 0;
    for (const auto& r : results) {
        if (!r.pass)
            ++failed;
        char line[64];
        std::snprintf(line, sizeof line, "[%2d] %s %-26s ", r.id,
                      r.pass ? "PASS" : "FAIL", r.name.c_str());
        os << line << r.detail << '\n';
    }
    os << results.size() << " criteria: " << results.size() - failed
       << " passed, " << failed << " failed\n";
    write_out(cfg, os.str());
    return failed == 0 ? 0 : 2;
}

int run(const RunConfig& cfg) {
    eig::set_inverse_iteration_seed(cfg.seed);
    switch (cfg.command) {
        case Command::Spectrum: return cmd_spectrum(cfg);
        case Command::Curve: return cmd_curve(cfg);
        case Command::Critical: return cmd_critical(cfg);
        case Command::Semiclassic: return cmd_semiclassic(cfg);
        case Command::Bohr: return cmd_bohr(cfg);
        case Command::Verify: return cmd_verify(cfg);
    }
    return 1;
}

const char* command_name(Command c) {
    switch (c) {
        case Command::Spectrum: return "spectrum";
        case Command::Curve: return "curve";
        case Command::Critical: return "critical";
        case Command::Semiclassic: return "semiclassic";
        case Command::Bohr: return "bohr";
        case Command::Verify: return "verify";
    }
    return "?";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Spectral toolkit for the double-well family "
        "-d^2/dt^2 + (t^2/2 - alpha)^2"};
    app.require_subcommand(1);
    app.footer(
        "Examples:\n"
        "  mont curve --levels 1..6 --alpha -2.5:6.5:0.05\n"
        "  mont semiclassic ec\n"
        "  mont critical --level 1\n"
        "  mont bohr --alpha 5:40:5 --levels 21\n"
        "Exit codes: 0 ok, 1 invalid arguments, 2 numerical failure.");

    std::string sp_alpha, sp_levels = "1..6";
    auto* sp = app.add_subcommand(
        "spectrum", "Eigenvalues and derivatives of chosen levels at one alpha");
    sp->add_option("--alpha", sp_alpha, "coupling value")->required();
    sp->add_option("--levels", sp_levels, "level list, e.g. 1..6 or 1,3,5");

    std::string cu_alpha, cu_levels = "1..6";
    auto* cu = app.add_subcommand("curve",
                                  "Level curves lambda_j(alpha) over an alpha "
                                  "range, one column per level");
    cu->add_option("--alpha", cu_alpha, "alpha range min:max:step")->required();
    cu->add_option("--levels", cu_levels, "level list, e.g. 1..6 or 1,3,5");

    std::string cr_levels, cr_bracket;
    auto* cr = app.add_subcommand(
        "critical", "Locate zeros of lambda_j' and classify them");
    cr->add_option("--level,--levels", cr_levels, "level list")->required();
    cr->add_option("--bracket", cr_bracket,
                   "alpha bracket lo:hi (single level only; default scans)");

    std::string se_mode, se_energy;
    auto* se = app.add_subcommand(
        "semiclassic", "Classical functionals of the rescaled well");
    se->add_option("mode", se_mode, "ec | profile | constants")
        ->required()
        ->check(CLI::IsMember({"ec", "profile", "constants"}));
    se->add_option("--energy", se_energy,
                   "energy range for profile, e.g. 1.1:4:0.05");

    std::string bo_alpha, bo_levels;
    auto* bo = app.add_subcommand(
        "bohr", "Compare levels against the semiclassical predictions");
    bo->add_option("--alpha", bo_alpha, "alpha value or range (positive)")
        ->required();
    bo->add_option("--level,--levels", bo_levels, "level list")->required();

    auto* ve = app.add_subcommand(
        "verify", "Run the acceptance criteria and print a pass/fail table");

    std::string out;
    std::uint64_t seed = 12345;
    for (auto* sub : {sp, cu, cr, se, bo, ve}) {
        sub->add_option("--out", out, "write output to a file instead of stdout");
        sub->add_option("--seed", seed, "inverse-iteration seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    RunConfig cfg;
    cfg.out = out;
    cfg.seed = seed;
    try {
        if (sp->parsed()) {
            cfg.command = Command::Spectrum;
            auto a = parse_range(sp_alpha, "alpha");
            if (a.size() != 1)
                throw std::invalid_argument("spectrum: --alpha takes one value");
            cfg.alpha = a[0];
            cfg.levels = parse_levels(sp_levels);
            cfg.echo = "--alpha " + sp_alpha + " --levels " + sp_levels;
        } else if (cu->parsed()) {
            cfg.command = Command::Curve;
            cfg.alphas = parse_range(cu_alpha, "alpha");
            cfg.levels = parse_levels(cu_levels);
            cfg.echo = "--alpha " + cu_alpha + " --levels " + cu_levels;
        } else if (cr->parsed()) {
            cfg.command = Command::Critical;
            cfg.levels = parse_levels(cr_levels);
            cfg.echo = "--levels " + cr_levels;
            if (!cr_bracket.empty()) {
                auto parts = split(cr_bracket, ':');
                if (parts.size() != 2 || cfg.levels.size() != 1)
                    throw std::invalid_argument(
                        "critical: --bracket needs lo:hi and a single level");
                double lo = parse_double(parts[0], "bracket");
                double hi = parse_double(parts[1], "bracket");
                if (!(lo < hi))
                    throw std::invalid_argument("bracket: lo must be below hi");
                cfg.bracket = {lo, hi};
                cfg.echo += " --bracket " + cr_bracket;
            }
        } else if (se->parsed()) {
            cfg.command = Command::Semiclassic;
            cfg.echo = "";
            if (se_mode == "ec") {
                cfg.mode = SemiMode::Ec;
            } else if (se_mode == "constants") {
                cfg.mode = SemiMode::Constants;
            } else {
                cfg.mode = SemiMode::Profile;
                if (se_energy.empty())
                    throw std::invalid_argument(
                        "semiclassic profile: --energy is required");
                cfg.energies = parse_range(se_energy, "energy");
                for (double e : cfg.energies)
                    if (!(e > 0) ||
                        std::fabs(e - 1) < semiclassic::kBarrierGuard)
                        throw std::invalid_argument(
                            "energy: values must be positive and avoid the "
                            "barrier band |E-1| < 1e-3, got " + fmt(e));
                cfg.echo = "--energy " + se_energy;
            }
        } else if (bo->parsed()) {
            cfg.command = Command::Bohr;
            cfg.alphas = parse_range(bo_alpha, "alpha");
            for (double a : cfg.alphas)
                if (!(a > 0))
                    throw std::invalid_argument(
                        "alpha: the semiclassical comparison needs alpha > 0");
            cfg.levels = parse_levels(bo_levels);
            cfg.echo = "--alpha " + bo_alpha + " --levels " + bo_levels;
        } else {
            cfg.command = Command::Verify;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        return run(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure in '" << command_name(cfg.command);
        if (!cfg.echo.empty())
            std::cerr << ' ' << cfg.echo;
        std::cerr << "': " << e.what() << '\n';
        return 2;
    }
}
