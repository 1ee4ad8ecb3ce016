#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bogodiag/verify.hpp"

using namespace bogodiag;

namespace {

std::vector<int> parse_nmax(const std::string& csv) {
    std::vector<int> out;
    size_t pos = 0;
    while (pos < csv.size()) {
        size_t comma = csv.find(',', pos);
        std::string item = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        pos = comma == std::string::npos ? csv.size() : comma + 1;
        if (item.empty()) throw ConfigParseError("(cli)", "--nmax", "empty entry in list");
        char* end = nullptr;
        long v = std::strtol(item.c_str(), &end, 10);
        if (*end != '\0' || v < 0 || v > 1000000)
            throw ConfigParseError("(cli)", "--nmax", "'" + item + "' is not a valid cutoff");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

void apply_overrides(VerifyOptions& opts, const std::vector<std::string>& overrides) {
    for (const auto& item : overrides) {
        size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigParseError("(cli)", "--tol-override", "'" + item + "' is not name=value");
        std::string name = item.substr(0, eq);
        std::string raw = item.substr(eq + 1);
        char* end = nullptr;
        double value = std::strtod(raw.c_str(), &end);
        if (raw.empty() || *end != '\0')
            throw ConfigParseError("(cli)", "--tol-override", "'" + raw + "' is not a number");
        opts.override_tol(name, value);
    }
}

// complex matrix as CSV, each entry contributing a re and an im column
void write_matrix_csv(const Matrix& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigParseError(path, "(file)", "cannot write");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) f << ",";
            f << format_double(m(i, j).real()) << "," << format_double(m(i, j).imag());
        }
        f << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bogoliubov diagonalization of pair interaction models"};
    app.require_subcommand(1);

    std::string config_path, nmax_csv, format = "all", out_dir = ".";
    std::vector<std::string> overrides;
    VerifyOptions opts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "model configuration file")->required();
        sub->add_option("--nmax", nmax_csv, "comma separated quanta cutoffs (default 8,12)");
        sub->add_option("--tol-override", overrides, "tolerance override as name=value")
            ->take_all();
        sub->add_option("--seed", opts.seed, "random seed for sampled checks (default 42)");
        sub->add_option("--samples", opts.samples,
                        "sample count for the inequality suite (default 200)");
        sub->add_option("--format", format, "report formats: machine, csv, text, all")
            ->check(CLI::IsMember({"machine", "csv", "text", "all"}));
        sub->add_option("--out", out_dir, "directory for report files (default .)");
        return sub;
    };

    auto* cmd_validate = add_common(app.add_subcommand("validate", "stability conditions only"));
    auto* cmd_diag = add_common(
        app.add_subcommand("diagonalize", "conditions plus S, E, and the sandwich constants"));
    auto* cmd_verify =
        add_common(app.add_subcommand("verify", "every identity, bound, and oracle check"));
    auto* cmd_spectrum = add_common(
        app.add_subcommand("spectrum", "low eigenvalues of H against dGamma(S) + E per cutoff"));
    add_common(app.add_subcommand("sweep", "fiber ground energy along a momentum grid"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        auto loaded = load_model(config_path);
        if (!nmax_csv.empty()) opts.nmax_list = parse_nmax(nmax_csv);
        apply_overrides(opts, overrides);

        VerifyOutcome out;
        if (cmd_validate->parsed()) out = run_validate(loaded, opts);
        else if (cmd_diag->parsed()) out = run_diagonalize(loaded, opts);
        else if (cmd_verify->parsed()) out = run_verify(loaded, opts);
        else if (cmd_spectrum->parsed()) out = run_spectrum(loaded, opts);
        else out = run_sweep(loaded, opts);

        auto files = write_reports(out.report, out_dir, format);
        if (cmd_diag->parsed() && out.diag) {
            std::string p = out_dir + "/" + out.report.model_id + "_S.csv";
            write_matrix_csv(out.diag->S.matrix(), p);
            files.push_back(p);
        }

        std::fputs(to_text(out.report).c_str(), stdout);
        print_timings(out.report);
        for (const auto& f : files) std::fprintf(stderr, "wrote %s\n", f.c_str());
        return out.report.pass ? 0 : 1;
    } catch (const ConfigParseError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const CapacityExceeded& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const CouplingTooStrong& e) {
        std::fprintf(stderr, "model rejected: %s\n", e.what());
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
