#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "config.hpp"

namespace bogodiag {

using OrderedJson = nlohmann::ordered_json;

struct ResidualEntry {
    std::string name;
    double value;
    double bound;
    bool pass;
};

struct ReportScalar {
    std::string name;
    double value;
};

struct InequalityCount {
    std::string family;
    long samples;
    long violations;
    double worst;
};

struct DiagSummary {
    double E, E_crosscheck, c1, c2, eigmin_S, sandwich_margin, hs_norm_Y;
};

struct SpectrumTable {
    int nmax;
    RealVector eigs_H, eigs_pred;
    double max_dev;
};

struct SweepRow {
    double scale, E_P, ir_diagnostic;
};

struct TimingEntry {
    std::string phase;
    double millis;
};

// Everything one command run produces. Timing entries go to stderr only; the
// serialized report files depend on nothing but the model and the flags, so
// repeated runs are byte-identical.
struct RunReport {
    std::string model_id, kind, command;
    std::uint64_t seed = 42;
    long samples = 0;
    std::vector<int> nmax_list;
    std::optional<ConditionReport> conditions;
    std::optional<DiagSummary> diag;
    std::vector<ReportScalar> scalars;
    std::vector<ResidualEntry> residuals;
    std::vector<InequalityCount> inequality_counts;
    std::vector<SpectrumTable> spectra;
    std::vector<SweepRow> sweep;
    std::vector<TimingEntry> timings;
    bool pass = true;
};

inline OrderedJson to_machine_json(const RunReport& r) {
    OrderedJson j;
    j["model_id"] = r.model_id;
    j["kind"] = r.kind;
    j["command"] = r.command;
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    j["nmax"] = r.nmax_list;
    if (r.conditions) {
        const auto& c = *r.conditions;
        j["conditions"] = OrderedJson{{"eigmin_T", c.eigmin_T}, {"D1", c.D1},
                                      {"D2", c.D2},             {"epsilon", c.epsilon},
                                      {"b6_ok", c.b6_ok},       {"kato_small", c.kato_small},
                                      {"pass", c.pass}};
    }
    if (r.diag) {
        const auto& d = *r.diag;
        j["diagonalization"] =
            OrderedJson{{"E", d.E},           {"E_crosscheck", d.E_crosscheck},
                        {"c1", d.c1},         {"c2", d.c2},
                        {"eigmin_S", d.eigmin_S}, {"sandwich_margin", d.sandwich_margin},
                        {"hs_norm_Y", d.hs_norm_Y}};
    }
    if (!r.scalars.empty()) {
        OrderedJson s;
        for (const auto& x : r.scalars) s[x.name] = x.value;
        j["scalars"] = std::move(s);
    }
    if (!r.residuals.empty()) {
        OrderedJson s;
        for (const auto& x : r.residuals)
            s[x.name] = OrderedJson{{"value", x.value}, {"bound", x.bound}, {"pass", x.pass}};
        j["residuals"] = std::move(s);
    }
    if (!r.inequality_counts.empty()) {
        OrderedJson s;
        for (const auto& x : r.inequality_counts)
            s[x.family] = OrderedJson{
                {"samples", x.samples}, {"violations", x.violations}, {"worst", x.worst}};
        j["inequalities"] = std::move(s);
    }
    if (!r.spectra.empty()) {
        OrderedJson arr = OrderedJson::array();
        for (const auto& t : r.spectra) {
            OrderedJson e;
            e["nmax"] = t.nmax;
            e["max_dev"] = t.max_dev;
            e["eigs_H"] = std::vector<double>(t.eigs_H.begin(), t.eigs_H.end());
            e["eigs_pred"] = std::vector<double>(t.eigs_pred.begin(), t.eigs_pred.end());
            arr.push_back(std::move(e));
        }
        j["spectra"] = std::move(arr);
    }
    if (!r.sweep.empty()) {
        OrderedJson arr = OrderedJson::array();
        for (const auto& row : r.sweep)
            arr.push_back(OrderedJson{{"scale", row.scale},
                                      {"E_P", row.E_P},
                                      {"ir_diagnostic", row.ir_diagnostic}});
        j["sweep"] = std::move(arr);
    }
    j["pass"] = r.pass;
    return j;
}

// Flat five-column table: section,name,value,bound,pass. Sections with only a
// value leave the trailing columns empty.
inline std::string to_csv(const RunReport& r) {
    std::string out = "section,name,value,bound,pass\n";
    auto row = [&out](const std::string& sec, const std::string& name, const std::string& v,
                      const std::string& b, const std::string& p) {
        out += sec + "," + name + "," + v + "," + b + "," + p + "\n";
    };
    auto num = [](double x) { return format_double(x); };

    row("meta", "model_id", r.model_id, "", "");
    row("meta", "kind", r.kind, "", "");
    row("meta", "command", r.command, "", "");
    row("meta", "seed", std::to_string(r.seed), "", "");
    row("meta", "samples", std::to_string(r.samples), "", "");
    {
        std::string lst;
        for (size_t i = 0; i < r.nmax_list.size(); ++i)
            lst += (i ? ";" : "") + std::to_string(r.nmax_list[i]);
        row("meta", "nmax", lst, "", "");
    }
    if (r.conditions) {
        const auto& c = *r.conditions;
        row("condition", "eigmin_T", num(c.eigmin_T), "", "");
        row("condition", "D1", num(c.D1), "", "");
        row("condition", "D2", num(c.D2), "", "");
        row("condition", "epsilon", num(c.epsilon), "", "");
        row("condition", "b6_ok", c.b6_ok ? "1" : "0", "", "");
        row("condition", "kato_small", c.kato_small ? "1" : "0", "", "");
        row("condition", "pass", c.pass ? "1" : "0", "", "");
    }
    if (r.diag) {
        const auto& d = *r.diag;
        row("diagonalization", "E", num(d.E), "", "");
        row("diagonalization", "E_crosscheck", num(d.E_crosscheck), "", "");
        row("diagonalization", "c1", num(d.c1), "", "");
        row("diagonalization", "c2", num(d.c2), "", "");
        row("diagonalization", "eigmin_S", num(d.eigmin_S), "", "");
        row("diagonalization", "sandwich_margin", num(d.sandwich_margin), "", "");
        row("diagonalization", "hs_norm_Y", num(d.hs_norm_Y), "", "");
    }
    for (const auto& x : r.scalars) row("scalar", x.name, num(x.value), "", "");
    for (const auto& x : r.residuals)
        row("residual", x.name, num(x.value), num(x.bound), x.pass ? "1" : "0");
    for (const auto& x : r.inequality_counts) {
        row("inequality", x.family + "_samples", std::to_string(x.samples), "", "");
        row("inequality", x.family + "_violations", std::to_string(x.violations), "",
            x.violations == 0 ? "1" : "0");
        row("inequality", x.family + "_worst", num(x.worst), "", "");
    }
    for (const auto& t : r.spectra) {
        std::string sec = "spectrum_nmax" + std::to_string(t.nmax);
        for (Eigen::Index i = 0; i < t.eigs_H.size(); ++i)
            row(sec, "eig" + std::to_string(i), num(t.eigs_H(i)), num(t.eigs_pred(i)), "");
        row(sec, "max_dev", num(t.max_dev), "", "");
    }
    for (const auto& s : r.sweep) {
        row("sweep", "scale_" + num(s.scale) + "_E_P", num(s.E_P), "", "");
        row("sweep", "scale_" + num(s.scale) + "_ir", num(s.ir_diagnostic), "", "");
    }
    row("result", "pass", r.pass ? "1" : "0", "", "");
    return out;
}

inline std::string to_text(const RunReport& r) {
    std::string out;
    auto line = [&out](const std::string& name, const std::string& v) {
        out += "  " + name;
        if (name.size() < 28) out += std::string(28 - name.size(), ' ');
        out += " " + v + "\n";
    };
    auto num = [](double x) { return format_double(x); };

    out += "model " + r.model_id + " (" + r.kind + "), command " + r.command + "\n";
    out += "seed " + std::to_string(r.seed) + ", samples " + std::to_string(r.samples);
    out += ", nmax";
    for (int n : r.nmax_list) out += " " + std::to_string(n);
    out += "\n";
    if (r.conditions) {
        const auto& c = *r.conditions;
        out += "conditions\n";
        line("eigmin_T", num(c.eigmin_T));
        line("D1", num(c.D1));
        line("D2", num(c.D2));
        line("epsilon", num(c.epsilon));
        line("b6_ok", c.b6_ok ? "yes" : "no");
        line("kato_small", c.kato_small ? "yes" : "no");
        line("pass", c.pass ? "yes" : "no");
    }
    if (r.diag) {
        const auto& d = *r.diag;
        out += "diagonalization\n";
        line("E", num(d.E));
        line("E_crosscheck", num(d.E_crosscheck));
        line("c1", num(d.c1));
        line("c2", num(d.c2));
        line("eigmin_S", num(d.eigmin_S));
        line("sandwich_margin", num(d.sandwich_margin));
        line("hs_norm_Y", num(d.hs_norm_Y));
    }
    if (!r.scalars.empty()) {
        out += "scalars\n";
        for (const auto& x : r.scalars) line(x.name, num(x.value));
    }
    if (!r.residuals.empty()) {
        out += "residuals (value / bound)\n";
        for (const auto& x : r.residuals)
            line(x.name, num(x.value) + " / " + num(x.bound) + (x.pass ? "  ok" : "  FAIL"));
    }
    if (!r.inequality_counts.empty()) {
        out += "inequalities\n";
        for (const auto& x : r.inequality_counts)
            line(x.family, std::to_string(x.violations) + " violations in " +
                               std::to_string(x.samples) + " samples, worst " + num(x.worst));
    }
    for (const auto& t : r.spectra) {
        out += "spectrum nmax " + std::to_string(t.nmax) + " (H vs dGamma(S)+E), max_dev " +
               num(t.max_dev) + "\n";
        for (Eigen::Index i = 0; i < t.eigs_H.size(); ++i)
            line("eig" + std::to_string(i), num(t.eigs_H(i)) + " / " + num(t.eigs_pred(i)));
    }
    if (!r.sweep.empty()) {
        out += "momentum sweep (scale, E_P, ir_diagnostic)\n";
        for (const auto& s : r.sweep)
            line("scale " + num(s.scale), num(s.E_P) + " / " + num(s.ir_diagnostic));
    }
    out += std::string("result ") + (r.pass ? "PASS" : "FAIL") + "\n";
    return out;
}

inline void print_timings(const RunReport& r) {
    for (const auto& t : r.timings)
        std::fprintf(stderr, "timing %s %.1f ms\n", t.phase.c_str(), t.millis);
}

// Writes <model_id>_<command>.<ext> for the chosen formats into out_dir.
// Returns the paths written. format is one of machine, csv, text, all.
inline std::vector<std::string> write_reports(const RunReport& r, const std::string& out_dir,
                                              const std::string& format) {
    bool machine = format == "machine" || format == "all";
    bool csv = format == "csv" || format == "all";
    bool text = format == "text" || format == "all";
    if (!machine && !csv && !text)
        throw ConfigParseError("(cli)", "format", "expected machine, csv, text, or all");

    std::vector<std::string> written;
    auto emit = [&](const std::string& ext, const std::string& body) {
        std::string p = out_dir + "/" + r.model_id + "_" + r.command + "." + ext;
        std::ofstream f(p);
        if (!f) throw ConfigParseError(p, "(file)", "cannot write");
        f << body;
        written.push_back(std::move(p));
    };
    if (machine) emit("json", to_machine_json(r).dump(2) + "\n");
    if (csv) emit("csv", to_csv(r));
    if (text) emit("txt", to_text(r));
    return written;
}

} // namespace bogodiag
