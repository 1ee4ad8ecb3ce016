#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>

#include "json.hpp"

#include "models.hpp"

namespace bogodiag {

using Json = nlohmann::json;

struct OscillatorParams {
    double omega, lambda;
    HermitianOperator T;
    Vector g;
};

struct PauliFierzParams {
    std::vector<double> omegas;
    HermitianOperator T;
    std::vector<Vector> gs;
};

struct FiberParams {
    HermitianOperator T;
    std::vector<Vector> gs;
    std::vector<double> P;
};

// A model file resolved into the pair model that gets diagonalized, plus the
// raw parameters of derived kinds so the untransformed oracle can be built.
struct LoadedModel {
    std::string model_id;
    std::string kind;
    PairModel model;
    double energy_offset = 0.0;
    std::optional<OscillatorParams> oscillator;
    std::optional<PauliFierzParams> pauli_fierz;
    std::optional<FiberParams> fiber;
};

namespace cfg {

inline const Json& require(const Json& j, const std::string& key, const std::string& field,
                           const std::string& path) {
    if (!j.is_object()) throw ConfigParseError(path, field, "parent is not an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigParseError(path, field, "missing");
    return *it;
}

inline const Json& require(const Json& j, const std::string& field, const std::string& path) {
    return require(j, field, field, path);
}

inline double number(const Json& j, const std::string& field, const std::string& path) {
    if (!j.is_number()) throw ConfigParseError(path, field, "expected a number");
    return j.get<double>();
}

inline long integer(const Json& j, const std::string& field, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigParseError(path, field, "expected an integer");
    return j.get<long>();
}

inline std::string text(const Json& j, const std::string& field, const std::string& path) {
    if (!j.is_string()) throw ConfigParseError(path, field, "expected a string");
    return j.get<std::string>();
}

// scalar entries are either a plain number or a [re, im] pair
inline Complex centry(const Json& j, const std::string& field, const std::string& path) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw ConfigParseError(path, field, "expected a number or [re, im]");
}

inline Vector cvector(const Json& j, const std::string& field, const std::string& path) {
    if (!j.is_array()) throw ConfigParseError(path, field, "expected an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = centry(j[i], field + "[" + std::to_string(i) + "]", path);
    return v;
}

inline Matrix cmatrix(const Json& j, const std::string& field, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigParseError(path, field, "expected an array of rows");
    const size_t rows = j.size();
    const size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw ConfigParseError(path, field, "rows must be nonempty arrays");
    Matrix m(rows, cols);
    for (size_t r = 0; r < rows; ++r) {
        const std::string row_field = field + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != cols)
            throw ConfigParseError(path, row_field, "rows must all have the same length");
        for (size_t c = 0; c < cols; ++c)
            m(r, c) = centry(j[r][c], row_field + "[" + std::to_string(c) + "]", path);
    }
    return m;
}

inline HermitianOperator one_particle(const Json& j, const std::string& field,
                                      const std::string& path) {
    if (!j.is_object()) throw ConfigParseError(path, field, "expected {\"diag\": ...} or {\"dense\": ...}");
    bool has_diag = j.contains("diag"), has_dense = j.contains("dense");
    if (has_diag == has_dense)
        throw ConfigParseError(path, field, "needs exactly one of 'diag' or 'dense'");
    if (has_diag) {
        const Json& d = j.at("diag");
        if (!d.is_array()) throw ConfigParseError(path, field + ".diag", "expected an array");
        RealVector v(static_cast<Eigen::Index>(d.size()));
        for (size_t i = 0; i < d.size(); ++i)
            v(static_cast<Eigen::Index>(i)) =
                number(d[i], field + ".diag[" + std::to_string(i) + "]", path);
        return HermitianOperator::diagonal(v);
    }
    Matrix m = cmatrix(j.at("dense"), field + ".dense", path);
    try {
        return HermitianOperator::validated(m);
    } catch (const Error& e) {
        throw ConfigParseError(path, field + ".dense", e.what());
    }
}

inline void reject_unknown(const Json& j, const std::set<std::string>& allowed,
                           const std::string& path) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigParseError(path, it.key(), "unknown field");
}

inline void check_dim(long dim, Eigen::Index got, const std::string& field,
                      const std::string& path) {
    if (got != dim)
        throw ConfigParseError(path, field,
                               "size " + std::to_string(got) + " does not match dim " +
                                   std::to_string(dim));
}

inline Conjugation real_structure(const Json& j, const Json::const_iterator& it, long dim,
                                  const std::string& path) {
    if (it == j.end()) return Conjugation::canonical(dim);
    if (it->is_string()) {
        if (it->get<std::string>() == "canonical_real") return Conjugation::canonical(dim);
        throw ConfigParseError(path, "real_structure", "unknown value, use \"canonical_real\"");
    }
    if (it->is_object() && it->contains("explicit_J")) {
        Matrix u = cmatrix(it->at("explicit_J"), "real_structure.explicit_J", path);
        if (u.rows() != dim)
            throw ConfigParseError(path, "real_structure.explicit_J", "size does not match dim");
        try {
            return Conjugation::with_matrix(u);
        } catch (const Error& e) {
            throw ConfigParseError(path, "real_structure.explicit_J", e.what());
        }
    }
    throw ConfigParseError(path, "real_structure",
                           "expected \"canonical_real\" or {\"explicit_J\": matrix}");
}

inline std::vector<Coupling> couplings(const Json& j, long dim, const std::string& path) {
    if (!j.is_array()) throw ConfigParseError(path, "couplings", "expected an array");
    std::vector<Coupling> cs;
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string field = "couplings[" + std::to_string(i) + "]";
        if (!j[i].is_object()) throw ConfigParseError(path, field, "expected an object");
        reject_unknown(j[i], {"lambda", "g"}, path);
        double lambda = number(require(j[i], "lambda", field + ".lambda", path),
                               field + ".lambda", path);
        Vector g = cvector(require(j[i], "g", field + ".g", path), field + ".g", path);
        check_dim(dim, g.size(), field + ".g", path);
        cs.push_back({lambda, std::move(g)});
    }
    return cs;
}

} // namespace cfg

inline LoadedModel parse_model(const Json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigParseError(path, "(root)", "expected an object");
    LoadedModel out;
    out.model_id = cfg::text(cfg::require(j, "model_id", path), "model_id", path);
    out.kind = cfg::text(cfg::require(j, "kind", path), "kind", path);
    long dim = cfg::integer(cfg::require(j, "dim", path), "dim", path);
    if (dim < 1) throw ConfigParseError(path, "dim", "must be at least 1");

    auto T_of = [&](const char* field) {
        auto T = cfg::one_particle(cfg::require(j, field, path), field, path);
        cfg::check_dim(dim, T.dim(), field, path);
        return T;
    };

    if (out.kind == "pair" || out.kind == "single_pair") {
        bool single = out.kind == "single_pair";
        cfg::reject_unknown(j,
                            single ? std::set<std::string>{"model_id", "kind", "dim", "T",
                                                           "lambda", "g", "real_structure"}
                                   : std::set<std::string>{"model_id", "kind", "dim", "T",
                                                           "couplings", "real_structure"},
                            path);
        auto T = T_of("T");
        std::vector<Coupling> cs;
        if (single) {
            double lambda = cfg::number(cfg::require(j, "lambda", path), "lambda", path);
            Vector g = cfg::cvector(cfg::require(j, "g", path), "g", path);
            cfg::check_dim(dim, g.size(), "g", path);
            cs.push_back({lambda, std::move(g)});
        } else {
            cs = cfg::couplings(cfg::require(j, "couplings", path), dim, path);
        }
        auto conj = cfg::real_structure(j, j.find("real_structure"), dim, path);
        out.model = PairModel::make(std::move(T), std::move(cs), std::move(conj));
        return out;
    }

    if (out.kind == "oscillator_field") {
        cfg::reject_unknown(j, {"model_id", "kind", "dim", "omega", "lambda", "T", "g"}, path);
        OscillatorParams p{cfg::number(cfg::require(j, "omega", path), "omega", path),
                           cfg::number(cfg::require(j, "lambda", path), "lambda", path),
                           T_of("T"),
                           cfg::cvector(cfg::require(j, "g", path), "g", path)};
        cfg::check_dim(dim, p.g.size(), "g", path);
        if (p.omega <= 0.0) throw ConfigParseError(path, "omega", "must be positive");
        auto ext = oscillator_field(p.omega, p.lambda, p.T, p.g);
        out.model = std::move(ext.model);
        out.energy_offset = ext.energy_offset;
        out.oscillator = std::move(p);
        return out;
    }

    if (out.kind == "pauli_fierz_dipole") {
        cfg::reject_unknown(j, {"model_id", "kind", "dim", "omegas", "T", "gs"}, path);
        PauliFierzParams p{{}, T_of("T"), {}};
        const Json& om = cfg::require(j, "omegas", path);
        if (!om.is_array() || om.empty())
            throw ConfigParseError(path, "omegas", "expected a nonempty array");
        for (size_t i = 0; i < om.size(); ++i) {
            double w = cfg::number(om[i], "omegas[" + std::to_string(i) + "]", path);
            if (w <= 0.0)
                throw ConfigParseError(path, "omegas[" + std::to_string(i) + "]",
                                       "must be positive");
            p.omegas.push_back(w);
        }
        const Json& gs = cfg::require(j, "gs", path);
        if (!gs.is_array() || gs.size() != om.size())
            throw ConfigParseError(path, "gs", "expected one vector per omega");
        for (size_t i = 0; i < gs.size(); ++i) {
            const std::string field = "gs[" + std::to_string(i) + "]";
            Vector g = cfg::cvector(gs[i], field, path);
            cfg::check_dim(dim, g.size(), field, path);
            p.gs.push_back(std::move(g));
        }
        auto ext = pauli_fierz_dipole(p.omegas, p.T, p.gs);
        out.model = std::move(ext.model);
        out.energy_offset = ext.energy_offset;
        out.pauli_fierz = std::move(p);
        return out;
    }

    if (out.kind == "ti_fiber") {
        cfg::reject_unknown(j, {"model_id", "kind", "dim", "T", "gs", "P"}, path);
        FiberParams p{T_of("T"), {}, {}};
        const Json& gs = cfg::require(j, "gs", path);
        if (!gs.is_array() || gs.empty())
            throw ConfigParseError(path, "gs", "expected a nonempty array");
        for (size_t i = 0; i < gs.size(); ++i) {
            const std::string field = "gs[" + std::to_string(i) + "]";
            Vector g = cfg::cvector(gs[i], field, path);
            cfg::check_dim(dim, g.size(), field, path);
            p.gs.push_back(std::move(g));
        }
        const Json& P = cfg::require(j, "P", path);
        if (!P.is_array() || P.size() != gs.size())
            throw ConfigParseError(path, "P", "expected one component per coupling");
        for (size_t i = 0; i < P.size(); ++i)
            p.P.push_back(cfg::number(P[i], "P[" + std::to_string(i) + "]", path));

        std::vector<Coupling> cs;
        for (const auto& g : p.gs) cs.push_back({1.0, g});
        out.model = PairModel::make(p.T, std::move(cs));
        out.fiber = std::move(p);
        return out;
    }

    throw ConfigParseError(path, "kind",
                           "unknown kind '" + out.kind +
                               "', expected pair, single_pair, oscillator_field, "
                               "pauli_fierz_dipole, or ti_fiber");
}

inline LoadedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError(path, "(file)", "cannot open");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigParseError(path, "(json)", e.what());
    }
    return parse_model(j, path);
}

} // namespace bogodiag
