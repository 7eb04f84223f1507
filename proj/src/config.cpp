// config.cpp: schema checks report the JSON path of the offending field.

#include "tqme/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace tqme::config {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path + "." + key; }
std::string index(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        if (!keys.count(item.key())) throw ConfigError(join(path, item.key()), "unknown field");
    }
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
    return v;
}

double required_number(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) throw ConfigError(join(path, key), "missing required field");
    return number(obj.at(key), join(path, key));
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    return number(obj.at(key), join(path, key));
}

double positive(double v, const std::string& path) {
    if (!(v > 0.0)) throw ConfigError(path, "must be positive");
    return v;
}

double nonnegative(double v, const std::string& path) {
    if (!(v >= 0.0)) throw ConfigError(path, "must be nonnegative");
    return v;
}

bool boolean(const json& obj, const char* key, const std::string& path, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) throw ConfigError(join(path, key), "expected true or false");
    return obj.at(key).get<bool>();
}

// Exactly one of the listed keys must be present.
std::string single_choice(const json& obj, const std::string& path,
                          std::initializer_list<const char*> choices) {
    std::string found;
    for (const char* c : choices) {
        if (obj.contains(c)) {
            if (!found.empty()) throw ConfigError(path, "exactly one of the alternatives must be given");
            found = c;
        }
    }
    if (found.empty()) {
        std::string names;
        for (const char* c : choices) names += (names.empty() ? "" : ", ") + std::string(c);
        throw ConfigError(path, "expected one of: " + names);
    }
    return found;
}

Matrix hermitian_matrix(const json& j, const std::string& path) {
    Matrix m = parse_complex_matrix(j, path);
    if (m.rows() < 2) throw ConfigError(path, "dimension must be at least 2");
    const double err = hermiticity_error(m);
    if (err > kHermiticityTol) {
        std::ostringstream os;
        os << "matrix is not Hermitian (max deviation " << err << ")";
        throw ConfigError(path, os.str());
    }
    return m;
}

TwoLevelSystem parse_two_level(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"omega", "gamma0", "isotropic", "q3_multiplier"});
    TwoLevelSystem s;
    s.omega = positive(required_number(j, "omega", path), join(path, "omega"));
    s.gamma0 = nonnegative(required_number(j, "gamma0", path), join(path, "gamma0"));
    s.isotropic = boolean(j, "isotropic", path, false);
    if (auto v = optional_number(j, "q3_multiplier", path)) {
        s.q3_multiplier = nonnegative(*v, join(path, "q3_multiplier"));
    }
    return s;
}

GenericSystem parse_generic(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"hamiltonian", "channels"});
    GenericSystem s;
    if (!j.contains("hamiltonian")) throw ConfigError(join(path, "hamiltonian"), "missing required field");
    s.hamiltonian = hermitian_matrix(j.at("hamiltonian"), join(path, "hamiltonian"));
    const std::string cpath = join(path, "channels");
    if (j.contains("channels")) {
        const json& arr = j.at("channels");
        if (!arr.is_array()) throw ConfigError(cpath, "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = index(cpath, i);
            const json& c = arr[i];
            require_object(c, p);
            reject_unknown(c, p, {"Q", "friction_rate", "diffusion_rate", "use_bath_bracket", "bath_scale"});
            GenericChannel ch;
            if (!c.contains("Q")) throw ConfigError(join(p, "Q"), "missing required field");
            ch.Q = hermitian_matrix(c.at("Q"), join(p, "Q"));
            if (ch.Q.rows() != s.hamiltonian.rows()) {
                throw ConfigError(join(p, "Q"), "dimension differs from the Hamiltonian");
            }
            ch.use_bath_bracket = boolean(c, "use_bath_bracket", p, false);
            ch.friction_rate = optional_number(c, "friction_rate", p);
            ch.diffusion_rate = optional_number(c, "diffusion_rate", p);
            if (ch.friction_rate) nonnegative(*ch.friction_rate, join(p, "friction_rate"));
            if (ch.diffusion_rate) nonnegative(*ch.diffusion_rate, join(p, "diffusion_rate"));
            if (auto v = optional_number(c, "bath_scale", p)) ch.bath_scale = nonnegative(*v, join(p, "bath_scale"));
            if (ch.use_bath_bracket) {
                if (ch.friction_rate || ch.diffusion_rate) {
                    throw ConfigError(p, "explicit rates conflict with use_bath_bracket");
                }
            } else if (!ch.friction_rate || !ch.diffusion_rate) {
                throw ConfigError(p, "friction_rate and diffusion_rate are required without use_bath_bracket");
            }
            s.channels.push_back(std::move(ch));
        }
    }
    return s;
}

Environment parse_environment(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"infinite", "finite", "gamma0", "omega_ref"});
    Environment env;
    const std::string kind = single_choice(j, path, {"infinite", "finite"});
    const std::string kpath = join(path, kind);
    const json& b = j.at(kind);
    require_object(b, kpath);
    if (kind == "infinite") {
        reject_unknown(b, kpath, {"T_e"});
        env.bath = InfiniteBath{positive(required_number(b, "T_e", kpath), join(kpath, "T_e"))};
    } else {
        reject_unknown(b, kpath, {"C_e", "H_e0", "H_ref"});
        FiniteBath f;
        f.C_e = positive(required_number(b, "C_e", kpath), join(kpath, "C_e"));
        f.H_e0 = positive(required_number(b, "H_e0", kpath), join(kpath, "H_e0"));
        f.H_ref = positive(optional_number(b, "H_ref", kpath).value_or(1.0), join(kpath, "H_ref"));
        env.bath = f;
    }
    if (auto v = optional_number(j, "gamma0", path)) env.gamma0 = nonnegative(*v, join(path, "gamma0"));
    if (auto v = optional_number(j, "omega_ref", path)) env.omega_ref = positive(*v, join(path, "omega_ref"));
    return env;
}

IntegratorConfig parse_integrator(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"dt", "t_end", "method", "monitor_every", "tolerances"});
    IntegratorConfig cfg;
    cfg.dt = positive(required_number(j, "dt", path), join(path, "dt"));
    cfg.t_end = positive(required_number(j, "t_end", path), join(path, "t_end"));
    if (!(cfg.dt < cfg.t_end)) throw ConfigError(join(path, "dt"), "must be smaller than t_end");
    if (j.contains("method")) {
        const json& m = j.at("method");
        if (m == "rk4") cfg.method = Method::rk4;
        else if (m == "euler") cfg.method = Method::euler;
        else throw ConfigError(join(path, "method"), "expected \"rk4\" or \"euler\"");
    }
    if (j.contains("monitor_every")) {
        const json& m = j.at("monitor_every");
        if (!m.is_number_integer() || m.get<long long>() < 1) {
            throw ConfigError(join(path, "monitor_every"), "expected a positive integer");
        }
        cfg.monitor_every = m.get<int>();
    }
    if (j.contains("tolerances")) {
        const std::string tpath = join(path, "tolerances");
        const json& t = j.at("tolerances");
        require_object(t, tpath);
        reject_unknown(t, tpath, {"trace", "hermiticity", "positivity", "energy"});
        auto& tol = cfg.tolerances;
        if (auto v = optional_number(t, "trace", tpath)) tol.trace = positive(*v, join(tpath, "trace"));
        if (auto v = optional_number(t, "hermiticity", tpath)) tol.hermiticity = positive(*v, join(tpath, "hermiticity"));
        if (auto v = optional_number(t, "positivity", tpath)) tol.positivity = positive(*v, join(tpath, "positivity"));
        if (auto v = optional_number(t, "energy", tpath)) tol.energy = positive(*v, join(tpath, "energy"));
    }
    return cfg;
}

InitialState parse_initial(const json& j, const std::string& path, bool two_level, Eigen::Index dim) {
    if (j.is_string()) {
        if (j == "maximally_mixed") return MaximallyMixedInitial{};
        throw ConfigError(path, "unknown initial state \"" + j.get<std::string>() + "\"");
    }
    require_object(j, path);
    reject_unknown(j, path, {"bloch", "matrix", "equilibrium"});
    const std::string kind = single_choice(j, path, {"bloch", "matrix", "equilibrium"});
    const std::string kpath = join(path, kind);
    if (kind == "bloch") {
        if (!two_level) throw ConfigError(kpath, "Bloch vectors need a two_level system");
        const json& v = j.at(kind);
        if (!v.is_array() || v.size() != 3) throw ConfigError(kpath, "expected [m1, m2, m3]");
        BlochInitial b;
        for (int k = 0; k < 3; ++k) b.m(k) = number(v[k], index(kpath, k));
        if (b.m.norm() > 1.0) throw ConfigError(kpath, "|m| exceeds 1");
        return b;
    }
    if (kind == "matrix") {
        MatrixInitial mi{hermitian_matrix(j.at(kind), kpath)};
        if (mi.rho.rows() != dim) throw ConfigError(kpath, "dimension differs from the system");
        try {
            DensityMatrix check(mi.rho);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(kpath, e.what());
        }
        return mi;
    }
    const json& e = j.at(kind);
    require_object(e, kpath);
    reject_unknown(e, kpath, {"T"});
    return EquilibriumInitial{positive(required_number(e, "T", kpath), join(kpath, "T"))};
}

}  // namespace

Matrix parse_complex_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of rows");
    const std::size_t n = j.size();
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const std::string rpath = index(path, r);
        const json& row = j[r];
        if (!row.is_array() || row.size() != n) {
            throw ConfigError(rpath, "expected a row of " + std::to_string(n) + " entries (square matrix)");
        }
        for (std::size_t c = 0; c < n; ++c) {
            const std::string epath = index(rpath, c);
            const json& e = row[c];
            if (!e.is_array() || e.size() != 2) throw ConfigError(epath, "expected [re, im]");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                Complex(number(e[0], index(epath, 0)), number(e[1], index(epath, 1)));
        }
    }
    return m;
}

json complex_matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

const char* to_string(Variant v) { return v == Variant::nonlinear ? "nonlinear" : "linearized"; }
const char* to_string(Method m) { return m == Method::rk4 ? "rk4" : "euler"; }

SimulationConfig parse_config(const json& doc) {
    const std::string root = "$";
    require_object(doc, root);
    reject_unknown(doc, root,
                   {"system", "environment", "constants", "integrator", "variant", "initial_state", "output"});
    SimulationConfig cfg;

    if (!doc.contains("system")) throw ConfigError("$.system", "missing required field");
    const json& sys = doc.at("system");
    require_object(sys, "$.system");
    reject_unknown(sys, "$.system", {"two_level", "generic"});
    const std::string kind = single_choice(sys, "$.system", {"two_level", "generic"});
    if (kind == "two_level") cfg.system = parse_two_level(sys.at(kind), "$.system.two_level");
    else cfg.system = parse_generic(sys.at(kind), "$.system.generic");

    if (!doc.contains("environment")) throw ConfigError("$.environment", "missing required field");
    cfg.environment = parse_environment(doc.at("environment"), "$.environment");
    if (cfg.is_two_level()) {
        if (cfg.environment.gamma0 || cfg.environment.omega_ref) {
            throw ConfigError("$.environment", "gamma0 and omega_ref come from system.two_level");
        }
    } else {
        const auto& gen = std::get<GenericSystem>(cfg.system);
        for (const auto& ch : gen.channels) {
            if (ch.use_bath_bracket && (!cfg.environment.gamma0 || !cfg.environment.omega_ref)) {
                throw ConfigError("$.environment", "gamma0 and omega_ref are required by bath-bracket channels");
            }
        }
    }

    if (doc.contains("constants")) {
        const json& c = doc.at("constants");
        require_object(c, "$.constants");
        reject_unknown(c, "$.constants", {"hbar", "kB"});
        if (auto v = optional_number(c, "hbar", "$.constants")) cfg.constants.hbar = positive(*v, "$.constants.hbar");
        if (auto v = optional_number(c, "kB", "$.constants")) cfg.constants.kB = positive(*v, "$.constants.kB");
    }

    if (!doc.contains("integrator")) throw ConfigError("$.integrator", "missing required field");
    cfg.integrator = parse_integrator(doc.at("integrator"), "$.integrator");

    if (doc.contains("variant")) {
        const json& v = doc.at("variant");
        if (v == "nonlinear") cfg.integrator.variant = Variant::nonlinear;
        else if (v == "linearized") cfg.integrator.variant = Variant::linearized;
        else throw ConfigError("$.variant", "expected \"nonlinear\" or \"linearized\"");
    }

    const Eigen::Index dim =
        cfg.is_two_level() ? 2 : std::get<GenericSystem>(cfg.system).hamiltonian.rows();
    if (doc.contains("initial_state")) {
        cfg.initial = parse_initial(doc.at("initial_state"), "$.initial_state", cfg.is_two_level(), dim);
    }

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        require_object(o, "$.output");
        reject_unknown(o, "$.output", {"path", "stride"});
        if (o.contains("path")) {
            if (!o.at("path").is_string()) throw ConfigError("$.output.path", "expected a string");
            cfg.output.path = o.at("path").get<std::string>();
        }
        if (o.contains("stride")) {
            const json& s = o.at("stride");
            if (!s.is_number_integer() || s.get<long long>() < 1) {
                throw ConfigError("$.output.stride", "expected a positive integer");
            }
            cfg.output.stride = s.get<int>();
        }
    }
    return cfg;
}

SimulationConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("$", "cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

json to_json(const SimulationConfig& cfg) {
    json doc;
    if (const auto* tl = std::get_if<TwoLevelSystem>(&cfg.system)) {
        doc["system"]["two_level"] = {{"omega", tl->omega},
                                      {"gamma0", tl->gamma0},
                                      {"isotropic", tl->isotropic},
                                      {"q3_multiplier", tl->q3_multiplier}};
    } else {
        const auto& g = std::get<GenericSystem>(cfg.system);
        json channels = json::array();
        for (const auto& ch : g.channels) {
            json c{{"Q", complex_matrix_to_json(ch.Q)}, {"use_bath_bracket", ch.use_bath_bracket},
                   {"bath_scale", ch.bath_scale}};
            if (ch.friction_rate) c["friction_rate"] = *ch.friction_rate;
            if (ch.diffusion_rate) c["diffusion_rate"] = *ch.diffusion_rate;
            channels.push_back(c);
        }
        doc["system"]["generic"] = {{"hamiltonian", complex_matrix_to_json(g.hamiltonian)},
                                    {"channels", channels}};
    }

    json env;
    if (const auto* inf = std::get_if<InfiniteBath>(&cfg.environment.bath)) {
        env["infinite"] = {{"T_e", inf->T_e}};
    } else {
        const auto& f = std::get<FiniteBath>(cfg.environment.bath);
        env["finite"] = {{"C_e", f.C_e}, {"H_e0", f.H_e0}, {"H_ref", f.H_ref}};
    }
    if (cfg.environment.gamma0) env["gamma0"] = *cfg.environment.gamma0;
    if (cfg.environment.omega_ref) env["omega_ref"] = *cfg.environment.omega_ref;
    doc["environment"] = env;

    doc["constants"] = {{"hbar", cfg.constants.hbar}, {"kB", cfg.constants.kB}};
    const auto& ic = cfg.integrator;
    doc["integrator"] = {{"dt", ic.dt},
                         {"t_end", ic.t_end},
                         {"method", to_string(ic.method)},
                         {"monitor_every", ic.monitor_every},
                         {"tolerances",
                          {{"trace", ic.tolerances.trace},
                           {"hermiticity", ic.tolerances.hermiticity},
                           {"positivity", ic.tolerances.positivity},
                           {"energy", ic.tolerances.energy}}}};
    doc["variant"] = to_string(ic.variant);

    std::visit(
        [&](const auto& init) {
            using T = std::decay_t<decltype(init)>;
            if constexpr (std::is_same_v<T, MaximallyMixedInitial>) {
                doc["initial_state"] = "maximally_mixed";
            } else if constexpr (std::is_same_v<T, BlochInitial>) {
                doc["initial_state"] = {{"bloch", {init.m(0), init.m(1), init.m(2)}}};
            } else if constexpr (std::is_same_v<T, MatrixInitial>) {
                doc["initial_state"] = {{"matrix", complex_matrix_to_json(init.rho)}};
            } else {
                doc["initial_state"] = {{"equilibrium", {{"T", init.T}}}};
            }
        },
        cfg.initial);

    doc["output"] = {{"path", cfg.output.path}, {"stride", cfg.output.stride}};
    return doc;
}

}  // namespace tqme::config
