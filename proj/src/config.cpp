#include "couette/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "couette/experiments.hpp"

namespace couette {

namespace pt = boost::property_tree;

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string_view initial_kind_name(InitialKind k) {
    switch (k) {
    case InitialKind::SingleMode: return "single-mode";
    case InitialKind::RandomBand: return "random-band";
    case InitialKind::Gaussian00: return "gaussian-00";
    case InitialKind::GradientField: return "gradient-field";
    case InitialKind::CustomList: return "custom-list";
    }
    return "random-band";
}

InitialKind parse_initial_kind(std::string_view s) {
    for (auto k : {InitialKind::SingleMode, InitialKind::RandomBand, InitialKind::Gaussian00,
                   InitialKind::GradientField, InitialKind::CustomList})
        if (initial_kind_name(k) == s) return k;
    throw std::invalid_argument("unknown initial data kind: " + std::string(s));
}

namespace {

std::string trim(std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) return d;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("key '" + key + "': not a number: '" + v + "'");
}

long to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d)) throw std::invalid_argument("key '" + key + "': not an integer: '" + v + "'");
    return static_cast<long>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (auto& x : split(v, ',')) out.push_back(to_double(key, x));
    if (out.empty()) throw std::invalid_argument("key '" + key + "': empty list");
    return out;
}

std::vector<CustomEntry> to_entries(const std::string& v) {
    std::vector<CustomEntry> out;
    for (auto& e : split(v, ';')) {
        std::vector<double> x;
        std::stringstream ss(e);
        std::string tok;
        while (ss >> tok) x.push_back(to_double("entries", tok));
        if (x.size() != 11) throw std::invalid_argument("entries: each entry needs 11 numbers");
        CustomEntry c;
        c.k = static_cast<int>(x[0]);
        c.eta = x[1];
        c.l = static_cast<int>(x[2]);
        c.state.b_hat = {x[3], x[4]};
        for (int j = 0; j < 3; ++j) c.state.u_hat[j] = {x[5 + 2 * j], x[6 + 2 * j]};
        out.push_back(c);
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const ExperimentConfig& base) {
    pt::ptree tree;
    std::istringstream is(text);
    pt::read_ini(is, tree);
    ExperimentConfig c = base;
    std::optional<MultiplierParams> mp_over;
    std::map<std::string, std::string> mp_keys;

    for (const auto& [key, node] : tree) {
        const std::string val = trim(node.data());
        if (node.empty()) {
            if (key == "preset") c.preset = val;
            else if (key == "tol") c.tol = to_double(key, val);
            else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, val));
            else if (key == "output_dir") c.output_dir = val;
            else if (key == "base") c.base = val;
            else if (key == "mu_list") c.mu_list = to_list(key, val);
            else if (key == "samples") c.samples = static_cast<std::size_t>(to_int(key, val));
            else if (key == "threads") c.threads = static_cast<unsigned>(to_int(key, val));
            else if (key == "trajectory") {
                if (val != "full" && val != "nonzero" && val != "none")
                    throw std::invalid_argument("trajectory must be full, nonzero or none");
                c.trajectory = val;
            } else throw std::invalid_argument("unknown key '" + key + "'");
            continue;
        }
        for (const auto& [k2, n2] : node) {
            const std::string v = trim(n2.data());
            const std::string full = key + "." + k2;
            if (key == "phys") {
                if (k2 == "mu") c.phys.mu = to_double(full, v);
                else if (k2 == "lambda") c.phys.lambda = to_double(full, v);
                else if (k2 == "eps") c.phys.eps = to_double(full, v);
                else throw std::invalid_argument("unknown key '" + full + "'");
            } else if (key == "multipliers") {
                if (k2 != "N" && k2 != "c" && k2 != "c0" && k2 != "s")
                    throw std::invalid_argument("unknown key '" + full + "'");
                mp_keys[k2] = v;
            } else if (key == "grid") {
                if (k2 == "k_max") c.grid.k_max = static_cast<int>(to_int(full, v));
                else if (k2 == "l_max") c.grid.l_max = static_cast<int>(to_int(full, v));
                else if (k2 == "eta_max") c.grid.eta_max = to_double(full, v);
                else if (k2 == "delta_eta") c.grid.delta_eta = to_double(full, v);
                else throw std::invalid_argument("unknown key '" + full + "'");
            } else if (key == "time") {
                if (k2 == "T") {
                    if (v == "default") c.time.T.reset();
                    else c.time.T = to_double(full, v);
                } else if (k2 == "n_outputs") c.time.n_outputs = static_cast<std::size_t>(to_int(full, v));
                else if (k2 == "spacing") {
                    if (v == "log") c.time.spacing = Spacing::Log;
                    else if (v == "linear") c.time.spacing = Spacing::Linear;
                    else throw std::invalid_argument("time.spacing must be log or linear");
                } else throw std::invalid_argument("unknown key '" + full + "'");
            } else if (key == "initial") {
                auto& d = c.initial;
                if (k2 == "kind") d.kind = parse_initial_kind(v);
                else if (k2 == "amplitude") d.amplitude = to_double(full, v);
                else if (k2 == "mode_k") d.mode_k = static_cast<int>(to_int(full, v));
                else if (k2 == "mode_eta") d.mode_eta = to_double(full, v);
                else if (k2 == "mode_l") d.mode_l = static_cast<int>(to_int(full, v));
                else if (k2 == "band_eta") d.band_eta = to_double(full, v);
                else if (k2 == "modes") {
                    if (v != "nonzero" && v != "zero" && v != "all")
                        throw std::invalid_argument("initial.modes must be nonzero, zero or all");
                    d.modes = v;
                } else if (k2 == "sigma") d.sigma = to_double(full, v);
                else if (k2 == "fields") {
                    d.fields = split(v, ',');
                    for (auto& f : d.fields)
                        if (f != "b" && f != "u1" && f != "u2" && f != "u3")
                            throw std::invalid_argument("initial.fields entries must be b,u1,u2,u3");
                } else if (k2 == "conjugate_symmetric") d.conjugate_symmetric = to_bool(full, v);
                else if (k2 == "entries") d.entries = to_entries(v);
                else throw std::invalid_argument("unknown key '" + full + "'");
            } else {
                throw std::invalid_argument("unknown section '[" + key + "]'");
            }
        }
    }
    if (!mp_keys.empty()) {
        MultiplierParams mp = c.mp ? *c.mp : default_multiplier_params(c.phys);
        for (auto& [k, v] : mp_keys) {
            const double x = to_double("multipliers." + k, v);
            if (k == "N") mp.N = x;
            else if (k == "c") mp.c = x;
            else if (k == "c0") mp.c0 = x;
            else mp.s = x;
        }
        c.mp = mp;
    }
    if (!(c.tol >= 1e-13 && c.tol <= 1e-4)) throw std::invalid_argument("tol must lie in [1e-13, 1e-4]");
    if (c.time.n_outputs < 2) throw std::invalid_argument("time.n_outputs must be >= 2");
    if (c.time.T && !(*c.time.T > 0.0)) throw std::invalid_argument("time.T must be positive");
    eta_count(c.grid);
    if (c.mp) {
        auto rep = validate_multiplier_params(*c.mp);
        if (!rep.accepted) throw std::invalid_argument("multiplier parameters: " + rep.violations.front());
    }
    return c;
}

ExperimentConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream is(text);
    pt::read_ini(is, tree);
    const std::string name = trim(tree.get<std::string>("preset", "enhanced-dissipation"));
    return parse_config(text, preset_config(name));
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream os;
    auto list = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt_double(v[i]);
        return s;
    };
    os << "preset = " << c.preset << "\n"
       << "tol = " << fmt_double(c.tol) << "\n"
       << "seed = " << c.seed << "\n"
       << "output_dir = " << c.output_dir << "\n"
       << "base = " << c.base << "\n"
       << "mu_list = " << list(c.mu_list) << "\n"
       << "samples = " << c.samples << "\n"
       << "threads = " << c.threads << "\n"
       << "trajectory = " << c.trajectory << "\n\n";
    os << "[phys]\nmu = " << fmt_double(c.phys.mu) << "\nlambda = " << fmt_double(c.phys.lambda)
       << "\neps = " << fmt_double(c.phys.eps) << "\n\n";
    if (c.mp)
        os << "[multipliers]\nN = " << fmt_double(c.mp->N) << "\nc = " << fmt_double(c.mp->c)
           << "\nc0 = " << fmt_double(c.mp->c0) << "\ns = " << fmt_double(c.mp->s) << "\n\n";
    os << "[grid]\nk_max = " << c.grid.k_max << "\nl_max = " << c.grid.l_max
       << "\neta_max = " << fmt_double(c.grid.eta_max) << "\ndelta_eta = " << fmt_double(c.grid.delta_eta)
       << "\n\n";
    os << "[time]\nT = " << (c.time.T ? fmt_double(*c.time.T) : std::string("default"))
       << "\nn_outputs = " << c.time.n_outputs
       << "\nspacing = " << (c.time.spacing == Spacing::Log ? "log" : "linear") << "\n\n";
    const auto& d = c.initial;
    os << "[initial]\nkind = " << initial_kind_name(d.kind) << "\namplitude = " << fmt_double(d.amplitude)
       << "\nmode_k = " << d.mode_k << "\nmode_eta = " << fmt_double(d.mode_eta) << "\nmode_l = " << d.mode_l
       << "\nband_eta = " << fmt_double(d.band_eta) << "\nmodes = " << d.modes
       << "\nsigma = " << fmt_double(d.sigma) << "\nfields = ";
    for (std::size_t i = 0; i < d.fields.size(); ++i) os << (i ? "," : "") << d.fields[i];
    os << "\nconjugate_symmetric = " << (d.conjugate_symmetric ? "true" : "false") << "\n";
    if (!d.entries.empty()) {
        os << "entries = ";
        for (std::size_t i = 0; i < d.entries.size(); ++i) {
            const auto& e = d.entries[i];
            os << (i ? "; " : "") << e.k << " " << fmt_double(e.eta) << " " << e.l << " "
               << fmt_double(e.state.b_hat.real()) << " " << fmt_double(e.state.b_hat.imag());
            for (int j = 0; j < 3; ++j)
                os << " " << fmt_double(e.state.u_hat[j].real()) << " " << fmt_double(e.state.u_hat[j].imag());
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace couette
