#include "couette/experiments.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "couette/multipliers.hpp"
#include "couette/rng.hpp"

namespace couette {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void write_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string mu_tag(double mu) {
    std::string s = fmt_double(mu);
    std::replace(s.begin(), s.end(), '.', 'p');
    return "mu_" + s;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

json to_json(const AuditReport& r) {
    json j;
    j["claim"] = r.claim;
    j["series"] = r.series;
    j["fitted"] = r.fitted;
    j["required"] = r.required;
    j["r2"] = r.r2;
    j["window"] = {r.window.first, r.window.second};
    j["n_points"] = r.n_points;
    j["pass"] = r.pass;
    j["inconclusive"] = r.inconclusive;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

// ---------------------------------------------------------------- presets

const std::vector<PresetInfo>& presets() {
    static const std::vector<PresetInfo> list = {
        {"enhanced-dissipation", {"T1.1-b", "T1.1-u1", "T1.1-u2", "T1.1-u3", "P4.1"},
         "non-zero x-modes from band-limited random data; decay rates of b, u and the weighted functional"},
        {"second-derivative-dissipation", {"T1.2", "P4.1"},
         "non-zero x-modes; mu-weighted second-derivative quantity"},
        {"zero-decay", {"L3.2", "L3.3-k0", "L3.3-k1", "L3.3-u3"},
         "zero x-modes: exponential decay for l != 0 and heat-type decay of the 00 part"},
        {"lift-up", {}, "growth of u1_0 fed by Gaussian u2_00 data; bound audit and Duhamel cross-check"},
        {"oracle", {}, "consistency of the derived good-unknown systems with the primitive system"},
        {"multiplier-audit", {}, "pointwise multiplier inequalities on random samples"},
        {"mu-sweep", {}, "wraps another preset over a list of viscosities and fits the rate scaling"},
    };
    return list;
}

ExperimentConfig preset_config(const std::string& name) {
    ExperimentConfig c;
    c.preset = name;
    c.output_dir = name;
    if (name == "enhanced-dissipation" || name == "second-derivative-dissipation") {
        c.initial.kind = InitialKind::RandomBand;
        c.initial.band_eta = 1.0;
        c.initial.modes = "nonzero";
    } else if (name == "zero-decay") {
        c.phys = {1e-2, 0.0, 1.0};
        c.grid = {0, 0, 8.0, 0.05};
        c.initial.kind = InitialKind::Gaussian00;
        c.initial.sigma = 0.75;
        c.initial.fields = {"b", "u2", "u3"};
    } else if (name == "lift-up") {
        c.grid = {0, 0, 8.0, 0.05};
        c.initial.kind = InitialKind::Gaussian00;
        c.initial.sigma = 1.0;
        c.initial.fields = {"u2"};
    } else if (name == "oracle") {
        c.samples = 100;
        c.trajectory = "none";
    } else if (name == "multiplier-audit") {
        c.samples = 100000;
        c.trajectory = "none";
    } else if (name == "mu-sweep") {
        c.base = "enhanced-dissipation";
    } else {
        std::string all;
        for (auto& p : presets()) all += " " + p.name;
        throw std::invalid_argument("unknown preset '" + name + "'; available:" + all);
    }
    return c;
}

double default_T(const std::string& preset, const PhysicalParams& phys, const ModeGrid& grid) {
    const double m13 = std::cbrt(phys.mu);
    if (preset == "zero-decay") return 0.1 / (phys.mu * grid.delta_eta * grid.delta_eta);
    if (preset == "lift-up") return 0.2 / phys.mu;
    if (preset == "oracle") return 2.0 / m13;
    return 4.0 / m13;
}

// ---------------------------------------------------------------- initial data

PrimitiveState random_state(std::uint64_t seed, std::uint64_t index, double amplitude) {
    CounterRng rng(substream(seed, index));
    PrimitiveState s;
    const double a = amplitude / std::sqrt(2.0);
    s.b_hat = {a * rng.normal(), a * rng.normal()};
    for (auto& u : s.u_hat) u = {a * rng.normal(), a * rng.normal()};
    return s;
}

double gaussian00_hat(double eta, double sigma, double amplitude) {
    return amplitude * sigma / std::sqrt(kTwoPi) * std::exp(-0.5 * sigma * sigma * eta * eta);
}
double gaussian00_l2_exact(double sigma, double amplitude) {
    return kTwoPi * amplitude * std::sqrt(sigma) * std::pow(std::numbers::pi, 0.25);
}
double gaussian00_l1_exact(double sigma, double amplitude) {
    return kTwoPi * kTwoPi * amplitude * sigma * std::sqrt(kTwoPi);
}

namespace {

cplx component(const PrimitiveState& s, int c) { return c == 0 ? s.b_hat : s.u_hat[c - 1]; }

PrimitiveState conj_state(const PrimitiveState& s) {
    return {std::conj(s.b_hat), {std::conj(s.u_hat[0]), std::conj(s.u_hat[1]), std::conj(s.u_hat[2])}};
}

std::size_t find_mode(const std::vector<Mode>& modes, int k, double eta, int l, double tol) {
    std::size_t best = modes.size();
    double bd = tol;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i].k != k || modes[i].l != l) continue;
        const double d = std::abs(modes[i].eta - eta);
        if (d <= bd) {
            bd = d;
            best = i;
        }
    }
    if (best == modes.size()) throw std::invalid_argument("requested mode is not on the grid");
    return best;
}

}  // namespace

FieldEnsemble make_initial_data(const ExperimentConfig& cfg) {
    FieldEnsemble e{cfg.grid, build_grid(cfg.grid), {}};
    const std::size_t n = e.modes.size();
    e.states.assign(n, PrimitiveState{});
    const auto& d = cfg.initial;
    if (!std::isfinite(d.amplitude)) throw std::invalid_argument("amplitude must be finite");
    auto selected = [&](const Mode& m) {
        if (d.modes == "nonzero" && m.k == 0) return false;
        if (d.modes == "zero" && m.k != 0) return false;
        return std::abs(m.eta) <= d.band_eta + 1e-12;
    };
    auto fill_symmetric = [&](auto&& make) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!selected(e.modes[i])) continue;
            const std::size_t j = n - 1 - i;  // (-k,-eta,-l)
            if (!d.conjugate_symmetric) {
                e.states[i] = make(i);
            } else if (i < j) {
                e.states[i] = make(i);
                e.states[j] = conj_state(e.states[i]);
            } else if (i == j) {
                auto s = make(i);
                e.states[i] = {s.b_hat.real(), {s.u_hat[0].real(), s.u_hat[1].real(), s.u_hat[2].real()}};
            }
        }
    };
    switch (d.kind) {
    case InitialKind::RandomBand:
        fill_symmetric([&](std::size_t i) { return random_state(cfg.seed, i, d.amplitude); });
        break;
    case InitialKind::GradientField:
        fill_symmetric([&](std::size_t i) {
            CounterRng rng(substream(cfg.seed, i));
            const cplx s(d.amplitude * rng.normal(), d.amplitude * rng.normal());
            const auto sv = symbol_values(0.0, e.modes[i]);
            return PrimitiveState{0.0, {sv.iota[0] * s, sv.iota[1] * s, sv.iota[2] * s}};
        });
        break;
    case InitialKind::SingleMode: {
        const std::size_t i = find_mode(e.modes, d.mode_k, d.mode_eta, d.mode_l, cfg.grid.delta_eta);
        e.states[i] = random_state(cfg.seed, i, d.amplitude);
        if (d.conjugate_symmetric && n - 1 - i != i) e.states[n - 1 - i] = conj_state(e.states[i]);
        break;
    }
    case InitialKind::Gaussian00:
        for (std::size_t i = 0; i < n; ++i) {
            const auto& m = e.modes[i];
            if (m.k != 0 || m.l != 0) continue;
            const double v = gaussian00_hat(m.eta, d.sigma, d.amplitude);
            for (const auto& f : d.fields) {
                if (f == "b") e.states[i].b_hat = v;
                else e.states[i].u_hat[f[1] - '1'] = v;
            }
        }
        break;
    case InitialKind::CustomList:
        for (const auto& c : d.entries) {
            const std::size_t i = find_mode(e.modes, c.k, c.eta, c.l, 1e-9 * std::max(1.0, std::abs(c.eta)));
            e.states[i] = c.state;
        }
        break;
    }
    return e;
}

double physical_l2_00(const FieldEnsemble& ens, int comp) {
    std::vector<double> acc(ens.modes.size(), 0.0);
    for (std::size_t i = 0; i < ens.modes.size(); ++i) {
        const auto& m = ens.modes[i];
        if (m.k == 0 && m.l == 0) acc[i] = m.weight * std::norm(component(ens.states[i], comp));
    }
    return std::pow(kTwoPi, 1.5) * std::sqrt(pairwise_sum(acc));
}

double physical_l1_00(const FieldEnsemble& ens, const std::vector<int>& comps, const std::vector<double>& scale) {
    // the eta-sampled field is periodic in y with period 2 pi / delta_eta
    const double de = ens.grid.delta_eta;
    const double period = kTwoPi / de;
    const double dy = std::numbers::pi / (4.0 * std::max(ens.grid.eta_max, 1.0));
    const std::size_t ny = static_cast<std::size_t>(std::ceil(period / dy));
    const double h = period / double(ny);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ens.modes.size(); ++i)
        if (ens.modes[i].k == 0 && ens.modes[i].l == 0) idx.push_back(i);
    std::vector<double> vals(ny);
    for (std::size_t j = 0; j < ny; ++j) {
        const double y = -0.5 * period + h * double(j);
        double mag2 = 0.0;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            cplx f = 0.0;
            for (auto i : idx) {
                const auto& m = ens.modes[i];
                f += m.weight * component(ens.states[i], comps[c]) * std::polar(1.0, m.eta * y);
            }
            mag2 += std::norm(scale[c] * f);
        }
        vals[j] = std::sqrt(mag2) * h;
    }
    return kTwoPi * kTwoPi * pairwise_sum(vals);
}

// ---------------------------------------------------------------- output helpers

namespace {

struct Outputs {
    fs::path root;
    std::map<std::string, std::string> hashes;  // relative path -> sha256
    void put(const std::string& rel, const std::string& content) {
        write_file(root / rel, content);
        hashes[rel] = sha256_hex(content);
    }
};

std::string trajectory_csv(const EnsembleTrajectory& tr, const FieldEnsemble& init, const std::string& which) {
    std::vector<std::size_t> sel;
    for (std::size_t i = 0; i < init.modes.size(); ++i) {
        const auto& s = init.states[i];
        const bool nz = s.b_hat != 0.0 || s.u_hat[0] != 0.0 || s.u_hat[1] != 0.0 || s.u_hat[2] != 0.0;
        if (which == "full" || nz) sel.push_back(i);
    }
    std::string out = "t,k,eta,l,re_b,im_b,re_u1,im_u1,re_u2,im_u2,re_u3,im_u3\n";
    for (std::size_t n = 0; n < tr.times.size(); ++n) {
        const std::string tt = fmt_double(tr.times[n]);
        for (auto i : sel) {
            const auto& m = tr.modes[i];
            const auto& s = tr.per_mode[i][n];
            out += tt + "," + std::to_string(m.k) + "," + fmt_double(m.eta) + "," + std::to_string(m.l);
            out += "," + fmt_double(s.b_hat.real()) + "," + fmt_double(s.b_hat.imag());
            for (const auto& u : s.u_hat) out += "," + fmt_double(u.real()) + "," + fmt_double(u.imag());
            out += "\n";
        }
    }
    return out;
}

std::vector<std::string> energy_columns() {
    std::vector<std::string> cols = {"E1", "calE1", "E2", "calE2", "combined", "combined_E"};
    for (auto& n : theorem_norm_names()) cols.push_back(n);
    return cols;
}

std::map<std::string, Series> parse_energy_csv(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    std::vector<std::string> head;
    {
        std::stringstream hs(line);
        std::string h;
        while (std::getline(hs, h, ',')) head.push_back(h);
    }
    std::map<std::string, Series> out;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        for (std::size_t c = 1; c < head.size() && c < row.size(); ++c) out[head[c]].emplace_back(row[0], row[c]);
    }
    return out;
}

struct LyapunovSummary {
    double max_increment = 0.0;
    double min_ratio1 = 0.0, max_ratio1 = 0.0, min_ratio2 = 0.0, max_ratio2 = 0.0;
    bool equivalence = true;
};

LyapunovSummary lyapunov_summary(const std::vector<EnergyReport>& reps, const PhysicalParams& phys) {
    LyapunovSummary s;
    Series comb;
    s.min_ratio1 = s.min_ratio2 = std::numeric_limits<double>::infinity();
    s.max_ratio1 = s.max_ratio2 = -std::numeric_limits<double>::infinity();
    for (const auto& r : reps) {
        comb.emplace_back(r.t, r.combined);
        if (r.E1 > 0.0) {
            s.min_ratio1 = std::min(s.min_ratio1, r.calE1 / r.E1);
            s.max_ratio1 = std::max(s.max_ratio1, r.calE1 / r.E1);
        }
        if (r.E2 > 0.0) {
            s.min_ratio2 = std::min(s.min_ratio2, r.calE2 / r.E2);
            s.max_ratio2 = std::max(s.max_ratio2, r.calE2 / r.E2);
        }
        const bool ok1 = r.calE1 >= 0.625 * r.E1 && r.calE1 <= 1.375 * r.E1;
        const bool ok2 = r.calE2 >= 0.625 * r.E2 && r.calE2 <= 1.375 * r.E2;
        s.equivalence = s.equivalence && ok1 && ok2;
    }
    s.max_increment = monotonicity_audit(comb, std::cbrt(phys.mu) / 44.0);
    return s;
}

ValidationReport validate_or_throw(const PhysicalParams& p, Regime r) {
    auto rep = validate_params(p, r);
    if (!rep.accepted) {
        std::string msg = "parameters rejected for regime " + std::string(regime_name(r)) + ":";
        for (auto& v : rep.violations) msg += " [" + v + "]";
        throw std::invalid_argument(msg);
    }
    return rep;
}

struct DynamicsOut {
    SubRunResult res;
    std::vector<EnergyReport> reports;
    FieldEnsemble init;
    EnsembleTrajectory traj;
};

DynamicsOut dynamics_subrun(const ExperimentConfig& cfg, const std::string& name,
                            const std::vector<std::string>& claims, Outputs& out, json& times) {
    DynamicsOut d;
    d.res.name = name;
    const auto t0 = Clock::now();
    d.init = make_initial_data(cfg);
    const double T = cfg.time.T ? *cfg.time.T : default_T(cfg.preset, cfg.phys, cfg.grid);
    const auto tg = make_time_grid(0.0, T, cfg.time.n_outputs, cfg.time.spacing);
    d.traj = integrate_ensemble(d.init, tg, cfg.phys, cfg.tol, cfg.threads);
    times[name + ".integrate"] = seconds_since(t0);

    const auto t1 = Clock::now();
    const MultiplierParams mp = cfg.mp ? *cfg.mp : default_multiplier_params(cfg.phys);
    d.reports.resize(tg.output_times.size());
    parallel_for(tg.output_times.size(), cfg.threads, [&](std::size_t n) {
        d.reports[n] = energy_report(d.traj.snapshot(cfg.grid, n), tg.output_times[n], cfg.phys, mp);
    });
    times[name + ".functionals"] = seconds_since(t1);

    const auto cols = energy_columns();
    std::string csv = "t";
    for (auto& c : cols) csv += "," + c;
    csv += "\n";
    for (const auto& r : d.reports) {
        std::vector<double> v = {r.E1, r.calE1, r.E2, r.calE2, r.combined, r.combined_E};
        for (auto& nm : theorem_norm_names()) v.push_back(r.theorem_norms.at(nm));
        csv += fmt_double(r.t);
        for (double x : v) csv += "," + fmt_double(x);
        csv += "\n";
    }
    out.put(name + "/energy.csv", csv);
    if (cfg.trajectory != "none") out.put(name + "/trajectory.csv", trajectory_csv(d.traj, d.init, cfg.trajectory));
    d.res.series = parse_energy_csv(csv);

    for (const auto& c : claims) {
        auto a = theorem_rate_audit(d.res.series, c, cfg.phys, cfg.grid.delta_eta);
        d.res.pass = d.res.pass && a.pass;
        out.put(name + "/audits/" + c + ".json", to_json(a).dump(2) + "\n");
        d.res.audits.push_back(a);
    }
    d.res.extra["T"] = T;
    d.res.extra["delta_eta"] = cfg.grid.delta_eta;
    d.res.extra["claims"] = claims;
    return d;
}

void nonzero_lyapunov(DynamicsOut& d, const ExperimentConfig& cfg, Outputs& out) {
    const auto s = lyapunov_summary(d.reports, cfg.phys);
    json j;
    j["envelope_rate"] = std::cbrt(cfg.phys.mu) / 44.0;
    j["max_increment"] = s.max_increment;
    j["calE1_over_E1"] = {s.min_ratio1, s.max_ratio1};
    j["calE2_over_E2"] = {s.min_ratio2, s.max_ratio2};
    j["equivalence"] = s.equivalence;
    j["pass"] = s.max_increment <= 1e-6 && s.equivalence;
    d.res.pass = d.res.pass && j["pass"].get<bool>();
    d.res.extra["lyapunov"] = j;
    out.put(d.res.name + "/audits/lyapunov.json", j.dump(2) + "\n");
}

}  // namespace

// ---------------------------------------------------------------- duhamel

DuhamelCheck duhamel_crosscheck(const FieldEnsemble& ens, double T, double h, const PhysicalParams& phys,
                                double tol, unsigned threads) {
    std::size_t n = static_cast<std::size_t>(std::ceil(T / h));
    if (n % 2) ++n;
    TimeGrid tg{0.0, T, {}};
    for (std::size_t j = 0; j <= n; ++j) tg.output_times.push_back(T * double(j) / double(n));
    const std::size_t nm = ens.modes.size();
    std::vector<std::vector<double>> diff(nm), ref(nm);
    parallel_for(nm, threads, [&](std::size_t i) {
        const auto& m = ens.modes[i];
        if (m.k != 0) return;
        const auto tr = integrate_mode(m, ens.states[i], tg, phys, tol);
        std::vector<cplx> u2(tr.size());
        for (std::size_t j = 0; j < tr.size(); ++j) u2[j] = tr[j].u_hat[1];
        const auto u1 = duhamel_u1_zero(m, ens.states[i].u_hat[0], tg.output_times, u2, phys.mu);
        diff[i].resize(tr.size());
        ref[i].resize(tr.size());
        for (std::size_t j = 0; j < tr.size(); ++j) {
            diff[i][j] = m.weight * std::norm(u1[j] - tr[j].u_hat[0]);
            ref[i][j] = m.weight * std::norm(tr[j].u_hat[0]);
        }
    });
    DuhamelCheck c;
    for (std::size_t j = 1; j < tg.output_times.size(); ++j) {
        std::vector<double> dj, rj;
        for (std::size_t i = 0; i < nm; ++i)
            if (!diff[i].empty()) {
                dj.push_back(diff[i][j]);
                rj.push_back(ref[i][j]);
            }
        const double r = pairwise_sum(rj);
        if (r > 0.0) c.max_relative = std::max(c.max_relative, std::sqrt(pairwise_sum(dj) / r));
    }
    return c;
}

// ---------------------------------------------------------------- run

fs::path output_root() {
    if (const char* env = std::getenv("COUETTE_OUTPUT_ROOT"); env && *env) return fs::path(env);
    return fs::current_path();
}

namespace {

void run_dissipation(const ExperimentConfig& cfg, Outputs& out, RunResult& rr, json& times) {
    validate_or_throw(cfg.phys, Regime::NonzeroMode);
    const auto& info = *std::find_if(presets().begin(), presets().end(), [&](auto& p) { return p.name == cfg.preset; });
    auto d = dynamics_subrun(cfg, "main", info.claims, out, times);
    nonzero_lyapunov(d, cfg, out);
    rr.subruns.push_back(d.res);
}

void run_zero_decay(const ExperimentConfig& cfg, Outputs& out, RunResult& rr, json& times) {
    validate_or_throw(cfg.phys, Regime::ZeroMode);
    ExperimentConfig a = cfg;
    a.grid = {0, 1, 0.5, 0.5};
    a.initial = InitialDataSpec{};
    a.initial.kind = InitialKind::SingleMode;
    a.initial.mode_k = 0;
    a.initial.mode_eta = 0.5;
    a.initial.mode_l = 1;
    a.initial.conjugate_symmetric = false;
    a.time.T = 10.0 / cfg.phys.mu;
    rr.subruns.push_back(dynamics_subrun(a, "lemma32", {"L3.2"}, out, times).res);
    rr.subruns.push_back(dynamics_subrun(cfg, "heat00", {"L3.3-k0", "L3.3-k1", "L3.3-u3"}, out, times).res);
}

void run_liftup(const ExperimentConfig& cfg, Outputs& out, RunResult& rr, json& times) {
    validate_or_throw(cfg.phys, Regime::ZeroMode);
    auto d = dynamics_subrun(cfg, "main", {}, out, times);
    auto& res = d.res;
    const auto& u1 = res.series.at("u1_0");
    const auto& gu1 = res.series.at("grad_u1_0");

    json growth;
    const Window w{10.0, 0.1 / cfg.phys.mu};
    try {
        const auto f = fit_power_law(u1, w);
        growth = {{"fitted", f.rate_or_exponent}, {"required", 0.75}, {"tolerance", 0.1}, {"r2", f.r_squared},
                  {"window", {w.first, w.second}}, {"n_points", f.n_points},
                  {"pass", std::abs(f.rate_or_exponent - 0.75) <= 0.1}};
    } catch (const std::invalid_argument& e) {
        growth = {{"pass", false}, {"note", e.what()}};
    }
    out.put("main/audits/liftup_growth.json", growth.dump(2) + "\n");

    // bound audit in physical norms
    const double phys_scale = std::pow(kTwoPi, 1.5);
    Series u1p, gp;
    for (auto& [t, v] : u1) u1p.emplace_back(t, phys_scale * v);
    for (auto& [t, v] : gu1) gp.emplace_back(t, phys_scale * v);
    LiftupNorms in;
    in.u1_in = u1p.front().second;
    in.lnz_in = phys_scale * res.series.at("b0u0_lnz").front().second;
    const double l2 = phys_scale * res.series.at("b00u200").front().second;
    const double l1 = physical_l1_00(d.init, {0, 2}, {1.0 / cfg.phys.eps, 1.0});
    in.b00u2_l2l1 = l2 + l1;
    const auto la = liftup_bound_audit(u1p, gp, in, cfg.phys);
    std::string mcsv = "t,lhs_minus_rhs\n";
    for (auto& [t, v] : la.margin) mcsv += fmt_double(t) + "," + fmt_double(v) + "\n";
    out.put("main/liftup_margin.csv", mcsv);
    json bound = {{"C", std::isfinite(la.C) ? json(la.C) : json("inf")}, {"pass", la.pass},
                  {"u1_in", in.u1_in}, {"lnz_in", in.lnz_in}, {"b00u2_l2", l2}, {"b00u2_l1", l1}};
    out.put("main/audits/liftup_bound.json", bound.dump(2) + "\n");

    const double T = res.extra["T"].get<double>();
    const auto t0 = Clock::now();
    const auto dc = duhamel_crosscheck(d.init, T, 0.02, cfg.phys, cfg.tol, cfg.threads);
    times["main.duhamel"] = seconds_since(t0);
    json duh = {{"max_relative", dc.max_relative}, {"threshold", 1e-6}, {"pass", dc.max_relative <= 1e-6}};
    out.put("main/audits/duhamel.json", duh.dump(2) + "\n");

    res.extra["liftup_growth"] = growth;
    res.extra["liftup_bound"] = bound;
    res.extra["duhamel"] = duh;
    res.pass = growth["pass"].get<bool>() && la.pass && duh["pass"].get<bool>();
    rr.subruns.push_back(res);
}

void run_oracle(const ExperimentConfig& cfg, Outputs& out, RunResult& rr, json& times) {
    validate_or_throw(cfg.phys, Regime::NonzeroMode);
    const double T = cfg.time.T ? *cfg.time.T : default_T("oracle", cfg.phys, cfg.grid);
    const auto tg = make_time_grid(0.0, T, cfg.time.n_outputs, cfg.time.spacing);
    const std::size_t n = cfg.samples;
    std::vector<Mode> modes(n);
    std::vector<PrimitiveState> states(n);
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(substream(cfg.seed ^ 0x5eedULL, i));
        const int ks[4] = {-2, -1, 1, 2};
        modes[i].k = ks[rng.integer(0, 3)];
        modes[i].l = static_cast<int>(rng.integer(-cfg.grid.l_max, cfg.grid.l_max));
        modes[i].eta = rng.uniform(-cfg.grid.eta_max, cfg.grid.eta_max);
        states[i] = random_state(cfg.seed, i, cfg.initial.amplitude);
    }
    std::vector<ConsistencyResult> res(n);
    const auto t0 = Clock::now();
    parallel_for(n, cfg.threads, [&](std::size_t i) { res[i] = consistency_check_full(modes[i], states[i], tg, cfg.phys, cfg.tol); });
    times["oracle.consistency"] = seconds_since(t0);
    std::string csv = "mode,k,eta,l,residual,div_residual\n";
    std::vector<double> r;
    double dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        csv += std::to_string(i) + "," + std::to_string(modes[i].k) + "," + fmt_double(modes[i].eta) + "," +
               std::to_string(modes[i].l) + "," + fmt_double(res[i].residual) + "," + fmt_double(res[i].divergence) + "\n";
        r.push_back(res[i].residual);
        dmax = std::max(dmax, res[i].divergence);
    }
    out.put("main/consistency.csv", csv);
    std::vector<double> sorted = r;
    std::sort(sorted.begin(), sorted.end());
    const double med = sorted.empty() ? 0.0
                       : sorted.size() % 2 ? sorted[sorted.size() / 2]
                                           : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
    const double mx = sorted.empty() ? 0.0 : sorted.back();
    json j = {{"max", mx}, {"median", med}, {"max_divergence_residual", dmax}, {"pairs", n}, {"T", T},
              {"pass", mx <= 1e-6 && dmax <= 1e-10}};
    out.put("main/consistency.json", j.dump(2) + "\n");
    SubRunResult s;
    s.name = "main";
    s.extra["consistency"] = j;
    s.pass = j["pass"].get<bool>();
    rr.subruns.push_back(s);
}

void run_multiplier_audit(const ExperimentConfig& cfg, Outputs& out, RunResult& rr, json& times) {
    const auto t0 = Clock::now();
    std::vector<AuditSample> rec;
    const double N = cfg.mp ? cfg.mp->N : default_multiplier_params(cfg.phys).N;
    const auto rep = audit_claim_233(cfg.samples, cfg.mu_list, cfg.seed, {}, &rec);
    const auto ineq = audit_multiplier_inequalities(cfg.samples, cfg.mu_list, cfg.phys.eps, cfg.seed ^ 0xa5a5ULL);
    times["multiplier-audit"] = seconds_since(t0);
    std::string csv = "t,mu,k,eta,l,m,m1,m2,m3,margin_233\n";
    for (const auto& s : rec) {
        const auto mi = m123_values(s.t, Mode{s.k, s.eta, s.l, 1.0}, s.mu, N);
        csv += fmt_double(s.t) + "," + fmt_double(s.mu) + "," + std::to_string(s.k) + "," + fmt_double(s.eta) + "," +
               std::to_string(s.l) + "," + fmt_double(s.m) + "," + fmt_double(mi.m1) + "," + fmt_double(s.m2) + "," +
               fmt_double(mi.m3) + "," + fmt_double(s.margin_233) + "\n";
    }
    out.put("main/multiplier_audit.csv", csv);
    json j = {{"violations", rep.violations}, {"min_margin", rep.min_margin}, {"samples", rep.samples},
              {"margin_histogram", rep.histogram}, {"inequality_samples", ineq.samples},
              {"inequality_violations", ineq.violations}, {"max_m_times_mu_2_3", ineq.max_m_mu23},
              {"pass", rep.violations == 0 && ineq.total_violations() == 0}};
    out.put("main/multiplier_audit.json", j.dump(2) + "\n");
    SubRunResult s;
    s.name = "main";
    s.extra["multiplier_audit"] = j;
    s.pass = j["pass"].get<bool>();
    rr.subruns.push_back(s);
}

json finish_manifest(const ExperimentConfig& cfg, const Outputs& out, const RunResult& rr, const json& times,
                     const json& error) {
    json m;
    m["version"] = kVersion;
    m["config"] = serialize_config(cfg);
    m["hashes"] = out.hashes;
    std::string all;
    for (auto& [k, v] : out.hashes) all += k + " " + v + "\n";
    m["content_hash"] = sha256_hex(all);
    m["wall_times"] = times;
    json pass, subs = json::array();
    for (const auto& s : rr.subruns) {
        for (const auto& a : s.audits) pass[s.name + "/" + a.claim] = a.pass;
        json e = s.extra;
        e["name"] = s.name;
        e["pass"] = s.pass;
        subs.push_back(e);
    }
    pass["all"] = rr.pass;
    m["pass_summary"] = pass;
    m["subruns"] = subs;
    if (!error.is_null()) m["error"] = error;
    return m;
}

}  // namespace

RunResult run(const ExperimentConfig& cfg_in) {
    if (cfg_in.preset == "mu-sweep") return sweep(cfg_in, cfg_in.mu_list);
    preset_config(cfg_in.preset);  // validates the name
    ExperimentConfig cfg = cfg_in;
    RunResult rr;
    rr.dir = fs::path(cfg.output_dir).is_absolute() ? fs::path(cfg.output_dir) : output_root() / cfg.output_dir;
    Outputs out{rr.dir, {}};
    json times, error;
    const auto t0 = Clock::now();
    try {
        const auto& p = cfg.preset;
        if (p == "enhanced-dissipation" || p == "second-derivative-dissipation") run_dissipation(cfg, out, rr, times);
        else if (p == "zero-decay") run_zero_decay(cfg, out, rr, times);
        else if (p == "lift-up") run_liftup(cfg, out, rr, times);
        else if (p == "oracle") run_oracle(cfg, out, rr, times);
        else if (p == "multiplier-audit") run_multiplier_audit(cfg, out, rr, times);
        for (auto& s : rr.subruns) rr.pass = rr.pass && s.pass;
    } catch (const IntegrationError& e) {
        error = {{"type", "integration"}, {"message", e.what()}, {"t", e.t()}};
    } catch (const std::exception& e) {
        error = {{"type", "failure"}, {"message", e.what()}};
    }
    if (!error.is_null()) rr.pass = false;
    times["total"] = seconds_since(t0);
    rr.manifest = finish_manifest(cfg, out, rr, times, error);
    write_file(rr.dir / "manifest.json", rr.manifest.dump(2) + "\n");
    if (!error.is_null()) throw std::runtime_error("run failed: " + error["message"].get<std::string>());
    return rr;
}

RunResult sweep(const ExperimentConfig& cfg, const std::vector<double>& mus) {
    const std::string base = cfg.preset == "mu-sweep" ? cfg.base : cfg.preset;
    if (base == "mu-sweep") throw std::invalid_argument("mu-sweep cannot wrap itself");
    RunResult rr;
    rr.dir = fs::path(cfg.output_dir).is_absolute() ? fs::path(cfg.output_dir) : output_root() / cfg.output_dir;
    Outputs out{rr.dir, {}};
    json runs = json::array(), times;
    std::vector<double> xs, ys;
    std::string claim;
    for (auto& p : presets())
        if (p.name == base && !p.claims.empty()) claim = p.claims.front();
    for (double mu : mus) {
        ExperimentConfig sub = cfg;
        sub.preset = base;
        sub.phys.mu = mu;
        if (sub.mp && !cfg.mp) sub.mp.reset();
        sub.output_dir = (rr.dir / mu_tag(mu)).string();
        auto r = run(sub);
        rr.pass = rr.pass && r.pass;
        runs.push_back(mu_tag(mu));
        times[mu_tag(mu)] = r.manifest["wall_times"]["total"];
        for (auto& s : r.subruns)
            for (auto& a : s.audits)
                if (a.claim == claim && a.fitted > 0.0) {
                    xs.push_back(std::log(mu));
                    ys.push_back(std::log(a.fitted));
                }
        for (auto& [k, v] : r.manifest["hashes"].items()) out.hashes[mu_tag(mu) + "/" + k] = v;
        rr.subruns.insert(rr.subruns.end(), r.subruns.begin(), r.subruns.end());
    }
    json scaling;
    if (!claim.empty() && xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
        mx /= double(xs.size());
        my /= double(ys.size());
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
        const double slope = sxy / sxx;
        json rates = json::array();
        for (std::size_t i = 0; i < xs.size(); ++i) rates.push_back({std::exp(xs[i]), std::exp(ys[i])});
        scaling = {{"claim", claim}, {"rates", rates}, {"slope", slope}, {"required", 1.0 / 3.0},
                   {"tolerance", 0.1}, {"pass", std::abs(slope - 1.0 / 3.0) <= 0.1}};
        rr.pass = rr.pass && scaling["pass"].get<bool>();
        out.put("scaling.json", scaling.dump(2) + "\n");
    }
    ExperimentConfig echo = cfg;
    echo.mu_list = mus;
    rr.manifest = finish_manifest(echo, out, RunResult{}, times, nullptr);
    rr.manifest["runs"] = runs;
    rr.manifest["scaling"] = scaling;
    rr.manifest["pass_summary"]["all"] = rr.pass;
    write_file(rr.dir / "manifest.json", rr.manifest.dump(2) + "\n");
    return rr;
}

std::vector<AuditReport> audit_run(const fs::path& dir, const std::string& claim) {
    const json m = json::parse(read_file(dir / "manifest.json"));
    std::vector<AuditReport> out;
    if (m.contains("runs")) {
        for (auto& r : m["runs"]) {
            auto sub = audit_run(dir / r.get<std::string>(), claim);
            out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
    }
    const auto cfg = parse_config(m["config"].get<std::string>());
    const auto spec = claim_spec(claim, cfg.phys);
    for (const auto& s : m["subruns"]) {
        const std::string name = s["name"].get<std::string>();
        const fs::path csv = dir / name / "energy.csv";
        if (!fs::exists(csv)) continue;
        const auto series = parse_energy_csv(read_file(csv));
        if (!series.count(spec.series)) continue;
        const double de = s.contains("delta_eta") ? s["delta_eta"].get<double>() : cfg.grid.delta_eta;
        // only audit sub-runs that carry the claim, unless none of them does
        if (s.contains("claims")) {
            const auto cl = s["claims"].get<std::vector<std::string>>();
            if (std::find(cl.begin(), cl.end(), claim) == cl.end()) continue;
        }
        out.push_back(theorem_rate_audit(series, claim, cfg.phys, de));
    }
    if (out.empty()) throw std::invalid_argument("claim " + claim + " is not bound to any sub-run of " + dir.string());
    return out;
}

}  // namespace couette
