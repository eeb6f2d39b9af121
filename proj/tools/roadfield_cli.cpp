#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "roadfield/dispersion.hpp"
#include "roadfield/model.hpp"
#include "roadfield/numerics.hpp"
#include "roadfield/simulate.hpp"
#include "roadfield/speed.hpp"
#include "roadfield/steady.hpp"

using json = nlohmann::json;
using namespace roadfield;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRegime = 3;
constexpr int kExitNumerical = 4;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All numeric output goes through this: 12 significant digits, locale-free.
std::string num12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string jstr(const std::string& s) { return "\"" + s + "\""; }

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok)
            throw config_error("unknown config key \"" + item.key() +
                               "\" in " + where);
    }
}

struct Settings {
    double D = 1, d = 1, mu = 1, nu = 1, L = 2;
    std::string reaction = "logistic";
    std::string output_path;
    json options = json::object();

    Params params() const { return Params(D, d, mu, nu, L); }
    Reaction react() const {
        Reaction r = reaction_by_name(reaction);
        r.check();
        return r;
    }
    double opt(const char* key, double fallback) const {
        return options.contains(key) ? options.at(key).get<double>() : fallback;
    }
    std::string opt_str(const char* key, const std::string& fallback) const {
        return options.contains(key) ? options.at(key).get<std::string>()
                                     : fallback;
    }
};

void load_config(const std::string& path, Settings& s) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    check_keys(cfg, {"params", "reaction", "output_path", "options"},
               "top level");
    if (cfg.contains("params")) {
        const json& p = cfg["params"];
        check_keys(p, {"D", "d", "mu", "nu", "L"}, "params");
        if (p.contains("D")) s.D = p["D"].get<double>();
        if (p.contains("d")) s.d = p["d"].get<double>();
        if (p.contains("mu")) s.mu = p["mu"].get<double>();
        if (p.contains("nu")) s.nu = p["nu"].get<double>();
        if (p.contains("L")) s.L = p["L"].get<double>();
    }
    if (cfg.contains("reaction")) s.reaction = cfg["reaction"].get<std::string>();
    if (cfg.contains("output_path"))
        s.output_path = cfg["output_path"].get<std::string>();
    if (cfg.contains("options")) s.options = cfg["options"];
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open output file " + path);
    return out;
}

std::string speed_json(const SpeedResult& sr) {
    std::ostringstream os;
    os << "{\"c_star\": " << num12(sr.c_star)
       << ", \"beta_star\": " << num12(sr.beta_star)
       << ", \"alpha_star\": " << num12(sr.alpha_star)
       << ", \"family\": " << jstr(sr.family)
       << ", \"regime\": " << jstr(sr.regime)
       << ", \"bracket_width\": " << num12(sr.bracket_width) << "}";
    return os.str();
}

int cmd_speed(const Settings& s) {
    const SpeedResult sr = compute_c_star(s.params(), s.react());
    std::cout << speed_json(sr) << "\n";
    return kExitOk;
}

int cmd_limits(const Settings& s) {
    const Params p = s.params();
    const Reaction r = s.react();
    const auto dr = c_kpp_dr(p, r);
    std::ostringstream os;
    os << "{\"ell0\": " << num12(compute_ell0(p, r))
       << ", \"ell_infinity\": " << num12(compute_ell_infinity(p, r))
       << ", \"c_star_halfplane\": " << num12(compute_c_star_halfplane(p, r))
       << ", \"c_kpp\": " << num12(c_kpp(r, p.d)) << ", \"c_kpp_dr\": "
       << (dr ? num12(*dr) : std::string("null"))
       << ", \"D_kpp\": " << num12(compute_d_kpp(p, r)) << ", \"c_int\": "
       << (p.D > p.d ? num12(c_int(p, r)) : std::string("null")) << "}";
    std::cout << os.str() << "\n";
    return kExitOk;
}

int cmd_steady(const Settings& s) {
    const Params p = s.params();
    const Reaction r = s.react();
    const std::vector<double> roots = solve_steady_states(p, r);
    std::ostringstream os;
    os << "{\"roots\": [";
    for (std::size_t i = 0; i < roots.size(); ++i)
        os << (i ? ", " : "") << num12(roots[i]);
    os << "]}";
    std::cout << os.str() << "\n";
    if (!roots.empty()) {
        const int n_nodes = static_cast<int>(s.opt("n_nodes", 1001));
        const SteadyProfile prof =
            reconstruct_profile(roots.back(), p, r, n_nodes);
        const std::string path =
            s.output_path.empty() ? "steady_profile.csv" : s.output_path;
        auto out = open_out(path);
        out << "y,V\n";
        for (std::size_t i = 0; i < prof.y.size(); ++i)
            out << num12(prof.y[i]) << "," << num12(prof.V[i]) << "\n";
    }
    return kExitOk;
}

int worker_count() {
    if (const char* env = std::getenv("ROADFIELD_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(std::min(hw, 8u)) : 4;
}

int cmd_sweep(const Settings& s, const std::string& var, double from,
              double to, int points, bool log_spacing, bool curves) {
    const Reaction r = s.react();
    const std::string path =
        s.output_path.empty() ? "sweep.csv" : s.output_path;

    if (curves) {
        // Curve-sample mode: tabulate one dispersion curve over beta.
        const Params p = s.params();
        const std::string fam = s.opt_str("family", "trig");
        const std::string br = s.opt_str("branch", "plus");
        const double c = s.opt("c", 1.0);
        CurveFamily family;
        if (fam == "trig") family = CurveFamily::trig;
        else if (fam == "hyperbolic") family = CurveFamily::hyperbolic;
        else if (fam == "degenerate-line") family = CurveFamily::degenerate_line;
        else if (fam == "road-limit-D0") family = CurveFamily::road_limit_D0;
        else if (fam == "road-limit-Dinf") family = CurveFamily::road_limit_Dinf;
        else if (fam == "rescaled-road") family = CurveFamily::rescaled_road;
        else if (fam == "rescaled-field-minus")
            family = CurveFamily::rescaled_field_minus;
        else if (fam == "rescaled-field-plus")
            family = CurveFamily::rescaled_field_plus;
        else throw config_error("unknown curve family " + fam);
        const Branch branch = br == "minus" ? Branch::minus : Branch::plus;
        const bool road_side = fam == "trig" || fam == "hyperbolic"
                                   ? s.opt_str("side", "road") == "road"
                                   : !(fam.rfind("rescaled-field", 0) == 0);
        auto out = open_out(path);
        out << "family,branch,c,beta,alpha\n";
        for (int i = 0; i < points; ++i) {
            const double beta =
                from + (to - from) * (points > 1 ? i / (points - 1.0) : 0.0);
            std::optional<double> a =
                road_side ? alpha_road({family, branch, c, beta}, p)
                          : alpha_field({family, branch, c, beta}, p, r);
            if (!a) continue;
            out << fam << "," << br << "," << num12(c) << "," << num12(beta)
                << "," << num12(*a) << "\n";
        }
        return kExitOk;
    }

    if (var != "D" && var != "L")
        throw config_error("sweep --var must be D or L");
    std::vector<double> xs(points);
    for (int i = 0; i < points; ++i) {
        const double t = points > 1 ? i / (points - 1.0) : 0.0;
        xs[i] = log_spacing ? from * std::pow(to / from, t)
                            : from + (to - from) * t;
    }
    std::vector<SpeedResult> results(points);
    std::vector<std::string> errors(points);
    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= points) return;
            try {
                Settings si = s;
                (var == "D" ? si.D : si.L) = xs[i];
                results[i] = compute_c_star(si.params(), r);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int nw = std::min(worker_count(), points);
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (!e.empty()) throw num::numerical_error("sweep point failed: " + e);

    auto out = open_out(path);
    out << var << ",c_star,beta_star,alpha_star,family,regime\n";
    for (int i = 0; i < points; ++i)
        out << num12(xs[i]) << "," << num12(results[i].c_star) << ","
            << num12(results[i].beta_star) << ","
            << num12(results[i].alpha_star) << "," << results[i].family << ","
            << results[i].regime << "\n";
    std::cout << "{\"points\": " << points << ", \"output\": " << jstr(path)
              << "}\n";
    return kExitOk;
}

int cmd_simulate(const Settings& s, bool no_road) {
    SimConfig cfg{s.params(), s.react(),
                  s.opt("x_halfwidth", 100.0),
                  static_cast<int>(s.opt("nx", 2001)),
                  static_cast<int>(s.opt("ny", 41)),
                  s.opt("dt", 2e-4),
                  s.opt("T", 80.0)};
    cfg.datum_kind = s.opt_str("datum", "box") == "persistence_bump"
                         ? DatumKind::persistence_bump
                         : DatumKind::box;
    cfg.amplitude = s.opt("amplitude", 0.5);
    cfg.support_halfwidth = s.opt("support_halfwidth", 2.0);
    cfg.front_level = s.opt("front_level", 0.5);
    cfg.c_guess = s.opt("c_guess", 0.0);
    cfg.record_dt = s.opt("record_dt", 0.5);

    const SimResult res = no_road ? run_no_road(cfg) : run(cfg);

    const std::string base = s.output_path.empty() ? "sim" : s.output_path;
    {
        auto out = open_out(base + "_trace.csv");
        out << "t,x_right,x_left,sup_v\n";
        for (std::size_t i = 0; i < res.times.size(); ++i)
            out << num12(res.times[i]) << "," << num12(res.front_right[i])
                << "," << num12(res.front_left[i]) << ","
                << num12(res.sup_v[i]) << "\n";
    }
    {
        auto out = open_out(base + "_field.csv");
        out << "x,y,v\n";
        for (std::size_t iy = 0; iy < res.y.size(); ++iy)
            for (std::size_t ix = 0; ix < res.x.size(); ++ix)
                out << num12(res.x[ix]) << "," << num12(res.y[iy]) << ","
                    << num12(res.v_final[iy * res.x.size() + ix]) << "\n";
    }
    if (!no_road) {
        auto out = open_out(base + "_road.csv");
        out << "x,u\n";
        for (std::size_t ix = 0; ix < res.x.size(); ++ix)
            out << num12(res.x[ix]) << "," << num12(res.u_final[ix]) << "\n";
    }
    std::cout << "{\"fitted_speed\": " << num12(res.fitted_speed)
              << ", \"outcome\": " << jstr(res.outcome)
              << " , \"note\": \"finite-window surrogate of the asymptotic "
                 "speed\"}\n";
    return kExitOk;
}

int cmd_verify(const Settings& s) {
    const Params p = s.params();
    const Reaction r = s.react();
    const SpeedResult sr = compute_c_star(p, r);
    std::cout << speed_json(sr) << "\n";
    for (double frac : {0.99, 0.999, 0.9999}) {
        const ComplexRoot root = find_complex_root(p, r, frac * sr.c_star);
        const SubsolutionCoeffs sc = subsolution_coefficients(p, root);
        std::cout << "{\"c\": " << num12(root.c)
                  << ", \"beta_re\": " << num12(root.beta_re)
                  << ", \"beta_im\": " << num12(root.beta_im)
                  << ", \"alpha_re\": " << num12(root.alpha_re)
                  << ", \"alpha_im\": " << num12(root.alpha_im)
                  << ", \"residual\": " << num12(root.residual)
                  << ", \"gamma1\": " << num12(sc.gamma1)
                  << ", \"gamma2\": " << num12(sc.gamma2) << "}\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"road-strip KPP propagation-speed engine"};
    app.require_subcommand(1);

    Settings s;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file");
    // Shared parameter flags (override the config when given).
    double D = 0, d = 0, mu = 0, nu = 0, L = 0;
    std::string reaction, output;
    auto* oD = app.add_option("--D", D, "road diffusivity");
    auto* od = app.add_option("--d", d, "field diffusivity");
    auto* omu = app.add_option("--mu", mu, "road-to-field rate");
    auto* onu = app.add_option("--nu", nu, "field-to-road rate");
    auto* oL = app.add_option("--L", L, "strip width");
    auto* orx = app.add_option("--reaction", reaction, "reaction name");
    auto* oout = app.add_option("--output", output, "output path (or base)");

    auto* sp = app.add_subcommand("speed", "compute the spreading speed");
    auto* lim = app.add_subcommand("limits", "limit speeds and thresholds");
    auto* st = app.add_subcommand("steady", "steady states and profile CSV");
    auto* sw = app.add_subcommand("sweep", "c* sweep or curve samples CSV");
    auto* sim = app.add_subcommand("simulate", "finite-difference simulation");
    auto* ver = app.add_subcommand("verify", "complex-root continuation table");

    std::string var = "D";
    double from = 1e-3, to = 1e4;
    int points = 20;
    bool log_spacing = false, curves = false;
    sw->add_option("--var", var, "swept variable: D or L");
    sw->add_option("--from", from, "range start");
    sw->add_option("--to", to, "range end");
    sw->add_option("--points", points, "number of samples");
    sw->add_flag("--log", log_spacing, "log-spaced samples");
    sw->add_flag("--curves", curves,
                 "emit dispersion-curve samples over beta instead of c*");

    bool no_road = false;
    sim->add_flag("--no-road", no_road, "Robin top boundary, no road row");

    // simulate/steady numeric options are passed through "options".
    double xh = 0, dt = 0, T = 0, amp = 0, shw = 0, lvl = 0, cg = 0, rdt = 0,
           cval = 0;
    int nx = 0, ny = 0, n_nodes = 0;
    std::string datum, family, branch, side;
    auto* oxh = sim->add_option("--x-halfwidth", xh);
    auto* onx = sim->add_option("--nx", nx);
    auto* ony = sim->add_option("--ny", ny);
    auto* odt = sim->add_option("--dt", dt);
    auto* oT = sim->add_option("--T", T);
    auto* odat = sim->add_option("--datum", datum, "box | persistence_bump");
    auto* oamp = sim->add_option("--amplitude", amp);
    auto* oshw = sim->add_option("--support-halfwidth", shw);
    auto* olvl = sim->add_option("--front-level", lvl);
    auto* ocg = sim->add_option("--c-guess", cg);
    auto* ordt = sim->add_option("--record-dt", rdt);
    auto* onn = st->add_option("--n-nodes", n_nodes);
    auto* ofam = sw->add_option("--family", family, "curve family (--curves)");
    auto* obr = sw->add_option("--branch", branch, "plus | minus (--curves)");
    auto* osd = sw->add_option("--side", side, "road | field (--curves)");
    auto* oc = sw->add_option("--c", cval, "speed for curve samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code == 0) return kExitOk;  // --help
        std::cerr << "{\"error\": \"argument parse failure\", \"exit\": 2}\n";
        return kExitConfig;
    }

    try {
        if (!config_path.empty()) load_config(config_path, s);
        if (oD->count()) s.D = D;
        if (od->count()) s.d = d;
        if (omu->count()) s.mu = mu;
        if (onu->count()) s.nu = nu;
        if (oL->count()) s.L = L;
        if (orx->count()) s.reaction = reaction;
        if (oout->count()) s.output_path = output;
        if (oxh->count()) s.options["x_halfwidth"] = xh;
        if (onx->count()) s.options["nx"] = nx;
        if (ony->count()) s.options["ny"] = ny;
        if (odt->count()) s.options["dt"] = dt;
        if (oT->count()) s.options["T"] = T;
        if (odat->count()) s.options["datum"] = datum;
        if (oamp->count()) s.options["amplitude"] = amp;
        if (oshw->count()) s.options["support_halfwidth"] = shw;
        if (olvl->count()) s.options["front_level"] = lvl;
        if (ocg->count()) s.options["c_guess"] = cg;
        if (ordt->count()) s.options["record_dt"] = rdt;
        if (onn->count()) s.options["n_nodes"] = n_nodes;
        if (ofam->count()) s.options["family"] = family;
        if (obr->count()) s.options["branch"] = branch;
        if (osd->count()) s.options["side"] = side;
        if (oc->count()) s.options["c"] = cval;

        if (sp->parsed()) return cmd_speed(s);
        if (lim->parsed()) return cmd_limits(s);
        if (st->parsed()) return cmd_steady(s);
        if (sw->parsed())
            return cmd_sweep(s, var, from, to, points, log_spacing, curves);
        if (sim->parsed()) return cmd_simulate(s, no_road);
        if (ver->parsed()) return cmd_verify(s);
        return kExitConfig;
    } catch (const config_error& e) {
        std::cerr << "{\"error\": " << jstr(e.what()) << ", \"exit\": 2}\n";
        return kExitConfig;
    } catch (const invalid_parameter_error& e) {
        std::cerr << "{\"error\": " << jstr(e.what()) << ", \"exit\": 2}\n";
        return kExitConfig;
    } catch (const regime_error& e) {
        std::cerr << "{\"error\": " << jstr(e.what()) << ", \"exit\": 3}\n";
        return kExitRegime;
    } catch (const json::exception& e) {
        std::cerr << "{\"error\": " << jstr(e.what()) << ", \"exit\": 2}\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\": " << jstr(e.what()) << ", \"exit\": 4}\n";
        return kExitNumerical;
    }
}
