// chaincalc command line: verification suites, convergence tables, norm
// brackets, flow experiments, and worked demos with machine-readable output.

#include "chaincalc/suites.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

using namespace chaincalc;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::uint64_t seed = 7;
    std::string out;
    std::string format = "json";
    std::string oracle = "analytic";
    double tol = 0;
    std::string levels = "3..8";
};

std::pair<int, int> parse_levels(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos) {
        int j = std::stoi(s);
        return {j, j};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(out);
        f << text << "\n";
    }
}

int finish_report(Report rep, const CommonOpts& opt) {
    emit(opt.format == "csv" ? rep.to_csv() : rep.to_json(), opt.out);
    std::cerr << rep.suite << ": " << (rep.cases.size() - rep.failures()) << "/"
              << rep.cases.size() << " cases pass\n";
    return rep.all_pass() ? 0 : 1;
}

int cmd_verify(const std::string& suite, const CommonOpts& opt) {
    OracleKind oracle =
        (opt.oracle == "fd") ? OracleKind::FiniteDifference : OracleKind::Analytic;
    auto rep = run_suite(suite, opt.seed, oracle, opt.tol);
    if (!rep) {
        std::cerr << "unknown suite '" << suite
                  << "' (expected algebra|duality|commutators|cartesian|norms)\n";
        return 2;
    }
    return finish_report(std::move(*rep), opt);
}

int cmd_converge(const std::string& theorem, const std::string& form_text, const CommonOpts& opt) {
    auto [j_lo, j_hi] = parse_levels(opt.levels);
    ConvergeTable tab;
    try {
        if (theorem == "stokes") {
            Form w = parse_form(form_text.empty() ? "x*dy" : form_text, 2);
            tab = converge_stokes(w, j_lo, j_hi);
        } else if (theorem == "gauss-green") {
            Form w = parse_form(form_text.empty() ? "x*dx + y*dy" : form_text, 2);
            tab = converge_gauss_green(w, j_lo, j_hi);
        } else if (theorem == "kelvin-stokes") {
            Form w = parse_form(form_text.empty() ? "x*dy" : form_text, 3);
            tab = converge_kelvin_stokes(w, j_lo, j_hi);
        } else if (theorem == "higher-div") {
            tab = converge_higher_div(opt.seed, 2, 8);
        } else if (theorem == "change-of-vars") {
            Form w = parse_form(form_text.empty() ? "x*dxy" : form_text, 2);
            tab = converge_change_of_vars(w, j_lo, j_hi);
        } else {
            std::cerr << "unknown theorem '" << theorem << "'\n";
            return 2;
        }
    } catch (const ExprParseError& e) {
        std::cerr << "form parse error: " << e.what() << "\n";
        return 2;
    }
    emit(opt.format == "json" ? tab.to_json() : tab.to_csv(), opt.out);
    return 0;
}

int cmd_demo(const std::string& name, int stage, const std::string& dump, const CommonOpts& opt) {
    Report rep;
    rep.suite = "demo:" + name;
    rep.seed = opt.seed;
    DiracChain dumped = DiracChain::zero(1, 0);
    bool have_dump = false;

    if (name == "cantor") {
        int m = stage < 0 ? 6 : stage;
        DiracChain gamma = cantor_chain(m);
        Form dx = Form::monomial(ScalarField::constant(1.0), MultiIndex::axis(1), 1);
        Form x0 = Form::function(ScalarField::coordinate(1, 1), 1);
        rep.add("cantor_dx", "stage=" + std::to_string(m), 1.0, integrate(dx, gamma), 1e-12);
        rep.add("cantor_boundary_x", "stage=" + std::to_string(m), 1.0,
                integrate(x0, boundary(gamma)), 1e-12);
        dumped = gamma;
        have_dump = true;
    } else if (name == "sierpinski") {
        int m = stage < 0 ? 5 : stage;
        double base_area = 0.5;
        for (int s = 0; s <= m; ++s) {
            DiracChain T = sierpinski_chain(s);
            rep.add("sierpinski_area/" + std::to_string(s), "stage=" + std::to_string(s),
                    base_area, integrate(Form::volume(2), T), 1e-10);
            if (s > 0)
                rep.add("sierpinski_bd_terms/" + std::to_string(s), "x3 growth",
                        3.0 * double(boundary(sierpinski_chain(s - 1)).size()),
                        double(boundary(T).size()), 0.5);
        }
        dumped = sierpinski_chain(m);
        have_dump = true;
    } else if (name == "slit-disk") {
        int j = stage < 0 ? 7 : stage;
        // omega0 = x clamped to the open upper slit neighborhood; the pair of
        // approximating 1-chains above and below the slit separate.
        auto omega0 = ScalarField::analytic(
            [](const Degree& m2, const Point& p) -> double {
                if (!(p[0] > 0 && p[0] < 1 && p[1] > 0 && p[1] < 1)) return 0.0;
                int dx_deg = m2[0], others = total_degree(m2) - dx_deg;
                if (others) return 0.0;
                if (dx_deg == 0) return p[0] * p[0];
                if (dx_deg == 1) return 2 * p[0];
                if (dx_deg == 2) return 2.0;
                return 0.0;
            },
            8);
        Form w = Form::monomial(omega0, MultiIndex::axis(1), 2); // omega0^2 dx
        double h = std::ldexp(1.0, -j);
        double len = std::sqrt(1 - h * h);
        auto line = [&](double y) {
            ChainBuilder b(2, 1);
            const int nq = 1 << j;
            for (int i = 0; i < nq; ++i) {
                ChainTerm t;
                t.point = make_point({(i + 0.5) * len / nq, y});
                t.index = MultiIndex::axis(1);
                t.coeff = len / nq;
                b.add(t);
            }
            return b.build();
        };
        double above = integrate(w, line(h));
        double below = integrate(w, line(-h));
        rep.add("slit_L_plus", "j=" + std::to_string(j), 1.0 / 3.0, above, 4 * h);
        rep.add("slit_L_minus", "j=" + std::to_string(j), 0.0, below, 1e-12);
        // a difference chain joining the two sides is not inside the slit disk
        Region slit_disk{[](const Point& p) {
                             if (p[0] * p[0] + p[1] * p[1] >= 1.0) return false;
                             return !(p[1] == 0.0 && p[0] >= 0.0);
                         },
                         false, 16};
        Decomposition cross;
        cross.r = 1;
        cross.entries.emplace_back(std::vector<Vector>{{0.0, 2 * h}}, make_point({0.5, -h}),
                                   KVector::basis(2, MultiIndex::axis(1), 1.0));
        rep.add("slit_crossing_not_inside", "j=" + std::to_string(j), 0.0,
                inside_check(cross, slit_disk) ? 1.0 : 0.0, 0.0);
        Decomposition stay;
        stay.r = 1;
        stay.entries.emplace_back(std::vector<Vector>{{0.25, 0.0}}, make_point({0.25, h}),
                                  KVector::basis(2, MultiIndex::axis(1), 1.0));
        rep.add("slit_upper_inside", "j=" + std::to_string(j), 1.0,
                inside_check(stay, slit_disk) ? 1.0 : 0.0, 0.0);
    } else if (name == "dipole-sphere") {
        int j = stage < 0 ? 8 : stage;
        // circle as a pushforward of the interval through the angle map
        std::vector<Expr> comps{cos(Expr::constant(2 * M_PI) * Expr::coord(1)),
                                sin(Expr::constant(2 * M_PI) * Expr::coord(1))};
        SmoothMap gamma = SmoothMap::from_exprs(1, comps);
        DiracChain circle =
            pushforward(gamma, cube_chain(Point{}, 1.0, MultiIndex::axis(1), 1, j, 1));
        VectorFieldSpec radial =
            VectorFieldSpec::from_exprs({Expr::coord(1), Expr::coord(2)});
        DiracChain dipole = prederiv(radial, circle);
        Form w = parse_form("x*dy", 2);
        double lhs = integrate(w, dipole);
        double rhs = integrate(lie(radial, w), circle);
        rep.add("dipole_duality", "j=" + std::to_string(j), rhs, lhs, 1e-10);
        rep.add("dipole_order", "j=" + std::to_string(j), 1.0, double(dipole.order()), 0.0);
        dumped = dipole;
        have_dump = true;
    } else if (name == "vectorfield") {
        int j = stage < 0 ? 6 : stage;
        OpenSetSpec square;
        square.predicate = [](const Point& p) {
            return p[0] > 0 && p[0] < 1 && p[1] > 0 && p[1] < 1;
        };
        square.bbox_lo = {0, 0};
        square.bbox_hi = {1, 1};
        std::map<MultiIndex, ScalarField> X{{MultiIndex::axis(1), ScalarField::constant(1.0)}};
        DiracChain Xc = vectorfield_chain(X, square, j, 2);
        Form dx = parse_form("dx", 2), dy = parse_form("dy", 2);
        double area = std::pow(1 - std::ldexp(2.0, -j), 2);
        rep.add("vf_const_dx", "j=" + std::to_string(j), area, integrate(dx, Xc), 1e-12);
        rep.add("vf_const_dy", "j=" + std::to_string(j), 0.0, integrate(dy, Xc), 1e-12);
        std::map<MultiIndex, ScalarField> Xlin{
            {MultiIndex::axis(1), ScalarField::coordinate(1, 2)}};
        DiracChain Xc2 = vectorfield_chain(Xlin, square, j, 2);
        rep.add("vf_linear_dx", "j=" + std::to_string(j), 0.5, integrate(dx, Xc2),
                std::ldexp(4.0, -j));
        dumped = Xc;
        have_dump = true;
    } else {
        std::cerr << "unknown demo '" << name << "'\n";
        return 2;
    }

    if (!dump.empty() && have_dump) {
        std::ofstream f(dump);
        f << to_text(dumped);
    }
    rep.timestamp = iso_timestamp();
    return finish_report(std::move(rep), opt);
}

int cmd_norm(const std::string& chain_spec, int r, int level, const CommonOpts& opt) {
    DiracChain A = DiracChain::zero(2, 2);
    std::vector<CertifiedForm> dict;
    if (chain_spec == "cube") {
        A = cube_chain(Point{}, 1.0, MultiIndex::full(2), 1, level, 2);
        dict.push_back({"dV", Form::volume(2), 1.0});
    } else if (chain_spec == "refine") {
        A = combine(cube_chain(Point{}, 1.0, MultiIndex::full(2), 1, level, 2),
                    cube_chain(Point{}, 1.0, MultiIndex::full(2), 1, level + 1, 2), 1, -1);
        dict.push_back({"dV", Form::volume(2), 1.0});
    } else if (chain_spec == "element") {
        A = DiracChain::element(Point{}, KVector::basis(2, MultiIndex::axis(1), 1.0));
        dict.push_back({"dx", Form::monomial(ScalarField::constant(1.0), MultiIndex::axis(1), 2),
                        1.0});
    } else if (chain_spec == "zero") {
        A = DiracChain::zero(2, 2);
        dict.push_back({"dV", Form::volume(2), 1.0});
    } else {
        std::cerr << "unknown chain spec '" << chain_spec << "' (cube|refine|element|zero)\n";
        return 2;
    }
    NormBound nb = norm_bracket(A, r, dict);
    json j;
    j["schema"] = 1;
    j["chain"] = chain_spec;
    j["level"] = level;
    j["r"] = nb.r;
    j["lower"] = nb.lower;
    j["upper"] = nb.upper;
    j["witness_summary"] =
        json{{"lower", nb.lower_witness}, {"upper", nb.upper_witness}};
    emit(j.dump(2), opt.out);
    return nb.lower <= nb.upper + 1e-9 ? 0 : 1;
}

int cmd_flow(const std::string& experiment, int level, int quad_n, double h_t, double t1,
             const CommonOpts& opt) {
    FlowConfig cfg;
    cfg.h_t = h_t;
    cfg.quad_n = quad_n;
    VectorFieldSpec rotation =
        VectorFieldSpec::from_exprs({Expr::constant(0) - Expr::coord(2), Expr::coord(1)});
    DiracChain square = cube_chain(Point{}, 1.0, MultiIndex::full(2), 1, level, 2);
    Form w = parse_form("x*dxy", 2);

    FlowReport fr;
    json table = json::array();
    if (experiment == "ftc") {
        fr = ftc_flow_verify(square, rotation, w, 0.0, t1, cfg);
        for (int N = quad_n; N <= 8 * quad_n; N *= 2) {
            FlowConfig c2 = cfg;
            c2.quad_n = N;
            auto r2 = ftc_flow_verify(square, rotation, w, 0.0, t1, c2);
            table.push_back({{"N", N}, {"abs_err", r2.abs_err}});
        }
    } else if (experiment == "stokes") {
        fr = stokes_flow_verify(square, rotation, parse_form("x*dy", 2), 0.0, t1, cfg);
    } else if (experiment == "reynolds") {
        DiracChain seg = cube_chain(Point{}, 1.0, MultiIndex::axis(1), 1, level, 2);
        TimeForm wt{[](double t) {
                        return Form::monomial(t * ScalarField::coordinate(1, 2),
                                              MultiIndex::axis(2), 2);
                    },
                    [](double t) {
                        (void)t;
                        return Form::monomial(ScalarField::coordinate(1, 2), MultiIndex::axis(2),
                                              2);
                    }};
        fr = reynolds_verify(seg, rotation, wt, t1, cfg);
    } else if (experiment == "leibniz") {
        VectorFieldSpec rot = rotation;
        FlowConfig c2 = cfg;
        DiracChain seg = cube_chain(Point{}, 1.0, MultiIndex::axis(1), 1, level, 2);
        ChainFamilyT Jt = [seg, rot, c2](double t) { return evolve(seg, rot, t, c2); };
        TimeForm wt{[](double t) {
                        return Form::monomial(t * ScalarField::coordinate(1, 2),
                                              MultiIndex::axis(2), 2);
                    },
                    [](double) {
                        return Form::monomial(ScalarField::coordinate(1, 2), MultiIndex::axis(2),
                                              2);
                    }};
        fr = leibniz_verify(Jt, wt, t1, 1e-4);
    } else {
        std::cerr << "unknown flow experiment '" << experiment
                  << "' (ftc|stokes|reynolds|leibniz)\n";
        return 2;
    }
    json j;
    j["schema"] = 1;
    j["experiment"] = experiment;
    j["lhs"] = fr.lhs;
    j["rhs"] = fr.rhs;
    j["abs_err"] = fr.abs_err;
    for (auto& [k2, v] : fr.extra) j["extra"][k2] = v;
    j["cfg"] = {{"level", level}, {"quad_n", quad_n}, {"h_t", h_t}, {"t1", t1}};
    if (!table.empty()) j["refinement_table"] = table;
    emit(j.dump(2), opt.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator calculus on Dirac chains: verification and demos"};
    app.require_subcommand(1);
    CommonOpts opt;
    app.add_option("--seed", opt.seed, "random seed");
    app.add_option("--out", opt.out, "write the report to this path");
    app.add_option("--format", opt.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--oracle", opt.oracle, "analytic|fd")
        ->check(CLI::IsMember({"analytic", "fd"}));
    app.add_option("--tol", opt.tol, "tolerance override");
    app.add_option("--levels", opt.levels, "level range a..b");

    std::string suite, theorem, form_text, demo_name, chain_spec = "cube", experiment = "ftc";
    int stage = -1, r = 1, level = 4, quad_n = 64;
    double h_t = 1e-3, t1 = 1.0;
    std::string dump;

    auto* verify = app.add_subcommand("verify", "run an invariant suite");
    verify->add_option("suite", suite, "algebra|duality|commutators|cartesian|norms")->required();

    auto* converge = app.add_subcommand("converge", "emit a convergence table");
    converge
        ->add_option("theorem", theorem,
                     "stokes|gauss-green|kelvin-stokes|higher-div|change-of-vars")
        ->required();
    converge->add_option("--form", form_text, "test form (mini-language)");

    auto* demo = app.add_subcommand("demo", "reproduce a worked example");
    demo->add_option("name", demo_name, "cantor|sierpinski|slit-disk|dipole-sphere|vectorfield")
        ->required();
    demo->add_option("--stage", stage, "stage / refinement level");
    demo->add_option("--dump", dump, "dump the featured chain in text format");

    auto* norm = app.add_subcommand("norm", "two-sided norm bracket of a chain");
    norm->add_option("--chain", chain_spec, "cube|refine|element|zero");
    norm->add_option("--r", r, "norm order r");
    norm->add_option("--level", level, "refinement level");

    auto* flow = app.add_subcommand("flow", "flow transport experiments");
    flow->add_option("--experiment", experiment, "ftc|stokes|reynolds|leibniz");
    flow->add_option("--level", level, "chain refinement level");
    flow->add_option("--quad-n", quad_n, "time quadrature subintervals");
    flow->add_option("--ht", h_t, "integrator step");
    flow->add_option("--t1", t1, "end time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(suite, opt);
        if (converge->parsed()) return cmd_converge(theorem, form_text, opt);
        if (demo->parsed()) return cmd_demo(demo_name, stage, dump, opt);
        if (norm->parsed()) return cmd_norm(chain_spec, r, level, opt);
        if (flow->parsed()) return cmd_flow(experiment, level, quad_n, h_t, t1, opt);
    } catch (const ExprParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
