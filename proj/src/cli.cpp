#include "chialvo/cli.hpp"

#include "chialvo/basins.hpp"
#include "chialvo/config.hpp"
#include "chialvo/continuation.hpp"
#include "chialvo/fixed_points.hpp"
#include "chialvo/lyapunov.hpp"
#include "chialvo/network.hpp"
#include "chialvo/noninvertibility.hpp"
#include "chialvo/orbit.hpp"
#include "chialvo/parallel.hpp"
#include "chialvo/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace chialvo {

namespace {

struct Table {
    std::string name;
    std::string columns;
    std::vector<std::string> rows;
    std::vector<std::string> notes;
};

struct Output {
    std::vector<Table> tables;
    bool any_diverged = false;
};

struct NumericFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string d(double v) { return format_double(v); }

template <class... T>
std::string row(const T&... parts) {
    std::string s;
    auto add = [&](const std::string& p) {
        if (!s.empty()) s += ',';
        s += p;
    };
    (add(parts), ...);
    return s;
}

std::string i(long v) { return std::to_string(v); }

MapParams map_params(const RunConfig& c) {
    MapParams p;
    for (const auto& n : param_names()) set_param(p, n, c.real(n));
    return p;
}

State ic_of(const RunConfig& c) { return {c.real("x0"), c.real("y0"), c.real("phi0")}; }

OrbitConfig orbit_config(const RunConfig& c) {
    OrbitConfig o;
    o.n_transient = c.integer("n_transient");
    o.n_keep = c.integer("n_keep");
    o.tol = c.real("tol");
    o.max_period = static_cast<int>(c.integer("max_period"));
    o.divergence_threshold = c.real("divergence_threshold");
    o.lyap_iter = c.integer("lyap_iter");
    return o;
}

RootSearch root_search(const RunConfig& c) {
    RootSearch rs;
    rs.x_min = c.real("fp_x_min");
    rs.x_max = c.real("fp_x_max");
    rs.grid_n = static_cast<int>(c.integer("fp_grid_n"));
    rs.tol = c.real("fp_tol");
    rs.denominator = parse_flux_denominator(c.text("fp_denominator"));
    return rs;
}

SweepSpec sweep_spec(const RunConfig& c) {
    SweepSpec s;
    s.param = c.text("param");
    s.start = c.real("start");
    s.stop = c.real("stop");
    s.n_points = static_cast<int>(c.integer("n_points"));
    s.direction = parse_direction(c.text("direction"));
    s.ic_policy = parse_ic_policy(c.text("ic_policy"));
    s.n_transient = c.integer("n_transient");
    s.n_keep = c.integer("sweep_keep");
    s.ic = ic_of(c);
    s.divergence_threshold = c.real("divergence_threshold");
    return s;
}

NetworkParams network_params(const RunConfig& c) {
    NetworkParams np;
    np.map = map_params(c);
    np.N = static_cast<int>(c.integer("N"));
    np.R = static_cast<int>(c.integer("R"));
    np.sigma = c.real("sigma");
    np.mu = c.real("mu");
    np.hub_in_ring = c.flag("hub_in_ring");
    return np;
}

Schedule schedule(const RunConfig& c) {
    return {c.integer("net_transient"), c.integer("net_record"), c.integer("net_stride")};
}

// ---- subcommands ----

Output cmd_fixed_points(const RunConfig& c, int) {
    Table t{"fixed-points", "", {}, {}};
    const std::string pn = c.text("fp_param");
    t.columns = row(pn, std::string("x"), std::string("y"), std::string("phi"), std::string("re_l1"),
                    std::string("im_l1"), std::string("re_l2"), std::string("im_l2"), std::string("re_l3"),
                    std::string("im_l3"), std::string("type"));
    const MapParams base = map_params(c);
    const RootSearch rs = root_search(c);
    const long n = c.integer("fp_n_points");
    if (n < 1) throw std::invalid_argument("fp_n_points must be >= 1");
    for (long j = 0; j < n; ++j) {
        double pv = get_param(base, pn);
        if (n > 1) pv = j == n - 1 ? c.real("fp_stop")
                                   : c.real("fp_start") + (c.real("fp_stop") - c.real("fp_start")) * j / (n - 1);
        const MapParams p = with_param(base, pn, pv);
        const auto res = find_fixed_points(p, rs);
        for (const auto& fp : res.roots) {
            const auto st = classify(p, fp);
            const auto& l = st.eigenvalues;
            t.rows.push_back(row(d(pv), d(fp.x), d(fp.y), d(fp.phi), d(l[0].real()), d(l[0].imag()),
                                 d(l[1].real()), d(l[1].imag()), d(l[2].real()), d(l[2].imag()),
                                 to_string(st.classification)));
        }
        for (double x : res.possible_tangencies)
            t.notes.push_back("possible tangency at " + pn + "=" + d(pv) + " x=" + d(x));
    }
    return {{t}, false};
}

Output cmd_orbit(const RunConfig& c, int) {
    Table t{"orbit", "n,x,y,phi", {}, {}};
    const MapParams p = map_params(c);
    const long nt = c.integer("n_transient"), nk = c.integer("n_keep");
    if (nt < 0 || nk < 1) throw std::invalid_argument("need n_transient >= 0 and n_keep >= 1");
    const double thr = c.real("divergence_threshold");
    State s = ic_of(c);
    Output o;
    for (long n = 1; n <= nt + nk; ++n) {
        s = step3(p, s);
        if (diverged_state(s, thr)) {
            t.notes.push_back("orbit diverged at step " + i(n));
            o.any_diverged = true;
            break;
        }
        if (n > nt) t.rows.push_back(row(i(n), d(s.x), d(s.y), d(s.phi)));
    }
    o.tables.push_back(t);
    return o;
}

Output cmd_lyapunov(const RunConfig& c, int) {
    Table t{"lyapunov", "param,l1,l2,l3", {}, {}};
    const MapParams p = map_params(c);
    const double pv = get_param(p, c.text("param"));
    Output o;
    try {
        const auto ls = lyapunov_spectrum(p, ic_of(c), c.integer("n_transient"), c.integer("lyap_iter"),
                                          std::nullopt, c.real("divergence_threshold"));
        t.rows.push_back(row(d(pv), d(ls.exponents[0]), d(ls.exponents[1]), d(ls.exponents[2])));
    } catch (const DivergedOrbit& e) {
        t.rows.push_back(row(d(pv), std::string("nan"), std::string("nan"), std::string("nan")));
        t.notes.push_back(e.what());
        o.any_diverged = true;
    }
    o.tables.push_back(t);
    return o;
}

Output cmd_lyapunov_sweep(const RunConfig& c, int workers) {
    Table t{"lyapunov-sweep", "param,l1,l2,l3", {}, {}};
    Output o;
    for (const auto& r : lyapunov_sweep(map_params(c), sweep_spec(c), c.integer("lyap_iter"), workers)) {
        t.rows.push_back(row(d(r.param), d(r.exponents[0]), d(r.exponents[1]), d(r.exponents[2])));
        o.any_diverged |= r.diverged;
    }
    o.tables.push_back(t);
    return o;
}

Output cmd_bifurcation(const RunConfig& c, int workers) {
    Table t{"bifurcation", "param,iterate_index,x,diverged", {}, {}};
    const SweepSpec spec = sweep_spec(c);
    SweepOptions opt;
    opt.workers = workers;
    Output o;
    for (const auto& r : bifurcation_sweep(map_params(c), spec, opt).rows) {
        if (r.diverged) {
            o.any_diverged = true;
            for (long j = 0; j < spec.n_keep; ++j) t.rows.push_back(row(d(r.param), i(j), std::string("nan"), std::string("1")));
        } else {
            for (std::size_t j = 0; j < r.x.size(); ++j)
                t.rows.push_back(row(d(r.param), i(static_cast<long>(j)), d(r.x[j]), std::string("0")));
        }
    }
    o.tables.push_back(t);
    return o;
}

Output cmd_sweep2d(const RunConfig& c, int workers) {
    Table t{"sweep2d", "u,v,lmax,period_class", {}, {}};
    SweepSpec su, sv;
    su.param = c.text("u_param");
    su.start = c.real("u_start");
    su.stop = c.real("u_stop");
    su.n_points = static_cast<int>(c.integer("u_n"));
    sv.param = c.text("v_param");
    sv.start = c.real("v_start");
    sv.stop = c.real("v_stop");
    sv.n_points = static_cast<int>(c.integer("v_n"));
    Sweep2dConfig cfg;
    cfg.orbit = orbit_config(c);
    cfg.ic = ic_of(c);
    cfg.workers = workers;
    Output o;
    for (const auto& cell : sweep2d(map_params(c), su, sv, cfg)) {
        t.rows.push_back(row(d(cell.u), d(cell.v), d(cell.lmax), i(cell.period_class)));
        o.any_diverged |= cell.period_class == -1;
    }
    o.tables.push_back(t);
    return o;
}

Output cmd_continue(const RunConfig& c, int) {
    Table t{"continue", "arclength_index,param,x,y,phi,stable,test_lp,test_pd,test_ns", {}, {}};
    Table ev{"events", "kind,param,x,y,phi", {}, {}};
    const MapParams p = map_params(c);
    const auto roots = find_fixed_points(p, root_search(c)).roots;
    const long idx = c.integer("cont_root");
    if (idx < 0 || idx >= static_cast<long>(roots.size()))
        throw NumericFailure("cont_root " + i(idx) + " out of range: " + i(static_cast<long>(roots.size())) +
                             " fixed points found");
    ContinuationOptions opt;
    opt.step0 = c.real("step0");
    opt.step_min = c.real("step_min");
    opt.step_max = c.real("step_max");
    opt.n_max = static_cast<int>(c.integer("n_max"));
    opt.p_min = c.real("p_min");
    opt.p_max = c.real("p_max");
    opt.direction = static_cast<int>(c.integer("cont_direction"));
    const std::string fp = c.text("free_param");
    const Branch br = continue_branch(p, fp, roots[static_cast<std::size_t>(idx)], opt);
    if (br.points.empty()) throw NumericFailure(br.diagnostics.empty() ? "empty branch" : br.diagnostics.front());
    for (std::size_t j = 0; j < br.points.size(); ++j) {
        const auto& b = br.points[j];
        t.rows.push_back(row(i(static_cast<long>(j)), d(b.param), d(b.state.x), d(b.state.y), d(b.state.phi),
                             std::string(b.stable ? "1" : "0"), d(b.test_lp), d(b.test_pd), d(b.test_ns)));
    }
    for (const auto& s : br.diagnostics) t.notes.push_back(s);
    const auto rep = detect_codim1(p, br, c.real("ns_band"));
    for (const auto& e : rep.events)
        ev.rows.push_back(row(to_string(e.kind), d(e.param), d(e.state.x), d(e.state.y), d(e.state.phi)));
    for (const auto& w : rep.warnings) ev.notes.push_back(w);
    return {{t, ev}, false};
}

Output cmd_critical_set(const RunConfig& c, int) {
    const MapParams p = map_params(c);
    const long dim = c.integer("lc_dim");
    if (dim == 2) {
        Table t{"critical-set", "set,x,y", {}, {}};
        const Window2 w{c.real("win_x_min"), c.real("win_x_max"), c.real("win_y_min"), c.real("win_y_max")};
        const auto cs = extract_lc2(p.a, p.b, w, static_cast<int>(c.integer("lc_nx")), static_cast<int>(c.integer("lc_ny")));
        auto pts = planar(cs);
        const Map2Params m2{p.a, p.b, p.c, p.k0};
        const long nimg = c.integer("lc_images");
        for (long s = 0; s <= nimg; ++s) {
            if (s > 0) pts = image2(m2, pts, 1);
            for (const auto& q : pts) t.rows.push_back(row(i(s), d(q.x), d(q.y)));
        }
        t.notes.push_back("set 0 is the zero set of the Jacobian determinant; set n is its n-th image");
        return {{t}, false};
    }
    if (dim == 3) {
        Table t{"critical-set", "x,y,phi,residual", {}, {}};
        const Window3 w{c.real("win_x_min"), c.real("win_x_max"), c.real("win_y_min"), c.real("win_y_max"),
                        c.real("win_phi_min"), c.real("win_phi_max")};
        const auto cs = extract_lc3(p, w, static_cast<int>(c.integer("lc_nx")), static_cast<int>(c.integer("lc_ny")),
                                    static_cast<int>(c.integer("lc_nphi")));
        for (std::size_t j = 0; j < cs.points.size(); ++j)
            t.rows.push_back(row(d(cs.points[j].x), d(cs.points[j].y), d(cs.points[j].phi), d(cs.residuals[j])));
        return {{t}, false};
    }
    throw std::invalid_argument("lc_dim must be 2 or 3");
}

Output cmd_preimages(const RunConfig& c, int workers) {
    const MapParams p = map_params(c);
    const long dim = c.integer("pre_dim");
    if (dim != 2 && dim != 3) throw std::invalid_argument("pre_dim must be 2 or 3");
    const long n = c.integer("tgt_n");
    if (n < 1) throw std::invalid_argument("tgt_n must be >= 1");
    const PreimageSearch ps{c.real("pre_x_min"), c.real("pre_x_max"), static_cast<int>(c.integer("pre_grid_n"))};
    const State t0{c.real("tgt_x0"), c.real("tgt_y0"), c.real("tgt_phi0")};
    const State t1{c.real("tgt_x1"), c.real("tgt_y1"), c.real("tgt_phi1")};
    auto target = [&](long j) {
        if (n == 1) return t0;
        const double s = static_cast<double>(j) / static_cast<double>(n - 1);
        return State{t0.x + s * (t1.x - t0.x), t0.y + s * (t1.y - t0.y), t0.phi + s * (t1.phi - t0.phi)};
    };
    std::vector<Preimages3> res(static_cast<std::size_t>(n));
    parallel_for(res.size(), workers, [&](std::size_t j) {
        const State tg = target(static_cast<long>(j));
        if (dim == 3) {
            res[j] = preimages3(p, tg, ps);
        } else {
            const auto r = preimages2({p.a, p.b, p.c, p.k0}, {tg.x, tg.y}, ps);
            res[j].count = r.count;
            for (const auto& q : r.points) res[j].points.push_back({q.x, q.y, 0.0});
        }
    });
    Table t{"preimages", dim == 3 ? "tx,ty,tphi,count" : "tx,ty,count", {}, {}};
    Table pts{"points", dim == 3 ? "tx,ty,tphi,px,py,pphi" : "tx,ty,px,py", {}, {}};
    for (long j = 0; j < n; ++j) {
        const State tg = target(j);
        const auto& r = res[static_cast<std::size_t>(j)];
        if (dim == 3) {
            t.rows.push_back(row(d(tg.x), d(tg.y), d(tg.phi), i(r.count)));
            for (const auto& q : r.points) pts.rows.push_back(row(d(tg.x), d(tg.y), d(tg.phi), d(q.x), d(q.y), d(q.phi)));
        } else {
            t.rows.push_back(row(d(tg.x), d(tg.y), i(r.count)));
            for (const auto& q : r.points) pts.rows.push_back(row(d(tg.x), d(tg.y), d(q.x), d(q.y)));
        }
    }
    return {{t, pts}, false};
}

std::string points_field(const AttractorRecord& r) {
    std::string s;
    for (const auto& q : r.points) {
        if (!s.empty()) s += ';';
        s += d(q.x) + ' ' + d(q.y) + ' ' + d(q.phi);
    }
    return s;
}

Output cmd_basin(const RunConfig& c, int workers) {
    const Window2 w{c.real("basin_x_min"), c.real("basin_x_max"), c.real("basin_y_min"), c.real("basin_y_max")};
    BasinConfig bc;
    bc.max_iter = c.integer("basin_max_iter");
    bc.n_keep = c.integer("n_keep");
    bc.tol = c.real("tol");
    bc.max_period = static_cast<int>(c.integer("max_period"));
    bc.match_tol = c.real("match_tol");
    bc.divergence_threshold = c.real("divergence_threshold");
    bc.lyap_iter = c.integer("basin_lyap_iter");
    bc.workers = workers;
    const auto g = compute_basin(map_params(c), w, static_cast<int>(c.integer("basin_nx")),
                                 static_cast<int>(c.integer("basin_ny")), c.real("basin_phi0"), bc);
    Table t{"basin", "ix,iy,x0,y0,label", {}, {}};
    Output o;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const int l = g.label(ix, iy);
            o.any_diverged |= l == kLabelDivergent;
            t.rows.push_back(row(i(ix), i(iy), d(g.x0(ix)), d(g.y0(iy)), i(l)));
        }
    t.notes.push_back("label -1 divergent, -2 unresolved");
    Table cat{"catalog", "label,kind,period,max_lyapunov,x_lo,x_hi,y_lo,y_hi,phi_lo,phi_hi,points", {}, {}};
    for (std::size_t j = 0; j < g.catalog.size(); ++j) {
        const auto& r = g.catalog[j];
        cat.rows.push_back(row(i(static_cast<long>(j)), to_string(r.kind), i(r.period), d(r.max_lyapunov),
                               d(r.bbox.lo.x), d(r.bbox.hi.x), d(r.bbox.lo.y), d(r.bbox.hi.y), d(r.bbox.lo.phi),
                               d(r.bbox.hi.phi), points_field(r)));
    }
    o.tables = {t, cat};
    return o;
}

Thresholds thresholds(const RunConfig& c) {
    Thresholds th;
    th.sync_threshold = c.real("sync_threshold");
    th.eps = c.real("eps");
    th.max_clusters = static_cast<int>(c.integer("max_clusters"));
    th.cluster_sd = c.real("cluster_sd");
    th.coherent_sd = c.real("coherent_sd");
    th.min_run = static_cast<int>(c.integer("min_run"));
    return th;
}

Output cmd_network(const RunConfig& c, int workers) {
    const NetworkParams np = network_params(c);
    const auto f = simulate_network(np, c.u64("seed"), schedule(c), workers, c.real("divergence_threshold"));
    Output o;
    o.any_diverged = f.diverged;
    Table field{"network", "t,node,x", {}, {}};
    for (long r = 0; r < f.n_rows; ++r)
        for (int m = 0; m < f.N; ++m) field.rows.push_back(row(i(f.t[r]), i(m), d(f.at(r, m))));
    Table ends{"end", "node,x_end,y_end,phi_end", {}, {}};
    for (int m = 0; m < f.N; ++m) {
        const auto& s = f.final_states[m];
        ends.rows.push_back(row(i(m), d(s.x), d(s.y), d(s.phi)));
    }
    Table rec{"recurrence", "i,j,bit", {}, {}};
    Table diag{"diagnostics", "key,value", {}, {}};
    if (f.diverged) {
        field.notes.push_back("network diverged at step " + i(*f.divergence_step));
        diag.rows.push_back(row(std::string("diverged"), std::string("1")));
    } else {
        const auto dg = coherence_profile_and_classify(f, static_cast<int>(c.integer("window_w")), thresholds(c));
        for (int a = 0; a < f.N; ++a)
            for (int b = 0; b < f.N; ++b)
                rec.rows.push_back(row(i(a), i(b), i(dg.recurrence[static_cast<std::size_t>(a) * f.N + b])));
        diag.rows.push_back(row(std::string("diverged"), std::string("0")));
        diag.rows.push_back(row(std::string("sync_error"), d(dg.sync_error)));
        diag.rows.push_back(row(std::string("cluster_count"), i(dg.cluster_count)));
        diag.rows.push_back(row(std::string("class"), to_string(dg.state_class)));
        for (int m = 0; m < f.N; ++m)
            diag.rows.push_back(row("coherence_" + i(m), d(dg.coherence_profile[m])));
    }
    o.tables = {field, ends, rec, diag};
    return o;
}

Output cmd_xk_scan(const RunConfig& c, int workers) {
    const NetworkParams np = network_params(c);
    const auto rows = xk_scan(np, c.real("xk_k_min"), c.real("xk_k_max"), static_cast<int>(c.integer("xk_n")),
                              c.u64("seed"), parse_seed_policy(c.text("seed_policy")), schedule(c), c.real("eps"),
                              workers);
    Output o;
    Table t{"xk-scan", "k,node,x_end", {}, {}};
    Table cl{"clusters", "k,seed,cluster_count,diverged", {}, {}};
    for (const auto& r : rows) {
        o.any_diverged |= r.diverged;
        for (int m = 0; m < np.N; ++m)
            t.rows.push_back(row(d(r.k), i(m), r.diverged ? std::string("nan") : d(r.x_end[m])));
        cl.rows.push_back(row(d(r.k), std::to_string(r.seed), i(r.cluster_count), std::string(r.diverged ? "1" : "0")));
    }
    o.tables = {t, cl};
    return o;
}

using Command = std::function<Output(const RunConfig&, int)>;

const std::vector<std::pair<std::string, std::pair<std::string, Command>>>& commands() {
    static const std::vector<std::pair<std::string, std::pair<std::string, Command>>> c{
        {"fixed-points", {"fixed points and their stability", cmd_fixed_points}},
        {"orbit", {"orbit time series", cmd_orbit}},
        {"lyapunov", {"Lyapunov spectrum of one orbit", cmd_lyapunov}},
        {"lyapunov-sweep", {"Lyapunov spectra along a parameter sweep", cmd_lyapunov_sweep}},
        {"bifurcation", {"bifurcation diagram data", cmd_bifurcation}},
        {"sweep2d", {"two-parameter period/Lyapunov map", cmd_sweep2d}},
        {"continue", {"fixed-point branch continuation with LP/PD/NS events", cmd_continue}},
        {"critical-set", {"critical curves (2D) or surface samples (3D)", cmd_critical_set}},
        {"preimages", {"preimage counts along a target segment", cmd_preimages}},
        {"basin", {"basin of attraction grid", cmd_basin}},
        {"network", {"ring-star network run with diagnostics", cmd_network}},
        {"xk-scan", {"network end states versus k", cmd_xk_scan}},
    };
    return c;
}

std::string header(const std::string& command, const RunConfig& c, const Table& t) {
    std::string h = "# chialvo-tool " + std::string(kToolVersion) + "\n";
    h += "# command: " + command + "\n";
    h += "# table: " + t.name + "\n";
    h += "# seed: " + c.text("seed") + "\n";
    std::istringstream cfg(emit_config(c));
    std::string line;
    while (std::getline(cfg, line)) h += "#@ " + line + "\n";
    std::string defs;
    for (const auto& k : c.defaulted()) defs += (defs.empty() ? "" : " ") + k;
    h += "# defaults: " + defs + "\n";
    for (const auto& n : t.notes) h += "# note: " + n + "\n";
    return h;
}

void write_table(std::ostream& os, const std::string& command, const RunConfig& c, const Table& t) {
    os << header(command, c, t) << t.columns << '\n';
    for (const auto& r : t.rows) os << r << '\n';
}

std::string sidecar_path(const std::string& out, const std::string& name) {
    const std::string ext = ".csv";
    if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0)
        return out.substr(0, out.size() - ext.size()) + "." + name + ext;
    return out + "." + name + ext;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'", 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// a previous output file replays through its '#@ ' lines
std::string config_text(const std::string& raw) {
    if (raw.rfind("# chialvo-tool", 0) != 0) return raw;
    std::istringstream in(raw);
    std::string line, out;
    while (std::getline(in, line))
        if (line.rfind("#@ ", 0) == 0) out += line.substr(3) + "\n";
    return out;
}

}  // namespace

std::string data_section(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') out += line + "\n";
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Flux-coupled Chialvo map analysis tool", "chialvo-tool"};
    app.require_subcommand(1);
    std::string config_path, out_path;
    std::vector<std::string> sets;
    int workers = 0;
    std::optional<std::uint64_t> seed;
    bool require_bounded = false;
    for (const auto& [name, info] : commands()) {
        auto* sc = app.add_subcommand(name, info.first);
        sc->add_option("--config", config_path, "config file (key = value lines, or a previous output)");
        sc->add_option("--set", sets, "override key=value (repeatable, wins over --config)");
        sc->add_option("--out", out_path, "output CSV path (sidecar tables are written next to it)");
        sc->add_option("--workers", workers, "worker threads (default: CHIALVO_WORKERS or all cores)");
        sc->add_option("--seed", seed, "random seed (overrides config)");
        sc->add_flag("--require-bounded", require_bounded, "exit 4 if any orbit or run diverged");
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitConfig;
    }
    std::string command;
    for (const auto* sc : app.get_subcommands()) command = sc->get_name();
    Command fn;
    for (const auto& [name, info] : commands())
        if (name == command) fn = info.second;
    if (!fn) {
        err << "error: unknown subcommand\n" << app.help();
        return kExitConfig;
    }

    try {
        RunConfig cfg = parse_config(config_path.empty() ? std::string() : config_text(read_file(config_path)),
                                     default_schema(), false);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'", 0);
            const std::string key = s.substr(0, eq);
            const auto b = key.find_first_not_of(' '), e = key.find_last_not_of(' ');
            cfg.set(b == std::string::npos ? key : key.substr(b, e - b + 1), s.substr(eq + 1));
        }
        if (seed) cfg.set("seed", std::to_string(*seed));
        cfg.apply_defaults();
        const int w = workers > 0 ? workers : default_workers();

        const Output o = fn(cfg, w);
        if (out_path.empty()) {
            for (const auto& t : o.tables) write_table(out, command, cfg, t);
        } else {
            for (std::size_t j = 0; j < o.tables.size(); ++j) {
                const std::string path = j == 0 ? out_path : sidecar_path(out_path, o.tables[j].name);
                std::ofstream f(path);
                if (!f) throw std::invalid_argument("cannot write '" + path + "'");
                write_table(f, command, cfg, o.tables[j]);
            }
        }
        if (require_bounded && o.any_diverged) {
            err << "error: diverged orbits present and --require-bounded is set\n";
            return kExitDiverged;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace chialvo
