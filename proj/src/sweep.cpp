#include "chialvo/sweep.hpp"

#include "chialvo/lyapunov.hpp"
#include "chialvo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chialvo {

std::string to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }
std::string to_string(IcPolicy p) { return p == IcPolicy::fixed_ic ? "fixed-ic" : "inherit-final"; }

Direction parse_direction(const std::string& s) {
    if (s == "forward") return Direction::forward;
    if (s == "backward") return Direction::backward;
    throw std::invalid_argument("direction must be 'forward' or 'backward'");
}

IcPolicy parse_ic_policy(const std::string& s) {
    if (s == "fixed-ic") return IcPolicy::fixed_ic;
    if (s == "inherit-final") return IcPolicy::inherit_final;
    throw std::invalid_argument("ic_policy must be 'fixed-ic' or 'inherit-final'");
}

double SweepSpec::value(int i) const {
    if (i == n_points - 1) return stop;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(n_points - 1);
}

std::vector<int> SweepSpec::order() const {
    std::vector<int> o(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) o[i] = direction == Direction::forward ? i : n_points - 1 - i;
    return o;
}

void SweepSpec::validate() const {
    if (param == "sigma" || param == "mu")
        throw std::invalid_argument("'" + param + "' is a network parameter; map sweeps cannot vary it");
    if (!is_param_name(param)) throw std::invalid_argument("unknown sweep parameter '" + param + "'");
    if (n_points < 2) throw std::invalid_argument("n_points must be >= 2");
    if (start == stop) throw std::invalid_argument("start and stop must differ");
    if (n_transient < 0 || n_keep < 1) throw std::invalid_argument("bad transient/keep lengths");
}

int count_branches(std::vector<double> values, double cluster_tol) {
    if (values.empty()) throw std::invalid_argument("count_branches needs values");
    std::sort(values.begin(), values.end());
    int n = 1;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] - values[i - 1] > cluster_tol) ++n;
    return n;
}

namespace {

struct CellRun {
    BifurcationRow row;
    State final_state{};
};

CellRun run_cell(const MapParams& base, const SweepSpec& spec, const SweepOptions& opt, double pv,
                 const State& ic) {
    CellRun c;
    c.row.param = pv;
    const MapParams p = with_param(base, spec.param, pv);
    const Trajectory t = iterate(p, ic, spec.n_transient, spec.n_keep, spec.divergence_threshold);
    if (t.diverged) {
        c.row.diverged = true;
        return c;
    }
    c.row.x.reserve(t.states.size());
    for (const auto& s : t.states) c.row.x.push_back(s.x);
    c.row.branch_count = count_branches(c.row.x, opt.cluster_tol);
    c.final_state = t.states.back();
    if (opt.with_lyapunov) {
        try {
            c.row.max_lyapunov = lyapunov_spectrum(p, c.final_state, 0, opt.lyap_iter).exponents[0];
        } catch (const DivergedOrbit&) {
            c.row.diverged = true;
        }
    }
    return c;
}

}  // namespace

BifurcationData bifurcation_sweep(const MapParams& base, const SweepSpec& spec,
                                  const SweepOptions& opt) {
    spec.validate();
    const auto ord = spec.order();
    BifurcationData out;
    out.rows.resize(ord.size());
    if (spec.ic_policy == IcPolicy::fixed_ic) {
        parallel_for(ord.size(), opt.workers, [&](std::size_t j) {
            out.rows[j] = run_cell(base, spec, opt, spec.value(ord[j]), spec.ic).row;
        });
        return out;
    }
    State ic = spec.ic;
    for (std::size_t j = 0; j < ord.size(); ++j) {
        CellRun c = run_cell(base, spec, opt, spec.value(ord[j]), ic);
        // after a divergence the scan restarts from the configured ic
        ic = c.row.diverged ? spec.ic : c.final_state;
        out.rows[j] = std::move(c.row);
    }
    return out;
}

std::vector<LyapunovRow> lyapunov_sweep(const MapParams& base, const SweepSpec& spec, long n_iter,
                                        int workers) {
    spec.validate();
    const auto ord = spec.order();
    std::vector<LyapunovRow> rows(ord.size());
    auto one = [&](std::size_t j, const State& ic) -> std::optional<State> {
        const double pv = spec.value(ord[j]);
        rows[j].param = pv;
        try {
            const auto ls = lyapunov_spectrum(with_param(base, spec.param, pv), ic, spec.n_transient,
                                              n_iter, std::nullopt, spec.divergence_threshold);
            rows[j].exponents = ls.exponents;
            return ls.final_state;
        } catch (const DivergedOrbit&) {
            rows[j].diverged = true;
            const double nan = std::numeric_limits<double>::quiet_NaN();
            rows[j].exponents = {nan, nan, nan};
            return std::nullopt;
        }
    };
    if (spec.ic_policy == IcPolicy::fixed_ic) {
        parallel_for(ord.size(), workers, [&](std::size_t j) { one(j, spec.ic); });
    } else {
        State ic = spec.ic;
        for (std::size_t j = 0; j < ord.size(); ++j) ic = one(j, ic).value_or(spec.ic);
    }
    return rows;
}

std::vector<Sweep2dCell> sweep2d(const MapParams& base, const SweepSpec& su, const SweepSpec& sv,
                                 const Sweep2dConfig& cfg) {
    su.validate();
    sv.validate();
    const std::size_t nu = static_cast<std::size_t>(su.n_points);
    const std::size_t nv = static_cast<std::size_t>(sv.n_points);
    if (nu * nv > 2000u * 2000u) throw std::invalid_argument("sweep2d grid larger than 2000x2000");
    std::vector<Sweep2dCell> cells(nu * nv);
    parallel_for(cells.size(), cfg.workers, [&](std::size_t idx) {
        const std::size_t iu = idx % nu, iv = idx / nu;
        Sweep2dCell& c = cells[idx];
        c.u = su.value(static_cast<int>(iu));
        c.v = sv.value(static_cast<int>(iv));
        MapParams p = with_param(base, su.param, c.u);
        set_param(p, sv.param, c.v);
        const OrbitConfig& oc = cfg.orbit;
        const Trajectory t = iterate(p, cfg.ic, oc.n_transient, oc.n_keep, oc.divergence_threshold);
        if (t.diverged) {
            c.period_class = -1;
            c.lmax = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        c.period_class = detect_period(t, oc.tol, oc.max_period).value_or(0);
        try {
            c.lmax = lyapunov_spectrum(p, t.states.back(), 0, oc.lyap_iter, std::nullopt,
                                       oc.divergence_threshold)
                         .exponents[0];
        } catch (const DivergedOrbit&) {
            c.period_class = -1;
            c.lmax = std::numeric_limits<double>::quiet_NaN();
        }
    });
    return cells;
}

}  // namespace chialvo
