#include "chialvo/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace chialvo {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::optional<double> parse_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf" || s == "+inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    const char* b = s.data();
    const char* e = b + s.size();
    if (b != e && *b == '+') ++b;
    double v = 0.0;
    const auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e || b == e) return std::nullopt;
    return v;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
std::optional<T> parse_int(const std::string& s) {
    T v{};
    const char* b = s.data();
    const char* e = b + s.size();
    if (b != e && *b == '+') ++b;
    const auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e || b == e) return std::nullopt;
    return v;
}

}  // namespace

const KeySpec& RunConfig::spec(const std::string& key, int line) const {
    for (const auto& k : *schema_)
        if (k.name == key) return k;
    throw ConfigError("unknown key '" + key + "'", line);
}

void RunConfig::set(const std::string& key, const std::string& value, int line) {
    const KeySpec& ks = spec(key, line);
    const std::string v = trim(value);
    auto bad = [&](const std::string& what) {
        return ConfigError("malformed value '" + v + "' for '" + key + "' (expected " + what + ")", line);
    };
    std::string canon;
    switch (ks.type) {
        case ValueType::real: {
            auto d = parse_double(v);
            if (!d) throw bad("a real number");
            canon = format_double(*d);
            break;
        }
        case ValueType::integer: {
            auto i = parse_int<long>(v);
            if (!i) throw bad("an integer");
            canon = std::to_string(*i);
            break;
        }
        case ValueType::uint64: {
            auto i = parse_int<std::uint64_t>(v);
            if (!i) throw bad("an unsigned 64-bit integer");
            canon = std::to_string(*i);
            break;
        }
        case ValueType::boolean:
            if (v == "true" || v == "1" || v == "yes") canon = "true";
            else if (v == "false" || v == "0" || v == "no") canon = "false";
            else throw bad("true or false");
            break;
        case ValueType::text:
            if (v.empty()) throw bad("a non-empty word");
            if (!ks.choices.empty() && std::find(ks.choices.begin(), ks.choices.end(), v) == ks.choices.end()) {
                std::string list;
                for (const auto& c : ks.choices) list += (list.empty() ? "" : "|") + c;
                throw bad(list);
            }
            canon = v;
            break;
    }
    values_[key] = canon;
    defaulted_.erase(std::remove(defaulted_.begin(), defaulted_.end(), key), defaulted_.end());
}

void RunConfig::apply_defaults() {
    for (const auto& ks : *schema_) {
        if (values_.count(ks.name)) continue;
        if (!ks.default_value) throw ConfigError("missing required key '" + ks.name + "'", 0);
        set(ks.name, *ks.default_value);
        defaulted_.push_back(ks.name);
    }
}

namespace {
const std::string& lookup(const std::map<std::string, std::string>& m, const std::string& key) {
    auto it = m.find(key);
    if (it == m.end()) throw ConfigError("key '" + key + "' has no value", 0);
    return it->second;
}
}  // namespace

double RunConfig::real(const std::string& key) const { return *parse_double(lookup(values_, key)); }
long RunConfig::integer(const std::string& key) const { return std::stol(lookup(values_, key)); }
std::uint64_t RunConfig::u64(const std::string& key) const { return std::stoull(lookup(values_, key)); }
bool RunConfig::flag(const std::string& key) const { return lookup(values_, key) == "true"; }
const std::string& RunConfig::text(const std::string& key) const { return lookup(values_, key); }

RunConfig parse_config(const std::string& text, const Schema& schema, bool defaults) {
    RunConfig cfg(&schema);
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
        const std::string key = trim(body.substr(0, eq));
        if (key.empty()) throw ConfigError("missing key before '='", line);
        cfg.set(key, body.substr(eq + 1), line);
    }
    if (defaults) cfg.apply_defaults();
    return cfg;
}

std::string emit_config(const RunConfig& cfg) {
    std::string out;
    for (const auto& ks : cfg.schema()) {
        auto it = cfg.values().find(ks.name);
        if (it == cfg.values().end()) continue;
        out += ks.name + " = " + it->second + "\n";
    }
    return out;
}

namespace {

KeySpec R(const std::string& n, const std::string& d) { return {n, ValueType::real, d, {}}; }
KeySpec I(const std::string& n, const std::string& d) { return {n, ValueType::integer, d, {}}; }
KeySpec T(const std::string& n, const std::string& d, std::vector<std::string> ch) {
    return {n, ValueType::text, d, std::move(ch)};
}

}  // namespace

const Schema& default_schema() {
    static const Schema s = [] {
        const std::vector<std::string> pnames{"a", "b", "c", "k0", "k", "alpha", "beta", "k1", "k2"};
        Schema v{
            // map
            R("a", "0.5"), R("b", "0.4"), R("c", "0.89"), R("k0", "-0.44"), R("k", "0"),
            R("alpha", "0.1"), R("beta", "0.1"), R("k1", "0.1"), R("k2", "0.2"),
            {"seed", ValueType::uint64, std::string("1"), {}},
            // fixed points
            R("fp_x_min", "-5"), R("fp_x_max", "15"), I("fp_grid_n", "20001"), R("fp_tol", "1e-10"),
            T("fp_denominator", "consistent", {"consistent", "printed"}),
            T("fp_param", "k", pnames), R("fp_start", "0"), R("fp_stop", "0"), I("fp_n_points", "1"),
            // orbits
            R("x0", "0.1"), R("y0", "0.1"), R("phi0", "0"),
            I("n_transient", "10000"), I("n_keep", "1000"), R("tol", "1e-6"), I("max_period", "64"),
            R("divergence_threshold", "1e6"), I("lyap_iter", "100000"),
            // 1D sweeps
            T("param", "k", pnames), R("start", "-8"), R("stop", "2"), I("n_points", "201"),
            T("direction", "forward", {"forward", "backward"}),
            T("ic_policy", "inherit-final", {"inherit-final", "fixed-ic"}), I("sweep_keep", "100"),
            // 2D sweeps
            T("u_param", "k", pnames), R("u_start", "-2"), R("u_stop", "-1"), I("u_n", "21"),
            T("v_param", "c", pnames), R("v_start", "0.8"), R("v_stop", "0.9"), I("v_n", "21"),
            // continuation
            T("free_param", "k", pnames), I("cont_root", "0"), I("cont_direction", "1"),
            R("step0", "1e-3"), R("step_min", "1e-8"), R("step_max", "0.1"), I("n_max", "2000"),
            R("p_min", "-inf"), R("p_max", "inf"), R("ns_band", "0.05"),
            // critical sets
            I("lc_dim", "2"), R("win_x_min", "-2"), R("win_x_max", "12"), R("win_y_min", "-4"),
            R("win_y_max", "4"), R("win_phi_min", "-1"), R("win_phi_max", "1"), I("lc_nx", "281"),
            I("lc_ny", "161"), I("lc_nphi", "21"), I("lc_images", "1"),
            // preimages
            I("pre_dim", "2"), R("tgt_x0", "0"), R("tgt_y0", "0.89"), R("tgt_phi0", "0"),
            R("tgt_x1", "20"), R("tgt_y1", "0.89"), R("tgt_phi1", "0"), I("tgt_n", "1"),
            R("pre_x_min", "-10"), R("pre_x_max", "20"), I("pre_grid_n", "40001"),
            // basins
            R("basin_x_min", "-1"), R("basin_x_max", "3"), R("basin_y_min", "-1"), R("basin_y_max", "3"),
            I("basin_nx", "1000"), I("basin_ny", "1000"), R("basin_phi0", "0"), I("basin_max_iter", "50000"),
            R("match_tol", "1e-4"), I("basin_lyap_iter", "20000"),
            // network
            I("N", "100"), I("R", "10"), R("sigma", "0"), R("mu", "0"),
            {"hub_in_ring", ValueType::boolean, std::string("true"), {}},
            I("net_transient", "20000"), I("net_record", "1000"), I("net_stride", "1"),
            R("eps", "0.01"), I("window_w", "5"), I("min_run", "5"), R("sync_threshold", "0.1687"),
            R("coherent_sd", "0.01"), I("max_clusters", "5"), R("cluster_sd", "0.01"),
            // X-k scan
            R("xk_k_min", "-3"), R("xk_k_max", "3.5"), I("xk_n", "66"),
            T("seed_policy", "per-k", {"per-k", "same"}),
        };
        return v;
    }();
    return s;
}

}  // namespace chialvo
