// run_config.cpp — Config parsing, defaulting and serialization

#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sqzcav/regime.hpp"

namespace sqz::cli {

namespace {

using json = nlohmann::json;

// Walks one JSON object, remembering consumed keys so leftovers can be rejected.
class Reader {
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object()) throw ConfigError(where() + ": expected an object");
    }

    template <typename T>
    void get(const char* key, T& out)
    {
        seen_.insert(key);
        const auto it = obj_.find(key);
        if (it == obj_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError(field(key) + ": wrong type");
        }
        check_finite(key, out);
    }

    void get_opt(const char* key, std::optional<double>& out)
    {
        seen_.insert(key);
        const auto it = obj_.find(key);
        if (it == obj_.end() || it->is_null()) return;
        if (!it->is_number()) throw ConfigError(field(key) + ": expected a number");
        out = it->get<double>();
        check_finite(key, *out);
    }

    std::optional<Reader> child(const char* key)
    {
        seen_.insert(key);
        const auto it = obj_.find(key);
        if (it == obj_.end()) return std::nullopt;
        return Reader(*it, field(key));
    }

    void finish() const
    {
        for (const auto& [key, _] : obj_.items()) {
            if (!seen_.count(key)) throw ConfigError(field(key.c_str()) + ": unknown key");
        }
    }

private:
    std::string where() const { return path_.empty() ? "<root>" : path_; }
    std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    template <typename T>
    void check_finite(const char* key, const T& v) const
    {
        if constexpr (std::is_floating_point_v<T>) {
            if (!std::isfinite(v)) throw ConfigError(field(key) + ": must be finite");
        }
    }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

std::string line_col(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace

SystemConfig RunConfig::system() const
{
    const auto& s = system_mhz;
    SystemConfig cfg;
    cfg.squeezing = {s.n, std::polar(s.m, s.m_arg)};
    cfg.cavity = {from_mhz(s.kappa), from_mhz(s.g), from_mhz(s.delta)};
    cfg.raman = {from_mhz(s.omega_r), from_mhz(s.delta_r), s.phi};
    cfg.aux = {from_mhz(s.omega_s.value_or(0.0)), from_mhz(s.delta_s.value_or(0.0))};
    cfg.decay = {from_mhz(s.gamma_r), from_mhz(s.gamma_s), s.b0, s.b1, s.spontaneous_in_t3};
    cfg.trunc.n_max = s.n_max;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("system: ") + e.what());
    }
    return cfg;
}

StepControls RunConfig::controls() const
{
    StepControls c;
    c.rtol = rtol;
    c.atol = atol;
    return c;
}

void RunConfig::resolve()
{
    const Tier t = tier_value();
    const bool four_level = t == Tier::T4F || t == Tier::T4I || t == Tier::T4R;
    if (!four_level || system_mhz.omega_s.has_value()) return;
    SystemMhz bare = system_mhz;
    bare.omega_s = 0.0;
    bare.delta_s = 0.0;
    RunConfig tmp = *this;
    tmp.system_mhz = bare;
    const SystemConfig balanced = balance_alpha(tmp.system());
    system_mhz.omega_s = to_mhz(balanced.aux.omega_s);
    system_mhz.delta_s = to_mhz(balanced.aux.delta_s);
}

RunConfig parse_config(const std::string& text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("parse error at " + line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
    }

    RunConfig rc;
    Reader r(root, "");
    r.get("schema_version", rc.schema_version);
    if (rc.schema_version != kSchemaVersion) {
        throw ConfigError("schema_version: expected " + std::to_string(kSchemaVersion) + ", got " +
                          std::to_string(rc.schema_version));
    }
    r.get("tier", rc.tier);
    try {
        parse_tier(rc.tier);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("tier: ") + e.what());
    }
    r.get("rtol", rc.rtol);
    r.get("atol", rc.atol);
    r.get("regime_threshold", rc.regime_threshold);
    if (!(rc.rtol > 0.0) || !(rc.atol > 0.0)) throw ConfigError("rtol/atol: must be > 0");
    if (!(rc.regime_threshold > 0.0)) throw ConfigError("regime_threshold: must be > 0");

    if (auto s = r.child("system")) {
        auto& m = rc.system_mhz;
        if (auto q = s->child("squeezing")) {
            q->get("N", m.n);
            q->get("M", m.m);
            q->get("M_arg", m.m_arg);
            q->finish();
        }
        if (auto c = s->child("cavity")) {
            c->get("kappa_MHz", m.kappa);
            c->get("g_MHz", m.g);
            c->get("delta_MHz", m.delta);
            c->finish();
        }
        if (auto c = s->child("raman")) {
            c->get("omega_r_MHz", m.omega_r);
            c->get("delta_r_MHz", m.delta_r);
            c->get("phi", m.phi);
            c->finish();
        }
        if (auto c = s->child("aux")) {
            c->get_opt("omega_s_MHz", m.omega_s);
            c->get_opt("delta_s_MHz", m.delta_s);
            c->finish();
            if (m.omega_s.has_value() != m.delta_s.has_value()) {
                throw ConfigError("system.aux: give both omega_s_MHz and delta_s_MHz, or neither");
            }
        }
        if (auto c = s->child("decay")) {
            c->get("gamma_r_MHz", m.gamma_r);
            c->get("gamma_s_MHz", m.gamma_s);
            c->get("b0", m.b0);
            c->get("b1", m.b1);
            c->get("spontaneous_in_t3", m.spontaneous_in_t3);
            c->finish();
        }
        s->get("n_max", m.n_max);
        s->finish();
    }
    if (auto p = r.child("probe")) {
        auto& q = rc.probe;
        p->get("mode", q.mode);
        p->get("amplitude_MHz", q.amplitude);
        p->get("e_plus_re_MHz", q.e_plus_re);
        p->get("e_plus_im_MHz", q.e_plus_im);
        p->get("e_minus_re_MHz", q.e_minus_re);
        p->get("e_minus_im_MHz", q.e_minus_im);
        p->get("nu_min_MHz", q.nu_min);
        p->get("nu_max_MHz", q.nu_max);
        p->get("nu_points", q.nu_points);
        p->finish();
        try {
            parse_probe_mode(q.mode);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("probe.mode: ") + e.what());
        }
        if (q.nu_points < 2 || !(q.nu_max > q.nu_min)) throw ConfigError("probe: need nu_points >= 2, nu_max > nu_min");
    }
    if (auto b = r.child("bloch")) {
        b->get("t_final_us", rc.bloch.t_final_us);
        b->get("samples", rc.bloch.samples);
        b->finish();
        if (rc.bloch.samples < 20) throw ConfigError("bloch.samples: need at least 20");
    }
    if (auto c = r.child("compare")) {
        c->get("tier_a", rc.compare.tier_a);
        c->get("tier_b", rc.compare.tier_b);
        c->get("t_final_us", rc.compare.t_final_us);
        c->get("samples", rc.compare.samples);
        c->finish();
        for (const auto* t : {&rc.compare.tier_a, &rc.compare.tier_b}) {
            try {
                parse_tier(*t);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("compare: ") + e.what());
            }
        }
        if (rc.compare.samples < 2) throw ConfigError("compare.samples: need at least 2");
    }
    if (auto n = r.child("nogo")) {
        n->get("n_points", rc.nogo.n_points);
        n->get("m_points", rc.nogo.m_points);
        n->get("n_min", rc.nogo.n_lo);
        n->get("n_max", rc.nogo.n_hi);
        n->finish();
        if (rc.nogo.n_points < 2 || rc.nogo.m_points < 2) throw ConfigError("nogo: need at least 2 points per axis");
        if (!(rc.nogo.n_lo > 0.0) || !(rc.nogo.n_hi >= rc.nogo.n_lo) || rc.nogo.n_hi > 10.0) {
            throw ConfigError("nogo: need 0 < n_min <= n_max <= 10");
        }
    }
    r.finish();
    rc.system();  // surfaces physics-invariant violations as ConfigError
    return rc;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

ordered_json RunConfig::to_json() const
{
    const auto& m = system_mhz;
    ordered_json aux = ordered_json::object();
    if (m.omega_s) {
        aux["omega_s_MHz"] = *m.omega_s;
        aux["delta_s_MHz"] = *m.delta_s;
    }
    return {
        {"schema_version", schema_version},
        {"tier", tier},
        {"system",
         {
             {"squeezing", {{"N", m.n}, {"M", m.m}, {"M_arg", m.m_arg}}},
             {"cavity", {{"kappa_MHz", m.kappa}, {"g_MHz", m.g}, {"delta_MHz", m.delta}}},
             {"raman", {{"omega_r_MHz", m.omega_r}, {"delta_r_MHz", m.delta_r}, {"phi", m.phi}}},
             {"aux", aux},
             {"decay",
              {{"gamma_r_MHz", m.gamma_r},
               {"gamma_s_MHz", m.gamma_s},
               {"b0", m.b0},
               {"b1", m.b1},
               {"spontaneous_in_t3", m.spontaneous_in_t3}}},
             {"n_max", m.n_max},
         }},
        {"probe",
         {{"mode", probe.mode},
          {"amplitude_MHz", probe.amplitude},
          {"e_plus_re_MHz", probe.e_plus_re},
          {"e_plus_im_MHz", probe.e_plus_im},
          {"e_minus_re_MHz", probe.e_minus_re},
          {"e_minus_im_MHz", probe.e_minus_im},
          {"nu_min_MHz", probe.nu_min},
          {"nu_max_MHz", probe.nu_max},
          {"nu_points", probe.nu_points}}},
        {"bloch", {{"t_final_us", bloch.t_final_us}, {"samples", bloch.samples}}},
        {"compare",
         {{"tier_a", compare.tier_a},
          {"tier_b", compare.tier_b},
          {"t_final_us", compare.t_final_us},
          {"samples", compare.samples}}},
        {"nogo", {{"n_points", nogo.n_points}, {"m_points", nogo.m_points}, {"n_min", nogo.n_lo}, {"n_max", nogo.n_hi}}},
        {"rtol", rtol},
        {"atol", atol},
        {"regime_threshold", regime_threshold},
    };
}

} // namespace sqz::cli
