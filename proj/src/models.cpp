// models.cpp — Tier builders

#include "sqzcav/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "sqzcav/correlators.hpp"
#include "sqzcav/regime.hpp"
#include "sqzcav/steady_state.hpp"

namespace sqz {

namespace {

// Operators on atom(levels) ⊗ Fock(fock_dim).
struct Space {
    Layout layout;

    Matrix level(Index i, Index j) const
    {
        return ops::kron(ops::projector(layout.atom_levels, i, j), ops::identity(layout.fock_dim));
    }
    Matrix a() const
    {
        return ops::kron(ops::identity(layout.atom_levels),
                         ops::annihilation(FockTruncation{static_cast<int>(layout.fock_dim) - 1}));
    }
};

Matrix embed_ground(const Matrix& op2, const Layout& layout)
{
    Matrix atom = Matrix::Zero(layout.atom_levels, layout.atom_levels);
    atom.topLeftCorner(2, 2) = op2;
    return ops::kron(atom, ops::identity(layout.fock_dim));
}

void add_spontaneous(std::vector<DissipatorChannel>& ch, const Space& sp, const AtomDecay& d)
{
    if (d.gamma_r == 0.0) return;
    const double half = 0.5 * d.gamma_r;
    ch.push_back({half * d.b0 * d.b0, sp.level(0, 2), sp.level(2, 0), 0.0});
    ch.push_back({half * d.b1 * d.b1, sp.level(1, 2), sp.level(2, 1), 0.0});
}

// Laser-frame Λ-scheme Hamiltonian shared by T3F and T4F.
Matrix raman_hamiltonian(const Space& sp, const SystemConfig& cfg, double phi)
{
    const Matrix a = sp.a();
    const cplx ph = std::exp(-kI * phi);
    Matrix h = -cfg.raman.delta_r * sp.level(2, 2) - cfg.cavity.delta * (a.adjoint() * a);
    h += 0.5 * cfg.raman.omega_r * (ph * sp.level(2, 1) + std::conj(ph) * sp.level(1, 2));
    const Matrix rg = sp.level(2, 0) * a;
    h += cfg.cavity.g * (rg + rg.adjoint());
    return h;
}

// Ground levels ⊗ cavity with the dispersive coupling η σ⁻σ⁺ a†a.
Matrix effective_hamiltonian(const Space& sp, const SystemConfig& cfg, double phi)
{
    const auto d = derived_params(cfg, Family::T3);
    const Matrix a = sp.a();
    const Matrix n = a.adjoint() * a;
    const Matrix p0 = sp.level(0, 0);
    const Matrix coupling = std::exp(kI * phi) * sp.level(1, 0) * a;
    Matrix h = (cfg.raman.omega_r * cfg.raman.omega_r / (4.0 * cfg.raman.delta_r)) * sp.level(1, 1);
    h -= cfg.cavity.delta * n;
    h += d.beta * (coupling + coupling.adjoint());
    h += d.eta * (p0 * n);
    return h;
}

void require_valid(const SystemConfig& cfg) { cfg.validate(); }

void require_resonant(const SystemConfig& cfg, const char* who)
{
    if (cfg.cavity.delta != 0.0) {
        throw std::invalid_argument(std::string(who) + ": 4-level tiers require delta = 0");
    }
}

Layout cavity_layout(Index levels, const SystemConfig& cfg) { return {levels, cfg.trunc.dim()}; }

} // namespace

std::string to_string(Tier t)
{
    switch (t) {
    case Tier::T0: return "T0";
    case Tier::T3F: return "T3F";
    case Tier::T3E: return "T3E";
    case Tier::T3R: return "T3R";
    case Tier::T4F: return "T4F";
    case Tier::T4I: return "T4I";
    case Tier::T4R: return "T4R";
    }
    return "?";
}

Tier parse_tier(const std::string& name)
{
    std::string u = name;
    std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::toupper(c); });
    for (Tier t : {Tier::T0, Tier::T3F, Tier::T3E, Tier::T3R, Tier::T4F, Tier::T4I, Tier::T4R}) {
        if (to_string(t) == u) return t;
    }
    throw std::invalid_argument("unknown tier '" + name + "' (expected T0|T3F|T3E|T3R|T4F|T4I|T4R)");
}

Matrix Model::ground_block(const Matrix& rho, double t) const
{
    const Matrix atom = layout.fock_dim > 1 ? reduce_atom(rho, layout) : rho;
    Matrix g = atom_block(atom, {0, 1});
    if (ground_frame_freq != 0.0) {
        const cplx ph = std::exp(kI * ground_frame_freq * t);
        g(0, 1) *= ph;
        g(1, 0) *= std::conj(ph);
    }
    return g;
}

Matrix Model::cavity_a() const
{
    if (layout.fock_dim < 2) throw std::invalid_argument(to_string(tier) + " has no cavity mode");
    return Space{layout}.a();
}

Matrix Model::ground_op(const Matrix& op2) const { return embed_ground(op2, layout); }

DensityMatrix Model::product_state(const Matrix& rho_ground, const Matrix& rho_cavity) const
{
    if (rho_ground.rows() != 2 || rho_cavity.rows() != layout.fock_dim) {
        throw std::invalid_argument("product_state: dimension mismatch");
    }
    Matrix atom = Matrix::Zero(layout.atom_levels, layout.atom_levels);
    atom.topLeftCorner(2, 2) = rho_ground;
    return DensityMatrix(ops::kron(atom, rho_cavity));
}

Liouvillian build_T0(double gamma, const SqueezingParams& sq)
{
    if (!(gamma > 0.0)) throw std::invalid_argument("build_T0: gamma must be > 0");
    sq.validate();
    const Matrix sp = ops::sigma_plus();
    const Matrix sm = ops::sigma_minus();
    const double n = sq.n_photons;
    const cplx m = sq.m_corr;
    std::vector<DissipatorChannel> ch{
        {0.5 * gamma * (n + 1.0), sm, sp, 0.0},
        {0.5 * gamma * n, sp, sm, 0.0},
    };
    if (m != 0.0) {
        ch.push_back({-0.5 * gamma * m, sp, sp, 0.0});
        ch.push_back({-0.5 * gamma * std::conj(m), sm, sm, 0.0});
    }
    return Liouvillian(Matrix::Zero(2, 2), {}, std::move(ch));
}

std::vector<DissipatorChannel> cavity_bath_channels(const Matrix& a, double kappa, double n, cplx m)
{
    const Matrix ad = a.adjoint();
    std::vector<DissipatorChannel> ch{
        {kappa * (1.0 + n), a, ad, 0.0},
        {kappa * n, ad, a, 0.0},
    };
    if (m != 0.0) {
        ch.push_back({kappa * m, ad, ad, 0.0});
        ch.push_back({kappa * std::conj(m), a, a, 0.0});
    }
    return ch;
}

Model build_T3F(const SystemConfig& cfg)
{
    require_valid(cfg);
    const Space sp{cavity_layout(3, cfg)};
    auto ch = cavity_bath_channels(sp.a(), cfg.cavity.kappa, cfg.squeezing.n_photons, cfg.squeezing.m_corr);
    if (cfg.decay.spontaneous_in_t3) add_spontaneous(ch, sp, cfg.decay);
    return {Tier::T3F, Liouvillian(raman_hamiltonian(sp, cfg, cfg.raman.phi), {}, std::move(ch)), sp.layout};
}

Model build_T3E(const SystemConfig& cfg)
{
    require_valid(cfg);
    const Space sp{cavity_layout(2, cfg)};
    auto ch = cavity_bath_channels(sp.a(), cfg.cavity.kappa, cfg.squeezing.n_photons, cfg.squeezing.m_corr);
    return {Tier::T3E, Liouvillian(effective_hamiltonian(sp, cfg, cfg.raman.phi), {}, std::move(ch)), sp.layout};
}

Model build_T3R(const SystemConfig& cfg)
{
    require_valid(cfg);
    const auto d = derived_params(cfg, Family::T3);
    const double kappa = cfg.cavity.kappa;
    const double delta = cfg.cavity.delta;
    // A balanced configuration leaves only rounding in alpha; snapping it keeps the generator static.
    const double al = alpha_balanced(cfg, Family::T3) ? 0.0 : d.alpha;
    const double n = cfg.squeezing.n_photons;
    const cplx m = cfg.squeezing.m_corr;
    const double b2 = d.beta * d.beta;

    const Matrix sp = ops::sigma_plus();
    const Matrix sm = ops::sigma_minus();
    const Matrix p1 = sp * sm;
    const Matrix p0 = sm * sp;

    // Complex weights split into a dissipator (real part) and a level shift (imaginary part).
    const cplx w_down = b2 * (n + 1.0) / cplx(kappa, -(al + delta));
    const cplx w_up = b2 * n / cplx(kappa, al + delta);
    Matrix h = w_down.imag() * p1 + w_up.imag() * p0;

    std::vector<DissipatorChannel> ch{
        {w_down.real(), sm, sp, 0.0},
        {w_up.real(), sp, sm, 0.0},
    };
    if (m != 0.0) {
        const cplx w_anom = b2 * (-kappa * m / cplx(kappa, -delta)) * std::exp(2.0 * kI * cfg.raman.phi) /
                            cplx(kappa, al - delta);
        ch.push_back({w_anom, sp, sp, 2.0 * al});
        ch.push_back({std::conj(w_anom), sm, sm, -2.0 * al});
    }
    const double dephase =
        d.eta * d.eta / (2.0 * kappa) *
        (n * (n + 1.0) + kappa * kappa * std::norm(m) / (kappa * kappa + delta * delta));
    ch.push_back({dephase, p0, p0, 0.0});

    Model model{Tier::T3R, Liouvillian(h, {}, std::move(ch)), Layout{2, 1}};
    model.ground_frame_freq = al;
    return model;
}

Model build_T4F(const SystemConfig& cfg)
{
    require_valid(cfg);
    require_resonant(cfg, "build_T4F");
    const Space sp{cavity_layout(4, cfg)};
    Matrix h = raman_hamiltonian(sp, cfg, kT4CouplingPhase);
    h -= cfg.aux.delta_s * sp.level(3, 3);
    h += 0.5 * cfg.aux.omega_s * (sp.level(3, 0) + sp.level(0, 3));

    auto ch = cavity_bath_channels(sp.a(), cfg.cavity.kappa, cfg.squeezing.n_photons, -cfg.squeezing.m_corr);
    add_spontaneous(ch, sp, cfg.decay);
    if (cfg.decay.gamma_s > 0.0) ch.push_back({0.5 * cfg.decay.gamma_s, sp.level(0, 3), sp.level(3, 0), 0.0});
    return {Tier::T4F, Liouvillian(h, {}, std::move(ch)), sp.layout};
}

Model build_T4I(const SystemConfig& cfg)
{
    require_valid(cfg);
    require_resonant(cfg, "build_T4I");
    const Space sp{cavity_layout(2, cfg)};
    // (g²N/Δ_r)σ⁻σ⁺ + (g²/Δ_r)(a†a − N)σ⁻σ⁺ collapses to the η a†a σ⁻σ⁺ of the T3E form.
    Matrix h = effective_hamiltonian(sp, cfg, kT4CouplingPhase);
    if (cfg.aux.omega_s != 0.0) {
        h += (cfg.aux.omega_s * cfg.aux.omega_s / (4.0 * cfg.aux.delta_s)) * sp.level(0, 0);
    }

    auto ch = cavity_bath_channels(sp.a(), cfg.cavity.kappa, cfg.squeezing.n_photons, -cfg.squeezing.m_corr);
    const double s = cfg.decay.gamma_r * cfg.raman.omega_r * cfg.raman.omega_r /
                     (8.0 * cfg.raman.delta_r * cfg.raman.delta_r);
    if (s > 0.0) {
        ch.push_back({cfg.decay.b0 * cfg.decay.b0 * s, sp.level(0, 1), sp.level(1, 0), 0.0});
        ch.push_back({cfg.decay.b1 * cfg.decay.b1 * s, sp.level(1, 1), sp.level(1, 1), 0.0});
    }

    Model model{Tier::T4I, Liouvillian(h, {}, std::move(ch)), sp.layout};
    if (cfg.cavity.g * std::sqrt(cfg.squeezing.n_photons) > std::abs(cfg.raman.omega_r) / 3.0) {
        model.warnings.push_back("g*sqrt(N) exceeds Omega_r/3; atomic elimination is marginal");
    }
    return model;
}

Model build_T4R(const SystemConfig& cfg, const T4ROptions& opts)
{
    require_valid(cfg);
    require_resonant(cfg, "build_T4R");
    const bool balanced = alpha_balanced(cfg, Family::T4);
    if (!balanced && !opts.allow_unbalanced) {
        throw std::invalid_argument("build_T4R: alpha = " + std::to_string(alpha(cfg, Family::T4)) +
                                    " rad/us; the reduced equation requires alpha = 0 (see solve_aux_drive)");
    }
    const auto d = derived_params(cfg, Family::T4);
    const double k = d.beta * d.beta / cfg.cavity.kappa;
    const double n = cfg.squeezing.n_photons;
    const cplx m = cfg.squeezing.m_corr;
    const double s = cfg.decay.gamma_r * cfg.raman.omega_r * cfg.raman.omega_r /
                     (8.0 * cfg.raman.delta_r * cfg.raman.delta_r);
    // k·b²/(2C) = b²·s avoids 0·∞ when g = 0 or γ_r = 0.
    const double dephase = d.eta * d.eta / (2.0 * cfg.cavity.kappa) * (n * (n + 1.0) + std::norm(m)) +
                           cfg.decay.b1 * cfg.decay.b1 * s;

    const Matrix sp = ops::sigma_plus();
    const Matrix sm = ops::sigma_minus();
    const Matrix p1 = sp * sm;
    std::vector<DissipatorChannel> ch{
        {k * (n + 1.0) + cfg.decay.b0 * cfg.decay.b0 * s, sm, sp, 0.0},
        {k * n, sp, sm, 0.0},
        {dephase, p1, p1, 0.0},
    };
    if (m != 0.0) {
        ch.push_back({-k * m, sp, sp, 0.0});
        ch.push_back({-k * std::conj(m), sm, sm, 0.0});
    }
    Model model{Tier::T4R, Liouvillian(Matrix::Zero(2, 2), {}, std::move(ch)), Layout{2, 1}};
    if (!balanced) model.warnings.push_back("alpha != 0: reduced equation used outside its derivation");
    return model;
}

Model build_model(Tier tier, const SystemConfig& cfg)
{
    switch (tier) {
    case Tier::T0: return {Tier::T0, build_T0(cfg.decay.gamma_r, cfg.squeezing), Layout{2, 1}};
    case Tier::T3F: return build_T3F(cfg);
    case Tier::T3E: return build_T3E(cfg);
    case Tier::T3R: return build_T3R(cfg);
    case Tier::T4F: return build_T4F(cfg);
    case Tier::T4I: return build_T4I(cfg);
    case Tier::T4R: return build_T4R(cfg);
    }
    throw std::invalid_argument("build_model: unknown tier");
}

Matrix cavity_bath_state(Tier tier, const SystemConfig& cfg)
{
    const bool four = tier == Tier::T4F || tier == Tier::T4I || tier == Tier::T4R;
    const cplx m = four ? -cfg.squeezing.m_corr : cfg.squeezing.m_corr;
    const Matrix a = ops::annihilation(cfg.trunc);
    const Index d = cfg.trunc.dim();
    const Liouvillian gen(Matrix::Zero(d, d), {}, cavity_bath_channels(a, cfg.cavity.kappa, cfg.squeezing.n_photons, m));
    SteadyStateOptions opts;
    opts.direct_max_dim = std::max<Index>(opts.direct_max_dim, d);
    return steady_state(gen, opts).state.op();
}

DensityMatrix initial_state(const Model& model, const SystemConfig& cfg, const BlochVector& bloch)
{
    if (bloch.sx * bloch.sx + bloch.sy * bloch.sy + bloch.sz * bloch.sz > 1.0 + 1e-12) {
        throw std::invalid_argument("initial_state: Bloch vector outside the unit ball");
    }
    const Matrix g = 0.5 * (ops::identity(2) + bloch.sx * ops::sigma_x() + bloch.sy * ops::sigma_y() +
                            bloch.sz * ops::sigma_z());
    if (model.layout.fock_dim == 1) {
        Matrix atom = Matrix::Zero(model.layout.atom_levels, model.layout.atom_levels);
        atom.topLeftCorner(2, 2) = g;
        return DensityMatrix(atom);
    }
    return model.product_state(g, cavity_bath_state(model.tier, cfg));
}

int recommend_truncation(const SqueezingParams& sq, double threshold, int n_cap)
{
    sq.validate();
    for (int n = 3; n <= n_cap; ++n) {
        const Matrix a = ops::annihilation(FockTruncation{n});
        const Liouvillian gen(Matrix::Zero(n + 1, n + 1), {}, cavity_bath_channels(a, 1.0, sq.n_photons, sq.m_corr));
        SteadyStateOptions opts;
        opts.direct_max_dim = n_cap + 1;
        const auto ss = steady_state(gen, opts);
        if (check_truncation(ss.state, Layout{1, n + 1}, threshold).pass) return n;
    }
    throw std::invalid_argument("recommend_truncation: no n_max <= " + std::to_string(n_cap) + " passes");
}

} // namespace sqz
