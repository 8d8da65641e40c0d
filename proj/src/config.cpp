// config.cpp — Parameter invariants

#include "sqzcav/config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sqz {

bool SqueezingParams::is_ideal() const
{
    return std::abs(std::abs(m_corr) - std::sqrt(n_photons * (n_photons + 1.0))) <= 1e-9;
}

void SqueezingParams::validate() const
{
    if (!(n_photons >= 0.0) || !std::isfinite(n_photons)) {
        throw std::invalid_argument("squeezing: N must be finite and >= 0");
    }
    const double bound = std::sqrt(n_photons * (n_photons + 1.0));
    if (std::abs(m_corr) > bound + 1e-12) {
        throw std::invalid_argument("squeezing: |M| = " + std::to_string(std::abs(m_corr)) +
                                    " exceeds sqrt(N(N+1)) = " + std::to_string(bound));
    }
}

SqueezingParams SqueezingParams::ideal(double n)
{
    return {n, cplx(std::sqrt(n * (n + 1.0)), 0.0)};
}

void SystemConfig::validate() const
{
    squeezing.validate();
    if (!(cavity.kappa > 0.0)) throw std::invalid_argument("cavity: kappa must be > 0");
    if (raman.delta_r == 0.0) throw std::invalid_argument("raman: Delta_r must be nonzero");
    if (aux.omega_s != 0.0 && aux.delta_s == 0.0) {
        throw std::invalid_argument("aux: Delta_s must be nonzero when Omega_s is nonzero");
    }
    if (decay.gamma_r < 0.0 || decay.gamma_s < 0.0) throw std::invalid_argument("decay: rates must be >= 0");
    if (std::abs(decay.b0 * decay.b0 + decay.b1 * decay.b1 - 1.0) > 1e-12) {
        throw std::invalid_argument("decay: branching amplitudes must satisfy b0^2 + b1^2 = 1");
    }
    if (trunc.n_max < 1) throw std::invalid_argument("truncation: n_max must be >= 1");
}

SystemConfig figure_config(const SqueezingParams& sq)
{
    SystemConfig cfg;
    cfg.squeezing = sq;
    cfg.cavity = {from_mhz(4.2), from_mhz(24.0), 0.0};
    cfg.raman.omega_r = cfg.cavity.g / 0.1;
    cfg.raman.delta_r = cfg.raman.omega_r / 0.05;
    cfg.decay.gamma_r = from_mhz(5.2);
    return cfg;
}

} // namespace sqz
