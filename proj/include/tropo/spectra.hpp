#pragma once

#include "tropo/model.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>

namespace tropo::spectra {

/// The eight intracavity spectral densities at one angular frequency.
/// Amplitude entries carry photon-number^2 * time, phase entries carry time.
struct SpectralSet {
    double omega = 0.0;
    double eps_plus_sq = 0.0;
    double eps_p_sq = 0.0;
    double eps_p_plus = 0.0;
    double eps_minus_sq = 0.0;
    double phi_p_sq = 0.0;
    double phi_plus_sq = 0.0;
    double phi_p_plus = 0.0;
    double phi_minus_sq = 0.0;

    static constexpr std::size_t field_count = 8;
    std::array<double, field_count> values() const;
};

const char* field_name(std::size_t index);

SpectralSet closed_form(const model::TropoParams& p, const model::SteadyState& s, double omega);

enum class BlockId { AmplitudePumpSum, AmplitudeDiff, PhasePumpSum, PhaseDiff };

/// dx/dt = A x + f(t) with <f_i(t) f_j(t')> = D_ij delta(t - t').
/// D may be indefinite: the Glauber-representation noise is nonclassical.
struct LinearNoiseSystem {
    BlockId id = BlockId::AmplitudePumpSum;
    Eigen::MatrixXd drift;
    Eigen::MatrixXd diffusion;
};

std::array<LinearNoiseSystem, 4> build_blocks(const model::TropoParams& p, const model::SteadyState& s);

/// Throws UnstableSystem unless every drift eigenvalue has negative real part.
void check_stable(const LinearNoiseSystem& block);

/// Symmetrized spectral matrix Re[(i w - A)^-1 D (i w - A)^-H].
Eigen::MatrixXd oracle_spectrum(const LinearNoiseSystem& block, double omega);

/// All eight densities recomputed from the blocks.
SpectralSet oracle_set(const model::TropoParams& p, const model::SteadyState& s, double omega);

namespace testing {
/// closed_form with one density scaled by (1 + rel). Used to prove the oracle
/// comparison actually notices small coefficient errors.
SpectralSet closed_form_perturbed(const model::TropoParams& p, const model::SteadyState& s,
                                  double omega, std::size_t field, double rel);
} // namespace testing

} // namespace tropo::spectra
