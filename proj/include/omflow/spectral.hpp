#pragma once

// =============================================================================
// omflow - frequency-domain response
// =============================================================================
// With the Fourier convention  (-i omega I - M) v = sqrt(Gamma) v_in  the
// transfer matrix is
//
//     U(omega) = (-M - i omega I)^{-1} sqrt(Gamma),
//
// column l being the response of every mode to input channel l, and the
// transmission T = |U|^2.  Passivity makes every integrated transmission row
// over the mechanical modes sum to one, which is what turns T into a noise
// bookkeeping device: the symmetrized displacement spectrum of mechanical
// mode k is  s_k(omega) = sum_l T_{k,l}(omega) (mbar_l + 1/2).
// =============================================================================

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <vector>

#include "omflow/csv.hpp"
#include "omflow/dynamics.hpp"
#include "omflow/grid.hpp"

namespace omflow {

/// Transfer matrix U(omega); exact dense solve, any network size.
[[nodiscard]] inline Eigen::MatrixXcd transfer_matrix(const DynamicalSystem& sys,
                                                      double omega) {
    const Eigen::Index n = sys.matrix.rows();
    Eigen::MatrixXcd lhs = -sys.matrix;
    lhs.diagonal().array() -= std::complex<double>(0.0, omega);
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, n);
    rhs.diagonal() = sys.damping.array().sqrt().cast<std::complex<double>>();
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(lhs).solve(rhs);
}

/// Transmission T(omega) = |U(omega)|^2, elementwise.
[[nodiscard]] inline Eigen::MatrixXd transmission(const DynamicalSystem& sys,
                                                  double omega) {
    return transfer_matrix(sys, omega).cwiseAbs2();
}

/// Symmetrized output spectra of the mechanical modes:
/// s_k = sum_l T_{k,l} (mbar_l + 1/2), ordered as mechanical_rows().
[[nodiscard]] inline Eigen::VectorXd spectrum(const DynamicalSystem& sys,
                                              double omega) {
    const Eigen::MatrixXd T = transmission(sys, omega);
    const Eigen::VectorXd weights =
        sys.input_occupations.array() + 0.5;
    const auto mech = sys.mechanical_rows();
    Eigen::VectorXd s(static_cast<Eigen::Index>(mech.size()));
    for (std::size_t k = 0; k < mech.size(); ++k) {
        s(static_cast<Eigen::Index>(k)) =
            T.row(static_cast<Eigen::Index>(mech[k])).dot(weights);
    }
    return s;
}

/// Transfer and transmission sampled over a whole grid.
struct SpectralResult {
    FrequencyGrid grid;
    std::vector<Eigen::MatrixXcd> transfer;
    std::vector<Eigen::MatrixXd> transmission;
};

[[nodiscard]] inline SpectralResult compute_spectral(const DynamicalSystem& sys,
                                                     const FrequencyGrid& grid) {
    validate_grid(grid.points);
    SpectralResult result;
    result.grid = grid;
    result.transfer.reserve(grid.points.size());
    result.transmission.reserve(grid.points.size());
    for (double w : grid.points) {
        result.transfer.push_back(transfer_matrix(sys, w));
        result.transmission.push_back(result.transfer.back().cwiseAbs2());
    }
    return result;
}

/// Input-channel name for row i: mechanical baths are R1, R2, ... in row
/// order; optical (vacuum) channels are "<label>in".
[[nodiscard]] inline std::string channel_name(const DynamicalSystem& sys,
                                              std::size_t row) {
    if (sys.kinds[row] == ModeKind::optical) return sys.labels[row] + "in";
    const auto mech = sys.mechanical_rows();
    for (std::size_t k = 0; k < mech.size(); ++k) {
        if (mech[k] == row) return "R" + std::to_string(k + 1);
    }
    return sys.labels[row];  // unreachable for well-formed systems
}

/// Streams the per-frequency transmissions into mechanical modes plus their
/// noise spectra as CSV: omega, T_<channel>_to_<mode>..., s_<mode>...
inline void export_spectra(std::ostream& os, const DynamicalSystem& sys,
                           const FrequencyGrid& grid) {
    validate_grid(grid.points);
    const auto mech = sys.mechanical_rows();
    const Eigen::Index n = sys.matrix.rows();

    os << "omega";
    for (std::size_t k = 0; k < mech.size(); ++k) {
        for (Eigen::Index l = 0; l < n; ++l) {
            os << ',' << csv_escape("T_" +
                                    channel_name(sys, static_cast<std::size_t>(l)) +
                                    "_to_" + sys.labels[mech[k]]);
        }
    }
    for (std::size_t k = 0; k < mech.size(); ++k) {
        os << ',' << csv_escape("s_" + sys.labels[mech[k]]);
    }
    os << '\n';

    const Eigen::VectorXd weights = sys.input_occupations.array() + 0.5;
    for (double w : grid.points) {
        const Eigen::MatrixXd T = transmission(sys, w);
        os << format_number(w);
        for (std::size_t k = 0; k < mech.size(); ++k) {
            for (Eigen::Index l = 0; l < n; ++l) {
                os << ','
                   << format_number(T(static_cast<Eigen::Index>(mech[k]), l));
            }
        }
        for (std::size_t k = 0; k < mech.size(); ++k) {
            os << ','
               << format_number(
                      T.row(static_cast<Eigen::Index>(mech[k])).dot(weights));
        }
        os << '\n';
    }
}

}  // namespace omflow
