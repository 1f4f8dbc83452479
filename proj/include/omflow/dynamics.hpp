#pragma once

// =============================================================================
// omflow - linear dynamics assembly
// =============================================================================
// Builds the drift matrix of the rotating-wave Langevin equations
//
//     d/dt v = M v + sqrt(Gamma) v_in,       v = (a_1.., a_J, b_1.., b_K)
//
// with rows ordered optical-first (declaration order within each kind) and
//
//     M[a_j, b_k] = -i G_jk e^{+i phi_jk}        M[j, j] = -damping_j / 2
//     M[b_k, a_j] = -i G_jk e^{-i phi_jk}                 - i detuning_j.
//
// Passivity holds by construction: M + M^dag = -Gamma, so the spectrum lies
// in Re(lambda) <= -min(damping)/2 and every steady state is unique.
// =============================================================================

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "omflow/errors.hpp"
#include "omflow/model.hpp"

namespace omflow {

/// Assembled first-order dynamics of a network model.
struct DynamicalSystem {
    Eigen::MatrixXcd matrix;             ///< drift matrix M
    Eigen::VectorXd damping;             ///< diagonal of Gamma
    Eigen::VectorXd input_occupations;   ///< bath occupation per input channel
    std::vector<std::string> labels;     ///< row label per index
    std::vector<ModeKind> kinds;         ///< row kind per index
    std::map<std::string, std::size_t> mode_index;

    [[nodiscard]] std::size_t dimension() const {
        return static_cast<std::size_t>(matrix.rows());
    }

    /// Row indices of the mechanical modes, in row order.
    [[nodiscard]] std::vector<std::size_t> mechanical_rows() const {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < kinds.size(); ++i) {
            if (kinds[i] == ModeKind::mechanical) rows.push_back(i);
        }
        return rows;
    }
};

/// Validates the model and assembles its DynamicalSystem.
[[nodiscard]] inline DynamicalSystem build_dynamics(const NetworkModel& model) {
    model.validate();

    DynamicalSystem sys;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < model.modes.size(); ++i) {
        if (model.modes[i].kind == ModeKind::optical) order.push_back(i);
    }
    for (std::size_t i = 0; i < model.modes.size(); ++i) {
        if (model.modes[i].kind == ModeKind::mechanical) order.push_back(i);
    }

    const auto n = static_cast<Eigen::Index>(order.size());
    sys.matrix = Eigen::MatrixXcd::Zero(n, n);
    sys.damping = Eigen::VectorXd::Zero(n);
    sys.input_occupations = Eigen::VectorXd::Zero(n);

    for (Eigen::Index r = 0; r < n; ++r) {
        const Mode& m = model.modes[order[static_cast<std::size_t>(r)]];
        sys.labels.push_back(m.label);
        sys.kinds.push_back(m.kind);
        sys.mode_index[m.label] = static_cast<std::size_t>(r);
        sys.damping(r) = m.damping;
        sys.input_occupations(r) = m.bath_occupation;
        sys.matrix(r, r) = std::complex<double>(-0.5 * m.damping, -m.detuning);
    }

    const std::complex<double> minus_i(0.0, -1.0);
    for (const auto& c : model.couplings) {
        const auto row_a =
            static_cast<Eigen::Index>(sys.mode_index.at(c.cavity));
        const auto row_b =
            static_cast<Eigen::Index>(sys.mode_index.at(c.mechanical));
        const std::complex<double> phase_factor =
            std::polar(1.0, c.phase);
        sys.matrix(row_a, row_b) = minus_i * c.strength * phase_factor;
        sys.matrix(row_b, row_a) = minus_i * c.strength * std::conj(phase_factor);
    }
    return sys;
}

/// Eigenvalues of the drift matrix.
[[nodiscard]] inline Eigen::VectorXcd eigenvalues(const DynamicalSystem& sys) {
    return Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(sys.matrix, false)
        .eigenvalues();
}

/// Largest real part of the drift spectrum (negative for a damped network).
[[nodiscard]] inline double max_real_eigenvalue(const DynamicalSystem& sys) {
    return eigenvalues(sys).real().maxCoeff();
}

/// Throws numerical_error unless every eigenvalue satisfies
/// Re(lambda) < -margin (steady state well defined).
inline void require_stable(const DynamicalSystem& sys, double margin = 1e-12) {
    const double worst = max_real_eigenvalue(sys);
    if (!(worst < -margin)) {
        throw numerical_error(
            "dynamics not strictly stable: max Re(eigenvalue) = " +
            std::to_string(worst));
    }
}

}  // namespace omflow
