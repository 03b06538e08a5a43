// observe.hpp — measurement-side quantities: density matrices, populations,
// partial traces, von Neumann entropy (eigenvalue route and 2x2 closed form),
// site projectors, multiphoton transition probability, and Rabi frequency
// estimation from a sampled probability series.
#pragma once

#include <utility>
#include <vector>

#include "tbcav/state.hpp"

namespace tbcav::obs {

// Density matrix over an ordered tensor product: factor 0 is the cavity
// (dimension K), the following factors are qubits (dimension 2 each). Factor
// 0 owns the most significant part of the row index (kron order).
struct DensityMatrix {
    Eigen::MatrixXcd mat;
    std::vector<int> factor_dims;
};

// Pure-state density |psi><psi| labelled with its tensor factorization.
DensityMatrix density_from_state(const StateVector& psi, std::vector<int> factor_dims);

// Probability of cavity level n (1-based): sum of the diagonal over the
// level-n index slice.
double cavity_population(const DensityMatrix& rho, int n);

// Probability of site (1 or 2) for the given qubit (1-based among the qubit
// factors).
double site_probability(const DensityMatrix& rho, int qubit_index, int site);

// Partial trace onto one factor (0-based index into factor_dims; 0 = cavity).
DensityMatrix reduce(const DensityMatrix& rho, int keep_factor);

// -sum lambda ln lambda over the spectrum, 0 ln 0 := 0, eigenvalues clamped
// to [0, 1]. Throws InvalidDensity when an eigenvalue is below -1e-8.
double von_neumann_entropy(const DensityMatrix& rho);

// The analytic 2x2 entropy in r = sqrt((1 - 2 rho22)^2 + 4 |rho12|^2):
// S = -(ln(1-r) + ln(1+r) + 2 r artanh(r) - ln 4) / 2, with the pure-state
// singularity at r -> 1 replaced by its limit 0.
double entropy_closed_form_2x2(const DensityMatrix& rho);

// Diagonal projector selecting `site` of one qubit, identity elsewhere.
Eigen::MatrixXcd projector_site(const std::vector<int>& factor_dims, int qubit_index,
                                int site);

// |<psi(t0)| P_level |psi(t)>|^2 with P_level the cavity-level projector.
double multiphoton_probability(const StateVector& psi_t0, const StateVector& psi_t,
                               int cavity_level, const std::vector<int>& factor_dims);

// Dominant angular frequency of a uniformly sampled real series, from the
// discrete Fourier peak with quadratic interpolation on the log magnitudes of
// the three bins around it. Throws NoOscillation when no significant
// nonzero-frequency peak exists.
double rabi_frequency_estimate(const std::vector<std::pair<double, double>>& series);

struct JointProbabilities {
    Eigen::VectorXd probabilities;  // |psi_i|^2 / total
    double total = 0.0;             // raw sum of |psi_i|^2 before renormalization
};

// The renormalized joint distribution |psi_i|^2 / sum_j |psi_j|^2.
JointProbabilities normalized_joint_probabilities(const StateVector& psi);

}  // namespace tbcav::obs
