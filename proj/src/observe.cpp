#include "tbcav/observe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tbcav::obs {

namespace {

long dims_product(const std::vector<int>& dims) {
    long p = 1;
    for (int d : dims) {
        if (d < 1) throw DimensionMismatch("tensor factor dimensions must be >= 1");
        p *= d;
    }
    return p;
}

void check_factors(const DensityMatrix& rho) {
    if (rho.mat.rows() != rho.mat.cols()) {
        throw DimensionMismatch("density matrix must be square");
    }
    if (dims_product(rho.factor_dims) != rho.mat.rows()) {
        throw DimensionMismatch("product of factor_dims != matrix dimension");
    }
}

// Stride of factor f: product of the dimensions after it.
long factor_stride(const std::vector<int>& dims, int f) {
    long s = 1;
    for (std::size_t k = f + 1; k < dims.size(); ++k) s *= dims[k];
    return s;
}

// Sum of diagonal entries whose index has `digit` at factor `f`.
double diagonal_slice_sum(const DensityMatrix& rho, int f, int digit) {
    const long stride = factor_stride(rho.factor_dims, f);
    const int dim_f = rho.factor_dims[f];
    double acc = 0.0;
    for (long i = 0; i < rho.mat.rows(); ++i) {
        if ((i / stride) % dim_f == digit) acc += rho.mat(i, i).real();
    }
    return acc;
}

}  // namespace

DensityMatrix density_from_state(const StateVector& psi, std::vector<int> factor_dims) {
    if (dims_product(factor_dims) != psi.size()) {
        throw DimensionMismatch("product of factor_dims != state dimension");
    }
    require_normalized(psi);
    DensityMatrix rho;
    rho.mat = psi * psi.adjoint();
    rho.factor_dims = std::move(factor_dims);
    return rho;
}

double cavity_population(const DensityMatrix& rho, int n) {
    check_factors(rho);
    if (rho.factor_dims.empty() || n < 1 || n > rho.factor_dims[0]) {
        throw IndexOutOfRange("cavity level " + std::to_string(n) + " out of range");
    }
    return diagonal_slice_sum(rho, 0, n - 1);
}

double site_probability(const DensityMatrix& rho, int qubit_index, int site) {
    check_factors(rho);
    const int f = qubit_index;  // factor 0 is the cavity
    if (qubit_index < 1 || f >= static_cast<int>(rho.factor_dims.size())) {
        throw IndexOutOfRange("qubit index " + std::to_string(qubit_index) + " out of range");
    }
    if (site < 1 || site > rho.factor_dims[f]) {
        throw IndexOutOfRange("site " + std::to_string(site) + " out of range");
    }
    return diagonal_slice_sum(rho, f, site - 1);
}

DensityMatrix reduce(const DensityMatrix& rho, int keep_factor) {
    check_factors(rho);
    if (keep_factor < 0 || keep_factor >= static_cast<int>(rho.factor_dims.size())) {
        throw IndexOutOfRange("keep_factor " + std::to_string(keep_factor) + " out of range");
    }
    const int d = rho.factor_dims[keep_factor];
    const long stride = factor_stride(rho.factor_dims, keep_factor);
    // Indices split as (pre, k, post): idx = (pre*d + k)*stride + post.
    const long pre_count = rho.mat.rows() / (d * stride);
    DensityMatrix out;
    out.mat = Eigen::MatrixXcd::Zero(d, d);
    out.factor_dims = {d};
    for (int k = 0; k < d; ++k) {
        for (int kp = 0; kp < d; ++kp) {
            Complex acc{0.0, 0.0};
            for (long pre = 0; pre < pre_count; ++pre) {
                for (long post = 0; post < stride; ++post) {
                    acc += rho.mat((pre * d + k) * stride + post,
                                   (pre * d + kp) * stride + post);
                }
            }
            out.mat(k, kp) = acc;
        }
    }
    return out;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    check_factors(rho);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.mat);
    if (es.info() != Eigen::Success) {
        throw InvalidDensity("eigendecomposition of density matrix failed");
    }
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        double lam = es.eigenvalues()(k);
        if (lam < -1e-8) {
            throw InvalidDensity("density matrix eigenvalue " + std::to_string(lam) +
                                 " is significantly negative");
        }
        lam = std::clamp(lam, 0.0, 1.0);
        if (lam > 0.0) s -= lam * std::log(lam);
    }
    return s;
}

double entropy_closed_form_2x2(const DensityMatrix& rho) {
    check_factors(rho);
    if (rho.mat.rows() != 2) {
        throw DimensionMismatch("closed-form entropy requires a 2x2 density matrix");
    }
    const double rho22 = rho.mat(1, 1).real();
    const double r = std::hypot(1.0 - 2.0 * rho22, 2.0 * std::abs(rho.mat(0, 1)));
    if (r >= 1.0 - 1e-12) return 0.0;  // pure-state limit of the expression
    return -0.5 * (std::log(1.0 - r) + std::log(1.0 + r) + 2.0 * r * std::atanh(r) -
                   std::log(4.0));
}

Eigen::MatrixXcd projector_site(const std::vector<int>& factor_dims, int qubit_index,
                                int site) {
    const long dim = dims_product(factor_dims);
    const int f = qubit_index;
    if (qubit_index < 1 || f >= static_cast<int>(factor_dims.size())) {
        throw IndexOutOfRange("qubit index " + std::to_string(qubit_index) + " out of range");
    }
    if (site < 1 || site > factor_dims[f]) {
        throw IndexOutOfRange("site " + std::to_string(site) + " out of range");
    }
    const long stride = factor_stride(factor_dims, f);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
    for (long i = 0; i < dim; ++i) {
        if ((i / stride) % factor_dims[f] == site - 1) p(i, i) = 1.0;
    }
    return p;
}

double multiphoton_probability(const StateVector& psi_t0, const StateVector& psi_t,
                               int cavity_level, const std::vector<int>& factor_dims) {
    const long dim = dims_product(factor_dims);
    if (psi_t0.size() != dim || psi_t.size() != dim) {
        throw DimensionMismatch("state dimensions do not match factor_dims");
    }
    if (factor_dims.empty() || cavity_level < 1 || cavity_level > factor_dims[0]) {
        throw IndexOutOfRange("cavity level " + std::to_string(cavity_level) +
                              " out of range");
    }
    require_normalized(psi_t0);
    require_normalized(psi_t);
    const long stride = factor_stride(factor_dims, 0);
    const long off = (cavity_level - 1) * stride;
    Complex overlap{0.0, 0.0};
    for (long i = 0; i < stride; ++i) {
        overlap += std::conj(psi_t0(off + i)) * psi_t(off + i);
    }
    return std::norm(overlap);
}

double rabi_frequency_estimate(const std::vector<std::pair<double, double>>& series) {
    const std::size_t n = series.size();
    if (n < 16) throw Error("frequency estimate requires at least 16 samples");
    const double dt = series[1].first - series[0].first;
    if (dt <= 0.0) throw Error("frequency estimate requires increasing sample times");
    for (std::size_t k = 1; k < n; ++k) {
        const double step = series[k].first - series[k - 1].first;
        if (std::abs(step - dt) > 1e-9 * std::abs(dt)) {
            throw Error("frequency estimate requires uniform sampling");
        }
    }
    double mean = 0.0;
    for (const auto& [t, p] : series) mean += p;
    mean /= static_cast<double>(n);
    double rms = 0.0;
    for (const auto& [t, p] : series) rms += (p - mean) * (p - mean);
    rms = std::sqrt(rms / static_cast<double>(n));
    if (rms < 1e-14 * (1.0 + std::abs(mean))) {
        throw NoOscillation("series is constant to machine precision");
    }
    // Naive DFT of the de-meaned series over the positive-frequency bins.
    const std::size_t n_bins = n / 2;
    std::vector<double> mag(n_bins + 1, 0.0);
    for (std::size_t m = 1; m <= n_bins; ++m) {
        const double ang =
            -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
        const Complex w{std::cos(ang), std::sin(ang)};
        Complex acc{0.0, 0.0};
        Complex wk{1.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            acc += (series[k].second - mean) * wk;
            wk *= w;
        }
        mag[m] = std::abs(acc);
    }
    std::size_t peak = 1;
    for (std::size_t m = 2; m <= n_bins; ++m) {
        if (mag[m] > mag[peak]) peak = m;
    }
    std::vector<double> floor_probe(mag.begin() + 1, mag.end());
    std::nth_element(floor_probe.begin(), floor_probe.begin() + floor_probe.size() / 2,
                     floor_probe.end());
    const double floor = floor_probe[floor_probe.size() / 2];
    if (mag[peak] < 10.0 * floor) {
        throw NoOscillation("spectral peak does not rise above the floor");
    }
    // Quadratic interpolation on log magnitudes, only when both neighbours
    // carry signal: for a bin-exact tone they are pure roundoff and the log
    // parabola through noise would shift the peak.
    double delta = 0.0;
    if (peak > 1 && peak < n_bins && mag[peak - 1] > 1e-6 * mag[peak] &&
        mag[peak + 1] > 1e-6 * mag[peak]) {
        const double l = std::log(mag[peak - 1]);
        const double c = std::log(mag[peak]);
        const double r = std::log(mag[peak + 1]);
        const double denom = l + r - 2.0 * c;
        if (denom < 0.0) delta = 0.5 * (l - r) / denom;
    }
    return 2.0 * std::numbers::pi * (static_cast<double>(peak) + delta) /
           (static_cast<double>(n) * dt);
}

JointProbabilities normalized_joint_probabilities(const StateVector& psi) {
    if (psi.size() < 1) throw DimensionMismatch("state must have at least one amplitude");
    JointProbabilities out;
    out.total = psi.squaredNorm();
    if (out.total < 1e-20) throw ZeroState("cannot renormalize a zero state");
    out.probabilities = psi.cwiseAbs2() / out.total;
    return out;
}

}  // namespace tbcav::obs
