#include "cesim/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cesim::rng {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double Stream::normal() {
    if (haveSpare_) {
        haveSpare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    spare_ = r * std::sin(phi);
    haveSpare_ = true;
    return r * std::cos(phi);
}

std::vector<std::uint64_t> multinomial(Stream& stream,
                                       const std::vector<double>& probs,
                                       std::uint64_t shots) {
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("multinomial: probabilities do not sum to 1");
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;
    std::vector<std::uint64_t> counts(probs.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = stream.uniform();
        std::size_t k = 0;
        while (k + 1 < cdf.size() && u >= cdf[k]) ++k;
        ++counts[k];
    }
    return counts;
}

DensityMatrix4 random_state(Stream& stream) {
    Mat4 g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            g(i, j) = Complex(stream.normal(), stream.normal());
    Mat4 rho = g * g.adjoint();
    rho /= rho.trace();
    return DensityMatrix4(rho, Basis::Computational);
}

Eigen::Matrix2cd random_su2(Stream& stream) {
    // QR of a 2x2 Ginibre matrix with the phase convention fixed
    Eigen::Matrix2cd g;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            g(i, j) = Complex(stream.normal(), stream.normal());
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
    Eigen::Matrix2cd q = qr.householderQ();
    Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < 2; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

Eigen::Matrix2cd random_qubit_state(Stream& stream) {
    // Bloch vector uniform in the unit ball
    double x, y, z;
    do {
        x = 2.0 * stream.uniform() - 1.0;
        y = 2.0 * stream.uniform() - 1.0;
        z = 2.0 * stream.uniform() - 1.0;
    } while (x * x + y * y + z * z > 1.0);
    Eigen::Matrix2cd rho;
    rho(0, 0) = 0.5 * (1.0 + z);
    rho(1, 1) = 0.5 * (1.0 - z);
    rho(0, 1) = 0.5 * Complex(x, -y);
    rho(1, 0) = 0.5 * Complex(x, y);
    return rho;
}

DensityMatrix4 random_separable_state(Stream& stream, int maxTerms) {
    const int terms = 1 + static_cast<int>(stream.uniform() * maxTerms) % maxTerms;
    std::vector<double> weights(terms);
    double total = 0.0;
    for (double& w : weights) {
        w = -std::log(1.0 - stream.uniform());
        total += w;
    }
    Mat4 rho = Mat4::Zero();
    for (int k = 0; k < terms; ++k) {
        const Eigen::Matrix2cd a = random_qubit_state(stream);
        const Eigen::Matrix2cd b = random_qubit_state(stream);
        rho += (weights[k] / total) * linalg::kron(a, b);
    }
    return DensityMatrix4(rho, Basis::Computational);
}

} // namespace cesim::rng
