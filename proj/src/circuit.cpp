#include "cesim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cesim/channel.hpp"

namespace cesim::optics {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
constexpr double kSqrt2 = 1.41421356237309504880;

bool even_parity(int sys) { return sys == 0 || sys == 3; }  // {Vv, Hh}
} // namespace

int sys_index(char pol, char mode) {
    return (pol == 'H' ? 2 : 0) + (mode == 'h' ? 1 : 0);
}

Eigen::Matrix2cd hwp_matrix(double thetaDeg, char ref) {
    const double c = std::cos(2.0 * thetaDeg * kDegToRad);
    const double s = std::sin(2.0 * thetaDeg * kDegToRad);
    Eigen::Matrix2cd m;
    if (ref == 'V') {
        // (V,H) ordering directly
        m << c, s, s, -c;
    } else {
        // [[c,s],[s,-c]] in (H,V), re-expressed in (V,H)
        m << -c, s, s, c;
    }
    return m;
}

Eigen::Matrix2cd dove_matrix(double thetaDeg) {
    const double c = std::cos(2.0 * thetaDeg * kDegToRad);
    const double s = std::sin(2.0 * thetaDeg * kDegToRad);
    Eigen::Matrix2cd m;  // (v,h) ordering; proper rotation, det +1
    m << c, s, -s, c;
    return m;
}

Eigen::Matrix4cd cnot_matrix() {
    // control = polarization, target = mode: H flips h<->v
    Mat4 m = Mat4::Zero();
    m(0, 0) = 1.0;  // Vv -> Vv
    m(1, 1) = 1.0;  // Vh -> Vh
    m(3, 2) = 1.0;  // Hv -> Hh
    m(2, 3) = 1.0;  // Hh -> Hv
    return m;
}

Vec4 PhotonState::branch(int path) const {
    Vec4 b;
    for (int sys = 0; sys < 4; ++sys) b(sys) = amp(sys, path);
    return b;
}

PhotonState CompiledCircuit::initial_state() const {
    Vec4 system = Vec4::Zero();
    system(sys_index(prep.pol, prep.mode)) = 1.0;
    return inject(system, pathIndex.at(prep.path));
}

PhotonState CompiledCircuit::inject(const Vec4& system, int path) const {
    PhotonState st;
    st.pathCount = pathCount;
    st.amplitudes = Eigen::VectorXcd::Zero(4 * pathCount);
    for (int sys = 0; sys < 4; ++sys)
        st.amplitudes(sys * pathCount + path) = system(sys);
    return st;
}

PhotonState CompiledCircuit::propagate(const PhotonState& in) const {
    PhotonState out;
    out.pathCount = pathCount;
    out.amplitudes = unitary * in.amplitudes;
    return out;
}

std::vector<double> CompiledCircuit::detector_probabilities(
    const PhotonState& final) const {
    std::vector<double> probs;
    probs.reserve(detectors.size());
    for (const DetectorBinding& det : detectors) {
        double p = 0.0;
        for (int sys = 0; sys < 4; ++sys)
            p += std::norm(final.amp(sys, det.path));
        probs.push_back(p);
    }
    return probs;
}

namespace {

class Builder {
  public:
    explicit Builder(const CircuitIR& ir) : ir_(ir) {
        for (const std::string& name : ir.pathNames) add_path(name);
        for (const Element& el : ir.elements)
            if ((el.kind == ElementKind::Pbs || el.kind == ElementKind::Bs ||
                 el.kind == ElementKind::Mzim) &&
                el.in.size() == 1)
                ++hiddenNeeded_;
        for (int i = 0; i < hiddenNeeded_; ++i)
            add_path("~vac" + std::to_string(i));
        dim_ = 4 * static_cast<int>(names_.size());
    }

    CompiledCircuit build() {
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim_, dim_);
        int hiddenUsed = 0;
        for (const Element& el : ir_.elements) {
            std::vector<int> in, out;
            for (const std::string& p : el.in) in.push_back(index_.at(p));
            for (const std::string& p : el.out) out.push_back(index_.at(p));
            if ((el.kind == ElementKind::Pbs || el.kind == ElementKind::Bs ||
                 el.kind == ElementKind::Mzim) &&
                in.size() == 1)
                in.push_back(index_.at("~vac" + std::to_string(hiddenUsed++)));
            u = element_unitary(el, in, out) * u;
        }
        const double residual = (u.adjoint() * u -
                                 Eigen::MatrixXcd::Identity(dim_, dim_))
                                    .cwiseAbs()
                                    .maxCoeff();
        if (residual > 1e-9) {
            std::ostringstream os;
            os << "compile: composite unitarity residual " << residual;
            throw NonUnitaryComposite(os.str());
        }
        CompiledCircuit cc;
        cc.unitary = std::move(u);
        cc.pathCount = static_cast<int>(names_.size());
        cc.pathNames = names_;
        cc.pathIndex = index_;
        cc.prep = ir_.prep;
        for (const DetectorSpec& det : ir_.detectors)
            cc.detectors.push_back({det.id, index_.at(det.path)});
        return cc;
    }

  private:
    void add_path(const std::string& name) {
        index_.emplace(name, static_cast<int>(names_.size()));
        names_.push_back(name);
    }

    int flat(int sys, int path) const {
        return sys * static_cast<int>(names_.size()) + path;
    }

    /// Permutation moving path a's content to path b and vice versa.
    Eigen::MatrixXcd path_swap(int a, int b) const {
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(dim_, dim_);
        if (a == b) return p;
        for (int sys = 0; sys < 4; ++sys) {
            const int ia = flat(sys, a);
            const int ib = flat(sys, b);
            p(ia, ia) = 0.0;
            p(ib, ib) = 0.0;
            p(ia, ib) = 1.0;
            p(ib, ia) = 1.0;
        }
        return p;
    }

    Eigen::MatrixXcd element_unitary(const Element& el, const std::vector<int>& in,
                                     const std::vector<int>& out) const {
        // relabel in_i -> out_i, then act on the out block
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim_, dim_);
        for (std::size_t i = 0; i < out.size() && i < in.size(); ++i)
            u = path_swap(in[i], out[i]) * u;

        Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(dim_, dim_);
        switch (el.kind) {
            case ElementKind::Hwp: {
                const Eigen::Matrix2cd m = hwp_matrix(el.theta, el.ref);
                // pol blocks: sys = 2*pol + mode with pol V=0, H=1
                for (int mode = 0; mode < 2; ++mode)
                    for (int p1 = 0; p1 < 2; ++p1)
                        for (int p2 = 0; p2 < 2; ++p2)
                            b(flat(2 * p1 + mode, out[0]),
                              flat(2 * p2 + mode, out[0])) = m(p1, p2);
                break;
            }
            case ElementKind::Dove: {
                const Eigen::Matrix2cd m = dove_matrix(el.theta);
                for (int pol = 0; pol < 2; ++pol)
                    for (int m1 = 0; m1 < 2; ++m1)
                        for (int m2 = 0; m2 < 2; ++m2)
                            b(flat(2 * pol + m1, out[0]),
                              flat(2 * pol + m2, out[0])) = m(m1, m2);
                break;
            }
            case ElementKind::Mask: {
                // mode permutation taking h to the target mode
                if (el.mode == 'v') {
                    for (int pol = 0; pol < 2; ++pol) {
                        const int a = flat(2 * pol + 0, out[0]);  // v
                        const int c = flat(2 * pol + 1, out[0]);  // h
                        b(a, a) = 0.0;
                        b(c, c) = 0.0;
                        b(a, c) = 1.0;
                        b(c, a) = 1.0;
                    }
                }
                break;
            }
            case ElementKind::Gp: {
                const Complex phase = std::exp(Complex(0.0, el.phi));
                for (int sys = 0; sys < 4; ++sys)
                    b(flat(sys, out[0]), flat(sys, out[0])) = phase;
                break;
            }
            case ElementKind::Mirror:
                break;
            case ElementKind::Cnot: {
                const Mat4 m = cnot_matrix();
                for (int s1 = 0; s1 < 4; ++s1)
                    for (int s2 = 0; s2 < 4; ++s2)
                        b(flat(s1, out[0]), flat(s2, out[0])) = m(s1, s2);
                break;
            }
            case ElementKind::Pbs: {
                // H continues in place, V crosses between the two ports
                for (int mode = 0; mode < 2; ++mode) {
                    const int v0 = flat(0 + mode, out[0]);  // V on port 1
                    const int v1 = flat(0 + mode, out[1]);
                    b(v0, v0) = 0.0;
                    b(v1, v1) = 0.0;
                    b(v0, v1) = 1.0;
                    b(v1, v0) = 1.0;
                }
                break;
            }
            case ElementKind::Bs: {
                for (int sys = 0; sys < 4; ++sys) {
                    const int a = flat(sys, out[0]);
                    const int c = flat(sys, out[1]);
                    b(a, a) = 1.0 / kSqrt2;
                    b(a, c) = 1.0 / kSqrt2;
                    b(c, a) = 1.0 / kSqrt2;
                    b(c, c) = -1.0 / kSqrt2;
                }
                break;
            }
            case ElementKind::Mzim: {
                // even {Vv,Hh} stays, odd {Vh,Hv} crosses
                for (int sys = 0; sys < 4; ++sys) {
                    if (even_parity(sys)) continue;
                    const int a = flat(sys, out[0]);
                    const int c = flat(sys, out[1]);
                    b(a, a) = 0.0;
                    b(c, c) = 0.0;
                    b(a, c) = 1.0;
                    b(c, a) = 1.0;
                }
                break;
            }
        }
        return b * u;
    }

    const CircuitIR& ir_;
    std::vector<std::string> names_;
    std::map<std::string, int> index_;
    int hiddenNeeded_ = 0;
    int dim_ = 0;
};

} // namespace

CompiledCircuit compile(const CircuitIR& ir) {
    return Builder(ir).build();
}

DensityMatrix4 reduced_system_state(const PhotonState& final) {
    Mat4 rho = Mat4::Zero();
    for (int p = 0; p < final.pathCount; ++p) {
        const Vec4 b = final.branch(p);
        rho += b * b.adjoint();
    }
    const double tr = rho.trace().real();
    if (tr <= 0.0)
        throw InvalidState("reduced_system_state: zero-norm photon state");
    return DensityMatrix4(rho / tr, Basis::Computational);
}

AngleSetting solve_angles(double gammaT) {
    const MapCoefficients mc =
        map_coefficients(gammaT, {EnvironmentKind::MultimodeVacuum});
    const double q = mc.Q.real();
    const double r = mc.R.real();
    const double s = mc.S.real();
    AngleSetting a;
    a.gammaT = gammaT;
    a.theta1Deg = 0.5 * std::acos(std::clamp(q, -1.0, 1.0)) / kDegToRad;
    a.theta2Deg = (r == 0.0 && s == 0.0) ? 0.0 : 0.5 * std::atan2(r, s) / kDegToRad;
    return a;
}

const std::string& evolution_netlist_template() {
    static const std::string text =
        "# Collective-decay evolution circuit, single-photon realization.\n"
        "# theta1 tunes the decay amplitude, theta2 the excitation exchange.\n"
        "source pol=V out=src\n"
        "mask mode=h in=src out=q0\n"
        "hwp theta=${theta1} ref=V in=q0 out=q1\n"
        "pbs in=q1 out=exc,vac0        # H (decayed) -> exc, V -> vac0\n"
        "gp phi=0 in=vac0 out=vac0a    # arm-length adjust\n"
        "dove theta=${theta2} in=exc out=exc1\n"
        "mzim in=exc1 out=env1,vac1    # Hh keeps the excited arm, Hv rejoins vacuum\n"
        "gp phi=0 in=vac1 out=vac1a    # in-phase recombination\n"
        "pbs in=vac1a,vac0a out=env0,dark\n"
        "detector id=ENV0 in=env0\n"
        "detector id=ENV1 in=env1\n"
        "detector id=DARK in=dark\n";
    return text;
}

const std::string& measurement_netlist() {
    static const std::string text =
        "# Collective-basis measurement circuit.\n"
        "source pol=V mode=h out=min\n"
        "mzim in=min out=even,odd      # {Vv,Hh} -> even, {Vh,Hv} -> odd\n"
        "cnot in=odd out=odd1\n"
        "hwp theta=22.5 ref=H in=odd1 out=odd2\n"
        "pbs in=odd2 out=d1,d2         # H -> D1, V -> D2\n"
        "pbs in=even out=d4,d3         # H -> D4, V -> D3\n"
        "detector id=D1 in=d1\n"
        "detector id=D2 in=d2\n"
        "detector id=D3 in=d3\n"
        "detector id=D4 in=d4\n";
    return text;
}

CircuitIR build_evolution_circuit(const AngleSetting& angles) {
    auto fmt = [](double x) {
        std::ostringstream os;
        os.precision(17);
        os << x;
        return os.str();
    };
    return parse_netlist(substitute(evolution_netlist_template(),
                                    {{"theta1", fmt(angles.theta1Deg)},
                                     {"theta2", fmt(angles.theta2Deg)}}));
}

CircuitIR build_measurement_circuit() {
    return parse_netlist(measurement_netlist());
}

const std::array<double, 4>& witness_count_weights() {
    static const std::array<double, 4> w = {1.0 / kSqrt2, -1.0 / kSqrt2,
                                            1.0 + 1.0 / kSqrt2,
                                            1.0 - 1.0 / kSqrt2};
    return w;
}

ExperimentResult run_experiment(double gammaT, std::uint64_t shots,
                                std::uint64_t seed) {
    const CompiledCircuit evo = compile(build_evolution_circuit(solve_angles(gammaT)));
    const PhotonState evolved = evo.propagate(evo.initial_state());

    const CompiledCircuit meas = compile(build_measurement_circuit());
    const int injectPath = meas.pathIndex.at(meas.prep.path);

    // each outgoing path is an orthogonal environment branch; feeding the
    // branches one by one and summing probabilities realizes the trace
    // over the photon path
    std::array<double, 4> probs{};
    for (int p = 0; p < evolved.pathCount; ++p) {
        const Vec4 branch = evolved.branch(p);
        if (branch.squaredNorm() < 1e-30) continue;
        const PhotonState out = meas.propagate(meas.inject(branch, injectPath));
        const std::vector<double> dp = meas.detector_probabilities(out);
        for (std::size_t d = 0; d < meas.detectors.size(); ++d) {
            // detector ids are D1..D4
            const int slot = meas.detectors[d].id[1] - '1';
            probs[slot] += dp[d];
        }
    }
    const double total = probs[0] + probs[1] + probs[2] + probs[3];
    if (std::abs(total - 1.0) > 1e-9)
        throw NonUnitaryComposite("run_experiment: detector probabilities sum to " +
                                  std::to_string(total));

    const std::array<double, 4>& w = witness_count_weights();
    ExperimentResult res;
    res.exactProbs = probs;
    for (int i = 0; i < 4; ++i) res.witnessExact += w[i] * probs[i];
    res.concurrenceExact = res.witnessExact / (1.0 - kSqrt2);

    double second = 0.0;
    for (int i = 0; i < 4; ++i) second += w[i] * w[i] * probs[i];
    const double variance = second - res.witnessExact * res.witnessExact;

    res.record.shots = shots;
    if (shots == 0) {
        res.witnessEstimate = res.witnessExact;
        res.concurrenceEstimate = res.concurrenceExact;
        return res;
    }

    rng::Stream stream(rng::splitmix64(seed));
    const std::vector<std::uint64_t> counts =
        rng::multinomial(stream, {probs[0], probs[1], probs[2], probs[3]}, shots);
    for (int i = 0; i < 4; ++i) {
        res.record.counts["D" + std::to_string(i + 1)] = counts[i];
        res.witnessEstimate += w[i] * static_cast<double>(counts[i]);
    }
    res.witnessEstimate /= static_cast<double>(shots);
    res.concurrenceEstimate = res.witnessEstimate / (1.0 - kSqrt2);
    res.witnessStdError = std::sqrt(std::max(0.0, variance) /
                                    static_cast<double>(shots));
    res.concurrenceStdError = res.witnessStdError / (kSqrt2 - 1.0);
    return res;
}

} // namespace cesim::optics
