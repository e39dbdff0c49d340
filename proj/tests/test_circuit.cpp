#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cesim/channel.hpp"
#include "cesim/circuit.hpp"
#include "cesim/entanglement.hpp"

using namespace cesim;
using namespace cesim::optics;

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kDeg = M_PI / 180.0;

Vec4 sys_ket(char pol, char mode) {
    Vec4 v = Vec4::Zero();
    v(sys_index(pol, mode)) = 1.0;
    return v;
}

/// Detector probabilities of the measurement circuit for one injected
/// (pol,mode) branch, D1..D4 order.
std::array<double, 4> measure(const Vec4& branch) {
    static const CompiledCircuit meas = compile(build_measurement_circuit());
    const PhotonState out =
        meas.propagate(meas.inject(branch, meas.pathIndex.at(meas.prep.path)));
    const std::vector<double> dp = meas.detector_probabilities(out);
    std::array<double, 4> byId{};
    for (std::size_t d = 0; d < meas.detectors.size(); ++d)
        byId[meas.detectors[d].id[1] - '1'] += dp[d];
    return byId;
}

} // namespace

TEST_CASE("system index matches the qubit encoding table") {
    CHECK(sys_index('V', 'v') == 0);  // |ee>
    CHECK(sys_index('V', 'h') == 1);  // |eg>
    CHECK(sys_index('H', 'v') == 2);  // |ge>
    CHECK(sys_index('H', 'h') == 3);  // |gg>
}

TEST_CASE("hwp matrix: aligned axis, Hadamard at 22.5 from H, V-referenced rotation") {
    // aligned axis keeps the reference polarization
    const Eigen::Matrix2cd alignedV = hwp_matrix(0.0, 'V');
    CHECK(std::abs(alignedV(0, 0) - Complex(1, 0)) <= 1e-15);
    CHECK(std::abs(alignedV(1, 1) - Complex(-1, 0)) <= 1e-15);

    // 22.5 deg from H: |H> -> (|H>+|V>)/sqrt2, |V> -> (|H>-|V>)/sqrt2
    const Eigen::Matrix2cd had = hwp_matrix(22.5, 'H');
    CHECK(std::abs(had(1, 1) - Complex(1 / kSqrt2, 0)) <= 1e-12);  // H->H
    CHECK(std::abs(had(0, 1) - Complex(1 / kSqrt2, 0)) <= 1e-12);  // H->V
    CHECK(std::abs(had(1, 0) - Complex(1 / kSqrt2, 0)) <= 1e-12);  // V->H
    CHECK(std::abs(had(0, 0) - Complex(-1 / kSqrt2, 0)) <= 1e-12); // V->-V

    // V-referenced at theta1: |V> -> cos(2t)|V> + sin(2t)|H>
    const double t1 = 17.0;
    const Eigen::Matrix2cd m = hwp_matrix(t1, 'V');
    CHECK(std::abs(m(0, 0) - Complex(std::cos(2 * t1 * kDeg), 0)) <= 1e-12);
    CHECK(std::abs(m(1, 0) - Complex(std::sin(2 * t1 * kDeg), 0)) <= 1e-12);

    for (double theta : {0.0, 22.5, 17.0, -30.0}) {
        for (char ref : {'H', 'V'}) {
            const Eigen::Matrix2cd u = hwp_matrix(theta, ref);
            CHECK((u * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <=
                  1e-12);
            CHECK((u - u.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("dove matrix: identity at 0, mode flip at 45, proper rotation") {
    CHECK((dove_matrix(0.0) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <=
          1e-15);
    const Eigen::Matrix2cd flip = dove_matrix(45.0);
    // |h> -> |v> up to the rotation sign on the second column
    CHECK(std::abs(flip(0, 1) - Complex(1, 0)) <= 1e-12);
    CHECK(std::abs(flip(1, 1)) <= 1e-12);

    const double t2 = -11.0;
    const Eigen::Matrix2cd m = dove_matrix(t2);
    // first column: |h> -> cos(2t)|h> + sin(2t)|v> read in (v,h) ordering
    CHECK(std::abs(m(1, 1) - Complex(std::cos(2 * t2 * kDeg), 0)) <= 1e-12);
    CHECK(std::abs(m(0, 1) - Complex(std::sin(2 * t2 * kDeg), 0)) <= 1e-12);
    CHECK(std::abs(m.determinant() - Complex(1, 0)) <= 1e-12);
}

TEST_CASE("cnot table: polarization controls the mode flip") {
    const Mat4 m = cnot_matrix();
    auto image = [&](char pol, char mode) -> Vec4 { return m * sys_ket(pol, mode); };
    CHECK((image('V', 'v') - sys_ket('V', 'v')).norm() <= 1e-15);
    CHECK((image('V', 'h') - sys_ket('V', 'h')).norm() <= 1e-15);
    CHECK((image('H', 'v') - sys_ket('H', 'h')).norm() <= 1e-15);
    CHECK((image('H', 'h') - sys_ket('H', 'v')).norm() <= 1e-15);
}

TEST_CASE("pbs routes H straight and V across; mzim sorts parity") {
    const CircuitIR ir = parse_netlist(
        "source pol=V mode=h out=a\n"
        "pbs in=a out=t,r\n"
        "detector id=T in=t\n"
        "detector id=R in=r\n");
    const CompiledCircuit cc = compile(ir);
    const int pathA = cc.pathIndex.at("a");
    auto route = [&](char pol, char mode) {
        const PhotonState out = cc.propagate(cc.inject(sys_ket(pol, mode), pathA));
        return std::pair{out.branch(cc.pathIndex.at("t")).norm(),
                         out.branch(cc.pathIndex.at("r")).norm()};
    };
    CHECK(route('H', 'h').first == doctest::Approx(1.0));
    CHECK(route('H', 'v').first == doctest::Approx(1.0));
    CHECK(route('V', 'h').second == doctest::Approx(1.0));
    CHECK(route('V', 'v').second == doctest::Approx(1.0));

    const CircuitIR mz = parse_netlist(
        "source pol=V mode=v out=a\n"
        "mzim in=a out=even,odd\n"
        "detector id=E in=even\n"
        "detector id=O in=odd\n");
    const CompiledCircuit mzc = compile(mz);
    const int in = mzc.pathIndex.at("a");
    auto mzroute = [&](char pol, char mode) {
        const PhotonState out = mzc.propagate(mzc.inject(sys_ket(pol, mode), in));
        return std::pair{out.branch(mzc.pathIndex.at("even")).norm(),
                         out.branch(mzc.pathIndex.at("odd")).norm()};
    };
    // |Vv> entering port 1 exits the even port (the paper's port 3)
    CHECK(mzroute('V', 'v').first == doctest::Approx(1.0));
    CHECK(mzroute('H', 'h').first == doctest::Approx(1.0));
    CHECK(mzroute('V', 'h').second == doctest::Approx(1.0));
    CHECK(mzroute('H', 'v').second == doctest::Approx(1.0));
}

TEST_CASE("element-free circuit compiles to the identity on one path") {
    const CompiledCircuit cc = compile(parse_netlist(
        "source pol=V mode=h out=p0\ndetector id=D in=p0\n"));
    CHECK(cc.pathCount == 1);
    CHECK(cc.unitary.rows() == 4);
    CHECK((cc.unitary - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("gp multiplies a path by a pure phase") {
    const CompiledCircuit cc = compile(parse_netlist(
        "source pol=V mode=h out=a\n"
        "gp phi=0.7 in=a out=b\n"
        "detector id=D in=b\n"));
    const PhotonState out = cc.propagate(cc.initial_state());
    const Complex amp = out.amp(sys_index('V', 'h'), cc.pathIndex.at("b"));
    CHECK(std::abs(amp - std::exp(Complex(0, 0.7))) <= 1e-12);
}

TEST_CASE("solve_angles at 0, ln 2, and the asymptotic limit") {
    const AngleSetting at0 = solve_angles(0.0);
    CHECK(at0.theta1Deg == doctest::Approx(0.0));
    CHECK(at0.theta2Deg == doctest::Approx(0.0));

    const AngleSetting atLn2 = solve_angles(kLn2);
    CHECK(atLn2.theta1Deg ==
          doctest::Approx(0.5 * std::acos(0.75) / kDeg).epsilon(1e-12));
    CHECK(std::sin(2 * atLn2.theta1Deg * kDeg) * std::cos(2 * atLn2.theta2Deg * kDeg) ==
          doctest::Approx(std::sqrt(3.0 / 8.0)).epsilon(1e-12));

    const AngleSetting atInf = solve_angles(60.0);
    CHECK(atInf.theta1Deg == doctest::Approx(30.0).epsilon(1e-9));
    CHECK(atInf.theta2Deg ==
          doctest::Approx(-0.5 * std::atan(1.0 / kSqrt2) / kDeg).epsilon(1e-9));

    // angle ranges and the coefficient matching invariants
    for (double t : {0.0, 0.05, 0.3, kLn2, 1.0, 2.5, 8.0}) {
        const AngleSetting a = solve_angles(t);
        CHECK(a.theta1Deg >= 0.0);
        CHECK(a.theta1Deg < 30.0 + 1e-9);
        CHECK(a.theta2Deg <= 0.0);
        CHECK(a.theta2Deg > -45.0);
        const MapCoefficients mc =
            map_coefficients(t, {EnvironmentKind::MultimodeVacuum});
        CHECK(std::abs(std::cos(2 * a.theta1Deg * kDeg) - mc.Q.real()) <= 1e-12);
        CHECK(std::abs(std::sin(2 * a.theta1Deg * kDeg) *
                           std::sin(2 * a.theta2Deg * kDeg) -
                       mc.R.real()) <= 1e-12);
        CHECK(std::abs(std::sin(2 * a.theta1Deg * kDeg) *
                           std::cos(2 * a.theta2Deg * kDeg) -
                       mc.S.real()) <= 1e-12);
    }
}

TEST_CASE("bundled evolution netlist has the documented layout") {
    const CircuitIR ir = build_evolution_circuit(solve_angles(kLn2));
    REQUIRE(ir.elements.size() == 8);
    CHECK(ir.elements[0].kind == ElementKind::Mask);
    CHECK(ir.elements[1].kind == ElementKind::Hwp);
    CHECK(ir.elements[2].kind == ElementKind::Pbs);
    CHECK(ir.elements[3].kind == ElementKind::Gp);
    CHECK(ir.elements[4].kind == ElementKind::Dove);
    CHECK(ir.elements[5].kind == ElementKind::Mzim);
    CHECK(ir.elements[6].kind == ElementKind::Gp);
    CHECK(ir.elements[7].kind == ElementKind::Pbs);
    CHECK(ir.detectors.size() == 3);
}

TEST_CASE("evolution circuit at zero angles is the identity on |Vh>") {
    const CompiledCircuit cc =
        compile(build_evolution_circuit(AngleSetting{0.0, 0.0, 0.0}));
    const PhotonState out = cc.propagate(cc.initial_state());
    const Complex amp = out.amp(sys_index('V', 'h'), cc.pathIndex.at("env0"));
    CHECK(std::abs(amp - Complex(1, 0)) <= 1e-12);
    CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolution circuit reproduces the overall three-term transformation") {
    for (double t : {0.0, 0.2, kLn2, 1.0, 2.0, 4.0, 8.0}) {
        const AngleSetting a = solve_angles(t);
        const CompiledCircuit cc = compile(build_evolution_circuit(a));
        const PhotonState out = cc.propagate(cc.initial_state());
        const double c1 = std::cos(2 * a.theta1Deg * kDeg);
        const double s1 = std::sin(2 * a.theta1Deg * kDeg);
        const double c2 = std::cos(2 * a.theta2Deg * kDeg);
        const double s2 = std::sin(2 * a.theta2Deg * kDeg);
        const int env0 = cc.pathIndex.at("env0");
        const int env1 = cc.pathIndex.at("env1");
        CHECK(std::abs(out.amp(sys_index('V', 'h'), env0) - Complex(c1, 0)) <= 1e-12);
        CHECK(std::abs(out.amp(sys_index('H', 'v'), env0) - Complex(s1 * s2, 0)) <=
              1e-12);
        CHECK(std::abs(out.amp(sys_index('H', 'h'), env1) - Complex(s1 * c2, 0)) <=
              1e-12);
        // nothing anywhere else
        double rest = out.amplitudes.squaredNorm() -
                      std::norm(out.amp(sys_index('V', 'h'), env0)) -
                      std::norm(out.amp(sys_index('H', 'v'), env0)) -
                      std::norm(out.amp(sys_index('H', 'h'), env1));
        CHECK(std::abs(rest) <= 1e-12);
    }
}

TEST_CASE("evolution circuit in the asymptotic regime hits the limit amplitudes") {
    const CompiledCircuit cc = compile(build_evolution_circuit(solve_angles(60.0)));
    const PhotonState out = cc.propagate(cc.initial_state());
    const int env0 = cc.pathIndex.at("env0");
    const int env1 = cc.pathIndex.at("env1");
    CHECK(std::abs(out.amp(sys_index('V', 'h'), env0) - Complex(0.5, 0)) <= 1e-9);
    CHECK(std::abs(out.amp(sys_index('H', 'v'), env0) - Complex(-0.5, 0)) <= 1e-9);
    CHECK(std::abs(out.amp(sys_index('H', 'h'), env1) - Complex(1 / kSqrt2, 0)) <=
          1e-9);
}

TEST_CASE("evolution circuit at ln 2 puts S^2 = 3/8 on the excited path") {
    const CompiledCircuit cc = compile(build_evolution_circuit(solve_angles(kLn2)));
    const PhotonState out = cc.propagate(cc.initial_state());
    const double p1 = out.branch(cc.pathIndex.at("env1")).squaredNorm();
    CHECK(p1 == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("reduced circuit state equals the analytic channel on a 30-point grid") {
    const DensityMatrix4 initial =
        DensityMatrix4::pure(ket_eg(), Basis::Computational);
    for (int i = 0; i < 30; ++i) {
        const double t = 6.0 * i / 29.0;
        const CompiledCircuit cc = compile(build_evolution_circuit(solve_angles(t)));
        const PhotonState out = cc.propagate(cc.initial_state());
        const DensityMatrix4 reduced = reduced_system_state(out);
        const DensityMatrix4 expected = evolve_analytic(initial, t);
        CHECK(linalg::max_norm(reduced.matrix() - expected.matrix()) <= 1e-9);
    }
}

TEST_CASE("reduced_system_state simple cases") {
    const CompiledCircuit cc = compile(parse_netlist(
        "source pol=V mode=h out=a\n"
        "bs in=a out=u,v\n"
        "hwp theta=45 ref=V in=u out=u1\n"  // V->H on the upper arm
        "detector id=U in=u1\n"
        "detector id=V in=v\n"));
    // single-path pure state
    const PhotonState single = cc.inject(sys_ket('V', 'h'), cc.pathIndex.at("a"));
    const DensityMatrix4 pure = reduced_system_state(single);
    CHECK(pure.matrix()(1, 1).real() == doctest::Approx(1.0));

    // equal superposition of |Vh> and |Hh> on two paths decoheres
    const PhotonState out = cc.propagate(cc.initial_state());
    const DensityMatrix4 mixed = reduced_system_state(out);
    CHECK(mixed.matrix()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mixed.matrix()(3, 3).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(mixed.matrix()(1, 3)) <= 1e-12);
}

TEST_CASE("measurement circuit sorts the collective basis onto D1..D4") {
    const std::array<double, 4> fromSinglet = measure(
        (sys_ket('V', 'h') - sys_ket('H', 'v')) / kSqrt2);
    CHECK(fromSinglet[1] == doctest::Approx(1.0).epsilon(1e-12));  // D2

    const std::array<double, 4> fromTriplet0 = measure(
        (sys_ket('V', 'h') + sys_ket('H', 'v')) / kSqrt2);
    CHECK(fromTriplet0[0] == doctest::Approx(1.0).epsilon(1e-12));  // D1

    const std::array<double, 4> fromEe = measure(sys_ket('V', 'v'));
    CHECK(fromEe[2] == doctest::Approx(1.0).epsilon(1e-12));  // D3

    const std::array<double, 4> fromGg = measure(sys_ket('H', 'h'));
    CHECK(fromGg[3] == doctest::Approx(1.0).epsilon(1e-12));  // D4

    // |eg> splits evenly between D1 and D2
    const std::array<double, 4> fromEg = measure(sys_ket('V', 'h'));
    CHECK(fromEg[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fromEg[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("measurement probabilities are complete for random inputs") {
    rng::Stream stream(11223);
    for (int i = 0; i < 20; ++i) {
        Vec4 psi;
        for (int k = 0; k < 4; ++k) psi(k) = Complex(stream.normal(), stream.normal());
        psi.normalize();
        const std::array<double, 4> p = measure(psi);
        CHECK(p[0] + p[1] + p[2] + p[3] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("count weights equal the witness eigenvalues permuted by the detector map") {
    const auto& w = witness_count_weights();
    CHECK(w[0] == 1.0 / kSqrt2);
    CHECK(w[1] == -1.0 / kSqrt2);
    CHECK(w[2] == 1.0 + 1.0 / kSqrt2);
    CHECK(w[3] == 1.0 - 1.0 / kSqrt2);
}

TEST_CASE("compiled circuits are unitary, including randomized chains") {
    // bundled circuits
    for (const CircuitIR& ir :
         {build_evolution_circuit(solve_angles(1.2)), build_measurement_circuit()}) {
        const CompiledCircuit cc = compile(ir);
        const Eigen::MatrixXcd gram = cc.unitary.adjoint() * cc.unitary;
        CHECK((gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols()))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-9);
    }
    // randomized single-path element chains
    rng::Stream stream(777);
    for (int trial = 0; trial < 100; ++trial) {
        std::ostringstream os;
        os << "source pol=V mode=h out=n0\n";
        int label = 0;
        const int len = 1 + static_cast<int>(stream.uniform() * 6);
        for (int i = 0; i < len; ++i) {
            const int kind = static_cast<int>(stream.uniform() * 5);
            const double angle = 360.0 * stream.uniform() - 180.0;
            switch (kind) {
                case 0:
                    os << "hwp theta=" << angle << " ref=" << (stream.uniform() < 0.5 ? 'H' : 'V');
                    break;
                case 1: os << "dove theta=" << angle; break;
                case 2: os << "gp phi=" << angle * kDeg; break;
                case 3: os << "cnot"; break;
                default: os << "mirror"; break;
            }
            os << " in=n" << label << " out=n" << (label + 1) << "\n";
            ++label;
        }
        os << "detector id=D in=n" << label << "\n";
        const CompiledCircuit cc = compile(parse_netlist(os.str()));
        const Eigen::MatrixXcd gram = cc.unitary.adjoint() * cc.unitary;
        CHECK((gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols()))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-9);
    }
}

TEST_CASE("run_experiment: exact probabilities at gammaT = 0") {
    const ExperimentResult res = run_experiment(0.0, 0, 1);
    CHECK(res.exactProbs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res.exactProbs[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(res.exactProbs[2]) <= 1e-12);
    CHECK(std::abs(res.exactProbs[3]) <= 1e-12);
    CHECK(std::abs(res.witnessExact) <= 1e-12);
    CHECK(std::abs(res.concurrenceExact) <= 1e-12);
}

TEST_CASE("run_experiment: exact witness at large gammaT") {
    const ExperimentResult res = run_experiment(30.0, 0, 1);
    CHECK(res.witnessExact == doctest::Approx((1.0 - kSqrt2) / 2.0).epsilon(1e-9));
    CHECK(res.concurrenceExact == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("run_experiment: counting estimate converges and repeats exactly") {
    const ExperimentResult a = run_experiment(kLn2, 1000000, 42);
    const ExperimentResult b = run_experiment(kLn2, 1000000, 42);
    CHECK(a.record.counts == b.record.counts);
    CHECK(a.witnessEstimate == b.witnessEstimate);
    std::uint64_t total = 0;
    for (const auto& [id, c] : a.record.counts) total += c;
    CHECK(total == 1000000);
    CHECK(std::abs(a.concurrenceEstimate - 0.375) <= 3.0 * a.concurrenceStdError);

    const ExperimentResult c = run_experiment(kLn2, 1000000, 43);
    CHECK(a.record.counts != c.record.counts);
}

TEST_CASE("witness estimate matches the trace functional with exact probabilities") {
    for (double t : {0.0, 0.4, kLn2, 1.5, 3.0}) {
        const ExperimentResult res = run_experiment(t, 0, 0);
        const DensityMatrix4 rho = evolve_analytic(
            DensityMatrix4::pure(ket_eg(), Basis::Computational), t);
        CHECK(std::abs(res.witnessExact - static_witness().trace_against(rho)) <=
              1e-12);
    }
}

TEST_CASE("bundled netlist files match the embedded templates") {
    namespace fs = std::filesystem;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        REQUIRE(in.good());
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    const fs::path root = fs::path(CESIM_SOURCE_DIR) / "netlists";
    CHECK(slurp(root / "fig1_evolution.net") == evolution_netlist_template());
    CHECK(slurp(root / "fig3_measurement.net") == measurement_netlist());
}
