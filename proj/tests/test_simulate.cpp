#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "lpvr/simulate.hpp"
#include "lpvr/trajectory_io.hpp"
#include "support.hpp"

using namespace lpvr;
using namespace lpvr::testing;

namespace {

Vector pt(double v) { return Vector::Constant(1, v); }

SignalTrajectory random_signal(std::mt19937_64& rng, std::size_t dim, std::size_t n) {
    return SignalTrajectory::from_rows(random_matrix(rng, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim)));
}

double max_abs_signal(const SignalTrajectory& s) {
    double m = 0.0;
    for (const auto& v : s.samples) {
        m = std::max(m, v.cwiseAbs().maxCoeff());
    }
    return m;
}

double max_diff(const SignalTrajectory& a, const SignalTrajectory& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        m = std::max(m, (a[k] - b[k]).cwiseAbs().maxCoeff());
    }
    return m;
}

std::vector<Vector> random_window(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
    std::vector<Vector> w;
    for (std::size_t i = 0; i < n; ++i) {
        w.push_back(random_matrix(rng, static_cast<Eigen::Index>(dim), 1));
    }
    return w;
}

} // namespace

TEST(SimulateIo, HandComputedSiso) {
    // y_k = -0.5 y_{k-1} + u_k + 2 u_{k-1}.
    Matrix a(1, 1);
    a << 0.5;
    Matrix b0(1, 1);
    b0 << 1.0;
    Matrix b1(1, 1);
    b1 << 2.0;
    const auto m = lti_model({a}, {b0, b1});
    const auto u = SignalTrajectory::from_rows((Matrix(4, 1) << 1, 0, 0, 1).finished());
    const auto y = simulate_io(m, u, SchedulingTrajectory::constant(pt(0.0), 4));
    const double expected[] = {1.0, 1.5, -0.75, 1.375};
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_DOUBLE_EQ(y[k][0], expected[k]);
    }
}

TEST(SimulateIo, InitialWindowsNewestFirst) {
    // y_k = -a1 y_{k-1} - a2 y_{k-2} + b1 u_{k-1} with zero input from k = 0.
    Matrix a1(1, 1);
    a1 << 0.1;
    Matrix a2(1, 1);
    a2 << 0.2;
    Matrix z(1, 1);
    z << 0.0;
    Matrix b1(1, 1);
    b1 << 3.0;
    const auto m = lti_model({a1, a2}, {z, b1});
    const auto y = simulate_io(m, SignalTrajectory::zeros(1, 2), SchedulingTrajectory::constant(pt(0.0), 2),
                               {pt(1.0), pt(10.0)}, {pt(2.0)});
    EXPECT_DOUBLE_EQ(y[0][0], -0.1 * 1.0 - 0.2 * 10.0 + 3.0 * 2.0);
    EXPECT_DOUBLE_EQ(y[1][0], -0.1 * y[0][0] - 0.2 * 1.0);
}

TEST(SimulateIo, Errors) {
    const auto m = example1_model();
    EXPECT_THROW(simulate_io(m, SignalTrajectory::zeros(1, 3), SchedulingTrajectory::scalar({2.0, 2.0})),
                 DimensionError);
    EXPECT_THROW(simulate_io(m, SignalTrajectory::zeros(2, 2), SchedulingTrajectory::scalar({2.0, 2.0})),
                 DimensionError);
    try {
        simulate_io(m, SignalTrajectory::zeros(1, 3), SchedulingTrajectory::scalar({2.0, 2.0, 0.5}));
        FAIL() << "expected out-of-domain error";
    } catch (const OutOfDomainError& e) {
        EXPECT_NE(std::string(e.what()).find("step 2"), std::string::npos) << e.what();
    }
}

TEST(SimulateIo, Example3OutputEqualsInput) {
    std::mt19937_64 rng(21);
    const auto m = example3_model();
    const auto p = random_trajectory(rng, {Interval{-0.9, 0.9}}, 200);
    const auto u = random_signal(rng, 1, 200);
    EXPECT_LT(max_diff(simulate_io(m, u, p), u), 1e-12);
}

// The defining property of the realization.
TEST(SimulationEquivalence, IoMatchesStateSpaceFromRest) {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 100; ++t) {
        const auto m = random_model(rng, random_spec(rng, 3, 4));
        const auto r = build_direct(m);
        const auto p = random_trajectory(rng, m.domain(), 200);
        const auto u = random_signal(rng, m.n_u(), 200);
        const auto y_io = simulate_io(m, u, p);
        const auto y_ss = simulate_ss(r, Vector::Zero(static_cast<Eigen::Index>(r.n_x())), u, p).y;
        EXPECT_LT(max_diff(y_io, y_ss), 1e-9 * (1.0 + max_abs_signal(y_io))) << "instance " << t;
    }
}

TEST(SimulationEquivalence, PackedInitialWindows) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 50; ++t) {
        const auto m = random_model(rng, random_spec(rng, 3, 4));
        const auto r = build_direct(m);
        const auto iy = random_window(rng, m.n_a(), m.n_y());
        const auto iu = random_window(rng, m.n_b() - 1, m.n_u());
        const auto p = random_trajectory(rng, m.domain(), 60);
        const auto u = random_signal(rng, m.n_u(), 60);
        const auto y_io = simulate_io(m, u, p, iy, iu);
        const auto y_ss = simulate_ss(r, pack_initial_state(r, iy, iu), u, p).y;
        EXPECT_LT(max_diff(y_io, y_ss), 1e-9 * (1.0 + max_abs_signal(y_io))) << "instance " << t;
    }
}

TEST(PackInitialState, Ordering) {
    Matrix a(2, 2);
    a.setIdentity();
    Matrix b(2, 1);
    b << 1, 1;
    const auto r = build_direct(lti_model({0.1 * a, 0.1 * a}, {b, b, b}));
    const Vector x = pack_initial_state(r, {(Vector(2) << 1, 2).finished(), (Vector(2) << 3, 4).finished()},
                                        {pt(5.0), pt(6.0)});
    EXPECT_EQ(x, (Vector(6) << 1, 2, 3, 4, 5, 6).finished());
}

TEST(ResponseDecomposition, IdentityWithPlusSign) {
    std::mt19937_64 rng(24);
    for (int t = 0; t < 50; ++t) {
        const auto m = random_model(rng, random_spec(rng, 3, 3));
        const auto r = build_direct(m);
        const std::size_t k = 1 + static_cast<std::size_t>(t % 6);
        const auto p = random_trajectory(rng, m.domain(), k);
        const auto u = random_signal(rng, m.n_u(), k);
        const Vector x0 = random_matrix(rng, static_cast<Eigen::Index>(r.n_x()), 1);
        const auto d = response_decomposition(r, p);
        EXPECT_EQ(d.sign_convention, "plus");
        const Vector y = simulate_ss(r, x0, u, p).y.stacked();
        const Vector rebuilt = d.O * x0 + d.Gamma * u.stacked();
        EXPECT_LT((y - rebuilt).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + y.cwiseAbs().maxCoeff())) << "instance " << t;
    }
}

TEST(ResponseDecomposition, GammaIsBlockLowerTriangularWithJOnDiagonal) {
    const auto r = build_direct(example1_model());
    const auto p = SchedulingTrajectory::scalar({1.5, 2.0, 3.0});
    const auto d = response_decomposition(r, p);
    for (Eigen::Index i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(d.Gamma(i, i), p[static_cast<std::size_t>(i)][0]);
        for (Eigen::Index j = i + 1; j < 3; ++j) {
            EXPECT_EQ(d.Gamma(i, j), 0.0);
        }
    }
}

TEST(EstimateInitialState, RecoversObservableComponent) {
    std::mt19937_64 rng(25);
    for (int t = 0; t < 40; ++t) {
        const auto m = random_model(rng, random_spec(rng, 3, 3));
        const auto r = build_direct(m);
        const std::size_t k = r.n_x() + 2;
        const auto p = random_trajectory(rng, m.domain(), k);
        const auto u = random_signal(rng, m.n_u(), k);
        const Vector x0 = random_matrix(rng, static_cast<Eigen::Index>(r.n_x()), 1);
        const auto y = simulate_ss(r, x0, u, p).y;
        const auto est = estimate_initial_state(r, p, u, y);
        // The estimate equals x0 up to ker O_k.
        const Matrix& kb = est.kernel_ambiguity;
        Vector diff = est.x0_hat - x0;
        if (kb.cols() > 0) {
            diff -= kb * (kb.transpose() * diff);
        }
        EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-8) << "instance " << t;
        EXPECT_LT(est.residual, 1e-8 * (1.0 + y.stacked().norm()));
    }
}

TEST(EstimateInitialState, Example3AmbiguityIsOnesDirection) {
    const auto r = build_direct(example3_model());
    const auto p = SchedulingTrajectory::scalar({1.0, -2.0, 0.5});
    Vector x0(2);
    x0 << 3.0, 1.0;
    const auto u = SignalTrajectory::zeros(1, 3);
    const auto est = estimate_initial_state(r, p, u, simulate_ss(r, x0, u, p).y);
    ASSERT_EQ(est.kernel_ambiguity.cols(), 1);
    EXPECT_NEAR(std::abs(est.kernel_ambiguity(0, 0)), std::abs(est.kernel_ambiguity(1, 0)), 1e-12);
    // Minimum-norm answer: the projection of [3, 1] onto [1, -1].
    EXPECT_NEAR(est.x0_hat[0], 1.0, 1e-12);
    EXPECT_NEAR(est.x0_hat[1], -1.0, 1e-12);
}

TEST(TransformAlongTrajectory, PreservesInputOutputMap) {
    std::mt19937_64 rng(26);
    for (int t = 0; t < 30; ++t) {
        const auto m = random_model(rng, random_spec(rng, 2, 3));
        const auto r = build_direct(m);
        const auto nx = static_cast<Eigen::Index>(r.n_x());
        const Matrix base = random_matrix(rng, nx, nx, 0.3);
        const Matrix slope = random_matrix(rng, nx, nx, 0.1);
        auto t_eval = [&](const Vector& p) -> Matrix {
            return Matrix::Identity(nx, nx) + base + p[0] * slope;
        };
        const auto p = random_trajectory(rng, m.domain(), 41);
        const auto steps = transform_along_trajectory(r, t_eval, p);
        ASSERT_EQ(steps.size(), 40u);
        const auto u = random_signal(rng, m.n_u(), 40);
        const Vector x0 = random_matrix(rng, nx, 1);
        const Vector z0 = t_eval(p[0]).lu().solve(x0);
        const SchedulingTrajectory head{std::vector<Vector>(p.points.begin(), p.points.end() - 1)};
        const auto y = simulate_ss(r, x0, u, head).y;
        const auto yt = simulate_transformed(steps, z0, u);
        EXPECT_LT(max_diff(y, yt), 1e-9 * (1.0 + max_abs_signal(y))) << "instance " << t;
    }
}

TEST(TransformAlongTrajectory, RejectsSingularTransform) {
    const auto r = build_direct(example1_model());
    auto t_eval = [](const Vector&) -> Matrix {
        Matrix t = Matrix::Identity(3, 3);
        t(2, 2) = 0.0;
        return t;
    };
    EXPECT_THROW(transform_along_trajectory(r, t_eval, SchedulingTrajectory::scalar({2.0, 3.0})), NumericalError);
    EXPECT_THROW(transform_along_trajectory(r, t_eval, SchedulingTrajectory::scalar({2.0})), DimensionError);
}

// ---------------------------------------------------------------------------
// Trajectory tables

TEST(TrajectoryIo, RoundTripIsExact) {
    std::mt19937_64 rng(27);
    Table t;
    t.header = {"u1", "u2"};
    t.values = random_matrix(rng, 7, 2, 1e3);
    const auto back = parse_table(format_table(t));
    EXPECT_EQ(back.header, t.header);
    EXPECT_EQ(back.values, t.values);
}

TEST(TrajectoryIo, ParseErrorsNameLineAndColumn) {
    try {
        parse_table("u1,u2\n1,2\n3,x\n", "in.csv");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3, column 2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_table("u1,u2\n1\n"), DimensionError);
    EXPECT_THROW(parse_table(""), ParseError);
}

TEST(TrajectoryIo, BlankLinesAndSpacesIgnored) {
    const auto t = parse_table("p1\n\n 1.5 \n2\n");
    ASSERT_EQ(t.values.rows(), 2);
    EXPECT_EQ(t.values(0, 0), 1.5);
    const auto s = table_to_scheduling(t);
    EXPECT_EQ(s.size(), 2u);
}

TEST(TrajectoryIo, SaveAndLoad) {
    const auto path = std::filesystem::temp_directory_path() / "lpvr_traj_test.csv";
    const auto sig = SignalTrajectory::from_rows((Matrix(2, 2) << 1, 2, 3, 4).finished());
    save_table(path.string(), signal_to_table(sig, "y"));
    const auto t = load_table(path.string());
    EXPECT_EQ(t.header, (std::vector<std::string>{"y1", "y2"}));
    EXPECT_EQ(table_to_signal(t).stacked(), sig.stacked());
    std::filesystem::remove(path);
    EXPECT_THROW(load_table(path.string()), Error);
}
