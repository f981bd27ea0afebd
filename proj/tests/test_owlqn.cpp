#include "doctest.h"
#include "test_util.hpp"

#include <deque>

#include "coldmtc/owlqn.hpp"

using namespace coldmtc;
using Eigen::VectorXd;

namespace {

// f(x) = 0.5 * sum a_j (x_j - b_j)^2
SmoothObjective diagonal_quadratic(const VectorXd& a, const VectorXd& b) {
    return [a, b](const VectorXd& x, VectorXd& g) {
        const VectorXd r = x - b;
        g = a.cwiseProduct(r);
        return 0.5 * r.cwiseProduct(g).sum();
    };
}

// f(x) = 0.5 ||A x - y||^2
SmoothObjective least_squares(const Eigen::MatrixXd& A, const VectorXd& y) {
    return [A, y](const VectorXd& x, VectorXd& g) {
        const VectorXd r = A * x - y;
        g = A.transpose() * r;
        return 0.5 * r.squaredNorm();
    };
}

// Smooth, strictly convex, non-quadratic: logistic loss plus a small ridge.
SmoothObjective logistic(const Eigen::MatrixXd& A, const VectorXd& labels) {
    return [A, labels](const VectorXd& x, VectorXd& g) {
        const VectorXd z = A * x;
        double f = 0.0;
        VectorXd dz(z.size());
        for (Eigen::Index k = 0; k < z.size(); ++k) {
            const double m = -labels[k] * z[k];
            f += m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
            dz[k] = -labels[k] / (1.0 + std::exp(-m));
        }
        g = A.transpose() * dz + 0.01 * x;
        return f + 0.005 * x.squaredNorm();
    };
}

// Reference L-BFGS written independently: same step rule (first step
// min(1, 1/||d||) whenever memory is empty, halving backtracking, Armijo with
// 1e-4, curvature pairs kept only when s'y > 0).
std::vector<VectorXd> lbfgs_reference(const SmoothObjective& fn, VectorXd x, std::size_t memory,
                                      std::size_t iters, double tol) {
    std::vector<VectorXd> path{x};
    VectorXd g;
    double f = fn(x, g);
    std::deque<VectorXd> S, Y;
    for (std::size_t it = 0; it < iters; ++it) {
        if (g.lpNorm<Eigen::Infinity>() <= tol * std::max(1.0, x.lpNorm<Eigen::Infinity>())) break;
        VectorXd q = g;
        std::vector<double> alpha(S.size());
        for (std::size_t k = S.size(); k-- > 0;) {
            alpha[k] = S[k].dot(q) / Y[k].dot(S[k]);
            q -= alpha[k] * Y[k];
        }
        if (!S.empty()) q *= S.back().dot(Y.back()) / Y.back().dot(Y.back());
        for (std::size_t k = 0; k < S.size(); ++k) {
            const double beta = Y[k].dot(q) / Y[k].dot(S[k]);
            q += (alpha[k] - beta) * S[k];
        }
        const VectorXd d = -q;
        double t = S.empty() ? std::min(1.0, 1.0 / d.norm()) : 1.0;
        VectorXd xn, gn;
        double fnew = 0.0;
        bool ok = false;
        for (int ls = 0; ls < 50; ++ls, t *= 0.5) {
            xn = x + t * d;
            fnew = fn(xn, gn);
            if (fnew <= f + 1e-4 * g.dot(xn - x) && fnew <= f) {
                ok = true;
                break;
            }
        }
        if (!ok) break;
        const VectorXd s = xn - x, y = gn - g;
        const double sy = s.dot(y);
        if (sy > 1e-16 * s.norm() * y.norm() && sy > 0.0) {
            S.push_back(s);
            Y.push_back(y);
            if (S.size() > memory) {
                S.pop_front();
                Y.pop_front();
            }
        }
        x = xn;
        g = gn;
        f = fnew;
        path.push_back(x);
    }
    return path;
}

}  // namespace

TEST_CASE("pseudo-gradient rule") {
    VectorXd x(4), g(4), c(4);
    x << 1, -1, 0, 0;
    g << 0.5, 0.5, 0.5, -3;
    c << 1, 1, 1, 1;
    const auto pg = pseudo_gradient(x, g, c);
    CHECK(pg[0] == 1.5);
    CHECK(pg[1] == -0.5);
    CHECK(pg[2] == 0.0);   // |g| <= c at zero
    CHECK(pg[3] == -2.0);  // right derivative negative
    VectorXd c0 = VectorXd::Zero(4);
    CHECK(pseudo_gradient(x, g, c0) == g);
}

TEST_CASE("soft-threshold closed form on a 50-dim diagonal quadratic") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> ua(0.5, 3.0), ub(-2.0, 2.0), uc(0.0, 1.5);
    const Eigen::Index n = 50;
    VectorXd a(n), b(n), c(n), expected(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        a[j] = ua(rng);
        b[j] = ub(rng);
        c[j] = uc(rng);
        // argmin 0.5 a (x-b)^2 + c|x| = sign(b) max(|b| - c/a, 0)
        const double mag = std::max(std::abs(b[j]) - c[j] / a[j], 0.0);
        expected[j] = b[j] > 0 ? mag : -mag;
    }
    OwlqnConfig cfg;
    cfg.grad_tol = 1e-10;
    cfg.max_iters = 1000;
    const auto rep = minimize(diagonal_quadratic(a, b), c, VectorXd::Zero(n), cfg);
    CHECK(rep.reason == Termination::Converged);
    CHECK((rep.x - expected).lpNorm<Eigen::Infinity>() < 1e-6);
    std::size_t zeros = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        // Gradient magnitude at zero is a_j |b_j|.
        if (c[j] > a[j] * std::abs(b[j])) {
            CHECK(rep.x[j] == 0.0);
            ++zeros;
        }
    }
    CHECK(zeros > 5);
    for (std::size_t k = 1; k < rep.trace.size(); ++k) CHECK(rep.trace[k] <= rep.trace[k - 1]);
}

TEST_CASE("zero L1 weights reproduce plain L-BFGS") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 4; ++trial) {
        const Eigen::Index rows = 40, cols = 12;
        Eigen::MatrixXd A(rows, cols);
        for (auto& v : A.reshaped()) v = g(rng);
        VectorXd labels(rows);
        for (auto& v : labels) v = g(rng) > 0 ? 1.0 : -1.0;
        const auto fn = trial % 2 ? logistic(A, labels) : least_squares(A, A * VectorXd::Ones(cols) + labels);
        VectorXd x0(cols);
        for (auto& v : x0) v = g(rng);

        OwlqnConfig cfg;
        cfg.memory = 5;
        cfg.max_iters = 60;
        // Loose enough that neither run reaches the regime where line-search
        // comparisons are decided by rounding.
        cfg.grad_tol = 1e-6;
        cfg.keep_path = true;
        const auto rep = minimize(fn, VectorXd::Zero(cols), x0, cfg);
        const auto ref = lbfgs_reference(fn, x0, cfg.memory, cfg.max_iters, cfg.grad_tol);
        REQUIRE(rep.path.size() == ref.size());
        // Same arithmetic up to operation order, so rounding differences grow slowly over 60 steps.
        for (std::size_t k = 0; k < ref.size(); ++k)
            CHECK((rep.path[k] - ref[k]).lpNorm<Eigen::Infinity>() <=
                  1e-8 * std::max(1.0, ref[k].lpNorm<Eigen::Infinity>()));
    }
}

TEST_CASE("zero L1 weights match plain L-BFGS on a fixed quadratic to 1e-12") {
    const Eigen::Index n = 6;
    Eigen::MatrixXd Q(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) Q(r, c) = r == c ? 2.0 + static_cast<double>(r) : 0.3 / (1.0 + std::abs(static_cast<double>(r - c)));
    VectorXd b(n);
    b << 1, -2, 0.5, 3, -1, 0.25;
    auto fn = [&](const VectorXd& x, VectorXd& g) {
        g = Q * x - b;
        return 0.5 * x.dot(Q * x) - b.dot(x);
    };
    OwlqnConfig cfg;
    cfg.memory = 4;
    cfg.max_iters = 40;
    cfg.grad_tol = 1e-12;
    cfg.keep_path = true;
    const VectorXd x0 = VectorXd::Ones(n);
    const auto rep = minimize(fn, VectorXd::Zero(n), x0, cfg);
    const auto ref = lbfgs_reference(fn, x0, cfg.memory, cfg.max_iters, cfg.grad_tol);
    REQUIRE(rep.path.size() == ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK((rep.path[k] - ref[k]).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("lasso least squares reaches a point satisfying the optimality conditions") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g(0.0, 1.0);
    const Eigen::Index rows = 60, cols = 25;
    Eigen::MatrixXd A(rows, cols);
    for (auto& v : A.reshaped()) v = g(rng);
    VectorXd truth = VectorXd::Zero(cols);
    for (Eigen::Index j = 0; j < 5; ++j) truth[j] = 2.0 + j;
    VectorXd y = A * truth;
    for (auto& v : y) v += 0.1 * g(rng);
    const VectorXd c = VectorXd::Constant(cols, 5.0);

    OwlqnConfig cfg;
    cfg.grad_tol = 1e-9;
    cfg.max_iters = 2000;
    const auto fn = least_squares(A, y);
    const auto rep = minimize(fn, c, VectorXd::Zero(cols), cfg);
    CHECK(rep.reason == Termination::Converged);
    VectorXd grad;
    fn(rep.x, grad);
    for (Eigen::Index j = 0; j < cols; ++j) {
        if (rep.x[j] != 0.0) CHECK(std::abs(grad[j] + c[j] * (rep.x[j] > 0 ? 1 : -1)) < 1e-6);
        else CHECK(std::abs(grad[j]) <= c[j] + 1e-9);
    }
    for (Eigen::Index j = 5; j < cols; ++j) CHECK(rep.x[j] == 0.0);
    for (std::size_t k = 1; k < rep.trace.size(); ++k) CHECK(rep.trace[k] <= rep.trace[k - 1]);
}

TEST_CASE("mixed penalised and free coordinates") {
    VectorXd a(3), b(3), c(3);
    a << 1, 1, 1;
    b << 0.3, -0.3, 2.0;
    c << 0.0, 1.0, 1.0;
    OwlqnConfig cfg;
    cfg.grad_tol = 1e-12;
    const auto rep = minimize(diagonal_quadratic(a, b), c, VectorXd::Zero(3), cfg);
    CHECK(rep.x[0] == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(rep.x[1] == 0.0);
    CHECK(rep.x[2] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("terminations and failures") {
    VectorXd a = VectorXd::Ones(2), b(2);
    b << 1, 2;
    OwlqnConfig cfg;
    cfg.max_iters = 1;
    cfg.grad_tol = 1e-14;
    const auto one = minimize(diagonal_quadratic(a, b), VectorXd::Zero(2), VectorXd::Zero(2), cfg);
    CHECK(one.iterations == 1);
    CHECK(one.reason == Termination::MaxIters);

    // Already optimal at x0.
    const auto done = minimize(diagonal_quadratic(a, b), VectorXd::Zero(2), b, OwlqnConfig{});
    CHECK(done.reason == Termination::Converged);
    CHECK(done.iterations == 0);

    // Every trial point is non-finite: the start point is returned.
    SmoothObjective cliff = [](const VectorXd& x, VectorXd& g) {
        g = VectorXd::Ones(x.size());
        return x.isZero(0.0) ? 0.0 : NAN;
    };
    const auto fail = minimize(cliff, VectorXd::Zero(2), VectorXd::Zero(2), OwlqnConfig{});
    CHECK(fail.reason == Termination::LineSearchFailure);
    CHECK(fail.x.isZero(0.0));

    SmoothObjective broken = [](const VectorXd& x, VectorXd& g) {
        g = VectorXd::Zero(x.size());
        return NAN;
    };
    CHECK_THROWS_AS(minimize(broken, VectorXd::Zero(2), VectorXd::Zero(2), OwlqnConfig{}), NumericalError);
    CHECK_THROWS_AS(minimize(diagonal_quadratic(a, b), VectorXd::Constant(2, -1.0), VectorXd::Zero(2), OwlqnConfig{}),
                    ConfigError);
    CHECK_THROWS_AS(minimize(diagonal_quadratic(a, b), VectorXd::Zero(3), VectorXd::Zero(2), OwlqnConfig{}),
                    ConfigError);
    OwlqnConfig bad;
    bad.memory = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
