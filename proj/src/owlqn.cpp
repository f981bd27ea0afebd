#include "coldmtc/owlqn.hpp"

#include <cmath>
#include <deque>

#include "coldmtc/common.hpp"

namespace coldmtc {

void OwlqnConfig::validate() const {
    if (memory < 1) throw ConfigError("OWL-QN memory must be >= 1");
    if (!(grad_tol > 0.0)) throw ConfigError("OWL-QN grad_tol must be > 0");
    if (!(sufficient_decrease > 0.0 && sufficient_decrease < 1.0))
        throw ConfigError("OWL-QN sufficient_decrease must lie in (0, 1)");
    if (!(shrink > 0.0 && shrink < 1.0)) throw ConfigError("OWL-QN shrink must lie in (0, 1)");
    if (max_line_search < 1) throw ConfigError("OWL-QN max_line_search must be >= 1");
}

std::string_view to_string(Termination t) {
    switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIters: return "max_iters";
    case Termination::LineSearchFailure: return "line_search_failure";
    }
    return "unknown";
}

Eigen::VectorXd pseudo_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& grad, const Eigen::VectorXd& l1) {
    Eigen::VectorXd pg(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double c = l1[j];
        if (x[j] > 0.0) pg[j] = grad[j] + c;
        else if (x[j] < 0.0) pg[j] = grad[j] - c;
        else if (grad[j] + c < 0.0) pg[j] = grad[j] + c;  // moving right decreases
        else if (grad[j] - c > 0.0) pg[j] = grad[j] - c;  // moving left decreases
        else pg[j] = 0.0;
    }
    return pg;
}

namespace {

double l1_penalty(const Eigen::VectorXd& x, const Eigen::VectorXd& l1) { return l1.cwiseProduct(x.cwiseAbs()).sum(); }

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

struct Pair {
    Eigen::VectorXd s, y;
    double rho;
};

// Two-loop recursion: returns H * v for the current inverse-Hessian estimate.
Eigen::VectorXd apply_inverse_hessian(const std::deque<Pair>& hist, const Eigen::VectorXd& v) {
    Eigen::VectorXd q = v;
    std::vector<double> a(hist.size());
    for (std::size_t k = hist.size(); k-- > 0;) {
        a[k] = hist[k].rho * hist[k].s.dot(q);
        q -= a[k] * hist[k].y;
    }
    if (!hist.empty()) {
        const auto& last = hist.back();
        q *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (std::size_t k = 0; k < hist.size(); ++k) {
        const double b = hist[k].rho * hist[k].y.dot(q);
        q += (a[k] - b) * hist[k].s;
    }
    return q;
}

}  // namespace

OwlqnReport minimize(const SmoothObjective& objective, const Eigen::VectorXd& l1_weights, Eigen::VectorXd x0,
                     const OwlqnConfig& cfg) {
    cfg.validate();
    const Eigen::Index n = x0.size();
    if (l1_weights.size() != n) throw ConfigError("l1_weights length differs from x0");
    for (Eigen::Index j = 0; j < n; ++j)
        if (!(l1_weights[j] >= 0.0) || !std::isfinite(l1_weights[j]))
            throw ConfigError("l1_weights must be finite and >= 0");
    const auto penalised = [&](Eigen::Index j) { return l1_weights[j] > 0.0; };

    OwlqnReport rep;
    Eigen::VectorXd x = std::move(x0);
    Eigen::VectorXd g(n);
    double f = objective(x, g);
    if (!std::isfinite(f) || !g.allFinite()) throw NumericalError("objective or gradient not finite at x0");
    double F = f + l1_penalty(x, l1_weights);
    rep.trace.push_back(F);
    if (cfg.keep_path) rep.path.push_back(x);

    std::deque<Pair> hist;
    Eigen::VectorXd pg = pseudo_gradient(x, g, l1_weights);
    rep.reason = Termination::MaxIters;

    for (std::size_t iter = 0;; ++iter) {
        if (pg.lpNorm<Eigen::Infinity>() <= cfg.grad_tol * std::max(1.0, x.lpNorm<Eigen::Infinity>())) {
            rep.reason = Termination::Converged;
            break;
        }
        if (iter >= cfg.max_iters) break;

        Eigen::VectorXd d = -apply_inverse_hessian(hist, pg);
        for (Eigen::Index j = 0; j < n; ++j)
            if (penalised(j) && d[j] * pg[j] >= 0.0) d[j] = 0.0;
        if (d.dot(pg) >= 0.0) {
            // Curvature estimate went bad; restart from steepest descent.
            hist.clear();
            d = -pg;
        }

        Eigen::VectorXd orthant(n);
        for (Eigen::Index j = 0; j < n; ++j) orthant[j] = x[j] != 0.0 ? sign(x[j]) : sign(-pg[j]);

        double step = hist.empty() ? std::min(1.0, 1.0 / d.norm()) : 1.0;
        bool accepted = false;
        Eigen::VectorXd xn(n), gn(n);
        double fn = 0.0, Fn = 0.0;
        for (std::size_t ls = 0; ls < cfg.max_line_search; ++ls, step *= cfg.shrink) {
            xn = x + step * d;
            for (Eigen::Index j = 0; j < n; ++j)
                if (penalised(j) && sign(xn[j]) != orthant[j]) xn[j] = 0.0;
            fn = objective(xn, gn);
            if (!std::isfinite(fn) || !gn.allFinite()) continue;
            Fn = fn + l1_penalty(xn, l1_weights);
            if (Fn <= F + cfg.sufficient_decrease * pg.dot(xn - x) && Fn <= F) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            rep.reason = Termination::LineSearchFailure;
            break;
        }

        Eigen::VectorXd s = xn - x;
        Eigen::VectorXd y = gn - g;
        const double sy = s.dot(y);
        if (sy > 1e-16 * s.norm() * y.norm() && sy > 0.0) {
            hist.push_back({std::move(s), std::move(y), 1.0 / sy});
            if (hist.size() > cfg.memory) hist.pop_front();
        }
        x = std::move(xn);
        g = gn;
        f = fn;
        F = Fn;
        pg = pseudo_gradient(x, g, l1_weights);
        ++rep.iterations;
        rep.trace.push_back(F);
        if (cfg.keep_path) rep.path.push_back(x);
    }

    rep.x = std::move(x);
    rep.objective = F;
    rep.pseudo_grad_norm = pg.lpNorm<Eigen::Infinity>();
    return rep;
}

}  // namespace coldmtc
