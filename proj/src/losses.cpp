#include "coldmtc/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coldmtc {

void Hyperparams::validate() const {
    for (double l : {lambda1, lambda2, lambda3})
        if (!std::isfinite(l) || l < 0.0) throw ConfigError("regularisation constants must be finite and >= 0");
    if (!std::isfinite(p) || p <= 0.0) throw ConfigError("push exponent p must be finite and > 0");
}

ModelParams::ModelParams(std::size_t num_users, std::size_t num_playlists, std::size_t dim)
    : users_(num_users), playlists_(num_playlists), dim_(dim),
      data_(Eigen::VectorXd::Zero(idx((num_users + num_playlists + 1) * dim))) {}

Eigen::Index ModelParams::offset_alpha(UserId u) const {
    if (u >= users_) throw ConfigError("user index " + std::to_string(u) + " out of range for parameters");
    return idx(u * dim_);
}

Eigen::Index ModelParams::offset_beta(PlaylistId i) const {
    if (i >= playlists_) throw ConfigError("playlist index " + std::to_string(i) + " out of range for parameters");
    return idx((users_ + i) * dim_);
}

Eigen::VectorXd ModelParams::weights(UserId u, PlaylistId i) const { return alpha(u) + beta(i) + mu(); }

RankingProblem RankingProblem::from_training(const Corpus& corpus, const FeatureMatrix& x,
                                             const TrainingData& training) {
    if (x.num_songs() != corpus.num_songs())
        throw ConfigError("feature matrix rows (" + std::to_string(x.num_songs()) + ") differ from corpus songs (" +
                          std::to_string(corpus.num_songs()) + ")");
    RankingProblem prob;
    prob.num_users = corpus.num_users();
    prob.num_playlists = corpus.num_playlists();
    prob.songs = training.songs;
    prob.features.resize(static_cast<Eigen::Index>(prob.songs.size()), static_cast<Eigen::Index>(x.dim()));
    std::vector<std::size_t> local(corpus.num_songs(), SIZE_MAX);
    for (std::size_t k = 0; k < prob.songs.size(); ++k) {
        local[prob.songs[k]] = k;
        const auto r = x.row(prob.songs[k]);
        std::copy(r.begin(), r.end(), prob.features.data() + k * x.dim());
    }
    for (std::size_t t = 0; t < training.playlists.size(); ++t) {
        const auto i = training.playlists[t];
        std::vector<SongId> pos;
        for (auto m : training.members[t]) pos.push_back(local[m]);
        std::sort(pos.begin(), pos.end());
        if (pos.empty() || pos.size() >= prob.songs.size())
            throw DataError("training playlist '" + corpus.playlist(i).id +
                            "' needs at least one member and one non-member among the training songs");
        prob.tasks.push_back({corpus.playlist(i).owner, i, Membership::make(std::move(pos), prob.songs.size())});
    }
    return prob;
}

double score(const ModelParams& theta, const FeatureMatrix& x, SongId m, UserId u, PlaylistId i) {
    if (x.dim() != theta.dim())
        throw ConfigError("feature dimension " + std::to_string(x.dim()) + " differs from parameter dimension " +
                          std::to_string(theta.dim()));
    const auto row = x.row(m);
    const Eigen::Map<const Eigen::VectorXd> xm(row.data(), static_cast<Eigen::Index>(row.size()));
    return theta.weights(u, i).dot(xm);
}

double bottom_push_risk(std::span<const double> scores, const Membership& labels) {
    if (labels.num_positive() == 0 || labels.num_negative() == 0)
        throw ConfigError("bottom-push risk needs at least one positive and one negative");
    if (scores.size() != labels.num_songs) throw ConfigError("score vector length differs from label universe");
    double lowest = std::numeric_limits<double>::infinity();
    for (auto m : labels.positives) lowest = std::min(lowest, scores[m]);
    const auto y = labels.labels();
    std::size_t violations = 0;
    for (std::size_t m = 0; m < scores.size(); ++m)
        if (!y[m] && lowest <= scores[m]) ++violations;
    return static_cast<double>(violations) / static_cast<double>(labels.num_negative());
}

namespace {

struct TaskEval {
    Eigen::VectorXd scores;
    std::vector<char> clamped;  // 1 where the raw score was clipped
    std::size_t num_clamped = 0;
};

TaskEval evaluate_task(const ModelParams& theta, const RankingProblem& prob, const RankingTask& task, bool clamp) {
    TaskEval ev;
    ev.scores = prob.features * theta.weights(task.user, task.playlist);
    ev.clamped.assign(static_cast<std::size_t>(ev.scores.size()), 0);
    if (!clamp) return ev;
    for (Eigen::Index k = 0; k < ev.scores.size(); ++k) {
        double& s = ev.scores[k];
        if (s > kScoreClamp || s < -kScoreClamp) {
            s = std::clamp(s, -kScoreClamp, kScoreClamp);
            ev.clamped[static_cast<std::size_t>(k)] = 1;
            ++ev.num_clamped;
        }
    }
    return ev;
}

// log sum_k exp(scale * s_k) over the selected rows, max-shifted.
template <class Rows>
double log_sum_exp(const Eigen::VectorXd& s, const Rows& rows, double scale) {
    double hi = -std::numeric_limits<double>::infinity();
    for (auto k : rows) hi = std::max(hi, scale * s[static_cast<Eigen::Index>(k)]);
    double acc = 0.0;
    for (auto k : rows) acc += std::exp(scale * s[static_cast<Eigen::Index>(k)] - hi);
    return hi + std::log(acc);
}

std::vector<std::size_t> negatives_of(const Membership& labels) {
    std::vector<std::size_t> neg;
    neg.reserve(labels.num_negative());
    std::size_t next = 0;
    for (std::size_t m = 0; m < labels.num_songs; ++m) {
        if (next < labels.positives.size() && labels.positives[next] == m) {
            ++next;
            continue;
        }
        neg.push_back(m);
    }
    return neg;
}

void check_shapes(const ModelParams& theta, const RankingProblem& prob) {
    if (theta.dim() != prob.dim() || theta.num_users() != prob.num_users || theta.num_playlists() != prob.num_playlists)
        throw ConfigError("parameter shape does not match the ranking problem");
    if (prob.tasks.empty()) throw ConfigError("ranking problem has no tasks");
}

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw NumericalError(std::string(what) + " overflowed despite the log-domain guard");
}

// Per-task value and (optionally) the gradient with respect to w_{u,i}.
struct TaskTerm {
    double value = 0.0;
    Eigen::VectorXd grad_w;
    std::size_t clamped = 0;
};

enum class Risk { Surrogate, Lse, Mtc };

TaskTerm task_term(const ModelParams& theta, const RankingProblem& prob, const RankingTask& task, Risk risk,
                   double p, bool want_grad) {
    const auto ev = evaluate_task(theta, prob, task, true);
    const auto& pos = task.labels.positives;
    const auto neg = negatives_of(task.labels);
    const double log_mp = std::log(static_cast<double>(pos.size()));
    const double log_mn = std::log(static_cast<double>(neg.size()));
    const double lse_neg = log_sum_exp(ev.scores, neg, 1.0);

    TaskTerm out;
    out.clamped = ev.num_clamped;
    // Gradient as F^T c for a coefficient vector c over the task's rows.
    Eigen::VectorXd coef;
    if (want_grad) coef = Eigen::VectorXd::Zero(ev.scores.size());
    auto add_softmax = [&](const auto& rows, double scale, double lse, double weight) {
        for (auto k : rows) {
            if (ev.clamped[k]) continue;
            const auto e = static_cast<Eigen::Index>(k);
            coef[e] += weight * std::exp(scale * ev.scores[e] - lse);
        }
    };

    switch (risk) {
    case Risk::Surrogate: {
        double lowest = std::numeric_limits<double>::infinity();
        for (auto k : pos) lowest = std::min(lowest, ev.scores[static_cast<Eigen::Index>(k)]);
        out.value = std::exp(lse_neg - lowest - log_mn);
        check_finite(out.value, "bottom-push surrogate");
        break;
    }
    case Risk::Lse: {
        const double lse_pos = log_sum_exp(ev.scores, pos, -p);
        out.value = std::exp(lse_neg + lse_pos / p - log_mn);
        check_finite(out.value, "log-sum-exp ranking risk");
        if (want_grad) {
            add_softmax(neg, 1.0, lse_neg, out.value);
            add_softmax(pos, -p, lse_pos, -out.value);
        }
        break;
    }
    case Risk::Mtc: {
        const double lse_pos = log_sum_exp(ev.scores, pos, -p);
        const double pos_part = std::exp(lse_pos - std::log(p) - log_mp);
        const double neg_part = std::exp(lse_neg - log_mn);
        out.value = pos_part + neg_part;
        check_finite(out.value, "classification risk");
        if (want_grad) {
            add_softmax(pos, -p, lse_pos, -p * pos_part);
            add_softmax(neg, 1.0, lse_neg, neg_part);
        }
        break;
    }
    }
    if (want_grad) out.grad_w = prob.features.transpose() * coef;
    return out;
}

RiskGradient accumulate(const ModelParams& theta, const RankingProblem& prob, Risk risk, double p, bool want_grad,
                        std::vector<double>* per_task = nullptr) {
    check_shapes(theta, prob);
    const std::size_t T = prob.tasks.size();
    std::vector<TaskTerm> terms(T);
    parallel_for(T, [&](std::size_t t) { terms[t] = task_term(theta, prob, prob.tasks[t], risk, p, want_grad); });

    RiskGradient out;
    const double inv_n = 1.0 / static_cast<double>(T);
    if (want_grad) out.gradient = ModelParams(theta.num_users(), theta.num_playlists(), theta.dim());
    double total = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        total += terms[t].value;
        out.clamped += terms[t].clamped;
        if (per_task) per_task->push_back(terms[t].value);
        if (!want_grad) continue;
        const Eigen::VectorXd g = inv_n * terms[t].grad_w;
        out.gradient.beta(prob.tasks[t].playlist) += g;
        out.gradient.alpha(prob.tasks[t].user) += g;
        out.gradient.mu() += g;
    }
    out.value = total * inv_n;
    check_finite(out.value, "risk");
    return out;
}

}  // namespace

double mean_bottom_push_risk(const ModelParams& theta, const RankingProblem& prob) {
    check_shapes(theta, prob);
    double total = 0.0;
    for (const auto& task : prob.tasks) {
        const auto ev = evaluate_task(theta, prob, task, false);
        total += bottom_push_risk({ev.scores.data(), static_cast<std::size_t>(ev.scores.size())}, task.labels);
    }
    return total / static_cast<double>(prob.tasks.size());
}

double rank_risk_surrogate(const ModelParams& theta, const RankingProblem& prob) {
    return accumulate(theta, prob, Risk::Surrogate, 1.0, false).value;
}

double rank_risk_lse(const ModelParams& theta, const RankingProblem& prob, double p) {
    if (!(p > 0.0)) throw ConfigError("push exponent p must be > 0");
    return accumulate(theta, prob, Risk::Lse, p, false).value;
}

RiskGradient rank_risk_lse_grad(const ModelParams& theta, const RankingProblem& prob, double p) {
    if (!(p > 0.0)) throw ConfigError("push exponent p must be > 0");
    return accumulate(theta, prob, Risk::Lse, p, true);
}

double mtc_risk(const ModelParams& theta, const RankingProblem& prob, double p) {
    if (!(p > 0.0)) throw ConfigError("push exponent p must be > 0");
    return accumulate(theta, prob, Risk::Mtc, p, false).value;
}

RiskBreakdown mtc_risk_breakdown(const ModelParams& theta, const RankingProblem& prob, double p) {
    if (!(p > 0.0)) throw ConfigError("push exponent p must be > 0");
    RiskBreakdown out;
    out.total = accumulate(theta, prob, Risk::Mtc, p, false, &out.per_task).value;
    return out;
}

RiskGradient mtc_risk_grad(const ModelParams& theta, const RankingProblem& prob, double p) {
    if (!(p > 0.0)) throw ConfigError("push exponent p must be > 0");
    return accumulate(theta, prob, Risk::Mtc, p, true);
}

RegulariserTerms regulariser(const ModelParams& theta, const Hyperparams& hp) {
    hp.validate();
    RegulariserTerms out;
    out.smooth_grad = ModelParams(theta.num_users(), theta.num_playlists(), theta.dim());
    out.l1_weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(theta.size()));
    const auto D = static_cast<Eigen::Index>(theta.dim());
    const auto alpha_len = static_cast<Eigen::Index>(theta.num_users()) * D;
    const auto beta_len = static_cast<Eigen::Index>(theta.num_playlists()) * D;
    const auto alpha = theta.data().head(alpha_len);
    out.smooth_value = hp.lambda1 * alpha.squaredNorm();
    out.smooth_grad.data().head(alpha_len) = 2.0 * hp.lambda1 * alpha;
    out.l1_weights.segment(alpha_len, beta_len).setConstant(hp.lambda2);
    out.l1_weights.tail(D).setConstant(hp.lambda3);
    return out;
}

double regulariser_value(const ModelParams& theta, const Hyperparams& hp) {
    const auto terms = regulariser(theta, hp);
    return terms.smooth_value + terms.l1_weights.cwiseProduct(theta.data().cwiseAbs()).sum();
}

}  // namespace coldmtc
