#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coldmtc/corpus.hpp"
#include "coldmtc/features.hpp"
#include "coldmtc/splits.hpp"

namespace coldmtc {

struct Hyperparams {
    double lambda1 = 0.0;  // squared L2 on user weights
    double lambda2 = 0.0;  // L1 on playlist weights
    double lambda3 = 0.0;  // L1 on shared weights
    double p = 1.0;        // push exponent

    void validate() const;
};

/// theta = {alpha_u}, {beta_i}, mu, stored as one flat vector laid out
/// [alpha (U x D row-major) | beta (N x D row-major) | mu (D)] so the
/// optimiser can work on it directly.
class ModelParams {
  public:
    ModelParams() = default;
    ModelParams(std::size_t num_users, std::size_t num_playlists, std::size_t dim);

    std::size_t num_users() const { return users_; }
    std::size_t num_playlists() const { return playlists_; }
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return static_cast<std::size_t>(data_.size()); }

    Eigen::VectorXd& data() { return data_; }
    const Eigen::VectorXd& data() const { return data_; }

    auto alpha(UserId u) { return data_.segment(offset_alpha(u), idx(dim_)); }
    auto alpha(UserId u) const { return data_.segment(offset_alpha(u), idx(dim_)); }
    auto beta(PlaylistId i) { return data_.segment(offset_beta(i), idx(dim_)); }
    auto beta(PlaylistId i) const { return data_.segment(offset_beta(i), idx(dim_)); }
    auto mu() { return data_.tail(idx(dim_)); }
    auto mu() const { return data_.tail(idx(dim_)); }

    /// w_{u,i} = alpha_u + beta_i + mu.
    Eigen::VectorXd weights(UserId u, PlaylistId i) const;

    std::size_t alpha_offset() const { return 0; }
    std::size_t beta_offset() const { return users_ * dim_; }
    std::size_t mu_offset() const { return (users_ + playlists_) * dim_; }

  private:
    static Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }
    Eigen::Index offset_alpha(UserId u) const;
    Eigen::Index offset_beta(PlaylistId i) const;

    std::size_t users_ = 0, playlists_ = 0, dim_ = 0;
    Eigen::VectorXd data_;
};

/// One training task: playlist `playlist` of `user`, labelled over the
/// problem's song rows.
struct RankingTask {
    UserId user;
    PlaylistId playlist;
    Membership labels;
};

/// Everything the risks need: the candidate song features and one task per
/// training playlist. Negatives are all non-member candidate songs.
struct RankingProblem {
    std::size_t num_users = 0;
    std::size_t num_playlists = 0;
    RowMatrix features;          // S x D
    std::vector<SongId> songs;   // corpus id of each feature row
    std::vector<RankingTask> tasks;

    std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }

    /// Tasks for every training playlist with at least one negative; rows
    /// are the training songs.
    static RankingProblem from_training(const Corpus& corpus, const FeatureMatrix& x, const TrainingData& training);
};

struct RiskBreakdown {
    double total = 0.0;
    std::vector<double> per_task;  // unnormalised per-playlist terms
};

struct RiskGradient {
    double value = 0.0;
    ModelParams gradient;
    std::size_t clamped = 0;  // scores clipped to [-kScoreClamp, kScoreClamp]
};

inline constexpr double kScoreClamp = 50.0;

/// f(m, u, i) = (alpha_u + beta_i + mu) . x_m.
double score(const ModelParams& theta, const FeatureMatrix& x, SongId m, UserId u, PlaylistId i);

/// Fraction of negatives scoring at or above the lowest-scoring positive.
double bottom_push_risk(std::span<const double> scores, const Membership& labels);
/// Mean of bottom_push_risk over the problem's tasks.
double mean_bottom_push_risk(const ModelParams& theta, const RankingProblem& problem);

/// Exponential upper bound of the bottom-push risk with the exact minimum.
double rank_risk_surrogate(const ModelParams& theta, const RankingProblem& problem);

/// Log-sum-exp (p-norm) relaxation of the surrogate's minimum.
double rank_risk_lse(const ModelParams& theta, const RankingProblem& problem, double p);
/// Value and gradient of rank_risk_lse; used to check stationarity, not for training.
RiskGradient rank_risk_lse_grad(const ModelParams& theta, const RankingProblem& problem, double p);

/// Classification risk: exp(-p f)/(p M+) over positives plus exp(f)/M- over
/// negatives, averaged over playlists.
double mtc_risk(const ModelParams& theta, const RankingProblem& problem, double p);
RiskBreakdown mtc_risk_breakdown(const ModelParams& theta, const RankingProblem& problem, double p);
RiskGradient mtc_risk_grad(const ModelParams& theta, const RankingProblem& problem, double p);

struct RegulariserTerms {
    double smooth_value = 0.0;        // lambda1 * sum ||alpha_u||^2
    ModelParams smooth_grad;          // 2 lambda1 alpha, zero elsewhere
    Eigen::VectorXd l1_weights;       // lambda2 on beta, lambda3 on mu, 0 on alpha
};

RegulariserTerms regulariser(const ModelParams& theta, const Hyperparams& hp);
/// Full Omega(theta) including the L1 part.
double regulariser_value(const ModelParams& theta, const Hyperparams& hp);

}  // namespace coldmtc
