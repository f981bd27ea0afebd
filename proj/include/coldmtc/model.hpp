#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "coldmtc/corpus.hpp"
#include "coldmtc/features.hpp"
#include "coldmtc/losses.hpp"
#include "coldmtc/owlqn.hpp"
#include "coldmtc/splits.hpp"

namespace coldmtc {

struct TrainSummary {
    std::size_t iterations = 0;
    double initial_objective = 0.0;
    double objective = 0.0;
    Termination reason = Termination::MaxIters;
    std::size_t clamped_scores = 0;  // clamp events summed over all evaluations
};

/// Multitask classification model: parameters plus what scoring needs to
/// validate its inputs.
struct TrainedModel {
    ModelParams theta;
    Hyperparams hp;
    std::uint64_t schema_hash = 0;
    std::size_t num_songs = 0;               // rows of the training feature matrix
    std::vector<PlaylistId> train_playlists; // ascending
    std::vector<UserId> train_users;         // ascending
    std::optional<TrainSummary> summary;     // absent after load_model
};

struct FitResult {
    ModelParams theta;
    OwlqnReport report;
    std::size_t clamped_scores = 0;
};

/// Omega(theta) + R^mtc(theta).
double training_objective(const ModelParams& theta, const RankingProblem& problem, const Hyperparams& hp);

/// Minimises Omega + R^mtc from theta = 0 with OWL-QN.
FitResult fit(const RankingProblem& problem, const Hyperparams& hp, const OwlqnConfig& cfg = {});

/// Builds the ranking problem from the training split and fits it.
TrainedModel train(const Corpus& corpus, const FeatureMatrix& x, const TrainingData& training, const Hyperparams& hp,
                   const OwlqnConfig& cfg = {});

/// (alpha_u + mu) . x_m for every row of x.
std::vector<double> score_cold_playlist(const TrainedModel& model, const FeatureMatrix& x, UserId u);

/// The k training users whose attributes are most cosine-similar to attrs;
/// ties broken by ascending UserId. Missing attribute values count as 0.
std::vector<UserId> nearest_users(const TrainedModel& model, const Corpus& corpus, std::span<const double> attrs,
                                  std::size_t k);

/// (mean alpha over the k nearest training users + mu) . x_m.
std::vector<double> score_cold_user(const TrainedModel& model, const Corpus& corpus, const FeatureMatrix& x,
                                    std::span<const double> attrs, std::size_t k = 10);

/// mu . x_m, for new users with no attributes.
std::vector<double> score_cold_user_anonymous(const TrainedModel& model, const FeatureMatrix& x);

/// (alpha_u + beta_i + mu) . x for each row of x_new (the new songs).
std::vector<double> score_cold_song(const TrainedModel& model, const Corpus& corpus, const FeatureMatrix& x_new,
                                    UserId u, PlaylistId i);

enum class RecommendMode { TopK, Sampled };

struct Recommendation {
    std::vector<std::pair<SongId, double>> items;
    RecommendMode mode = RecommendMode::TopK;
};

/// Top-K by (score desc, id asc), or K distinct draws without replacement
/// with probabilities softmax(scores). `candidates` maps positions of
/// `scores` to song ids; when empty, positions are the ids.
Recommendation recommend(std::span<const double> scores, std::size_t K, RecommendMode mode, std::uint64_t seed = 0,
                         std::span<const SongId> candidates = {});

/// Binary model file, little-endian:
///   magic "CLDMTC\0\0", u32 version (1),
///   u64 M, N, U, D, f64 lambda1, lambda2, lambda3, p, u64 schema hash,
///   f64 alpha[U*D], beta[N*D], mu[D] (row-major),
///   u64 #train playlists, u64 ids..., u64 #train users, u64 ids...
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

inline constexpr std::uint32_t kModelFormatVersion = 1;

}  // namespace coldmtc
