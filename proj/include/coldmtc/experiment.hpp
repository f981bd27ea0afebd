#pragma once

#include <string_view>
#include <vector>

#include "coldmtc/baselines.hpp"
#include "coldmtc/corpus.hpp"
#include "coldmtc/features.hpp"
#include "coldmtc/metrics.hpp"
#include "coldmtc/model.hpp"
#include "coldmtc/splits.hpp"

namespace coldmtc {

enum class Method { Mtc, PopRank, Sagh, Cagh };

std::string_view to_string(Method m);
/// "mtc", "poprank", "sagh", "cagh"; ConfigError otherwise.
Method parse_method(std::string_view name);

struct EvalOptions {
    std::vector<std::size_t> topk{5, 10, 20, 50, 100};
    std::size_t knn = 10;             // neighbours for cold-user MTC scoring
    std::size_t context_artists = 10; // popular-artist context for cold-user SAGH/CAGH
};

/// Scores every test query of `split` with one method and aggregates AUC,
/// HitRate@K, Novelty@K and Spread. Candidates are the training songs, or the
/// held songs in the cold-songs setting. `x` and `model` are required for MTC.
EvalReport evaluate(const Corpus& corpus, const SplitResult& split, Method method, const EvalOptions& opts,
                    const FeatureMatrix* x = nullptr, const TrainedModel* model = nullptr);

/// Scores of one query over `candidates` (same order).
std::vector<double> query_scores(const Corpus& corpus, const TrainingData& training, const TestQuery& query,
                                 std::span<const SongId> candidates, Method method, const EvalOptions& opts,
                                 const FeatureMatrix* x, const TrainedModel* model);

/// Corpus made of the training playlists only, with held songs removed from
/// them. Used for inner validation splits.
Corpus training_subcorpus(const Corpus& corpus, const TrainingData& training);

struct GridPoint {
    Hyperparams hp;
    double validation_auc = 0.0;
};

/// Trains one model per hyper-parameter setting on an inner split of the
/// training subcorpus and reports its validation AUC, in input order.
std::vector<GridPoint> grid_search(const Corpus& corpus, const TrainingData& training, const SplitSpec& spec,
                                   const FeatureSources& sources, const std::vector<Hyperparams>& grid,
                                   const OwlqnConfig& cfg, const EvalOptions& opts);

/// Highest validation AUC; earlier entries win ties.
const GridPoint& best_point(const std::vector<GridPoint>& points);

}  // namespace coldmtc
