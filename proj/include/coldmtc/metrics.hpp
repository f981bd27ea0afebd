#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "coldmtc/corpus.hpp"

namespace coldmtc {

/// |top-K of ranked ∩ truth| / M+. `ranked` holds ids in truth's universe.
double hit_rate_at_k(std::span<const SongId> ranked, const Membership& truth, std::size_t K);

/// Probability a positive outscores a negative; ties count one half.
double auc(std::span<const double> scores, const Membership& truth);

/// Top-K lists of one test user, one list per test playlist.
struct UserRecommendations {
    UserId user;
    std::vector<std::vector<SongId>> playlists;
};

/// Mean over users of the per-playlist mean of sum_{m in S_K} -log2(pop_m) / K.
/// `popularity` is indexed by the ids used in the lists.
double novelty_at_k(std::span<const UserRecommendations> recs, std::span<const double> popularity, std::size_t K);

/// (count_m + 1) / (sum counts + #songs).
std::vector<double> smoothed_popularity(std::span<const double> counts);

/// Natural-log entropy of softmax(mean_scores).
double spread(std::span<const double> mean_scores);

struct EvalReport {
    std::string method;
    std::string setting;
    double auc = 0.0;                       // macro average over test playlists
    std::map<std::size_t, double> hitrate;  // K -> mean HitRate@K
    std::map<std::size_t, double> novelty;  // K -> Novelty@K
    double spread = 0.0;
    std::size_t num_queries = 0;
    std::size_t num_candidates = 0;
    std::vector<std::string> query_playlists;  // external ids, query order
    std::vector<double> per_playlist_auc;

    /// `key=value` lines.
    std::string to_text() const;
    /// JSON document with the same fields.
    std::string to_json() const;
};

}  // namespace coldmtc
