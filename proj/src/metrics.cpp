#include "coldmtc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace coldmtc {

double hit_rate_at_k(std::span<const SongId> ranked, const Membership& truth, std::size_t K) {
    if (K < 1) throw ConfigError("K must be >= 1");
    if (truth.positives.empty()) throw ConfigError("hit rate needs a non-empty truth set");
    std::size_t hits = 0;
    for (std::size_t k = 0; k < std::min(K, ranked.size()); ++k)
        if (std::binary_search(truth.positives.begin(), truth.positives.end(), ranked[k])) ++hits;
    return static_cast<double>(hits) / static_cast<double>(truth.num_positive());
}

double auc(std::span<const double> scores, const Membership& truth) {
    if (truth.num_positive() == 0 || truth.num_negative() == 0)
        throw ConfigError("AUC needs at least one positive and one negative");
    if (scores.size() != truth.num_songs) throw ConfigError("score vector length differs from label universe");
    const auto y = truth.labels();
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    // Sum of (1-based, tie-averaged) ranks of the positives, kept doubled so
    // every quantity stays an exact integer.
    double doubled_rank_sum = 0.0;
    for (std::size_t lo = 0; lo < order.size();) {
        std::size_t hi = lo;
        while (hi + 1 < order.size() && scores[order[hi + 1]] == scores[order[lo]]) ++hi;
        const double doubled_rank = static_cast<double>(lo + 1 + hi + 1);
        for (std::size_t k = lo; k <= hi; ++k)
            if (y[order[k]]) doubled_rank_sum += doubled_rank;
        lo = hi + 1;
    }
    const double np = static_cast<double>(truth.num_positive());
    const double nn = static_cast<double>(truth.num_negative());
    const double wins = (doubled_rank_sum - np * (np + 1.0)) / 2.0;
    return wins / (np * nn);
}

double novelty_at_k(std::span<const UserRecommendations> recs, std::span<const double> popularity, std::size_t K) {
    if (K < 1) throw ConfigError("K must be >= 1");
    if (recs.empty()) throw ConfigError("novelty needs at least one test user");
    double total = 0.0;
    for (const auto& user : recs) {
        if (user.playlists.empty()) throw ConfigError("test user without playlists");
        double user_total = 0.0;
        for (const auto& list : user.playlists) {
            if (list.size() > K) throw ConfigError("recommendation list longer than K");
            for (auto m : list) {
                if (m >= popularity.size()) throw ConfigError("recommended id outside popularity table");
                if (!(popularity[m] > 0.0)) throw ConfigError("popularity must be positive");
                user_total += -std::log2(popularity[m]) / static_cast<double>(K);
            }
        }
        total += user_total / static_cast<double>(user.playlists.size());
    }
    return total / static_cast<double>(recs.size());
}

std::vector<double> smoothed_popularity(std::span<const double> counts) {
    const double denom = std::accumulate(counts.begin(), counts.end(), 0.0) + static_cast<double>(counts.size());
    std::vector<double> out;
    out.reserve(counts.size());
    for (double c : counts) out.push_back((c + 1.0) / denom);
    return out;
}

double spread(std::span<const double> mean_scores) {
    if (mean_scores.empty()) throw ConfigError("spread needs at least one song");
    const double hi = *std::max_element(mean_scores.begin(), mean_scores.end());
    if (!std::isfinite(hi)) throw ConfigError("spread needs finite scores");
    double z = 0.0;
    for (double s : mean_scores) z += std::exp(s - hi);
    const double log_z = hi + std::log(z);
    double h = 0.0;
    for (double s : mean_scores) {
        const double log_p = s - log_z;
        h -= std::exp(log_p) * log_p;
    }
    return h;
}

std::string EvalReport::to_text() const {
    std::ostringstream out;
    auto real = [](double v) { return text::format_real(v); };
    out << "method=" << method << '\n';
    out << "setting=" << setting << '\n';
    out << "num_queries=" << num_queries << '\n';
    out << "num_candidates=" << num_candidates << '\n';
    out << "auc=" << real(auc) << '\n';
    for (const auto& [k, v] : hitrate) out << "hitrate@" << k << '=' << real(v) << '\n';
    for (const auto& [k, v] : novelty) out << "novelty@" << k << '=' << real(v) << '\n';
    out << "spread=" << real(spread) << '\n';
    for (std::size_t q = 0; q < per_playlist_auc.size(); ++q)
        out << "auc[" << (q < query_playlists.size() ? query_playlists[q] : std::to_string(q))
            << "]=" << real(per_playlist_auc[q]) << '\n';
    return out.str();
}

std::string EvalReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["method"] = method;
    doc["setting"] = setting;
    doc["num_queries"] = num_queries;
    doc["num_candidates"] = num_candidates;
    doc["auc"] = auc;
    auto& hr = doc["hitrate"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : hitrate) hr[std::to_string(k)] = v;
    auto& nov = doc["novelty"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : novelty) nov[std::to_string(k)] = v;
    doc["spread"] = spread;
    auto& per = doc["per_playlist_auc"] = nlohmann::ordered_json::array();
    for (std::size_t q = 0; q < per_playlist_auc.size(); ++q)
        per.push_back({{"playlist", q < query_playlists.size() ? query_playlists[q] : std::to_string(q)},
                       {"auc", per_playlist_auc[q]}});
    return doc.dump(2) + "\n";
}

}  // namespace coldmtc
