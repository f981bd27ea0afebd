#include "coldmtc/experiment.hpp"

#include <algorithm>
#include <map>

namespace coldmtc {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Mtc: return "mtc";
        case Method::PopRank: return "poprank";
        case Method::Sagh: return "sagh";
        case Method::Cagh: return "cagh";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    for (auto m : {Method::Mtc, Method::PopRank, Method::Sagh, Method::Cagh})
        if (name == to_string(m)) return m;
    throw ConfigError("unknown method '" + std::string(name) + "' (expected mtc, poprank, sagh or cagh)");
}

namespace {

struct BaselineTables {
    PopularityTable pop;
    CollocationMatrix colloc;
};

std::vector<double> baseline_scores(const Corpus& corpus, const TrainingData& training, const BaselineTables& t,
                                    const TestQuery& q, std::span<const SongId> candidates, Method method,
                                    const EvalOptions& opts) {
    if (method == Method::PopRank) return poprank_scores(t.pop, corpus, candidates, training.setting);
    std::vector<ArtistId> context;
    switch (training.setting) {
        case Setting::ColdPlaylists: context = user_context_artists(corpus, training, q.user); break;
        case Setting::ColdUsers: context = most_popular_artists(t.pop, opts.context_artists); break;
        case Setting::ColdSongs: context = playlist_context_artists(corpus, training, q.playlist); break;
    }
    if (method == Method::Sagh) return sagh_scores(t.pop, corpus, candidates, context, training.setting);
    return cagh_scores(t.pop, t.colloc, corpus, candidates, context, training.setting);
}

std::vector<double> mtc_scores(const Corpus& corpus, const TrainingData& training, const TestQuery& q,
                               const FeatureMatrix& xc, const EvalOptions& opts, const TrainedModel& model) {
    switch (training.setting) {
        case Setting::ColdPlaylists: return score_cold_playlist(model, xc, q.user);
        case Setting::ColdUsers:
            if (corpus.has_user_attributes())
                return score_cold_user(model, corpus, xc, corpus.user(q.user).attributes, opts.knn);
            return score_cold_user_anonymous(model, xc);
        case Setting::ColdSongs: return score_cold_song(model, corpus, xc, q.user, q.playlist);
    }
    return {};
}

void require_mtc_inputs(const FeatureMatrix* x, const TrainedModel* model) {
    if (!x || !model) throw ConfigError("the mtc method needs a feature matrix and a trained model");
}

}  // namespace

std::vector<double> query_scores(const Corpus& corpus, const TrainingData& training, const TestQuery& query,
                                 std::span<const SongId> candidates, Method method, const EvalOptions& opts,
                                 const FeatureMatrix* x, const TrainedModel* model) {
    if (method == Method::Mtc) {
        require_mtc_inputs(x, model);
        return mtc_scores(corpus, training, query, x->subset(candidates), opts, *model);
    }
    const BaselineTables t{PopularityTable::build(corpus, training), CollocationMatrix::build(corpus, training)};
    return baseline_scores(corpus, training, t, query, candidates, method, opts);
}

EvalReport evaluate(const Corpus& corpus, const SplitResult& split, Method method, const EvalOptions& opts,
                    const FeatureMatrix* x, const TrainedModel* model) {
    if (opts.topk.empty()) throw ConfigError("at least one top-K cut-off is required");
    for (auto k : opts.topk)
        if (k == 0) throw ConfigError("top-K cut-offs must be positive");
    if (method == Method::Mtc) require_mtc_inputs(x, model);

    const auto training = training_data(corpus, split);
    const auto candidates = candidate_songs(corpus, split);
    const auto queries = test_queries(corpus, split);
    if (queries.empty()) throw DataError("the split has no test queries");
    const std::size_t C = candidates.size();

    std::vector<std::size_t> local(corpus.num_songs(), SIZE_MAX);
    for (std::size_t k = 0; k < C; ++k) local[candidates[k]] = k;

    BaselineTables tables{PopularityTable::build(corpus, training), CollocationMatrix::build(corpus, training)};
    std::optional<FeatureMatrix> xc;
    if (method == Method::Mtc) xc = x->subset(candidates);

    std::size_t kmax = 0;
    for (auto k : opts.topk) kmax = std::max(kmax, std::min(k, C));

    EvalReport report;
    report.method = std::string(to_string(method));
    report.setting = std::string(to_string(split.setting));
    report.num_queries = queries.size();
    report.num_candidates = C;

    std::vector<double> mean_scores(C, 0.0);
    std::map<std::size_t, double> hit_sum;
    std::map<UserId, UserRecommendations> by_user;
    double auc_sum = 0.0;

    for (const auto& q : queries) {
        std::vector<SongId> truth;
        for (auto m : q.truth) {
            if (local[m] == SIZE_MAX)
                throw DataError("test song '" + corpus.song(m).id + "' of playlist '" + corpus.playlist(q.playlist).id +
                                "' is not a candidate");
            truth.push_back(local[m]);
        }
        std::sort(truth.begin(), truth.end());
        if (truth.empty() || truth.size() >= C)
            throw DataError("test playlist '" + corpus.playlist(q.playlist).id +
                            "' needs at least one positive and one negative candidate");
        const auto labels = Membership::make(truth, C);

        const auto scores = method == Method::Mtc
                                ? mtc_scores(corpus, training, q, *xc, opts, *model)
                                : baseline_scores(corpus, training, tables, q, candidates, method, opts);
        const double a = auc(scores, labels);
        auc_sum += a;
        report.query_playlists.push_back(corpus.playlist(q.playlist).id);
        report.per_playlist_auc.push_back(a);
        for (std::size_t k = 0; k < C; ++k) mean_scores[k] += scores[k];

        const auto rec = recommend(scores, kmax, RecommendMode::TopK);
        std::vector<SongId> ranked;
        for (const auto& [m, s] : rec.items) ranked.push_back(m);
        for (auto k : opts.topk) hit_sum[k] += hit_rate_at_k(ranked, labels, std::min(k, C));
        auto& ur = by_user[q.user];
        ur.user = q.user;
        ur.playlists.push_back(std::move(ranked));
    }

    const double n = static_cast<double>(queries.size());
    report.auc = auc_sum / n;
    for (auto& [k, s] : hit_sum) report.hitrate[k] = s / n;

    std::vector<double> counts(C);
    for (std::size_t k = 0; k < C; ++k) {
        const SongId m = candidates[k];
        counts[k] = split.setting == Setting::ColdSongs ? tables.pop.artist_playcount[corpus.song(m).artist]
                                                        : tables.pop.song_playcount[m];
    }
    const auto popularity = smoothed_popularity(counts);
    std::vector<UserRecommendations> recs;
    for (auto& [u, r] : by_user) recs.push_back(std::move(r));
    for (auto k : opts.topk) {
        const std::size_t kk = std::min(k, C);
        auto cut = recs;
        for (auto& r : cut)
            for (auto& list : r.playlists) list.resize(std::min(list.size(), kk));
        report.novelty[k] = novelty_at_k(cut, popularity, kk);
    }

    for (auto& v : mean_scores) v /= n;
    report.spread = spread(mean_scores);
    return report;
}

Corpus training_subcorpus(const Corpus& corpus, const TrainingData& training) {
    CorpusInput in;
    in.metadata_columns = corpus.metadata_columns();
    for (auto m : training.songs) {
        const auto& s = corpus.song(m);
        in.songs.push_back({s.id, corpus.artist_name(s.artist), s.release_year, s.metadata, ""});
    }
    for (std::size_t k = 0; k < training.playlists.size(); ++k) {
        const auto& p = corpus.playlist(training.playlists[k]);
        PlaylistRecord r{p.id, corpus.user(p.owner).id, {}, ""};
        for (auto m : training.members[k]) r.songs.push_back(corpus.song(m).id);
        in.playlists.push_back(std::move(r));
    }
    if (corpus.has_user_attributes()) {
        in.user_attribute_columns = corpus.user_attribute_columns();
        for (auto u : training.users) in.users.push_back({corpus.user(u).id, corpus.user(u).attributes, ""});
    }
    return Corpus::build(std::move(in));
}

std::vector<GridPoint> grid_search(const Corpus& corpus, const TrainingData& training, const SplitSpec& spec,
                                   const FeatureSources& sources, const std::vector<Hyperparams>& grid,
                                   const OwlqnConfig& cfg, const EvalOptions& opts) {
    if (grid.empty()) throw ConfigError("hyper-parameter grid is empty");
    const auto sub = training_subcorpus(corpus, training);
    SplitSpec inner = spec;
    inner.seed = spec.seed + 1;
    if (spec.setting == Setting::ColdSongs) {
        const double ratio = static_cast<double>(sub.num_songs()) / static_cast<double>(corpus.num_songs());
        inner.n_new_songs = std::max<std::size_t>(
            1, static_cast<std::size_t>(static_cast<double>(spec.n_new_songs) * ratio + 0.5));
    }
    const auto split = make_split(sub, inner);
    const auto inner_training = training_data(sub, split);
    const auto x = build_features(sub, inner_training, sources);

    std::vector<GridPoint> out;
    for (const auto& hp : grid) {
        const auto model = train(sub, x, inner_training, hp, cfg);
        const auto report = evaluate(sub, split, Method::Mtc, opts, &x, &model);
        out.push_back({hp, report.auc});
    }
    return out;
}

const GridPoint& best_point(const std::vector<GridPoint>& points) {
    if (points.empty()) throw ConfigError("no grid points");
    std::size_t best = 0;
    for (std::size_t k = 1; k < points.size(); ++k)
        if (points[k].validation_auc > points[best].validation_auc) best = k;
    return points[best];
}

}  // namespace coldmtc
