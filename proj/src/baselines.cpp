#include "coldmtc/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace coldmtc {

PopularityTable PopularityTable::build(const Corpus& corpus, const TrainingData& training) {
    return {song_playcounts(corpus, training), artist_playcounts(corpus, training)};
}

CollocationMatrix CollocationMatrix::build(const Corpus& corpus, const TrainingData& training) {
    CollocationMatrix c;
    c.rows_.resize(corpus.num_artists());
    for (const auto& members : training.members) {
        std::set<ArtistId> artists;
        for (auto m : members) artists.insert(corpus.song(m).artist);
        for (auto a : artists)
            for (auto b : artists) c.rows_[a][b] += 1.0;
    }
    return c;
}

double CollocationMatrix::count(ArtistId a, ArtistId b) const {
    if (a >= rows_.size() || b >= rows_.size()) throw ConfigError("artist index out of range");
    const auto it = rows_[a].find(b);
    return it == rows_[a].end() ? 0.0 : it->second;
}

std::vector<ArtistId> user_context_artists(const Corpus& corpus, const TrainingData& training, UserId u) {
    std::set<ArtistId> artists;
    for (std::size_t t = 0; t < training.playlists.size(); ++t)
        if (corpus.playlist(training.playlists[t]).owner == u)
            for (auto m : training.members[t]) artists.insert(corpus.song(m).artist);
    return {artists.begin(), artists.end()};
}

std::vector<ArtistId> playlist_context_artists(const Corpus& corpus, const TrainingData& training, PlaylistId i) {
    const auto it = std::lower_bound(training.playlists.begin(), training.playlists.end(), i);
    if (it == training.playlists.end() || *it != i)
        throw ConfigError("playlist '" + corpus.playlist(i).id + "' is not a training playlist");
    std::set<ArtistId> artists;
    for (auto m : training.members[static_cast<std::size_t>(it - training.playlists.begin())])
        artists.insert(corpus.song(m).artist);
    return {artists.begin(), artists.end()};
}

std::vector<ArtistId> most_popular_artists(const PopularityTable& pop, std::size_t n) {
    std::vector<ArtistId> order(pop.artist_playcount.size());
    std::iota(order.begin(), order.end(), ArtistId{0});
    std::stable_sort(order.begin(), order.end(), [&](ArtistId a, ArtistId b) {
        return pop.artist_playcount[a] > pop.artist_playcount[b];
    });
    order.resize(std::min(n, order.size()));
    std::sort(order.begin(), order.end());
    return order;
}

namespace {
double base_popularity(const PopularityTable& pop, const Corpus& corpus, SongId m, Setting setting) {
    return setting == Setting::ColdSongs ? pop.artist_playcount[corpus.song(m).artist] : pop.song_playcount[m];
}
}  // namespace

std::vector<double> poprank_scores(const PopularityTable& pop, const Corpus& corpus,
                                   std::span<const SongId> candidates, Setting setting) {
    std::vector<double> out;
    out.reserve(candidates.size());
    for (auto m : candidates) out.push_back(base_popularity(pop, corpus, m, setting));
    return out;
}

std::vector<double> sagh_scores(const PopularityTable& pop, const Corpus& corpus, std::span<const SongId> candidates,
                                std::span<const ArtistId> context, Setting setting) {
    const std::set<ArtistId> ctx(context.begin(), context.end());
    std::vector<double> out;
    out.reserve(candidates.size());
    for (auto m : candidates)
        out.push_back(ctx.count(corpus.song(m).artist) ? base_popularity(pop, corpus, m, setting) : 0.0);
    return out;
}

std::vector<double> cagh_scores(const PopularityTable& pop, const CollocationMatrix& colloc, const Corpus& corpus,
                                std::span<const SongId> candidates, std::span<const ArtistId> context,
                                Setting setting) {
    std::vector<double> out;
    out.reserve(candidates.size());
    for (auto m : candidates) {
        const auto a = corpus.song(m).artist;
        double weight = 0.0;
        for (auto b : context) weight += colloc.count(a, b);
        out.push_back(base_popularity(pop, corpus, m, setting) * weight);
    }
    return out;
}

}  // namespace coldmtc
