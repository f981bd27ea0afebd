#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "coldmtc/corpus.hpp"
#include "coldmtc/splits.hpp"

namespace coldmtc {

struct PopularityTable {
    std::vector<double> song_playcount;    // training playlists containing each song
    std::vector<double> artist_playcount;  // sum over the artist's songs

    static PopularityTable build(const Corpus& corpus, const TrainingData& training);
};

/// Number of training playlists containing both artists (symmetric; the
/// diagonal counts playlists containing the artist at all).
class CollocationMatrix {
  public:
    static CollocationMatrix build(const Corpus& corpus, const TrainingData& training);
    double count(ArtistId a, ArtistId b) const;
    std::size_t num_artists() const { return rows_.size(); }

  private:
    std::vector<std::unordered_map<ArtistId, double>> rows_;
};

/// Artists of the user's training playlists, ascending.
std::vector<ArtistId> user_context_artists(const Corpus& corpus, const TrainingData& training, UserId u);
/// Artists of the playlist's training members (its seed), ascending.
std::vector<ArtistId> playlist_context_artists(const Corpus& corpus, const TrainingData& training, PlaylistId i);
/// The n artists with the largest playcount, ties by ascending ArtistId.
std::vector<ArtistId> most_popular_artists(const PopularityTable& pop, std::size_t n);

// All scorers return one score per candidate, in candidate order.

/// Song playcount; artist playcount in the cold-songs setting.
std::vector<double> poprank_scores(const PopularityTable& pop, const Corpus& corpus,
                                   std::span<const SongId> candidates, Setting setting);

/// PopRank score when the song's artist is in `context`, else 0.
std::vector<double> sagh_scores(const PopularityTable& pop, const Corpus& corpus, std::span<const SongId> candidates,
                                std::span<const ArtistId> context, Setting setting);

/// PopRank score times the summed collocation of the song's artist with
/// every context artist.
std::vector<double> cagh_scores(const PopularityTable& pop, const CollocationMatrix& colloc, const Corpus& corpus,
                                std::span<const SongId> candidates, std::span<const ArtistId> context,
                                Setting setting);

}  // namespace coldmtc
