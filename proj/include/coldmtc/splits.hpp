#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "coldmtc/corpus.hpp"

namespace coldmtc {

struct SplitSpec {
    Setting setting = Setting::ColdPlaylists;
    /// Fraction of users to hold out (cold playlists, cold users).
    double user_fraction = 0.20;
    /// Number of latest-released songs to hold out (cold songs).
    std::size_t n_new_songs = 0;
    /// Corpus-wide support every test-playlist song needs (cold playlists).
    std::size_t min_song_support = 5;
    std::uint64_t seed = 0;

    /// Per-setting defaults: 0.20 of users for cold playlists, 0.30 for cold
    /// users, and 10% of the songs for cold songs.
    static SplitSpec defaults(Setting setting, std::size_t num_songs = 0);
    void validate(std::size_t num_songs) const;
};

/// A test playlist in the cold-songs setting: the playlist's surviving seed
/// stays in training and its held members become the positives.
struct ColdSongQuery {
    PlaylistId playlist;
    std::vector<SongId> held_positives;  // ascending
};

struct SplitResult {
    Setting setting = Setting::ColdPlaylists;
    std::vector<PlaylistId> train;  // ascending
    /// Cold playlists / users: held-out playlists. Cold songs: playlists that
    /// received held positives (these are also in `train` via their seed).
    std::vector<PlaylistId> test;
    std::vector<SongId> held_songs;     // cold songs only, ascending
    std::vector<ColdSongQuery> queries; // cold songs only, by playlist
};

struct IntegrityReport {
    bool ok = true;
    std::vector<std::string> violations;
};

SplitResult split_cold_playlists(const Corpus& corpus, const SplitSpec& spec);
SplitResult split_cold_users(const Corpus& corpus, const SplitSpec& spec);
SplitResult split_cold_songs(const Corpus& corpus, const SplitSpec& spec);
/// Dispatches on spec.setting.
SplitResult make_split(const Corpus& corpus, const SplitSpec& spec);

/// Verifies every setting-specific constraint on a split.
IntegrityReport check_split(const Corpus& corpus, const SplitResult& split, const SplitSpec& spec);

/// The part of the corpus a model may learn from under a split.
struct TrainingData {
    Setting setting = Setting::ColdPlaylists;
    std::vector<PlaylistId> playlists;         // ascending
    std::vector<std::vector<SongId>> members;  // per playlist entry, held songs removed
    std::vector<SongId> songs;                 // union of members, ascending
    std::vector<char> is_training_song;        // indexed by SongId
    std::vector<char> is_training_playlist;    // indexed by PlaylistId
    std::vector<UserId> users;                 // owners of training playlists, ascending
};

TrainingData training_data(const Corpus& corpus, const SplitResult& split);

/// Number of training playlists containing each song (length M).
std::vector<double> song_playcounts(const Corpus& corpus, const TrainingData& training);
/// Sum of the song playcounts of each artist's songs (length #artists).
std::vector<double> artist_playcounts(const Corpus& corpus, const TrainingData& training);

/// One evaluation query: the songs of `truth` should outrank the rest of
/// the setting's candidate set.
struct TestQuery {
    UserId user;
    PlaylistId playlist;
    std::vector<SongId> truth;  // ascending corpus song ids
};

std::vector<TestQuery> test_queries(const Corpus& corpus, const SplitResult& split);
/// Training songs for cold playlists / users, held songs for cold songs.
std::vector<SongId> candidate_songs(const Corpus& corpus, const SplitResult& split);

// Text serialisation with external ids: train_playlists.txt,
// test_playlists.txt, and for cold songs held_songs.txt plus
// test_queries.txt (`playlist_id,song;song;...`). setting.txt names the
// setting.
void write_split(const Corpus& corpus, const SplitResult& split, const std::filesystem::path& dir);
SplitResult read_split(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace coldmtc
