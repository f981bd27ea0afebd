#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coldmtc/common.hpp"

namespace coldmtc {

// Raw rows as they come out of the input files (or a generator). `origin`
// is a "file:line" tag used in error messages and may be empty.
struct SongRecord {
    std::string id;
    std::string artist;
    std::optional<int> release_year;
    std::vector<double> metadata;  // NaN marks a missing value
    std::string origin;
};

struct PlaylistRecord {
    std::string id;
    std::string user;
    std::vector<std::string> songs;
    std::string origin;
};

struct UserRecord {
    std::string id;
    std::vector<double> attributes;  // NaN marks a missing value
    std::string origin;
};

struct CorpusInput {
    std::vector<std::string> metadata_columns;
    std::vector<SongRecord> songs;
    std::vector<PlaylistRecord> playlists;
    // Present only when a users file was supplied.
    std::optional<std::vector<std::string>> user_attribute_columns;
    std::vector<UserRecord> users;
};

struct Song {
    std::string id;
    ArtistId artist;
    std::optional<int> release_year;
    std::vector<double> metadata;
};

struct User {
    std::string id;
    std::vector<double> attributes;  // empty when the corpus has no users file
};

struct Playlist {
    std::string id;
    UserId owner;
    std::vector<SongId> members;  // sorted ascending, no duplicates
};

/// Immutable, validated collection of songs, artists, users and playlists.
///
/// Dense indices are assigned by lexicographic order of the external string
/// ids, so the same files always produce the same indexing.
class Corpus {
  public:
    /// Validates and indexes raw records. Throws DataError on duplicate ids,
    /// dangling references, empty playlists, duplicate members, users without
    /// playlists, or songs that no playlist contains.
    static Corpus build(CorpusInput input);

    std::size_t num_songs() const { return songs_.size(); }
    std::size_t num_users() const { return users_.size(); }
    std::size_t num_playlists() const { return playlists_.size(); }
    std::size_t num_artists() const { return artists_.size(); }

    const Song& song(SongId m) const;
    const User& user(UserId u) const;
    const Playlist& playlist(PlaylistId i) const;
    const std::string& artist_name(ArtistId a) const;

    const std::vector<Song>& songs() const { return songs_; }
    const std::vector<User>& users() const { return users_; }
    const std::vector<Playlist>& playlists() const { return playlists_; }

    /// P_u: playlists owned by user u, ascending.
    const std::vector<PlaylistId>& playlists_of(UserId u) const;

    const std::vector<std::string>& metadata_columns() const { return metadata_columns_; }
    const std::vector<std::string>& user_attribute_columns() const { return user_attribute_columns_; }
    bool has_user_attributes() const { return has_user_attributes_; }

    std::optional<SongId> find_song(std::string_view id) const;
    std::optional<UserId> find_user(std::string_view id) const;
    std::optional<PlaylistId> find_playlist(std::string_view id) const;
    std::optional<ArtistId> find_artist(std::string_view id) const;

  private:
    Corpus() = default;

    std::vector<Song> songs_;
    std::vector<User> users_;
    std::vector<Playlist> playlists_;
    std::vector<std::string> artists_;
    std::vector<std::vector<PlaylistId>> user_playlists_;
    std::vector<std::string> metadata_columns_;
    std::vector<std::string> user_attribute_columns_;
    bool has_user_attributes_ = false;

    std::unordered_map<std::string, SongId> song_index_;
    std::unordered_map<std::string, UserId> user_index_;
    std::unordered_map<std::string, PlaylistId> playlist_index_;
    std::unordered_map<std::string, ArtistId> artist_index_;
};

/// Binary labels of one playlist over a song universe of size num_songs.
struct Membership {
    std::vector<SongId> positives;  // sorted ascending
    std::size_t num_songs = 0;

    /// Validates 1 <= M+ < M, sortedness and range.
    static Membership make(std::vector<SongId> positives, std::size_t num_songs);

    std::size_t num_positive() const { return positives.size(); }
    std::size_t num_negative() const { return num_songs - positives.size(); }
    /// Dense 0/1 label vector of length num_songs.
    std::vector<char> labels() const;
};

/// Labels of corpus playlist i over all M songs.
Membership membership(const Corpus& corpus, PlaylistId i);

/// Reads the songs / playlists / users files. Errors carry file:line.
Corpus load_corpus(const std::filesystem::path& songs_path,
                   const std::filesystem::path& playlists_path,
                   const std::optional<std::filesystem::path>& users_path = std::nullopt);

// Writers emit the same formats load_corpus reads.
void write_songs(const Corpus& corpus, std::ostream& out);
void write_playlists(const Corpus& corpus, std::ostream& out);
void write_users(const Corpus& corpus, std::ostream& out);
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

/// All three files concatenated; used to compare corpora byte for byte.
std::string serialise(const Corpus& corpus);

// Shared by the file readers of other modules.
namespace text {
std::vector<std::string> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);
/// Parses a real; "?" yields NaN. Throws DataError mentioning `where`.
double parse_real(std::string_view field, const std::string& where);
std::string format_real(double v);
/// Iterates non-empty, non-comment lines as (line_number, content).
std::vector<std::pair<std::size_t, std::string>> read_lines(const std::filesystem::path& path);
}  // namespace text

}  // namespace coldmtc
