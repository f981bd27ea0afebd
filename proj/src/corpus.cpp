#include "coldmtc/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace coldmtc {

namespace text {

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(trim(line.substr(start)));
            break;
        }
        out.emplace_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view field, const std::string& where) {
    field = trim(field);
    if (field == "?") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw DataError(where + ": malformed number '" + std::string(field) + "'");
    return v;
}

std::string format_real(double v) {
    if (std::isnan(v)) return "?";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::pair<std::size_t, std::string>> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        lines.emplace_back(number, std::string(body));
    }
    return lines;
}

}  // namespace text

namespace {

std::string where(const std::string& origin) { return origin.empty() ? "corpus" : origin; }

// Sorted unique ids -> index map; rejects duplicates.
template <class Record, class GetId>
std::vector<std::size_t> sort_order(const std::vector<Record>& records, GetId get_id,
                                    const char* kind) {
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return get_id(records[a]) < get_id(records[b]);
    });
    for (std::size_t k = 1; k < order.size(); ++k) {
        const auto& prev = records[order[k - 1]];
        const auto& cur = records[order[k]];
        if (get_id(prev) == get_id(cur))
            throw DataError(where(cur.origin) + ": duplicate " + kind + " id '" + get_id(cur) + "'");
    }
    return order;
}

}  // namespace

Corpus Corpus::build(CorpusInput input) {
    Corpus c;
    c.metadata_columns_ = std::move(input.metadata_columns);

    // Artists: every distinct artist id named by a song.
    std::set<std::string> artist_set;
    for (const auto& s : input.songs) {
        if (s.id.empty()) throw DataError(where(s.origin) + ": empty song id");
        if (s.artist.empty()) throw DataError(where(s.origin) + ": empty artist id");
        if (s.metadata.size() != c.metadata_columns_.size())
            throw DataError(where(s.origin) + ": expected " +
                            std::to_string(c.metadata_columns_.size()) + " metadata values, got " +
                            std::to_string(s.metadata.size()));
        artist_set.insert(s.artist);
    }
    c.artists_.assign(artist_set.begin(), artist_set.end());
    for (std::size_t a = 0; a < c.artists_.size(); ++a) c.artist_index_.emplace(c.artists_[a], a);

    const auto song_order = sort_order(input.songs, [](const SongRecord& r) -> const std::string& { return r.id; }, "song");
    c.songs_.reserve(song_order.size());
    for (auto k : song_order) {
        auto& r = input.songs[k];
        c.song_index_.emplace(r.id, c.songs_.size());
        c.songs_.push_back(Song{std::move(r.id), c.artist_index_.at(r.artist), r.release_year,
                                std::move(r.metadata)});
    }

    // Users: union of playlist owners, plus users-file rows when present.
    std::set<std::string> user_set;
    for (const auto& p : input.playlists) {
        if (p.user.empty()) throw DataError(where(p.origin) + ": empty user id");
        user_set.insert(p.user);
    }
    c.has_user_attributes_ = input.user_attribute_columns.has_value();
    std::map<std::string, const UserRecord*> user_rows;
    if (c.has_user_attributes_) {
        c.user_attribute_columns_ = *input.user_attribute_columns;
        sort_order(input.users, [](const UserRecord& r) -> const std::string& { return r.id; }, "user");
        for (const auto& r : input.users) {
            if (r.attributes.size() != c.user_attribute_columns_.size())
                throw DataError(where(r.origin) + ": expected " +
                                std::to_string(c.user_attribute_columns_.size()) +
                                " attribute values, got " + std::to_string(r.attributes.size()));
            if (!user_set.count(r.id))
                throw DataError(where(r.origin) + ": user '" + r.id + "' owns no playlist");
            user_rows.emplace(r.id, &r);
        }
    }
    for (const auto& id : user_set) {
        User u{id, {}};
        if (c.has_user_attributes_) {
            const auto it = user_rows.find(id);
            if (it == user_rows.end())
                throw DataError("users file has no row for user '" + id + "'");
            u.attributes = it->second->attributes;
        }
        c.user_index_.emplace(id, c.users_.size());
        c.users_.push_back(std::move(u));
    }

    const auto playlist_order = sort_order(input.playlists, [](const PlaylistRecord& r) -> const std::string& { return r.id; }, "playlist");
    c.user_playlists_.assign(c.users_.size(), {});
    std::vector<std::size_t> song_support(c.songs_.size(), 0);
    for (auto k : playlist_order) {
        const auto& r = input.playlists[k];
        if (r.id.empty()) throw DataError(where(r.origin) + ": empty playlist id");
        if (r.songs.empty()) throw DataError(where(r.origin) + ": playlist '" + r.id + "' has no songs");
        Playlist p{r.id, c.user_index_.at(r.user), {}};
        p.members.reserve(r.songs.size());
        for (const auto& sid : r.songs) {
            const auto it = c.song_index_.find(sid);
            if (it == c.song_index_.end())
                throw DataError(where(r.origin) + ": playlist '" + r.id + "' references unknown song id '" + sid + "'");
            p.members.push_back(it->second);
        }
        std::sort(p.members.begin(), p.members.end());
        const auto dup = std::adjacent_find(p.members.begin(), p.members.end());
        if (dup != p.members.end())
            throw DataError(where(r.origin) + ": playlist '" + r.id + "' lists song '" +
                            c.songs_[*dup].id + "' more than once");
        for (auto m : p.members) ++song_support[m];
        const PlaylistId i = c.playlists_.size();
        c.playlist_index_.emplace(p.id, i);
        c.user_playlists_[p.owner].push_back(i);
        c.playlists_.push_back(std::move(p));
    }
    for (SongId m = 0; m < c.songs_.size(); ++m)
        if (song_support[m] == 0)
            throw DataError("song '" + c.songs_[m].id + "' appears in no playlist");
    return c;
}

const Song& Corpus::song(SongId m) const {
    if (m >= songs_.size()) throw ConfigError("song index " + std::to_string(m) + " out of range");
    return songs_[m];
}

const User& Corpus::user(UserId u) const {
    if (u >= users_.size()) throw ConfigError("user index " + std::to_string(u) + " out of range");
    return users_[u];
}

const Playlist& Corpus::playlist(PlaylistId i) const {
    if (i >= playlists_.size())
        throw ConfigError("playlist index " + std::to_string(i) + " out of range");
    return playlists_[i];
}

const std::string& Corpus::artist_name(ArtistId a) const {
    if (a >= artists_.size()) throw ConfigError("artist index " + std::to_string(a) + " out of range");
    return artists_[a];
}

const std::vector<PlaylistId>& Corpus::playlists_of(UserId u) const {
    if (u >= users_.size()) throw ConfigError("user index " + std::to_string(u) + " out of range");
    return user_playlists_[u];
}

namespace {
template <class Map>
std::optional<std::size_t> lookup(const Map& map, std::string_view id) {
    const auto it = map.find(std::string(id));
    if (it == map.end()) return std::nullopt;
    return it->second;
}
}  // namespace

std::optional<SongId> Corpus::find_song(std::string_view id) const { return lookup(song_index_, id); }
std::optional<UserId> Corpus::find_user(std::string_view id) const { return lookup(user_index_, id); }
std::optional<PlaylistId> Corpus::find_playlist(std::string_view id) const { return lookup(playlist_index_, id); }
std::optional<ArtistId> Corpus::find_artist(std::string_view id) const { return lookup(artist_index_, id); }

Membership Membership::make(std::vector<SongId> positives, std::size_t num_songs) {
    if (positives.empty()) throw ConfigError("membership needs at least one positive song");
    if (!std::is_sorted(positives.begin(), positives.end()) ||
        std::adjacent_find(positives.begin(), positives.end()) != positives.end())
        throw ConfigError("membership positives must be sorted and unique");
    if (positives.back() >= num_songs) throw ConfigError("membership positive out of range");
    if (positives.size() >= num_songs) throw ConfigError("membership needs at least one negative song");
    return Membership{std::move(positives), num_songs};
}

std::vector<char> Membership::labels() const {
    std::vector<char> y(num_songs, 0);
    for (auto m : positives) y[m] = 1;
    return y;
}

Membership membership(const Corpus& corpus, PlaylistId i) {
    return Membership::make(corpus.playlist(i).members, corpus.num_songs());
}

Corpus load_corpus(const std::filesystem::path& songs_path,
                   const std::filesystem::path& playlists_path,
                   const std::optional<std::filesystem::path>& users_path) {
    CorpusInput input;

    const auto song_lines = text::read_lines(songs_path);
    if (song_lines.empty()) throw DataError(songs_path.string() + ": missing header");
    {
        const auto header = text::split(song_lines.front().second, ',');
        if (header.size() < 3 || header[0] != "song_id" || header[1] != "artist_id" ||
            header[2] != "release_year")
            throw DataError(songs_path.string() + ":" + std::to_string(song_lines.front().first) +
                            ": header must start with song_id,artist_id,release_year");
        input.metadata_columns.assign(header.begin() + 3, header.end());
    }
    for (std::size_t k = 1; k < song_lines.size(); ++k) {
        const auto& [number, line] = song_lines[k];
        const std::string at = songs_path.string() + ":" + std::to_string(number);
        const auto fields = text::split(line, ',');
        if (fields.size() != 3 + input.metadata_columns.size())
            throw DataError(at + ": expected " + std::to_string(3 + input.metadata_columns.size()) +
                            " fields, got " + std::to_string(fields.size()));
        SongRecord r{fields[0], fields[1], std::nullopt, {}, at};
        if (fields[2] != "?") {
            int year = 0;
            const auto& f = fields[2];
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), year);
            if (ec != std::errc() || ptr != f.data() + f.size())
                throw DataError(at + ": malformed release_year '" + f + "'");
            r.release_year = year;
        }
        for (std::size_t c = 3; c < fields.size(); ++c) r.metadata.push_back(text::parse_real(fields[c], at));
        input.songs.push_back(std::move(r));
    }

    for (const auto& [number, line] : text::read_lines(playlists_path)) {
        const std::string at = playlists_path.string() + ":" + std::to_string(number);
        if (line.rfind("playlist_id,", 0) == 0) continue;  // optional header
        const auto fields = text::split(line, ',');
        if (fields.size() != 3)
            throw DataError(at + ": expected playlist_id,user_id,song;song;..., got " +
                            std::to_string(fields.size()) + " fields");
        PlaylistRecord r{fields[0], fields[1], {}, at};
        if (!fields[2].empty())
            for (auto& s : text::split(fields[2], ';')) {
                if (s.empty()) throw DataError(at + ": empty song id in member list");
                r.songs.push_back(std::move(s));
            }
        input.playlists.push_back(std::move(r));
    }

    if (users_path) {
        const auto user_lines = text::read_lines(*users_path);
        if (user_lines.empty()) throw DataError(users_path->string() + ": missing header");
        const auto header = text::split(user_lines.front().second, ',');
        if (header.empty() || header[0] != "user_id")
            throw DataError(users_path->string() + ":" + std::to_string(user_lines.front().first) +
                            ": header must start with user_id");
        input.user_attribute_columns = std::vector<std::string>(header.begin() + 1, header.end());
        for (std::size_t k = 1; k < user_lines.size(); ++k) {
            const auto& [number, line] = user_lines[k];
            const std::string at = users_path->string() + ":" + std::to_string(number);
            const auto fields = text::split(line, ',');
            if (fields.size() != header.size())
                throw DataError(at + ": expected " + std::to_string(header.size()) + " fields, got " +
                                std::to_string(fields.size()));
            UserRecord r{fields[0], {}, at};
            for (std::size_t c = 1; c < fields.size(); ++c) r.attributes.push_back(text::parse_real(fields[c], at));
            input.users.push_back(std::move(r));
        }
    }
    return Corpus::build(std::move(input));
}

void write_songs(const Corpus& corpus, std::ostream& out) {
    out << "song_id,artist_id,release_year";
    for (const auto& c : corpus.metadata_columns()) out << ',' << c;
    out << '\n';
    for (const auto& s : corpus.songs()) {
        out << s.id << ',' << corpus.artist_name(s.artist) << ',';
        if (s.release_year) out << *s.release_year;
        else out << '?';
        for (double v : s.metadata) out << ',' << text::format_real(v);
        out << '\n';
    }
}

void write_playlists(const Corpus& corpus, std::ostream& out) {
    out << "# playlist_id,user_id,song_id_1;song_id_2;...\n";
    for (const auto& p : corpus.playlists()) {
        out << p.id << ',' << corpus.user(p.owner).id << ',';
        for (std::size_t k = 0; k < p.members.size(); ++k) {
            if (k) out << ';';
            out << corpus.song(p.members[k]).id;
        }
        out << '\n';
    }
}

void write_users(const Corpus& corpus, std::ostream& out) {
    out << "user_id";
    for (const auto& c : corpus.user_attribute_columns()) out << ',' << c;
    out << '\n';
    for (const auto& u : corpus.users()) {
        out << u.id;
        for (double v : u.attributes) out << ',' << text::format_real(v);
        out << '\n';
    }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw DataError("cannot write '" + (dir / name).string() + "'");
        return f;
    };
    {
        auto f = open("songs.csv");
        write_songs(corpus, f);
    }
    {
        auto f = open("playlists.csv");
        write_playlists(corpus, f);
    }
    if (corpus.has_user_attributes()) {
        auto f = open("users.csv");
        write_users(corpus, f);
    }
}

std::string serialise(const Corpus& corpus) {
    std::ostringstream out;
    write_songs(corpus, out);
    write_playlists(corpus, out);
    if (corpus.has_user_attributes()) write_users(corpus, out);
    return out.str();
}

}  // namespace coldmtc
