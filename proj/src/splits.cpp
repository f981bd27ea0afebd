#include "coldmtc/splits.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>

namespace coldmtc {

SplitSpec SplitSpec::defaults(Setting setting, std::size_t num_songs) {
    SplitSpec s;
    s.setting = setting;
    s.user_fraction = setting == Setting::ColdUsers ? 0.30 : 0.20;
    s.n_new_songs = setting == Setting::ColdSongs ? std::max<std::size_t>(1, num_songs / 10) : 0;
    return s;
}

void SplitSpec::validate(std::size_t num_songs) const {
    if (setting == Setting::ColdSongs) {
        if (n_new_songs == 0 || n_new_songs >= num_songs)
            throw ConfigError("n_new_songs must be in [1, M); got " + std::to_string(n_new_songs) +
                              " with M=" + std::to_string(num_songs));
    } else if (!(user_fraction > 0.0 && user_fraction < 1.0)) {
        throw ConfigError("user_fraction must lie in (0, 1)");
    }
}

namespace {

std::vector<std::size_t> song_support(const Corpus& corpus) {
    std::vector<std::size_t> support(corpus.num_songs(), 0);
    for (const auto& p : corpus.playlists())
        for (auto m : p.members) ++support[m];
    return support;
}

std::size_t user_target(double fraction, std::size_t num_users) {
    const auto t = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(num_users)));
    return std::clamp<std::size_t>(t, 1, num_users > 1 ? num_users - 1 : 1);
}

SplitResult finish(Setting setting, const Corpus& corpus, const std::vector<char>& held) {
    SplitResult r;
    r.setting = setting;
    for (PlaylistId i = 0; i < corpus.num_playlists(); ++i) (held[i] ? r.test : r.train).push_back(i);
    return r;
}

// Ordering used to pick the newest songs: latest year first, missing years
// last, ties by ascending SongId.
std::vector<SongId> songs_by_recency(const Corpus& corpus) {
    std::vector<SongId> order(corpus.num_songs());
    for (SongId m = 0; m < order.size(); ++m) order[m] = m;
    std::stable_sort(order.begin(), order.end(), [&](SongId a, SongId b) {
        const auto& ya = corpus.song(a).release_year;
        const auto& yb = corpus.song(b).release_year;
        if (ya.has_value() != yb.has_value()) return ya.has_value();
        if (ya && *ya != *yb) return *ya > *yb;
        return a < b;
    });
    return order;
}

}  // namespace

SplitResult split_cold_playlists(const Corpus& corpus, const SplitSpec& spec) {
    spec.validate(corpus.num_songs());
    const auto support = song_support(corpus);
    if (std::none_of(support.begin(), support.end(),
                     [&](std::size_t s) { return s >= spec.min_song_support; }))
        throw DataError("cold playlists split: no song appears in at least " +
                        std::to_string(spec.min_song_support) + " playlists");

    std::vector<char> eligible(corpus.num_playlists(), 0);
    for (PlaylistId i = 0; i < corpus.num_playlists(); ++i) {
        const auto& members = corpus.playlist(i).members;
        eligible[i] = std::all_of(members.begin(), members.end(),
                                  [&](SongId m) { return support[m] >= spec.min_song_support; });
    }

    std::vector<UserId> candidates;
    for (UserId u = 0; u < corpus.num_users(); ++u) {
        const auto& owned = corpus.playlists_of(u);
        if (owned.size() >= 2 &&
            std::any_of(owned.begin(), owned.end(), [&](PlaylistId i) { return eligible[i] != 0; }))
            candidates.push_back(u);
    }
    if (candidates.empty())
        throw DataError("cold playlists split: no user has both an eligible playlist and another playlist to keep");

    std::mt19937_64 rng(spec.seed);
    std::shuffle(candidates.begin(), candidates.end(), rng);

    const auto target = user_target(spec.user_fraction, corpus.num_users());
    std::vector<std::size_t> train_count = support;
    std::vector<char> held(corpus.num_playlists(), 0);
    std::size_t held_users = 0;
    for (auto u : candidates) {
        if (held_users >= target) break;
        std::vector<PlaylistId> owned;
        for (auto i : corpus.playlists_of(u))
            if (eligible[i]) owned.push_back(i);
        std::shuffle(owned.begin(), owned.end(), rng);
        const std::size_t budget = std::max<std::size_t>(1, corpus.playlists_of(u).size() / 2);
        std::size_t taken = 0;
        for (auto i : owned) {
            if (taken >= budget) break;
            const auto& members = corpus.playlist(i).members;
            // Every test song must stay in at least one training playlist.
            if (!std::all_of(members.begin(), members.end(), [&](SongId m) { return train_count[m] >= 2; }))
                continue;
            for (auto m : members) --train_count[m];
            held[i] = 1;
            ++taken;
        }
        if (taken > 0) ++held_users;
    }
    auto result = finish(Setting::ColdPlaylists, corpus, held);
    if (result.test.empty())
        throw DataError("cold playlists split: constraints leave no playlist to hold out");
    return result;
}

SplitResult split_cold_users(const Corpus& corpus, const SplitSpec& spec) {
    spec.validate(corpus.num_songs());
    if (corpus.num_users() < 2) throw DataError("cold users split needs at least two users");
    std::vector<UserId> order(corpus.num_users());
    for (UserId u = 0; u < order.size(); ++u) order[u] = u;
    std::mt19937_64 rng(spec.seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto target = user_target(spec.user_fraction, corpus.num_users());
    auto train_count = song_support(corpus);
    std::vector<char> held(corpus.num_playlists(), 0);
    std::size_t held_users = 0;
    for (auto u : order) {
        if (held_users >= target) break;
        const auto& owned = corpus.playlists_of(u);
        for (auto i : owned)
            for (auto m : corpus.playlist(i).members) --train_count[m];
        bool orphans = false;
        for (auto i : owned)
            for (auto m : corpus.playlist(i).members) orphans = orphans || train_count[m] == 0;
        if (orphans) {
            for (auto i : owned)
                for (auto m : corpus.playlist(i).members) ++train_count[m];
            continue;
        }
        for (auto i : owned) held[i] = 1;
        ++held_users;
    }
    auto result = finish(Setting::ColdUsers, corpus, held);
    if (result.test.empty()) throw DataError("cold users split: every user is needed to cover some song");
    return result;
}

SplitResult split_cold_songs(const Corpus& corpus, const SplitSpec& spec) {
    spec.validate(corpus.num_songs());
    const auto order = songs_by_recency(corpus);
    std::vector<char> is_held(corpus.num_songs(), 0);
    SplitResult r;
    r.setting = Setting::ColdSongs;
    for (std::size_t k = 0; k < spec.n_new_songs; ++k) {
        if (!corpus.song(order[k]).release_year)
            throw DataError("cold songs split: fewer than n_new_songs songs have a release year");
        is_held[order[k]] = 1;
    }
    for (SongId m = 0; m < corpus.num_songs(); ++m)
        if (is_held[m]) r.held_songs.push_back(m);

    for (PlaylistId i = 0; i < corpus.num_playlists(); ++i) {
        const auto& members = corpus.playlist(i).members;
        ColdSongQuery q{i, {}};
        std::size_t kept = 0;
        for (auto m : members) {
            if (is_held[m]) q.held_positives.push_back(m);
            else ++kept;
        }
        if (kept == 0) continue;  // nothing left to seed from: dropped
        r.train.push_back(i);
        if (!q.held_positives.empty()) {
            r.test.push_back(i);
            r.queries.push_back(std::move(q));
        }
    }
    if (r.queries.empty()) throw DataError("cold songs split: no surviving playlist contains a held song");
    return r;
}

SplitResult make_split(const Corpus& corpus, const SplitSpec& spec) {
    switch (spec.setting) {
    case Setting::ColdPlaylists: return split_cold_playlists(corpus, spec);
    case Setting::ColdUsers: return split_cold_users(corpus, spec);
    case Setting::ColdSongs: return split_cold_songs(corpus, spec);
    }
    throw ConfigError("unknown setting");
}

IntegrityReport check_split(const Corpus& corpus, const SplitResult& split, const SplitSpec& spec) {
    IntegrityReport rep;
    auto fail = [&](std::string msg) {
        rep.ok = false;
        rep.violations.push_back(std::move(msg));
    };
    auto sorted_unique_in_range = [&](const std::vector<std::size_t>& v, std::size_t n, const char* what) {
        if (!std::is_sorted(v.begin(), v.end()) || std::adjacent_find(v.begin(), v.end()) != v.end())
            fail(std::string(what) + " not sorted/unique");
        if (!v.empty() && v.back() >= n) fail(std::string(what) + " index out of range");
    };
    sorted_unique_in_range(split.train, corpus.num_playlists(), "train playlists");
    sorted_unique_in_range(split.test, corpus.num_playlists(), "test playlists");
    if (!rep.ok) return rep;
    if (split.setting != spec.setting) fail("split setting differs from spec");
    if (split.train.empty()) fail("empty training set");
    if (split.test.empty()) fail("empty test set");

    std::vector<char> in_train(corpus.num_playlists(), 0), in_test(corpus.num_playlists(), 0);
    for (auto i : split.train) in_train[i] = 1;
    for (auto i : split.test) in_test[i] = 1;

    if (split.setting != Setting::ColdSongs) {
        for (PlaylistId i = 0; i < corpus.num_playlists(); ++i) {
            if (in_train[i] && in_test[i]) fail("playlist " + corpus.playlist(i).id + " in both train and test");
            if (!in_train[i] && !in_test[i]) fail("playlist " + corpus.playlist(i).id + " unassigned");
        }
        std::vector<std::size_t> train_support(corpus.num_songs(), 0);
        for (auto i : split.train)
            for (auto m : corpus.playlist(i).members) ++train_support[m];
        const auto support = song_support(corpus);
        for (auto i : split.test) {
            const auto& p = corpus.playlist(i);
            for (auto m : p.members) {
                if (train_support[m] == 0)
                    fail("test song " + corpus.song(m).id + " absent from training playlists");
                if (split.setting == Setting::ColdPlaylists && support[m] < spec.min_song_support)
                    fail("test song " + corpus.song(m).id + " has support below " +
                         std::to_string(spec.min_song_support));
            }
            const auto& owned = corpus.playlists_of(p.owner);
            const bool keeps_training = std::any_of(owned.begin(), owned.end(),
                                                    [&](PlaylistId j) { return in_train[j] != 0; });
            if (split.setting == Setting::ColdPlaylists && !keeps_training)
                fail("test user " + corpus.user(p.owner).id + " has no training playlist");
            if (split.setting == Setting::ColdUsers && keeps_training)
                fail("test user " + corpus.user(p.owner).id + " still has training playlists");
        }
        return rep;
    }

    // Cold songs.
    const auto order = songs_by_recency(corpus);
    std::vector<SongId> expected(order.begin(),
                                 order.begin() + static_cast<std::ptrdiff_t>(std::min(spec.n_new_songs, order.size())));
    std::sort(expected.begin(), expected.end());
    if (expected != split.held_songs) fail("held songs are not the latest released songs");
    std::vector<char> is_held(corpus.num_songs(), 0);
    for (auto m : split.held_songs)
        if (m < corpus.num_songs()) is_held[m] = 1;
    std::map<PlaylistId, const ColdSongQuery*> queries;
    for (const auto& q : split.queries) queries.emplace(q.playlist, &q);
    for (PlaylistId i = 0; i < corpus.num_playlists(); ++i) {
        const auto& members = corpus.playlist(i).members;
        std::vector<SongId> held, kept;
        for (auto m : members) (is_held[m] ? held : kept).push_back(m);
        const bool should_train = !kept.empty();
        if (should_train != (in_train[i] != 0)) fail("playlist " + corpus.playlist(i).id + " train membership wrong");
        const bool should_test = should_train && !held.empty();
        if (should_test != (in_test[i] != 0)) fail("playlist " + corpus.playlist(i).id + " test membership wrong");
        const auto it = queries.find(i);
        if (should_test && (it == queries.end() || it->second->held_positives != held))
            fail("playlist " + corpus.playlist(i).id + " held positives wrong");
        if (!should_test && it != queries.end()) fail("unexpected query for " + corpus.playlist(i).id);
    }
    return rep;
}

TrainingData training_data(const Corpus& corpus, const SplitResult& split) {
    TrainingData t;
    t.setting = split.setting;
    t.playlists = split.train;
    t.is_training_song.assign(corpus.num_songs(), 0);
    t.is_training_playlist.assign(corpus.num_playlists(), 0);
    std::vector<char> is_held(corpus.num_songs(), 0);
    for (auto m : split.held_songs) is_held[m] = 1;
    std::set<UserId> users;
    for (auto i : t.playlists) {
        std::vector<SongId> kept;
        for (auto m : corpus.playlist(i).members)
            if (!is_held[m]) kept.push_back(m);
        for (auto m : kept) t.is_training_song[m] = 1;
        t.members.push_back(std::move(kept));
        t.is_training_playlist[i] = 1;
        users.insert(corpus.playlist(i).owner);
    }
    for (SongId m = 0; m < corpus.num_songs(); ++m)
        if (t.is_training_song[m]) t.songs.push_back(m);
    t.users.assign(users.begin(), users.end());
    return t;
}

std::vector<double> song_playcounts(const Corpus& corpus, const TrainingData& training) {
    std::vector<double> counts(corpus.num_songs(), 0.0);
    for (const auto& members : training.members)
        for (auto m : members) counts[m] += 1.0;
    return counts;
}

std::vector<double> artist_playcounts(const Corpus& corpus, const TrainingData& training) {
    const auto songs = song_playcounts(corpus, training);
    std::vector<double> counts(corpus.num_artists(), 0.0);
    for (SongId m = 0; m < songs.size(); ++m) counts[corpus.song(m).artist] += songs[m];
    return counts;
}

std::vector<TestQuery> test_queries(const Corpus& corpus, const SplitResult& split) {
    std::vector<TestQuery> out;
    if (split.setting == Setting::ColdSongs) {
        for (const auto& q : split.queries)
            out.push_back({corpus.playlist(q.playlist).owner, q.playlist, q.held_positives});
    } else {
        for (auto i : split.test) {
            const auto& p = corpus.playlist(i);
            out.push_back({p.owner, i, p.members});
        }
    }
    return out;
}

std::vector<SongId> candidate_songs(const Corpus& corpus, const SplitResult& split) {
    if (split.setting == Setting::ColdSongs) return split.held_songs;
    return training_data(corpus, split).songs;
}

namespace {

void write_ids(const std::filesystem::path& path, const std::vector<std::string>& ids) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    for (const auto& id : ids) out << id << '\n';
}

std::vector<std::string> read_ids(const std::filesystem::path& path) {
    std::vector<std::string> ids;
    for (auto& [n, line] : text::read_lines(path)) ids.push_back(std::move(line));
    return ids;
}

}  // namespace

void write_split(const Corpus& corpus, const SplitResult& split, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_ids(dir / "setting.txt", {std::string(to_string(split.setting))});
    auto playlist_ids = [&](const std::vector<PlaylistId>& v) {
        std::vector<std::string> ids;
        for (auto i : v) ids.push_back(corpus.playlist(i).id);
        return ids;
    };
    write_ids(dir / "train_playlists.txt", playlist_ids(split.train));
    write_ids(dir / "test_playlists.txt", playlist_ids(split.test));
    if (split.setting == Setting::ColdSongs) {
        std::vector<std::string> held, queries;
        for (auto m : split.held_songs) held.push_back(corpus.song(m).id);
        for (const auto& q : split.queries) {
            std::string line = corpus.playlist(q.playlist).id + ",";
            for (std::size_t k = 0; k < q.held_positives.size(); ++k) {
                if (k) line += ';';
                line += corpus.song(q.held_positives[k]).id;
            }
            queries.push_back(std::move(line));
        }
        write_ids(dir / "held_songs.txt", held);
        write_ids(dir / "test_queries.txt", queries);
    }
}

SplitResult read_split(const Corpus& corpus, const std::filesystem::path& dir) {
    const auto setting_lines = read_ids(dir / "setting.txt");
    if (setting_lines.size() != 1) throw DataError((dir / "setting.txt").string() + ": expected one line");
    SplitResult r;
    try {
        r.setting = parse_setting(setting_lines.front());
    } catch (const ConfigError& e) {
        throw DataError((dir / "setting.txt").string() + ": " + e.what());
    }
    auto playlists = [&](const char* name) {
        std::vector<PlaylistId> out;
        for (const auto& id : read_ids(dir / name)) {
            const auto i = corpus.find_playlist(id);
            if (!i) throw DataError((dir / name).string() + ": unknown playlist id '" + id + "'");
            out.push_back(*i);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto song = [&](const std::string& id, const std::filesystem::path& file) {
        const auto m = corpus.find_song(id);
        if (!m) throw DataError(file.string() + ": unknown song id '" + id + "'");
        return *m;
    };
    r.train = playlists("train_playlists.txt");
    r.test = playlists("test_playlists.txt");
    if (r.setting == Setting::ColdSongs) {
        for (const auto& id : read_ids(dir / "held_songs.txt")) r.held_songs.push_back(song(id, dir / "held_songs.txt"));
        std::sort(r.held_songs.begin(), r.held_songs.end());
        for (const auto& line : read_ids(dir / "test_queries.txt")) {
            const auto fields = text::split(line, ',');
            if (fields.size() != 2) throw DataError((dir / "test_queries.txt").string() + ": malformed line '" + line + "'");
            const auto i = corpus.find_playlist(fields[0]);
            if (!i) throw DataError((dir / "test_queries.txt").string() + ": unknown playlist id '" + fields[0] + "'");
            ColdSongQuery q{*i, {}};
            for (const auto& s : text::split(fields[1], ';')) q.held_positives.push_back(song(s, dir / "test_queries.txt"));
            std::sort(q.held_positives.begin(), q.held_positives.end());
            r.queries.push_back(std::move(q));
        }
        std::sort(r.queries.begin(), r.queries.end(),
                  [](const ColdSongQuery& a, const ColdSongQuery& b) { return a.playlist < b.playlist; });
    }
    return r;
}

}  // namespace coldmtc
