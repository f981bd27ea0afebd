#include "doctest.h"
#include "test_util.hpp"

#include <set>

#include "coldmtc/splits.hpp"
#include "coldmtc/synthetic.hpp"

using namespace coldmtc;

namespace {

Corpus small_synthetic(std::uint64_t seed, std::size_t songs = 150) {
    SyntheticSpec s;
    s.users = 20;
    s.playlists = 60;
    s.songs = songs;
    s.dim = 6;
    s.min_length = 5;
    s.max_length = 15;
    s.noise = 0.1;
    s.seed = seed;
    return generate_synthetic(s).corpus;
}

SplitSpec spec_for(Setting setting, const Corpus& c, std::uint64_t seed) {
    auto s = SplitSpec::defaults(setting, c.num_songs());
    s.seed = seed;
    return s;
}

// songs: name -> (artist, year); playlists: (id, user, members)
Corpus hand_corpus(const std::vector<std::tuple<std::string, std::optional<int>>>& songs,
                   const std::vector<std::tuple<std::string, std::string, std::vector<std::string>>>& playlists) {
    CorpusInput in;
    for (const auto& [id, year] : songs) in.songs.push_back({id, "a", year, {}, ""});
    for (const auto& [id, user, members] : playlists) in.playlists.push_back({id, user, members, ""});
    return Corpus::build(in);
}

}  // namespace

TEST_CASE("spec defaults and validation") {
    const auto p = SplitSpec::defaults(Setting::ColdPlaylists, 100);
    CHECK(p.user_fraction == doctest::Approx(0.20));
    CHECK(p.min_song_support == 5);
    CHECK(SplitSpec::defaults(Setting::ColdUsers, 100).user_fraction == doctest::Approx(0.30));
    CHECK(SplitSpec::defaults(Setting::ColdSongs, 100).n_new_songs == 10);

    auto bad = p;
    bad.user_fraction = 1.0;
    CHECK_THROWS_AS(bad.validate(100), ConfigError);
    auto songs = SplitSpec::defaults(Setting::ColdSongs, 100);
    songs.n_new_songs = 100;
    CHECK_THROWS_AS(songs.validate(100), ConfigError);
}

TEST_CASE("every generated split passes its checker and is seed-deterministic") {
    for (std::uint64_t cs = 1; cs <= 4; ++cs) {
        const auto c = small_synthetic(cs);
        for (auto setting : {Setting::ColdPlaylists, Setting::ColdUsers, Setting::ColdSongs}) {
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                const auto spec = spec_for(setting, c, seed);
                const auto a = make_split(c, spec);
                const auto rep = check_split(c, a, spec);
                CHECK_MESSAGE(rep.ok, to_string(setting) << " corpus " << cs << " seed " << seed << ": "
                                                         << (rep.violations.empty() ? "" : rep.violations[0]));
                const auto b = make_split(c, spec);
                CHECK(a.train == b.train);
                CHECK(a.test == b.test);
                CHECK(a.held_songs == b.held_songs);
                if (setting != Setting::ColdSongs) {
                    std::vector<PlaylistId> both;
                    std::set_intersection(a.train.begin(), a.train.end(), a.test.begin(), a.test.end(),
                                          std::back_inserter(both));
                    CHECK(both.empty());
                    CHECK(a.train.size() + a.test.size() == c.num_playlists());
                }
            }
        }
    }
}

TEST_CASE("different seeds give different cold-user splits") {
    // Dense enough that most users can be held out without orphaning a song.
    const auto c = small_synthetic(9, 40);
    const auto a = make_split(c, spec_for(Setting::ColdUsers, c, 1));
    const auto b = make_split(c, spec_for(Setting::ColdUsers, c, 2));
    CHECK(a.test != b.test);
}

TEST_CASE("checker detects tampering") {
    const auto c = small_synthetic(2);
    const auto spec = spec_for(Setting::ColdPlaylists, c, 0);
    auto s = make_split(c, spec);
    // Moving all of one test user's playlists to test breaks the retention rule.
    const auto owner = c.playlist(s.test.front()).owner;
    for (auto i : c.playlists_of(owner)) {
        s.train.erase(std::remove(s.train.begin(), s.train.end(), i), s.train.end());
        if (std::find(s.test.begin(), s.test.end(), i) == s.test.end()) s.test.push_back(i);
    }
    std::sort(s.test.begin(), s.test.end());
    CHECK_FALSE(check_split(c, s, spec).ok);

    auto t = make_split(c, spec);
    t.train.push_back(t.test.front());
    std::sort(t.train.begin(), t.train.end());
    CHECK_FALSE(check_split(c, t, spec).ok);
}

TEST_CASE("cold playlists needs songs with enough support") {
    const auto c = hand_corpus({{"s1", 2000}, {"s2", 2000}},
                               {{"p1", "u", {"s1"}}, {"p2", "u", {"s2"}}, {"p3", "v", {"s1", "s2"}}});
    CHECK_THROWS_AS(split_cold_playlists(c, SplitSpec::defaults(Setting::ColdPlaylists, 2)), DataError);
}

TEST_CASE("cold playlists on a hand corpus keeps coverage and a training playlist per user") {
    // Six users with two playlists each over songs that all have support >= 5.
    std::vector<std::tuple<std::string, std::optional<int>>> songs{{"a", 1}, {"b", 1}, {"c", 1}};
    std::vector<std::tuple<std::string, std::string, std::vector<std::string>>> pls;
    for (int u = 0; u < 6; ++u) {
        pls.push_back({"p" + std::to_string(u) + "x", "u" + std::to_string(u), {"a", "b"}});
        pls.push_back({"p" + std::to_string(u) + "y", "u" + std::to_string(u), {"b", "c"}});
    }
    const auto c = hand_corpus(songs, pls);
    auto spec = SplitSpec::defaults(Setting::ColdPlaylists, 3);
    spec.user_fraction = 0.5;
    const auto s = split_cold_playlists(c, spec);
    CHECK(check_split(c, s, spec).ok);
    std::set<UserId> test_users;
    for (auto i : s.test) test_users.insert(c.playlist(i).owner);
    CHECK(test_users.size() == 3);
    CHECK(s.test.size() == 3);  // one of two playlists per sampled user
}

TEST_CASE("cold users never holds the sole owner of a song") {
    // u0 alone owns the only playlist with song z.
    const auto c = hand_corpus({{"x", 1}, {"y", 1}, {"z", 1}},
                               {{"p0", "u0", {"x", "z"}},
                                {"p1", "u1", {"x", "y"}},
                                {"p2", "u2", {"x", "y"}},
                                {"p3", "u3", {"y"}}});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto spec = SplitSpec::defaults(Setting::ColdUsers, 3);
        spec.user_fraction = 0.75;
        spec.seed = seed;
        const auto s = split_cold_users(c, spec);
        CHECK(check_split(c, s, spec).ok);
        CHECK(std::find(s.test.begin(), s.test.end(), PlaylistId{0}) == s.test.end());
    }
}

TEST_CASE("cold songs partitions playlists into seeds and held positives") {
    const auto c = hand_corpus({{"n1", 2020}, {"n2", 2020}, {"n3", 2019}, {"o1", 1990}, {"o2", 1991}, {"o3", 1980}},
                               {{"all_new", "u", {"n1", "n2"}},
                                {"mixed", "u", {"n1", "n2", "n3", "o1", "o2"}},
                                {"old", "v", {"o1", "o3"}}});
    auto spec = SplitSpec::defaults(Setting::ColdSongs, 6);
    spec.n_new_songs = 3;
    const auto s = split_cold_songs(c, spec);
    CHECK(check_split(c, s, spec).ok);
    const auto all_new = *c.find_playlist("all_new"), mixed = *c.find_playlist("mixed"), old = *c.find_playlist("old");
    CHECK(std::find(s.train.begin(), s.train.end(), all_new) == s.train.end());
    CHECK(std::find(s.test.begin(), s.test.end(), all_new) == s.test.end());
    CHECK(s.test == std::vector<PlaylistId>{mixed});
    REQUIRE(s.queries.size() == 1);
    CHECK(s.queries[0].held_positives.size() == 3);

    const auto t = training_data(c, s);
    const auto k = std::find(t.playlists.begin(), t.playlists.end(), mixed) - t.playlists.begin();
    CHECK(t.members[static_cast<std::size_t>(k)].size() == 2);
    CHECK(std::find(t.playlists.begin(), t.playlists.end(), old) != t.playlists.end());
    for (auto m : s.held_songs) CHECK_FALSE(t.is_training_song[m]);
    CHECK(candidate_songs(c, s) == s.held_songs);
}

TEST_CASE("cold songs tie-breaks by song id and puts missing years last") {
    const auto c = hand_corpus({{"s1", 2000}, {"s2", 2005}, {"s3", 2005}, {"s4", std::nullopt}, {"s5", 2005}},
                               {{"p", "u", {"s1", "s2", "s3", "s4", "s5"}}});
    auto spec = SplitSpec::defaults(Setting::ColdSongs, 5);
    spec.n_new_songs = 2;
    const auto s = split_cold_songs(c, spec);
    CHECK(s.held_songs == std::vector<SongId>{1, 2});
    spec.n_new_songs = 4;
    CHECK(split_cold_songs(c, spec).held_songs == std::vector<SongId>{0, 1, 2, 4});
}

TEST_CASE("playcounts and queries") {
    const auto c = hand_corpus({{"s1", 1}, {"s2", 1}, {"s3", 1}},
                               {{"p1", "u", {"s1", "s2"}}, {"p2", "u", {"s2", "s3"}}, {"p3", "v", {"s2"}}});
    SplitResult s;
    s.setting = Setting::ColdUsers;
    s.train = {0, 1};
    s.test = {2};
    const auto t = training_data(c, s);
    CHECK(song_playcounts(c, t) == std::vector<double>{1, 2, 1});
    CHECK(artist_playcounts(c, t) == std::vector<double>{4});
    const auto q = test_queries(c, s);
    REQUIRE(q.size() == 1);
    CHECK(q[0].user == 1);
    CHECK(q[0].truth == std::vector<SongId>{1});
    CHECK(t.users == std::vector<UserId>{0});
}

TEST_CASE("split files round-trip") {
    const auto c = small_synthetic(5);
    for (auto setting : {Setting::ColdPlaylists, Setting::ColdUsers, Setting::ColdSongs}) {
        const auto s = make_split(c, spec_for(setting, c, 7));
        const auto dir = testutil::temp_dir(std::string("split_rt_") + std::string(to_string(setting)));
        write_split(c, s, dir);
        const auto r = read_split(c, dir);
        CHECK(r.setting == s.setting);
        CHECK(r.train == s.train);
        CHECK(r.test == s.test);
        CHECK(r.held_songs == s.held_songs);
        REQUIRE(r.queries.size() == s.queries.size());
        for (std::size_t k = 0; k < r.queries.size(); ++k) {
            CHECK(r.queries[k].playlist == s.queries[k].playlist);
            CHECK(r.queries[k].held_positives == s.queries[k].held_positives);
        }
    }
    CHECK_THROWS_AS(read_split(c, testutil::temp_dir("split_missing") / "nothing"), DataError);
}
