#include "doctest.h"
#include "test_util.hpp"

using namespace coldmtc;
using testutil::write_file;

TEST_CASE("four songs and two playlists load with sorted indices") {
    const auto f = testutil::tiny_files("corpus_load");
    const auto c = load_corpus(f.songs, f.playlists, f.users);
    CHECK(c.num_songs() == 4);
    CHECK(c.num_playlists() == 2);
    CHECK(c.num_users() == 2);
    CHECK(c.num_artists() == 3);
    CHECK(c.song(0).id == "s1");
    CHECK(c.song(3).id == "s4");
    CHECK_FALSE(c.song(3).release_year.has_value());
    CHECK(std::isnan(c.song(1).metadata[1]));
    CHECK(c.playlist(1).members == std::vector<SongId>{1, 2, 3});
    CHECK(c.playlist(1).owner == 1);
    CHECK(c.has_user_attributes());
    CHECK(std::isnan(c.user(1).attributes[0]));
    CHECK(c.metadata_columns() == std::vector<std::string>{"duration", "loudness"});
}

TEST_CASE("reloading gives the same indexing and serialisation") {
    const auto f = testutil::tiny_files("corpus_reload");
    const auto a = load_corpus(f.songs, f.playlists, f.users);
    const auto b = load_corpus(f.songs, f.playlists, f.users);
    CHECK(serialise(a) == serialise(b));
    for (std::size_t m = 0; m < a.num_songs(); ++m) CHECK(a.song(m).id == b.song(m).id);

    // Writers round-trip through the reader.
    const auto dir = testutil::temp_dir("corpus_roundtrip");
    write_corpus(a, dir);
    const auto c = load_corpus(dir / "songs.csv", dir / "playlists.csv", dir / "users.csv");
    CHECK(serialise(c) == serialise(a));
}

TEST_CASE("index assignment ignores row order") {
    const auto dir = testutil::temp_dir("corpus_order");
    write_file(dir / "s.csv", "song_id,artist_id,release_year\nb,x,1\na,y,2\nc,x,3\n");
    write_file(dir / "p.csv", "q2,v,c;a\nq1,w,b\n");
    const auto c = load_corpus(dir / "s.csv", dir / "p.csv");
    CHECK(c.song(0).id == "a");
    CHECK(c.playlist(0).id == "q1");
    CHECK(c.user(0).id == "v");
    CHECK(c.playlist(1).members == std::vector<SongId>{0, 2});
    CHECK_FALSE(c.has_user_attributes());
    CHECK(c.user(0).attributes.empty());
}

TEST_CASE("referential and structural errors") {
    const auto dir = testutil::temp_dir("corpus_errors");
    write_file(dir / "s.csv", "song_id,artist_id,release_year\ns1,a,2000\ns2,a,2001\n");
    auto expect_error = [&](const std::string& playlists, const std::string& needle) {
        write_file(dir / "p.csv", playlists);
        try {
            load_corpus(dir / "s.csv", dir / "p.csv");
            FAIL("expected DataError containing " << needle);
        } catch (const DataError& e) {
            CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
        }
    };
    expect_error("p1,u,s1;s9\np2,u,s2\n", "s9");
    expect_error("p1,u,s1;s9\np2,u,s2\n", "p.csv:1");
    expect_error("p1,u,\np2,u,s2;s1\n", "no songs");
    expect_error("p1,u,s1;s1\np2,u,s2\n", "s1");
    expect_error("p1,u,s1\np1,v,s2\n", "duplicate");
    expect_error("p1,u,s1\n", "s2");  // song in no playlist
    expect_error("p1,u\n", "p.csv:1");

    write_file(dir / "p.csv", "p1,u,s1;s2\n");
    write_file(dir / "dup.csv", "song_id,artist_id,release_year\ns1,a,2000\ns1,b,2001\n");
    CHECK_THROWS_AS(load_corpus(dir / "dup.csv", dir / "p.csv"), DataError);
    write_file(dir / "bad.csv", "song_id,artist_id,release_year,x\ns1,a,2000,abc\ns2,a,2000,1\n");
    CHECK_THROWS_AS(load_corpus(dir / "bad.csv", dir / "p.csv"), DataError);
    write_file(dir / "hdr.csv", "id,artist\ns1,a\n");
    CHECK_THROWS_AS(load_corpus(dir / "hdr.csv", dir / "p.csv"), DataError);
    write_file(dir / "u.csv", "user_id,age\nzz,3\n");
    CHECK_THROWS_AS(load_corpus(dir / "s.csv", dir / "p.csv", dir / "u.csv"), DataError);
}

TEST_CASE("missing file is a data error naming the path") {
    const auto dir = testutil::temp_dir("corpus_missing");
    try {
        load_corpus(dir / "s.csv", dir / "nowhere.csv");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("s.csv") != std::string::npos);
    }
}

TEST_CASE("membership examples") {
    const auto dir = testutil::temp_dir("corpus_membership");
    write_file(dir / "s.csv", "song_id,artist_id,release_year\nm0,a,1\nm1,a,1\nm2,a,1\nm3,a,1\n");
    write_file(dir / "p.csv", "pa,u,m0;m2\npb,u,m0;m1;m2\npc,v,m3\n");
    const auto c = load_corpus(dir / "s.csv", dir / "p.csv");

    const auto a = membership(c, 0);
    CHECK(a.positives == std::vector<SongId>{0, 2});
    CHECK(a.num_positive() == 2);
    CHECK(a.num_negative() == 2);

    const auto b = membership(c, 1);
    CHECK(b.num_negative() == 1);

    CHECK_THROWS_AS(membership(c, 3), ConfigError);

    std::size_t total = 0;
    for (UserId u = 0; u < c.num_users(); ++u) total += c.playlists_of(u).size();
    CHECK(total == c.num_playlists());
    for (PlaylistId i = 0; i < c.num_playlists(); ++i) {
        const auto y = membership(c, i);
        CHECK(y.num_positive() + y.num_negative() == c.num_songs());
    }
}

TEST_CASE("membership validation") {
    CHECK_THROWS_AS(Membership::make({}, 4), ConfigError);
    CHECK_THROWS_AS(Membership::make({0, 1, 2, 3}, 4), ConfigError);
    CHECK_THROWS_AS(Membership::make({2, 1}, 4), ConfigError);
    CHECK_THROWS_AS(Membership::make({5}, 4), ConfigError);
    const auto y = Membership::make({1, 3}, 5);
    CHECK(y.labels() == std::vector<char>{0, 1, 0, 1, 0});
}

TEST_CASE("build from records and lookups") {
    CorpusInput in;
    in.songs = {{"x", "art", 1990, {}, ""}, {"y", "art", std::nullopt, {}, ""}};
    in.playlists = {{"p", "u", {"y", "x"}, ""}};
    const auto c = Corpus::build(in);
    CHECK(c.find_song("y") == std::optional<SongId>{1});
    CHECK_FALSE(c.find_song("z").has_value());
    CHECK(c.find_artist("art") == std::optional<ArtistId>{0});
    CHECK(c.playlists_of(0) == std::vector<PlaylistId>{0});
    CHECK_THROWS_AS(c.song(2), ConfigError);
    CHECK_THROWS_AS(c.user(1), ConfigError);
}

TEST_CASE("text helpers") {
    CHECK(text::split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(text::trim("  x \t") == "x");
    CHECK(std::isnan(text::parse_real("?", "here")));
    CHECK(text::parse_real("-2.5e1", "here") == -25.0);
    CHECK_THROWS_AS(text::parse_real("1.5x", "here"), DataError);
    CHECK(text::parse_real(text::format_real(0.1), "here") == 0.1);
    CHECK(text::format_real(NAN) == "?");
}
