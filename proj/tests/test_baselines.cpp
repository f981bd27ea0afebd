#include "doctest.h"
#include "test_util.hpp"

#include "coldmtc/baselines.hpp"

using namespace coldmtc;

namespace {

// Artists: A (s1, s2), B (s3), C (s4), D (s5, never in training).
// Training playlists: t1 (u1) = s1 s3, t2 (u1) = s1 s2, t3 (u2) = s4 s1.
// Test playlist x (u3) = s2 s5.
struct Fixture {
    Corpus corpus;
    TrainingData training;
    PopularityTable pop;
    CollocationMatrix colloc;
};

Fixture fixture() {
    CorpusInput in;
    in.songs = {{"s1", "A", 2000, {}, ""},
                {"s2", "A", 2000, {}, ""},
                {"s3", "B", 2000, {}, ""},
                {"s4", "C", 2000, {}, ""},
                {"s5", "D", 2000, {}, ""}};
    in.playlists = {{"t1", "u1", {"s1", "s3"}, ""},
                    {"t2", "u1", {"s1", "s2"}, ""},
                    {"t3", "u2", {"s4", "s1"}, ""},
                    {"x", "u3", {"s2", "s5"}, ""}};
    auto c = Corpus::build(in);
    SplitResult s;
    s.setting = Setting::ColdUsers;
    s.train = {0, 1, 2};
    s.test = {3};
    auto t = training_data(c, s);
    auto pop = PopularityTable::build(c, t);
    auto colloc = CollocationMatrix::build(c, t);
    return {std::move(c), std::move(t), std::move(pop), std::move(colloc)};
}

const std::vector<SongId> kAll{0, 1, 2, 3, 4};

}  // namespace

TEST_CASE("popularity table") {
    const auto f = fixture();
    CHECK(f.pop.song_playcount == std::vector<double>{3, 1, 1, 1, 0});
    CHECK(f.pop.artist_playcount == std::vector<double>{4, 1, 1, 0});
}

TEST_CASE("collocation counts at playlist granularity") {
    const auto f = fixture();
    CHECK(f.colloc.count(0, 0) == 3.0);  // A is in all three training playlists
    CHECK(f.colloc.count(0, 1) == 1.0);
    CHECK(f.colloc.count(1, 0) == 1.0);
    CHECK(f.colloc.count(0, 2) == 1.0);
    CHECK(f.colloc.count(1, 2) == 0.0);
    CHECK(f.colloc.count(3, 3) == 0.0);
    for (ArtistId a = 0; a < 4; ++a)
        for (ArtistId b = 0; b < 4; ++b) CHECK(f.colloc.count(a, b) == f.colloc.count(b, a));
    CHECK_THROWS_AS(f.colloc.count(9, 0), ConfigError);
}

TEST_CASE("PopRank") {
    const auto f = fixture();
    CHECK(poprank_scores(f.pop, f.corpus, kAll, Setting::ColdPlaylists) == std::vector<double>{3, 1, 1, 1, 0});
    const auto songs = poprank_scores(f.pop, f.corpus, kAll, Setting::ColdSongs);
    CHECK(songs[0] == songs[1]);  // same artist
    CHECK(songs == std::vector<double>{4, 4, 1, 1, 0});
}

TEST_CASE("SAGH") {
    const auto f = fixture();
    const auto ctx = user_context_artists(f.corpus, f.training, 0);  // u1: artists A, B
    CHECK(ctx == std::vector<ArtistId>{0, 1});
    const auto s = sagh_scores(f.pop, f.corpus, kAll, ctx, Setting::ColdPlaylists);
    CHECK(s == std::vector<double>{3, 1, 1, 0, 0});

    // Cold songs: new song by an artist of the given playlist gets its artist playcount.
    const auto pctx = playlist_context_artists(f.corpus, f.training, 2);  // t3: A, C
    CHECK(pctx == std::vector<ArtistId>{0, 2});
    const std::vector<SongId> fresh{1, 2};
    CHECK(sagh_scores(f.pop, f.corpus, fresh, pctx, Setting::ColdSongs) == std::vector<double>{4, 0});
    CHECK_THROWS_AS(playlist_context_artists(f.corpus, f.training, 3), ConfigError);
}

TEST_CASE("CAGH") {
    const auto f = fixture();
    // Context {B}: colloc(A,B)=1, colloc(B,B)=1, colloc(C,B)=0.
    const std::vector<ArtistId> b{1};
    CHECK(cagh_scores(f.pop, f.colloc, f.corpus, kAll, b, Setting::ColdPlaylists) ==
          std::vector<double>{3, 1, 1, 0, 0});
    // Context {A} only: song s1 gets colloc(A,A) * playcount = 3 * 3.
    const std::vector<ArtistId> a{0};
    const auto s = cagh_scores(f.pop, f.colloc, f.corpus, kAll, a, Setting::ColdPlaylists);
    CHECK(s[0] == 9.0);
    CHECK(s[3] == 1.0);
    // Zero collocation with every context artist.
    const std::vector<ArtistId> d{3};
    for (double v : cagh_scores(f.pop, f.colloc, f.corpus, kAll, d, Setting::ColdPlaylists)) CHECK(v == 0.0);

    // SAGH's support lies inside CAGH's (context artists collocate with themselves).
    const auto ctx = user_context_artists(f.corpus, f.training, 0);
    const auto sagh = sagh_scores(f.pop, f.corpus, kAll, ctx, Setting::ColdPlaylists);
    const auto cagh = cagh_scores(f.pop, f.colloc, f.corpus, kAll, ctx, Setting::ColdPlaylists);
    for (std::size_t k = 0; k < kAll.size(); ++k)
        if (sagh[k] > 0) CHECK(cagh[k] > 0);
}

TEST_CASE("CAGH on a two-artist corpus scales with the diagonal") {
    CorpusInput in;
    in.songs = {{"x1", "X", 1, {}, ""}, {"y1", "Y", 1, {}, ""}};
    in.playlists = {{"p1", "u", {"x1"}, ""}, {"p2", "u", {"x1", "y1"}, ""}, {"p3", "v", {"y1"}, ""}};
    const auto c = Corpus::build(in);
    SplitResult s;
    s.setting = Setting::ColdPlaylists;
    s.train = {0, 1, 2};
    const auto t = training_data(c, s);
    const auto pop = PopularityTable::build(c, t);
    const auto col = CollocationMatrix::build(c, t);
    CHECK(col.count(0, 0) == 2.0);
    const std::vector<SongId> cands{0, 1};
    const std::vector<ArtistId> ctx{0};
    const auto v = cagh_scores(pop, col, c, cands, ctx, Setting::ColdPlaylists);
    CHECK(v[0] == 2.0 * pop.song_playcount[0]);
    CHECK(v[1] == 1.0 * pop.song_playcount[1]);
}

TEST_CASE("most popular artists") {
    PopularityTable pop;
    pop.artist_playcount = {5, 9, 5, 1, 9};
    CHECK(most_popular_artists(pop, 3) == std::vector<ArtistId>{0, 1, 4});
    CHECK(most_popular_artists(pop, 10).size() == 5);
}
