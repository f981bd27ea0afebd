#include "doctest.h"
#include "test_util.hpp"

#include "coldmtc/metrics.hpp"

using namespace coldmtc;

TEST_CASE("hit rate examples") {
    const auto y = Membership::make({2, 5}, 8);
    const std::vector<SongId> both{5, 1, 2};
    CHECK(hit_rate_at_k(both, y, 3) == 1.0);
    const std::vector<SongId> none{0, 1, 3};
    CHECK(hit_rate_at_k(none, y, 3) == 0.0);
    const std::vector<SongId> one{2, 0, 1};
    CHECK(hit_rate_at_k(one, y, 3) == 0.5);
    CHECK(hit_rate_at_k(both, y, 1) == 0.5);
    CHECK_THROWS_AS(hit_rate_at_k(both, y, 0), ConfigError);
    CHECK_THROWS_AS(hit_rate_at_k(both, Membership{{}, 8}, 1), ConfigError);
}

TEST_CASE("hit rate is non-decreasing in K") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t M = 5 + static_cast<std::size_t>(trial % 20);
        const auto y = Membership::make(testutil::sample_subset(rng, M, 1 + rng() % (M - 1)), M);
        std::vector<SongId> ranked(M);
        std::iota(ranked.begin(), ranked.end(), SongId{0});
        std::shuffle(ranked.begin(), ranked.end(), rng);
        double prev = 0.0;
        for (std::size_t K = 1; K <= M; ++K) {
            const double h = hit_rate_at_k(ranked, y, K);
            CHECK(h >= prev);
            prev = h;
        }
        CHECK(prev == 1.0);
    }
}

TEST_CASE("AUC examples") {
    const auto y = Membership::make({0, 1}, 4);
    const std::vector<double> sep{3, 2, 1, 0};
    CHECK(auc(sep, y) == 1.0);
    const std::vector<double> flat{1, 1, 1, 1};
    CHECK(auc(flat, y) == 0.5);
    const std::vector<double> rev{0, 1, 2, 3};
    CHECK(auc(rev, y) == 0.0);
    CHECK_THROWS_AS(auc(sep, Membership{{}, 4}), ConfigError);
    CHECK_THROWS_AS(auc(sep, Membership{{0, 1, 2, 3}, 4}), ConfigError);
}

TEST_CASE("AUC matches brute-force pair counting and is rank-invariant") {
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<int> coarse(0, 3);
    std::normal_distribution<double> fine;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t M = 2 + static_cast<std::size_t>(trial % 40);
        const auto y = Membership::make(testutil::sample_subset(rng, M, 1 + rng() % (M - 1)), M);
        std::vector<double> s(M);
        for (auto& v : s) v = trial % 2 ? coarse(rng) : fine(rng);
        const double a = auc(s, y);
        CHECK(a == testutil::brute_auc(s, y));
        std::vector<double> t(M);
        for (std::size_t k = 0; k < M; ++k) t[k] = std::exp(3.0 * s[k]) + 7.0;
        CHECK(auc(t, y) == a);
    }
}

TEST_CASE("novelty examples") {
    // K = 1, one user, one playlist, pop = 1/4.
    const std::vector<double> pop{0.25, 0.75};
    const std::vector<UserRecommendations> one{{0, {{0}}}};
    CHECK(novelty_at_k(one, pop, 1) == 2.0);

    // Uniform popularity gives log2 M.
    const std::size_t M = 8;
    const auto uniform = smoothed_popularity(std::vector<double>(M, 3.0));
    const std::vector<UserRecommendations> recs{{0, {{1, 2, 3}, {4, 5, 6}}}, {1, {{7, 0, 1}}}};
    CHECK(novelty_at_k(recs, uniform, 3) == doctest::Approx(3.0).epsilon(1e-15));

    // Most popular song is less novel than the least popular one.
    const auto skew = smoothed_popularity(std::vector<double>{10, 0, 4});
    const std::vector<UserRecommendations> hot{{0, {{0}}}}, cold{{0, {{1}}}};
    CHECK(novelty_at_k(hot, skew, 1) < novelty_at_k(cold, skew, 1));

    // Per-user averaging: u0 has two playlists, u1 one.
    const std::vector<double> p{0.5, 0.25, 0.125, 0.125};
    const std::vector<UserRecommendations> grouped{{0, {{0}, {1}}}, {1, {{2}}}};
    CHECK(novelty_at_k(grouped, p, 1) == doctest::Approx(((1.0 + 2.0) / 2.0 + 3.0) / 2.0));

    CHECK_THROWS_AS(novelty_at_k({}, pop, 1), ConfigError);
    CHECK_THROWS_AS(novelty_at_k(one, pop, 0), ConfigError);
}

TEST_CASE("smoothed popularity") {
    const auto p = smoothed_popularity(std::vector<double>{0, 2, 1});
    CHECK(p == std::vector<double>{1.0 / 6, 3.0 / 6, 2.0 / 6});
}

TEST_CASE("spread examples") {
    for (std::size_t M : {1u, 2u, 7u, 500u}) {
        const std::vector<double> s(M, -4.2);
        CHECK(std::abs(spread(s) - std::log(static_cast<double>(M))) < 1e-9);
    }
    std::vector<double> gap{100, 0, 0, 0, 0};
    CHECK(spread(gap) < 0.01);
    std::vector<double> v{0.3, -1.0, 2.0, 0.0};
    const double h = spread(v);
    std::reverse(v.begin(), v.end());
    CHECK(spread(v) == doctest::Approx(h).epsilon(1e-15));
    CHECK(spread(v) >= 0.0);
    CHECK_THROWS_AS(spread(std::vector<double>{}), ConfigError);
}

TEST_CASE("report serialisation") {
    EvalReport r;
    r.method = "poprank";
    r.setting = "cold_users";
    r.auc = 0.75;
    r.hitrate = {{5, 0.1}, {10, 0.2}};
    r.novelty = {{5, 3.5}, {10, 3.25}};
    r.spread = 1.5;
    r.num_queries = 2;
    r.num_candidates = 9;
    r.query_playlists = {"p1", "p2"};
    r.per_playlist_auc = {0.5, 1.0};
    const auto t = r.to_text();
    CHECK(t.find("auc=0.75\n") != std::string::npos);
    CHECK(t.find("hitrate@10=0.20000000000000001\n") != std::string::npos);
    CHECK(t.find("auc[p2]=1\n") != std::string::npos);
    const auto j = r.to_json();
    CHECK(j.find("\"auc\": 0.75") != std::string::npos);
    CHECK(j.find("\"method\": \"poprank\"") != std::string::npos);
}
