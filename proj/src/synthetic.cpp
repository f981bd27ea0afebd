#include "coldmtc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace coldmtc {

void SyntheticSpec::validate() const {
    if (users < 1 || playlists < users) throw ConfigError("synthetic: need users >= 1 and playlists >= users");
    if (songs < 2 || songs > 2000) throw ConfigError("synthetic: songs must lie in [2, 2000]");
    if (dim < 2) throw ConfigError("synthetic: dim must be >= 2 (features plus bias)");
    if (min_length < 1 || max_length < min_length || max_length >= songs)
        throw ConfigError("synthetic: need 1 <= min_length <= max_length < songs");
    if (!(noise >= 0.0 && noise <= 1.0)) throw ConfigError("synthetic: noise must lie in [0, 1]");
    if (user_clusters < 1) throw ConfigError("synthetic: user_clusters must be >= 1");
}

namespace {

std::string make_id(char prefix, std::size_t k, std::size_t count) {
    const int width = static_cast<int>(std::to_string(count).size());
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, k);
    return buf;
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    const std::size_t U = spec.users, N = spec.playlists, M = spec.songs, D = spec.dim, F = D - 1;
    const std::size_t A = spec.artists ? spec.artists : std::max<std::size_t>(1, M / 10);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto gaussian_vector = [&](std::size_t n) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(n));
        for (auto& e : v) e = gauss(rng);
        return v;
    };

    // Songs: features cluster around their artist's centre.
    std::vector<Eigen::VectorXd> centres;
    for (std::size_t a = 0; a < A; ++a) centres.push_back(gaussian_vector(F));
    std::uniform_int_distribution<std::size_t> pick_artist(0, A - 1);
    std::uniform_int_distribution<int> pick_year(1980, 2019);
    RowMatrix x(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(D));
    std::vector<std::size_t> artist_of(M);
    std::vector<int> year_of(M);
    for (std::size_t m = 0; m < M; ++m) {
        artist_of[m] = pick_artist(rng);
        year_of[m] = pick_year(rng);
        const Eigen::VectorXd f = 0.6 * centres[artist_of[m]] + 0.8 * gaussian_vector(F);
        x.row(static_cast<Eigen::Index>(m)).head(static_cast<Eigen::Index>(F)) = f.transpose();
        x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(F)) = 1.0;
    }

    // Users: cluster-level taste plus individual variation.
    ModelParams planted(U, N, D);
    std::vector<Eigen::VectorXd> tastes;
    for (std::size_t g = 0; g < spec.user_clusters; ++g) tastes.push_back(gaussian_vector(D));
    Eigen::MatrixXd projection(static_cast<Eigen::Index>(spec.attribute_dim), static_cast<Eigen::Index>(D));
    for (auto& e : projection.reshaped()) e = gauss(rng) / std::sqrt(static_cast<double>(D));
    std::vector<std::vector<double>> attributes(U);
    for (std::size_t u = 0; u < U; ++u) {
        const Eigen::VectorXd a = tastes[u % spec.user_clusters] + 0.3 * gaussian_vector(D);
        planted.alpha(u) = spec.user_scale * a;
        const Eigen::VectorXd attr = projection * a + 0.1 * gaussian_vector(spec.attribute_dim);
        attributes[u].assign(attr.data(), attr.data() + attr.size());
    }
    planted.mu() = spec.shared_scale * gaussian_vector(D);

    // Playlists: one per user first, the rest to random owners.
    std::vector<std::size_t> owner(N);
    std::uniform_int_distribution<std::size_t> pick_user(0, U - 1);
    for (std::size_t i = 0; i < N; ++i) owner[i] = i < U ? i : pick_user(rng);
    std::uniform_int_distribution<std::size_t> pick_len(spec.min_length, spec.max_length);
    std::bernoulli_distribution flip(spec.noise);
    std::uniform_int_distribution<std::size_t> pick_song(0, M - 1);

    std::vector<std::vector<std::size_t>> top(N), members(N);
    for (std::size_t i = 0; i < N; ++i) {
        planted.beta(i) = spec.playlist_scale * gaussian_vector(D);
        const Eigen::VectorXd s = x * planted.weights(owner[i], i);
        const std::size_t L = pick_len(rng);
        std::vector<std::size_t> order(M);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(L), order.end(),
                          [&](std::size_t a, std::size_t b) {
                              if (s[static_cast<Eigen::Index>(a)] != s[static_cast<Eigen::Index>(b)])
                                  return s[static_cast<Eigen::Index>(a)] > s[static_cast<Eigen::Index>(b)];
                              return a < b;
                          });
        top[i].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(L));
        std::vector<char> in(M, 0);
        for (auto m : top[i]) in[m] = 1;
        std::vector<std::size_t> chosen;
        for (auto m : top[i]) {
            if (!flip(rng)) {
                chosen.push_back(m);
                continue;
            }
            std::size_t r;
            do r = pick_song(rng);
            while (in[r]);
            in[r] = 1;
            chosen.push_back(r);
        }
        std::sort(chosen.begin(), chosen.end());
        members[i] = std::move(chosen);
    }

    std::vector<char> covered(M, 0);
    for (const auto& mem : members)
        for (auto m : mem) covered[m] = 1;

    CorpusInput input;
    for (std::size_t c = 0; c < F; ++c) input.metadata_columns.push_back(make_id('f', c, F));
    std::vector<std::size_t> kept;
    for (std::size_t m = 0; m < M; ++m) {
        if (!covered[m]) continue;
        kept.push_back(m);
        const auto row = x.row(static_cast<Eigen::Index>(m));
        input.songs.push_back({make_id('s', m, M), make_id('a', artist_of[m], A), year_of[m],
                               std::vector<double>(row.data(), row.data() + F), ""});
    }
    for (std::size_t i = 0; i < N; ++i) {
        PlaylistRecord r{make_id('p', i, N), make_id('u', owner[i], U), {}, ""};
        for (auto m : members[i]) r.songs.push_back(make_id('s', m, M));
        input.playlists.push_back(std::move(r));
    }
    input.user_attribute_columns = std::vector<std::string>{};
    for (std::size_t c = 0; c < spec.attribute_dim; ++c)
        input.user_attribute_columns->push_back(make_id('g', c, spec.attribute_dim));
    for (std::size_t u = 0; u < U; ++u) input.users.push_back({make_id('u', u, U), attributes[u], ""});

    // Zero-padded ids sort like their generation index, so kept songs keep
    // their relative order and index k of the corpus is kept[k].
    auto corpus = Corpus::build(std::move(input));
    std::vector<std::size_t> new_index(M, SIZE_MAX);
    for (std::size_t k = 0; k < kept.size(); ++k) new_index[kept[k]] = k;

    RowMatrix kept_x(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(D));
    for (std::size_t k = 0; k < kept.size(); ++k)
        kept_x.row(static_cast<Eigen::Index>(k)) = x.row(static_cast<Eigen::Index>(kept[k]));
    FeatureSchema schema;
    for (std::size_t c = 0; c < F; ++c) schema.columns.push_back({corpus.metadata_columns()[c], ColumnOrigin::Metadata});
    schema.columns.push_back({"bias", ColumnOrigin::Bias});

    std::vector<std::vector<SongId>> planted_top(N);
    for (std::size_t i = 0; i < N; ++i) {
        for (auto m : top[i]) planted_top[i].push_back(new_index[m]);
        std::sort(planted_top[i].begin(), planted_top[i].end());
    }
    const std::size_t dropped = M - kept.size();
    return SyntheticData{std::move(corpus), FeatureMatrix(std::move(kept_x), std::move(schema)), std::move(planted),
                         std::move(planted_top), dropped};
}

}  // namespace coldmtc
