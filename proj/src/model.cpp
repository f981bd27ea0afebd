#include "coldmtc/model.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

namespace coldmtc {

double training_objective(const ModelParams& theta, const RankingProblem& problem, const Hyperparams& hp) {
    return regulariser_value(theta, hp) + mtc_risk(theta, problem, hp.p);
}

FitResult fit(const RankingProblem& problem, const Hyperparams& hp, const OwlqnConfig& cfg) {
    hp.validate();
    ModelParams theta(problem.num_users, problem.num_playlists, problem.dim());
    const auto reg = regulariser(theta, hp);  // l1 weights depend only on shape
    std::size_t clamped = 0;
    auto smooth = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        theta.data() = x;
        const auto risk = mtc_risk_grad(theta, problem, hp.p);
        const auto r = regulariser(theta, hp);
        clamped += risk.clamped;
        grad = risk.gradient.data() + r.smooth_grad.data();
        return risk.value + r.smooth_value;
    };
    FitResult out;
    out.report = minimize(smooth, reg.l1_weights, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(theta.size())), cfg);
    theta.data() = out.report.x;
    out.theta = std::move(theta);
    out.clamped_scores = clamped;
    return out;
}

TrainedModel train(const Corpus& corpus, const FeatureMatrix& x, const TrainingData& training, const Hyperparams& hp,
                   const OwlqnConfig& cfg) {
    const auto problem = RankingProblem::from_training(corpus, x, training);
    auto result = fit(problem, hp, cfg);
    TrainedModel model;
    model.theta = std::move(result.theta);
    model.hp = hp;
    model.schema_hash = x.schema_hash();
    model.num_songs = x.num_songs();
    model.train_playlists = training.playlists;
    model.train_users = training.users;
    model.summary = TrainSummary{result.report.iterations, result.report.trace.front(), result.report.objective,
                                 result.report.reason, result.clamped_scores};
    return model;
}

namespace {

void check_schema(const TrainedModel& model, const FeatureMatrix& x) {
    if (x.schema_hash() != model.schema_hash)
        throw ConfigError("feature schema hash " + hex64(x.schema_hash()) + " does not match the model's " +
                          hex64(model.schema_hash));
    if (x.dim() != model.theta.dim()) throw ConfigError("feature dimension differs from the model's");
}

std::vector<double> linear_scores(const FeatureMatrix& x, const Eigen::VectorXd& w) {
    const Eigen::VectorXd s = x.values() * w;
    return {s.data(), s.data() + s.size()};
}

bool is_training_user(const TrainedModel& model, UserId u) {
    return std::binary_search(model.train_users.begin(), model.train_users.end(), u);
}

}  // namespace

std::vector<double> score_cold_playlist(const TrainedModel& model, const FeatureMatrix& x, UserId u) {
    check_schema(model, x);
    if (u >= model.theta.num_users() || !is_training_user(model, u))
        throw ConfigError("user " + std::to_string(u) + " is not a training user");
    return linear_scores(x, model.theta.alpha(u) + model.theta.mu());
}

std::vector<UserId> nearest_users(const TrainedModel& model, const Corpus& corpus, std::span<const double> attrs,
                                  std::size_t k) {
    if (k < 1) throw ConfigError("k must be >= 1");
    if (!corpus.has_user_attributes())
        throw ConfigError("corpus has no user attributes; score anonymous new users with shared weights instead");
    if (attrs.size() != corpus.user_attribute_columns().size())
        throw ConfigError("attribute vector has " + std::to_string(attrs.size()) + " entries, expected " +
                          std::to_string(corpus.user_attribute_columns().size()));
    auto clean = [](double v) { return std::isnan(v) ? 0.0 : v; };
    auto norm = [&](std::span<const double> v) {
        double s = 0.0;
        for (double a : v) s += clean(a) * clean(a);
        return std::sqrt(s);
    };
    const double query_norm = norm(attrs);
    std::vector<std::pair<double, UserId>> sims;
    for (auto u : model.train_users) {
        const auto& other = corpus.user(u).attributes;
        double dot = 0.0;
        for (std::size_t c = 0; c < attrs.size(); ++c) dot += clean(attrs[c]) * clean(other[c]);
        const double denom = query_norm * norm(other);
        sims.emplace_back(denom > 0.0 ? dot / denom : 0.0, u);
    }
    std::stable_sort(sims.begin(), sims.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<UserId> out;
    for (std::size_t j = 0; j < std::min(k, sims.size()); ++j) out.push_back(sims[j].second);
    return out;
}

std::vector<double> score_cold_user(const TrainedModel& model, const Corpus& corpus, const FeatureMatrix& x,
                                    std::span<const double> attrs, std::size_t k) {
    check_schema(model, x);
    const auto nbrs = nearest_users(model, corpus, attrs, k);
    if (nbrs.empty()) throw ConfigError("model has no training users");
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.theta.dim()));
    for (auto u : nbrs) w += model.theta.alpha(u);
    w /= static_cast<double>(nbrs.size());
    w += model.theta.mu();
    return linear_scores(x, w);
}

std::vector<double> score_cold_user_anonymous(const TrainedModel& model, const FeatureMatrix& x) {
    check_schema(model, x);
    return linear_scores(x, model.theta.mu());
}

std::vector<double> score_cold_song(const TrainedModel& model, const Corpus& corpus, const FeatureMatrix& x_new,
                                    UserId u, PlaylistId i) {
    check_schema(model, x_new);
    if (x_new.schema().has_origin(ColumnOrigin::SongPopularity))
        throw ConfigError("cold-song features must not contain a song popularity column");
    if (corpus.playlist(i).owner != u)
        throw ConfigError("playlist '" + corpus.playlist(i).id + "' is not owned by user '" + corpus.user(u).id + "'");
    if (!std::binary_search(model.train_playlists.begin(), model.train_playlists.end(), i))
        throw ConfigError("playlist '" + corpus.playlist(i).id + "' is not a training playlist");
    return linear_scores(x_new, model.theta.weights(u, i));
}

Recommendation recommend(std::span<const double> scores, std::size_t K, RecommendMode mode, std::uint64_t seed,
                         std::span<const SongId> candidates) {
    if (K == 0) throw ConfigError("K must be >= 1");
    if (K > scores.size())
        throw ConfigError("K=" + std::to_string(K) + " exceeds the " + std::to_string(scores.size()) + " candidates");
    if (!candidates.empty() && candidates.size() != scores.size())
        throw ConfigError("candidate list length differs from score vector");
    auto id = [&](std::size_t k) { return candidates.empty() ? SongId{k} : candidates[k]; };

    Recommendation rec;
    rec.mode = mode;
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (mode == RecommendMode::TopK) {
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(K), order.end(),
                          [&](std::size_t a, std::size_t b) {
                              if (scores[a] != scores[b]) return scores[a] > scores[b];
                              return id(a) < id(b);
                          });
        for (std::size_t k = 0; k < K; ++k) rec.items.emplace_back(id(order[k]), scores[order[k]]);
        return rec;
    }

    // Sequential softmax draws without replacement.
    const double hi = *std::max_element(scores.begin(), scores.end());
    std::vector<double> weight(scores.size());
    for (std::size_t k = 0; k < scores.size(); ++k) weight[k] = std::exp(scores[k] - hi);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t draw = 0; draw < K; ++draw) {
        double total = 0.0;
        for (double w : weight) total += w;
        double target = unit(rng) * total;
        std::size_t pick = scores.size();
        for (std::size_t k = 0; k < weight.size(); ++k) {
            if (weight[k] <= 0.0) continue;
            pick = k;
            if (target < weight[k]) break;
            target -= weight[k];
        }
        rec.items.emplace_back(id(pick), scores[pick]);
        weight[pick] = 0.0;
    }
    return rec;
}

namespace {

constexpr std::array<char, 8> kMagic{'C', 'L', 'D', 'M', 'T', 'C', '\0', '\0'};

class Writer {
  public:
    explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary), path_(path) {
        if (!out_) throw DataError("cannot write model file '" + path.string() + "'");
    }
    void bytes(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
    void u32(std::uint32_t v) {
        unsigned char b[4];
        for (int k = 0; k < 4; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
        bytes(b, 4);
    }
    void u64(std::uint64_t v) {
        unsigned char b[8];
        for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
        bytes(b, 8);
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void finish() {
        out_.flush();
        if (!out_) throw DataError("failed writing model file '" + path_.string() + "'");
    }

  private:
    std::ofstream out_;
    std::filesystem::path path_;
};

class Reader {
  public:
    explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary), path_(path) {
        if (!in_) throw DataError("cannot open model file '" + path.string() + "'");
    }
    void bytes(void* p, std::size_t n) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n)
            throw DataError("model file '" + path_.string() + "' is truncated");
    }
    std::uint32_t u32() {
        unsigned char b[4];
        bytes(b, 4);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(b[k]) << (8 * k);
        return v;
    }
    std::uint64_t u64() {
        unsigned char b[8];
        bytes(b, 8);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

  private:
    std::ifstream in_;
    std::filesystem::path path_;
};

}  // namespace

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    Writer w(path);
    w.bytes(kMagic.data(), kMagic.size());
    w.u32(kModelFormatVersion);
    w.u64(model.num_songs);
    w.u64(model.theta.num_playlists());
    w.u64(model.theta.num_users());
    w.u64(model.theta.dim());
    w.f64(model.hp.lambda1);
    w.f64(model.hp.lambda2);
    w.f64(model.hp.lambda3);
    w.f64(model.hp.p);
    w.u64(model.schema_hash);
    for (Eigen::Index k = 0; k < model.theta.data().size(); ++k) w.f64(model.theta.data()[k]);
    w.u64(model.train_playlists.size());
    for (auto i : model.train_playlists) w.u64(i);
    w.u64(model.train_users.size());
    for (auto u : model.train_users) w.u64(u);
    w.finish();
}

TrainedModel load_model(const std::filesystem::path& path) {
    Reader r(path);
    std::array<char, 8> magic{};
    r.bytes(magic.data(), magic.size());
    if (magic != kMagic) throw DataError("'" + path.string() + "' is not a model file (bad magic)");
    const auto version = r.u32();
    if (version != kModelFormatVersion)
        throw DataError("model file version " + std::to_string(version) + " is not supported (expected " +
                        std::to_string(kModelFormatVersion) + ")");
    TrainedModel m;
    m.num_songs = r.u64();
    const auto N = r.u64(), U = r.u64(), D = r.u64();
    constexpr std::uint64_t kLimit = 1ULL << 32;
    if (N >= kLimit || U >= kLimit || D >= kLimit || (U + N + 1) * D >= kLimit)
        throw DataError("model file '" + path.string() + "' has implausible dimensions");
    m.hp.lambda1 = r.f64();
    m.hp.lambda2 = r.f64();
    m.hp.lambda3 = r.f64();
    m.hp.p = r.f64();
    m.schema_hash = r.u64();
    m.theta = ModelParams(U, N, D);
    for (Eigen::Index k = 0; k < m.theta.data().size(); ++k) m.theta.data()[k] = r.f64();
    auto read_ids = [&](std::uint64_t bound) {
        const auto n = r.u64();
        if (n > bound) throw DataError("model file '" + path.string() + "' has a corrupt index list");
        std::vector<std::size_t> ids(n);
        for (auto& v : ids) {
            v = r.u64();
            if (v >= bound) throw DataError("model file '" + path.string() + "' has an out-of-range index");
        }
        return ids;
    };
    m.train_playlists = read_ids(N);
    m.train_users = read_ids(U);
    if (!r.at_end()) throw DataError("model file '" + path.string() + "' has trailing bytes");
    m.hp.validate();
    return m;
}

}  // namespace coldmtc
