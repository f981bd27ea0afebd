#include "coldmtc/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "json.hpp"

namespace coldmtc {

std::string_view to_string(ColumnOrigin origin) {
    switch (origin) {
    case ColumnOrigin::Metadata: return "metadata";
    case ColumnOrigin::GenreOneHot: return "genre_onehot";
    case ColumnOrigin::ArtistEmbedding: return "artist_embedding";
    case ColumnOrigin::SongPopularity: return "song_popularity";
    case ColumnOrigin::ArtistPopularity: return "artist_popularity";
    case ColumnOrigin::Bias: return "bias";
    }
    return "unknown";
}

std::uint64_t FeatureSchema::hash() const {
    Fnv1a h;
    h.update_u64(columns.size());
    for (const auto& c : columns) {
        h.update(c.name);
        h.update_u64(static_cast<std::uint64_t>(c.origin));
        h.update_u64(c.standardised ? 1 : 0);
        h.update_f64(c.shift);
        h.update_f64(c.scale);
    }
    return h.digest();
}

void FeatureSchema::validate() const {
    const auto bias = std::count_if(columns.begin(), columns.end(),
                                    [](const ColumnSpec& c) { return c.origin == ColumnOrigin::Bias; });
    if (bias != 1) throw ConfigError("feature schema needs exactly one bias column");
    if (columns.back().origin != ColumnOrigin::Bias) throw ConfigError("bias column must be last");
}

bool FeatureSchema::has_origin(ColumnOrigin origin) const {
    return std::any_of(columns.begin(), columns.end(), [&](const ColumnSpec& c) { return c.origin == origin; });
}

FeatureMatrix::FeatureMatrix(RowMatrix values, FeatureSchema schema)
    : values_(std::move(values)), schema_(std::move(schema)), hash_(schema_.hash()) {
    if (static_cast<std::size_t>(values_.cols()) != schema_.size())
        throw ConfigError("feature matrix has " + std::to_string(values_.cols()) + " columns but schema has " +
                          std::to_string(schema_.size()));
    if (schema_.size() == 0) throw ConfigError("feature matrix needs D >= 1");
    if (!values_.allFinite()) throw ConfigError("feature matrix has non-finite entries");
    std::size_t bias = 0;
    for (std::size_t j = 0; j < schema_.size(); ++j) {
        if (schema_.columns[j].origin != ColumnOrigin::Bias) continue;
        ++bias;
        if ((values_.col(static_cast<Eigen::Index>(j)).array() != 1.0).any())
            throw ConfigError("bias column '" + schema_.columns[j].name + "' is not identically 1");
    }
    if (bias != 1) throw ConfigError("feature matrix needs exactly one bias column, found " + std::to_string(bias));
}

std::span<const double> FeatureMatrix::row(SongId m) const {
    if (m >= num_songs())
        throw ConfigError("feature row " + std::to_string(m) + " out of range (M=" + std::to_string(num_songs()) + ")");
    return {values_.data() + m * dim(), dim()};
}

FeatureMatrix FeatureMatrix::subset(std::span<const SongId> rows) const {
    RowMatrix out(static_cast<Eigen::Index>(rows.size()), values_.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto r = row(rows[k]);
        std::copy(r.begin(), r.end(), out.data() + k * dim());
    }
    return FeatureMatrix(std::move(out), schema_);
}

namespace {

struct RawColumn {
    ColumnSpec spec;
    std::vector<double> values;  // raw, length M
};

std::map<std::string, std::string> read_genres(const Corpus& corpus, const std::filesystem::path& path) {
    std::map<std::string, std::string> genres;
    for (const auto& [number, line] : text::read_lines(path)) {
        const std::string at = path.string() + ":" + std::to_string(number);
        if (line.rfind("song_id,", 0) == 0) continue;
        const auto fields = text::split(line, ',');
        if (fields.size() != 2 || fields[0].empty()) throw DataError(at + ": expected song_id,genre_label");
        if (!corpus.find_song(fields[0])) continue;  // genre tables may cover a larger catalogue
        if (fields[1].empty() || fields[1] == "?") continue;
        if (!genres.emplace(fields[0], fields[1]).second)
            throw DataError(at + ": duplicate genre row for song '" + fields[0] + "'");
    }
    return genres;
}

std::vector<std::vector<double>> read_embeddings(const Corpus& corpus, const std::filesystem::path& path) {
    std::map<std::string, std::vector<double>> rows;
    std::optional<std::size_t> dim;
    for (const auto& [number, line] : text::read_lines(path)) {
        const std::string at = path.string() + ":" + std::to_string(number);
        const auto fields = text::split(line, ',');
        if (fields.size() < 2 || fields[0].empty()) throw DataError(at + ": expected artist_id,<floats...>");
        std::vector<double> v;
        for (std::size_t c = 1; c < fields.size(); ++c) {
            const double x = text::parse_real(fields[c], at);
            if (std::isnan(x)) throw DataError(at + ": missing embedding value");
            v.push_back(x);
        }
        if (dim && *dim != v.size())
            throw DataError(at + ": embedding dimension " + std::to_string(v.size()) + " differs from " +
                            std::to_string(*dim));
        dim = v.size();
        if (!rows.emplace(fields[0], std::move(v)).second)
            throw DataError(at + ": duplicate embedding row for artist '" + fields[0] + "'");
    }
    if (!dim) throw DataError(path.string() + ": no embedding rows");
    const auto fallback = rows.find("*");
    std::vector<std::vector<double>> out(corpus.num_artists());
    for (ArtistId a = 0; a < corpus.num_artists(); ++a) {
        auto it = rows.find(corpus.artist_name(a));
        if (it == rows.end()) it = fallback;
        if (it == rows.end())
            throw DataError(path.string() + ": no embedding for artist '" + corpus.artist_name(a) +
                            "' and no fallback row '*'");
        out[a] = it->second;
    }
    return out;
}

// Standardise `col` in place from training-song statistics. Constant
// columns stay raw.
void standardise(RawColumn& col, const TrainingData& training) {
    double sum = 0.0, lo = INFINITY, hi = -INFINITY;
    for (auto m : training.songs) {
        sum += col.values[m];
        lo = std::min(lo, col.values[m]);
        hi = std::max(hi, col.values[m]);
    }
    if (lo == hi) return;
    const double n = static_cast<double>(training.songs.size());
    const double mean = sum / n;
    double ss = 0.0;
    for (auto m : training.songs) ss += (col.values[m] - mean) * (col.values[m] - mean);
    const double sd = std::sqrt(ss / n);
    col.spec.standardised = true;
    col.spec.shift = mean;
    col.spec.scale = sd;
}

}  // namespace

FeatureMatrix build_features(const Corpus& corpus, const TrainingData& training, const FeatureSources& sources) {
    if (training.playlists.empty() || training.songs.empty())
        throw DataError("cannot build features from an empty training set");
    const std::size_t M = corpus.num_songs();
    std::vector<RawColumn> cols;

    for (std::size_t c = 0; c < corpus.metadata_columns().size(); ++c) {
        RawColumn col{{corpus.metadata_columns()[c], ColumnOrigin::Metadata}, std::vector<double>(M)};
        double sum = 0.0;
        std::size_t seen = 0;
        for (auto m : training.songs) {
            const double v = corpus.song(m).metadata[c];
            if (!std::isnan(v)) {
                sum += v;
                ++seen;
            }
        }
        if (seen == 0)
            throw DataError("metadata column '" + col.spec.name + "' is missing for every training song");
        const double mean = sum / static_cast<double>(seen);
        for (SongId m = 0; m < M; ++m) {
            const double v = corpus.song(m).metadata[c];
            col.values[m] = std::isnan(v) ? mean : v;
        }
        cols.push_back(std::move(col));
    }

    if (sources.genre_table) {
        const auto genres = read_genres(corpus, *sources.genre_table);
        std::map<std::string, std::size_t> label_counts;
        std::size_t labelled = 0;
        for (auto m : training.songs) {
            const auto it = genres.find(corpus.song(m).id);
            if (it == genres.end()) continue;
            ++label_counts[it->second];
            ++labelled;
        }
        if (labelled == 0) throw DataError("genre table labels none of the training songs");
        for (const auto& [label, count] : label_counts) {
            RawColumn col{{"genre=" + label, ColumnOrigin::GenreOneHot}, std::vector<double>(M)};
            const double imputed = static_cast<double>(count) / static_cast<double>(labelled);
            for (SongId m = 0; m < M; ++m) {
                const auto it = genres.find(corpus.song(m).id);
                if (it == genres.end() || !label_counts.count(it->second)) col.values[m] = imputed;
                else col.values[m] = it->second == label ? 1.0 : 0.0;
            }
            cols.push_back(std::move(col));
        }
    }

    if (sources.artist_embeddings) {
        const auto emb = read_embeddings(corpus, *sources.artist_embeddings);
        const std::size_t dim = emb.front().size();
        for (std::size_t d = 0; d < dim; ++d) {
            RawColumn col{{"artist_emb" + std::to_string(d), ColumnOrigin::ArtistEmbedding}, std::vector<double>(M)};
            for (SongId m = 0; m < M; ++m) col.values[m] = emb[corpus.song(m).artist][d];
            cols.push_back(std::move(col));
        }
    }

    const auto song_pop = song_playcounts(corpus, training);
    if (training.setting != Setting::ColdSongs)
        cols.push_back({{"song_popularity", ColumnOrigin::SongPopularity}, song_pop});
    const auto artist_pop = artist_playcounts(corpus, training);
    {
        RawColumn col{{"artist_popularity", ColumnOrigin::ArtistPopularity}, std::vector<double>(M)};
        for (SongId m = 0; m < M; ++m) col.values[m] = artist_pop[corpus.song(m).artist];
        cols.push_back(std::move(col));
    }

    for (auto& col : cols)
        if (col.spec.origin != ColumnOrigin::GenreOneHot) standardise(col, training);

    cols.push_back({{"bias", ColumnOrigin::Bias}, std::vector<double>(M, 1.0)});

    FeatureSchema schema;
    RowMatrix values(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto& spec = cols[c].spec;
        for (SongId m = 0; m < M; ++m)
            values(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c)) =
                spec.standardised ? (cols[c].values[m] - spec.shift) / spec.scale : cols[c].values[m];
        schema.columns.push_back(spec);
    }
    schema.validate();
    return FeatureMatrix(std::move(values), std::move(schema));
}

void write_features(const Corpus& corpus, const FeatureMatrix& x, std::ostream& out) {
    out << "song_id";
    for (const auto& c : x.schema().columns) out << ',' << c.name;
    out << '\n';
    for (SongId m = 0; m < x.num_songs(); ++m) {
        out << corpus.song(m).id;
        for (double v : x.row(m)) out << ',' << text::format_real(v);
        out << '\n';
    }
}

std::string schema_json(const FeatureSchema& schema) {
    nlohmann::ordered_json doc;
    doc["schema_hash"] = hex64(schema.hash());
    auto& cols = doc["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : schema.columns) {
        cols.push_back({{"name", c.name},
                        {"origin", std::string(to_string(c.origin))},
                        {"standardised", c.standardised},
                        {"shift", c.shift},
                        {"scale", c.scale}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace coldmtc
