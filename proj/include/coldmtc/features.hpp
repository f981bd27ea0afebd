#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coldmtc/corpus.hpp"
#include "coldmtc/splits.hpp"

namespace coldmtc {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ColumnOrigin { Metadata, GenreOneHot, ArtistEmbedding, SongPopularity, ArtistPopularity, Bias };

std::string_view to_string(ColumnOrigin origin);

/// One feature column. Stored value = (raw - shift) / scale.
struct ColumnSpec {
    std::string name;
    ColumnOrigin origin;
    bool standardised = false;
    double shift = 0.0;
    double scale = 1.0;
};

struct FeatureSchema {
    std::vector<ColumnSpec> columns;

    std::size_t size() const { return columns.size(); }
    /// Hash over names, origins and normalisation parameters (bitwise).
    std::uint64_t hash() const;
    /// Checks: exactly one bias column, placed last.
    void validate() const;
    bool has_origin(ColumnOrigin origin) const;
};

/// Dense M x D matrix of song feature rows x_m plus its schema.
class FeatureMatrix {
  public:
    FeatureMatrix(RowMatrix values, FeatureSchema schema);

    std::size_t num_songs() const { return static_cast<std::size_t>(values_.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(values_.cols()); }
    const RowMatrix& values() const { return values_; }
    const FeatureSchema& schema() const { return schema_; }
    std::uint64_t schema_hash() const { return hash_; }

    /// Row x_m. Throws ConfigError when m is out of range.
    std::span<const double> row(SongId m) const;
    /// Matrix of the given rows, same schema.
    FeatureMatrix subset(std::span<const SongId> rows) const;

  private:
    RowMatrix values_;
    FeatureSchema schema_;
    std::uint64_t hash_;
};

inline std::span<const double> feature_row(const FeatureMatrix& x, SongId m) { return x.row(m); }

struct FeatureSources {
    /// `song_id,genre_label` rows.
    std::optional<std::filesystem::path> genre_table;
    /// `artist_id,<floats...>` rows; artist id `*` is the fallback row.
    std::optional<std::filesystem::path> artist_embeddings;
};

/// Assembles X for every corpus song. Columns, in order: metadata, genre
/// one-hot (labels seen on training songs, sorted), artist embedding,
/// song popularity (not in the cold-songs setting), artist popularity,
/// bias. Continuous columns are standardised with training-song statistics;
/// missing metadata is imputed with the training mean.
FeatureMatrix build_features(const Corpus& corpus, const TrainingData& training,
                             const FeatureSources& sources = {});

/// CSV with a `song_id,<column names>` header, one row per song.
void write_features(const Corpus& corpus, const FeatureMatrix& x, std::ostream& out);
/// JSON document describing every column and the schema hash.
std::string schema_json(const FeatureSchema& schema);

}  // namespace coldmtc
