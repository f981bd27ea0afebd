#pragma once

#include <cstdint>
#include <vector>

#include "coldmtc/corpus.hpp"
#include "coldmtc/features.hpp"
#include "coldmtc/losses.hpp"

namespace coldmtc {

/// Planted-linear-model corpus generator for desk-scale experiments.
struct SyntheticSpec {
    std::size_t users = 50;
    std::size_t playlists = 200;
    std::size_t songs = 500;
    std::size_t dim = 20;           // feature dimension D, bias included
    double noise = 0.05;            // per-positive label-flip probability
    std::uint64_t seed = 1;
    std::size_t min_length = 10;    // playlist length L is uniform in [min, max]
    std::size_t max_length = 30;
    std::size_t artists = 0;        // 0 means songs / 10
    std::size_t user_clusters = 5;  // users share cluster-level taste
    std::size_t attribute_dim = 6;
    double user_scale = 1.0;
    double playlist_scale = 0.5;
    double shared_scale = 0.5;

    void validate() const;
};

struct SyntheticData {
    Corpus corpus;
    /// Planted features: the D-1 metadata columns plus the bias column.
    FeatureMatrix features;
    ModelParams planted;
    /// Planted top-L songs of each playlist (before label noise).
    std::vector<std::vector<SongId>> planted_top;
    /// Songs generated but dropped because no playlist contained them.
    std::size_t dropped_songs = 0;
};

/// Draws planted alpha, beta, mu and song features from seeded Gaussians and
/// gives each playlist its top-L songs by planted score, then flips each
/// positive to a random non-member with probability `noise`. Song features
/// cluster by artist; user attributes are a noisy linear image of alpha_u.
/// Songs no playlist picked are dropped so that every song has a playlist.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace coldmtc
