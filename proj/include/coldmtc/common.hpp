#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace coldmtc {

// Dense zero-based indices into the corpus tables.
using SongId = std::size_t;
using UserId = std::size_t;
using PlaylistId = std::size_t;
using ArtistId = std::size_t;

/// Bad input data: malformed files, broken referential integrity,
/// unsatisfiable split constraints. The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration or API misuse (invalid ids, hyperparameters, shapes).
/// The CLI maps it to exit code 1.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite values from an objective, e.g. an exponential loss that
/// overflows despite the log-domain guard.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Setting { ColdPlaylists, ColdUsers, ColdSongs };

std::string_view to_string(Setting s);
Setting parse_setting(std::string_view name);

/// 64-bit FNV-1a. Used for schema hashes and input-file fingerprints.
class Fnv1a {
  public:
    void update(const void* data, std::size_t len);
    void update(std::string_view s) { update(s.data(), s.size()); }
    void update_u64(std::uint64_t v);
    void update_f64(double v);
    std::uint64_t digest() const { return state_; }

  private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string hex64(std::uint64_t v);

/// Worker cap for the per-playlist loops. Results never depend on it:
/// every parallel loop writes to per-index slots that are reduced in
/// ascending index order afterwards.
void set_num_threads(unsigned n);
unsigned num_threads();

/// Calls fn(i) for i in [0, n), possibly from several threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace coldmtc
