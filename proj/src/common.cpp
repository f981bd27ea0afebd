#include "coldmtc/common.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace coldmtc {

std::string_view to_string(Setting s) {
    switch (s) {
    case Setting::ColdPlaylists: return "cold_playlists";
    case Setting::ColdUsers: return "cold_users";
    case Setting::ColdSongs: return "cold_songs";
    }
    return "unknown";
}

Setting parse_setting(std::string_view name) {
    if (name == "cold_playlists") return Setting::ColdPlaylists;
    if (name == "cold_users") return Setting::ColdUsers;
    if (name == "cold_songs") return Setting::ColdSongs;
    throw ConfigError("unknown setting '" + std::string(name) +
                      "' (expected cold_playlists, cold_users or cold_songs)");
}

void Fnv1a::update(const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < len; ++k) {
        state_ ^= bytes[k];
        state_ *= 0x100000001b3ULL;
    }
}

void Fnv1a::update_u64(std::uint64_t v) {
    unsigned char buf[8];
    for (int b = 0; b < 8; ++b) buf[b] = static_cast<unsigned char>(v >> (8 * b));
    update(buf, sizeof buf);
}

void Fnv1a::update_f64(double v) { update_u64(std::bit_cast<std::uint64_t>(v)); }

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_num_threads(unsigned n) { g_threads = std::max(1u, n); }
unsigned num_threads() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(g_threads, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace coldmtc
