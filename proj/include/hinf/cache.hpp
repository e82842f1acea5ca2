#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "hinf/group_metric.hpp"

namespace hinf {

enum class CacheStatus { Disabled, Hit, Miss, Corrupt };

std::string cache_status_name(CacheStatus s);

/// On-disk store of enumerated balls keyed by (presentation hash, R). Entries are
/// versioned text files ending in an FNV-1a checksum line; readers take a shared
/// flock on the entry and writers an exclusive one on a sibling lock file, then
/// rename a temporary file into place.
class BallCache {
public:
    explicit BallCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    /// Directory from HINF_CACHE_DIR, if set and nonempty.
    static std::optional<BallCache> from_env();

    const std::filesystem::path& dir() const noexcept { return dir_; }
    std::filesystem::path entry_path(const GroupPresentation& p, int radius) const;

    /// nullopt on a miss. A damaged entry is a miss; `status` tells the two apart.
    std::optional<CayleyBall> get(const GroupPresentation& p, int radius, CacheStatus* status = nullptr) const;
    void put(const CayleyBall& ball) const;

private:
    std::filesystem::path dir_;
};

std::string serialize_ball(const CayleyBall& ball);
/// Throws Parse when the text is malformed or its checksum does not match.
CayleyBall deserialize_ball(const std::string& text, const GroupPresentation& p);

struct BallLookup {
    std::shared_ptr<const CayleyBall> ball;
    CacheStatus status = CacheStatus::Disabled;
    std::string warning;
};

/// Reads the ball from the cache when possible, otherwise enumerates (and stores it).
BallLookup cached_ball(const GroupPresentation& p, int radius, std::size_t vertex_cap, const std::optional<BallCache>& cache);

}  // namespace hinf
