#include "hinf/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace hinf {

namespace {

std::string hex16(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

class FileLock {
public:
    FileLock(const std::filesystem::path& path, bool exclusive)
    {
        fd_ = ::open(path.c_str(), exclusive ? (O_RDWR | O_CREAT) : O_RDONLY, 0644);
        if (fd_ >= 0 && ::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }
    ~FileLock()
    {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;
    bool held() const noexcept { return fd_ >= 0; }

private:
    int fd_ = -1;
};

}  // namespace

std::string cache_status_name(CacheStatus s)
{
    switch (s) {
    case CacheStatus::Disabled: return "disabled";
    case CacheStatus::Hit: return "hit";
    case CacheStatus::Miss: return "miss";
    case CacheStatus::Corrupt: return "corrupt";
    }
    return "?";
}

std::optional<BallCache> BallCache::from_env()
{
    const char* d = std::getenv("HINF_CACHE_DIR");
    if (!d || !*d)
        return std::nullopt;
    return BallCache(d);
}

std::filesystem::path BallCache::entry_path(const GroupPresentation& p, int radius) const
{
    return dir_ / ("ball-" + hex16(p.hash()) + "-R" + std::to_string(radius) + ".txt");
}

std::string serialize_ball(const CayleyBall& ball)
{
    const auto& p = ball.presentation();
    std::ostringstream os;
    os << "hinf-ball 1\nhash " << hex16(p.hash()) << "\nrank " << p.rank() << "\nradius " << ball.radius()
       << "\nsize " << ball.size() << '\n';
    for (std::size_t i = 0; i < ball.size(); ++i) {
        const Word& w = ball.element(i);
        os << "e " << ball.dist(i) << ' ' << w.size();
        for (int g : w)
            os << ' ' << g;
        for (auto a : ball.neighbors(i))
            os << ' ' << a;
        os << '\n';
    }
    std::string body = os.str();
    return body + "checksum " + hex16(fnv1a(body)) + "\n";
}

CayleyBall deserialize_ball(const std::string& text, const GroupPresentation& p)
{
    const auto cut = text.rfind("checksum ");
    require(cut != std::string::npos, ErrorCode::Parse, "ball file has no checksum");
    const std::string body = text.substr(0, cut);
    std::istringstream tail(text.substr(cut + 9));
    std::string sum;
    tail >> sum;
    require(sum == hex16(fnv1a(body)), ErrorCode::Parse, "ball file checksum mismatch");

    std::istringstream in(body);
    std::string tag, hash;
    int version = 0, rank = 0, radius = 0;
    std::size_t size = 0;
    in >> tag >> version;
    require(tag == "hinf-ball" && version == 1, ErrorCode::Parse, "not a version 1 ball file");
    in >> tag >> hash;
    require(tag == "hash" && hash == hex16(p.hash()), ErrorCode::Parse, "ball file belongs to another presentation");
    in >> tag >> rank;
    require(tag == "rank" && rank == p.rank(), ErrorCode::Parse, "ball file rank mismatch");
    in >> tag >> radius >> tag >> size;
    require(in.good() && radius >= 0 && size >= 1, ErrorCode::Parse, "bad ball file header");
    std::vector<Word> elements(size);
    std::vector<int> dist(size);
    std::vector<std::int32_t> adj(size * 2 * static_cast<std::size_t>(rank));
    for (std::size_t i = 0; i < size; ++i) {
        std::size_t len = 0;
        in >> tag >> dist[i] >> len;
        require(in.good() && tag == "e" && len <= static_cast<std::size_t>(radius), ErrorCode::Parse,
                "bad ball element record");
        elements[i].resize(len);
        for (auto& g : elements[i])
            in >> g;
        for (std::size_t k = 0; k < 2 * static_cast<std::size_t>(rank); ++k)
            in >> adj[i * 2 * static_cast<std::size_t>(rank) + k];
        require(!in.fail(), ErrorCode::Parse, "truncated ball element record");
    }
    return CayleyBall::from_parts(p, radius, std::move(elements), std::move(dist), std::move(adj));
}

std::optional<CayleyBall> BallCache::get(const GroupPresentation& p, int radius, CacheStatus* status) const
{
    auto set = [&](CacheStatus s) {
        if (status)
            *status = s;
    };
    const auto path = entry_path(p, radius);
    FileLock lock(path, false);
    if (!lock.held()) {
        set(CacheStatus::Miss);
        return std::nullopt;
    }
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        CayleyBall b = deserialize_ball(ss.str(), p);
        require(b.radius() == radius, ErrorCode::Parse, "radius mismatch");
        set(CacheStatus::Hit);
        return b;
    } catch (const Error&) {
        set(CacheStatus::Corrupt);
        return std::nullopt;
    }
}

void BallCache::put(const CayleyBall& ball) const
{
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec)
        fail(ErrorCode::Io, "cannot create cache directory " + dir_.string());
    const auto path = entry_path(ball.presentation(), ball.radius());
    auto lock_path = path;
    lock_path += ".lock";
    FileLock lock(lock_path, true);
    if (!lock.held())
        fail(ErrorCode::Io, "cannot lock " + lock_path.string());
    auto tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << serialize_ball(ball);
        if (!out.good())
            fail(ErrorCode::Io, "cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        fail(ErrorCode::Io, "cannot move cache entry into place: " + ec.message());
}

BallLookup cached_ball(const GroupPresentation& p, int radius, std::size_t vertex_cap, const std::optional<BallCache>& cache)
{
    BallLookup out;
    if (cache) {
        auto hit = cache->get(p, radius, &out.status);
        if (hit) {
            if (hit->size() > vertex_cap)
                fail(ErrorCode::ResourceCap, "ball exceeds the vertex cap of " + std::to_string(vertex_cap));
            out.ball = std::make_shared<const CayleyBall>(std::move(*hit));
            return out;
        }
        if (out.status == CacheStatus::Corrupt)
            out.warning = "cache entry " + cache->entry_path(p, radius).string() + " failed its checksum; recomputing";
    }
    out.ball = std::make_shared<const CayleyBall>(CayleyBall::enumerate(p, radius, vertex_cap));
    if (cache) {
        try {
            cache->put(*out.ball);
        } catch (const Error& e) {
            out.warning += (out.warning.empty() ? "" : "; ") + std::string(e.what());
        }
    }
    return out;
}

}  // namespace hinf
