#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "doctest.h"
#include "hinf/cache.hpp"
#include "hinf/interchange.hpp"
#include "hinf/reports.hpp"

using namespace hinf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("hinf-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter()
    {
        static int c = 0;
        return c;
    }
};

ErrorCode code_of(const std::function<void()>& body)
{
    try {
        body();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Internal;
}

void write(const fs::path& p, const std::string& text)
{
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("config validation reports the offending field")
{
    auto msg = [](const std::string& cmd, const Json& cfg) {
        try {
            normalize_config(cmd, cfg);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidArgument);
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(msg("ends", Json{{"bogus", 1}}).find("'bogus'") != std::string::npos);
    CHECK(msg("ends", Json{{"t", "two"}}).find("'t'") != std::string::npos);
    CHECK(msg("ends", Json{{"p", 4}}).find("'p'") != std::string::npos);
    CHECK(msg("ends", Json{{"R", 4}, {"margin", 4}}).find("'margin'") != std::string::npos);
    CHECK(msg("fill-at-infinity", Json{{"schedule", {3, 3}}}).find("'schedule'") != std::string::npos);
    CHECK(msg("cech-tower", Json{{"ladder", "0.3,x"}}).find("'ladder'") != std::string::npos);
    CHECK(msg("nope", Json::object()).find("unknown command") != std::string::npos);
    CHECK(msg("ends", Json::array()).find("object") != std::string::npos);
}

TEST_CASE("normalized configs fill defaults and are fixed points")
{
    for (const auto& cmd : command_names()) {
        const Json a = normalize_config(cmd, Json::object());
        CHECK(normalize_config(cmd, a) == a);
    }
    const Json e = normalize_config("ends", Json{{"t", 4}, {"R", 10}});
    CHECK(e["margin"] == 4);
    CHECK(e["p"] == 2);
    CHECK(normalize_config("cech-tower", Json{{"ladder", "0.6,0.45,0.3"}})["ladder"] == Json{"0.6", "0.45", "0.3"});
}

TEST_CASE("command examples")
{
    const Json ends = run("ends", Json{{"group", "builtin:Z"}, {"t", 2}, {"R", 12}, {"use_cache", false}});
    CHECK(ends["tool"] == kToolName);
    CHECK(ends["payload"]["stable"] == 2);

    const Json tower = run("tower", Json{{"group", "builtin:F2"}, {"t", 2}, {"R", 6}, {"i", 1}, {"use_cache", false}});
    for (const auto& row : tower["payload"]["rank_matrix"]["values"])
        for (const auto& v : row)
            CHECK((v.is_null() || v == 0));
    const std::string csv = tower_csv(tower["payload"]);
    CHECK(csv.rfind("m\\n,1,2,3,4\n1,,,,\n2,0,,,\n", 0) == 0);

    const Json cech = run("cech-tower", Json{{"sample", "builtin:circle64"}, {"ladder", "0.6,0.45,0.3"}, {"i", 1}});
    CHECK(cech["payload"]["stable_rank"] == 1);
    for (const auto& e : cech["payload"]["entries"])
        CHECK(e["rank"] == 1);
}

TEST_CASE("payloads are reproducible from the config echo")
{
    for (const auto& cmd : command_names()) {
        const Json a = run(cmd, Json::object());
        const Json b = run(cmd, a["config"]);
        CHECK(a["payload"].dump() == b["payload"].dump());
        CHECK(a["config"] == b["config"]);
    }
}

TEST_CASE("ball cache round trip, miss and corruption")
{
    TempDir dir;
    BallCache cache(dir.path);
    const auto F2 = builtin_presentation("F2");
    CacheStatus st = CacheStatus::Disabled;
    CHECK_FALSE(cache.get(F2, 4, &st).has_value());
    CHECK(st == CacheStatus::Miss);

    const auto ball = CayleyBall::enumerate(F2, 4);
    cache.put(ball);
    auto hit = cache.get(F2, 4, &st);
    REQUIRE(hit.has_value());
    CHECK(st == CacheStatus::Hit);
    CHECK(hit->size() == 161);
    CHECK(*hit == ball);

    // Tamper with one distance.
    const auto path = cache.entry_path(F2, 4);
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    in.close();
    const auto pos = text.find("\ne 1 ");
    REQUIRE(pos != std::string::npos);
    text[pos + 3] = '2';
    write(path, text);
    CHECK_FALSE(cache.get(F2, 4, &st).has_value());
    CHECK(st == CacheStatus::Corrupt);

    auto lookup = cached_ball(F2, 4, kDefaultVertexCap, cache);
    CHECK(lookup.status == CacheStatus::Corrupt);
    CHECK_FALSE(lookup.warning.empty());
    CHECK(*lookup.ball == ball);
    CHECK(cached_ball(F2, 4, kDefaultVertexCap, cache).status == CacheStatus::Hit);

    // Other presentations never read this entry.
    CHECK_FALSE(cache.get(builtin_presentation("Z2"), 4, &st).has_value());
}

TEST_CASE("run reports cache status through the environment")
{
    TempDir dir;
    ::setenv("HINF_CACHE_DIR", dir.path.c_str(), 1);
    const Json cfg{{"group", "builtin:Z2"}, {"R", 5}};
    const Json first = run("ball", cfg), second = run("ball", cfg);
    ::unsetenv("HINF_CACHE_DIR");
    CHECK(first["diagnostics"]["cache"] == "miss");
    CHECK(second["diagnostics"]["cache"] == "hit");
    CHECK(first["payload"].dump() == second["payload"].dump());
    CHECK(run("ball", Json{{"group", "builtin:Z2"}, {"R", 5}, {"use_cache", false}})["diagnostics"]["cache"] ==
          "disabled");
}

TEST_CASE("file inputs for groups, samples, chains and subdivisions")
{
    TempDir dir;
    write(dir.path / "z2.txt", "# the plane\ngens x y\nrelators [x,y]\n");
    const Json ball = run("ball", Json{{"group", (dir.path / "z2.txt").string()}, {"R", 2}, {"use_cache", false}});
    CHECK(ball["payload"]["size"] == 13);
    CHECK(run("ball", Json{{"group", "text:gens a"}, {"R", 3}, {"use_cache", false}})["payload"]["size"] == 7);

    write(dir.path / "s.txt", "sample 1\nkind linear\nunit 1\npoints 3\nrow 0 1 2\nrow 1 0 1\nrow 2 1 0\n");
    const Json nerve = run("nerve", Json{{"sample", (dir.path / "s.txt").string()}, {"eps", 1.5}});
    CHECK(nerve["payload"]["components"] == 1);

    // The fill command reads a chain named by group words.
    write(dir.path / "c.txt", "chain 1\ndim 1\nfield 2\nterm 1 1 a\nterm 1 a ab\nterm 1 ab b\nterm 1 b 1\n");
    const Json fill = run("fill-at-infinity",
                          Json{{"chain", (dir.path / "c.txt").string()}, {"R", 12}, {"use_cache", false}});
    CHECK(fill["payload"]["obstructed"] == false);
    CHECK(fill["payload"]["chain"]["terms"] == 4);
    for (const auto& s : fill["payload"]["steps"])
        CHECK(s["boundary_check"] == true);

    write(dir.path / "d.txt",
          "subdivision 1\ndelta 0.2\neps 2\npoint 1 0 1 0\npoint -0.5 0.866 -0.5 0.866\npoint -0.5 -0.866 -0.5 -0.866\n"
          "loop 0 1 2\n");
    const Json sub = run("subdivision-check", Json{{"input", (dir.path / "d.txt").string()}});
    CHECK(sub["payload"]["filling"]["stage"] == "ok");

    CHECK(code_of([&] { run("nerve", Json{{"sample", (dir.path / "missing.txt").string()}}); }) == ErrorCode::Io);
    write(dir.path / "bad.txt", "sample 1\npoints 2\nrow 0 1\n");
    CHECK(code_of([&] { run("nerve", Json{{"sample", (dir.path / "bad.txt").string()}}); }) == ErrorCode::Parse);
}
