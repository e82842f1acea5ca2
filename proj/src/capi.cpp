#include "hinf/hinf.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "hinf/reports.hpp"
#include "hinf/rips.hpp"

struct hinf_presentation {
    hinf::GroupPresentation p;
};
struct hinf_ball {
    std::shared_ptr<const hinf::CayleyBall> ball;
};
struct hinf_rips {
    hinf::RipsWindow window;
};

namespace {

thread_local std::string last_error;

template <class F>
hinf_status guarded(F&& body)
{
    try {
        body();
        last_error.clear();
        return HINF_OK;
    } catch (const hinf::Error& e) {
        last_error = e.what();
        return static_cast<hinf_status>(e.code());
    } catch (const nlohmann::json::exception& e) {
        last_error = std::string("json: ") + e.what();
        return HINF_PARSE;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return HINF_RESOURCE_CAP;
    } catch (const std::exception& e) {
        last_error = e.what();
        return HINF_INTERNAL;
    }
}

void need(const void* p, const char* what)
{
    if (!p)
        hinf::fail(hinf::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* hinf_version(void) { return hinf::kToolVersion; }

const char* hinf_last_error(void) { return last_error.c_str(); }

void hinf_string_free(char* s) { std::free(s); }

hinf_status hinf_presentation_parse(const char* text, hinf_presentation** out)
{
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = new hinf_presentation{hinf::parse_presentation(text)};
    });
}

hinf_status hinf_presentation_builtin(const char* name, hinf_presentation** out)
{
    return guarded([&] {
        need(name, "name");
        need(out, "out");
        *out = new hinf_presentation{hinf::builtin_presentation(name)};
    });
}

void hinf_presentation_free(hinf_presentation* p) { delete p; }

hinf_status hinf_presentation_canonical_text(const hinf_presentation* p, char** out)
{
    return guarded([&] {
        need(p, "presentation");
        need(out, "out");
        *out = dup(p->p.canonical_text());
    });
}

hinf_status hinf_presentation_hash(const hinf_presentation* p, uint64_t* out)
{
    return guarded([&] {
        need(p, "presentation");
        need(out, "out");
        *out = p->p.hash();
    });
}

hinf_status hinf_canonicalize(const hinf_presentation* p, const char* word, char** out)
{
    return guarded([&] {
        need(p, "presentation");
        need(word, "word");
        need(out, "out");
        const hinf::WordProblem wp(p->p);
        *out = dup(hinf::format_word(wp.canonicalize(hinf::parse_word(word, p->p)), p->p));
    });
}

hinf_status hinf_ball_enumerate(const hinf_presentation* p, int radius, size_t vertex_cap, hinf_ball** out)
{
    return guarded([&] {
        need(p, "presentation");
        need(out, "out");
        auto b = hinf::CayleyBall::enumerate(p->p, radius, vertex_cap ? vertex_cap : hinf::kDefaultVertexCap);
        *out = new hinf_ball{std::make_shared<const hinf::CayleyBall>(std::move(b))};
    });
}

void hinf_ball_free(hinf_ball* b) { delete b; }

hinf_status hinf_ball_size(const hinf_ball* b, size_t* out)
{
    return guarded([&] {
        need(b, "ball");
        need(out, "out");
        *out = b->ball->size();
    });
}

hinf_status hinf_ball_sphere_size(const hinf_ball* b, int n, size_t* out)
{
    return guarded([&] {
        need(b, "ball");
        need(out, "out");
        *out = b->ball->sphere_size(n);
    });
}

hinf_status hinf_ball_distance(const hinf_ball* b, const char* word, int* out)
{
    return guarded([&] {
        need(b, "ball");
        need(word, "word");
        need(out, "out");
        auto id = b->ball->find(hinf::parse_word(word, b->ball->presentation()));
        if (!id.has_value())
            hinf::fail(hinf::ErrorCode::OutOfWindow,
                       std::string("'") + word + "' lies outside the ball of radius " +
                       std::to_string(b->ball->radius()));
        *out = b->ball->dist(*id);
    });
}

hinf_status hinf_rips_build(const hinf_ball* b, int t, int max_dim, int closed, hinf_rips** out)
{
    return guarded([&] {
        need(b, "ball");
        need(out, "out");
        hinf::RipsOptions o;
        o.t = t;
        o.max_dim = max_dim;
        o.closed = closed != 0;
        *out = new hinf_rips{hinf::RipsWindow::build(b->ball, o)};
    });
}

void hinf_rips_free(hinf_rips* r) { delete r; }

hinf_status hinf_rips_simplex_count(const hinf_rips* r, int dim, size_t* out)
{
    return guarded([&] {
        need(r, "rips");
        need(out, "out");
        *out = r->window.complex().count(dim);
    });
}

hinf_status hinf_rips_betti(const hinf_rips* r, int dim, uint32_t p, size_t* out)
{
    return guarded([&] {
        need(r, "rips");
        need(out, "out");
        hinf::require(dim >= 0 && dim < r->window.options().max_dim, hinf::ErrorCode::InvalidArgument,
                      "betti dimension must lie below the Rips max_dim");
        *out = hinf::betti(r->window.complex(), dim, hinf::PrimeField(p));
    });
}

hinf_status hinf_rips_induced_map_rank(const hinf_rips* r, int i, int m, int n, int margin, uint32_t p, size_t* out)
{
    return guarded([&] {
        need(r, "rips");
        need(out, "out");
        *out = hinf::induced_map_rank(r->window, i, m, n, hinf::PrimeField(p), margin);
    });
}

hinf_status hinf_run(const char* command, const char* config_json, char** report_json)
{
    return guarded([&] {
        need(command, "command");
        need(report_json, "report_json");
        hinf::Json cfg = config_json && *config_json ? hinf::Json::parse(config_json) : hinf::Json::object();
        *report_json = dup(hinf::run(command, cfg).dump(2));
    });
}

const char* hinf_commands(void)
{
    static const std::string names = [] {
        std::string s;
        for (const auto& c : hinf::command_names())
            s += (s.empty() ? "" : " ") + c;
        return s;
    }();
    return names.c_str();
}

hinf_status hinf_default_config(const char* command, char** config_json)
{
    return guarded([&] {
        need(command, "command");
        need(config_json, "config_json");
        *config_json = dup(hinf::normalize_config(command, hinf::Json::object()).dump());
    });
}

hinf_status hinf_tower_csv(const char* report_json, char** csv)
{
    return guarded([&] {
        need(report_json, "report_json");
        need(csv, "csv");
        const auto report = hinf::Json::parse(report_json);
        hinf::require(report.value("command", "") == "tower", hinf::ErrorCode::InvalidArgument,
                      "CSV export needs a tower report");
        *csv = dup(hinf::tower_csv(report.at("payload")));
    });
}

}  // extern "C"
