#include "hinf/reports.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "hinf/cache.hpp"
#include "hinf/filling.hpp"
#include "hinf/interchange.hpp"
#include "hinf/nerve.hpp"
#include "hinf/rips.hpp"
#include "hinf/subdivision.hpp"

namespace hinf {

namespace {

// ---------------------------------------------------------------------------
// Config fields

class Fields {
public:
    explicit Fields(const Json& in) : in_(in)
    {
        require(in_.is_object() || in_.is_null(), ErrorCode::InvalidArgument, "config must be a JSON object");
    }

    long integer(const std::string& key, std::optional<long> dflt, long lo, long hi)
    {
        const Json* v = take(key);
        long x = 0;
        if (!v) {
            if (!dflt.has_value())
                fail(ErrorCode::InvalidArgument, "config field '" + key + "' is required");
            x = *dflt;
        } else {
            if (!v->is_number_integer())
                fail(ErrorCode::InvalidArgument, "config field '" + key + "' must be an integer");
            x = v->get<long>();
        }
        if (!(x >= lo && x <= hi))
            fail(ErrorCode::InvalidArgument,
                 "config field '" + key + "' must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        out_[key] = x;
        return x;
    }

    double real(const std::string& key, double dflt, bool positive = true)
    {
        const Json* v = take(key);
        double x = dflt;
        if (v) {
            if (!v->is_number())
                fail(ErrorCode::InvalidArgument, "config field '" + key + "' must be a number");
            x = v->get<double>();
        }
        if (!(std::isfinite(x) && (!positive || x > 0)))
            fail(ErrorCode::InvalidArgument,
                 "config field '" + key + "' must be " + (positive ? "positive" : "finite"));
        out_[key] = x;
        return x;
    }

    bool boolean(const std::string& key, bool dflt)
    {
        const Json* v = take(key);
        bool x = dflt;
        if (v) {
            if (!v->is_boolean())
                fail(ErrorCode::InvalidArgument, "config field '" + key + "' must be true or false");
            x = v->get<bool>();
        }
        out_[key] = x;
        return x;
    }

    std::string text(const std::string& key, const std::string& dflt)
    {
        const Json* v = take(key);
        std::string x = dflt;
        if (v) {
            if (!v->is_string())
                fail(ErrorCode::InvalidArgument, "config field '" + key + "' must be a string");
            x = v->get<std::string>();
        }
        out_[key] = x;
        return x;
    }

    /// A scale: number or string such as "e^-2". Echoed in canonical string form.
    Scale scale(const std::string& key, const std::string& dflt)
    {
        const Json* v = take(key);
        Scale s;
        try {
            if (!v)
                s = Scale::parse(dflt);
            else if (v->is_number())
                s = Scale::of(v->get<double>());
            else if (v->is_string())
                s = Scale::parse(v->get<std::string>());
            else
                fail(ErrorCode::InvalidArgument, "not a scale");
        } catch (const Error& e) {
            fail(ErrorCode::InvalidArgument, "config field '" + key + "': " + e.what());
        }
        if (!(s.value > 0))
            fail(ErrorCode::InvalidArgument, "config field '" + key + "' must be positive");
        out_[key] = s.to_string();
        return s;
    }

    std::vector<Scale> scales(const std::string& key, const std::vector<std::string>& dflt)
    {
        const Json* v = take(key);
        std::vector<Scale> out;
        Json echo = Json::array();
        auto add = [&](const Json& item) {
            Scale s;
            try {
                s = item.is_number() ? Scale::of(item.get<double>()) : Scale::parse(item.get<std::string>());
            } catch (const std::exception& e) {
                fail(ErrorCode::InvalidArgument, "config field '" + key + "': " + e.what());
            }
            out.push_back(s);
            echo.push_back(s.to_string());
        };
        if (!v) {
            for (const auto& d : dflt)
                add(Json(d));
        } else if (v->is_string()) {
            std::stringstream ss(v->get<std::string>());
            for (std::string part; std::getline(ss, part, ',');)
                add(Json(part));
        } else {
            if (!v->is_array())
                fail(ErrorCode::InvalidArgument, "config field '" + key + "' must be a list of scales");
            for (const auto& item : *v) {
                if (!(item.is_number() || item.is_string()))
                    fail(ErrorCode::InvalidArgument, "config field '" + key + "' must be a list of scales");
                add(item);
            }
        }
        out_[key] = echo;
        return out;
    }

    std::vector<int> ints(const std::string& key, const std::vector<int>& dflt, bool increasing)
    {
        const Json* v = take(key);
        std::vector<int> out = dflt;
        if (v) {
            out.clear();
            if (v->is_string()) {
                std::stringstream ss(v->get<std::string>());
                for (std::string part; std::getline(ss, part, ',');) {
                    try {
                        out.push_back(std::stoi(part));
                    } catch (const std::exception&) {
                        fail(ErrorCode::InvalidArgument, "config field '" + key + "' must be a list of integers");
                    }
                }
            } else {
                if (!v->is_array())
                    fail(ErrorCode::InvalidArgument, "config field '" + key + "' must be a list of integers");
                for (const auto& item : *v) {
                    if (!item.is_number_integer())
                        fail(ErrorCode::InvalidArgument, "config field '" + key + "' must be a list of integers");
                    out.push_back(item.get<int>());
                }
            }
        }
        if (out.empty())
            fail(ErrorCode::InvalidArgument, "config field '" + key + "' must not be empty");
        if (increasing)
            for (std::size_t j = 1; j < out.size(); ++j)
                if (out[j] <= out[j - 1])
                    fail(ErrorCode::InvalidArgument, "config field '" + key + "' must be strictly increasing");
        out_[key] = out;
        return out;
    }

    Json done()
    {
        if (in_.is_object())
            for (const auto& [k, v] : in_.items())
                if (seen_.count(k) == 0)
                    fail(ErrorCode::InvalidArgument, "unknown config field '" + k + "'");
        return out_;
    }

private:
    const Json* take(const std::string& key)
    {
        seen_.insert(key);
        if (!in_.is_object())
            return nullptr;
        auto it = in_.find(key);
        return it == in_.end() || it->is_null() ? nullptr : &*it;
    }

    const Json& in_;
    Json out_ = Json::object();
    std::set<std::string> seen_;
};

struct Diagnostics {
    std::string cache = "disabled";
    std::vector<std::string> warnings;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in.good())
        fail(ErrorCode::Io, "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string hex16(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// Shared loaders

GroupPresentation resolve_group(const std::string& source)
{
    if (source.rfind("builtin:", 0) == 0)
        return builtin_presentation(source.substr(8));
    if (source.rfind("text:", 0) == 0)
        return parse_presentation(source.substr(5));
    return parse_presentation(read_file(source));
}

void ball_fields(Fields& F, const std::string& group, long R)
{
    F.text("group", group);
    F.integer("R", R, 0, 1000);
    F.integer("vertex_cap", static_cast<long>(kDefaultVertexCap), 1, 50'000'000);
    F.boolean("use_cache", true);
}

void window_fields(Fields& F, const std::string& group, long t, long R, bool with_margin)
{
    ball_fields(F, group, R);
    const long tt = F.integer("t", t, 1, 64);
    F.integer("max_dim", 3, 1, kMaxSimplexSize - 1);
    F.boolean("closed", false);
    F.integer("simplex_cap", static_cast<long>(kDefaultSimplexCap), 1, 200'000'000);
    F.integer("p", 2, 2, 2147483647);
    if (with_margin)
        F.integer("margin", tt, 0, 1000);
}

Json group_json(const GroupPresentation& p)
{
    return Json{{"presentation", p.canonical_text()}, {"strategy", strategy_name(p.strategy)}, {"hash", hex16(p.hash())}};
}

std::shared_ptr<const CayleyBall> load_ball(const Json& cfg, const GroupPresentation& p, Diagnostics& diag)
{
    std::optional<BallCache> cache;
    if (cfg.value("use_cache", true))
        cache = BallCache::from_env();
    auto lookup = cached_ball(p, cfg["R"].get<int>(), cfg["vertex_cap"].get<std::size_t>(), cache);
    diag.cache = cache_status_name(lookup.status);
    if (!lookup.warning.empty())
        diag.warnings.push_back(lookup.warning);
    return lookup.ball;
}

RipsWindow load_window(const Json& cfg, const GroupPresentation& p, Diagnostics& diag)
{
    RipsOptions o;
    o.t = cfg["t"].get<int>();
    o.max_dim = cfg["max_dim"].get<int>();
    o.closed = cfg["closed"].get<bool>();
    o.simplex_cap = cfg["simplex_cap"].get<std::size_t>();
    return RipsWindow::build(load_ball(cfg, p, diag), o);
}

Json window_json(const RipsWindow& W)
{
    Json counts = Json::array();
    for (int d = 0; d <= W.complex().top_dim(); ++d)
        counts.push_back(W.complex().count(d));
    return Json{{"R", W.radius()},          {"t", W.t()}, {"closed", W.options().closed},
                {"max_dim", W.options().max_dim}, {"vertices", W.complex().num_vertices()},
                {"simplices", counts}};
}

MetricSample resolve_sample(const std::string& source)
{
    const std::string head = source.substr(0, source.find(' '));
    if (source.rfind("builtin:", 0) == 0 || head == "circle" || head == "cantor" || head == "point")
        return parse_sample(source);
    return read_sample(read_file(source));
}

GroupPresentation free_group(int k)
{
    GroupPresentation p;
    for (int g = 0; g < k; ++g)
        p.generators.push_back(std::string(1, static_cast<char>('a' + g)));
    return p;
}

Json chain_json(const SimplicialComplex& K, const Chain& c, const PrimeField& f, const VertexNamer& name)
{
    return Json{{"dim", c.dim}, {"terms", c.terms.size()}, {"text", write_chain(K, c, f, name)}};
}

// ---------------------------------------------------------------------------
// Commands

Json cmd_ball(const Json& cfg, Diagnostics& diag)
{
    const auto p = resolve_group(cfg["group"]);
    auto ball = load_ball(cfg, p, diag);
    Json spheres = Json::array();
    for (int n = 0; n <= ball->radius(); ++n)
        spheres.push_back(ball->sphere_size(n));
    Json out{{"group", group_json(p)}, {"R", ball->radius()}, {"size", ball->size()}, {"sphere_sizes", spheres}};
    if (cfg["elements"].get<bool>()) {
        Json els = Json::array();
        for (std::size_t i = 0; i < ball->size(); ++i)
            els.push_back(Json{{"word", format_word(ball->element(i), p)}, {"dist", ball->dist(i)}});
        out["elements"] = els;
    }
    return out;
}

Json cmd_rips(const Json& cfg, Diagnostics& diag)
{
    const auto p = resolve_group(cfg["group"]);
    const RipsWindow W = load_window(cfg, p, diag);
    long euler = 0;
    for (int d = 0; d <= W.complex().top_dim(); ++d)
        euler += (d % 2 ? -1 : 1) * static_cast<long>(W.complex().count(d));
    return Json{{"group", group_json(p)}, {"window", window_json(W)}, {"euler_characteristic", euler}};
}

Json cmd_homology(const Json& cfg, Diagnostics& diag)
{
    const PrimeField f(cfg["p"].get<std::uint32_t>());
    Json out;
    SimplicialComplex K;
    int top = 0;
    if (!cfg["complex"].get<std::string>().empty()) {
        K = read_complex(read_file(cfg["complex"]));
        top = K.top_dim();
        out["source"] = "complex";
    } else {
        const auto p = resolve_group(cfg["group"]);
        const RipsWindow W = load_window(cfg, p, diag);
        const std::string region = cfg["region"];
        const int n = cfg["n"];
        out["source"] = "window";
        out["group"] = group_json(p);
        out["window"] = window_json(W);
        if (region == "window") {
            K = W.complex();
        } else {
            static const std::map<std::string, RadialKind> kinds{{"B", RadialKind::OpenBall},
                                                                 {"S", RadialKind::Sphere},
                                                                 {"Bbar", RadialKind::ClosedBall},
                                                                 {"Complement", RadialKind::Complement}};
            auto it = kinds.find(region);
            require(it != kinds.end(), ErrorCode::InvalidArgument,
                    "config field 'region' must be window, B, S, Bbar or Complement");
            K = radial_subcomplex(W, it->second, n, cfg["margin"]).complex;
        }
        out["region"] = Json{{"kind", region}, {"n", n}};
        // The top dimension is truncated, so its Betti number is not reported.
        top = W.options().max_dim - 1;
    }
    HomologyContext H(K, f);
    Json b = Json::array();
    for (int d = 0; d <= top; ++d)
        b.push_back(H.betti(d));
    Json counts = Json::array();
    for (int d = 0; d <= K.top_dim(); ++d)
        counts.push_back(K.count(d));
    out["simplices"] = counts;
    out["field"] = f.p();
    out["betti"] = b;
    out["components"] = component_count(K);
    return out;
}

Json cmd_ends(const Json& cfg, Diagnostics& diag)
{
    const PrimeField f(cfg["p"].get<std::uint32_t>());
    const auto p = resolve_group(cfg["group"]);
    const RipsWindow W = load_window(cfg, p, diag);
    const EndsEstimate E = ends_estimate(W, f, cfg["margin"]);
    Json rows = Json::array();
    for (std::size_t j = 0; j < E.counts.size(); ++j)
        rows.push_back(Json{{"n", j + 1}, {"components", E.counts[j]}, {"image_rank", E.image_ranks[j]}});
    return Json{{"group", group_json(p)},
                {"window", window_json(W)},
                {"margin", E.margin},
                {"counts", rows},
                {"stable", E.stable ? Json(*E.stable) : Json(nullptr)},
                {"growing", E.growing}};
}

Json cmd_tower(const Json& cfg, Diagnostics& diag)
{
    const PrimeField f(cfg["p"].get<std::uint32_t>());
    const auto p = resolve_group(cfg["group"]);
    const RipsWindow W = load_window(cfg, p, diag);
    const TowerReport T = tower_report(W, cfg["i"], f, cfg["margin"], cfg["first"]);
    Json entries = Json::array();
    std::map<std::pair<int, int>, std::size_t> rank;
    for (const auto& e : T.entries) {
        entries.push_back(Json{{"m", e.m}, {"n", e.n}, {"rank", e.rank}});
        rank[{e.m, e.n}] = e.rank;
    }
    Json radii = Json::array(), matrix = Json::array(), sizes = Json::array(), bettis = Json::array();
    for (int r = T.first; r <= T.last; ++r) {
        radii.push_back(r);
        sizes.push_back(T.complement_simplices[static_cast<std::size_t>(r - T.first)]);
        bettis.push_back(T.complement_betti[static_cast<std::size_t>(r - T.first)]);
    }
    for (int m = T.first; m <= T.last; ++m) {
        Json row = Json::array();
        for (int n = T.first; n <= T.last; ++n)
            row.push_back(m > n ? Json(rank[{m, n}]) : Json(nullptr));
        matrix.push_back(row);
    }
    Json verdicts = Json::array();
    for (const auto& v : T.verdicts)
        verdicts.push_back(Json{{"n", v.n}, {"verdict", v.trivial_so_far ? "trivial-so-far" : "obstructed at window"}});
    return Json{{"group", group_json(p)},
                {"window", window_json(W)},
                {"degree", T.degree},
                {"field", f.p()},
                {"margin", T.margin},
                {"radii", radii},
                {"complement_simplices", sizes},
                {"complement_betti", bettis},
                {"entries", entries},
                {"rank_matrix", Json{{"rows", "m"}, {"cols", "n"}, {"radii", radii}, {"values", matrix}}},
                {"verdicts", verdicts}};
}

Json cmd_fill(const Json& cfg, Diagnostics& diag)
{
    const PrimeField f(cfg["p"].get<std::uint32_t>());
    const auto p = resolve_group(cfg["group"]);
    const RipsWindow W = load_window(cfg, p, diag);
    const int i = cfg["i"];
    const std::string source = cfg["chain"];
    Chain c;
    if (source.rfind("axis:", 0) == 0) {
        const std::string g = source.substr(5);
        int gen = 0;
        for (int k = 0; k < p.rank(); ++k)
            if (p.generators[static_cast<std::size_t>(k)] == g)
                gen = k + 1;
        if (gen == 0)
            gen = std::atoi(g.c_str());
        c = axis_chain(W, gen, f);
    } else if (source.rfind("square:", 0) == 0) {
        c = square_loop(W, std::atoi(source.c_str() + 7), f);
    } else {
        c = read_chain(read_file(source), W.complex(), f, [&](std::string_view tok) {
            auto id = W.ball().find(parse_word(tok, p));
            require(id.has_value(), ErrorCode::OutOfWindow, "element outside the window");
            return static_cast<int>(*id);
        });
    }
    const long rc = cfg["certified_region"];
    LFCycleWindow lf(W, i, std::move(c), f, rc >= 0 ? std::optional<int>(static_cast<int>(rc)) : std::nullopt);
    std::vector<int> schedule = cfg["schedule"], inner = cfg["inner"];
    const FillingScanReport S = stabilization_scan(lf, schedule, inner, cfg["margin"]);

    const VertexNamer name = [&](int v) { return format_word(W.ball().element(static_cast<std::size_t>(v)), p); };
    const auto& K = W.complex();
    Json steps = Json::array();
    for (const auto& s : S.steps) {
        Json step{{"n", s.n}, {"m", s.m}, {"tried", s.tried}, {"status", fill_status_name(s.status)}};
        if (s.status != FillStatus::OuterInfeasible) {
            step["outer_avoids_inner_ball"] = s.outer_avoids_inner_ball;
            step["outer_avoids_restriction"] = s.outer_avoids_restriction;
            step["restriction"] = chain_json(K, s.restriction, f, name);
            step["outer"] = chain_json(K, s.outer, f, name);
            step["c_n"] = chain_json(K, s.c_n, f, name);
        }
        if (s.status == FillStatus::Ok) {
            step["b_n"] = chain_json(K, s.b_n, f, name);
            step["boundary_check"] = boundary(K, s.b_n, f) == s.c_n;
        }
        steps.push_back(step);
    }
    Json scans = Json::array();
    for (const auto& s : S.inner)
        scans.push_back(Json{{"k", s.k},
                             {"classes", s.class_of},
                             {"distinct", s.distinct},
                             {"longest_run", Json{{"start", s.run_start}, {"length", s.run_length}}},
                             {"selected", s.selected},
                             {"pigeonhole_ok", s.pigeonhole_ok},
                             {"verified", s.verified}});
    return Json{{"group", group_json(p)},
                {"window", window_json(W)},
                {"degree", i},
                {"field", f.p()},
                {"certified_region", S.certified_region},
                {"margin", S.margin},
                {"chain", chain_json(K, lf.chain(), f, name)},
                {"steps", steps},
                {"inner", scans},
                {"obstructed", S.obstructed},
                {"b", S.b ? chain_json(K, *S.b, f, name) : Json(nullptr)},
                {"verification_radius", S.verification_radius ? Json(*S.verification_radius) : Json(nullptr)},
                {"claimed_radius", S.claimed_radius ? Json(*S.claimed_radius) : Json(nullptr)}};
}

Json sample_json(const MetricSample& S)
{
    return Json{{"tag", S.tag()}, {"points", S.size()}, {"metric", metric_kind_name(S.kind())}};
}

Json cmd_nerve(const Json& cfg, Diagnostics&)
{
    const PrimeField f(cfg["p"].get<std::uint32_t>());
    const MetricSample S = resolve_sample(cfg["sample"]);
    const Scale eps = Scale::parse(cfg["eps"].get<std::string>());
    const int max_dim = cfg["max_dim"];
    const CoverNerve N = build_nerve(S, eps, max_dim);
    HomologyContext H(N.complex, f);
    Json counts = Json::array(), b = Json::array();
    for (int d = 0; d <= N.complex.top_dim(); ++d)
        counts.push_back(N.complex.count(d));
    for (int d = 0; d < max_dim; ++d)
        b.push_back(H.betti(d));
    return Json{{"sample", sample_json(S)}, {"eps", eps.to_string()},      {"max_dim", max_dim},
                {"field", f.p()},           {"simplices", counts},         {"betti", b},
                {"components", component_count(N.complex)}, {"witness_sets", N.witness_sets}};
}

Json cmd_cech(const Json& cfg, Diagnostics&)
{
    const PrimeField f(cfg["p"].get<std::uint32_t>());
    const MetricSample S = resolve_sample(cfg["sample"]);
    std::vector<Scale> ladder;
    Json ladder_echo = Json::array();
    for (const auto& s : cfg["ladder"]) {
        ladder.push_back(Scale::parse(s.get<std::string>()));
        ladder_echo.push_back(ladder.back().to_string());
    }
    const int i = cfg["i"];
    const CechTowerReport T = cech_tower(S, ladder, i, f, cfg["max_dim"]);
    Json entries = Json::array();
    for (const auto& e : T.entries)
        entries.push_back(Json{{"fine", ladder_echo[e.fine]},
                               {"coarse", ladder_echo[e.coarse]},
                               {"fine_index", e.fine},
                               {"coarse_index", e.coarse},
                               {"rank", e.rank},
                               {"surjective", e.surjective}});
    return Json{{"sample", sample_json(S)},
                {"degree", i},
                {"field", f.p()},
                {"ladder", ladder_echo},
                {"simplices", T.simplices},
                {"betti", T.betti},
                {"entries", entries},
                {"stable_rank", T.stable_rank ? Json(*T.stable_rank) : Json(nullptr)}};
}

Json cmd_divergence(const Json& cfg, Diagnostics&)
{
    const auto F = free_group(cfg["k"]);
    const Word r = parse_word(cfg["r"].get<std::string>(), F), r2 = parse_word(cfg["r2"].get<std::string>(), F);
    const Scale eps = Scale::parse(cfg["eps"].get<std::string>());
    const DivergenceVerdict V = divergence_check(r, r2, cfg["delta"], cfg["C"], eps, cfg["t_prime"]);
    Json samples = Json::array();
    for (const auto& s : V.bound_samples)
        samples.push_back(Json{{"t", s.t}, {"tree_distance", s.tree_distance}, {"lower_bound", s.lower_bound},
                               {"consistent", s.consistent}});
    return Json{{"t0", V.t0 ? Json(*V.t0) : Json("infinity")},
                {"t_prime", V.t_prime},
                {"hypothesis", Json{{"distance", V.hypothesis_distance}, {"holds", V.hypothesis_holds}}},
                {"bound", Json{{"samples", samples}, {"consistent", V.bound_consistent}}},
                {"visual_distance", V.visual.value},
                {"conclusion",
                 Json{{"standard_reading", V.conclusion_holds}, {"literal_reading", V.conclusion_literal_reading}}},
                {"threshold",
                 Json{{"literal", V.threshold_literal},
                      {"corrected", V.threshold_corrected},
                      {"t_prime_exceeds_literal", V.exceeds_literal},
                      {"t_prime_exceeds_corrected", V.exceeds_corrected}}},
                {"mismatch", V.mismatch}};
}

Json cmd_subdivision(const Json& cfg, Diagnostics&)
{
    const PrimeField f(cfg["p"].get<std::uint32_t>());
    const std::string input = cfg["input"], fixture = cfg["fixture"];
    static const std::map<std::string, SubdivisionFixture (*)()> fixtures{
        {"hex", hex_fixture},
        {"hex-no-interior", hex_fixture_no_interior},
        {"hex-moved-image", hex_fixture_moved_image},
        {"hex-small-eps", hex_fixture_small_eps},
        {"triangle", triangle_fixture}};
    std::optional<SubdivisionFixture> F;
    if (!input.empty()) {
        F = read_subdivision(read_file(input));
    } else {
        auto it = fixtures.find(fixture);
        require(it != fixtures.end(), ErrorCode::InvalidArgument,
                "config field 'fixture' must be one of hex, hex-no-interior, hex-moved-image, hex-small-eps, triangle");
        F = it->second();
    }
    const auto C = check_conditions(F->D, F->phi, F->loop, F->delta, F->eps, F->S);
    const auto R = triangulate_and_fill(F->D, F->phi, F->loop, F->delta, F->eps, F->S, f);
    Json density{{"holds", C.density}, {"grid_centers", C.grid_centers}, {"witness", nullptr}};
    if (C.density_witness)
        density["witness"] = Json{{"x", C.density_witness->x}, {"y", C.density_witness->y}};
    Json closeness{{"holds", C.closeness}, {"pairs", C.close_pairs}, {"witness", nullptr}};
    if (C.closeness_witness)
        closeness["witness"] = Json{{"d1", C.closeness_witness->d1},
                                    {"d2", C.closeness_witness->d2},
                                    {"disk_distance", C.closeness_witness->disk_distance},
                                    {"image_distance", C.closeness_witness->image_distance}};
    Json bnd{{"holds", C.boundary}, {"witness", nullptr}};
    if (C.boundary_witness)
        bnd["witness"] = Json{{"loop_position", C.boundary_witness->loop_position},
                              {"disk_index", C.boundary_witness->disk_index},
                              {"norm", C.boundary_witness->norm}};
    Json filling{{"stage", fill_stage_name(R.stage)},
                 {"message", R.message},
                 {"faces", R.triangles.size()},
                 {"edges", R.edges},
                 {"hull", R.hull.size()},
                 {"missing_triangle", R.missing_triangle ? Json(*R.missing_triangle) : Json(nullptr)}};
    if (R.stage == FillStage::Ok || R.stage == FillStage::BoundaryMismatch) {
        const VertexNamer name = [&](int v) { return F->S.label(static_cast<std::size_t>(v)); };
        filling["F"] = chain_json(R.complex, R.F, f, name);
        filling["L"] = chain_json(R.complex, R.loop, f, name);
        filling["defect"] = chain_json(R.complex, R.defect, f, name);
    }
    return Json{{"fixture", F->name},
                {"disk_points", F->D.size()},
                {"loop_length", F->loop.size()},
                {"field", f.p()},
                {"certificate",
                 Json{{"delta", F->delta},
                      {"eps", F->eps.to_string()},
                      {"tau", F->D.tau()},
                      {"density", density},
                      {"closeness", closeness},
                      {"boundary", bnd},
                      {"valid", C.valid()}}},
                {"filling", filling}};
}

// ---------------------------------------------------------------------------
// Registry

struct Command {
    std::function<void(Fields&)> fields;
    std::function<Json(const Json&, Diagnostics&)> exec;
};

const std::map<std::string, Command>& registry()
{
    static const std::map<std::string, Command> R{
        {"ball",
         {[](Fields& F) {
              ball_fields(F, "builtin:F2", 4);
              F.boolean("elements", false);
          },
          cmd_ball}},
        {"rips", {[](Fields& F) { window_fields(F, "builtin:F2", 2, 3, false); }, cmd_rips}},
        {"homology",
         {[](Fields& F) {
              window_fields(F, "builtin:Z2", 3, 6, true);
              F.text("complex", "");
              F.text("region", "window");
              F.integer("n", 0, 0, 1000);
          },
          cmd_homology}},
        {"ends", {[](Fields& F) { window_fields(F, "builtin:Z", 2, 12, true); }, cmd_ends}},
        {"tower",
         {[](Fields& F) {
              window_fields(F, "builtin:Z2", 3, 8, true);
              F.integer("i", 1, 0, kMaxSimplexSize - 2);
              F.integer("first", 1, 0, 1000);
          },
          cmd_tower}},
        {"fill-at-infinity",
         {[](Fields& F) {
              window_fields(F, "builtin:Z2", 3, 12, true);
              F.integer("i", 0, 0, kMaxSimplexSize - 2);
              F.text("chain", "axis:a");
              F.ints("schedule", {3, 4, 5}, true);
              F.ints("inner", {2, 3, 4}, true);
              F.integer("certified_region", -1, -1, 100000);
          },
          cmd_fill}},
        {"nerve",
         {[](Fields& F) {
              F.text("sample", "builtin:circle64");
              F.scale("eps", "0.3");
              F.integer("max_dim", 2, 1, kMaxSimplexSize - 1);
              F.integer("p", 2, 2, 2147483647);
          },
          cmd_nerve}},
        {"cech-tower",
         {[](Fields& F) {
              F.text("sample", "builtin:circle64");
              F.scales("ladder", {"0.6", "0.45", "0.3"});
              const long i = F.integer("i", 1, 0, kMaxSimplexSize - 2);
              F.integer("max_dim", i + 1, i + 1, kMaxSimplexSize - 1);
              F.integer("p", 2, 2, 2147483647);
          },
          cmd_cech}},
        {"divergence-check",
         {[](Fields& F) {
              F.integer("k", 2, 1, 26);
              F.text("r", "aaaaabb");
              F.text("r2", "aaaaab'b'");
              F.real("delta", 1.0);
              F.real("C", 1.0);
              F.scale("eps", "e^-4");
              F.integer("t_prime", 6, 0, 100000);
          },
          cmd_divergence}},
        {"subdivision-check",
         {[](Fields& F) {
              F.text("fixture", "hex");
              F.text("input", "");
              F.integer("p", 2, 2, 2147483647);
          },
          cmd_subdivision}},
    };
    return R;
}

const Command& find_command(const std::string& name)
{
    auto it = registry().find(name);
    if (it == registry().end())
        fail(ErrorCode::InvalidArgument, "unknown command '" + name + "'");
    return it->second;
}

}  // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"ball",  "rips",  "homology",   "ends",
                                                "tower", "fill-at-infinity", "nerve", "cech-tower",
                                                "divergence-check", "subdivision-check"};
    return names;
}

Json normalize_config(const std::string& command, const Json& config)
{
    Fields F(config);
    find_command(command).fields(F);
    Json out = F.done();
    if (out.contains("p") && !PrimeField::is_prime(out["p"].get<std::uint32_t>()))
        fail(ErrorCode::InvalidArgument, "config field 'p' must be prime");
    if (out.contains("margin"))
        require(out["margin"].get<long>() < out["R"].get<long>(), ErrorCode::InvalidArgument,
                "config field 'margin' must be smaller than R");
    return out;
}

Json run(const std::string& command, const Json& config)
{
    const Json cfg = normalize_config(command, config);
    Diagnostics diag;
    const auto t0 = std::chrono::steady_clock::now();
    Json payload = find_command(command).exec(cfg, diag);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return Json{{"tool", kToolName},
                {"version", kToolVersion},
                {"command", command},
                {"config", cfg},
                {"timing", Json{{"seconds", seconds}}},
                {"diagnostics", Json{{"cache", diag.cache}, {"warnings", diag.warnings}}},
                {"payload", payload}};
}

std::string tower_csv(const Json& payload)
{
    const auto& M = payload.at("rank_matrix");
    const auto& radii = M.at("radii");
    std::ostringstream os;
    os << "m\\n";
    for (const auto& n : radii)
        os << ',' << n.get<int>();
    os << '\n';
    for (std::size_t r = 0; r < radii.size(); ++r) {
        os << radii[r].get<int>();
        for (const auto& v : M.at("values")[r]) {
            os << ',';
            if (!v.is_null())
                os << v.get<std::size_t>();
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace hinf
