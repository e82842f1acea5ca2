#include "hinf/nerve.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace hinf {

namespace {

constexpr double kSnap = 1e-9;

bool near_integer(double x, std::int64_t& k)
{
    const double r = std::round(x);
    if (std::abs(x - r) <= kSnap * std::max(1.0, std::abs(x))) {
        k = static_cast<std::int64_t>(r);
        return true;
    }
    return false;
}

std::optional<int> parse_int(std::string_view s)
{
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        return std::nullopt;
    return v;
}

std::string trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return std::string(s);
}

}  // namespace

Scale Scale::exp(int k) { return Scale{std::exp(static_cast<double>(k)), k}; }

Scale Scale::parse(std::string_view text)
{
    const std::string s = trim(text);
    std::string_view body;
    if (s.rfind("exp(", 0) == 0 && s.size() > 5 && s.back() == ')')
        body = std::string_view(s).substr(4, s.size() - 5);
    else if (s.rfind("e^", 0) == 0)
        body = std::string_view(s).substr(2);
    else if (s.size() >= 2 && s[0] == 'e' && (s[1] == '-' || s[1] == '+'))
        body = std::string_view(s).substr(1);
    if (!body.empty()) {
        if (body.front() == '+')
            body.remove_prefix(1);
        auto k = parse_int(body);
        if (!k.has_value())
            fail(ErrorCode::Parse, "bad exponent in scale '" + s + "'");
        return Scale::exp(*k);
    }
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (!(ec == std::errc() && p == s.data() + s.size() && std::isfinite(v)))
        fail(ErrorCode::Parse, "cannot parse scale '" + s + "'");
    return Scale::of(v);
}

std::string Scale::to_string() const
{
    if (exponent)
        return "e^" + std::to_string(*exponent);
    // Shortest text that parses back to the same double.
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

std::string_view metric_kind_name(MetricKind k) noexcept
{
    switch (k) {
    case MetricKind::Linear: return "linear";
    case MetricKind::EuclideanSquared: return "euclidean-squared";
    case MetricKind::Visual: return "visual";
    }
    return "?";
}

MetricSample::MetricSample(std::string tag, MetricKind kind, double unit, std::size_t n,
                           std::vector<std::int64_t> levels, std::vector<std::string> labels)
    : tag_(std::move(tag)), kind_(kind), unit_(unit), n_(n), levels_(std::move(levels)), labels_(std::move(labels))
{
    require(n_ >= 1, ErrorCode::InvalidArgument, "metric sample needs at least one point");
    require(levels_.size() == n_ * n_, ErrorCode::InvalidArgument, "distance table has the wrong size");
    require(kind_ == MetricKind::Visual || (unit_ > 0 && std::isfinite(unit_)), ErrorCode::InvalidArgument,
            "metric unit must be positive");
    if (labels_.empty())
        for (std::size_t i = 0; i < n_; ++i)
            labels_.push_back("p" + std::to_string(i));
    require(labels_.size() == n_, ErrorCode::InvalidArgument, "label count does not match point count");
    check_metric();
}

double MetricSample::distance(std::size_t a, std::size_t b) const
{
    const std::int64_t L = level(a, b);
    switch (kind_) {
    case MetricKind::Linear: return unit_ * static_cast<double>(L);
    case MetricKind::EuclideanSquared: return unit_ * std::sqrt(static_cast<double>(L));
    case MetricKind::Visual: return L == kInfiniteLevel ? 0.0 : std::exp(-static_cast<double>(L));
    }
    return 0;
}

void MetricSample::check_metric() const
{
    const std::int64_t zero = kind_ == MetricKind::Visual ? kInfiniteLevel : 0;
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b) {
            const std::int64_t L = level(a, b);
            require(L == level(b, a), ErrorCode::InvalidArgument, "distance table is not symmetric");
            require((L == zero) == (a == b), ErrorCode::InvalidArgument,
                    "distance table must vanish exactly on the diagonal");
            require(L >= 0, ErrorCode::InvalidArgument, "negative level in distance table");
        }
    auto triangle = [&](std::size_t a, std::size_t b, std::size_t c) {
        const double lhs = distance(a, c), rhs = distance(a, b) + distance(b, c);
        if (!(lhs <= rhs + kSnap * std::max(1.0, rhs)))
            fail(ErrorCode::InvalidArgument,
                 "triangle inequality fails on points " + std::to_string(a) + ", " + std::to_string(b) + ", " +
                 std::to_string(c));
    };
    // Exhaustive for small samples, a fixed pseudo-random set of triples otherwise.
    if (n_ <= 200) {
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b)
                for (std::size_t c = 0; c < n_; ++c)
                    triangle(a, b, c);
    } else {
        std::mt19937_64 rng(0x5eed);
        std::uniform_int_distribution<std::size_t> pick(0, n_ - 1);
        for (int k = 0; k < 400000; ++k)
            triangle(pick(rng), pick(rng), pick(rng));
    }
}

Cutoff MetricSample::cutoff(const Scale& x, bool strict) const
{
    Cutoff c;
    if (kind_ == MetricKind::Visual) {
        c.hi = kInfiniteLevel;
        if (!(x.value > 0) && !x.exponent) {
            c.lo = strict ? 1 : kInfiniteLevel;
            c.hi = strict ? 0 : kInfiniteLevel;
            return c;
        }
        const double T = x.exponent ? -static_cast<double>(*x.exponent) : -std::log(x.value);
        std::int64_t k = 0;
        if (near_integer(T, k))
            c.lo = strict ? k + 1 : k;
        else
            c.lo = strict ? static_cast<std::int64_t>(std::floor(T)) + 1 : static_cast<std::int64_t>(std::ceil(T));
        c.lo = std::max<std::int64_t>(c.lo, 0);
        return c;
    }
    c.lo = 0;
    if (!(x.value > 0)) {
        c.hi = strict ? -1 : 0;
        return c;
    }
    double T = x.value / unit_;
    if (kind_ == MetricKind::EuclideanSquared)
        T = T * T;
    if (T > 9e18) {
        c.hi = kInfiniteLevel;
        return c;
    }
    std::int64_t k = 0;
    if (near_integer(T, k))
        c.hi = strict ? k - 1 : k;
    else
        c.hi = static_cast<std::int64_t>(std::floor(T));
    return c;
}

MetricSample circle_sample(int n)
{
    require(n >= 1 && n <= 4000, ErrorCode::InvalidArgument, "circle sample size must lie in [1, 4000]");
    const auto N = static_cast<std::size_t>(n);
    std::vector<std::int64_t> L(N * N);
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b) {
            const std::size_t d = a > b ? a - b : b - a;
            L[a * N + b] = static_cast<std::int64_t>(std::min(d, N - d));
        }
    return MetricSample("circle n=" + std::to_string(n), MetricKind::Linear, 2 * std::numbers::pi / n, N, std::move(L));
}

std::vector<Word> reduced_words(int k, int depth)
{
    require(k >= 1 && depth >= 1, ErrorCode::InvalidArgument, "ray sample needs k >= 1 and depth >= 1");
    std::vector<Word> out;
    for (int g = 1; g <= k; ++g)
        for (int s : {g, -g})
            out.push_back({s});
    for (int d = 1; d < depth; ++d) {
        require(out.size() * static_cast<std::size_t>(2 * k - 1) <= 200000, ErrorCode::ResourceCap,
                "ray sample exceeds 200000 points");
        std::vector<Word> next;
        for (const auto& w : out)
            for (int g = 1; g <= k; ++g)
                for (int s : {g, -g}) {
                    if (s == -w.back())
                        continue;
                    Word x = w;
                    x.push_back(s);
                    next.push_back(std::move(x));
                }
        out = std::move(next);
    }
    return out;
}

MetricSample boundary_ray_sample(int k, int depth)
{
    const auto rays = reduced_words(k, depth);
    const std::size_t N = rays.size();
    if (N > 2500)
        fail(ErrorCode::ResourceCap, "ray sample with " + std::to_string(N) + " points exceeds 2500");
    std::vector<std::int64_t> L(N * N);
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b) {
            auto v = visual_distance(rays[a], rays[b]);
            L[a * N + b] = v.prefix ? *v.prefix : kInfiniteLevel;
        }
    GroupPresentation F;
    for (int g = 0; g < k; ++g)
        F.generators.push_back(std::string(1, static_cast<char>('a' + g % 26)) + (g >= 26 ? std::to_string(g) : ""));
    std::vector<std::string> labels;
    for (const auto& w : rays)
        labels.push_back(format_word(w, F));
    return MetricSample("cantor k=" + std::to_string(k) + " depth=" + std::to_string(depth), MetricKind::Visual, 1.0, N,
                        std::move(L), std::move(labels));
}

MetricSample point_sample() { return MetricSample("point", MetricKind::Linear, 1.0, 1, {0}); }

MetricSample parse_sample(std::string_view source)
{
    std::string s = trim(source);
    if (s.rfind("builtin:", 0) == 0) {
        const std::string name = s.substr(8);
        if (name == "circle64")
            return circle_sample(64);
        if (name == "cantor")
            return boundary_ray_sample(2, 6);
        if (name == "point")
            return point_sample();
        fail(ErrorCode::InvalidArgument, "unknown builtin sample '" + name + "' (circle64, cantor, point)");
    }
    std::istringstream in(s);
    std::string head;
    in >> head;
    std::map<std::string, int> kv;
    for (std::string tok; in >> tok;) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::Parse, "expected key=value in sample string, got '" + tok + "'");
        auto v = parse_int(std::string_view(tok).substr(eq + 1));
        if (!v.has_value())
            fail(ErrorCode::Parse, "expected an integer in '" + tok + "'");
        kv[tok.substr(0, eq)] = *v;
    }
    auto get = [&](const std::string& key, int dflt) {
        auto it = kv.find(key);
        return it == kv.end() ? dflt : it->second;
    };
    if (head == "circle")
        return circle_sample(get("n", 64));
    if (head == "cantor")
        return boundary_ray_sample(get("k", 2), get("depth", 6));
    if (head == "point")
        return point_sample();
    fail(ErrorCode::InvalidArgument, "unknown sample string '" + s + "'");
}

VisualDistance visual_distance(const Word& u, const Word& v)
{
    require(free_reduce(u) == u && free_reduce(v) == v, ErrorCode::InvalidArgument, "rays must be reduced words");
    VisualDistance out;
    if (u == v)
        return out;
    std::size_t p = 0;
    while (p < u.size() && p < v.size() && u[p] == v[p])
        ++p;
    out.prefix = static_cast<int>(p);
    out.value = std::exp(-static_cast<double>(p));
    return out;
}

bool witnessed_simplex(const MetricSample& S, const Scale& eps, std::span<const int> vertices)
{
    const Cutoff in_ball = S.cutoff(eps, true);
    for (int v : vertices)
        require(v >= 0 && static_cast<std::size_t>(v) < S.size(), ErrorCode::InvalidArgument, "vertex out of range");
    for (std::size_t w = 0; w < S.size(); ++w) {
        bool all = true;
        for (int v : vertices)
            all = all && in_ball.accepts(S.level(static_cast<std::size_t>(v), w));
        if (all)
            return true;
    }
    return false;
}

CoverNerve build_nerve(const MetricSample& S, const Scale& eps, int max_dim)
{
    require(eps.value > 0, ErrorCode::InvalidArgument, "nerve scale must be positive");
    require(max_dim >= 0 && max_dim < kMaxSimplexSize, ErrorCode::InvalidArgument, "nerve max_dim out of range");
    const Cutoff in_ball = S.cutoff(eps, true);
    std::set<std::vector<int>> witnessed;
    for (std::size_t w = 0; w < S.size(); ++w) {
        std::vector<int> ball;
        for (std::size_t u = 0; u < S.size(); ++u)
            if (in_ball.accepts(S.level(u, w)))
                ball.push_back(static_cast<int>(u));
        witnessed.insert(std::move(ball));
    }
    ComplexBuilder builder(max_dim);
    std::vector<int> pick;
    for (const auto& ball : witnessed) {
        // all subsets of size 1 .. max_dim + 1
        std::function<void(std::size_t)> rec = [&](std::size_t from) {
            if (!pick.empty())
                builder.add(Simplex::from_sorted(pick));
            if (static_cast<int>(pick.size()) == max_dim + 1)
                return;
            for (std::size_t a = from; a < ball.size(); ++a) {
                pick.push_back(ball[a]);
                rec(a + 1);
                pick.pop_back();
            }
        };
        rec(0);
    }
    CoverNerve N;
    N.eps = eps;
    N.max_dim = max_dim;
    N.complex = std::move(builder).build();
    N.witness_sets = witnessed.size();
    return N;
}

RefinementChainMap refinement_map(const MetricSample& S, const CoverNerve& fine, const CoverNerve& coarse,
                                  const PrimeField& f)
{
    if (!(fine.eps.value <= coarse.eps.value))
        fail(ErrorCode::InvalidArgument,
             "refinement needs eps' <= eps, got " + fine.eps.to_string() + " > " + coarse.eps.to_string());
    RefinementChainMap M;
    M.fine_eps = fine.eps;
    M.coarse_eps = coarse.eps;
    Scale gap = Scale::of(coarse.eps.value - fine.eps.value);
    if (fine.eps.exponent && coarse.eps.exponent && *fine.eps.exponent == *coarse.eps.exponent)
        gap = Scale::of(0);
    const Cutoff eligible = S.cutoff(gap, false);
    M.vertex_map.assign(S.size(), -1);
    for (std::size_t u = 0; u < S.size(); ++u) {
        for (std::size_t v = 0; v < S.size(); ++v)
            if (eligible.accepts(S.level(u, v))) {
                M.vertex_map[u] = static_cast<int>(v);
                break;
            }
        if (M.vertex_map[u] < 0)
            fail(ErrorCode::InvalidArgument,
                 "refinement precondition fails: no coarse center within eps - eps' of vertex " + std::to_string(u) +
                 " (" + S.label(u) + ")");
    }
    const auto& vm = M.vertex_map;
    VertexMap map = [&vm](int v) { return vm[static_cast<std::size_t>(v)]; };
    for (int d = 0; d <= fine.complex.top_dim(); ++d) {
        std::vector<SparseVec> cols;
        cols.reserve(fine.complex.count(d));
        for (std::uint32_t j = 0; j < fine.complex.count(d); ++j)
            cols.push_back(push_chain(fine.complex, coarse.complex, Chain{d, {{j, 1}}}, map, f).terms);
        M.chain_matrices.push_back(std::move(cols));
    }
    return M;
}

CechTowerReport cech_tower(const MetricSample& S, const std::vector<Scale>& ladder, int i, const PrimeField& f,
                           int max_dim)
{
    require(ladder.size() >= 2, ErrorCode::InvalidArgument, "a ladder needs at least two scales");
    for (std::size_t j = 1; j < ladder.size(); ++j)
        require(ladder[j].value < ladder[j - 1].value, ErrorCode::InvalidArgument,
                "ladder must be strictly descending");
    if (i < 0 || max_dim < i + 1)
        fail(ErrorCode::InvalidArgument, "max_dim must be at least i + 1");

    CechTowerReport T;
    T.degree = i;
    T.ladder = ladder;
    std::vector<CoverNerve> nerves;
    for (const auto& e : ladder) {
        nerves.push_back(build_nerve(S, e, max_dim));
        T.simplices.push_back(nerves.back().complex.total());
    }
    // step[j] maps level j + 1 (finer) to level j.
    std::vector<std::vector<int>> step;
    for (std::size_t j = 0; j + 1 < nerves.size(); ++j) {
        try {
            step.push_back(refinement_map(S, nerves[j + 1], nerves[j], f).vertex_map);
        } catch (const Error& e) {
            fail(e.code(), "broken ladder step " + ladder[j + 1].to_string() + " -> " + ladder[j].to_string() + ": " +
                               e.what());
        }
    }
    std::vector<std::unique_ptr<HomologyContext>> ctx;
    for (const auto& N : nerves) {
        ctx.push_back(std::make_unique<HomologyContext>(N.complex, f));
        T.betti.push_back(ctx.back()->betti(i));
    }
    for (std::size_t b = 1; b < nerves.size(); ++b)
        for (std::size_t a = b; a-- > 0;) {
            VertexMap composed = [&, a, b](int v) {
                for (std::size_t j = b; j > a; --j)
                    v = step[j - 1][static_cast<std::size_t>(v)];
                return v;
            };
            CechEntry e;
            e.fine = b;
            e.coarse = a;
            e.rank = induced_rank(*ctx[b], *ctx[a], i, composed);
            e.surjective = e.rank == T.betti[a];
            T.entries.push_back(e);
        }
    bool same = !T.entries.empty();
    for (const auto& e : T.entries)
        same = same && e.rank == T.entries.front().rank;
    if (same)
        T.stable_rank = T.entries.front().rank;
    return T;
}

DivergenceVerdict divergence_check(const Word& r, const Word& r2, double delta, double C, const Scale& eps, int t_prime)
{
    require(delta > 0 && C > 0 && eps.value > 0, ErrorCode::InvalidArgument, "delta, C and eps must be positive");
    require(t_prime >= 0 && static_cast<int>(r.size()) >= t_prime && static_cast<int>(r2.size()) >= t_prime,
            ErrorCode::InvalidArgument, "rays must have depth at least t'");
    require(!r.empty() && !r2.empty(), ErrorCode::InvalidArgument, "rays must be nonempty");
    DivergenceVerdict V;
    V.t_prime = t_prime;
    V.visual = visual_distance(r, r2);
    V.t0 = V.visual.prefix;
    auto tree_dist = [&](int t) { return V.t0 && t > *V.t0 ? 2 * (t - *V.t0) : 0; };
    V.hypothesis_distance = tree_dist(t_prime);
    V.hypothesis_holds = V.hypothesis_distance < 10 * C;
    if (V.t0) {
        const int depth = static_cast<int>(std::min(r.size(), r2.size()));
        for (int t = *V.t0 + 1; t <= depth; ++t) {
            BoundSample s;
            s.t = t;
            s.tree_distance = tree_dist(t);
            s.lower_bound = std::pow(2.0, (t - *V.t0 - 1) / delta);
            s.consistent = s.tree_distance >= s.lower_bound;
            V.bound_consistent = V.bound_consistent && s.consistent;
            V.bound_samples.push_back(s);
        }
    }
    if (!V.t0) {
        V.conclusion_holds = true;  // distance 0
        V.conclusion_literal_reading = true;
    } else if (eps.exponent) {
        V.conclusion_holds = -*V.t0 < *eps.exponent;
        V.conclusion_literal_reading = *V.t0 < *eps.exponent;
    } else {
        V.conclusion_holds = std::exp(-static_cast<double>(*V.t0)) < eps.value;
        V.conclusion_literal_reading = std::exp(static_cast<double>(*V.t0)) < eps.value;
    }
    const double log_eps = eps.exponent ? static_cast<double>(*eps.exponent) : std::log(eps.value);
    const double base = delta * std::log2(10 * C) + 1;
    V.threshold_literal = base + log_eps;
    V.threshold_corrected = base - log_eps;
    V.exceeds_literal = t_prime > V.threshold_literal;
    V.exceeds_corrected = t_prime > V.threshold_corrected;
    V.mismatch = V.hypothesis_holds && !V.conclusion_holds;
    return V;
}

}  // namespace hinf
