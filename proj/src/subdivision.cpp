#include "hinf/subdivision.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace hinf {

namespace {

__extension__ typedef __int128 i128;

i128 cross(const DiskPoint& o, const DiskPoint& a, const DiskPoint& b)
{
    return static_cast<i128>(a.x - o.x) * (b.y - o.y) - static_cast<i128>(a.y - o.y) * (b.x - o.x);
}

int sgn(i128 v) { return (v > 0) - (v < 0); }

// p on the closed segment ab (a != b)
bool on_segment(const DiskPoint& a, const DiskPoint& b, const DiskPoint& p)
{
    return cross(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

// Closed segments ab and cd share a point.
bool segments_meet(const DiskPoint& a, const DiskPoint& b, const DiskPoint& c, const DiskPoint& d)
{
    const int d1 = sgn(cross(a, b, c)), d2 = sgn(cross(a, b, d));
    const int d3 = sgn(cross(c, d, a)), d4 = sgn(cross(c, d, b));
    if (d1 * d2 < 0 && d3 * d4 < 0)
        return true;
    return (d1 == 0 && on_segment(a, b, c)) || (d2 == 0 && on_segment(a, b, d)) || (d3 == 0 && on_segment(c, d, a)) ||
           (d4 == 0 && on_segment(c, d, b));
}

// Convex hull, counterclockwise, keeping points on hull edges.
std::vector<std::size_t> hull_with_collinear(const std::vector<DiskPoint>& P)
{
    std::vector<std::size_t> idx(P.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return P[a].x != P[b].x ? P[a].x < P[b].x : P[a].y < P[b].y;
    });
    if (idx.size() < 3)
        return idx;
    std::vector<std::size_t> H;
    auto chain = [&](auto first, auto last) {
        const std::size_t base = H.size();
        for (auto it = first; it != last; ++it) {
            while (H.size() >= base + 2 && cross(P[H[H.size() - 2]], P[H.back()], P[*it]) < 0)
                H.pop_back();
            H.push_back(*it);
        }
        H.pop_back();
    };
    chain(idx.begin(), idx.end());
    chain(idx.rbegin(), idx.rend());
    return H;
}

int permutation_parity3(std::array<int, 3>& v)
{
    int swaps = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j + 1 < 3 - i; ++j)
            if (v[static_cast<std::size_t>(j)] > v[static_cast<std::size_t>(j + 1)]) {
                std::swap(v[static_cast<std::size_t>(j)], v[static_cast<std::size_t>(j + 1)]);
                ++swaps;
            }
    return swaps & 1;
}

std::uint64_t edge_key(std::size_t a, std::size_t b)
{
    if (a > b)
        std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

void validate_phi(const DiskSample& D, const std::vector<int>& phi, const MetricSample& S)
{
    require(phi.size() == D.size(), ErrorCode::InvalidArgument, "phi must assign a sample point to every disk point");
    std::vector<bool> used(S.size());
    for (std::size_t j = 0; j < phi.size(); ++j) {
        if (!(phi[j] >= 0 && static_cast<std::size_t>(phi[j]) < S.size()))
            fail(ErrorCode::InvalidArgument, "phi sends disk point " + std::to_string(j) + " outside the sample");
        if (used[static_cast<std::size_t>(phi[j])])
            fail(ErrorCode::InvalidArgument,
                 "phi is not injective: sample point " + std::to_string(phi[j]) + " is hit twice");
        used[static_cast<std::size_t>(phi[j])] = true;
    }
}

}  // namespace

DiskSample::DiskSample(std::int64_t den, std::vector<DiskPoint> points, double tau)
    : den_(den), pts_(std::move(points)), tau_(tau)
{
    require(den_ > 0 && den_ <= 1'000'000'000, ErrorCode::InvalidArgument, "disk denominator out of range");
    require(tau_ > 0 && tau_ < 1, ErrorCode::InvalidArgument, "boundary tolerance must lie in (0, 1)");
    for (std::size_t i = 0; i < pts_.size(); ++i) {
        const auto& p = pts_[i];
        if (static_cast<i128>(p.x) * p.x + static_cast<i128>(p.y) * p.y > static_cast<i128>(den_) * den_)
            fail(ErrorCode::InvalidArgument, "disk point " + std::to_string(i) + " lies outside the unit disk");
    }
}

DiskSample DiskSample::from_doubles(const std::vector<std::array<double, 2>>& pts, std::int64_t den, double tau)
{
    std::vector<DiskPoint> out;
    out.reserve(pts.size());
    for (const auto& p : pts)
        out.push_back({static_cast<std::int64_t>(std::trunc(p[0] * static_cast<double>(den))),
                       static_cast<std::int64_t>(std::trunc(p[1] * static_cast<double>(den)))});
    return DiskSample(den, std::move(out), tau);
}

double DiskSample::norm(std::size_t i) const
{
    const auto& p = pts_.at(i);
    return std::hypot(static_cast<double>(p.x), static_cast<double>(p.y)) / static_cast<double>(den_);
}

std::int64_t DiskSample::dist2(std::size_t a, std::size_t b) const
{
    const auto& p = pts_.at(a);
    const auto& q = pts_.at(b);
    return (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
}

SubdivisionCertificate check_conditions(const DiskSample& D, const std::vector<int>& phi, const std::vector<int>& L,
                                        double delta, const Scale& eps, const MetricSample& S)
{
    require(delta > 0 && eps.value > 0, ErrorCode::InvalidArgument, "delta and eps must be positive");
    validate_phi(D, phi, S);
    std::vector<long> preimage(S.size(), -1);
    for (std::size_t j = 0; j < phi.size(); ++j)
        preimage[static_cast<std::size_t>(phi[j])] = static_cast<long>(j);
    require(L.size() >= 3, ErrorCode::InvalidArgument, "a loop needs at least three vertices");
    for (std::size_t k = 0; k < L.size(); ++k) {
        const int a = L[k], b = L[(k + 1) % L.size()];
        if (!(a >= 0 && static_cast<std::size_t>(a) < S.size() && preimage[static_cast<std::size_t>(a)] >= 0))
            fail(ErrorCode::InvalidArgument, "loop vertex " + std::to_string(a) + " is not in the image of phi");
        const std::array<int, 2> e{a, b};
        if (a == b || !witnessed_simplex(S, eps, e))
            fail(ErrorCode::InvalidArgument,
                 "L is not a loop: vertices " + std::to_string(a) + " and " + std::to_string(b) +
                 " do not span an edge of the nerve");
    }

    SubdivisionCertificate C;
    C.delta = delta;
    C.eps = eps;
    C.tau = D.tau();
    const double den = static_cast<double>(D.den());

    // Condition 1: delta-density, on the delta/2 grid.
    const double h = delta / 2, reach = 1 + 0.71 * h, need = 0.64 * delta * den;
    const long steps = static_cast<long>(std::ceil(reach / h));
    C.density = true;
    for (long i = -steps; i <= steps && C.density; ++i)
        for (long j = -steps; j <= steps; ++j) {
            const double x = static_cast<double>(i) * h, y = static_cast<double>(j) * h;
            if (std::hypot(x, y) > reach)
                continue;
            ++C.grid_centers;
            bool covered = false;
            for (const auto& p : D.points())
                if (std::hypot(static_cast<double>(p.x) - x * den, static_cast<double>(p.y) - y * den) < need) {
                    covered = true;
                    break;
                }
            if (!covered) {
                C.density = false;
                C.density_witness = DensityWitness{x, y};
                break;
            }
        }

    // Condition 2: points within 10 delta have images closer than eps.
    const double lim = 10 * delta * den;
    const auto limit2 = static_cast<std::int64_t>(std::floor(lim * lim * (1 + 1e-12)));
    const Cutoff close = S.cutoff(eps, true);
    C.closeness = true;
    for (std::size_t a = 0; a < D.size() && C.closeness; ++a)
        for (std::size_t b = a + 1; b < D.size(); ++b) {
            if (D.dist2(a, b) > limit2)
                continue;
            ++C.close_pairs;
            const auto pa = static_cast<std::size_t>(phi[a]), pb = static_cast<std::size_t>(phi[b]);
            if (!close.accepts(S.level(pa, pb))) {
                C.closeness = false;
                C.closeness_witness =
                    ClosenessWitness{a, b, std::sqrt(static_cast<double>(D.dist2(a, b))) / den, S.distance(pa, pb)};
                break;
            }
        }

    // Condition 3: loop vertices come from the boundary band.
    C.boundary = true;
    for (std::size_t k = 0; k < L.size(); ++k) {
        const auto j = static_cast<std::size_t>(preimage[static_cast<std::size_t>(L[k])]);
        if (D.norm(j) < 1 - D.tau() - 1e-12) {
            C.boundary = false;
            C.boundary_witness = BoundaryWitness{k, j, D.norm(j)};
            break;
        }
    }
    return C;
}

std::string fill_stage_name(FillStage s)
{
    switch (s) {
    case FillStage::Ok: return "ok";
    case FillStage::Triangulation: return "triangulation";
    case FillStage::ImageSimplexMissing: return "image-simplex-missing";
    case FillStage::BoundaryMismatch: return "boundary-mismatch";
    }
    return "?";
}

DiskFilling triangulate_and_fill(const DiskSample& D, const std::vector<int>& phi, const std::vector<int>& L,
                                 double delta, const Scale& eps, const MetricSample& S, const PrimeField& f)
{
    require(delta > 0 && eps.value > 0, ErrorCode::InvalidArgument, "delta and eps must be positive");
    validate_phi(D, phi, S);
    require(L.size() >= 3, ErrorCode::InvalidArgument, "a loop needs at least three vertices");
    DiskFilling out;
    const auto& P = D.points();
    const std::size_t V = P.size();

    out.hull = hull_with_collinear(P);
    bool flat = true;
    for (std::size_t k = 2; k < V && flat; ++k)
        flat = cross(P[0], P[1], P[k]) == 0;
    if (V < 3 || flat) {
        out.message = "disk sample is degenerate (fewer than three non-collinear points)";
        return out;
    }
    const std::size_t target = 3 * V - 3 - out.hull.size();

    // Greedy triangulation over the <= 10 delta graph.
    const double lim = 10 * delta * static_cast<double>(D.den());
    const auto limit2 = static_cast<std::int64_t>(std::floor(lim * lim * (1 + 1e-12)));
    struct Cand {
        std::int64_t d2;
        std::uint32_t a, b;
    };
    std::vector<Cand> cands;
    for (std::size_t a = 0; a < V; ++a)
        for (std::size_t b = a + 1; b < V; ++b)
            if (D.dist2(a, b) <= limit2)
                cands.push_back({D.dist2(a, b), static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)});
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        return std::tie(x.d2, x.a, x.b) < std::tie(y.d2, y.a, y.b);
    });
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::vector<std::size_t>> adj(V);
    for (const auto& c : cands) {
        if (edges.size() == target)
            break;
        const auto &pa = P[c.a], &pb = P[c.b];
        bool ok = true;
        for (std::size_t q = 0; q < V && ok; ++q)
            if (q != c.a && q != c.b && on_segment(pa, pb, P[q]))
                ok = false;
        for (const auto& [u, v] : edges) {
            if (!ok)
                break;
            if (u == c.a || u == c.b || v == c.a || v == c.b)
                continue;
            if (segments_meet(pa, pb, P[u], P[v]))
                ok = false;
        }
        if (!ok)
            continue;
        edges.emplace_back(c.a, c.b);
        adj[c.a].push_back(c.b);
        adj[c.b].push_back(c.a);
    }
    out.edges = edges.size();
    for (auto& a : adj)
        std::sort(a.begin(), a.end());

    // Faces: 3-cycles with no other point in the closed triangle.
    for (const auto& [a, b] : edges) {
        std::vector<std::size_t> common;
        std::set_intersection(adj[a].begin(), adj[a].end(), adj[b].begin(), adj[b].end(), std::back_inserter(common));
        for (std::size_t c : common) {
            if (c < std::max(a, b))
                continue;  // each triangle once, from its two smallest labels
            std::array<std::size_t, 3> t{std::min(a, b), std::max(a, b), c};
            if (cross(P[t[0]], P[t[1]], P[t[2]]) < 0)
                std::swap(t[1], t[2]);
            bool empty = true;
            for (std::size_t q = 0; q < V && empty; ++q) {
                if (q == t[0] || q == t[1] || q == t[2])
                    continue;
                empty = !(cross(P[t[0]], P[t[1]], P[q]) >= 0 && cross(P[t[1]], P[t[2]], P[q]) >= 0 &&
                          cross(P[t[2]], P[t[0]], P[q]) >= 0);
            }
            if (empty)
                out.triangles.push_back(t);
        }
    }
    std::sort(out.triangles.begin(), out.triangles.end());

    // Disk check over GF(2): face boundaries sum to the hull cycle.
    std::map<std::uint64_t, int> parity;
    for (const auto& t : out.triangles)
        for (int k = 0; k < 3; ++k)
            parity[edge_key(t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)])] ^= 1;
    for (std::size_t k = 0; k < out.hull.size(); ++k)
        parity[edge_key(out.hull[k], out.hull[(k + 1) % out.hull.size()])] ^= 1;
    for (const auto& [key, bit] : parity)
        if (bit) {
            out.message = "faces do not tile the disk: edge (" + std::to_string(key >> 32) + ", " +
                          std::to_string(key & 0xffffffffu) + ") has the wrong parity (" +
                          std::to_string(out.edges) + " of " + std::to_string(target) + " edges found)";
            return out;
        }

    // Push faces into the nerve.
    ComplexBuilder builder(2);
    std::vector<std::pair<Simplex, Coeff>> faces;
    for (const auto& t : out.triangles) {
        std::array<int, 3> img{phi[t[0]], phi[t[1]], phi[t[2]]};
        if (!witnessed_simplex(S, eps, img)) {
            out.stage = FillStage::ImageSimplexMissing;
            out.missing_triangle = t;
            out.message = "image of triangle (" + std::to_string(t[0]) + ", " + std::to_string(t[1]) + ", " +
                          std::to_string(t[2]) + ") is not a simplex of the nerve";
            return out;
        }
        const int odd = permutation_parity3(img);
        Simplex s = Simplex::from_sorted(img);
        builder.add_with_faces(s);
        faces.emplace_back(s, odd ? f.neg(1) : Coeff{1});
    }
    std::vector<std::pair<Simplex, Coeff>> loop_edges;
    for (std::size_t k = 0; k < L.size(); ++k) {
        const int a = L[k], b = L[(k + 1) % L.size()];
        require(a != b, ErrorCode::InvalidArgument, "loop has a repeated consecutive vertex");
        const std::array<int, 2> e{a, b};
        require(witnessed_simplex(S, eps, e), ErrorCode::InvalidArgument, "loop edge is not in the nerve");
        Simplex s = Simplex::from_unsorted(e);
        builder.add_with_faces(s);
        loop_edges.emplace_back(s, a < b ? Coeff{1} : f.neg(1));
    }
    out.complex = std::move(builder).build();
    for (const auto& [s, v] : faces)
        axpy(out.F.terms, v, SparseVec{{*out.complex.index_of(s), 1}}, f);
    for (const auto& [s, v] : loop_edges)
        axpy(out.loop.terms, v, SparseVec{{*out.complex.index_of(s), 1}}, f);

    const Chain dF = boundary(out.complex, out.F, f);
    if (dF == out.loop) {
        out.stage = FillStage::Ok;
    } else if (dF == negate(out.loop, f)) {
        out.F = negate(out.F, f);
        out.stage = FillStage::Ok;
    } else {
        out.stage = FillStage::BoundaryMismatch;
        out.defect = subtract(dF, out.loop, f);
        out.message = "boundary of the filling differs from L on " + std::to_string(out.defect.terms.size()) + " edges";
    }
    return out;
}

MetricSample euclidean_sample(std::int64_t den, const std::vector<DiskPoint>& pts, const std::string& tag)
{
    const std::size_t n = pts.size();
    std::vector<std::int64_t> L(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const i128 dx = pts[a].x - pts[b].x, dy = pts[a].y - pts[b].y;
            const i128 d2 = dx * dx + dy * dy;
            require(d2 < static_cast<i128>(kInfiniteLevel), ErrorCode::InvalidArgument, "coordinates too large");
            L[a * n + b] = static_cast<std::int64_t>(d2);
        }
    return MetricSample(tag, MetricKind::EuclideanSquared, 1.0 / static_cast<double>(den), n, std::move(L));
}

namespace {

constexpr std::int64_t kDen = 1'000'000;
constexpr int kRing = 128;

std::vector<std::array<double, 2>> hex_interior()
{
    const double s = 0.08, r = 0.96;
    std::vector<std::array<double, 2>> pts;
    const int span = static_cast<int>(std::ceil(2 * r / s)) + 1;
    for (int j = -span; j <= span; ++j)
        for (int i = -2 * span; i <= 2 * span; ++i) {
            const double x = s * (i + 0.5 * j), y = s * j * std::sqrt(3.0) / 2;
            if (std::hypot(x, y) <= r + 1e-9)
                pts.push_back({x, y});
        }
    return pts;
}

std::vector<std::array<double, 2>> ring(int n)
{
    std::vector<std::array<double, 2>> pts;
    for (int k = 0; k < n; ++k) {
        const double a = 2 * std::numbers::pi * k / n;
        pts.push_back({std::cos(a), std::sin(a)});
    }
    return pts;
}

SubdivisionFixture make_fixture(std::string name, std::vector<std::array<double, 2>> interior, Scale eps)
{
    const std::size_t nI = interior.size();
    auto pts = std::move(interior);
    for (const auto& p : ring(kRing))
        pts.push_back(p);
    DiskSample D = DiskSample::from_doubles(pts, kDen);
    MetricSample S = euclidean_sample(kDen, D.points(), name);
    std::vector<int> phi(D.size());
    for (std::size_t j = 0; j < phi.size(); ++j)
        phi[j] = static_cast<int>(j);
    std::vector<int> loop;
    for (int k = 0; k < kRing; ++k)
        loop.push_back(static_cast<int>(nI) + k);
    return SubdivisionFixture{std::move(name), std::move(D), std::move(S), std::move(phi), std::move(loop), 0.1, eps};
}

}  // namespace

SubdivisionFixture hex_fixture() { return make_fixture("hex", hex_interior(), Scale::of(1.1)); }

SubdivisionFixture hex_fixture_no_interior() { return make_fixture("hex-no-interior", {}, Scale::of(1.1)); }

SubdivisionFixture hex_fixture_moved_image()
{
    SubdivisionFixture F = make_fixture("hex-moved-image", hex_interior(), Scale::of(1.1));
    std::size_t centre = 0;
    for (std::size_t j = 0; j < F.D.size(); ++j)
        if (F.D[j] == DiskPoint{0, 0})
            centre = j;
    auto pts = F.D.points();
    pts[centre] = {5 * kDen, 5 * kDen};
    F.S = euclidean_sample(kDen, pts, F.name);
    return F;
}

SubdivisionFixture hex_fixture_small_eps() { return make_fixture("hex-small-eps", hex_interior(), Scale::of(0.06)); }

SubdivisionFixture triangle_fixture()
{
    std::vector<std::array<double, 2>> pts;
    for (int k = 0; k < 3; ++k) {
        const double a = std::numbers::pi / 2 + 2 * std::numbers::pi * k / 3;
        pts.push_back({std::cos(a), std::sin(a)});
    }
    DiskSample D = DiskSample::from_doubles(pts, kDen);
    MetricSample S = euclidean_sample(kDen, D.points(), "triangle");
    return SubdivisionFixture{"triangle", std::move(D), std::move(S), {0, 1, 2}, {0, 1, 2}, 0.2, Scale::of(2.0)};
}

}  // namespace hinf
