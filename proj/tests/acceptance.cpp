// Acceptance gate: one PASS/FAIL line per criterion, each timed against its
// runtime budget. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hinf/filling.hpp"
#include "hinf/nerve.hpp"
#include "hinf/reports.hpp"
#include "hinf/subdivision.hpp"
#include "support/dense_oracle.hpp"

using namespace hinf;

namespace {

// Collects failed expectations; the first few are printed with the verdict.
class Checker {
public:
    void expect(bool ok, const std::string& what)
    {
        ++checks_;
        if (!ok)
            failures_.push_back(what);
    }
    bool ok() const { return failures_.empty(); }
    std::size_t checks() const { return checks_; }
    const std::vector<std::string>& failures() const { return failures_; }

private:
    std::size_t checks_ = 0;
    std::vector<std::string> failures_;
};

struct Criterion {
    int id;
    std::string title;
    double budget_seconds;  // 0: no budget
    std::function<void(Checker&)> body;
};

std::shared_ptr<const CayleyBall> ball(const char* group, int R)
{
    return std::make_shared<const CayleyBall>(CayleyBall::enumerate(builtin_presentation(group), R));
}

RipsWindow window(const char* group, int R, int t, int max_dim = 3)
{
    RipsOptions o;
    o.t = t;
    o.max_dim = max_dim;
    return RipsWindow::build(ball(group, R), o);
}

std::string str(std::size_t v) { return std::to_string(v); }

// ---------------------------------------------------------------------------
// Boundary-squared checks by two routes.

using Column = std::vector<std::pair<std::uint32_t, std::int64_t>>;

// Sparse boundary columns from vertex deletion and index lookup only, sorted by row.
std::vector<Column> face_columns(const SimplicialComplex& K, int n, std::int64_t p)
{
    std::vector<Column> cols(K.count(n));
    std::vector<int> face;
    for (std::uint32_t j = 0; j < K.count(n); ++j) {
        const auto v = oracle::verts(K.simplex(n, j));
        for (std::size_t k = 0; k < v.size(); ++k) {
            face.clear();
            for (std::size_t q = 0; q < v.size(); ++q)
                if (q != k)
                    face.push_back(v[q]);
            if (const auto idx = K.index_of(Simplex::from_sorted(face)))
                cols[j].emplace_back(*idx, oracle::mod(k % 2 ? -1 : 1, p));
        }
        std::sort(cols[j].begin(), cols[j].end());
    }
    return cols;
}

// Three routes to boundary squared = 0: the library's own composition, the
// independent face columns composed here, and dense matrices when small. The
// library's columns must also equal the independent ones.
void check_boundary_squared(Checker& c, const SimplicialComplex& K, const std::string& name)
{
    for (std::int64_t p : {2, 3}) {
        const PrimeField f(static_cast<std::uint32_t>(p));
        const std::string tag = name + " over GF(" + std::to_string(p) + ")";
        std::vector<Column> lower;
        for (int n = 1; n <= K.top_dim(); ++n) {
            const auto lib = boundary_matrix(K, n, f);
            auto ind = face_columns(K, n, p);
            bool same = lib.columns.size() == ind.size();
            for (std::size_t j = 0; same && j < ind.size(); ++j) {
                Column col;
                for (const auto& e : lib.columns[j])
                    col.emplace_back(e.index, e.value);
                std::sort(col.begin(), col.end());
                same = col == ind[j];
            }
            c.expect(same, tag + ": boundary columns differ from vertex deletion in dim " + std::to_string(n));
            if (n >= 2) {
                bool zero = true;
                Column acc;
                for (std::uint32_t j = 0; zero && j < K.count(n); ++j) {
                    zero = boundary(K, boundary_of_simplex(K, n, j, f), f).is_zero();
                    acc.clear();
                    for (const auto& [face, a] : ind[j])
                        for (const auto& [g, b] : lower[face])
                            acc.emplace_back(g, a * b);
                    std::sort(acc.begin(), acc.end());
                    for (std::size_t q = 0; zero && q < acc.size();) {
                        std::int64_t sum = 0;
                        const auto g = acc[q].first;
                        for (; q < acc.size() && acc[q].first == g; ++q)
                            sum += acc[q].second;
                        zero = oracle::mod(sum, p) == 0;
                    }
                }
                c.expect(zero, tag + ": boundary squared is nonzero in dim " + std::to_string(n));
                if (static_cast<std::size_t>(K.count(n)) * K.count(n - 1) <= 4'000'000 &&
                    static_cast<std::size_t>(K.count(n - 1)) * K.count(n - 2) <= 4'000'000)
                    c.expect(
                        oracle::is_zero(oracle::multiply(oracle::boundary(K, n - 1, p), oracle::boundary(K, n, p), p)),
                        tag + ": dense boundary product is nonzero in dim " + std::to_string(n));
            }
            lower = std::move(ind);
        }
    }
}

void criterion_boundary(Checker& c)
{
    std::mt19937_64 rng(20);
    for (int trial = 0; trial < 100; ++trial) {
        auto K = oracle::random_clique_complex(rng, 10 + trial % 6, 0.5, 4, 200);
        std::size_t simplices = 0;
        for (int d = 0; d <= K.top_dim(); ++d)
            simplices += K.count(d);
        c.expect(simplices <= 200, "random clique complex over 200 simplices");
        check_boundary_squared(c, K, "random clique complex " + std::to_string(trial));
    }
    // The complexes the other criteria build.
    check_boundary_squared(c, window("Z", 12, 2).complex(), "Z R=12 t=2");
    check_boundary_squared(c, window("Z2", 8, 3).complex(), "Z2 R=8 t=3");
    check_boundary_squared(c, window("Z2", 12, 3).complex(), "Z2 R=12 t=3");
    check_boundary_squared(c, window("F2", 6, 2).complex(), "F2 R=6 t=2");
    check_boundary_squared(c, window("F2", 10, 2).complex(), "F2 R=10 t=2");
    check_boundary_squared(c, window("surface2", 2, 2).complex(), "surface2 R=2 t=2");
    const auto circle = circle_sample(64);
    for (double eps : {0.3, 0.45, 0.6})
        check_boundary_squared(c, build_nerve(circle, Scale::of(eps), 2).complex,
                               "circle64 nerve at " + Scale::of(eps).to_string());
    const auto rays = parse_sample("cantor k=2 depth=6");
    for (int k = 1; k <= 3; ++k)
        check_boundary_squared(c, build_nerve(rays, Scale::exp(-k), 2).complex,
                               "cantor(2,6) nerve at e^-" + std::to_string(k));
    const auto H = hex_fixture();
    check_boundary_squared(c, triangulate_and_fill(H.D, H.phi, H.loop, H.delta, H.eps, H.S, PrimeField(2)).complex,
                           "hexagonal filling complex");
}

// ---------------------------------------------------------------------------

void criterion_balls(Checker& c)
{
    const auto F2 = builtin_presentation("F2");
    std::size_t power = 1;
    for (int R = 0; R <= 6; ++R, power *= 3) {
        const auto B = CayleyBall::enumerate(F2, R);
        c.expect(B.size() == 2 * power - 1,
                 "F2 |B(" + std::to_string(R) + ")| = " + str(B.size()) + ", expected " + str(2 * power - 1));
    }
    const auto Z2 = builtin_presentation("Z2");
    for (int R = 0; R <= 20; ++R) {
        const auto B = CayleyBall::enumerate(Z2, R);
        const std::size_t expect = static_cast<std::size_t>(2 * R * R + 2 * R + 1);
        c.expect(B.size() == expect,
                 "Z2 |B(" + std::to_string(R) + ")| = " + str(B.size()) + ", expected " + str(expect));
    }
}

// ---------------------------------------------------------------------------

// Components of the vertices with distance > n, joined when their word distance is below t.
std::size_t complement_components(const CayleyBall& B, int n, int t)
{
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < B.size(); ++i)
        if (B.dist(i) > n)
            keep.push_back(i);
    std::vector<std::size_t> parent(keep.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = a + 1; b < keep.size(); ++b)
            if (*pair_distance(B, keep[a], keep[b]) < t)
                parent[root(a)] = root(b);
    std::size_t count = 0;
    for (std::size_t a = 0; a < keep.size(); ++a)
        count += root(a) == a;
    return count;
}

void criterion_ends(Checker& c)
{
    const PrimeField f(2);
    const auto Z = window("Z", 12, 2);
    const auto EZ = ends_estimate(Z, f, 2);
    c.expect(EZ.stable == std::optional<std::size_t>(2), "Z: stable count is not 2");

    const auto Z2 = window("Z2", 8, 3);
    const auto E2 = ends_estimate(Z2, f, 3);
    c.expect(E2.stable == std::optional<std::size_t>(1), "Z2: stable count is not 1");
    for (std::size_t j = 0; j < E2.counts.size(); ++j)
        c.expect(E2.counts[j] == complement_components(Z2.ball(), static_cast<int>(j), 3),
                 "Z2: count " + str(j) + " disagrees with brute force");

    const auto F = window("F2", 6, 2);
    const auto EF = ends_estimate(F, f, 2);
    c.expect(EF.growing && !EF.stable, "F2: counts are not reported as growing");
    c.expect(!EF.counts.empty(), "F2: no counts");
    std::size_t expect = 4;
    for (std::size_t j = 0; j < EF.counts.size(); ++j, expect *= 3) {
        c.expect(EF.counts[j] == expect,
                 "F2: count at n=" + str(j + 1) + " is " + str(EF.counts[j]) + ", expected " + str(expect));
        c.expect(EF.counts[j] == complement_components(F.ball(), static_cast<int>(j), 2),
                 "F2: count " + str(j) + " disagrees with brute force");
    }
}

// ---------------------------------------------------------------------------

void criterion_tower(Checker& c)
{
    const PrimeField f(2);
    const auto Z2 = tower_report(window("Z2", 8, 3), 1, f, 3);
    c.expect(!Z2.entries.empty(), "Z2: tower has no certified pairs");
    for (const auto& e : Z2.entries)
        c.expect(e.rank == 1, "Z2: rank(" + std::to_string(e.m) + " -> " + std::to_string(e.n) + ") = " + str(e.rank));
    const auto F = tower_report(window("F2", 6, 2), 1, f, 2);
    c.expect(!F.entries.empty(), "F2: tower has no certified pairs");
    for (const auto& e : F.entries)
        c.expect(e.rank == 0, "F2: rank(" + std::to_string(e.m) + " -> " + std::to_string(e.n) + ") = " + str(e.rank));
}

// ---------------------------------------------------------------------------

// Dense comparison of boundary(b) with c on the simplices inside the open ball B(r).
bool boundary_matches_on_ball(const RipsWindow& W, const Chain& b, const Chain& c, int r, std::int64_t p)
{
    const auto db = oracle::boundary_of(W.complex(), b, p);
    const auto dc = oracle::dense(c, W.complex().count(c.dim), p);
    for (std::size_t j = 0; j < db.size(); ++j)
        if (W.max_dist(W.complex().simplex(c.dim, j)) < r && db[j] != dc[j])
            return false;
    return true;
}

void criterion_filling(Checker& c)
{
    const PrimeField f(2);
    const auto W = window("Z2", 12, 3);
    const LFCycleWindow line(W, 0, axis_chain(W, 1, f), f);
    for (int n : {3, 4, 5}) {
        const auto s = fill_with_scan(line, n, 3);
        const std::string tag = "Z2 n=" + std::to_string(n);
        c.expect(s.status == FillStatus::Ok, tag + ": fill is " + fill_status_name(s.status));
        c.expect(boundary(W.complex(), s.b_n, f) == s.c_n, tag + ": boundary(b_n) != c_n");
        c.expect(oracle::boundary_of(W.complex(), s.b_n, 2) == oracle::dense(s.c_n, W.complex().count(1), 2),
                 tag + ": dense boundary(b_n) != c_n");
        c.expect(!s.c_n.is_zero(), tag + ": c_n is zero");
    }
    const auto S = stabilization_scan(line, {3, 4, 5}, {4}, 3);
    c.expect(!S.obstructed, "Z2: scan obstructed");
    c.expect(S.inner.size() == 1 && S.inner[0].verified, "Z2: inner radius 4 not verified");
    c.expect(S.claimed_radius == std::optional<int>(1), "Z2: claimed radius is not k - t = 1");
    c.expect(S.b.has_value(), "Z2: no assembled b");
    if (S.b && S.claimed_radius)
        c.expect(boundary_matches_on_ball(W, *S.b, line.chain(), *S.claimed_radius, 2),
                 "Z2: dense boundary(b) != c on B(1)");

    const auto T = window("F2", 10, 2);
    const LFCycleWindow geo(T, 0, axis_chain(T, 1, f), f);
    for (int n : {2, 3, 4}) {
        const auto s = fill_with_scan(geo, n, 2);
        c.expect(s.status == FillStatus::OuterInfeasible,
                 "F2 n=" + std::to_string(n) + ": fill is " + fill_status_name(s.status));
        c.expect(!s.tried.empty(), "F2 n=" + std::to_string(n) + ": no outer radius tried");
    }
    const auto G = stabilization_scan(geo, {2, 3, 4}, {2, 3}, 2);
    c.expect(G.obstructed, "F2: obstruction not reported");
    c.expect(!G.b.has_value(), "F2: assembled a filling");
}

// ---------------------------------------------------------------------------

void criterion_cech(Checker& c)
{
    const PrimeField f(2);
    const auto circle = cech_tower(circle_sample(64), {Scale::of(0.6), Scale::of(0.45), Scale::of(0.3)}, 1, f, 2);
    c.expect(circle.entries.size() == 3, "circle64: expected 3 ladder pairs");
    for (const auto& e : circle.entries)
        c.expect(e.rank == 1, "circle64: H1 rank " + str(e.rank));

    const auto rays = parse_sample("cantor k=2 depth=6");
    const std::vector<Scale> ladder{Scale::exp(-1), Scale::exp(-2), Scale::exp(-3)};
    const auto h1 = cech_tower(rays, ladder, 1, f, 2);
    c.expect(h1.entries.size() == 3, "cantor: expected 3 ladder pairs");
    for (const auto& e : h1.entries)
        c.expect(e.rank == 0, "cantor: H1 rank " + str(e.rank));
    const auto h0 = cech_tower(rays, ladder, 0, f, 1);
    c.expect(h0.entries.size() == 3, "cantor: expected 3 ladder pairs");
    for (const auto& e : h0.entries) {
        c.expect(e.surjective, "cantor: H0 map not surjective");
        // Open balls of radius e^-k hold the rays sharing k + 1 letters.
        const auto k = static_cast<std::size_t>(-*ladder[e.coarse].exponent);
        std::size_t prefixes = 4;
        for (std::size_t j = 0; j < k; ++j)
            prefixes *= 3;
        c.expect(e.rank == prefixes, "cantor: H0 rank " + str(e.rank) + ", expected " + str(prefixes));
    }
}

// ---------------------------------------------------------------------------

double disk_distance(const DiskSample& D, std::size_t a, std::size_t b)
{
    return std::sqrt(static_cast<double>(D.dist2(a, b))) / static_cast<double>(D.den());
}

void criterion_subdivision(Checker& c)
{
    const auto H = hex_fixture();
    c.expect(H.delta == 0.1, "hex fixture delta is not 0.1");
    const auto C = check_conditions(H.D, H.phi, H.loop, H.delta, H.eps, H.S);
    c.expect(C.valid(), "hex: certificate invalid");
    for (std::uint32_t p : {2u, 3u}) {
        const auto R = triangulate_and_fill(H.D, H.phi, H.loop, H.delta, H.eps, H.S, PrimeField(p));
        c.expect(R.stage == FillStage::Ok, "hex: filling stage " + fill_stage_name(R.stage));
        c.expect(!R.F.is_zero(), "hex: empty filling");
        c.expect(oracle::boundary_of(R.complex, R.F, p) == oracle::dense(R.loop, R.complex.count(1), p),
                 "hex: dense boundary(F) != L over GF(" + std::to_string(p) + ")");
        c.expect(R.loop.terms.size() == H.loop.size(), "hex: loop chain length");
    }

    // Deleted interior: only density fails, at a grid centre far from every point.
    const auto A = hex_fixture_no_interior();
    const auto CA = check_conditions(A.D, A.phi, A.loop, A.delta, A.eps, A.S);
    c.expect(!CA.density && CA.closeness && CA.boundary, "no-interior: wrong failing condition");
    c.expect(CA.density_witness.has_value(), "no-interior: no witness");
    if (CA.density_witness) {
        const auto [x, y] = *CA.density_witness;
        double nearest = INFINITY;
        for (std::size_t j = 0; j < A.D.size(); ++j)
            nearest = std::min(nearest, std::hypot(static_cast<double>(A.D[j].x) / static_cast<double>(A.D.den()) - x,
                                                   static_cast<double>(A.D[j].y) / static_cast<double>(A.D.den()) - y));
        c.expect(nearest >= 0.64 * A.delta, "no-interior: witness centre is covered");
        c.expect(std::hypot(x, y) <= 1.0 + A.delta, "no-interior: witness centre off the disk");
    }

    // Moved image point: only closeness fails, at a pair recomputed here.
    const auto B = hex_fixture_moved_image();
    const auto CB = check_conditions(B.D, B.phi, B.loop, B.delta, B.eps, B.S);
    c.expect(CB.density && !CB.closeness && CB.boundary, "moved-image: wrong failing condition");
    c.expect(CB.closeness_witness.has_value(), "moved-image: no witness");
    if (CB.closeness_witness) {
        const auto& w = *CB.closeness_witness;
        c.expect(disk_distance(B.D, w.d1, w.d2) <= 10 * B.delta, "moved-image: witness pair not close in the disk");
        const double image = B.S.distance(static_cast<std::size_t>(B.phi[w.d1]), static_cast<std::size_t>(B.phi[w.d2]));
        c.expect(image >= B.eps.value, "moved-image: witness images are within eps");
    }

    // Shrunken scale: conditions may hold but some image triangle is not a simplex.
    const auto E = hex_fixture_small_eps();
    const auto RE = triangulate_and_fill(E.D, E.phi, E.loop, E.delta, E.eps, E.S, PrimeField(2));
    c.expect(RE.stage == FillStage::ImageSimplexMissing, "small-eps: filling stage " + fill_stage_name(RE.stage));
    c.expect(RE.missing_triangle.has_value(), "small-eps: no missing triangle");
    if (RE.missing_triangle) {
        const auto& t = *RE.missing_triangle;
        const int tv[] = {E.phi[t[0]], E.phi[t[1]], E.phi[t[2]]};
        double widest = 0;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
                widest = std::max(widest, E.S.distance(static_cast<std::size_t>(tv[a]), static_cast<std::size_t>(tv[b])));
        c.expect(!witnessed_simplex(E.S, E.eps, tv), "small-eps: reported triangle is a simplex");
        c.expect(widest > 0, "small-eps: degenerate triangle");
    }
}

// ---------------------------------------------------------------------------

void criterion_oracle(Checker& c)
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        for (std::int64_t p : {2, 3}) {
            const PrimeField f(static_cast<std::uint32_t>(p));
            const auto K = oracle::random_clique_complex(rng, 6 + trial % 5, 0.55, 3, 50);
            const std::string tag = "trial " + std::to_string(trial) + " GF(" + std::to_string(p) + ")";
            for (int n = 0; n <= K.top_dim(); ++n)
                c.expect(betti(K, n, f) == oracle::betti(K, n, p), tag + ": betti " + std::to_string(n));
            for (int n = 0; n < K.top_dim(); ++n) {
                std::vector<SparseVec> cycles;
                if (n == 0) {
                    for (std::uint32_t v = 1; v < K.count(0); ++v)
                        cycles.push_back(SparseVec{{0, 1}, {v, f.neg(1)}});
                } else {
                    cycles = kernel_basis(boundary_matrix(K, n, f).columns, f);
                }
                for (const auto& zv : cycles) {
                    const Chain z{n, zv};
                    std::vector<bool> half(K.count(n + 1));
                    for (std::size_t j = 0; j < half.size(); ++j)
                        half[j] = rng() % 2;
                    for (const std::vector<bool>* support : {static_cast<const std::vector<bool>*>(nullptr),
                                                            static_cast<const std::vector<bool>*>(&half)}) {
                        const auto x = solve_boundary(z, K, f, support);
                        c.expect(x.has_value() == oracle::solvable(K, z, p, support), tag + ": solvability");
                        if (x) {
                            c.expect(oracle::boundary_of(K, *x, p) == oracle::dense(z, K.count(n), p),
                                     tag + ": boundary of the solution");
                            if (support)
                                for (const auto& e : x->terms)
                                    c.expect((*support)[e.index], tag + ": solution leaves its support");
                        }
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------

void criterion_reproducible(Checker& c)
{
    const std::vector<std::pair<std::string, Json>> runs{
        {"ends", Json{{"group", "builtin:Z"}, {"t", 2}, {"R", 12}, {"use_cache", false}}},
        {"ends", Json{{"group", "builtin:Z2"}, {"t", 3}, {"R", 8}, {"use_cache", false}}},
        {"ends", Json{{"group", "builtin:F2"}, {"t", 2}, {"R", 6}, {"use_cache", false}}},
        {"tower", Json{{"group", "builtin:Z2"}, {"t", 3}, {"R", 8}, {"i", 1}, {"use_cache", false}}},
        {"tower", Json{{"group", "builtin:F2"}, {"t", 2}, {"R", 6}, {"i", 1}, {"use_cache", false}}},
        {"fill-at-infinity", Json{{"group", "builtin:Z2"}, {"t", 3}, {"R", 12}, {"schedule", {3, 4, 5}},
                                  {"inner", {4}}, {"use_cache", false}}},
        {"fill-at-infinity", Json{{"group", "builtin:F2"}, {"t", 2}, {"R", 10}, {"schedule", {2, 3, 4}},
                                  {"inner", {2, 3}}, {"use_cache", false}}},
        {"cech-tower", Json{{"sample", "builtin:circle64"}, {"ladder", "0.6,0.45,0.3"}, {"i", 1}}},
        {"cech-tower", Json{{"sample", "cantor k=2 depth=6"}, {"ladder", "e^-1,e^-2,e^-3"}, {"i", 1}}},
        {"cech-tower", Json{{"sample", "cantor k=2 depth=6"}, {"ladder", "e^-1,e^-2,e^-3"}, {"i", 0}}},
        {"subdivision-check", Json{{"fixture", "hex"}}},
        {"subdivision-check", Json{{"fixture", "hex-no-interior"}}},
        {"subdivision-check", Json{{"fixture", "hex-moved-image"}}},
    };
    for (const auto& [cmd, cfg] : runs) {
        const Json a = run(cmd, cfg);
        const Json b = run(cmd, cfg);
        const Json again = run(cmd, a["config"]);
        const std::string tag = cmd + " " + cfg.dump();
        c.expect(a["payload"].dump() == b["payload"].dump(), tag + ": payloads differ between runs");
        c.expect(a["payload"].dump() == again["payload"].dump(), tag + ": payload differs when rerun from its config echo");
        c.expect(a["config"].dump() == b["config"].dump(), tag + ": config echo differs");
    }
}

}  // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "boundary squared vanishes on every complex built", 10, criterion_boundary},
        {2, "ball counts for F2 (R <= 6) and Z2 (R <= 20)", 5, criterion_balls},
        {3, "ends: Z -> 2, Z2 -> 1, F2 -> 4*3^(n-1) growing", 30, criterion_ends},
        {4, "complement towers: Z2 ranks 1, F2 ranks 0", 60, criterion_tower},
        {5, "filling scan on the Z2 axis and obstruction in F2", 120, criterion_filling},
        {6, "Cech towers on circle64 and cantor(2,6)", 30, criterion_cech},
        {7, "subdivision certificate, filling and negative fixtures", 10, criterion_subdivision},
        {8, "betti and solve_boundary match the dense oracle", 60, criterion_oracle},
        {9, "report payloads are byte-identical across runs", 0, criterion_reproducible},
    };

    int failed = 0;
    for (const auto& cr : criteria) {
        Checker c;
        std::string error;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.body(c);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = cr.budget_seconds == 0 || seconds < cr.budget_seconds;
        const bool pass = c.ok() && error.empty() && in_time;
        failed += !pass;
        const std::string budget =
            cr.budget_seconds > 0 ? ", budget " + std::to_string(static_cast<int>(cr.budget_seconds)) + " s" : "";
        std::printf("%s  [%d] %s  (%zu checks, %.2f s%s)\n", pass ? "PASS" : "FAIL", cr.id, cr.title.c_str(),
                    c.checks(), seconds, budget.c_str());
        if (!error.empty())
            std::printf("      exception: %s\n", error.c_str());
        if (!in_time)
            std::printf("      over the runtime budget\n");
        for (std::size_t k = 0; k < c.failures().size() && k < 5; ++k)
            std::printf("      %s\n", c.failures()[k].c_str());
        if (c.failures().size() > 5)
            std::printf("      ... %zu more\n", c.failures().size() - 5);
        std::fflush(stdout);
    }
    std::printf("%s: %d of %zu criteria failed\n", failed ? "FAIL" : "PASS", failed, criteria.size());
    return failed ? 1 : 0;
}
