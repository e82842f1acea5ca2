#include "hinf/rips.hpp"

#include <algorithm>

namespace hinf {

namespace {

struct CliqueEnumerator {
    const std::vector<std::vector<int>>& higher;  // neighbors with larger label, sorted
    int max_size;
    std::size_t cap;
    ComplexBuilder& out;
    std::size_t emitted = 0;
    std::vector<int> clique;

    void emit()
    {
        if (++emitted > cap)
            fail(ErrorCode::ResourceCap, "Rips complex exceeded the simplex cap of " + std::to_string(cap));
        out.add(Simplex::from_sorted(clique));
    }

    void extend(const std::vector<int>& cand)
    {
        emit();
        if (static_cast<int>(clique.size()) == max_size)
            return;
        std::vector<int> next;
        for (std::size_t a = 0; a < cand.size(); ++a) {
            const int w = cand[a];
            const auto& nw = higher[static_cast<std::size_t>(w)];
            next.clear();
            std::set_intersection(cand.begin() + static_cast<std::ptrdiff_t>(a) + 1, cand.end(), nw.begin(), nw.end(),
                                  std::back_inserter(next));
            clique.push_back(w);
            extend(next);
            clique.pop_back();
        }
    }
};

}  // namespace

RipsWindow RipsWindow::build(std::shared_ptr<const CayleyBall> ball, const RipsOptions& opts)
{
    require(ball != nullptr, ErrorCode::InvalidArgument, "Rips window needs a ball");
    require(opts.t >= 1, ErrorCode::InvalidArgument, "Rips scale t must be at least 1");
    if (opts.max_dim < 1 || opts.max_dim >= kMaxSimplexSize)
        fail(ErrorCode::InvalidArgument, "max_dim must lie in [1, " + std::to_string(kMaxSimplexSize - 1) + "]");

    RipsWindow W;
    W.ball_ = std::move(ball);
    W.opts_ = opts;
    const CayleyBall& B = *W.ball_;

    // Every pair at distance < t (or <= t) is u, u*g with g in the ball of that radius.
    const int reach = opts.closed ? opts.t : opts.t - 1;
    std::vector<std::vector<int>> higher(B.size());
    if (reach >= 1) {
        CayleyBall offsets = CayleyBall::enumerate(B.presentation(), reach);
        for (std::size_t u = 0; u < B.size(); ++u) {
            auto& nb = higher[u];
            for (std::size_t g = 1; g < offsets.size(); ++g) {
                auto v = B.find(concat(B.element(u), offsets.element(g)));
                if (v && *v > u)
                    nb.push_back(static_cast<int>(*v));
            }
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
    }

    ComplexBuilder builder(opts.max_dim);
    CliqueEnumerator cliques{higher, opts.max_dim + 1, opts.simplex_cap, builder, 0, {}};
    for (std::size_t v = 0; v < B.size(); ++v) {
        cliques.clique = {static_cast<int>(v)};
        cliques.extend(higher[v]);
    }
    W.complex_ = std::move(builder).build();
    return W;
}

int RipsWindow::max_dist(const Simplex& s) const
{
    int d = 0;
    for (int v : s)
        d = std::max(d, vertex_dist(v));
    return d;
}

int RipsWindow::min_dist(const Simplex& s) const
{
    int d = vertex_dist(s[0]);
    for (int v : s)
        d = std::min(d, vertex_dist(v));
    return d;
}

std::string radial_kind_name(RadialKind k)
{
    switch (k) {
    case RadialKind::OpenBall: return "B";
    case RadialKind::Sphere: return "S";
    case RadialKind::ClosedBall: return "Bbar";
    case RadialKind::Complement: return "Complement";
    }
    return "?";
}

RadialSubcomplex radial_subcomplex(const RipsWindow& W, RadialKind kind, int n, int margin)
{
    if (n < 0 || n >= W.radius())
        fail(ErrorCode::OutOfWindow,
             "radial index " + std::to_string(n) + " must lie in [0, R) with R = " + std::to_string(W.radius()));
    if (kind == RadialKind::Complement)
        if (n > W.radius() - margin)
            fail(ErrorCode::OutOfWindow,
                 "Complement(" + std::to_string(n) + ") is not certified: needs n <= R - margin = " +
                 std::to_string(W.radius() - margin));
    auto keep = [&](int v) {
        const int d = W.vertex_dist(v);
        switch (kind) {
        case RadialKind::OpenBall: return d < n;
        case RadialKind::Sphere: return d == n;
        case RadialKind::ClosedBall: return d <= n;
        case RadialKind::Complement: return d > n;
        }
        return false;
    };
    return RadialSubcomplex{kind, n, W.complex().full_subcomplex(keep)};
}

namespace {

const VertexMap kIdentity = [](int v) { return v; };

}  // namespace

std::size_t induced_map_rank(const RipsWindow& W, int i, int m, int n, const PrimeField& f, int margin)
{
    require(m > n, ErrorCode::InvalidArgument, "induced_map_rank needs m > n");
    if (i < 0 || i + 1 > W.options().max_dim)
        fail(ErrorCode::InvalidArgument,
             "homology degree " + std::to_string(i) + " needs max_dim >= " + std::to_string(i + 1));
    auto src = radial_subcomplex(W, RadialKind::Complement, m, margin);
    auto dst = radial_subcomplex(W, RadialKind::Complement, n, margin);
    HomologyContext hs(src.complex, f), hd(dst.complex, f);
    return induced_rank(hs, hd, i, kIdentity);
}

EndsEstimate ends_estimate(const RipsWindow& W, const PrimeField& f, int margin)
{
    EndsEstimate E;
    E.margin = margin;
    const int deepest = W.radius() - margin;
    require(deepest >= 1, ErrorCode::OutOfWindow, "window too small for an ends estimate: R - margin must be >= 1");
    auto src = radial_subcomplex(W, RadialKind::Complement, deepest, margin);
    HomologyContext hs(src.complex, f);
    for (int j = 0; j < deepest; ++j) {
        auto dst = radial_subcomplex(W, RadialKind::Complement, j, margin);
        E.counts.push_back(component_count(dst.complex));
        HomologyContext hd(dst.complex, f);
        E.image_ranks.push_back(induced_rank(hs, hd, 0, kIdentity));
    }
    E.growing = E.counts.size() >= 2;
    for (std::size_t j = 1; j < E.counts.size(); ++j)
        E.growing = E.growing && E.counts[j] > E.counts[j - 1];
    const std::size_t tail = std::min<std::size_t>(3, E.image_ranks.size());
    bool flat = tail > 0;
    for (std::size_t j = E.image_ranks.size() - tail; j + 1 < E.image_ranks.size(); ++j)
        flat = flat && E.image_ranks[j] == E.image_ranks[j + 1];
    if (flat && !E.growing)
        E.stable = E.image_ranks.back();
    return E;
}

TowerReport tower_report(const RipsWindow& W, int i, const PrimeField& f, int margin, int first)
{
    if (i < 0 || i + 1 > W.options().max_dim)
        fail(ErrorCode::InvalidArgument,
             "homology degree " + std::to_string(i) + " needs max_dim >= " + std::to_string(i + 1));
    TowerReport T;
    T.degree = i;
    T.margin = margin;
    T.first = first;
    T.last = W.radius() - margin;
    if (first < 0 || T.last <= first)
        fail(ErrorCode::OutOfWindow, "window too small for a tower: need R - margin > " + std::to_string(first));

    std::vector<std::unique_ptr<RadialSubcomplex>> subs;
    std::vector<std::unique_ptr<HomologyContext>> ctx;
    for (int n = first; n <= T.last; ++n) {
        subs.push_back(std::make_unique<RadialSubcomplex>(radial_subcomplex(W, RadialKind::Complement, n, margin)));
        ctx.push_back(std::make_unique<HomologyContext>(subs.back()->complex, f));
        T.complement_betti.push_back(ctx.back()->betti(i));
        T.complement_simplices.push_back(subs.back()->complex.total());
    }
    for (int n = first; n <= T.last; ++n) {
        bool trivial = false;
        for (int m = n + 1; m <= T.last; ++m) {
            auto& src = *ctx[static_cast<std::size_t>(m - first)];
            auto& dst = *ctx[static_cast<std::size_t>(n - first)];
            std::size_t r = induced_rank(src, dst, i, kIdentity);
            T.entries.push_back({m, n, r});
            trivial = trivial || r == 0;
        }
        if (n < T.last)
            T.verdicts.push_back({n, trivial});
    }
    return T;
}

}  // namespace hinf
