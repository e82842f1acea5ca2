#include "hinf/filling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hinf {

namespace {

Chain filter(const RipsWindow& W, const Chain& c, const std::function<bool(int)>& keep_max_dist)
{
    Chain out{c.dim, {}};
    for (const auto& e : c.terms)
        if (keep_max_dist(W.max_dist(W.complex().simplex(c.dim, e.index))))
            out.terms.push_back(e);
    return out;
}

bool agree_on_open_ball(const RipsWindow& W, const Chain& a, const Chain& b, int r)
{
    return restrict_open(W, a, r) == restrict_open(W, b, r);
}

int least_boundary_radius(const RipsWindow& W, const Chain& dc)
{
    int r = W.radius() + 1;
    for (const auto& e : dc.terms)
        r = std::min(r, W.max_dist(W.complex().simplex(dc.dim, e.index)));
    return r;
}

}  // namespace

LFCycleWindow::LFCycleWindow(const RipsWindow& W, int i, Chain c, const PrimeField& f, std::optional<int> certified_region)
    : W_(&W), i_(i), c_(std::move(c)), f_(f), rc_(0)
{
    require(i >= 0, ErrorCode::InvalidArgument, "degree must be nonnegative");
    if (c_.dim != i + 1)
        fail(ErrorCode::InvalidArgument,
             "locally finite cycle of degree " + std::to_string(i) + " must be an " + std::to_string(i + 1) + "-chain");
    for (const auto& e : c_.terms)
        require(e.index < W.complex().count(c_.dim) && e.value != 0 && e.value < f.p(), ErrorCode::InvalidArgument,
                "chain term out of range");
    const int auto_rc = least_boundary_radius(W, boundary(W.complex(), c_, f));
    rc_ = certified_region.value_or(auto_rc);
    if (rc_ > auto_rc)
        fail(ErrorCode::NotACycle,
             "boundary of c is nonzero inside B(" + std::to_string(rc_) + "); it vanishes only inside B(" +
             std::to_string(auto_rc) + ")");
}

Chain restrict_closed(const RipsWindow& W, const Chain& c, int n)
{
    return filter(W, c, [n](int d) { return d <= n; });
}

Chain restrict_open(const RipsWindow& W, const Chain& c, int k)
{
    return filter(W, c, [k](int d) { return d < k; });
}

Chain restrict(const LFCycleWindow& c, int n)
{
    if (n < 0 || n > c.window().radius())
        fail(ErrorCode::OutOfWindow, "restriction radius " + std::to_string(n) + " exceeds the window");
    return restrict_closed(c.window(), c.chain(), n);
}

SphereBoundary boundary_near_sphere(const LFCycleWindow& c, int n)
{
    const RipsWindow& W = c.window();
    SphereBoundary out;
    out.z = boundary(W.complex(), restrict(c, n), c.field());
    bool first = true;
    for (const auto& e : out.z.terms) {
        const Simplex& s = W.complex().simplex(out.z.dim, e.index);
        const int lo = W.min_dist(s), hi = W.max_dist(s);
        out.min_dist = first ? lo : std::min(out.min_dist, lo);
        out.max_dist = first ? hi : std::max(out.max_dist, hi);
        first = false;
        if (lo < n - W.t() || hi > n)
            fail(ErrorCode::LocalityViolation,
                 "boundary of the restriction to closed B(" + std::to_string(n) + ") has simplex " + s.to_string() +
                 " with vertex distances in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                 "], outside [n - t, n]");
    }
    return out;
}

std::optional<Chain> fill_outside(const Chain& z, const RipsWindow& W, int support_radius, const PrimeField& f)
{
    const auto& K = W.complex();
    std::vector<bool> support(K.count(z.dim + 1));
    for (std::size_t j = 0; j < support.size(); ++j)
        support[j] = W.min_dist(K.simplex(z.dim + 1, j)) > support_radius;
    return solve_boundary(z, K, f, &support);
}

std::string fill_status_name(FillStatus s)
{
    switch (s) {
    case FillStatus::Ok: return "ok";
    case FillStatus::OuterInfeasible: return "outer-infeasible";
    case FillStatus::InnerInfeasible: return "inner-infeasible";
    }
    return "?";
}

FillStep assemble_and_fill(const LFCycleWindow& c, int n, int m, int margin)
{
    const RipsWindow& W = c.window();
    const PrimeField& f = c.field();
    require(n >= 0, ErrorCode::InvalidArgument, "n must be nonnegative");
    if (m <= n + W.t())
        fail(ErrorCode::InvalidArgument, "assemble_and_fill needs m > n + t");
    if (m > W.radius() - margin)
        fail(ErrorCode::OutOfWindow,
             "outer radius " + std::to_string(m) + " exceeds R - margin = " + std::to_string(W.radius() - margin));

    FillStep step;
    step.n = n;
    step.m = m;
    step.tried.push_back(m);
    step.restriction = restrict(c, m);
    const Chain z = boundary(W.complex(), step.restriction, f);
    auto outer = fill_outside(z, W, n + W.t(), f);
    if (!outer) {
        step.status = FillStatus::OuterInfeasible;
        return step;
    }
    step.outer = std::move(*outer);
    step.outer_avoids_inner_ball = restrict_closed(W, step.outer, n + W.t()).is_zero();
    {
        const Chain inner = n >= 1 ? restrict(c, n - 1) : Chain{c.chain().dim, {}};
        std::size_t a = 0, b = 0;
        bool disjoint = true;
        while (a < step.outer.terms.size() && b < inner.terms.size()) {
            if (step.outer.terms[a].index == inner.terms[b].index) {
                disjoint = false;
                break;
            }
            (step.outer.terms[a].index < inner.terms[b].index) ? ++a : ++b;
        }
        step.outer_avoids_restriction = disjoint;
    }
    step.c_n = subtract(step.outer, step.restriction, f);
    require(boundary(W.complex(), step.c_n, f).is_zero(), ErrorCode::Internal,
            "assembled c_n is not a cycle; outer filling and restriction disagree on their boundary");
    auto b = solve_boundary(step.c_n, W.complex(), f);
    if (!b) {
        step.status = FillStatus::InnerInfeasible;
        return step;
    }
    step.b_n = std::move(*b);
    require(boundary(W.complex(), step.b_n, f) == step.c_n, ErrorCode::Internal, "filling of c_n failed verification");
    step.status = FillStatus::Ok;
    return step;
}

FillStep fill_with_scan(const LFCycleWindow& c, int n, int margin)
{
    const RipsWindow& W = c.window();
    const int lo = n + W.t() + 1, hi = W.radius() - margin;
    if (lo > hi)
        fail(ErrorCode::OutOfWindow,
             "no outer radius available for n = " + std::to_string(n) + ": needs n + t + 1 <= R - margin");
    std::vector<int> tried;
    FillStep step;
    for (int m = lo; m <= hi; ++m) {
        step = assemble_and_fill(c, n, m, margin);
        tried.push_back(m);
        if (step.status != FillStatus::OuterInfeasible)
            break;
    }
    step.tried = std::move(tried);
    return step;
}

FillingScanReport stabilization_scan(const LFCycleWindow& c, const std::vector<int>& schedule,
                                     const std::vector<int>& inner_radii, int margin)
{
    const RipsWindow& W = c.window();
    const PrimeField& f = c.field();
    require(!schedule.empty(), ErrorCode::InvalidArgument, "empty schedule");
    require(std::adjacent_find(schedule.begin(), schedule.end(), std::greater_equal<>()) == schedule.end(),
            ErrorCode::InvalidArgument, "schedule must be strictly increasing");
    std::vector<int> ks = inner_radii;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    for (int k : ks)
        require(k >= 0 && k <= W.radius(), ErrorCode::OutOfWindow, "inner radius out of window");

    FillingScanReport R;
    R.degree = c.degree();
    R.margin = margin;
    R.certified_region = c.certified_region();
    for (int n : schedule)
        R.steps.push_back(fill_with_scan(c, n, margin));

    std::vector<std::size_t> ok;
    for (std::size_t j = 0; j < R.steps.size(); ++j)
        if (R.steps[j].status == FillStatus::Ok)
            ok.push_back(j);
    R.obstructed = ok.empty();

    std::vector<std::size_t> pool = ok;
    bool all_verified = !ks.empty() && !ok.empty();
    const int top = c.degree() + 2;
    for (int k : ks) {
        InnerRadiusScan S;
        S.k = k;
        S.class_of.assign(R.steps.size(), -1);
        std::vector<Chain> reps;
        for (std::size_t j : ok) {
            Chain r = restrict_open(W, R.steps[j].b_n, k);
            auto it = std::find(reps.begin(), reps.end(), r);
            S.class_of[j] = static_cast<int>(it - reps.begin());
            if (it == reps.end())
                reps.push_back(std::move(r));
        }
        S.distinct = reps.size();

        std::size_t cells = 0;
        if (top <= W.complex().top_dim())
            for (const auto& s : W.complex().simplices(top))
                cells += W.max_dist(s) < k;
        S.pigeonhole_ok = cells >= 64 || static_cast<double>(S.distinct) <= std::pow(double(f.p()), double(cells));
        if (!S.pigeonhole_ok)
            fail(ErrorCode::Internal, "pigeonhole bound violated at k = " + std::to_string(k));

        for (std::size_t j = 0; j < R.steps.size();) {
            if (S.class_of[j] < 0) {
                ++j;
                continue;
            }
            std::size_t e = j + 1;
            while (e < R.steps.size() && S.class_of[e] == S.class_of[j])
                ++e;
            if (e - j > S.run_length) {
                S.run_start = j;
                S.run_length = e - j;
            }
            j = e;
        }

        // Nested choice: the most frequent class within the previous selection.
        std::map<int, std::size_t> freq;
        for (std::size_t j : pool)
            ++freq[S.class_of[j]];
        int best = -1;
        std::size_t best_count = 0;
        for (std::size_t j : pool) {
            const int cl = S.class_of[j];
            if (freq[cl] > best_count) {
                best = cl;
                best_count = freq[cl];
            }
        }
        for (std::size_t j : pool)
            if (S.class_of[j] == best)
                S.selected.push_back(j);
        pool = S.selected;

        if (!S.selected.empty()) {
            const Chain bk = negate(restrict_open(W, R.steps[S.selected.front()].b_n, k), f);
            S.verified = agree_on_open_ball(W, boundary(W.complex(), bk, f), c.chain(), k - W.t());
        }
        all_verified = all_verified && S.verified;
        R.inner.push_back(std::move(S));
    }

    if (!ks.empty() && !pool.empty()) {
        const int kmax = ks.back();
        R.b = negate(restrict_open(W, R.steps[pool.front()].b_n, kmax), f);
        const Chain db = boundary(W.complex(), *R.b, f);
        int r = -1;
        for (int q = 0; q <= kmax; ++q) {
            if (!agree_on_open_ball(W, db, c.chain(), q))
                break;
            r = q;
        }
        if (r >= 0)
            R.verification_radius = r;
        if (all_verified)
            R.claimed_radius = kmax - W.t();
    }
    return R;
}

namespace {

Word power(int generator, int j)
{
    return Word(static_cast<std::size_t>(std::abs(j)), j >= 0 ? generator : -generator);
}

void add_edge(const RipsWindow& W, SparseVec& terms, std::size_t u, std::size_t v, const PrimeField& f)
{
    const int a = static_cast<int>(std::min(u, v)), b = static_cast<int>(std::max(u, v));
    auto idx = W.complex().index_of(Simplex{a, b});
    if (!idx.has_value())
        fail(ErrorCode::InvalidArgument,
             "path step between elements " + std::to_string(u) + " and " + std::to_string(v) + " is not a Rips edge");
    axpy(terms, u < v ? 1 : f.neg(1), SparseVec{{*idx, 1}}, f);
}

}  // namespace

Chain path_chain(const RipsWindow& W, const std::vector<Word>& path, const PrimeField& f)
{
    Chain c{1, {}};
    std::vector<std::size_t> ids;
    for (const auto& w : path) {
        auto id = W.ball().find(w);
        if (!id.has_value())
            fail(ErrorCode::OutOfWindow, "path element " + format_word(w, W.ball().presentation()) +
                 " lies outside the window");
        ids.push_back(*id);
    }
    for (std::size_t j = 0; j + 1 < ids.size(); ++j)
        add_edge(W, c.terms, ids[j], ids[j + 1], f);
    return c;
}

Chain axis_chain(const RipsWindow& W, int generator, const PrimeField& f)
{
    require(generator >= 1 && generator <= W.ball().presentation().rank(), ErrorCode::InvalidArgument,
            "generator index out of range");
    Chain c{1, {}};
    const int R = W.radius();
    for (int j = -R; j < R; ++j) {
        auto u = W.ball().find(power(generator, j));
        auto v = W.ball().find(power(generator, j + 1));
        if (u && v)
            add_edge(W, c.terms, *u, *v, f);
    }
    return c;
}

Chain square_loop(const RipsWindow& W, int r, const PrimeField& f)
{
    require(r >= 1, ErrorCode::InvalidArgument, "square half-width must be positive");
    require(W.ball().presentation().rank() >= 2, ErrorCode::InvalidArgument, "square loop needs two generators");
    auto at = [](int x, int y) { return concat(power(1, x), power(2, y)); };
    std::vector<Word> path;
    for (int x = -r; x < r; ++x)
        path.push_back(at(x, -r));
    for (int y = -r; y < r; ++y)
        path.push_back(at(r, y));
    for (int x = r; x > -r; --x)
        path.push_back(at(x, r));
    for (int y = r; y > -r; --y)
        path.push_back(at(-r, y));
    path.push_back(at(-r, -r));
    return path_chain(W, path, f);
}

}  // namespace hinf
