#include "hinf/complex.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace hinf {

// ---------------------------------------------------------------------------
// Simplex

Simplex Simplex::from_sorted(std::span<const int> vs)
{
    if (vs.empty() || vs.size() > static_cast<std::size_t>(kMaxSimplexSize))
        fail(ErrorCode::InvalidArgument,
             "simplex must have between 1 and " + std::to_string(kMaxSimplexSize) + " vertices");
    Simplex s;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        require(i == 0 || vs[i - 1] < vs[i], ErrorCode::InvalidArgument, "simplex vertices must be strictly ascending");
        s.v_[i] = vs[i];
    }
    s.n_ = static_cast<std::uint8_t>(vs.size());
    return s;
}

Simplex Simplex::from_unsorted(std::span<const int> vs)
{
    std::array<int, kMaxSimplexSize> tmp{};
    require(!vs.empty() && vs.size() <= tmp.size(), ErrorCode::InvalidArgument, "simplex has too many vertices");
    std::copy(vs.begin(), vs.end(), tmp.begin());
    std::sort(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(vs.size()));
    return from_sorted(std::span<const int>(tmp.data(), vs.size()));
}

bool Simplex::contains(int label) const noexcept
{
    return std::binary_search(begin(), end(), label);
}

Simplex Simplex::face(int i) const noexcept
{
    Simplex s;
    int k = 0;
    for (int j = 0; j < n_; ++j)
        if (j != i)
            s.v_[static_cast<std::size_t>(k++)] = v_[static_cast<std::size_t>(j)];
    s.n_ = static_cast<std::uint8_t>(k);
    return s;
}

std::string Simplex::to_string() const
{
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < n_; ++i)
        os << (i ? "," : "") << v_[static_cast<std::size_t>(i)];
    os << ']';
    return os.str();
}

// ---------------------------------------------------------------------------
// Sparse vectors and chains

void axpy(SparseVec& y, Coeff a, const SparseVec& x, const PrimeField& f)
{
    if (a == 0 || x.empty())
        return;
    SparseVec out;
    out.reserve(y.size() + x.size());
    auto i = y.begin();
    auto j = x.begin();
    while (i != y.end() || j != x.end()) {
        if (j == x.end() || (i != y.end() && i->index < j->index)) {
            out.push_back(*i++);
        } else if (i == y.end() || j->index < i->index) {
            out.push_back({j->index, f.mul(a, j->value)});
            ++j;
        } else {
            Coeff v = f.add(i->value, f.mul(a, j->value));
            if (v != 0)
                out.push_back({i->index, v});
            ++i;
            ++j;
        }
    }
    y.swap(out);
}

SparseVec scaled(const SparseVec& x, Coeff a, const PrimeField& f)
{
    SparseVec out;
    if (a == 0)
        return out;
    out.reserve(x.size());
    for (const auto& e : x)
        out.push_back({e.index, f.mul(a, e.value)});
    return out;
}

Coeff Chain::coeff(std::uint32_t index) const noexcept
{
    auto it = std::lower_bound(terms.begin(), terms.end(), index,
                               [](const Entry& e, std::uint32_t i) { return e.index < i; });
    return (it != terms.end() && it->index == index) ? it->value : 0;
}

Chain add(const Chain& a, const Chain& b, const PrimeField& f)
{
    require(a.dim == b.dim || a.is_zero() || b.is_zero(), ErrorCode::InvalidArgument, "adding chains of different dimension");
    Chain out{a.is_zero() ? b.dim : a.dim, a.terms};
    axpy(out.terms, 1, b.terms, f);
    return out;
}

Chain subtract(const Chain& a, const Chain& b, const PrimeField& f)
{
    require(a.dim == b.dim || a.is_zero() || b.is_zero(), ErrorCode::InvalidArgument, "subtracting chains of different dimension");
    Chain out{a.is_zero() ? b.dim : a.dim, a.terms};
    axpy(out.terms, f.neg(1), b.terms, f);
    return out;
}

Chain negate(const Chain& a, const PrimeField& f)
{
    return Chain{a.dim, scaled(a.terms, f.neg(1), f)};
}

// ---------------------------------------------------------------------------
// SimplicialComplex

std::size_t SimplicialComplex::count(int dim) const noexcept
{
    if (dim < 0 || dim > top_dim())
        return 0;
    return by_dim_[static_cast<std::size_t>(dim)].size();
}

std::size_t SimplicialComplex::total() const noexcept
{
    std::size_t n = 0;
    for (const auto& v : by_dim_)
        n += v.size();
    return n;
}

std::span<const Simplex> SimplicialComplex::simplices(int dim) const noexcept
{
    if (dim < 0 || dim > top_dim())
        return {};
    return by_dim_[static_cast<std::size_t>(dim)];
}

std::optional<std::uint32_t> SimplicialComplex::index_of(const Simplex& s) const noexcept
{
    auto all = simplices(s.dim());
    auto it = std::lower_bound(all.begin(), all.end(), s);
    if (it == all.end() || !(*it == s))
        return std::nullopt;
    return static_cast<std::uint32_t>(it - all.begin());
}

SimplicialComplex SimplicialComplex::full_subcomplex(const std::function<bool(int)>& keep) const
{
    SimplicialComplex out;
    std::vector<char> kept_vertex;
    int max_label = 0;
    for (const auto& v : simplices(0))
        max_label = std::max(max_label, v[0]);
    kept_vertex.resize(static_cast<std::size_t>(max_label) + 1, 0);
    for (const auto& v : simplices(0))
        kept_vertex[static_cast<std::size_t>(v[0])] = keep(v[0]) ? 1 : 0;

    for (int d = 0; d <= top_dim(); ++d) {
        std::vector<Simplex> layer;
        for (const auto& s : simplices(d))
            if (std::all_of(s.begin(), s.end(), [&](int v) { return kept_vertex[static_cast<std::size_t>(v)] != 0; }))
                layer.push_back(s);
        if (layer.empty())
            break;
        out.by_dim_.push_back(std::move(layer));
    }
    return out;
}

// ---------------------------------------------------------------------------
// ComplexBuilder

ComplexBuilder::ComplexBuilder(int max_dim) : max_dim_(max_dim)
{
    if (max_dim < 0 || max_dim >= kMaxSimplexSize)
        fail(ErrorCode::InvalidArgument, "max dimension must lie in [0, " + std::to_string(kMaxSimplexSize - 1) + "]");
}

void ComplexBuilder::add(const Simplex& s)
{
    if (s.dim() > max_dim_)
        return;
    if (by_dim_.size() <= static_cast<std::size_t>(s.dim()))
        by_dim_.resize(static_cast<std::size_t>(s.dim()) + 1);
    by_dim_[static_cast<std::size_t>(s.dim())].push_back(s);
}

void ComplexBuilder::add_with_faces(const Simplex& s)
{
    const int n = s.size();
    std::array<int, kMaxSimplexSize> buf{};
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        int k = 0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i))
                buf[static_cast<std::size_t>(k++)] = s[i];
        if (k - 1 > max_dim_)
            continue;
        add(Simplex::from_sorted(std::span<const int>(buf.data(), static_cast<std::size_t>(k))));
    }
}

SimplicialComplex ComplexBuilder::build() &&
{
    SimplicialComplex K;
    for (auto& layer : by_dim_) {
        std::sort(layer.begin(), layer.end());
        layer.erase(std::unique(layer.begin(), layer.end()), layer.end());
    }
    while (!by_dim_.empty() && by_dim_.back().empty())
        by_dim_.pop_back();
    K.by_dim_ = std::move(by_dim_);
    for (int d = 1; d <= K.top_dim(); ++d) {
        require(K.count(d - 1) > 0, ErrorCode::InvalidArgument, "complex is not closed under faces");
        for (const auto& s : K.simplices(d))
            for (int i = 0; i < s.size(); ++i)
                if (!K.index_of(s.face(i)))
                    fail(ErrorCode::InvalidArgument,
                         "complex is not closed under faces: missing face of " + s.to_string());
    }
    return K;
}

// ---------------------------------------------------------------------------
// Boundary operator

std::vector<std::pair<Simplex, Coeff>> boundary_terms(const Simplex& s, const PrimeField& f)
{
    require(s.dim() >= 1, ErrorCode::InvalidArgument, "boundary of a 0-simplex is not defined here");
    std::vector<std::pair<Simplex, Coeff>> out;
    for (int i = 0; i < s.size(); ++i)
        out.emplace_back(s.face(i), f.sign(i));
    return out;
}

namespace {

SparseVec boundary_column(const SimplicialComplex& K, const Simplex& s, const PrimeField& f)
{
    SparseVec col;
    col.reserve(static_cast<std::size_t>(s.size()));
    for (int i = 0; i < s.size(); ++i) {
        auto idx = K.index_of(s.face(i));
        if (!idx.has_value())
            fail(ErrorCode::Internal, "face missing from complex: " + s.face(i).to_string());
        col.push_back({*idx, f.sign(i)});
    }
    std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
    return col;
}

}  // namespace

Chain boundary_of_simplex(const SimplicialComplex& K, int dim, std::uint32_t idx, const PrimeField& f)
{
    require(dim >= 1, ErrorCode::InvalidArgument, "boundary of a 0-simplex is not defined here");
    return Chain{dim - 1, boundary_column(K, K.simplex(dim, idx), f)};
}

Chain boundary(const SimplicialComplex& K, const Chain& c, const PrimeField& f)
{
    Chain out{c.dim - 1, {}};
    if (c.dim == 0)
        return out;
    for (const auto& e : c.terms)
        axpy(out.terms, e.value, boundary_column(K, K.simplex(c.dim, e.index), f), f);
    return out;
}

BoundaryMatrix boundary_matrix(const SimplicialComplex& K, int n, const PrimeField& f)
{
    require(n >= 1, ErrorCode::InvalidArgument, "boundary matrix needs n >= 1");
    BoundaryMatrix M;
    M.n = n;
    M.rows = K.count(n - 1);
    M.cols = K.count(n);
    M.columns.reserve(M.cols);
    for (const auto& s : K.simplices(n))
        M.columns.push_back(boundary_column(K, s, f));
    return M;
}

// ---------------------------------------------------------------------------
// EchelonBasis

EchelonBasis::EchelonBasis(PrimeField f, bool track, const EchelonBasis* base) : f_(f), track_(track), base_(base)
{
    require(base == nullptr || !base->track_, ErrorCode::Internal, "tracked base basis is not supported");
}

const EchelonBasis::Pivot* EchelonBasis::find(std::uint32_t row) const noexcept
{
    if (row < slot_of_row_.size() && slot_of_row_[row] >= 0)
        return &pivots_[static_cast<std::size_t>(slot_of_row_[row])];
    return nullptr;
}

EchelonBasis::Reduction EchelonBasis::reduce(SparseVec v) const
{
    Reduction r;
    while (!v.empty()) {
        const Entry low = v.back();
        const Pivot* p = find(low.index);
        bool local = p != nullptr;
        if (!p && base_)
            p = base_->find(low.index);
        if (!p)
            break;
        axpy(v, f_.neg(low.value), p->vec, f_);
        if (track_ && local)
            axpy(r.combination, low.value, p->tag, f_);
    }
    r.residual = std::move(v);
    return r;
}

EchelonBasis::InsertResult EchelonBasis::insert(SparseVec v, SparseVec tag)
{
    auto red = reduce(std::move(v));
    InsertResult out;
    if (red.residual.empty()) {
        if (track_) {
            out.kernel = std::move(tag);
            axpy(out.kernel, f_.neg(1), red.combination, f_);
        }
        return out;
    }
    const Entry low = red.residual.back();
    const Coeff scale = f_.inv(low.value);
    Pivot p;
    p.vec = scaled(red.residual, scale, f_);
    if (track_) {
        p.tag = std::move(tag);
        axpy(p.tag, f_.neg(1), red.combination, f_);
        p.tag = scaled(p.tag, scale, f_);
    }
    if (slot_of_row_.size() <= low.index)
        slot_of_row_.resize(static_cast<std::size_t>(low.index) + 1, -1);
    slot_of_row_[low.index] = static_cast<std::int32_t>(pivots_.size());
    pivots_.push_back(std::move(p));
    out.independent = true;
    return out;
}

std::size_t rank_gf(std::span<const SparseVec> columns, const PrimeField& f)
{
    EchelonBasis E(f);
    for (const auto& c : columns)
        E.insert(c);
    return E.rank();
}

std::size_t betti(const SimplicialComplex& K, int n, const PrimeField& f)
{
    if (n < 0 || K.count(n) == 0)
        return 0;
    std::size_t rank_n = n >= 1 ? rank_gf(boundary_matrix(K, n, f).columns, f) : 0;
    std::size_t rank_up = K.count(n + 1) ? rank_gf(boundary_matrix(K, n + 1, f).columns, f) : 0;
    return K.count(n) - rank_n - rank_up;
}

std::vector<SparseVec> kernel_basis(std::span<const SparseVec> columns, const PrimeField& f)
{
    EchelonBasis E(f, true);
    std::vector<SparseVec> out;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        auto r = E.insert(columns[j], SparseVec{{static_cast<std::uint32_t>(j), 1}});
        if (!r.independent)
            out.push_back(std::move(r.kernel));
    }
    return out;
}

std::optional<Chain> solve_boundary(const Chain& z, const SimplicialComplex& K, const PrimeField& f,
                                    const std::vector<bool>* support)
{
    require(z.dim >= 0, ErrorCode::InvalidArgument, "chain dimension must be nonnegative");
    require(boundary(K, z, f).is_zero(), ErrorCode::NotACycle, "solve_boundary: input chain is not a cycle");
    const int n = z.dim;
    if (z.is_zero())
        return Chain{n + 1, {}};
    EchelonBasis E(f, true);
    std::size_t cols = K.count(n + 1);
    require(support == nullptr || support->size() == cols, ErrorCode::InvalidArgument, "support mask has the wrong size");
    for (std::uint32_t j = 0; j < cols; ++j) {
        if (support && !(*support)[j])
            continue;
        E.insert(boundary_column(K, K.simplex(n + 1, j), f), SparseVec{{j, 1}});
    }
    auto red = E.reduce(z.terms);
    if (!red.residual.empty())
        return std::nullopt;
    return Chain{n + 1, std::move(red.combination)};
}

// ---------------------------------------------------------------------------
// HomologyContext

const EchelonBasis& HomologyContext::boundaries(int n)
{
    auto it = boundaries_.find(n);
    if (it != boundaries_.end())
        return it->second;
    EchelonBasis E(f_);
    if (n + 1 >= 1)
        for (const auto& s : K_.simplices(n + 1))
            E.insert(boundary_column(K_, s, f_));
    return boundaries_.emplace(n, std::move(E)).first->second;
}

const std::vector<SparseVec>& HomologyContext::cycles(int n)
{
    auto it = cycles_.find(n);
    if (it != cycles_.end())
        return it->second;
    std::vector<SparseVec> z;
    if (n == 0) {
        for (std::uint32_t j = 0; j < K_.count(0); ++j)
            z.push_back(SparseVec{{j, 1}});
    } else if (K_.count(n) > 0) {
        z = kernel_basis(boundary_matrix(K_, n, f_).columns, f_);
    }
    return cycles_.emplace(n, std::move(z)).first->second;
}

const std::vector<SparseVec>& HomologyContext::homology_basis(int n)
{
    auto it = homology_.find(n);
    if (it != homology_.end())
        return it->second;
    const auto& B = boundaries(n);
    EchelonBasis E(f_, false, &B);
    std::vector<SparseVec> reps;
    for (const auto& z : cycles(n))
        if (E.insert(z).independent)
            reps.push_back(z);
    return homology_.emplace(n, std::move(reps)).first->second;
}

// ---------------------------------------------------------------------------
// Simplicial maps

Chain push_chain(const SimplicialComplex& src, const SimplicialComplex& dst, const Chain& c,
                 const VertexMap& vmap, const PrimeField& f)
{
    Chain out{c.dim, {}};
    std::array<int, kMaxSimplexSize> img{};
    for (const auto& e : c.terms) {
        const Simplex& s = src.simplex(c.dim, e.index);
        const int n = s.size();
        for (int i = 0; i < n; ++i)
            img[static_cast<std::size_t>(i)] = vmap(s[i]);
        // insertion sort, counting transpositions for the orientation sign
        int swaps = 0;
        bool degenerate = false;
        for (int i = 1; i < n; ++i)
            for (int j = i; j > 0 && img[static_cast<std::size_t>(j - 1)] >= img[static_cast<std::size_t>(j)]; --j) {
                if (img[static_cast<std::size_t>(j - 1)] == img[static_cast<std::size_t>(j)]) {
                    degenerate = true;
                    break;
                }
                std::swap(img[static_cast<std::size_t>(j - 1)], img[static_cast<std::size_t>(j)]);
                ++swaps;
            }
        if (degenerate)
            continue;
        Simplex t = Simplex::from_sorted(std::span<const int>(img.data(), static_cast<std::size_t>(n)));
        auto idx = dst.index_of(t);
        if (!idx.has_value())
            fail(ErrorCode::InvalidArgument,
                 "vertex map is not simplicial: image " + t.to_string() + " of " + s.to_string() + " is missing");
        Coeff v = swaps % 2 ? f.neg(e.value) : e.value;
        axpy(out.terms, 1, SparseVec{{*idx, v}}, f);
    }
    return out;
}

std::size_t induced_rank(HomologyContext& src, HomologyContext& dst, int n, const VertexMap& vmap)
{
    const auto& reps = src.homology_basis(n);
    if (reps.empty())
        return 0;
    const auto& f = dst.field();
    EchelonBasis E(f, false, &dst.boundaries(n));
    std::size_t rank = 0;
    for (const auto& z : reps) {
        Chain img = push_chain(src.complex(), dst.complex(), Chain{n, z}, vmap, f);
        if (E.insert(std::move(img.terms)).independent)
            ++rank;
    }
    return rank;
}

std::size_t component_count(const SimplicialComplex& K)
{
    const auto verts = K.simplices(0);
    std::vector<std::size_t> parent(verts.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t comps = verts.size();
    for (const auto& e : K.simplices(1)) {
        auto a = root(*K.index_of(Simplex{e[0]}));
        auto b = root(*K.index_of(Simplex{e[1]}));
        if (a != b) {
            parent[a] = b;
            --comps;
        }
    }
    return comps;
}

}  // namespace hinf
