#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hinf/field.hpp"

namespace hinf {

/// Upper bound on vertices per simplex (so dimension <= 7).
inline constexpr int kMaxSimplexSize = 8;

/// A simplex as a strictly ascending tuple of vertex labels, stored inline.
class Simplex {
public:
    Simplex() = default;
    Simplex(std::initializer_list<int> vs) : Simplex(from_sorted(std::span<const int>(vs.begin(), vs.size()))) {}

    static Simplex from_sorted(std::span<const int> vs);
    /// Sorts the labels; throws on duplicates.
    static Simplex from_unsorted(std::span<const int> vs);

    int size() const noexcept { return n_; }
    int dim() const noexcept { return n_ - 1; }
    int operator[](int i) const noexcept { return v_[static_cast<std::size_t>(i)]; }
    const int* begin() const noexcept { return v_.data(); }
    const int* end() const noexcept { return v_.data() + n_; }
    bool contains(int label) const noexcept;

    /// The face obtained by deleting the vertex in position i.
    Simplex face(int i) const noexcept;

    friend bool operator==(const Simplex& a, const Simplex& b) noexcept
    {
        return a.n_ == b.n_ && std::equal(a.begin(), a.end(), b.begin());
    }
    friend std::strong_ordering operator<=>(const Simplex& a, const Simplex& b) noexcept
    {
        if (a.n_ != b.n_)
            return a.n_ <=> b.n_;
        return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
    }

    std::string to_string() const;

private:
    std::array<int, kMaxSimplexSize> v_{};
    std::uint8_t n_ = 0;
};

struct Entry {
    std::uint32_t index;
    Coeff value;
    friend bool operator==(const Entry&, const Entry&) = default;
};

/// Sparse vector over GF(p): entries sorted by index, values nonzero.
using SparseVec = std::vector<Entry>;

/// y <- y + a*x
void axpy(SparseVec& y, Coeff a, const SparseVec& x, const PrimeField& f);
SparseVec scaled(const SparseVec& x, Coeff a, const PrimeField& f);

/// A chain of a fixed dimension, indexed by simplex position within its complex.
struct Chain {
    int dim = 0;
    SparseVec terms;

    bool is_zero() const noexcept { return terms.empty(); }
    Coeff coeff(std::uint32_t index) const noexcept;
    friend bool operator==(const Chain&, const Chain&) = default;
};

Chain add(const Chain& a, const Chain& b, const PrimeField& f);
Chain subtract(const Chain& a, const Chain& b, const PrimeField& f);
Chain negate(const Chain& a, const PrimeField& f);

/// Simplicial complex with simplices of each dimension sorted lexicographically.
/// The position of a simplex in that order is its canonical index, so indices do
/// not depend on insertion order.
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    /// Highest dimension with at least one simplex; -1 when empty.
    int top_dim() const noexcept { return static_cast<int>(by_dim_.size()) - 1; }
    std::size_t count(int dim) const noexcept;
    std::size_t num_vertices() const noexcept { return count(0); }
    std::size_t total() const noexcept;
    std::span<const Simplex> simplices(int dim) const noexcept;
    const Simplex& simplex(int dim, std::size_t idx) const { return by_dim_.at(static_cast<std::size_t>(dim)).at(idx); }
    std::optional<std::uint32_t> index_of(const Simplex& s) const noexcept;

    /// The full subcomplex on the vertices accepted by `keep`; labels are preserved.
    SimplicialComplex full_subcomplex(const std::function<bool(int)>& keep) const;

    friend bool operator==(const SimplicialComplex&, const SimplicialComplex&) = default;

private:
    friend class ComplexBuilder;
    std::vector<std::vector<Simplex>> by_dim_;
};

class ComplexBuilder {
public:
    explicit ComplexBuilder(int max_dim = kMaxSimplexSize - 1);

    /// Adds s alone. Faces must be supplied too; build() checks closure.
    void add(const Simplex& s);
    /// Adds s and all its faces, dropping anything above max_dim.
    void add_with_faces(const Simplex& s);
    SimplicialComplex build() &&;

private:
    int max_dim_;
    std::vector<std::vector<Simplex>> by_dim_;
};

/// Formal boundary of a simplex: sum_i (-1)^i s|_{v_i deleted}, coefficients in GF(p).
std::vector<std::pair<Simplex, Coeff>> boundary_terms(const Simplex& s, const PrimeField& f);

Chain boundary_of_simplex(const SimplicialComplex& K, int dim, std::uint32_t idx, const PrimeField& f);
/// Boundary of an arbitrary chain. The boundary of a 0-chain is the zero (-1)-chain.
Chain boundary(const SimplicialComplex& K, const Chain& c, const PrimeField& f);

struct BoundaryMatrix {
    int n = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<SparseVec> columns;
};

/// Matrix of d_n: columns are n-simplices, rows are (n-1)-simplices.
BoundaryMatrix boundary_matrix(const SimplicialComplex& K, int n, const PrimeField& f);

/// Incremental column echelon form over GF(p). Each stored vector is normalized
/// so that its largest index ("low") carries coefficient 1; reduction repeatedly
/// clears the current low against the pivot that owns it.
///
/// With tracking on, every stored vector remembers its expression in terms of
/// the tags of the inserted inputs, which yields kernel vectors and solutions.
/// A base basis can be layered underneath: its pivots take part in reduction
/// but are never modified (and must be untracked).
class EchelonBasis {
public:
    explicit EchelonBasis(PrimeField f, bool track = false, const EchelonBasis* base = nullptr);

    struct Reduction {
        SparseVec residual;
        SparseVec combination;  // sum of local tags used, weighted; empty unless tracking
    };
    Reduction reduce(SparseVec v) const;

    struct InsertResult {
        bool independent = false;
        SparseVec kernel;  // tag minus combination, when dependent and tracking
    };
    InsertResult insert(SparseVec v, SparseVec tag = {});

    std::size_t rank() const noexcept { return pivots_.size(); }
    const PrimeField& field() const noexcept { return f_; }

private:
    struct Pivot {
        SparseVec vec;
        SparseVec tag;
    };
    const Pivot* find(std::uint32_t row) const noexcept;

    PrimeField f_;
    bool track_;
    const EchelonBasis* base_;
    std::vector<Pivot> pivots_;
    std::vector<std::int32_t> slot_of_row_;
};

std::size_t rank_gf(std::span<const SparseVec> columns, const PrimeField& f);
std::size_t betti(const SimplicialComplex& K, int n, const PrimeField& f);

/// Kernel basis of a column set; kernel vectors are indexed by column.
std::vector<SparseVec> kernel_basis(std::span<const SparseVec> columns, const PrimeField& f);

/// Finds x with boundary(x) = z, using only (n+1)-simplices allowed by `support`
/// (indexed like K's (n+1)-simplices; null means all). Returns nullopt when no
/// solution exists inside the support. Throws NotACycle if z is not a cycle.
std::optional<Chain> solve_boundary(const Chain& z, const SimplicialComplex& K, const PrimeField& f,
                                    const std::vector<bool>* support = nullptr);

/// Lazily computed boundary spans, cycle bases and homology representatives
/// for one complex. Holds a reference: the complex must outlive the context.
class HomologyContext {
public:
    HomologyContext(const SimplicialComplex& K, PrimeField f) : K_(K), f_(f) {}

    const SimplicialComplex& complex() const noexcept { return K_; }
    const PrimeField& field() const noexcept { return f_; }

    /// Span of the columns of d_{n+1} (the n-boundaries).
    const EchelonBasis& boundaries(int n);
    /// Basis of ker d_n.
    const std::vector<SparseVec>& cycles(int n);
    /// Cycles representing a basis of H_n.
    const std::vector<SparseVec>& homology_basis(int n);
    std::size_t betti(int n) { return homology_basis(n).size(); }

private:
    const SimplicialComplex& K_;
    PrimeField f_;
    std::map<int, EchelonBasis> boundaries_;
    std::map<int, std::vector<SparseVec>> cycles_;
    std::map<int, std::vector<SparseVec>> homology_;
};

using VertexMap = std::function<int(int)>;

/// Image of a chain under the simplicial map induced by `vmap`. Degenerate images
/// vanish; the sign of the vertex permutation is applied. Throws when an image
/// simplex is missing from `dst`.
Chain push_chain(const SimplicialComplex& src, const SimplicialComplex& dst, const Chain& c,
                 const VertexMap& vmap, const PrimeField& f);

/// Rank of H_n(src) -> H_n(dst) induced by vmap: push a homology basis of the
/// source forward and count how many stay independent modulo dst boundaries.
std::size_t induced_rank(HomologyContext& src, HomologyContext& dst, int n, const VertexMap& vmap);

/// Number of connected components (via union-find on the 1-skeleton).
std::size_t component_count(const SimplicialComplex& K);

}  // namespace hinf
