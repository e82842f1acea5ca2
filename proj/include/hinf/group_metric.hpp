#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hinf/errors.hpp"

namespace hinf {

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a(std::string_view s);

/// Signed generator indices: +k is the k-th generator (1-based), -k its inverse.
using Word = std::vector<int>;

enum class Strategy { FreeReduction, AbelianNormalForm, DehnRewriting };

std::string_view strategy_name(Strategy s) noexcept;

struct GroupPresentation {
    std::vector<std::string> generators;
    std::vector<Word> relators;
    Strategy strategy = Strategy::FreeReduction;

    int rank() const noexcept { return static_cast<int>(generators.size()); }
    /// Stable text form; two presentations with the same canonical text are identical.
    std::string canonical_text() const;
    /// FNV-1a 64 of canonical_text().
    std::uint64_t hash() const;
};

/// Parses the presentation text format:
///
///     gens a b c d
///     relators [a,b][c,d]
///     strategy dehn
///
/// Statements are separated by newlines or ';', '#' starts a comment. Words are
/// juxtaposed symbols (a letter followed by optional digits); a trailing ' inverts,
/// ^k raises to an integer power, [u,v] is u v u' v', parentheses group, and 1
/// denotes the empty word. `relators (none)` is accepted for an empty list.
/// Without an explicit strategy: no relators means free; relators that are exactly
/// the commutators of all generator pairs mean abelian; anything else means dehn.
GroupPresentation parse_presentation(std::string_view text);

/// Builtin presentations: Z, Z2, F2, F3, surface2.
GroupPresentation builtin_presentation(std::string_view name);

Word parse_word(std::string_view text, const GroupPresentation& p);
std::string format_word(const Word& w, const GroupPresentation& p);

Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
Word free_reduce(const Word& w);

/// Solves the word problem in the way the presentation's strategy allows.
///
/// FreeReduction and AbelianNormalForm return unique normal forms. DehnRewriting
/// applies Dehn's algorithm (replace more than half of a symmetrized relator by the
/// shorter complement until nothing applies); the result is length-reduced and is
/// the empty word exactly when the input is trivial, provided the presentation is
/// a Dehn presentation. Distinct reduced words may still name the same element, so
/// equality goes through `equal`.
class WordProblem {
public:
    explicit WordProblem(const GroupPresentation& p);

    Word canonicalize(const Word& w) const;
    bool equal(const Word& a, const Word& b) const;
    bool is_identity(const Word& w) const { return canonicalize(w).empty(); }
    const GroupPresentation& presentation() const noexcept { return p_; }

    /// A homomorphism to Z^j: exponent sums of the generators whose exponent sum
    /// vanishes in every relator. Equal elements share it, so it serves as a hash.
    std::vector<int> invariant(const Word& w) const;

private:
    Word dehn_reduce(Word w) const;

    GroupPresentation p_;
    std::vector<Word> symmetrized_;
    std::vector<int> free_coordinates_;
};

inline constexpr std::size_t kDefaultVertexCap = 200000;

/// The closed ball of radius R about the identity in the Cayley graph, found by BFS.
/// Element 0 is the identity and elements are ordered by distance (BFS order).
class CayleyBall {
public:
    static CayleyBall enumerate(const GroupPresentation& p, int radius, std::size_t vertex_cap = kDefaultVertexCap);

    int radius() const noexcept { return radius_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const Word& element(std::size_t i) const { return elements_.at(i); }
    int dist(std::size_t i) const { return dist_.at(i); }
    std::span<const int> distances() const noexcept { return dist_; }
    std::size_t sphere_size(int n) const;

    /// 2k entries per element: neighbor by generator +1, -1, +2, -2, ...; -1 if outside.
    std::span<const std::int32_t> neighbors(std::size_t i) const;
    std::span<const std::int32_t> adjacency() const noexcept { return adjacency_; }

    /// Index of the element named by an arbitrary word, if it lies in the ball.
    std::optional<std::size_t> find(const Word& w) const;

    const GroupPresentation& presentation() const noexcept { return wp_.presentation(); }
    const WordProblem& word_problem() const noexcept { return wp_; }

    /// Rebuilds a ball from stored data (used by the cache). Validates shape only.
    static CayleyBall from_parts(const GroupPresentation& p, int radius, std::vector<Word> elements,
                                 std::vector<int> dist, std::vector<std::int32_t> adjacency);

    friend bool operator==(const CayleyBall& a, const CayleyBall& b)
    {
        return a.radius_ == b.radius_ && a.elements_ == b.elements_ && a.dist_ == b.dist_ && a.adjacency_ == b.adjacency_;
    }

private:
    explicit CayleyBall(const GroupPresentation& p) : wp_(p) {}
    void index_element(std::size_t i);
    std::optional<std::size_t> lookup_canonical(const Word& c, int lo, int hi) const;

    WordProblem wp_;
    int radius_ = 0;
    std::vector<Word> elements_;
    std::vector<int> dist_;
    std::vector<std::int32_t> adjacency_;
    // unique normal forms (free/abelian)
    std::unordered_map<std::string, std::size_t> by_key_;
    // Dehn: elements bucketed by homomorphism invariant
    std::unordered_map<std::string, std::vector<std::size_t>> buckets_;
};

/// Word metric distance between two ball elements.
/// Free and abelian strategies read the length of the normal form of u^-1 v.
/// Under Dehn rewriting the distance is certified only when u^-1 v itself lies in
/// the ball (then its BFS distance is exact); otherwise the result is nullopt.
std::optional<int> pair_distance(const CayleyBall& ball, std::size_t u, std::size_t v);

}  // namespace hinf
