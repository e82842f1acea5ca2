#include "hinf/group_metric.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>

namespace hinf {

std::string_view strategy_name(Strategy s) noexcept
{
    switch (s) {
    case Strategy::FreeReduction: return "free";
    case Strategy::AbelianNormalForm: return "abelian";
    case Strategy::DehnRewriting: return "dehn";
    }
    return "?";
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

// ---------------------------------------------------------------------------
// Word parser

class WordParser {
public:
    WordParser(std::string_view text, const std::vector<std::string>& gens, int line, int column)
        : s_(text), gens_(gens), line_(line), col0_(column)
    {
    }

    Word parse_all()
    {
        Word w = parse_sequence();
        skip_space();
        if (pos_ != s_.size())
            error("unexpected '" + std::string(1, s_[pos_]) + "'");
        return w;
    }

private:
    [[noreturn]] void error(const std::string& msg) const
    {
        fail(ErrorCode::Parse, "line " + std::to_string(line_) + ", column " +
                                   std::to_string(col0_ + static_cast<int>(pos_)) + ": " + msg);
    }

    Word parse_sequence()
    {
        Word w;
        while (skip_space(), pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != ')') {
            Word f = parse_factor();
            w.insert(w.end(), f.begin(), f.end());
        }
        return w;
    }

    Word parse_factor()
    {
        Word base = parse_primary();
        while (pos_ < s_.size()) {
            if (s_[pos_] == '\'') {
                ++pos_;
                base = inverse(base);
            } else if (s_[pos_] == '^') {
                ++pos_;
                std::size_t start = pos_;
                if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+'))
                    ++pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    ++pos_;
                std::string num(s_.substr(start, pos_ - start));
                if (num.empty() || num == "-" || num == "+")
                    error("expected an integer exponent");
                long e = std::strtol(num.c_str(), nullptr, 10);
                if (std::labs(e) > 100000)
                    error("exponent too large");
                Word unit = e < 0 ? inverse(base) : base;
                Word out;
                for (long k = 0; k < std::labs(e); ++k)
                    out.insert(out.end(), unit.begin(), unit.end());
                base = std::move(out);
            } else {
                break;
            }
        }
        return base;
    }

    Word parse_primary()
    {
        char c = s_[pos_];
        if (c == '[') {
            ++pos_;
            Word u = parse_sequence();
            expect(',');
            Word v = parse_sequence();
            expect(']');
            Word out = u;
            out.insert(out.end(), v.begin(), v.end());
            Word ui = inverse(u), vi = inverse(v);
            out.insert(out.end(), ui.begin(), ui.end());
            out.insert(out.end(), vi.begin(), vi.end());
            return out;
        }
        if (c == '(') {
            ++pos_;
            Word u = parse_sequence();
            expect(')');
            return u;
        }
        if (c == '1') {
            ++pos_;
            return {};
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_++;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            std::string sym(s_.substr(start, pos_ - start));
            for (std::size_t g = 0; g < gens_.size(); ++g)
                if (gens_[g] == sym)
                    return Word{static_cast<int>(g) + 1};
            pos_ = start;
            error("unknown generator '" + sym + "'");
        }
        error("unexpected '" + std::string(1, c) + "'");
    }

    // Whitespace may separate factors; suffixes must follow their factor directly.
    void skip_space()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    void expect(char c)
    {
        skip_space();
        if (pos_ >= s_.size() || s_[pos_] != c)
            error(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string_view s_;
    const std::vector<std::string>& gens_;
    int line_;
    int col0_;
    std::size_t pos_ = 0;
};

bool valid_symbol(const std::string& s)
{
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
        return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

Word cyclic_reduce(Word w)
{
    w = free_reduce(w);
    std::size_t a = 0, b = w.size();
    while (b - a >= 2 && w[a] == -w[b - 1]) {
        ++a;
        --b;
    }
    return Word(w.begin() + static_cast<std::ptrdiff_t>(a), w.begin() + static_cast<std::ptrdiff_t>(b));
}

bool is_full_commutator_set(const GroupPresentation& p)
{
    const int k = p.rank();
    std::set<std::pair<int, int>> need;
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j)
            need.insert({i, j});
    std::set<std::pair<int, int>> seen;
    for (const auto& r : p.relators) {
        if (r.size() != 4 || r[0] <= 0 || r[1] <= 0 || r[2] != -r[0] || r[3] != -r[1] || r[0] == r[1])
            return false;
        seen.insert({std::min(r[0], r[1]), std::max(r[0], r[1])});
    }
    return seen == need;
}

}  // namespace

// ---------------------------------------------------------------------------
// Words

Word inverse(const Word& w)
{
    Word out(w.rbegin(), w.rend());
    for (int& x : out)
        x = -x;
    return out;
}

Word concat(const Word& a, const Word& b)
{
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Word free_reduce(const Word& w)
{
    Word out;
    out.reserve(w.size());
    for (int x : w) {
        if (!out.empty() && out.back() == -x)
            out.pop_back();
        else
            out.push_back(x);
    }
    return out;
}

Word parse_word(std::string_view text, const GroupPresentation& p)
{
    return WordParser(text, p.generators, 1, 1).parse_all();
}

std::string format_word(const Word& w, const GroupPresentation& p)
{
    if (w.empty())
        return "1";
    std::string out;
    for (int x : w) {
        require(x != 0 && std::abs(x) <= p.rank(), ErrorCode::InvalidArgument, "word letter out of range");
        out += p.generators[static_cast<std::size_t>(std::abs(x) - 1)];
        if (x < 0)
            out += '\'';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Presentations

std::string GroupPresentation::canonical_text() const
{
    std::ostringstream os;
    os << "gens";
    for (const auto& g : generators)
        os << ' ' << g;
    os << "\nrelators";
    if (relators.empty())
        os << " (none)";
    for (const auto& r : relators)
        os << ' ' << format_word(r, *this);
    os << "\nstrategy " << strategy_name(strategy) << '\n';
    return os.str();
}

std::uint64_t GroupPresentation::hash() const { return fnv1a(canonical_text()); }

GroupPresentation parse_presentation(std::string_view text)
{
    GroupPresentation p;
    bool have_gens = false;
    std::optional<Strategy> strategy;
    std::vector<std::tuple<std::string, int, int>> relator_tokens;

    int line = 1;
    std::size_t line_start = 0;
    std::size_t i = 0;
    while (i <= text.size()) {
        // one statement: up to newline or ';'
        std::size_t j = i;
        while (j < text.size() && text[j] != '\n' && text[j] != ';')
            ++j;
        std::string_view stmt = text.substr(i, j - i);
        if (auto hash = stmt.find('#'); hash != std::string_view::npos)
            stmt = stmt.substr(0, hash);

        // tokens with their columns
        std::vector<std::pair<std::string, int>> toks;
        for (std::size_t k = 0; k < stmt.size();) {
            if (std::isspace(static_cast<unsigned char>(stmt[k]))) {
                ++k;
                continue;
            }
            std::size_t s = k;
            while (k < stmt.size() && !std::isspace(static_cast<unsigned char>(stmt[k])))
                ++k;
            toks.emplace_back(std::string(stmt.substr(s, k - s)), static_cast<int>(i + s - line_start) + 1);
        }

        auto err = [&](int col, const std::string& msg) {
            fail(ErrorCode::Parse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
        };

        if (!toks.empty()) {
            const auto& [kw, kwcol] = toks[0];
            if (kw == "gens" || kw == "generators") {
                if (have_gens)
                    err(kwcol, "generators declared twice");
                have_gens = true;
                for (std::size_t t = 1; t < toks.size(); ++t) {
                    if (!valid_symbol(toks[t].first))
                        err(toks[t].second, "invalid generator symbol '" + toks[t].first + "'");
                    if (std::find(p.generators.begin(), p.generators.end(), toks[t].first) != p.generators.end())
                        err(toks[t].second, "duplicate generator '" + toks[t].first + "'");
                    p.generators.push_back(toks[t].first);
                }
                if (p.generators.empty())
                    err(kwcol, "at least one generator is required");
            } else if (kw == "relators" || kw == "rels") {
                for (std::size_t t = 1; t < toks.size(); ++t) {
                    if (toks[t].first == "(none)")
                        continue;
                    relator_tokens.emplace_back(toks[t].first, line, toks[t].second);
                }
            } else if (kw == "strategy") {
                if (toks.size() != 2)
                    err(kwcol, "strategy takes exactly one value");
                const auto& v = toks[1].first;
                if (v == "free")
                    strategy = Strategy::FreeReduction;
                else if (v == "abelian")
                    strategy = Strategy::AbelianNormalForm;
                else if (v == "dehn")
                    strategy = Strategy::DehnRewriting;
                else
                    err(toks[1].second, "unknown strategy '" + v + "' (expected free, abelian or dehn)");
            } else {
                err(kwcol, "unknown statement '" + kw + "'");
            }
        }
        if (j < text.size() && text[j] == '\n') {
            ++line;
            line_start = j + 1;
        }
        i = j + 1;
    }

    require(have_gens, ErrorCode::Parse, "line 1, column 1: missing 'gens' statement");
    for (const auto& [tok, l, c] : relator_tokens) {
        Word w = WordParser(tok, p.generators, l, c).parse_all();
        if (free_reduce(w).empty())
            fail(ErrorCode::Parse,
                 "line " + std::to_string(l) + ", column " + std::to_string(c) + ": relator reduces to the empty word");
        p.relators.push_back(std::move(w));
    }

    if (!strategy) {
        if (p.relators.empty())
            strategy = Strategy::FreeReduction;
        else if (is_full_commutator_set(p))
            strategy = Strategy::AbelianNormalForm;
        else
            strategy = Strategy::DehnRewriting;
    }
    p.strategy = *strategy;
    if (p.strategy == Strategy::DehnRewriting)
        require(!p.relators.empty(), ErrorCode::InvalidArgument, "strategy dehn requires a nonempty relator list");
    if (p.strategy == Strategy::FreeReduction)
        require(p.relators.empty(), ErrorCode::InvalidArgument, "strategy free requires an empty relator list");
    return p;
}

GroupPresentation builtin_presentation(std::string_view name)
{
    if (name == "Z")
        return parse_presentation("gens a; strategy free");
    if (name == "Z2")
        return parse_presentation("gens a b; strategy abelian");
    if (name == "F2")
        return parse_presentation("gens a b; strategy free");
    if (name == "F3")
        return parse_presentation("gens a b c; strategy free");
    if (name == "surface2")
        return parse_presentation("gens a b c d; relators [a,b][c,d]; strategy dehn");
    fail(ErrorCode::InvalidArgument,
         "unknown builtin group '" + std::string(name) + "' (expected Z, Z2, F2, F3, surface2)");
}

// ---------------------------------------------------------------------------
// WordProblem

WordProblem::WordProblem(const GroupPresentation& p) : p_(p)
{
    for (int g = 1; g <= p_.rank(); ++g) {
        bool vanishes = true;
        for (const auto& r : p_.relators) {
            int sum = 0;
            for (int x : r)
                if (std::abs(x) == g)
                    sum += x > 0 ? 1 : -1;
            vanishes = vanishes && sum == 0;
        }
        if (vanishes || p_.strategy != Strategy::DehnRewriting)
            free_coordinates_.push_back(g);
    }
    if (p_.strategy == Strategy::DehnRewriting) {
        std::set<Word> sym;
        for (const auto& r : p_.relators) {
            Word c = cyclic_reduce(r);
            if (c.empty())
                continue;
            for (const Word& base : {c, inverse(c)})
                for (std::size_t k = 0; k < base.size(); ++k) {
                    Word rot(base.begin() + static_cast<std::ptrdiff_t>(k), base.end());
                    rot.insert(rot.end(), base.begin(), base.begin() + static_cast<std::ptrdiff_t>(k));
                    sym.insert(rot);
                }
        }
        symmetrized_.assign(sym.begin(), sym.end());
    }
}

Word WordProblem::dehn_reduce(Word w) const
{
    w = free_reduce(w);
    for (;;) {
        bool changed = false;
        for (std::size_t i = 0; i < w.size() && !changed; ++i) {
            for (const auto& s : symmetrized_) {
                std::size_t k = 0;
                while (k < s.size() && i + k < w.size() && w[i + k] == s[k])
                    ++k;
                if (2 * k <= s.size())
                    continue;
                Word rest(s.begin() + static_cast<std::ptrdiff_t>(k), s.end());
                Word repl = inverse(rest);
                Word next(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
                next.insert(next.end(), repl.begin(), repl.end());
                next.insert(next.end(), w.begin() + static_cast<std::ptrdiff_t>(i + k), w.end());
                w = free_reduce(next);
                changed = true;
                break;
            }
        }
        if (!changed)
            return w;
    }
}

Word WordProblem::canonicalize(const Word& w) const
{
    for (int x : w)
        if (x == 0 || std::abs(x) > p_.rank())
            fail(ErrorCode::InvalidArgument, "unknown generator index " + std::to_string(x));
    switch (p_.strategy) {
    case Strategy::FreeReduction: return free_reduce(w);
    case Strategy::AbelianNormalForm: {
        std::vector<int> e(static_cast<std::size_t>(p_.rank()), 0);
        for (int x : w)
            e[static_cast<std::size_t>(std::abs(x) - 1)] += x > 0 ? 1 : -1;
        Word out;
        for (int g = 0; g < p_.rank(); ++g)
            for (int k = 0; k < std::abs(e[static_cast<std::size_t>(g)]); ++k)
                out.push_back(e[static_cast<std::size_t>(g)] > 0 ? g + 1 : -(g + 1));
        return out;
    }
    case Strategy::DehnRewriting: return dehn_reduce(w);
    }
    return w;
}

bool WordProblem::equal(const Word& a, const Word& b) const
{
    if (p_.strategy != Strategy::DehnRewriting)
        return canonicalize(a) == canonicalize(b);
    return canonicalize(concat(inverse(a), b)).empty();
}

std::vector<int> WordProblem::invariant(const Word& w) const
{
    std::vector<int> out;
    out.reserve(free_coordinates_.size());
    for (int g : free_coordinates_) {
        int sum = 0;
        for (int x : w)
            if (std::abs(x) == g)
                sum += x > 0 ? 1 : -1;
        out.push_back(sum);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CayleyBall

namespace {

std::string word_key(const Word& w)
{
    std::string k;
    k.reserve(w.size());
    for (int x : w)
        k.push_back(static_cast<char>(x + 64));
    return k;
}

std::string vec_key(const std::vector<int>& v)
{
    std::string k;
    for (int x : v) {
        k += std::to_string(x);
        k += ',';
    }
    return k;
}

}  // namespace

void CayleyBall::index_element(std::size_t i)
{
    const Word& w = elements_[i];
    if (presentation().strategy == Strategy::DehnRewriting)
        buckets_[vec_key(wp_.invariant(w))].push_back(i);
    else
        by_key_.emplace(word_key(w), i);
}

std::optional<std::size_t> CayleyBall::lookup_canonical(const Word& c, int lo, int hi) const
{
    if (presentation().strategy != Strategy::DehnRewriting) {
        auto it = by_key_.find(word_key(c));
        if (it == by_key_.end())
            return std::nullopt;
        return it->second;
    }
    auto it = buckets_.find(vec_key(wp_.invariant(c)));
    if (it == buckets_.end())
        return std::nullopt;
    for (std::size_t idx : it->second) {
        if (dist_[idx] < lo || dist_[idx] > hi)
            continue;
        if (wp_.equal(elements_[idx], c))
            return idx;
    }
    return std::nullopt;
}

CayleyBall CayleyBall::enumerate(const GroupPresentation& p, int radius, std::size_t vertex_cap)
{
    require(radius >= 0, ErrorCode::InvalidArgument, "ball radius must be nonnegative");
    CayleyBall B(p);
    B.radius_ = radius;
    const int k = p.rank();
    B.elements_.push_back({});
    B.dist_.push_back(0);
    B.index_element(0);
    for (std::size_t head = 0; head < B.elements_.size(); ++head) {
        const int d = B.dist_[head];
        for (int g = 1; g <= k; ++g)
            for (int sgn : {1, -1}) {
                Word w = B.wp_.canonicalize(concat(B.elements_[head], Word{sgn * g}));
                auto found = B.lookup_canonical(w, d - 1, d + 1);
                std::int32_t nb = -1;
                if (found) {
                    nb = static_cast<std::int32_t>(*found);
                } else if (d < radius) {
                    if (B.elements_.size() >= vertex_cap)
                        fail(ErrorCode::ResourceCap,
                             "ball enumeration exceeded the vertex cap of " + std::to_string(vertex_cap));
                    nb = static_cast<std::int32_t>(B.elements_.size());
                    B.elements_.push_back(std::move(w));
                    B.dist_.push_back(d + 1);
                    B.index_element(B.elements_.size() - 1);
                }
                B.adjacency_.push_back(nb);
            }
    }
    return B;
}

CayleyBall CayleyBall::from_parts(const GroupPresentation& p, int radius, std::vector<Word> elements,
                                  std::vector<int> dist, std::vector<std::int32_t> adjacency)
{
    require(!elements.empty() && elements.size() == dist.size() &&
                adjacency.size() == elements.size() * 2 * static_cast<std::size_t>(p.rank()),
            ErrorCode::InvalidArgument, "inconsistent ball data");
    CayleyBall B(p);
    B.radius_ = radius;
    B.elements_ = std::move(elements);
    B.dist_ = std::move(dist);
    B.adjacency_ = std::move(adjacency);
    for (std::size_t i = 0; i < B.elements_.size(); ++i)
        B.index_element(i);
    return B;
}

std::size_t CayleyBall::sphere_size(int n) const
{
    return static_cast<std::size_t>(std::count(dist_.begin(), dist_.end(), n));
}

std::span<const std::int32_t> CayleyBall::neighbors(std::size_t i) const
{
    const std::size_t deg = 2 * static_cast<std::size_t>(presentation().rank());
    require(i < size(), ErrorCode::InvalidArgument, "element index out of range");
    return std::span<const std::int32_t>(adjacency_).subspan(i * deg, deg);
}

std::optional<std::size_t> CayleyBall::find(const Word& w) const
{
    return lookup_canonical(wp_.canonicalize(w), 0, radius_);
}

std::optional<int> pair_distance(const CayleyBall& ball, std::size_t u, std::size_t v)
{
    require(u < ball.size() && v < ball.size(), ErrorCode::InvalidArgument, "element not in ball");
    const Word diff = concat(inverse(ball.element(u)), ball.element(v));
    if (ball.presentation().strategy == Strategy::DehnRewriting) {
        auto idx = ball.find(diff);
        if (!idx)
            return std::nullopt;
        return ball.dist(*idx);
    }
    const int len = static_cast<int>(ball.word_problem().canonicalize(diff).size());
    if (len > 2 * ball.radius())
        return std::nullopt;
    return len;
}

}  // namespace hinf
