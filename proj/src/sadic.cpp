#include "bratteli/sadic.hpp"

#include "bratteli/constructor.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bratteli {

std::vector<std::string> SadicMorphism::apply(const std::vector<std::string>& word) const {
    std::vector<std::string> out;
    for (const auto& a : word) {
        const auto& img = image(a);
        out.insert(out.end(), img.begin(), img.end());
    }
    return out;
}

const std::vector<std::string>& SadicMorphism::image(const std::string& letter) const {
    auto it = images.find(letter);
    if (it == images.end()) throw DomainMismatch("letter '" + letter + "' has no image");
    return it->second;
}

SadicMorphism extract_morphism(const Diagram& d, long long i) {
    const CompiledLevel& cl = d.level(i);
    SadicMorphism m;
    m.domain_alphabet = cl.verts;
    m.codomain_alphabet = cl.prev;
    for (size_t v = 0; v < cl.verts.size(); ++v) {
        std::vector<std::string> word;
        for (int src : cl.fiber[v]) word.push_back(cl.prev[static_cast<size_t>(src)]);
        m.images[cl.verts[v]] = std::move(word);
    }
    return m;
}

SadicMorphism compose_morphisms(const Diagram& d, long long i, long long j) {
    if (i > j) throw DomainMismatch("composite window needs i <= j");
    SadicMorphism m;
    m.domain_alphabet = d.vertices_at(j);
    m.codomain_alphabet = d.vertices_at(i);
    for (const auto& v : m.domain_alphabet) m.images[v] = {v};
    for (long long lvl = j; lvl > i; --lvl) {
        SadicMorphism step = extract_morphism(d, lvl);
        // substitute the step under the accumulated suffix: images currently map
        // V_j into V_lvl^*, so rewrite each letter through the level morphism
        std::map<std::string, std::vector<std::string>> next;
        for (const auto& v : m.domain_alphabet) {
            std::vector<std::string> word;
            for (const auto& letter : m.images[v]) {
                const auto& img = step.image(letter);
                word.insert(word.end(), img.begin(), img.end());
            }
            next[v] = std::move(word);
        }
        m.images = std::move(next);
        m.codomain_alphabet = step.codomain_alphabet;
    }
    return m;
}

SadicMorphism premorphism_to_eta(const Premorphism& f, long long k) {
    OrderedEdgeSet Fk = f.layer(k);
    SadicMorphism m;
    m.domain_alphabet = Fk.codomain;
    m.codomain_alphabet = Fk.domain;
    for (size_t w = 0; w < Fk.codomain.size(); ++w) {
        std::vector<std::string> word;
        for (int src : Fk.fibers[w]) word.push_back(Fk.domain[static_cast<size_t>(src)]);
        m.images[Fk.codomain[w]] = std::move(word);
    }
    return m;
}

std::vector<SadicMorphism> premorphism_to_eta_sequence(const Premorphism& f, long long depth) {
    std::vector<SadicMorphism> out;
    for (long long k = 0; k <= depth; ++k) out.push_back(premorphism_to_eta(f, k));
    return out;
}

bool is_letter_surjective(const SadicMorphism& m) {
    std::set<std::string> seen;
    for (const auto& [a, word] : m.images)
        for (const auto& b : word) seen.insert(b);
    for (const auto& b : m.codomain_alphabet)
        if (!seen.count(b)) return false;
    return true;
}

RectangleReport check_commuting_rectangles(const Premorphism& f, long long depth) {
    RectangleReport rep;
    long long d = std::max(depth, f.certify_depth());
    if (f.source.finite()) d = std::min(d, f.source.preamble_length());
    for (long long k = 1; k <= d; ++k) {
        SadicMorphism eta_k = premorphism_to_eta(f, k);
        SadicMorphism eta_prev = premorphism_to_eta(f, k - 1);
        SadicMorphism target_window = compose_morphisms(f.target, f.f(k - 1), f.f(k));
        SadicMorphism source_level = extract_morphism(f.source, k);
        for (const auto& w : eta_k.domain_alphabet) {
            std::vector<std::string> lhs = eta_prev.apply(target_window.image(w));
            std::vector<std::string> rhs = source_level.apply(eta_k.image(w));
            if (lhs != rhs) {
                rep.commutes = false;
                rep.failures.push_back({k, w});
            }
        }
    }
    return rep;
}

std::vector<std::vector<long long>> abelianization(const SadicMorphism& m) {
    std::vector<std::vector<long long>> a(
        m.codomain_alphabet.size(), std::vector<long long>(m.domain_alphabet.size(), 0));
    std::map<std::string, size_t> cod;
    for (size_t i = 0; i < m.codomain_alphabet.size(); ++i) cod[m.codomain_alphabet[i]] = i;
    for (size_t j = 0; j < m.domain_alphabet.size(); ++j)
        for (const auto& b : m.image(m.domain_alphabet[j])) a[cod.at(b)][j] += 1;
    return a;
}

// ---------------------------------------------------------------------------
// Cylinder labels, tower words, block codes

bool CylinderLabel::operator<(const CylinderLabel& o) const {
    if (ranks != o.ranks) return ranks < o.ranks;
    return vertex < o.vertex;
}

std::string CylinderLabel::to_string() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < ranks.size(); ++i) {
        if (i) os << ",";
        os << ranks[i];
    }
    os << ")@" << vertex;
    return os.str();
}

CylinderLabel label_of_prefix(const Diagram& d, const PathPrefix& p) {
    CylinderLabel l;
    for (const auto& e : p.edges) l.ranks.push_back(e.rank);
    l.vertex = terminal_vertex(d, p);
    return l;
}

PathPrefix prefix_of_label(const Diagram& d, const CylinderLabel& l) {
    // ranks determine the path downward from the terminal vertex
    PathPrefix p;
    p.edges.resize(l.ranks.size());
    std::string v = l.vertex;
    for (long long lvl = static_cast<long long>(l.ranks.size()); lvl >= 1; --lvl) {
        const CompiledLevel& cl = d.level(lvl);
        auto wi = cl.vert_index.find(v);
        if (wi == cl.vert_index.end()) throw InvalidPrefix("unknown vertex in cylinder label");
        int rank = l.ranks[static_cast<size_t>(lvl - 1)];
        if (rank < 0 || rank >= cl.fiber_size(wi->second))
            throw InvalidPrefix("cylinder label rank out of range");
        p.edges[static_cast<size_t>(lvl - 1)] = {v, rank};
        v = cl.prev[static_cast<size_t>(
            cl.fiber[static_cast<size_t>(wi->second)][static_cast<size_t>(rank)])];
    }
    if (v != d.root()) throw InvalidPrefix("cylinder label does not reach the root");
    return p;
}

CylinderLabel OneBlockCode::apply_letter(const Diagram& d, const CylinderLabel& l) const {
    PathPrefix p = prefix_of_label(d, l);
    if (p.length() != k) throw PrefixLengthMismatch("label depth does not match the code");
    PathPrefix q;
    q.edges.assign(p.edges.begin(), p.edges.end() - 1);
    return label_of_prefix(d, q);
}

std::vector<CylinderLabel> OneBlockCode::apply(const Diagram& d,
                                               const std::vector<CylinderLabel>& word) const {
    std::vector<CylinderLabel> out;
    out.reserve(word.size());
    for (const auto& l : word) out.push_back(apply_letter(d, l));
    return out;
}

OneBlockCode one_block_code(const Diagram& d, long long k) {
    (void)d;
    if (k < 1) throw PrefixLengthMismatch("block codes need depth >= 1");
    return OneBlockCode{k};
}

std::vector<CylinderLabel> tower_word(const Diagram& d, long long k, long long m,
                                      const std::string& v) {
    if (k >= m) throw PrefixLengthMismatch("tower word needs k < m");
    struct Rec {
        const Diagram& d;
        std::vector<PathPrefix> paths;
        void go(long long lvl, const std::string& vert, std::vector<PrefixEdge>& stack) {
            if (lvl == 0) {
                PathPrefix p;
                p.edges.assign(stack.rbegin(), stack.rend());
                paths.push_back(std::move(p));
                return;
            }
            const CompiledLevel& cl = d.level(lvl);
            int w = cl.vert_index.at(vert);
            const auto& fib = cl.fiber[static_cast<size_t>(w)];
            for (size_t r = 0; r < fib.size(); ++r) {
                stack.push_back({vert, static_cast<int>(r)});
                go(lvl - 1, cl.prev[static_cast<size_t>(fib[r])], stack);
                stack.pop_back();
            }
        }
    } rec{d, {}};
    std::vector<PrefixEdge> stack;
    rec.go(m, v, stack);
    // recursion emits the last edge first, giving reverse-lex order directly
    std::vector<CylinderLabel> word;
    word.reserve(rec.paths.size());
    for (const auto& p : rec.paths) {
        PathPrefix q;
        q.edges.assign(p.edges.begin(), p.edges.begin() + k);
        word.push_back(label_of_prefix(d, q));
    }
    return word;
}

// ---------------------------------------------------------------------------
// Sliding-block pipeline

PipelineReport sliding_block_pipeline(const Premorphism& f, long long i, long long word_len,
                                      const NaturalExtensionRule& ext_b,
                                      const NaturalExtensionRule& ext_c) {
    if (i < 1) throw PrefixLengthMismatch("pipeline index must be >= 1");
    require_valid(f);
    PipelineReport rep;

    std::vector<EventuallyPeriodicPath> starts = count_extreme_paths(f.target, Extreme::Min).witnesses;
    for (const auto& x : max_path_preimages(f)) {
        bool seen = false;
        for (const auto& s : starts)
            if (path_equal(f.target, s, x)) seen = true;
        if (!seen) starts.push_back(x);
    }

    for (const auto& start : starts) {
        auto c_itin_i = truncation_itinerary(f.target, start, f.f(i), word_len, &ext_c);
        auto c_itin_prev = truncation_itinerary(f.target, start, f.f(i - 1), word_len, &ext_c);
        EventuallyPeriodicPath b0 = induced_path(f, start);
        auto b_itin_i = truncation_itinerary(f.source, b0, i, word_len, &ext_b);

        for (long long t = 0; t < word_len; ++t) {
            PathPrefix mapped = induced_map_prefix(f, c_itin_i[static_cast<size_t>(t)], i);
            PathPrefix mapped_prev =
                induced_map_prefix(f, c_itin_prev[static_cast<size_t>(t)], i - 1);

            // truncation rectangle: dropping target levels then mapping equals
            // mapping then dropping source levels
            {
                PathPrefix rhs;
                rhs.edges.assign(mapped.edges.begin(), mapped.edges.begin() + (i - 1));
                if (!(mapped_prev == rhs)) {
                    rep.commutes = false;
                    rep.witnesses.push_back({start, t, label_of_prefix(f.source, rhs),
                                             label_of_prefix(f.source, mapped_prev)});
                }
            }

            // shift equivariance along the induced orbit
            PathPrefix expected = b_itin_i[static_cast<size_t>(t)];
            if (!(mapped == expected)) {
                rep.commutes = false;
                rep.witnesses.push_back({start, t, label_of_prefix(f.source, mapped),
                                         label_of_prefix(f.source, expected)});
            }
        }
    }
    return rep;
}

} // namespace bratteli
