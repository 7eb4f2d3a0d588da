#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "symsing/modulus.hpp"
#include "symsing/residue_vector.hpp"

namespace symsing {

/// Default level-set threshold n / log^2 n.
double default_tau(std::size_t n, LogBase base = LogBase::natural);

/// Level sets L_r(a) for every residue r, the largest size m(a), and
/// membership in the structured family: m(a) >= n - tau.
struct LevelSetProfile {
    std::vector<std::vector<std::size_t>> level_sets;  // indexed by residue, 0-based coordinates
    std::size_t m = 0;
    double tau = 0.0;
    bool in_L = false;

    [[nodiscard]] std::size_t size_of(std::uint32_t r) const { return level_sets.at(r).size(); }
    /// |L_{!=r}(a)| = n - |L_r(a)|.
    [[nodiscard]] std::size_t complement_size(std::uint32_t r) const;
};

LevelSetProfile level_set_profile(const ResidueVector& a, double tau);

enum class SupportRegime { small_support, large_support };
std::string to_string(SupportRegime regime);

/// Counts unordered pairs i < j with l_i a_j + l_j a_i != 0 mod q.
struct PairCountReport {
    std::size_t s = 0;  // |L_{!=0}(l)|
    std::uint64_t N = 0;
    double bound_p1 = 0.0;  // s * tau / 2, i.e. s n / (2 log^2 n) at the default tau
    double bound_p2 = 0.0;  // min(s^2/20, s * tau / 2)
    SupportRegime regime = SupportRegime::small_support;  // small iff s < tau / 2
};

/// l_i a_j + l_j a_i mod q.
std::uint32_t pair_form(const ResidueVector& l, const ResidueVector& a, std::size_t i, std::size_t j);

PairCountReport pair_count(const ResidueVector& l, const ResidueVector& a, double tau);

/// Graph on V = L_{!=0}(a) cap L_{!=0}(l); i ~ j iff l_i a_j + l_j a_i = 0 mod q.
class AuxiliaryGraph {
public:
    /// Arbitrary graph on vertices 0..count-1 (fixtures and tests).
    static AuxiliaryGraph from_edges(std::size_t count, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

    /// Coordinates (0-based) backing each vertex.
    [[nodiscard]] const std::vector<std::size_t>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] std::size_t vertex_count() const noexcept { return vertices_.size(); }
    /// Adjacency between vertex positions u, v in [0, vertex_count()).
    [[nodiscard]] bool adjacent(std::size_t u, std::size_t v) const noexcept {
        return (adjacency_[u * words_ + v / 64] >> (v % 64)) & 1U;
    }
    [[nodiscard]] std::uint64_t edge_count() const noexcept { return edges_; }
    /// J_r as vertex coordinates, indexed by residue r (J_0 is always empty).
    [[nodiscard]] const std::vector<std::vector<std::size_t>>& classes() const noexcept { return classes_; }

private:
    friend AuxiliaryGraph build_auxiliary_graph(const ResidueVector& a, const ResidueVector& l);

    explicit AuxiliaryGraph(std::vector<std::size_t> vertices);
    void add_edge(std::size_t u, std::size_t v);

    std::vector<std::size_t> vertices_;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> adjacency_;
    std::uint64_t edges_ = 0;
    std::vector<std::vector<std::size_t>> classes_;

    friend bool is_triangle_free(const AuxiliaryGraph& G);
};

AuxiliaryGraph build_auxiliary_graph(const ResidueVector& a, const ResidueVector& l);

/// True iff no three vertices are mutually adjacent.
bool is_triangle_free(const AuxiliaryGraph& G);

/// Smallest support size at which the s^2/20 form of the large-support bound is asserted.
inline constexpr std::size_t kQuadraticBoundMinSupport = 40;

/// Evaluation of the pair-count propositions for one (a, l).
struct PropositionCheck {
    // Headline claim, only meaningful when hypotheses_met.
    bool hypotheses_met = false;  // a is not in the structured family and l != 0
    SupportRegime regime = SupportRegime::small_support;
    double claimed_bound = 0.0;
    std::uint64_t actual_N = 0;
    bool claim_asserted = false;  // false for large-support s below kQuadraticBoundMinSupport
    bool claim_met = true;        // actual_N >= claimed_bound, measured whether asserted or not
    bool holds = true;            // vacuous, or not asserted, or claim_met

    // Inner counting step of the small-support argument: N >= s |L_0(l) cap L_{!=0}(a)| >= s (|L_{!=0}(a)| - s).
    bool inner_applicable = false;  // s <= |L_{!=0}(a)|
    std::uint64_t inner_cross_pairs = 0;  // s * |L_0(l) cap L_{!=0}(a)|
    double inner_bound = 0.0;             // s * (|L_{!=0}(a)| - s)
    bool inner_holds = true;

    // Triangle-freeness and the Mantel consequence on the auxiliary graph.
    std::size_t vertex_count = 0;
    std::uint64_t edge_count = 0;
    bool triangle_free = true;
    std::uint64_t mantel_edge_limit = 0;        // floor(|V|^2 / 4)
    std::uint64_t nonedges_in_V = 0;            // pairs in V with nonzero form
    std::uint64_t mantel_nonedge_bound = 0;     // C(|V|,2) - floor(|V|^2/4)
    bool mantel_holds = true;

    [[nodiscard]] bool all_hold() const noexcept { return holds && inner_holds && triangle_free && mantel_holds; }
};

PropositionCheck check_proposition(const ResidueVector& a, const ResidueVector& l, double tau);

}  // namespace symsing
