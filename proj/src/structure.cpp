#include "symsing/structure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "symsing/errors.hpp"

namespace symsing {

namespace {

void require_compatible(const ResidueVector& x, const ResidueVector& y, const char* what) {
    if (x.size() != y.size() || x.modulus() != y.modulus()) {
        throw DimensionMismatch(std::string(what) + ": vectors differ in length or modulus");
    }
}

}  // namespace

double default_tau(std::size_t n, LogBase base) {
    const double L = log_in(static_cast<double>(n), base);
    return static_cast<double>(n) / (L * L);
}

std::size_t LevelSetProfile::complement_size(std::uint32_t r) const {
    std::size_t n = 0;
    for (const auto& set : level_sets) n += set.size();
    return n - size_of(r);
}

LevelSetProfile level_set_profile(const ResidueVector& a, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("level_set_profile: tau must be positive");
    LevelSetProfile profile;
    profile.tau = tau;
    profile.level_sets.resize(a.modulus().value());
    for (std::size_t i = 0; i < a.size(); ++i) profile.level_sets[a[i]].push_back(i);
    for (const auto& set : profile.level_sets) profile.m = std::max(profile.m, set.size());
    profile.in_L = static_cast<double>(profile.m) >= static_cast<double>(a.size()) - tau;
    return profile;
}

std::string to_string(SupportRegime regime) {
    return regime == SupportRegime::small_support ? "small-support" : "large-support";
}

std::uint32_t pair_form(const ResidueVector& l, const ResidueVector& a, std::size_t i, std::size_t j) {
    const Modulus& q = a.modulus();
    return q.add(q.mul(l[i], a[j]), q.mul(l[j], a[i]));
}

PairCountReport pair_count(const ResidueVector& l, const ResidueVector& a, double tau) {
    require_compatible(l, a, "pair_count");
    PairCountReport report;
    const std::size_t n = a.size();
    report.s = l.support_size();
    for (std::size_t i = 0; i < n; ++i) {
        if (l[i] == 0 && a[i] == 0) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (pair_form(l, a, i, j) != 0) ++report.N;
        }
    }
    const double s = static_cast<double>(report.s);
    report.bound_p1 = s * tau / 2.0;
    report.bound_p2 = std::min(s * s / 20.0, report.bound_p1);
    report.regime = s < tau / 2.0 ? SupportRegime::small_support : SupportRegime::large_support;
    return report;
}

AuxiliaryGraph::AuxiliaryGraph(std::vector<std::size_t> vertices)
    : vertices_(std::move(vertices)),
      words_((vertices_.size() + 63) / 64),
      adjacency_(vertices_.size() * words_, 0) {}

void AuxiliaryGraph::add_edge(std::size_t u, std::size_t v) {
    if (u == v) throw std::invalid_argument("AuxiliaryGraph: self loops are not allowed");
    if (adjacent(u, v)) return;
    adjacency_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
    adjacency_[v * words_ + u / 64] |= std::uint64_t{1} << (u % 64);
    ++edges_;
}

AuxiliaryGraph AuxiliaryGraph::from_edges(std::size_t count,
                                          const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<std::size_t> ids(count);
    for (std::size_t i = 0; i < count; ++i) ids[i] = i;
    AuxiliaryGraph G(std::move(ids));
    for (auto [u, v] : edges) {
        if (u >= count || v >= count) throw std::out_of_range("AuxiliaryGraph::from_edges: vertex out of range");
        G.add_edge(u, v);
    }
    return G;
}

AuxiliaryGraph build_auxiliary_graph(const ResidueVector& a, const ResidueVector& l) {
    require_compatible(a, l, "build_auxiliary_graph");
    std::vector<std::size_t> coords;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != 0 && l[i] != 0) coords.push_back(i);
    }
    AuxiliaryGraph G(coords);
    G.classes_.resize(a.modulus().value());
    for (std::size_t u = 0; u < coords.size(); ++u) {
        G.classes_[a[coords[u]]].push_back(coords[u]);
        for (std::size_t v = u + 1; v < coords.size(); ++v) {
            if (pair_form(l, a, coords[u], coords[v]) == 0) G.add_edge(u, v);
        }
    }
    return G;
}

bool is_triangle_free(const AuxiliaryGraph& G) {
    // A triangle exists iff some edge {u,v} has a common neighbour.
    const std::size_t count = G.vertex_count();
    for (std::size_t u = 0; u < count; ++u) {
        for (std::size_t v = u + 1; v < count; ++v) {
            if (!G.adjacent(u, v)) continue;
            for (std::size_t w = 0; w < G.words_; ++w) {
                if (G.adjacency_[u * G.words_ + w] & G.adjacency_[v * G.words_ + w]) return false;
            }
        }
    }
    return true;
}

PropositionCheck check_proposition(const ResidueVector& a, const ResidueVector& l, double tau) {
    require_compatible(a, l, "check_proposition");
    PropositionCheck check;
    const std::size_t n = a.size();
    const auto profile = level_set_profile(a, tau);
    const auto pairs = pair_count(l, a, tau);
    check.actual_N = pairs.N;
    check.regime = pairs.regime;

    check.hypotheses_met = !profile.in_L && pairs.s > 0;
    if (check.hypotheses_met) {
        if (pairs.regime == SupportRegime::small_support) {
            check.claimed_bound = pairs.bound_p1;
            check.claim_asserted = true;
        } else {
            check.claimed_bound = pairs.bound_p2;
            check.claim_asserted = pairs.s >= kQuadraticBoundMinSupport;
        }
        check.claim_met = static_cast<double>(check.actual_N) >= check.claimed_bound;
        check.holds = !check.claim_asserted || check.claim_met;
    }

    const std::size_t s = pairs.s;
    const std::size_t nonzero_a = n - profile.size_of(0);
    std::size_t cross = 0;  // |L_0(l) cap L_{!=0}(a)|
    for (std::size_t i = 0; i < n; ++i) {
        if (l[i] == 0 && a[i] != 0) ++cross;
    }
    check.inner_applicable = s <= nonzero_a;
    if (check.inner_applicable) {
        check.inner_cross_pairs = static_cast<std::uint64_t>(s) * cross;
        check.inner_bound = static_cast<double>(s) * (static_cast<double>(nonzero_a) - static_cast<double>(s));
        check.inner_holds = check.actual_N >= check.inner_cross_pairs &&
                            static_cast<double>(check.inner_cross_pairs) >= check.inner_bound;
    }

    const auto G = build_auxiliary_graph(a, l);
    const std::uint64_t v = G.vertex_count();
    check.vertex_count = G.vertex_count();
    check.edge_count = G.edge_count();
    check.triangle_free = is_triangle_free(G);
    check.mantel_edge_limit = v * v / 4;
    check.nonedges_in_V = v * (v - (v > 0 ? 1 : 0)) / 2 - G.edge_count();
    check.mantel_nonedge_bound = v * (v - (v > 0 ? 1 : 0)) / 2 - check.mantel_edge_limit;
    check.mantel_holds = check.edge_count <= check.mantel_edge_limit &&
                         check.nonedges_in_V >= check.mantel_nonedge_bound;
    return check;
}

}  // namespace symsing
