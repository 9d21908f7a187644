#include "nsfp/partition.hpp"

#include <deque>
#include <map>

#include <fmt/format.h>

#include "nsfp/errors.hpp"

namespace nsfp {

Domain PartitionResult::domain(double T) const {
    Domain d;
    d.T = T;
    for (const auto& p : pieces) d.boxes.push_back(p.box);
    return d;
}

std::string PartitionResult::report() const {
    std::string s;
    s += fmt::format("status: {}\n", success ? "success" : "failure");
    s += fmt::format("depth: {}\n", depth);
    s += fmt::format("pieces: {}\n", pieces.size());
    auto line = [](const PartitionPiece& p) {
        return fmt::format(
            "  box [{:.17g}, {:.17g}] x [{:.17g}, {:.17g}] x [{:.17g}, {:.17g}] depth {} capacity {:.17g} "
            "self_map_margin {:.17g} contraction_margin {:.17g}\n",
            p.box.lo[0], p.box.hi[0], p.box.lo[1], p.box.hi[1], p.box.lo[2], p.box.hi[2], p.depth, p.constants.M_K1,
            p.smallness.margin_self_map, p.smallness.margin_contraction);
    };
    for (const auto& p : pieces) s += line(p);
    if (!success) {
        s += fmt::format("failing pieces at max depth: {}\n", failures.size());
        s += "worst piece:\n" + line(worst);
    }
    return s;
}

PartitionResult partition_domain(const Domain& K, const HolderBudget& budget, const PartitionSettings& s) {
    K.validate("fixed_point_engine");
    budget.validate();
    if (s.max_depth < 0) throw ParameterError("fixed_point_engine", "max_depth must be non-negative");
    PartitionResult res;
    // Congruent boxes share their capacity; only the argmax moves.
    std::map<std::array<double, 3>, CapacityReport> capacity_cache;
    std::deque<std::pair<Box, int>> queue;
    for (const auto& b : K.boxes) queue.emplace_back(b, 0);
    while (!queue.empty()) {
        auto [box, depth] = queue.front();
        queue.pop_front();
        res.depth = std::max(res.depth, depth);
        Domain piece;
        piece.boxes = {box};
        piece.T = K.T;
        PartitionPiece p;
        p.box = box;
        p.depth = depth;
        const std::array<double, 3> ext{box.extent(0), box.extent(1), box.extent(2)};
        auto it = capacity_cache.find(ext);
        if (it == capacity_cache.end()) {
            CapacityReport c = domain_capacity(piece, s.capacity_samples);
            for (int a = 0; a < 3; ++a) c.argmax[a] -= box.lo[a];
            it = capacity_cache.emplace(ext, c).first;
        }
        CapacityReport cap = it->second;
        for (int a = 0; a < 3; ++a) cap.argmax[a] += box.lo[a];
        p.constants = bound_constants(piece, s.mu, budget.alpha, budget.M, s.epsilon_trunc, cap);
        p.smallness = smallness_check(p.constants, budget);
        if (p.smallness.pass()) {
            res.pieces.push_back(p);
        } else if (depth >= s.max_depth) {
            if (res.failures.empty() || p.smallness.margin_contraction < res.worst.smallness.margin_contraction)
                res.worst = p;
            res.failures.push_back(p);
        } else {
            for (const Box& c : box.bisect()) queue.emplace_back(c, depth + 1);
        }
    }
    res.success = res.failures.empty();
    return res;
}

}  // namespace nsfp
