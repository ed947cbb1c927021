#include "hybrid/overlay.h"

#include "hybrid/errors.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace hybrid {

BroadcastTree build_broadcast_tree(RoundEngine& engine, double c1) {
    const std::size_t n = engine.topology().size();
    BroadcastTree tree;
    tree.root = 0;
    tree.parent.assign(n, kNoNode);
    tree.children.assign(n, {});
    // Balanced binary tree over nodes in id order; index order already is id order.
    for (std::size_t i = 1; i < n; ++i) {
        const auto p = static_cast<NodeIndex>((i - 1) / 2);
        tree.parent[i] = p;
        tree.children[p].push_back(static_cast<NodeIndex>(i));
        engine.grant_knowledge(p, static_cast<NodeIndex>(i));
        engine.grant_knowledge(static_cast<NodeIndex>(i), p);
    }
    tree.height = n <= 1 ? 0 : static_cast<int>(std::floor(std::log2(static_cast<double>(n))));
    for (std::size_t i = 0; i < n; ++i) {
        const int deg = static_cast<int>(tree.children[i].size()) + (tree.parent[i] == kNoNode ? 0 : 1);
        tree.max_degree = std::max(tree.max_degree, deg);
    }
    const double lg = n <= 1 ? 0.0 : std::log2(static_cast<double>(n));
    tree.charged_rounds = static_cast<std::int64_t>(std::ceil(c1 * lg * lg));
    engine.charge_rounds(tree.charged_rounds);
    return tree;
}

namespace {

struct Reference {
    std::uint32_t hull;
    std::uint32_t index;
    NodeIndex node;
    friend auto operator<=>(const Reference&, const Reference&) = default;
};

}  // namespace

DistributionResult distribute_hulls(RoundEngine& engine, const BroadcastTree& tree,
                                    const std::vector<std::vector<NodeIndex>>& hulls) {
    const std::size_t n = engine.topology().size();
    DistributionResult result;
    std::vector<std::set<Reference>> seen(n);

    auto neighbours = [&](NodeIndex v) {
        std::vector<NodeIndex> out = tree.children[v];
        if (tree.parent[v] != kNoNode) out.push_back(tree.parent[v]);
        return out;
    };
    auto forward = [&](NodeIndex v, NodeIndex except, const std::vector<Reference>& refs) {
        if (refs.empty()) return;
        std::vector<NodeIndex> carried;
        for (const auto& r : refs) carried.push_back(r.node);
        for (NodeIndex w : neighbours(v)) {
            if (w == except) continue;
            Payload pl;
            pl.put(static_cast<std::uint32_t>(refs.size()));
            for (const auto& r : refs) pl.put(r);
            engine.send(v, w, Channel::LongRange, "hull-ref", std::move(pl), carried);
        }
    };

    for (std::uint32_t h = 0; h < hulls.size(); ++h) {
        for (std::uint32_t i = 0; i < hulls[h].size(); ++i) {
            const Reference r{h, i, hulls[h][i]};
            seen[r.node].insert(r);
            forward(r.node, kNoNode, {r});
        }
    }

    const std::int64_t start = engine.round();
    while (engine.has_pending()) {
        std::vector<std::vector<std::pair<NodeIndex, std::vector<Reference>>>> fresh(n);
        engine.step_round([&](NodeIndex v, std::span<const Message> inbox) {
            for (const Message& msg : inbox) {
                if (msg.tag != "hull-ref") continue;
                PayloadReader rd(msg.payload);
                const auto count = rd.get<std::uint32_t>();
                std::vector<Reference> keep;
                for (std::uint32_t i = 0; i < count; ++i) {
                    const auto r = rd.get<Reference>();
                    ++result.deliveries;
                    if (!seen[v].insert(r).second) {
                        ++result.duplicates;
                        continue;
                    }
                    keep.push_back(r);
                }
                fresh[v].emplace_back(msg.src_index, std::move(keep));
            }
        });
        for (NodeIndex v = 0; v < n; ++v) {
            for (const auto& [from, refs] : fresh[v]) forward(v, from, refs);
        }
    }
    result.rounds = engine.round() - start;
    return result;
}

}  // namespace hybrid
