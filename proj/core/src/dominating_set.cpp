#include "hybrid/overlay.h"

#include "hybrid/errors.h"

#include <algorithm>
#include <random>

namespace hybrid {

bool dominates_path(const std::vector<NodeIndex>& path, const std::vector<NodeIndex>& set) {
    auto member = [&](NodeIndex v) { return std::find(set.begin(), set.end(), v) != set.end(); };
    for (std::size_t i = 0; i < path.size(); ++i) {
        const bool covered = member(path[i]) || (i > 0 && member(path[i - 1])) ||
                             (i + 1 < path.size() && member(path[i + 1]));
        if (!covered) return false;
    }
    return true;
}

namespace {

struct Slot {
    std::uint32_t path;
    std::uint32_t position;
};

}  // namespace

DominatingSetResult dominating_set(RoundEngine& engine, const std::vector<std::vector<NodeIndex>>& paths) {
    const auto& topo = engine.topology();
    std::vector<std::vector<char>> covered(paths.size());
    std::vector<std::vector<char>> joined(paths.size());
    std::size_t uncovered = 0;
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const auto& path = paths[p];
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            if (!topo.adhoc_adjacent(path[i], path[i + 1])) {
                throw Error(ErrorKind::InvalidArgument, "bay path neighbours are not ad hoc neighbours");
            }
        }
        covered[p].assign(path.size(), 0);
        joined[p].assign(path.size(), 0);
        uncovered += path.size();
    }

    DominatingSetResult result;
    std::bernoulli_distribution coin(0.5);
    std::int64_t phases = 0;
    while (uncovered > 0 || engine.has_pending()) {
        // Every still uncovered participant joins with probability 1/2 and tells its path neighbours.
        for (std::size_t p = 0; p < paths.size(); ++p) {
            const auto& path = paths[p];
            for (std::size_t i = 0; i < path.size(); ++i) {
                if (covered[p][i] || !coin(engine.rng(path[i]))) continue;
                joined[p][i] = 1;
                covered[p][i] = 1;
                --uncovered;
                for (std::size_t nb : {i - 1, i + 1}) {
                    if (nb >= path.size()) continue;
                    Payload pl;
                    pl.put(Slot{static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(nb)});
                    engine.send(path[i], path[nb], Channel::AdHoc, "ds-join", std::move(pl));
                }
            }
        }
        engine.step_round([&](NodeIndex, std::span<const Message> inbox) {
            for (const Message& msg : inbox) {
                if (msg.tag != "ds-join") continue;
                PayloadReader rd(msg.payload);
                const auto s = rd.get<Slot>();
                if (!covered[s.path][s.position]) {
                    covered[s.path][s.position] = 1;
                    --uncovered;
                }
            }
        });
        if (++phases > 10000) throw Error(ErrorKind::ProtocolBug, "dominating set does not terminate");
    }
    result.rounds = phases;
    result.sets.resize(paths.size());
    for (std::size_t p = 0; p < paths.size(); ++p) {
        for (std::size_t i = 0; i < paths[p].size(); ++i) {
            if (joined[p][i]) result.sets[p].push_back(paths[p][i]);
        }
    }
    return result;
}

}  // namespace hybrid
