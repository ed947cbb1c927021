#include "hybrid/overlay.h"

#include "hybrid/errors.h"
#include "hybrid/geometry.h"

#include <algorithm>
#include <string>

namespace hybrid {

namespace {

struct SlotHeader {
    std::uint32_t cube;
    std::uint64_t slot;
};

Payload slot_header(std::size_t cube, std::size_t slot) {
    Payload p;
    p.put(SlotHeader{static_cast<std::uint32_t>(cube), slot});
    return p;
}

Point pt(const SortKey& k) { return {k.x, k.y}; }

bool farther(const SortKey& from, const SortKey& cand, const SortKey& cur) {
    return dist(pt(from), pt(cand)) > dist(pt(from), pt(cur));
}

std::vector<NodeIndex> carried_of(const std::vector<SortKey>& keys) {
    std::vector<NodeIndex> out;
    for (const auto& k : keys) {
        if (!k.infinite()) out.push_back(k.node);
    }
    return out;
}

}  // namespace

std::vector<SortKey> merge_hulls(const std::vector<SortKey>& left, const std::vector<SortKey>& right) {
    if (left.empty()) return right;
    if (right.empty()) return left;
    const std::size_t nl = left.size();
    const std::size_t nr = right.size();
    std::size_t lmax = 0;
    for (std::size_t i = 1; i < nl; ++i) {
        if (left[lmax] < left[i]) lmax = i;
    }
    const auto& L = left;
    const auto& R = right;

    // Upper common tangent.
    std::size_t ui = lmax;
    std::size_t uj = 0;
    for (bool moved = true; moved;) {
        moved = false;
        while (nl > 1) {
            const std::size_t ni = (ui + 1) % nl;
            const Orientation o = orientation(pt(R[uj]), pt(L[ui]), pt(L[ni]));
            if (o == Orientation::Right || (o == Orientation::Collinear && farther(R[uj], L[ni], L[ui]))) {
                ui = ni;
                moved = true;
            } else {
                break;
            }
        }
        while (nr > 1) {
            const std::size_t pj = (uj + nr - 1) % nr;
            const Orientation o = orientation(pt(L[ui]), pt(R[uj]), pt(R[pj]));
            if (o == Orientation::Left || (o == Orientation::Collinear && farther(L[ui], R[pj], R[uj]))) {
                uj = pj;
                moved = true;
            } else {
                break;
            }
        }
    }

    // Lower common tangent.
    std::size_t li = lmax;
    std::size_t lj = 0;
    for (bool moved = true; moved;) {
        moved = false;
        while (nl > 1) {
            const std::size_t pi = (li + nl - 1) % nl;
            const Orientation o = orientation(pt(R[lj]), pt(L[li]), pt(L[pi]));
            if (o == Orientation::Left || (o == Orientation::Collinear && farther(R[lj], L[pi], L[li]))) {
                li = pi;
                moved = true;
            } else {
                break;
            }
        }
        while (nr > 1) {
            const std::size_t nj = (lj + 1) % nr;
            const Orientation o = orientation(pt(L[li]), pt(R[lj]), pt(R[nj]));
            if (o == Orientation::Right || (o == Orientation::Collinear && farther(L[li], R[nj], R[lj]))) {
                lj = nj;
                moved = true;
            } else {
                break;
            }
        }
    }

    std::vector<SortKey> merged;
    for (std::size_t i = ui;; i = (i + 1) % nl) {
        merged.push_back(L[i]);
        if (i == li) break;
    }
    for (std::size_t j = lj;; j = (j + 1) % nr) {
        merged.push_back(R[j]);
        if (j == uj) break;
    }
    const auto first = std::min_element(merged.begin(), merged.end());
    std::rotate(merged.begin(), first, merged.end());
    return merged;
}

std::vector<std::vector<SortKey>> hypercube_sort(RoundEngine& engine, const std::vector<HypercubeOverlay>& cubes,
                                                 std::vector<std::vector<SortKey>> keys, int* stages) {
    if (keys.size() != cubes.size()) throw Error(ErrorKind::InvalidArgument, "one key vector per cube expected");
    int max_d = 0;
    for (std::size_t c = 0; c < cubes.size(); ++c) {
        if (keys[c].size() != cubes[c].slot_count()) throw Error(ErrorKind::InvalidArgument, "one key per slot expected");
        max_d = std::max(max_d, cubes[c].dimension);
    }
    int count = 0;
    std::vector<std::vector<SortKey>> incoming(cubes.size());
    for (int s = 1; s <= max_d; ++s) {
        for (int j = s - 1; j >= 0; --j) {
            ++count;
            for (std::size_t c = 0; c < cubes.size(); ++c) {
                if (s > cubes[c].dimension) continue;
                incoming[c].assign(cubes[c].slot_count(), SortKey{});
                for (std::size_t x = 0; x < cubes[c].slot_count(); ++x) {
                    const std::size_t partner = x ^ (std::size_t{1} << j);
                    Payload pl = slot_header(c, partner);
                    pl.put(keys[c][x]);
                    std::vector<NodeIndex> carried = carried_of({keys[c][x]});
                    engine.send_auto(cubes[c].host_of_slot[x], cubes[c].host_of_slot[partner], "sort", std::move(pl),
                                     std::move(carried));
                }
            }
            engine.step_round([&](NodeIndex, std::span<const Message> inbox) {
                for (const Message& msg : inbox) {
                    if (msg.tag != "sort") continue;
                    PayloadReader rd(msg.payload);
                    const auto h = rd.get<SlotHeader>();
                    incoming[h.cube][h.slot] = rd.get<SortKey>();
                }
            });
            for (std::size_t c = 0; c < cubes.size(); ++c) {
                if (s > cubes[c].dimension) continue;
                for (std::size_t x = 0; x < cubes[c].slot_count(); ++x) {
                    const bool ascending = s == cubes[c].dimension || ((x >> s) & 1) == 0;
                    const bool lower = ((x >> j) & 1) == 0;
                    const SortKey& mine = keys[c][x];
                    const SortKey& theirs = incoming[c][x];
                    const bool keep_min = ascending == lower;
                    const bool mine_smaller = mine < theirs;
                    keys[c][x] = keep_min == mine_smaller ? mine : theirs;
                }
            }
        }
    }
    if (stages) *stages = count;
    return keys;
}

std::vector<std::vector<NodeIndex>> parallel_convex_hull(RoundEngine& engine,
                                                         const std::vector<HypercubeOverlay>& cubes,
                                                         const std::vector<std::vector<SortKey>>& sorted) {
    std::vector<std::vector<std::vector<SortKey>>> hull(cubes.size());
    int max_d = 0;
    for (std::size_t c = 0; c < cubes.size(); ++c) {
        max_d = std::max(max_d, cubes[c].dimension);
        hull[c].resize(cubes[c].slot_count());
        for (std::size_t x = 0; x < cubes[c].slot_count(); ++x) {
            if (x > 0 && sorted[c][x] < sorted[c][x - 1]) {
                throw Error(ErrorKind::InvalidArgument, "hull input is not sorted");
            }
            if (!sorted[c][x].infinite()) hull[c][x].push_back(sorted[c][x]);
        }
    }
    std::vector<std::vector<std::vector<SortKey>>> incoming(cubes.size());
    for (int j = 0; j < max_d; ++j) {
        for (std::size_t c = 0; c < cubes.size(); ++c) {
            if (j >= cubes[c].dimension) continue;
            incoming[c].assign(cubes[c].slot_count(), {});
            for (std::size_t x = 0; x < cubes[c].slot_count(); ++x) {
                const std::size_t partner = x ^ (std::size_t{1} << j);
                Payload pl = slot_header(c, partner);
                pl.put(static_cast<std::uint32_t>(hull[c][x].size()));
                for (const auto& k : hull[c][x]) pl.put(k);
                engine.send_auto(cubes[c].host_of_slot[x], cubes[c].host_of_slot[partner], "hull-merge", std::move(pl),
                                 carried_of(hull[c][x]));
            }
        }
        engine.step_round([&](NodeIndex, std::span<const Message> inbox) {
            for (const Message& msg : inbox) {
                if (msg.tag != "hull-merge") continue;
                PayloadReader rd(msg.payload);
                const auto h = rd.get<SlotHeader>();
                const auto count = rd.get<std::uint32_t>();
                auto& dst = incoming[h.cube][h.slot];
                for (std::uint32_t i = 0; i < count; ++i) dst.push_back(rd.get<SortKey>());
            }
        });
        for (std::size_t c = 0; c < cubes.size(); ++c) {
            if (j >= cubes[c].dimension) continue;
            for (std::size_t x = 0; x < cubes[c].slot_count(); ++x) {
                const bool is_left = ((x >> j) & 1) == 0;
                hull[c][x] = is_left ? merge_hulls(hull[c][x], incoming[c][x]) : merge_hulls(incoming[c][x], hull[c][x]);
            }
        }
    }

    std::vector<std::vector<NodeIndex>> out(cubes.size());
    for (std::size_t c = 0; c < cubes.size(); ++c) {
        for (std::size_t x = 1; x < cubes[c].slot_count(); ++x) {
            if (!(hull[c][x] == hull[c][0])) throw Error(ErrorKind::ProtocolBug, "slots disagree on the hull");
        }
        std::size_t finite = 0;
        for (const auto& k : sorted[c]) finite += k.infinite() ? 0 : 1;
        if (finite >= 3 && hull[c][0].size() < 3) throw Error(ErrorKind::DegenerateInput, "ring points are collinear");
        for (const auto& k : hull[c][0]) out[c].push_back(k.node);
    }
    return out;
}

}  // namespace hybrid
