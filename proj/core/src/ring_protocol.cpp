#include "hybrid/overlay.h"

#include "hybrid/errors.h"
#include "hybrid/geometry.h"

#include <algorithm>
#include <bit>
#include <string>

namespace hybrid {

namespace {

// Mailbox header: which ring and which participant a message is meant for.
// Positions are only used as handles; participants never read global ring order.
struct Header {
    std::uint32_t ring;
    std::uint64_t position;
};

Payload header(std::size_t ring, std::size_t position) {
    Payload p;
    p.put(Header{static_cast<std::uint32_t>(ring), position});
    return p;
}

std::size_t prev_pos(std::size_t p, std::size_t k) { return p == 0 ? k - 1 : p - 1; }
std::size_t next_pos(std::size_t p, std::size_t k) { return p + 1 == k ? 0 : p + 1; }

ParticipantKey key_at(const HybridTopology& topo, const RingSpec& ring, std::size_t p) {
    const std::size_t k = ring.members.size();
    return {topo.ids[ring.members[p]], topo.ids[ring.members[prev_pos(p, k)]]};
}

void check_rings(const HybridTopology& topo, const std::vector<RingSpec>& rings) {
    for (const auto& ring : rings) {
        const std::size_t k = ring.members.size();
        if (k < 2) throw Error(ErrorKind::InvalidArgument, "ring with fewer than 2 participants");
        for (std::size_t p = 0; p < k; ++p) {
            const NodeIndex a = ring.members[p];
            const NodeIndex b = ring.members[next_pos(p, k)];
            if (a == b) throw Error(ErrorKind::EmbeddingCorruption, "ring repeats a node consecutively");
            const bool closing = ring.virtual_closing && p + 1 == k;
            if (!closing && !topo.adhoc_adjacent(a, b)) {
                throw Error(ErrorKind::EmbeddingCorruption, "ring neighbours are not ad hoc neighbours");
            }
        }
    }
}

// Aggregate over an arc of ring positions (start, start+len].
struct Arc {
    ParticipantKey min;
    std::size_t first = 0;  // offset (1-based) of the first occurrence of min
    std::size_t last = 0;   // offset of the last occurrence
    std::size_t len = 0;
    double angle = 0.0;
};

Arc join(const Arc& a, const Arc& b) {
    Arc r;
    r.len = a.len + b.len;
    r.angle = a.angle + b.angle;
    if (a.min < b.min) {
        r.min = a.min;
        r.first = a.first;
        r.last = a.last;
    } else if (b.min < a.min) {
        r.min = b.min;
        r.first = b.first + a.len;
        r.last = b.last + a.len;
    } else {
        r.min = a.min;
        r.first = a.first;
        r.last = b.last + a.len;
    }
    return r;
}

struct Participant {
    std::vector<std::size_t> succ;
    std::vector<std::size_t> pred;
    std::vector<Arc> s_arc;
    std::vector<Arc> p_arc;
    std::size_t k = 0;  // 0 until derived
    ParticipantKey leader;
    std::uint64_t messages = 0;
    int level = 0;  // highest level held
    bool got_succ = false;
    bool got_pred = false;
};

}  // namespace

std::vector<std::vector<double>> exchange_ring_neighbours(RoundEngine& engine, const std::vector<RingSpec>& rings) {
    const auto& topo = engine.topology();
    check_rings(topo, rings);
    std::vector<std::vector<double>> angles(rings.size());
    for (std::size_t r = 0; r < rings.size(); ++r) {
        const auto& m = rings[r].members;
        const std::size_t k = m.size();
        angles[r].resize(k);
        for (std::size_t p = 0; p < k; ++p) {
            const NodeIndex pred = m[prev_pos(p, k)];
            const NodeIndex succ = m[next_pos(p, k)];
            angles[r][p] = signed_turn_angle(topo.points[pred], topo.points[m[p]], topo.points[succ]);
            Payload pl = header(r, prev_pos(p, k));
            pl.put(angles[r][p]);
            engine.send_auto(m[p], pred, "ring-angle", std::move(pl));
        }
    }
    engine.step_round([](NodeIndex, std::span<const Message>) {});
    return angles;
}

std::vector<PointerJumpingResult> pointer_jumping(RoundEngine& engine, const std::vector<RingSpec>& rings,
                                                  const std::vector<std::vector<double>>& turn_angles) {
    const auto& topo = engine.topology();
    check_rings(topo, rings);
    std::vector<std::vector<Participant>> state(rings.size());
    std::vector<PointerJumpingResult> out(rings.size());

    for (std::size_t r = 0; r < rings.size(); ++r) {
        const std::size_t k = rings[r].members.size();
        state[r].resize(k);
        out[r].k = k;
        for (std::size_t p = 0; p < k; ++p) {
            Participant& s = state[r][p];
            const std::size_t sp = next_pos(p, k);
            s.succ.push_back(sp);
            s.pred.push_back(prev_pos(p, k));
            s.p_arc.push_back({key_at(topo, rings[r], p), 1, 1, 1, turn_angles[r][p]});
            s.s_arc.push_back({key_at(topo, rings[r], sp), 1, 1, 1, turn_angles[r][sp]});
        }
    }

    auto send_level = [&](std::size_t r, std::size_t p) {
        Participant& s = state[r][p];
        const auto& m = rings[r].members;
        const int i = s.level;
        const std::size_t to_pred = s.pred[i];
        const std::size_t to_succ = s.succ[i];
        Payload a = header(r, to_pred);
        a.put(std::uint8_t{0}).put(to_succ).put(s.s_arc[i]);
        engine.send_auto(m[p], m[to_pred], "jump", std::move(a), {m[to_succ]});
        Payload b = header(r, to_succ);
        b.put(std::uint8_t{1}).put(to_pred).put(s.p_arc[i]);
        engine.send_auto(m[p], m[to_succ], "jump", std::move(b), {m[to_pred]});
        s.messages += 2;

        JumpEdge e;
        e.from_position = to_pred;
        e.to_position = to_succ;
        e.from = m[to_pred];
        e.to = m[to_succ];
        const Arc whole = join(s.p_arc[i], s.s_arc[i]);
        e.ell = whole.min;
        e.level = i;
        e.angle_sum = whole.angle;
        out[r].jump_edges.push_back(e);
    };

    auto finished = [](const Participant& s) { return s.k != 0 && static_cast<std::size_t>(s.level) >= ceil_log2(s.k); };

    auto try_derive = [](Participant& s) {
        const Arc& pa = s.p_arc.back();
        const Arc& sa = s.s_arc.back();
        if (s.k == 0 && pa.min == sa.min) {
            s.k = sa.first + (pa.len - pa.last);
            s.leader = pa.min;
        }
    };

    for (std::size_t r = 0; r < rings.size(); ++r) {
        for (std::size_t p = 0; p < state[r].size(); ++p) {
            try_derive(state[r][p]);
            if (!finished(state[r][p])) send_level(r, p);
        }
    }

    int rounds = 0;
    while (engine.has_pending()) {
        ++rounds;
        engine.step_round([&](NodeIndex, std::span<const Message> inbox) {
            for (const Message& msg : inbox) {
                if (msg.tag != "jump") continue;
                PayloadReader rd(msg.payload);
                const auto h = rd.get<Header>();
                const auto side = rd.get<std::uint8_t>();
                const auto target = rd.get<std::size_t>();
                const Arc arc = rd.get<Arc>();
                Participant& s = state[h.ring][h.position];
                if (side == 0) {
                    s.succ.push_back(target);
                    s.s_arc.push_back(join(s.s_arc.back(), arc));
                    s.got_succ = true;
                } else {
                    s.pred.push_back(target);
                    s.p_arc.push_back(join(arc, s.p_arc.back()));
                    s.got_pred = true;
                }
            }
        });
        for (std::size_t r = 0; r < rings.size(); ++r) {
            for (std::size_t p = 0; p < state[r].size(); ++p) {
                Participant& s = state[r][p];
                if (!s.got_succ && !s.got_pred) continue;
                if (s.got_succ != s.got_pred) throw Error(ErrorKind::ProtocolBug, "jump round lost one side");
                s.got_succ = s.got_pred = false;
                ++s.level;
                try_derive(s);
                if (!finished(s)) send_level(r, p);
            }
        }
        if (rounds > 80) throw Error(ErrorKind::ProtocolBug, "pointer jumping does not terminate");
    }

    for (std::size_t r = 0; r < rings.size(); ++r) {
        auto& res = out[r];
        res.turn_angle = turn_angles[r];
        std::size_t leader_pos = 0;
        for (std::size_t p = 0; p < state[r].size(); ++p) {
            const Participant& s = state[r][p];
            if (s.k != res.k) throw Error(ErrorKind::ProtocolBug, "participant derived a wrong ring size");
            res.succ.push_back(s.succ);
            res.pred.push_back(s.pred);
            std::vector<double> angles;
            for (const Arc& a : s.s_arc) angles.push_back(a.angle);
            res.succ_angle.push_back(std::move(angles));
            res.known_leader.push_back(s.leader);
            res.known_k.push_back(s.k);
            res.messages_per_position.push_back(s.messages);
            res.jump_rounds = std::max(res.jump_rounds, s.level);
            if (key_at(topo, rings[r], p) == s.leader) leader_pos = p;
        }
        res.leader = state[r][0].leader;
        res.leader_position = leader_pos;
    }
    return out;
}

std::vector<HypercubeOverlay> assign_hypercube_ids(RoundEngine& engine, const std::vector<RingSpec>& rings,
                                                   const std::vector<PointerJumpingResult>& jumps) {
    const auto& topo = engine.topology();
    std::vector<HypercubeOverlay> cubes(rings.size());
    std::vector<std::vector<std::int64_t>> ids(rings.size());

    for (std::size_t r = 0; r < rings.size(); ++r) {
        const auto& j = jumps[r];
        const std::size_t k = j.k;
        auto& cube = cubes[r];
        cube.k = k;
        cube.dimension = static_cast<int>(ceil_log2(k));
        cube.leader = rings[r].members[j.leader_position];
        ids[r].assign(k, -1);
        ids[r][j.leader_position] = 0;

        // Token along the binary decomposition of k, starting at the leader.
        const std::size_t lp = j.leader_position;
        const int top = std::bit_width(k) - 1;
        Payload pl = header(r, j.succ[lp][top]);
        pl.put(j.succ_angle[lp][top]).put(static_cast<std::uint64_t>(k - (std::size_t{1} << top)));
        engine.send_auto(cube.leader, rings[r].members[j.succ[lp][top]], "angle-token", std::move(pl));
    }

    auto distribute = [&](std::size_t r, std::size_t p, std::uint64_t id) {
        const auto& j = jumps[r];
        const auto& cube = cubes[r];
        const auto& m = rings[r].members;
        const int d = cube.dimension;
        const int low = id == 0 ? d : std::countr_zero(id);
        for (int b = 0; b < low; ++b) {
            const std::uint64_t child = id + (std::uint64_t{1} << b);
            if (child >= cube.k) continue;
            Payload pl = header(r, j.succ[p][b]);
            pl.put(child).put(cube.angle_sum);
            engine.send_auto(m[p], m[j.succ[p][b]], "hypercube-id", std::move(pl));
        }
        // Wire virtual slots hosted by id ^ 2^b to their real neighbour id + 2^(d-1).
        if (d >= 2 && id < (std::uint64_t{1} << (d - 1))) {
            const std::uint64_t half = std::uint64_t{1} << (d - 1);
            const std::uint64_t w = id + half;
            for (int b = 0; b < d - 1; ++b) {
                const std::uint64_t h = id ^ (std::uint64_t{1} << b);
                if (h + half < cube.k || w >= cube.k) continue;
                const std::size_t hp = (id >> b) & 1 ? j.pred[p][b] : j.succ[p][b];
                engine.introduce(m[p], m[hp], m[j.succ[p][d - 1]], "virtual-setup");
            }
        }
    };

    int rounds = 0;
    while (engine.has_pending()) {
        ++rounds;
        std::vector<std::tuple<std::size_t, std::size_t, std::uint64_t>> assigned;
        engine.step_round([&](NodeIndex, std::span<const Message> inbox) {
            for (const Message& msg : inbox) {
                if (msg.tag == "angle-token") {
                    PayloadReader rd(msg.payload);
                    const auto h = rd.get<Header>();
                    const double acc = rd.get<double>();
                    const auto remaining = rd.get<std::uint64_t>();
                    const auto& j = jumps[h.ring];
                    const auto& m = rings[h.ring].members;
                    if (remaining == 0) {
                        if (h.position != j.leader_position) throw Error(ErrorKind::ProtocolBug, "token lost");
                        cubes[h.ring].angle_sum = acc;
                        assigned.emplace_back(h.ring, h.position, 0);
                        continue;
                    }
                    const int b = std::bit_width(remaining) - 1;
                    const std::size_t next = j.succ[h.position][b];
                    Payload pl = header(h.ring, next);
                    pl.put(acc + j.succ_angle[h.position][b]).put(remaining - (std::uint64_t{1} << b));
                    engine.send_auto(m[h.position], m[next], "angle-token", std::move(pl));
                } else if (msg.tag == "hypercube-id") {
                    PayloadReader rd(msg.payload);
                    const auto h = rd.get<Header>();
                    const auto id = rd.get<std::uint64_t>();
                    cubes[h.ring].angle_sum = rd.get<double>();
                    if (ids[h.ring][h.position] != -1) throw Error(ErrorKind::ProtocolBug, "duplicate hypercube id");
                    ids[h.ring][h.position] = static_cast<std::int64_t>(id);
                    assigned.emplace_back(h.ring, h.position, id);
                }
            }
        });
        for (const auto& [r, p, id] : assigned) distribute(r, p, id);
        if (rounds > 400) throw Error(ErrorKind::ProtocolBug, "hypercube setup does not terminate");
    }

    for (std::size_t r = 0; r < rings.size(); ++r) {
        auto& cube = cubes[r];
        const std::size_t slots = std::size_t{1} << cube.dimension;
        cube.id_of_position.resize(cube.k);
        cube.position_of_slot.assign(slots, kNoPosition);
        cube.host_of_slot.assign(slots, kNoNode);
        for (std::size_t p = 0; p < cube.k; ++p) {
            const std::int64_t id = ids[r][p];
            if (id < 0) throw Error(ErrorKind::ProtocolBug, "participant without hypercube id");
            if (cube.position_of_slot[id] != kNoPosition) throw Error(ErrorKind::ProtocolBug, "duplicate hypercube id");
            cube.id_of_position[p] = static_cast<std::uint32_t>(id);
            cube.position_of_slot[id] = p;
            cube.host_of_slot[id] = rings[r].members[p];
        }
        for (std::size_t v = cube.k; v < slots; ++v) {
            cube.host_of_slot[v] = cube.host_of_slot[v - slots / 2];
        }
        (void)topo;
    }
    return cubes;
}

}  // namespace hybrid
