#include "hybrid/simengine.h"

#include "hybrid/errors.h"

#include <algorithm>
#include <string>

namespace hybrid {

std::string_view to_string(Channel c) { return c == Channel::AdHoc ? "adhoc" : "longrange"; }

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RoundEngine::RoundEngine(HybridTopology topo, std::uint64_t seed) : topo_(std::move(topo)), seed_(seed) {
    const std::size_t n = topo_.size();
    knowledge_.resize(n);
    metrics_.resize(n);
    rngs_.reserve(n);
    for (NodeIndex v = 0; v < n; ++v) {
        knowledge_[v].insert(topo_.adhoc[v].begin(), topo_.adhoc[v].end());
        rngs_.emplace_back(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(topo_.ids[v]))));
    }
}

void RoundEngine::send(NodeIndex src, NodeIndex dst, Channel channel, std::string tag, Payload payload,
                       std::vector<NodeIndex> carried) {
    const std::size_t n = topo_.size();
    if (src >= n || dst >= n) throw Error(ErrorKind::Lookup, "send to unknown node");
    for (NodeIndex c : carried) {
        if (c >= n) throw Error(ErrorKind::Lookup, "carried id of unknown node");
        if (c != src && !knows(src, c)) {
            throw Error(ErrorKind::IllegalIntroduction,
                        "node " + std::to_string(topo_.ids[src]) + " hands over an id it does not know");
        }
    }
    Message m;
    m.src = topo_.ids[src];
    m.dst = topo_.ids[dst];
    m.src_index = src;
    m.dst_index = dst;
    m.channel = channel;
    m.tag = std::move(tag);
    m.payload = std::move(payload);
    m.carried = std::move(carried);
    m.sent_round = round_;
    if (src != dst) {
        const bool ok = channel == Channel::AdHoc ? topo_.adhoc_adjacent(src, dst) : knows(src, dst);
        if (!ok) {
            throw Error(ErrorKind::IllegalSend, std::string(to_string(channel)) + " send " +
                                                    std::to_string(m.src) + " -> " + std::to_string(m.dst) +
                                                    " without a link (" + m.tag + ")");
        }
        auto& mt = metrics_[src];
        (channel == Channel::AdHoc ? mt.adhoc_msgs : mt.longrange_msgs) += 1;
        mt.bytes_sent += m.payload.size() + 8 * m.carried.size();
        if (transcript_on_) {
            transcript_.push_back({round_, m.src, m.dst, channel, m.payload.size() + 8 * m.carried.size(), m.tag});
        }
    }
    pending_.push_back(std::move(m));
}

void RoundEngine::send_auto(NodeIndex src, NodeIndex dst, std::string tag, Payload payload,
                            std::vector<NodeIndex> carried) {
    const Channel ch = topo_.adhoc_adjacent(src, dst) ? Channel::AdHoc : Channel::LongRange;
    send(src, dst, ch, std::move(tag), std::move(payload), std::move(carried));
}

void RoundEngine::introduce(NodeIndex introducer, NodeIndex a, NodeIndex b, const std::string& tag) {
    const bool knows_a = a == introducer || knows(introducer, a);
    const bool knows_b = b == introducer || knows(introducer, b);
    if (!knows_a || !knows_b) {
        throw Error(ErrorKind::IllegalIntroduction,
                    "node " + std::to_string(topo_.ids[introducer]) + " introduces an id it does not know");
    }
    if (a == b) return;
    if (a != introducer) send_auto(introducer, a, tag, {}, {b});
    if (b != introducer) send_auto(introducer, b, tag, {}, {a});
}

RoundReport RoundEngine::step_round(const Handler& handler) {
    ++round_;
    const std::size_t n = topo_.size();
    std::vector<std::vector<Message>> inbox(n);
    std::vector<Message> delivering;
    delivering.swap(pending_);
    for (Message& m : delivering) {
        const NodeIndex d = m.dst_index;
        if (m.src_index != d) {
            knowledge_[d].insert(m.src_index);
            metrics_[d].received += 1;
        }
        for (NodeIndex c : m.carried) {
            if (c != d) knowledge_[d].insert(c);
        }
        inbox[d].push_back(std::move(m));
    }
    for (NodeIndex v = 0; v < n; ++v) {
        metrics_[v].max_inbox = std::max<std::uint64_t>(metrics_[v].max_inbox, inbox[v].size());
    }
    if (handler) {
        for (NodeIndex v = 0; v < n; ++v) {
            try {
                handler(v, inbox[v]);
            } catch (const Error& e) {
                throw Error(ErrorKind::SimulationAbort, "node " + std::to_string(topo_.ids[v]) + " round " +
                                                            std::to_string(round_) + ": " + e.what());
            } catch (const std::exception& e) {
                throw Error(ErrorKind::SimulationAbort, "node " + std::to_string(topo_.ids[v]) + " round " +
                                                            std::to_string(round_) + ": " + e.what());
            }
        }
    }
    return {round_, delivering.size()};
}

void RoundEngine::charge_rounds(std::int64_t rounds) {
    if (rounds < 0) throw Error(ErrorKind::InvalidArgument, "negative round charge");
    round_ += rounds;
    if (phase_open_) current_.charged_rounds += rounds;
}

bool RoundEngine::knows(NodeIndex a, NodeIndex b) const { return knowledge_.at(a).count(b) != 0; }

void RoundEngine::grant_knowledge(NodeIndex a, NodeIndex b) {
    if (a != b) knowledge_.at(a).insert(b);
}

void RoundEngine::forget(NodeIndex a, NodeIndex b) { knowledge_.at(a).erase(b); }

void RoundEngine::begin_phase(std::string name) {
    if (phase_open_) throw Error(ErrorKind::ProtocolBug, "phase " + current_.name + " still open");
    phase_open_ = true;
    current_ = PhaseMetrics{};
    current_.name = std::move(name);
    phase_start_round_ = round_;
    phase_start_metrics_ = metrics_;
}

PhaseMetrics RoundEngine::end_phase() {
    if (!phase_open_) throw Error(ErrorKind::ProtocolBug, "no open phase");
    phase_open_ = false;
    current_.rounds = round_ - phase_start_round_;
    for (std::size_t v = 0; v < metrics_.size(); ++v) {
        const auto ad = metrics_[v].adhoc_msgs - phase_start_metrics_[v].adhoc_msgs;
        const auto lr = metrics_[v].longrange_msgs - phase_start_metrics_[v].longrange_msgs;
        current_.adhoc_msgs += ad;
        current_.longrange_msgs += lr;
        current_.max_per_node_msgs = std::max(current_.max_per_node_msgs, ad + lr);
        current_.max_per_node_longrange = std::max(current_.max_per_node_longrange, lr);
    }
    phases_.push_back(current_);
    return current_;
}

}  // namespace hybrid
