#pragma once

#include "hybrid/errors.h"
#include "hybrid/topology.h"

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <type_traits>
#include <unordered_set>
#include <vector>

namespace hybrid {

enum class Channel { AdHoc, LongRange };

std::string_view to_string(Channel c);

/// Opaque message body. Protocols append trivially copyable values and read
/// them back in order; the byte count feeds bandwidth accounting.
class Payload {
public:
    template <class T>
        requires std::is_trivially_copyable_v<T>
    Payload& put(const T& value) {
        const auto* p = reinterpret_cast<const std::byte*>(&value);
        bytes_.insert(bytes_.end(), p, p + sizeof(T));
        return *this;
    }

    std::size_t size() const { return bytes_.size(); }
    const std::vector<std::byte>& bytes() const { return bytes_; }

private:
    std::vector<std::byte> bytes_;
};

class PayloadReader {
public:
    explicit PayloadReader(const Payload& p) : bytes_(p.bytes()) {}

    template <class T>
        requires std::is_trivially_copyable_v<T>
    T get() {
        if (cursor_ + sizeof(T) > bytes_.size()) throw Error(ErrorKind::ProtocolBug, "payload underrun");
        T value;
        std::memcpy(&value, bytes_.data() + cursor_, sizeof(T));
        cursor_ += sizeof(T);
        return value;
    }

    bool done() const { return cursor_ == bytes_.size(); }

private:
    const std::vector<std::byte>& bytes_;
    std::size_t cursor_ = 0;
};

struct Message {
    NodeId src = 0;
    NodeId dst = 0;
    NodeIndex src_index = 0;
    NodeIndex dst_index = 0;
    Channel channel = Channel::AdHoc;
    std::string tag;
    Payload payload;
    std::vector<NodeIndex> carried;  // IDs handed over, learned by dst on delivery
    std::int64_t sent_round = 0;
};

struct NodeMetrics {
    std::uint64_t adhoc_msgs = 0;
    std::uint64_t longrange_msgs = 0;
    std::uint64_t bytes_sent = 0;
    std::uint64_t received = 0;
    std::uint64_t max_inbox = 0;
};

struct PhaseMetrics {
    std::string name;
    std::int64_t rounds = 0;
    std::int64_t charged_rounds = 0;  // part of rounds accounted without simulation
    std::uint64_t adhoc_msgs = 0;
    std::uint64_t longrange_msgs = 0;
    std::uint64_t max_per_node_msgs = 0;
    std::uint64_t max_per_node_longrange = 0;
};

struct RoundReport {
    std::int64_t round = 0;
    std::size_t delivered = 0;
};

struct TranscriptRecord {
    std::int64_t round = 0;
    NodeId src = 0;
    NodeId dst = 0;
    Channel channel = Channel::AdHoc;
    std::size_t bytes = 0;
    std::string tag;
};

/// Synchronous hybrid-network simulator. Messages sent during round r are
/// delivered at the start of round r+1; handlers run in ascending NodeId order.
class RoundEngine {
public:
    using Handler = std::function<void(NodeIndex, std::span<const Message>)>;

    RoundEngine(HybridTopology topo, std::uint64_t seed);

    const HybridTopology& topology() const { return topo_; }
    std::int64_t round() const { return round_; }
    std::uint64_t seed() const { return seed_; }

    void send(NodeIndex src, NodeIndex dst, Channel channel, std::string tag, Payload payload = {},
              std::vector<NodeIndex> carried = {});
    /// Sends over the ad hoc link when one exists, otherwise over the long-range link.
    void send_auto(NodeIndex src, NodeIndex dst, std::string tag, Payload payload = {},
                   std::vector<NodeIndex> carried = {});
    void introduce(NodeIndex introducer, NodeIndex a, NodeIndex b, const std::string& tag = "introduce");

    RoundReport step_round(const Handler& handler);
    /// Advances the clock without traffic; used for protocols whose cost is charged by contract.
    void charge_rounds(std::int64_t rounds);
    bool has_pending() const { return !pending_.empty(); }

    bool knows(NodeIndex a, NodeIndex b) const;
    /// Adds b to a's knowledge outside of the message flow (test and harness setup only).
    void grant_knowledge(NodeIndex a, NodeIndex b);
    void forget(NodeIndex a, NodeIndex b);
    std::size_t knowledge_size(NodeIndex a) const { return knowledge_[a].size(); }

    std::mt19937_64& rng(NodeIndex v) { return rngs_[v]; }

    void begin_phase(std::string name);
    PhaseMetrics end_phase();
    bool in_phase() const { return phase_open_; }
    const std::vector<PhaseMetrics>& phases() const { return phases_; }

    const std::vector<NodeMetrics>& node_metrics() const { return metrics_; }

    void enable_transcript(bool on) { transcript_on_ = on; }
    const std::vector<TranscriptRecord>& transcript() const { return transcript_; }

private:
    HybridTopology topo_;
    std::uint64_t seed_;
    std::int64_t round_ = 0;
    std::vector<Message> pending_;
    std::vector<std::unordered_set<NodeIndex>> knowledge_;
    std::vector<NodeMetrics> metrics_;
    std::vector<std::mt19937_64> rngs_;

    bool phase_open_ = false;
    PhaseMetrics current_;
    std::int64_t phase_start_round_ = 0;
    std::vector<NodeMetrics> phase_start_metrics_;
    std::vector<PhaseMetrics> phases_;

    bool transcript_on_ = false;
    std::vector<TranscriptRecord> transcript_;
};

}  // namespace hybrid
