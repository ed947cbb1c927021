#include "hybrid/errors.h"
#include "hybrid/simengine.h"

#include <gtest/gtest.h>

using namespace hybrid;

namespace {

// Path 0-1-2-3 with unit spacing 0.9.
HybridTopology line4() {
    return build_udg({{10, {0, 0}}, {11, {0.9, 0}}, {12, {1.8, 0}}, {13, {2.7, 0}}});
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::NotReady;
}

}  // namespace

TEST(Simengine, DeliveryHappensNextRound) {
    RoundEngine eng(line4(), 1);
    eng.send(0, 1, Channel::AdHoc, "hello", Payload{}.put(std::int32_t{42}));
    int seen = 0;
    const auto r = eng.step_round([&](NodeIndex v, std::span<const Message> in) {
        if (v != 1) {
            EXPECT_TRUE(in.empty());
            return;
        }
        ASSERT_EQ(in.size(), 1u);
        EXPECT_EQ(in[0].src, 10);
        EXPECT_EQ(in[0].tag, "hello");
        EXPECT_EQ(in[0].sent_round, 0);
        PayloadReader rd(in[0].payload);
        EXPECT_EQ(rd.get<std::int32_t>(), 42);
        EXPECT_TRUE(rd.done());
        ++seen;
    });
    EXPECT_EQ(seen, 1);
    EXPECT_EQ(r.round, 1);
    EXPECT_EQ(r.delivered, 1u);
    EXPECT_FALSE(eng.has_pending());
}

TEST(Simengine, SendsWithoutLinkAreRejected) {
    RoundEngine eng(line4(), 1);
    EXPECT_EQ(kind_of([&] { eng.send(0, 2, Channel::AdHoc, "x"); }), ErrorKind::IllegalSend);
    EXPECT_EQ(kind_of([&] { eng.send(0, 2, Channel::LongRange, "x"); }), ErrorKind::IllegalSend);
    EXPECT_EQ(kind_of([&] { eng.send(0, 9, Channel::AdHoc, "x"); }), ErrorKind::Lookup);
}

TEST(Simengine, IntroductionSpreadsKnowledge) {
    RoundEngine eng(line4(), 1);
    EXPECT_FALSE(eng.knows(0, 2));
    eng.introduce(1, 0, 2);
    eng.step_round({});
    EXPECT_TRUE(eng.knows(0, 2));
    EXPECT_TRUE(eng.knows(2, 0));
    eng.send(0, 2, Channel::LongRange, "direct");
    eng.step_round({});
}

TEST(Simengine, HandingOverUnknownIdIsIllegal) {
    RoundEngine eng(line4(), 1);
    EXPECT_EQ(kind_of([&] { eng.introduce(0, 1, 3); }), ErrorKind::IllegalIntroduction);
    EXPECT_EQ(kind_of([&] { eng.send(0, 1, Channel::AdHoc, "x", {}, {3}); }), ErrorKind::IllegalIntroduction);
}

TEST(Simengine, HandlerFailuresAbortTheSimulation) {
    RoundEngine eng(line4(), 1);
    eng.send(0, 1, Channel::AdHoc, "empty");
    const ErrorKind k = kind_of([&] {
        eng.step_round([](NodeIndex, std::span<const Message> in) {
            for (const Message& m : in) PayloadReader(m.payload).get<double>();
        });
    });
    EXPECT_EQ(k, ErrorKind::SimulationAbort);
}

TEST(Simengine, PayloadUnderrun) {
    Payload p;
    p.put(std::uint8_t{1});
    PayloadReader rd(p);
    EXPECT_EQ(kind_of([&] { rd.get<std::uint64_t>(); }), ErrorKind::ProtocolBug);
}

TEST(Simengine, PhaseMetricsCountPerPhase) {
    RoundEngine eng(line4(), 1);
    eng.begin_phase("a");
    eng.send(0, 1, Channel::AdHoc, "x");
    eng.send(1, 2, Channel::AdHoc, "x");
    eng.step_round({});
    eng.charge_rounds(3);
    const PhaseMetrics pa = eng.end_phase();
    EXPECT_EQ(pa.rounds, 4);
    EXPECT_EQ(pa.charged_rounds, 3);
    EXPECT_EQ(pa.adhoc_msgs, 2u);
    EXPECT_EQ(pa.max_per_node_msgs, 1u);
    eng.begin_phase("b");
    eng.grant_knowledge(0, 3);
    eng.send(0, 3, Channel::LongRange, "y");
    eng.send(0, 3, Channel::LongRange, "y");
    eng.step_round({});
    const PhaseMetrics pb = eng.end_phase();
    EXPECT_EQ(pb.rounds, 1);
    EXPECT_EQ(pb.adhoc_msgs, 0u);
    EXPECT_EQ(pb.longrange_msgs, 2u);
    EXPECT_EQ(pb.max_per_node_longrange, 2u);
    EXPECT_EQ(eng.phases().size(), 2u);
    EXPECT_EQ(kind_of([&] { eng.end_phase(); }), ErrorKind::ProtocolBug);
    EXPECT_EQ(kind_of([&] { eng.charge_rounds(-1); }), ErrorKind::InvalidArgument);
}

TEST(Simengine, TranscriptAndRngAreDeterministic) {
    auto run = [] {
        RoundEngine eng(line4(), 77);
        eng.enable_transcript(true);
        for (int r = 0; r < 5; ++r) {
            for (NodeIndex v = 0; v < 3; ++v) {
                if (eng.rng(v)() % 2) eng.send(v, v + 1, Channel::AdHoc, "coin");
            }
            eng.step_round({});
        }
        std::vector<std::string> out;
        for (const auto& t : eng.transcript()) {
            out.push_back(std::to_string(t.round) + ":" + std::to_string(t.src) + ">" + std::to_string(t.dst));
        }
        return out;
    };
    EXPECT_EQ(run(), run());
    EXPECT_FALSE(run().empty());
}
