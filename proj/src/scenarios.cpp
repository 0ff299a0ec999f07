#include "dirtsch/scenarios.hpp"

#include <algorithm>
#include <sstream>

#include "dirtsch/errors.hpp"
#include "dirtsch/fixtures.hpp"
#include "dirtsch/schedule.hpp"
#include "dirtsch/scheduler.hpp"

namespace dirtsch {

namespace {

// Single-channel slotframe used by the worked examples.
ScheduleParams paperParams() { return ScheduleParams{16, 1}; }

struct Check {
    ScenarioOutcome& out;

    void expect(bool ok, const std::string& what) {
        out.lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
        if (!ok) out.pass = false;
    }
};

// The three concurrent transmissions of the single-channel example:
// n2->n0, n4->n1, n10->n3.
std::vector<std::pair<NodeId, NodeId>> threeTxLinks() { return {{2, 0}, {4, 1}, {10, 3}}; }

Schedule allocateDemands(Mode mode, const Topology& topo, const BeamConfig& beams,
                         const ScheduleParams& params,
                         const std::vector<std::pair<NodeId, NodeId>>& links, int cells_each,
                         std::vector<std::pair<NodeId, NodeId>>* unplaced = nullptr) {
    Schedule sched(mode, params);
    for (const auto& [tx, rx] : links) {
        for (int i = 0; i < cells_each; ++i) {
            auto cell = sched.firstFit(tx, rx, topo, beams);
            if (!cell) {
                if (unplaced) unplaced->push_back({tx, rx});
                break;
            }
            sched.allocate(*cell, topo, beams);
        }
    }
    return sched;
}

ScenarioOutcome scenarioThreeTx(Mode mode) {
    ScenarioOutcome out{mode == Mode::Directional ? "dir-3tx" : "omni-3tx", true, {}};
    Check check{out};
    const Topology topo = exampleTopology16();
    const BeamConfig beams;
    Schedule sched = allocateDemands(mode, topo, beams, paperParams(), threeTxLinks(), 1);
    check.expect(sched.cells().size() == 3, "all three transmissions hold a cell");
    const int expected = mode == Mode::Directional ? 1 : 3;
    check.expect(sched.scheduleLength() == expected,
                 "schedule length is " + std::to_string(sched.scheduleLength()) +
                     ", expected " + std::to_string(expected));
    check.expect(findScheduleViolations(sched, topo, beams).empty(), "schedule is conflict-free");
    return out;
}

ScenarioOutcome scenarioFourNode() {
    ScenarioOutcome out{"four-node", true, {}};
    Check check{out};
    const Topology topo = fourNodeTopology();
    const BeamConfig beams;
    const ScheduleParams params{4, 1};  // one cycle is exactly the four slots pair (A,B) needs
    const std::vector<std::pair<NodeId, NodeId>> links{{0, 1}, {2, 3}};

    std::vector<std::pair<NodeId, NodeId>> unplaced_dir;
    Schedule dir = allocateDemands(Mode::Directional, topo, beams, params, links, 4, &unplaced_dir);
    auto slotsOf = [](const Schedule& s, NodeId tx) {
        std::set<int> slots;
        for (const Cell& c : s.cells())
            if (c.tx == tx) slots.insert(c.slot);
        return slots;
    };
    const std::set<int> all{0, 1, 2, 3};
    check.expect(slotsOf(dir, 0) == all, "directional: pair (A,B) holds slots 0-3");
    check.expect(slotsOf(dir, 2) == all, "directional: pair (C,D) holds the same four slots");
    check.expect(unplaced_dir.empty(), "directional: no pair is pushed to the next cycle");
    check.expect(findScheduleViolations(dir, topo, beams).empty(),
                 "directional schedule is conflict-free");

    std::vector<std::pair<NodeId, NodeId>> unplaced_omni;
    Schedule omni = allocateDemands(Mode::Omni, topo, beams, params, links, 4, &unplaced_omni);
    check.expect(slotsOf(omni, 0) == all, "omni: pair (A,B) fills the cycle");
    check.expect(slotsOf(omni, 2).empty() &&
                     unplaced_omni == std::vector<std::pair<NodeId, NodeId>>{{2, 3}},
                 "omni: pair (C,D) holds no cell in the first cycle");
    return out;
}

ScenarioOutcome scenarioWalkthrough() {
    ScenarioOutcome out{"walkthrough", true, {}};
    Check check{out};
    const Topology topo = exampleTopology16();
    const Tree tree = Tree::build(topo);
    SchedulingResult res = runSchedulingPeriod(topo, tree, walkthroughBacklog(),
                                               Mode::Directional, TimerPolicy{64}, BeamConfig{},
                                               paperParams());

    const auto& golden = walkthroughGoldenTrace();
    bool equal = res.trace == golden;
    check.expect(equal, "trace matches the golden walkthrough transcript (" +
                            std::to_string(res.trace.size()) + " events)");
    if (!equal) {
        for (std::size_t i = 0; i < std::max(golden.size(), res.trace.size()); ++i) {
            const std::string want = i < golden.size() ? golden[i] : "<none>";
            const std::string got = i < res.trace.size() ? res.trace[i] : "<none>";
            if (want != got)
                out.lines.push_back("     line " + std::to_string(i + 1) + ": expected '" +
                                    want + "' got '" + got + "'");
        }
    }

    // The narrated order, as a subsequence of the full trace.
    const std::vector<std::string> narrative{
        "RTS n2->n0",      "CTS n0",          "NAV n2",          "MODE n1 receiving",
        "MODE n3 receiving", "RTS n4->n1",    "MODE n5 receiving",
    };
    std::size_t pos = 0;
    for (const std::string& line : res.trace) {
        if (pos < narrative.size() && line.find(narrative[pos]) != std::string::npos) ++pos;
    }
    check.expect(pos == narrative.size(), "narrated event order holds");
    check.expect(res.final_modes.at(2) == NodeMode::Sending &&
                     res.final_modes.at(1) == NodeMode::Receiving &&
                     res.final_modes.at(3) == NodeMode::Receiving,
                 "n2 ends sending; n1 and n3 end receiving");
    check.expect(findScheduleViolations(res.schedule, topo, BeamConfig{}).empty(),
                 "confirmed cells are conflict-free");
    return out;
}

ScenarioOutcome scenarioTree16() {
    ScenarioOutcome out{"tree16", true, {}};
    Check check{out};
    const Topology topo = exampleTopology16();
    const Tree tree = Tree::build(topo);

    const std::map<NodeId, NodeId> expected_parent{
        {1, 0}, {2, 0}, {3, 0}, {4, 1},  {5, 1},  {6, 2},  {7, 2}, {8, 2},
        {9, 3}, {10, 3}, {11, 4}, {12, 4}, {13, 5}, {14, 6}, {15, 6}};
    bool parents_ok = true;
    for (const auto& [node, parent] : expected_parent)
        parents_ok = parents_ok && tree.parent(node) == parent;
    check.expect(parents_ok, "tree matches the example network (n1,n2,n3 under the sink)");
    check.expect(tree.depth() == 3, "tree has three levels");

    auto subtrees = tree.topSubtrees();
    std::set<NodeId> covered;
    for (const auto& ts : subtrees) covered.insert(ts.members.begin(), ts.members.end());
    check.expect(subtrees.size() == 3 && covered.size() == 15,
                 "three top-subtrees partition the fifteen non-sink nodes");

    const auto loads = walkthroughBacklog();
    SchedulingResult dir = runSchedulingPeriod(topo, tree, loads, Mode::Directional,
                                               TimerPolicy{64}, BeamConfig{}, paperParams());
    SchedulingResult omni =
        omniBaseline(topo, tree, loads, TimerPolicy{64}, paperParams());
    check.expect(dir.schedule.scheduleLength() <= omni.schedule.scheduleLength(),
                 "directional schedule (" + std::to_string(dir.schedule.scheduleLength()) +
                     " slots) is no longer than omni (" +
                     std::to_string(omni.schedule.scheduleLength()) + ")");
    check.expect(findScheduleViolations(dir.schedule, topo, BeamConfig{}).empty() &&
                     findScheduleViolations(omni.schedule, topo, BeamConfig{}).empty(),
                 "both schedules pass the conflict checker");
    return out;
}

}  // namespace

std::vector<std::string> scenarioNames() {
    return {"four-node", "omni-3tx", "dir-3tx", "walkthrough", "tree16"};
}

ScenarioOutcome runScenario(const std::string& name) {
    if (name == "dir-3tx") return scenarioThreeTx(Mode::Directional);
    if (name == "omni-3tx") return scenarioThreeTx(Mode::Omni);
    if (name == "four-node") return scenarioFourNode();
    if (name == "walkthrough") return scenarioWalkthrough();
    if (name == "tree16") return scenarioTree16();
    throw LookupError("unknown scenario '" + name + "'");
}

const std::vector<std::string>& walkthroughGoldenTrace() {
    static const std::vector<std::string> golden{
        "s0 t0 TIMER n1=4",
        "s0 t0 TIMER n2=2",
        "s0 t0 TIMER n3=8",
        "s0 t2 RTS n2->n0 want=0/0 n2->n0 beams=1/3",
        "s0 t2 MODE n0 receiving",
        "s0 t2 CTS n0 grant=0/0 n2->n0 beams=1/3",
        "s0 t2 MODE n2 sending",
        "s0 t2 NAV n2 cell=0/0 n2->n0 beams=1/3",
        "s0 t2 ADV n2 cell=0/0 n2->n0 beams=1/3",
        "s0 t4 MODE n1 receiving",
        "s0 t4 AVAIL n1",
        "s0 t8 MODE n3 receiving",
        "s0 t8 AVAIL n3",
        "s1 t0 TIMER n4=2",
        "s1 t0 TIMER n5=4",
        "s1 t0 TIMER n6=6",
        "s1 t0 TIMER n7=8",
        "s1 t0 TIMER n8=10",
        "s1 t0 TIMER n9=16",
        "s1 t0 TIMER n10=2",
        "s1 t2 RTS n4->n1 want=0/0 n4->n1 beams=1/3",
        "s1 t2 CTS n1 grant=0/0 n4->n1 beams=1/3",
        "s1 t2 MODE n4 sending",
        "s1 t2 NAV n4 cell=0/0 n4->n1 beams=1/3",
        "s1 t2 ADV n4 cell=0/0 n4->n1 beams=1/3",
        "s1 t2 RTS n10->n3 want=0/0 n10->n3 beams=2/4",
        "s1 t2 CTS n3 grant=0/0 n10->n3 beams=2/4",
        "s1 t2 MODE n10 sending",
        "s1 t2 ADV n10 cell=0/0 n10->n3 beams=2/4",
        "s1 t4 MODE n5 receiving",
        "s1 t4 AVAIL n5",
        "s1 t6 MODE n6 receiving",
        "s1 t6 AVAIL n6",
        "s1 t8 MODE n7 idle",
        "s1 t10 MODE n8 idle",
        "s1 t16 MODE n9 idle",
        "s2 t0 TIMER n11=21",
        "s2 t0 TIMER n12=32",
        "s2 t0 TIMER n13=2",
        "s2 t0 TIMER n14=4",
        "s2 t0 TIMER n15=16",
        "s2 t2 RTS n13->n5 want=0/0 n13->n5 beams=3/1",
        "s2 t2 CTS n5 grant=1/0 n13->n5 beams=3/1",
        "s2 t2 MODE n13 sending",
        "s2 t2 ADV n13 cell=1/0 n13->n5 beams=3/1",
        "s2 t4 RTS n14->n6 want=0/0 n14->n6 beams=2/4",
        "s2 t4 CTS n6 grant=0/0 n14->n6 beams=2/4",
        "s2 t4 MODE n14 sending",
        "s2 t4 ADV n14 cell=0/0 n14->n6 beams=2/4",
        "s2 t16 MODE n15 idle",
        "s2 t21 MODE n11 idle",
        "s2 t32 MODE n12 idle",
    };
    return golden;
}

}  // namespace dirtsch
