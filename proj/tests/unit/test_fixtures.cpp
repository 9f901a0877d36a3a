#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ftlearn/trace.hpp"

using namespace ftlearn;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = FTLEARN_FIXTURES_DIR;

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("childsnack fixture domain matches the expected vocabulary") {
    Domain d = parse_domain(slurp(kFixtures / "childsnack" / "domain.pddl"));
    for (const char* name :
         {"served", "at_kitchen_sandwich", "no_gluten_sandwich", "ontray", "at",
          "waiting", "notexist"})
        CHECK(d.find_predicate(name).has_value());
    CHECK(d.predicates[d.require_predicate("served")].arity() == 1);
    CHECK(d.predicates[d.require_predicate("ontray")].arity() == 2);
    CHECK(d.schemas.size() == 6);
    // kitchen is a place subtype so formulas can quantify over it.
    CHECK(d.types.subtype_of(d.types.require("kitchen"), d.types.require("place")));
}

TEST_CASE("three-child instance declares the expected object count") {
    Domain d = parse_domain(slurp(kFixtures / "childsnack" / "domain.pddl"));
    Instance i = parse_instance(
        slurp(kFixtures / "childsnack" / "instances" / "childsnack03.pddl"), d);
    // 3 children + 3 breads + 3 contents + 3 sandwiches + tray + table + kitchen.
    CHECK(i.num_objects() == 15);
    CHECK(i.goal.size() == 3);
}

TEST_CASE("replaying the shipped plans reproduces the shipped traces") {
    Domain d = parse_domain(slurp(kFixtures / "childsnack" / "domain.pddl"));
    for (const std::string split : {"train", "test"}) {
        for (const std::string agent : {"gs", "ngf", "ngl"}) {
            const fs::path dir = kFixtures / "childsnack" / "traces" / split / agent;
            for (const auto& entry : fs::directory_iterator(dir)) {
                const std::string name = entry.path().filename().string();
                const std::string base = name.substr(0, name.find('.'));
                auto inst = std::make_shared<const Instance>(parse_instance(
                    slurp(kFixtures / "childsnack" / "instances" / (base + ".pddl")),
                    d));
                auto plan = parse_plan(slurp(kFixtures / "childsnack" / "plans" /
                                             agent / (base + ".plan")));
                InstantiatedTrace replayed = plan_to_trace(inst, plan, d);
                CHECK(replayed.length() == static_cast<int>(plan.size()) + 1);
                // Byte-identical to the shipped golden file.
                CHECK(serialize_trace(replayed, d) == slurp(entry.path()));
            }
        }
    }
}

TEST_CASE("shipped trace lengths stay within the documented envelope") {
    Domain d = parse_domain(slurp(kFixtures / "childsnack" / "domain.pddl"));
    Instance i3 = parse_instance(
        slurp(kFixtures / "childsnack" / "instances" / "childsnack03.pddl"), d);
    auto inst = std::make_shared<const Instance>(std::move(i3));
    InstantiatedTrace t = load_trace(
        slurp(kFixtures / "childsnack" / "traces" / "train" / "ngf" /
              "childsnack03.trace.json"),
        d, inst);
    CHECK(t.length() == 11);
    for (const std::string split : {"train", "test"}) {
        for (const std::string agent : {"gs", "ngf", "ngl"}) {
            const fs::path dir = kFixtures / "childsnack" / "traces" / split / agent;
            for (const auto& entry : fs::directory_iterator(dir)) {
                const std::string name = entry.path().filename().string();
                const std::string base = name.substr(0, name.find('.'));
                auto einst = std::make_shared<const Instance>(parse_instance(
                    slurp(kFixtures / "childsnack" / "instances" / (base + ".pddl")),
                    d));
                InstantiatedTrace loaded = load_trace(slurp(entry.path()), d, einst);
                CHECK(loaded.length() >= 5);
                CHECK(loaded.length() <= 15);
            }
        }
    }
}

TEST_CASE("spanner fixtures: the ALL agent picks every spanner") {
    Domain d = parse_domain(slurp(kFixtures / "spanner" / "domain.pddl"));
    for (const std::string name : {"spanner01", "spanner02"}) {
        auto inst = std::make_shared<const Instance>(parse_instance(
            slurp(kFixtures / "spanner" / "instances" / (name + ".pddl")), d));
        auto plan =
            parse_plan(slurp(kFixtures / "spanner" / "plans" / "all" / (name + ".plan")));
        InstantiatedTrace t = plan_to_trace(inst, plan, d);
        const PredId carrying = d.require_predicate("carrying");
        const ObjId bob = inst->require_object("bob");
        for (ObjId o : inst->objects_of_type(d.types, d.types.require("spanner"))) {
            bool carried = false;
            for (const auto& s : t.states)
                if (s.contains({carrying, {bob, o}})) carried = true;
            CHECK(carried);
        }
    }
}
