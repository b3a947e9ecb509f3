#include <doctest.h>

#include "semtex/engine.hpp"
#include "generators.hpp"
#include "test_support.hpp"

using namespace semtex;

using test::ScopingGenerator;

TEST_CASE("property: a group with only local assignments restores the snapshot") {
    ScopingGenerator gen(11);
    for (int n = 0; n < 500; ++n) CHECK(test::scoping_scenario_failure(gen, false) == "");
}

TEST_CASE("property: after a group only its global assignments survive") {
    ScopingGenerator gen(12);
    for (int n = 0; n < 500; ++n) CHECK(test::scoping_scenario_failure(gen, true) == "");
}

TEST_CASE("EngineState group API") {
    EngineState s(test::standard());
    s.set_count(5, 1);
    s.begin_group(GroupKind::Simple);
    s.set_count(5, 2);
    s.begin_group(GroupKind::SemiSimple);
    s.set_count(5, 3, true);
    s.set_count(5, 4);
    s.end_group(GroupKind::SemiSimple);
    CHECK(s.count(5) == 3);
    s.end_group(GroupKind::Simple);
    CHECK(s.count(5) == 3);
    CHECK(s.depth() == 1);
    CHECK_THROWS_AS(s.end_group(GroupKind::Simple), Error);
    s.begin_group(GroupKind::Simple);
    CHECK_THROWS_AS(s.end_group(GroupKind::SemiSimple), Error);
}
