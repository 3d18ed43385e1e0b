#include "enerbase/errors.hpp"
#include "enerbase/reference.hpp"

#include <doctest.h>

#include <string>

#include "helpers.hpp"

using namespace enerbase;
using testsupport::TempDir;
using testsupport::ValueGen;
using testsupport::write_text;

namespace {

ReferenceProfile sample_profile() {
    ReferenceProfile p;
    p.country = "EL";
    p.source_label = "synthetic";
    p.monthly_kwh = {310, 280, 260, 230, 210, 200, 220, 230, 210, 240, 270, 300};
    return p;
}

} // namespace

TEST_CASE("a well-formed profile loads as written") {
    TempDir dir("ref");
    write_text(dir.file("p.json"),
               R"({"country":"EL","source":"synthetic","monthly_kwh":)"
               R"([310,280,260,230,210,200,220,230,210,240,270,300]})");
    const ReferenceProfile p = load_reference_profile(dir.file("p.json"));
    CHECK(p == sample_profile());
}

TEST_CASE("wrong cardinality names the count") {
    TempDir dir("ref");
    write_text(dir.file("p.json"),
               R"({"country":"EL","monthly_kwh":[1,2,3,4,5,6,7,8,9,10,11]})");
    try {
        load_reference_profile(dir.file("p.json"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("expected 12 monthly values, found 11") !=
              std::string::npos);
    }
}

TEST_CASE("non-positive entries name the month") {
    TempDir dir("ref");
    write_text(dir.file("p.json"),
               R"({"country":"EL","monthly_kwh":[310,280,0.0,230,210,200,220,230,210,240,270,300]})");
    try {
        load_reference_profile(dir.file("p.json"));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("month 3") != std::string::npos);
    }
}

TEST_CASE("bad country codes are rejected") {
    ReferenceProfile p = sample_profile();
    p.country = "Greece";
    CHECK_THROWS_AS(validate_profile(p), ValidationError);
    p.country = "el";
    CHECK_THROWS_AS(validate_profile(p), ValidationError);
    p.country = "";
    CHECK_THROWS_AS(validate_profile(p), ValidationError);
}

TEST_CASE("load after save is the identity on generated profiles") {
    TempDir dir("ref");
    ValueGen gen(404);
    const std::string codes = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    for (int trial = 0; trial < 25; ++trial) {
        ReferenceProfile p;
        p.country.push_back(codes[gen.index(26)]);
        p.country.push_back(codes[gen.index(26)]);
        p.source_label = "generated profile " + std::to_string(trial);
        for (double& v : p.monthly_kwh) v = gen.uniform(1.0, 900.0);
        save_reference_profile(p, dir.file("g.json"));
        const ReferenceProfile back = load_reference_profile(dir.file("g.json"));
        CHECK(back == p);
        CHECK_NOTHROW(validate_profile(back));
    }
}
