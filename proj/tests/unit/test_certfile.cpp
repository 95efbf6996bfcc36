#include "doctest.h"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "shiftprod/certfile.hpp"
#include "shiftprod/errors.hpp"

using namespace shiftprod;
using nlohmann::json;

#ifndef SHIFTPROD_DATA_DIR
#define SHIFTPROD_DATA_DIR "data"
#endif

namespace {
const std::string kDataDir = SHIFTPROD_DATA_DIR;
}

TEST_CASE("bundled sources parse and match the data directory") {
    for (const auto& [name, text] : bundled_sources()) {
        // embedded copy parses
        const CertFile from_embedded = parse_cert(json::parse(text));
        // and equals the on-disk file
        const CertFile from_disk = load_cert_file(kDataDir + "/" + name);
        CHECK(cert_to_json(from_embedded) == cert_to_json(from_disk));
    }
    CHECK(bundled_sources().size() == 5);
}

TEST_CASE("bundled certificates verify") {
    CHECK(verify_chain(bundled_chain("chain-a")).valid());
    CHECK(verify_chain(bundled_chain("chain-b")).valid());
    CHECK(verify_case_bundle(bundled_cases()).valid);
    CHECK_THROWS_AS(bundled_chain("chain-z"), DomainError);

    for (const char* name : {"lemma7_953.json", "lemma7_661.json"}) {
        const CertFile f = load_cert_file(kDataDir + "/" + name);
        REQUIRE(f.kind == CertFile::Kind::ExactDiv);
        CHECK_FALSE(verify_exact_div(std::get<ExactDivCert>(f.payload)).has_value());
    }
}

TEST_CASE("round trip through save and load") {
    const std::string tmp = "roundtrip_test.json";
    for (const char* name :
         {"chain_a.json", "chain_b.json", "lemma7_953.json", "case_bundle.json"}) {
        const CertFile original = load_cert_file(kDataDir + "/" + std::string(name));
        save_cert_file(original, tmp);
        const CertFile reloaded = load_cert_file(tmp);
        CHECK(cert_to_json(original) == cert_to_json(reloaded));
    }
    std::remove(tmp.c_str());
}

TEST_CASE("large integers serialize as decimal strings") {
    ExactDivCert cert;
    cert.p = (std::uint64_t(1) << 53) + 5;
    cert.a = 2;
    cert.n = (std::uint64_t(1) << 60);
    cert.d1 = 3;
    cert.exponents = {1};
    CertFile file;
    file.kind = CertFile::Kind::ExactDiv;
    file.payload = cert;

    const json j = cert_to_json(file);
    CHECK(j["payload"]["p"].is_string());
    CHECK(j["payload"]["n"].is_string());
    CHECK(j["payload"]["a"].is_number());

    const CertFile back = parse_cert(j);
    const auto& c2 = std::get<ExactDivCert>(back.payload);
    CHECK(c2.p == cert.p);
    CHECK(c2.n == cert.n);
}

TEST_CASE("schema violations raise SchemaError") {
    CHECK_THROWS_AS(parse_cert(json::parse("{}")), SchemaError);
    CHECK_THROWS_AS(parse_cert(json::parse(R"({"schema_version":"2","kind":"chain","payload":{}})")),
                    SchemaError);
    CHECK_THROWS_AS(parse_cert(json::parse(R"({"schema_version":"1","kind":"nope","payload":{}})")),
                    SchemaError);
    CHECK_THROWS_AS(
        parse_cert(json::parse(
            R"({"schema_version":"1","kind":"chain","payload":{"mode":"odd-coprime"}})")),
        SchemaError);
    CHECK_THROWS_AS(
        parse_cert(json::parse(
            R"({"schema_version":"1","kind":"lemma7","payload":{"p":-3,"a":2,"n":5,"d1":1,"exponents":[1]}})")),
        SchemaError);
    CHECK_THROWS_AS(
        parse_cert(json::parse(
            R"({"schema_version":"1","kind":"case-bundle","payload":{"id":"x","cases":[{"name":"c","n_lo":1,"n_hi":2,"steps":[{"type":"mystery"}]}]}})")),
        SchemaError);
    CHECK_THROWS_AS(load_cert_file("no_such_file.json"), SchemaError);
}
