#include "shiftprod/certfile.hpp"

#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "shiftprod/errors.hpp"

namespace shiftprod {

namespace detail {
// Defined in the generated bundled_data.cpp.
const std::map<std::string, std::string>& bundled_raw();
} // namespace detail

using nlohmann::json;

namespace {

constexpr std::uint64_t kJsonIntMax = std::uint64_t(1) << 53;

std::uint64_t get_u64(const json& j, const char* key) {
    if (!j.contains(key))
        throw SchemaError(std::string("missing field \"") + key + "\"");
    const json& v = j.at(key);
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const auto s = v.get<std::int64_t>();
        if (s < 0)
            throw SchemaError(std::string("field \"") + key + "\" is negative");
        return static_cast<std::uint64_t>(s);
    }
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw SchemaError(std::string("field \"") + key + "\" is not a decimal string");
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw SchemaError(std::string("field \"") + key + "\" overflows 64 bits");
        }
    }
    throw SchemaError(std::string("field \"") + key + "\" must be an integer");
}

std::uint64_t number_u64(const json& v, const char* what) {
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw SchemaError(std::string(what) + ": not a decimal string");
        return std::stoull(s);
    }
    throw SchemaError(std::string(what) + ": expected an integer");
}

json put_u64(std::uint64_t v) {
    if (v > kJsonIntMax)
        return json(std::to_string(v));
    return json(v);
}

std::vector<std::uint64_t> get_u64_list(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw SchemaError(std::string("missing array field \"") + key + "\"");
    std::vector<std::uint64_t> out;
    for (const json& v : j.at(key))
        out.push_back(number_u64(v, key));
    return out;
}

ChainCert parse_chain(const json& payload) {
    ChainCert chain;
    if (!payload.contains("mode") || !payload.at("mode").is_string())
        throw SchemaError("chain payload needs a \"mode\" string");
    auto mode = tuple_mode_from_string(payload.at("mode").get<std::string>());
    if (!mode)
        throw SchemaError("unknown tuple mode \"" +
                          payload.at("mode").get<std::string>() + "\"");
    if (!payload.contains("tuples") || !payload.at("tuples").is_array())
        throw SchemaError("chain payload needs a \"tuples\" array");
    for (const json& t : payload.at("tuples")) {
        if (!t.is_array())
            throw SchemaError("each tuple must be an array of primes");
        TupleCert cert;
        cert.mode = *mode;
        for (const json& v : t)
            cert.primes.push_back(number_u64(v, "tuple entry"));
        chain.tuples.push_back(std::move(cert));
    }
    return chain;
}

json chain_to_json(const ChainCert& chain) {
    json payload;
    payload["mode"] =
        chain.tuples.empty() ? to_string(TupleMode::OddCoprime) : to_string(chain.tuples.front().mode);
    json tuples = json::array();
    for (const TupleCert& t : chain.tuples) {
        json arr = json::array();
        for (std::uint64_t p : t.primes)
            arr.push_back(put_u64(p));
        tuples.push_back(std::move(arr));
    }
    payload["tuples"] = std::move(tuples);
    return payload;
}

ExactDivCert parse_exact_div(const json& payload) {
    ExactDivCert cert;
    cert.p = get_u64(payload, "p");
    cert.a = get_u64(payload, "a");
    cert.n = get_u64(payload, "n");
    cert.d1 = get_u64(payload, "d1");
    cert.exponents = get_u64_list(payload, "exponents");
    if (payload.contains("note"))
        cert.note = payload.at("note").get<std::string>();
    return cert;
}

json exact_div_to_json(const ExactDivCert& cert) {
    json payload;
    payload["p"] = put_u64(cert.p);
    payload["a"] = put_u64(cert.a);
    payload["n"] = put_u64(cert.n);
    payload["d1"] = put_u64(cert.d1);
    json exps = json::array();
    for (std::uint64_t e : cert.exponents)
        exps.push_back(put_u64(e));
    payload["exponents"] = std::move(exps);
    if (!cert.note.empty())
        payload["note"] = cert.note;
    return payload;
}

BundleStep parse_step(const json& j) {
    if (!j.contains("type") || !j.at("type").is_string())
        throw SchemaError("bundle step needs a \"type\" string");
    const std::string type = j.at("type").get<std::string>();
    BundleStep step;
    if (type == "note") {
        step.kind = BundleStep::Kind::Note;
        if (j.contains("text"))
            step.text = j.at("text").get<std::string>();
    } else if (type == "window-member") {
        step.kind = BundleStep::Kind::WindowMember;
        step.p = get_u64(j, "p");
        step.n_lo = get_u64(j, "n_lo");
        step.n_hi = get_u64(j, "n_hi");
    } else if (type == "divisor-branch") {
        step.kind = BundleStep::Kind::DivisorBranch;
        step.p = get_u64(j, "p");
        step.n_lo = get_u64(j, "n_lo");
        step.n_hi = get_u64(j, "n_hi");
        step.primes = get_u64_list(j, "odd_primes");
    } else if (type == "exact-div") {
        step.kind = BundleStep::Kind::ExactDiv;
        step.cert = parse_exact_div(j);
    } else if (type == "valuation") {
        step.kind = BundleStep::Kind::Valuation;
        step.p = get_u64(j, "p");
        step.base = get_u64(j, "base");
        step.exp = get_u64(j, "exp");
        step.k = get_u64(j, "k");
    } else if (type == "square-lift") {
        step.kind = BundleStep::Kind::SquareLift;
        step.p = get_u64(j, "p");
        step.a = get_u64(j, "a");
        step.n = get_u64(j, "n");
        step.forced = get_u64(j, "forced");
        if (j.contains("note"))
            step.text = j.at("note").get<std::string>();
    } else {
        throw SchemaError("unknown bundle step type \"" + type + "\"");
    }
    return step;
}

json step_to_json(const BundleStep& step) {
    json j;
    switch (step.kind) {
    case BundleStep::Kind::Note:
        j["type"] = "note";
        j["text"] = step.text;
        break;
    case BundleStep::Kind::WindowMember:
        j["type"] = "window-member";
        j["p"] = put_u64(step.p);
        j["n_lo"] = put_u64(step.n_lo);
        j["n_hi"] = put_u64(step.n_hi);
        break;
    case BundleStep::Kind::DivisorBranch: {
        j["type"] = "divisor-branch";
        j["p"] = put_u64(step.p);
        j["n_lo"] = put_u64(step.n_lo);
        j["n_hi"] = put_u64(step.n_hi);
        json arr = json::array();
        for (std::uint64_t q : step.primes)
            arr.push_back(put_u64(q));
        j["odd_primes"] = std::move(arr);
        break;
    }
    case BundleStep::Kind::ExactDiv:
        j = exact_div_to_json(step.cert);
        j["type"] = "exact-div";
        break;
    case BundleStep::Kind::Valuation:
        j["type"] = "valuation";
        j["p"] = put_u64(step.p);
        j["base"] = put_u64(step.base);
        j["exp"] = put_u64(step.exp);
        j["k"] = put_u64(step.k);
        break;
    case BundleStep::Kind::SquareLift:
        j["type"] = "square-lift";
        j["p"] = put_u64(step.p);
        j["a"] = put_u64(step.a);
        j["n"] = put_u64(step.n);
        j["forced"] = put_u64(step.forced);
        if (!step.text.empty())
            j["note"] = step.text;
        break;
    }
    return j;
}

CaseBundle parse_bundle(const json& payload) {
    CaseBundle bundle;
    if (payload.contains("id"))
        bundle.id = payload.at("id").get<std::string>();
    if (!payload.contains("cases") || !payload.at("cases").is_array())
        throw SchemaError("case bundle needs a \"cases\" array");
    for (const json& c : payload.at("cases")) {
        CaseBlock block;
        if (c.contains("name"))
            block.name = c.at("name").get<std::string>();
        block.n_lo = get_u64(c, "n_lo");
        block.n_hi = get_u64(c, "n_hi");
        if (!c.contains("steps") || !c.at("steps").is_array())
            throw SchemaError("case block needs a \"steps\" array");
        for (const json& s : c.at("steps"))
            block.steps.push_back(parse_step(s));
        bundle.cases.push_back(std::move(block));
    }
    return bundle;
}

json bundle_to_json(const CaseBundle& bundle) {
    json payload;
    payload["id"] = bundle.id;
    json cases = json::array();
    for (const CaseBlock& block : bundle.cases) {
        json c;
        c["name"] = block.name;
        c["n_lo"] = put_u64(block.n_lo);
        c["n_hi"] = put_u64(block.n_hi);
        json steps = json::array();
        for (const BundleStep& s : block.steps)
            steps.push_back(step_to_json(s));
        c["steps"] = std::move(steps);
        cases.push_back(std::move(c));
    }
    payload["cases"] = std::move(cases);
    return payload;
}

} // namespace

std::string to_string(CertFile::Kind kind) {
    switch (kind) {
    case CertFile::Kind::Chain:
        return "chain";
    case CertFile::Kind::ExactDiv:
        return "lemma7";
    case CertFile::Kind::CaseBundle:
        return "case-bundle";
    }
    return "?";
}

CertFile parse_cert(const json& j) {
    CertFile file;
    if (!j.is_object())
        throw SchemaError("certificate file must be a JSON object");
    if (!j.contains("schema_version") || !j.at("schema_version").is_string())
        throw SchemaError("missing schema_version");
    file.schema_version = j.at("schema_version").get<std::string>();
    if (file.schema_version != "1")
        throw SchemaError("unrecognized schema_version \"" + file.schema_version + "\"");
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw SchemaError("missing kind");
    const std::string kind = j.at("kind").get<std::string>();
    if (!j.contains("payload"))
        throw SchemaError("missing payload");
    const json& payload = j.at("payload");
    if (kind == "chain") {
        file.kind = CertFile::Kind::Chain;
        file.payload = parse_chain(payload);
    } else if (kind == "lemma7") {
        file.kind = CertFile::Kind::ExactDiv;
        file.payload = parse_exact_div(payload);
    } else if (kind == "case-bundle") {
        file.kind = CertFile::Kind::CaseBundle;
        file.payload = parse_bundle(payload);
    } else {
        throw SchemaError("unknown certificate kind \"" + kind + "\"");
    }
    return file;
}

json cert_to_json(const CertFile& file) {
    json j;
    j["schema_version"] = file.schema_version;
    j["kind"] = to_string(file.kind);
    switch (file.kind) {
    case CertFile::Kind::Chain:
        j["payload"] = chain_to_json(std::get<ChainCert>(file.payload));
        break;
    case CertFile::Kind::ExactDiv:
        j["payload"] = exact_div_to_json(std::get<ExactDivCert>(file.payload));
        break;
    case CertFile::Kind::CaseBundle:
        j["payload"] = bundle_to_json(std::get<CaseBundle>(file.payload));
        break;
    }
    return j;
}

CertFile load_cert_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw SchemaError("cannot open \"" + path + "\"");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError("JSON parse error in \"" + path + "\": " + e.what());
    }
    return parse_cert(j);
}

void save_cert_file(const CertFile& file, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw SchemaError("cannot write \"" + path + "\"");
    out << cert_to_json(file).dump(2) << "\n";
}

namespace {

struct BundledData {
    std::map<std::string, ChainCert> chains;
    CaseBundle cases;
};

const BundledData& bundled() {
    static const BundledData data = [] {
        BundledData d;
        const auto& raw = detail::bundled_raw();
        const auto parse_one = [&](const std::string& name) {
            return parse_cert(json::parse(raw.at(name)));
        };
        d.chains["chain-a"] = std::get<ChainCert>(parse_one("chain_a.json").payload);
        d.chains["chain-b"] = std::get<ChainCert>(parse_one("chain_b.json").payload);
        d.cases = std::get<CaseBundle>(parse_one("case_bundle.json").payload);
        return d;
    }();
    return data;
}

} // namespace

const ChainCert& bundled_chain(const std::string& id) {
    const auto& chains = bundled().chains;
    auto it = chains.find(id);
    if (it == chains.end())
        throw DomainError("unknown bundled chain \"" + id + "\"");
    return it->second;
}

std::vector<std::string> bundled_chain_ids() { return {"chain-a", "chain-b"}; }

const CaseBundle& bundled_cases() { return bundled().cases; }

const std::map<std::string, std::string>& bundled_sources() {
    return detail::bundled_raw();
}

} // namespace shiftprod
