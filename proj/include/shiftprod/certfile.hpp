#pragma once

#include <map>
#include <string>
#include <variant>

#include <nlohmann/json_fwd.hpp>

#include "shiftprod/certs.hpp"

namespace shiftprod {

/// On-disk certificate container. JSON with a top-level schema_version
/// and kind; integers above 2^53 are written as decimal strings so that
/// readers without 64-bit integers stay exact.
struct CertFile {
    enum class Kind { Chain, ExactDiv, CaseBundle };

    std::string schema_version = "1";
    Kind kind = Kind::Chain;
    std::variant<ChainCert, ExactDivCert, CaseBundle> payload;
};

std::string to_string(CertFile::Kind kind);

CertFile parse_cert(const nlohmann::json& j);       // throws SchemaError
nlohmann::json cert_to_json(const CertFile& file);

CertFile load_cert_file(const std::string& path);   // throws SchemaError
void save_cert_file(const CertFile& file, const std::string& path);

/// Certificates compiled into the library (same content as the data/
/// directory): chains "chain-a" and "chain-b" plus the small-n case
/// bundle. Parsed once, verified lazily by callers.
const ChainCert& bundled_chain(const std::string& id);
std::vector<std::string> bundled_chain_ids();
const CaseBundle& bundled_cases();

/// Raw JSON text of every bundled file, keyed by file name.
const std::map<std::string, std::string>& bundled_sources();

} // namespace shiftprod
