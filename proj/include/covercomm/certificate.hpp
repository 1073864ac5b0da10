#pragma once

#include "covercomm/abelian.hpp"
#include "covercomm/amalgam.hpp"
#include "covercomm/error.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace covercomm {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// Plain-text certificate: a `certificate <kind>` section carrying provenance
/// and a summary, followed by payload sections in the module text formats.
///
///     certificate covering
///     tool covercomm 0.1.0
///     param max-vertices 96
///     input <sha256> <file name>
///     summary degree 1
///     graph Z
///     ...
struct Certificate {
    std::string kind;
    std::string tool_version;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::pair<std::string, std::string>> inputs; ///< (digest, name)
    std::vector<std::pair<std::string, std::string>> summary;
    std::string payload;

    std::optional<std::string> param(std::string_view key) const;
    std::optional<std::string> summary_value(std::string_view key) const;
    void add_input(const std::string& name, std::string_view contents);

    std::string render() const;
};

/// Single-token verdict names used in summary lines.
std::string verdict_slug(ObstructionVerdict v);
std::string verdict_slug(OutFiniteVerdict v);

/// Throws InputError (with line and column) on malformed text.
Certificate parse_certificate(std::string_view text);

/// An input handed to verify does not match the digest recorded in the certificate.
class DigestMismatch : public InputError {
public:
    using InputError::InputError;
};

struct InputFile {
    std::string name;
    std::string contents;
};

struct CertificateCheck {
    std::vector<std::string> problems;
    bool valid() const noexcept { return problems.empty(); }
};

/// Re-checks the claim in the payload without repeating the search that found
/// it. Inputs, when given, must match the recorded digests (else
/// DigestMismatch) and every section they contain must appear in the payload.
CertificateCheck verify_certificate(const Certificate& cert, const std::vector<InputFile>& inputs = {});

} // namespace covercomm
