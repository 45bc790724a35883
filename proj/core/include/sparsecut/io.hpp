#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sparsecut/graph.hpp"
#include "sparsecut/relaxations.hpp"
#include "sparsecut/rounding.hpp"
#include "sparsecut/stcut.hpp"

namespace sparsecut {

/// Parses the `graphpair v1` text format:
///
///   graphpair v1
///   n <N>
///   g <u> <v> <w>
///   h <u> <v> <w>
///
/// '#' starts a comment. Each unordered pair may be listed once per graph.
/// Throws InputError with the offending line number.
InstancePair parse_instance(std::string_view text);
InstancePair read_instance(const std::filesystem::path& path);

/// Canonical form: header, n, then g and h edges sorted by (u, v), weights
/// printed with 17 significant digits.
std::string format_instance(const InstancePair& pair);

/// Shortest-round-trip-safe decimal ("%.17g").
std::string format_number(double x);
std::string format_cut(const Cut& cut);

/// Witness text: `kind`, `n`, `value` lines followed by `spectral x <v> <val>`,
/// `metric <u> <v> <d>` or `points <v> <c1> ... <cdim>` lines.
std::string format_witness(const RelaxationValue& rv);
RelaxationValue parse_witness(std::string_view text);

std::string format_certificate(const RoundingCertificate& cert);

/// Summary lines followed by `flow <u> <v> <f>` for every edge.
std::string format_flow(const StCertificate& cert);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace sparsecut
