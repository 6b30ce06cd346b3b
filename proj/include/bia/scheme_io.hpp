#pragma once
// JSON serialization of schemes and verification reports. Scheme files
// round-trip bit-exactly; all emitted documents carry the tool version and
// the construction parameters, never a timestamp, so identical runs produce
// identical bytes.

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "bia/scheme.hpp"
#include "bia/verifier.hpp"

namespace bia {

using Json = nlohmann::ordered_json;

// Thrown when a scheme document cannot be parsed or has the wrong shape;
// semantic problems are the verifier's job, not the loader's.
struct SchemeFileError : std::runtime_error {
  explicit SchemeFileError(const std::string& what)
      : std::runtime_error("scheme file: " + what) {}
};

// {"name": ..., "version": ...}
Json tool_json();

// {"K", "r", "n", "M", "pad_b", "seed"}
Json params_json(const Scheme& scheme, std::uint64_t seed);

Json scheme_to_json(const Scheme& scheme, std::uint64_t seed);

// Accepts any document produced by scheme_to_json; validates shape, not
// semantics (the verifier's structure check judges content). seed_out, when
// non-null, receives the embedded seed.
Scheme scheme_from_json(const Json& j, std::uint64_t* seed_out = nullptr);

void save_scheme(const std::string& path, const Scheme& scheme, std::uint64_t seed);
Scheme load_scheme(const std::string& path, std::uint64_t* seed_out = nullptr);

Json report_to_json(const VerificationReport& report);

// Per-receiver CSV rendering of the same report.
std::string report_to_csv(const VerificationReport& report);

}  // namespace bia
