#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "isoindex/manifolds.hpp"
#include "isoindex/skewmap.hpp"

namespace isoindex {

/// Schema violation in a map file; the message names the offending field.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Map file schema:
///   {"ring": "Q"|"Z"|"GF(p)"|"GF(p,k)", "dim_l": n, "dim_v": m,
///    "gram": [[[entry...]...]...]}
/// Z/Q entries are "a/b" strings (or plain integers), finite-field entries
/// are integers.
SkewBilinearMap map_from_json(const nlohmann::json& j);
SkewBilinearMap load_map_file(const std::string& path);
nlohmann::json map_to_json(const SkewBilinearMap& phi);

/// Canonical serialization: sorted keys, no whitespace variance, newline
/// terminated. Byte-stable for fixed input.
std::string canonical_dump(const nlohmann::json& j);

}  // namespace isoindex
