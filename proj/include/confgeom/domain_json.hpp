#pragma once

#include <string>
#include <string_view>

#include "confgeom/domain.hpp"
#include "json.hpp"

namespace confgeom {

/// Parse a domain spec such as {"type": "sector", "alpha": 1.047}. Unknown
/// keys, missing keys and angles given in degrees raise SpecError; invalid
/// parameter ranges raise InvalidDomain.
Domain domain_from_json(const nlohmann::json& spec);
Domain parse_domain_spec(std::string_view text);

/// Inline JSON if the argument starts with '{', otherwise a file path.
Domain load_domain_spec(const std::string& inline_or_path);

nlohmann::json domain_to_json(const Domain& d);

/// [x, y] array encoding used for points in specs and outputs.
nlohmann::json point_to_json(Complex z);

}  // namespace confgeom
