#pragma once

// JSON forms of the library values used by the machine output of the CLI.

#include "lcgf/genfunc.hpp"
#include "lcgf/laplace.hpp"

#include <json.hpp>

namespace lcgf {

/// Insertion-ordered, so documents keep their field order.
using Json = nlohmann::ordered_json;

/// [{"exp": "p/q", "re": x, "im": y}, ...] in increasing exponent order.
/// {re, im}; integral parts print as integers.
Json to_json(const Complex& c);
Json to_json(const LCReal& x);
Json to_json(const LCComplex& x);
LCComplex lc_from_json(const Json& j, const TruncationContext& ctx);

Json to_json(const LaplaceImage& f);
Json to_json(const ValueCheck& c);
Json to_json(const ContradictionReport& r);
Json to_json(const SupportInfo& s);
Json to_json(const WeakEqualReport& r);

}  // namespace lcgf
