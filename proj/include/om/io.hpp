#pragma once

#include <string>

#include "json.hpp"
#include "om/atomic.hpp"

namespace om {

using Json = nlohmann::ordered_json;

/// {depth, outcomes: [{id, p}], levels: [[[ids...]]]}; rationals are
/// "num/den" strings throughout.
Json filtration_to_json(const FiniteFiltration& f);
FiltrationPtr filtration_from_json(const Json& j);  // ConfigParse

/// Terminal values keyed by outcome id; the table is rebuilt on load.
Json martingale_to_json(const Martingale& f);
Martingale martingale_from_json(const FiltrationPtr& space, const Json& j);

/// [[level, atom index], ...] (the antichain).
Json stopping_to_json(const StoppingTime& nu);
StoppingTime stopping_from_json(const FiltrationPtr& space, const Json& j);

/// Per k: {k, nu, a (terminal by outcome id), bound}.
Json decomposition_to_json(const AtomicDecomposition& d);

/// {"kind": "power", "p": 0.5, "ell": 0.5, "c_phi": 1.0} |
/// {"kind": "powerlog", "p", "qlog", "ell", "c_phi"} |
/// {"kind": "piecewise", "knots": [[t, y], ...], "ell", "c_phi"}.
Json phi_to_json(const OrliczFunction& phi);
OrliczFunction phi_from_json(const Json& j);

/// Shorthand "power:p[:ell[:c]]" or "powerlog:p:qlog[:ell[:c]]".
OrliczFunction parse_phi(const std::string& text);

Json node_list_json(const std::vector<NodeRef>& nodes);

}  // namespace om
