#pragma once

// Coefficient import/export.
//
// CSV: header line `index,value`, then one row per stored coefficient. The
// tail constant is not representable and must be zero on export.
// JSON: {"space": "H2" | "BergmanA" | "L2Omega", "n": N, "coeffs": [...], "tail": t}

#include <iosfwd>
#include <string>

#include "bdlab/series.hpp"
#include "json.hpp"

namespace bdlab {

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

void write_csv(const CoeffSeq& f, std::ostream& out);
CoeffSeq read_csv(std::istream& in, Space space);

nlohmann::json to_json(const CoeffSeq& f);
CoeffSeq coeffseq_from_json(const nlohmann::json& j);

}  // namespace bdlab
