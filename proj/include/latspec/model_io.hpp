#pragma once

#include "latspec/friedrichs.hpp"
#include "latspec/model.hpp"

#include <optional>
#include <string>

namespace latspec {

/// Command-line overrides applied on top of the model file.
struct ModelOverrides {
    std::optional<int> grid;
    std::optional<double> delta;
};

struct LoadedModel {
    ModelSpec spec;
    std::string path;
    // textual coupling entries as written ("critical", "0.9*critical", "0.01")
    std::string mu1_text, mu2_text;
    // critical couplings, NaN unless some entry referred to them
    double mu0_1 = std::nan(""), mu0_2 = std::nan("");
    // quadrature that "critical" refers to
    Quadrature coupling_quadrature = Quadrature::Grid;
};

/// JSON model file:
///   dispersion   {"kind": "builtin", "axis_weights": [w1, w2, w3]} or {"kind": "tabulated", "csv": path}
///   pair_energy  {"coefficients": [cp, cpq, cq]}
///   phi1, phi2   {"kind": "constant", "value": v} or {"kind": "sin" | "cos", "axis": 1..3, "amplitude": a}
///   mu1, mu2     number, "critical" or "<factor>*critical"
///   coupling_quadrature  "grid" (default) or "graded", used to resolve "critical"
///   grid, delta  defaults 16 and 1
/// CSV paths are relative to the model file. Malformed files throw InvalidArgument,
/// unreadable data throws Data, model-level failures keep their own kinds.
LoadedModel load_model(const std::string& path, const ModelOverrides& overrides = {});
LoadedModel parse_model(const std::string& json_text, const std::string& base_dir,
                        const ModelOverrides& overrides = {});

} // namespace latspec
