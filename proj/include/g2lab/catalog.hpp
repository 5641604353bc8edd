#pragma once

#include "g2lab/liealg.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace g2lab {

/// Golden values an entry is expected to reproduce.
struct Expected {
    std::optional<Rational> tau_norm_sq;
    /// Torsion literal as printed (not necessarily in canonical order).
    std::optional<std::string> tau;
    std::optional<std::vector<int>> p_basis;
    std::optional<std::vector<int>> q_basis;
    bool unimodular = false;
    std::optional<bool> erp;
};

struct CatalogEntry {
    std::string name;
    std::string description;
    LieAlgebra7 algebra;
    /// Literal of the 3-form, when the entry comes with one.
    std::optional<std::string> phi;
    Expected expected;
    /// Printed structure equations de^1..de^7; parameters as "x<name>" atoms.
    std::array<std::string, 7> structure_equations;
    /// Parameters assumed non-zero (allowed as elimination pivots).
    std::vector<std::string> nonzero_params;
};

/// Names in catalog order.
const std::vector<std::string>& catalog_names();

/// Parameter values are substituted into the structure constants; parameters
/// left out stay symbolic (allowed for the pencils). Throws UnknownName,
/// InvalidArgument for unknown or out-of-range parameters.
CatalogEntry catalog_get(const std::string& name, const std::map<std::string, Rational>& params = {});

} // namespace g2lab
