#pragma once

// Two-band model registry: a model maps (parameters, k) to a DVector and may
// carry decoupled boundary modes at k = 0 and k = pi.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfid/bloch.hpp"

namespace qfid {

using Params = std::vector<double>;

/// Quench fidelities of the decoupled boundary modes, each exactly 0 or 1.
struct BoundaryFidelities {
  int f0 = 1;
  int fpi = 1;

  friend bool operator==(const BoundaryFidelities&, const BoundaryFidelities&) = default;
};

struct ModelSpec {
  std::string name;
  std::vector<std::string> parameter_names;

  std::function<DVector(std::span<const double> params, double k)> dvector;

  /// Empty when the model has no decoupled boundary modes. May throw
  /// CriticalBoundary.
  std::function<BoundaryFidelities(std::span<const double> gamma_i, std::span<const double> gamma_f)>
      boundary_fidelities;

  /// True when the parameter point lies on an equilibrium critical line.
  std::function<bool(std::span<const double> params)> is_critical;

  /// d_z == 0 for every k and every parameter point.
  bool planar = false;

  std::size_t arity() const { return parameter_names.size(); }

  /// Throws DomainError when `params` has the wrong arity.
  void check_arity(std::span<const double> params, std::string_view what) const;

  /// Index of a named parameter; throws DomainError if unknown.
  std::size_t parameter_index(std::string_view parameter) const;

  DVector at(std::span<const double> params, double k) const { return dvector(params, k); }
};

/// Looks up a registered model; throws DomainError for unknown names.
const ModelSpec& find_model(std::string_view name);

/// Adds a model to the registry; throws DomainError if the name is taken.
void register_model(ModelSpec model);

std::vector<std::string> registered_models();

}  // namespace qfid
