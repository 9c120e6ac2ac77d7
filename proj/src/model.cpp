#include "qfid/model.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "qfid/errors.hpp"
#include "qfid/xy_model.hpp"

namespace qfid {

namespace {

struct Registry {
  std::mutex mutex;
  // Models are held by pointer so references handed out by find_model stay
  // valid when the map rebalances.
  std::map<std::string, std::unique_ptr<ModelSpec>, std::less<>> models;

  Registry() {
    const ModelSpec& xy = xy_model();
    models.emplace(xy.name, std::make_unique<ModelSpec>(xy));
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void ModelSpec::check_arity(std::span<const double> params, std::string_view what) const {
  if (params.size() != arity()) {
    throw DomainError(std::string(what) + ": model '" + name + "' expects " +
                      std::to_string(arity()) + " parameters, got " +
                      std::to_string(params.size()));
  }
}

std::size_t ModelSpec::parameter_index(std::string_view parameter) const {
  for (std::size_t i = 0; i < parameter_names.size(); ++i) {
    if (parameter_names[i] == parameter) return i;
  }
  throw DomainError("model '" + name + "' has no parameter '" + std::string(parameter) + "'");
}

const ModelSpec& find_model(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  auto it = r.models.find(name);
  if (it == r.models.end()) throw DomainError("unknown model '" + std::string(name) + "'");
  return *it->second;
}

void register_model(ModelSpec model) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  if (r.models.contains(model.name)) {
    throw DomainError("model '" + model.name + "' is already registered");
  }
  auto key = model.name;
  r.models.emplace(std::move(key), std::make_unique<ModelSpec>(std::move(model)));
}

std::vector<std::string> registered_models() {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& [name, _] : r.models) names.push_back(name);
  return names;
}

}  // namespace qfid
