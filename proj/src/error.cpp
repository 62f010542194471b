#include "congae/error.hpp"

namespace congae {

void require_dims(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

}  // namespace congae
