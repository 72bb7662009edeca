#include "qlnet/errors.hpp"

namespace qlnet {

NumericalError::NumericalError(const std::string& what,
                               std::optional<std::size_t> step,
                               std::optional<double> last_estimate)
    : Error(what), step_(step), last_estimate_(last_estimate) {}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const NumericalError*>(&e) != nullptr) return kExitNumerical;
  return kExitValidation;
}

}  // namespace qlnet
