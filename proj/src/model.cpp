#include "ifb/model.hpp"

namespace ifb {

std::string_view to_string(HEquation eq) {
    return eq == HEquation::corrected ? "corrected" : "as-printed";
}

HEquation parse_h_equation(std::string_view text) {
    if (text == "corrected") return HEquation::corrected;
    if (text == "as-printed" || text == "as_printed") return HEquation::as_printed;
    throw std::invalid_argument("h-equation must be 'corrected' or 'as-printed', got '" + std::string(text) + "'");
}

}  // namespace ifb
