#include "polcor/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace polcor {

WernerParameter::WernerParameter(double eta_in) : eta(eta_in) {
    if (!(eta >= physical_min && eta <= physical_max)) {
        throw std::domain_error("WernerParameter: eta outside the physical range [-1, 1/3]");
    }
}

double werner_coincidence(const WernerParameter& w, const BlochVector& u_a,
                          const BlochVector& u_b) {
    if (!is_unit(u_a) || !is_unit(u_b)) {
        throw std::domain_error("werner_coincidence: settings must be unit vectors");
    }
    return 0.25 * (1.0 + w.eta * dot(u_a, u_b));
}

double quantum_visibility(const WernerParameter& w) {
    return std::abs(w.eta);
}

bool is_separable(const WernerParameter& w) {
    return std::abs(w.eta) <= 1.0 / 3.0;
}

}  // namespace polcor
