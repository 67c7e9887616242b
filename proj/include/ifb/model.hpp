#pragma once

// Integrate-and-fire-or-burst (IFB) vector field.
//
// Everything here is a pure function of its arguments: no integration state,
// no randomness. Functions are templated on the scalar type so they can be
// evaluated in long double (or an autodiff scalar) when checking the double
// path.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ifb {

// Which branch assignment the gate equation uses.
//
// corrected:  v <= v_h -> (1 - h) / tau_plus  (deinactivation while hyperpolarized)
//             v >  v_h -> -h / tau_minus
// as_printed: v <  v_h -> -h / tau_minus
//             v >= v_h -> (1 - h) / tau_plus
enum class HEquation { corrected, as_printed };

std::string_view to_string(HEquation eq);
HEquation parse_h_equation(std::string_view text);

template <typename Scalar>
struct ModelParametersT {
    Scalar C = 2;              // capacitance [uF]
    Scalar v_h = -60;          // T-current activation / gate switch [mV]
    Scalar v_theta = -35;      // firing threshold [mV]
    Scalar v_reset = -50;      // reset potential [mV]
    Scalar v_L = -65;          // leak reversal [mV]
    Scalar v_T = 120;          // T-current reversal [mV]
    Scalar g_L = 0.035;        // leak conductance [mS]
    Scalar g_T = 0.07;         // T-current conductance [mS]
    Scalar I0 = -0.05;         // bias current [uA]
    Scalar I1 = 1.6;           // forcing amplitude [uA]
    Scalar f = 5;              // forcing frequency [Hz]
    Scalar tau_h_minus = 20;   // gate inactivation time constant [ms]
    Scalar tau_h_plus = 200;   // gate deinactivation time constant [ms]
    HEquation h_equation = HEquation::corrected;

    // Forcing frequency in cycles per ms.
    Scalar f_per_ms() const { return f / Scalar(1000); }

    // Forcing period in ms.
    Scalar forcing_period() const { return Scalar(1000) / f; }

    // Throws std::invalid_argument naming the first violated constraint.
    void validate() const {
        auto finite = [](Scalar x) { return std::isfinite(static_cast<double>(x)); };
        for (Scalar x : {C, v_h, v_theta, v_reset, v_L, v_T, g_L, g_T, I0, I1, f, tau_h_minus, tau_h_plus}) {
            if (!finite(x)) throw std::invalid_argument("model parameters must be finite");
        }
        if (!(C > 0)) throw std::invalid_argument("C must be positive");
        if (g_L < 0) throw std::invalid_argument("g_L must be non-negative");
        if (g_T < 0) throw std::invalid_argument("g_T must be non-negative");
        if (!(tau_h_minus > 0)) throw std::invalid_argument("tau_h_minus must be positive");
        if (!(tau_h_plus > 0)) throw std::invalid_argument("tau_h_plus must be positive");
        if (!(v_reset < v_theta)) throw std::invalid_argument("v_reset must lie below v_theta");
    }

    bool operator==(const ModelParametersT&) const = default;
};

using ModelParameters = ModelParametersT<double>;

template <typename Scalar>
struct NeuronStateT {
    Scalar v;  // membrane potential [mV]
    Scalar h;  // T-current inactivation gate, in [0, 1]

    bool operator==(const NeuronStateT&) const = default;
};

using NeuronState = NeuronStateT<double>;

// H(x) with H(0) = 0.
template <typename Scalar>
constexpr Scalar heaviside(Scalar x) {
    return x > Scalar(0) ? Scalar(1) : Scalar(0);
}

template <typename Scalar>
Scalar leak_current(Scalar v, const ModelParametersT<Scalar>& p) {
    return p.g_L * (v - p.v_L);
}

template <typename Scalar>
Scalar t_current(Scalar v, Scalar h, const ModelParametersT<Scalar>& p) {
    if (!(v > p.v_h)) return Scalar(0);
    return p.g_T * h * (v - p.v_T);
}

// dv/dt at time t [ms], noise excluded.
template <typename Scalar>
Scalar drift_v(Scalar t, const NeuronStateT<Scalar>& s, const ModelParametersT<Scalar>& p) {
    using std::cos;
    const Scalar forcing = p.I0 + p.I1 * cos(Scalar(2) * std::numbers::pi_v<Scalar> * p.f_per_ms() * t);
    return (forcing - leak_current(s.v, p) - t_current(s.v, s.h, p)) / p.C;
}

template <typename Scalar>
Scalar drift_h(const NeuronStateT<Scalar>& s, const ModelParametersT<Scalar>& p) {
    const Scalar recovery = (Scalar(1) - s.h) / p.tau_h_plus;
    const Scalar decay = -s.h / p.tau_h_minus;
    if (p.h_equation == HEquation::corrected) {
        return s.v <= p.v_h ? recovery : decay;
    }
    return s.v < p.v_h ? decay : recovery;
}

template <typename Scalar>
struct ResetResultT {
    NeuronStateT<Scalar> state;
    bool spiked;
};

// v >= v_theta sends v to v_reset; h is untouched.
template <typename Scalar>
ResetResultT<Scalar> apply_threshold_reset(const NeuronStateT<Scalar>& s, const ModelParametersT<Scalar>& p) {
    if (s.v >= p.v_theta) return {{p.v_reset, s.h}, true};
    return {s, false};
}

}  // namespace ifb
