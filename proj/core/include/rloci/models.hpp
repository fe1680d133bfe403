#ifndef RLOCI_MODELS_HPP
#define RLOCI_MODELS_HPP

#include "rloci/sensitivity.hpp"

namespace rloci {

/// DC electric motor parameters: armature inductance and rotor inertia
/// store energy, resistance and friction dissipate it, and the torque
/// constant converts it.
struct DcMotorParams {
    double inductance = 0.005;       // L
    double resistance = 1.0;         // R
    double inertia = 0.010;          // J
    double friction = 0.002;         // b
    double torque_constant = 0.96;   // Ke
};

/// Characteristic polynomial model of the DC motor,
/// delta(s) = (L s + R)(J s + b) + Ke^2, with per-parameter affine
/// decompositions and a numeric evaluator for cross-checking.
/// Parameters are named "L", "R", "J", "b", "Ke".
ParamCharPoly dc_motor(const DcMotorParams& p = {});

}  // namespace rloci

#endif
