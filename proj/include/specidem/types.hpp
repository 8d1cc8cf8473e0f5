#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace specidem {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

/// Error raised when an operation's preconditions are violated
/// (dimension mismatches, collisions with the spectrum, gate failures).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class Side { plus, minus };

inline const char* side_name(Side s) { return s == Side::plus ? "plus" : "minus"; }

/// z -> c*z + d, with its inverse. Used to map spectra into the unit disc
/// and to map reported spectral quantities back.
struct AffineMap {
    Complex c{1.0, 0.0};
    Complex d{0.0, 0.0};

    Complex operator()(Complex z) const { return c * z + d; }
    AffineMap inverse() const { return AffineMap{1.0 / c, -d / c}; }
    bool is_identity() const { return c == Complex(1.0, 0.0) && d == Complex(0.0, 0.0); }
};

}  // namespace specidem
