#pragma once

#include <optional>
#include <string>
#include <vector>

#include "membrane/stack.hpp"

namespace membrane {

// Slopes (a, -b) of the two branches of the 1D cone splitting N membranes
// into a top group of k and a bottom group of N-k. Both constraints hold:
// zero average k*a = (N-k)*b and unit energy k*a^2 + (N-k)*b^2 = 1.
struct SlopePair {
    double a;  // top-group slope, > 0
    double b;  // magnitude of the bottom-group slope, > 0
};

SlopePair one_d_slopes(int n_membranes, int k);

enum class ConeVariant { OneD, V0, Vs, TripleCritical, Explicit1D };

struct ConeSpec {
    ConeVariant variant = ConeVariant::OneD;
    int n_membranes = 3;       // OneD only; the others are N = 3
    int k = 1;                 // OneD split index
    bool reflected = false;    // OneD: open toward x < 0 instead
    double rotation = 0.0;     // V0/Vs: counterclockwise rotation, radians

    int membranes() const {
        return variant == ConeVariant::OneD ? n_membranes : 3;
    }
    // OneD cones evaluate in any dimension (extended along x1); the rest are 2D.
    int min_dim() const {
        switch (variant) {
            case ConeVariant::OneD:
            case ConeVariant::TripleCritical:
            case ConeVariant::Explicit1D:
                return 1;
            default:
                return 2;
        }
    }

    static ConeSpec one_d(int n, int k, bool reflected = false);
    static ConeSpec v0(double rotation = 0.0);
    static ConeSpec vs(double rotation = 0.0);
    static ConeSpec triple_critical();
    static ConeSpec explicit_1d();

    // Text form used in config files, e.g. "oned N=3 k=1 reflected=false",
    // "v0 rot=0.5236", "vs rot=0", "triple", "explicit1d".
    static ConeSpec parse(const std::string& text);
    std::string to_string() const;
};

// Closed-form evaluation at a point (y ignored for 1D variants in 1D grids).
std::vector<double> evaluate_cone(const ConeSpec& spec, double x, double y = 0.0);

// Fig. 3 explicit minimizer on [-1,1]: lambda = sqrt(2)/sqrt(3), mu = 1/sqrt(2).
std::array<double, 3> explicit_1d_minimizer(double x);
double explicit_kink_1();  // 1 - sqrt(3/2)
double explicit_kink_2();  // 1 - 1/sqrt(2)

// Phi(U) = integral of W(U) over the unit ball for a cone (analytic sector
// measures; 1D variants are treated as extended to 2D).
double cone_energy(const ConeSpec& spec);

struct ConeClassification {
    int k = 0;
    bool reflected = false;
    double residual = 0.0;
};

// Least-squares identification of a 1D stack against every U_{0,k} and its
// reflection. Requires sum u_i ~ 0; returns nullopt when nothing fits within tol.
std::optional<ConeClassification> classify_1d(const MembraneStack& stack, double tol);

}  // namespace membrane
