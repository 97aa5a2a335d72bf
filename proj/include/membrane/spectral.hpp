#pragma once

#include <string>
#include <vector>

namespace membrane {

// Angular geometry of the two overlapping sectors: arcs (-b, a) and (-a, b)
// with a = pi/6, b = 2*pi/3; the overlap is (-a, a).
struct SectorGeometry {
    double a;
    double b;
    SectorGeometry();
};

enum class QuadraticBranch { Plus, Minus };

struct SpectralRoot {
    double t = 0.0;            // in [0, pi)
    double sqrt_lambda = 0.0;  // 6t/pi
    double lambda = 0.0;
    QuadraticBranch branch = QuadraticBranch::Plus;
    int multiplicity = 1;
    double mu1 = 1.0;          // w1 = mu1 * cos(sqrt_lambda * (theta + b))
    double mu3 = 0.0;          // w3 = mu3 * cos(sqrt_lambda * (theta - b))
};

// Roots of |sin 3t| = 2|sin 5t| on [0, pi), in increasing t, from the two
// quadratics beta^2 + 2 beta - 4 = +/-(beta + 2) in beta = 4 cos 2t. Extends
// periodically (t + m*pi) when count exceeds 9.
std::vector<SpectralRoot> eigen_roots(int count);

// Regularity exponent: sqrt(lambda_4) - 1 = (3/pi) * acos((sqrt(17)-3)/8) - 1.
double alpha0();

struct MatchingResiduals {
    double derivative_left = 0.0;   // |w1'(-a) - 2 w3'(-a)|
    double derivative_right = 0.0;  // |w3'(a) - 2 w1'(a)|
    double flux = 0.0;              // |(3/2) w1'(-a)_- + w3'(-a)_+ - 2 w1'(-a)_+|
};

MatchingResiduals matching_check(const SpectralRoot& root);

// Q of a separable candidate r^p * w(theta): weighted angular energy with the
// 3/2 / coupled pattern times the analytic radial factor on the unit sector.
// Samples are nodal values on uniform meshes over the two arcs.
double q_energy(const std::vector<double>& w1, const std::vector<double>& w3,
                double p);

// Weighted angular L2 norm matching q_energy's inner product (same meshes).
double q_norm(const std::vector<double>& w1, const std::vector<double>& w3,
              double p);

// k-th eigenvalue of the angular problem from a P1 discretization of the
// weighted forms on a uniform mesh of `mesh` intervals over (-b, b).
double rayleigh_eigen(int k, int mesh);

struct SpectrumRow {
    int k;
    double t, sqrt_lambda, lambda;
    QuadraticBranch branch;
    int multiplicity;
};

std::vector<SpectrumRow> spectrum_table(int count);
void write_spectrum_csv(const std::string& path, int count);

}  // namespace membrane
