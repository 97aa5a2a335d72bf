#include "membrane/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace membrane {

namespace {
constexpr double kPi = std::numbers::pi;
}

SectorGeometry::SectorGeometry() : a(kPi / 6), b(2 * kPi / 3) {}

double alpha0() {
    return (3.0 / kPi) * std::acos((std::sqrt(17.0) - 3.0) / 8.0) - 1.0;
}

namespace {

SpectralRoot make_root(double t, QuadraticBranch branch, int multiplicity) {
    SpectralRoot r;
    r.t = t;
    r.sqrt_lambda = 6.0 * t / kPi;
    r.lambda = r.sqrt_lambda * r.sqrt_lambda;
    r.branch = branch;
    r.multiplicity = multiplicity;
    r.mu1 = 1.0;
    const double s5 = std::sin(5 * t);
    // amplitude matching: -mu1 sin 3t = 2 mu3 sin 5t; both sines vanish only
    // at t in pi*Z, where the pair decouples (multiplicity 2)
    r.mu3 = std::fabs(s5) > 1e-12 ? -std::sin(3 * t) / (2 * s5) : 0.0;
    return r;
}

// the 7 nonzero roots of |sin 3t| = 2|sin 5t| in (0, pi), via
// beta^2 + 2 beta - 4 = +/-(beta + 2) with beta = 4 cos 2t
std::vector<SpectralRoot> base_nonzero_roots() {
    struct Quad {
        double cos2t;
        QuadraticBranch branch;
    };
    const double s17 = std::sqrt(17.0);
    const Quad quads[] = {
        {0.5, QuadraticBranch::Plus},
        {-0.75, QuadraticBranch::Plus},
        {(-3.0 + s17) / 8.0, QuadraticBranch::Minus},
        {(-3.0 - s17) / 8.0, QuadraticBranch::Minus},
    };
    std::vector<SpectralRoot> out;
    for (const Quad& q : quads) {
        const double half = 0.5 * std::acos(q.cos2t);
        out.push_back(make_root(half, q.branch, 1));
        out.push_back(make_root(kPi - half, q.branch, 1));
    }
    std::sort(out.begin(), out.end(),
              [](const SpectralRoot& x, const SpectralRoot& y) { return x.t < y.t; });
    return out;
}

}  // namespace

std::vector<SpectralRoot> eigen_roots(int count) {
    if (count < 0) throw std::invalid_argument("eigen_roots: negative count");
    const std::vector<SpectralRoot> base = base_nonzero_roots();
    std::vector<SpectralRoot> out;
    for (int period = 0; int(out.size()) < count; ++period) {
        out.push_back(make_root(period * kPi, QuadraticBranch::Plus, 2));
        for (const SpectralRoot& r : base) {
            if (int(out.size()) >= count) break;
            out.push_back(make_root(r.t + period * kPi, r.branch, 1));
        }
    }
    out.resize(count);
    return out;
}

MatchingResiduals matching_check(const SpectralRoot& root) {
    const SectorGeometry geo;
    const double p = root.sqrt_lambda;
    auto d1 = [&](double th) { return -root.mu1 * p * std::sin(p * (th + geo.b)); };
    auto d3 = [&](double th) { return -root.mu3 * p * std::sin(p * (th - geo.b)); };
    MatchingResiduals res;
    res.derivative_left = std::fabs(d1(-geo.a) - 2 * d3(-geo.a));
    res.derivative_right = std::fabs(d3(geo.a) - 2 * d1(geo.a));
    // w1' is continuous across -a for the analytic form, so the two one-sided
    // limits coincide
    res.flux = std::fabs(1.5 * d1(-geo.a) + d3(-geo.a) - 2 * d1(-geo.a));
    return res;
}

namespace {

// piecewise-linear sample of nodal values on a uniform mesh over [lo, hi]
struct ArcSamples {
    const std::vector<double>* v;
    double lo, hi, h;

    double value(double th) const {
        const double s = std::clamp((th - lo) / h, 0.0, double(v->size() - 1));
        const std::size_t j = std::min(std::size_t(s), v->size() - 2);
        const double frac = s - double(j);
        return (*v)[j] * (1 - frac) + (*v)[j + 1] * frac;
    }
    double deriv(double th) const {
        const double s = std::clamp((th - lo) / h, 0.0, double(v->size() - 1));
        const std::size_t j = std::min(std::size_t(s), v->size() - 2);
        return ((*v)[j + 1] - (*v)[j]) / h;
    }
};

// weighted angular integrals of the eigenvalue form: 3/2 on the one-field
// arcs, and w1^2 + w3^2 + (w1-w3)^2 on the overlap (-a, a)
struct AngularForms {
    double mass = 0;       // weighted integral of values squared
    double stiffness = 0;  // weighted integral of derivatives squared
};

AngularForms angular_forms(const std::vector<double>& w1,
                           const std::vector<double>& w3) {
    if (w1.size() < 2 || w3.size() < 2)
        throw std::invalid_argument("angular_forms: need at least 2 nodes per arc");
    const SectorGeometry geo;
    const double len = geo.a + geo.b;
    const ArcSamples s1{&w1, -geo.b, geo.a, len / double(w1.size() - 1)};
    const ArcSamples s3{&w3, -geo.a, geo.b, len / double(w3.size() - 1)};

    const int n = 4 * int(std::max(w1.size(), w3.size()));
    const double full = geo.b + geo.b;
    const double step = full / n;
    AngularForms out;
    for (int j = 0; j < n; ++j) {
        const double th = -geo.b + (j + 0.5) * step;
        double m = 0, k = 0;
        if (th < -geo.a) {
            const double v = s1.value(th), d = s1.deriv(th);
            m = 1.5 * v * v;
            k = 1.5 * d * d;
        } else if (th > geo.a) {
            const double v = s3.value(th), d = s3.deriv(th);
            m = 1.5 * v * v;
            k = 1.5 * d * d;
        } else {
            const double v1 = s1.value(th), v3 = s3.value(th);
            const double d1 = s1.deriv(th), d3 = s3.deriv(th);
            m = v1 * v1 + v3 * v3 + (v1 - v3) * (v1 - v3);
            k = d1 * d1 + d3 * d3 + (d1 - d3) * (d1 - d3);
        }
        out.mass += m * step;
        out.stiffness += k * step;
    }
    return out;
}

}  // namespace

double q_energy(const std::vector<double>& w1, const std::vector<double>& w3,
                double p) {
    if (p <= 0) throw std::invalid_argument("q_energy: homogeneity must be positive");
    const AngularForms f = angular_forms(w1, w3);
    // |grad(r^p w)|^2 = r^(2p-2) (p^2 w^2 + w'^2); the radial integral over
    // the unit sector contributes 1/(2p)
    return (p * p * f.mass + f.stiffness) / (2 * p);
}

double q_norm(const std::vector<double>& w1, const std::vector<double>& w3,
              double p) {
    (void)p;
    return std::sqrt(angular_forms(w1, w3).mass);
}

double rayleigh_eigen(int k, int mesh) {
    if (k < 1) throw std::invalid_argument("rayleigh_eigen: index is 1-based");
    if (mesh < 64) throw std::invalid_argument("rayleigh_eigen: mesh too coarse");
    const SectorGeometry geo;
    const double lo = -geo.b, hi = geo.b;
    const double h = (hi - lo) / mesh;

    // two nodal fields on the same mesh; field 1 lives on intervals whose
    // midpoint is below a, field 3 above -a
    const int nodes = mesh + 1;
    std::vector<int> dof1(nodes, -1), dof3(nodes, -1);
    int ndof = 0;
    for (int e = 0; e < mesh; ++e) {
        const double mid = lo + (e + 0.5) * h;
        if (mid < geo.a) {
            if (dof1[e] < 0) dof1[e] = ndof++;
            if (dof1[e + 1] < 0) dof1[e + 1] = ndof++;
        }
        if (mid > -geo.a) {
            if (dof3[e] < 0) dof3[e] = ndof++;
            if (dof3[e + 1] < 0) dof3[e + 1] = ndof++;
        }
    }
    if (k > ndof) throw std::invalid_argument("rayleigh_eigen: index beyond mesh");

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(ndof, ndof);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ndof, ndof);
    const double ks[2][2] = {{1 / h, -1 / h}, {-1 / h, 1 / h}};
    const double ms[2][2] = {{h / 3, h / 6}, {h / 6, h / 3}};
    auto add = [&](const int* d, double w) {
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                K(d[r], d[c]) += w * ks[r][c];
                M(d[r], d[c]) += w * ms[r][c];
            }
    };
    auto add_cross = [&](const int* da, const int* db, double w) {
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                K(da[r], db[c]) += w * ks[r][c];
                M(da[r], db[c]) += w * ms[r][c];
            }
    };
    for (int e = 0; e < mesh; ++e) {
        const double mid = lo + (e + 0.5) * h;
        const bool in1 = mid < geo.a;
        const bool in3 = mid > -geo.a;
        const int d1[2] = {dof1[e], dof1[e + 1]};
        const int d3[2] = {dof3[e], dof3[e + 1]};
        if (in1 && !in3) {
            add(d1, 1.5);
        } else if (in3 && !in1) {
            add(d3, 1.5);
        } else {
            // overlap: w1^2 + w3^2 + (w1 - w3)^2 expands to 2 w1^2 + 2 w3^2
            // - 2 w1 w3
            add(d1, 2.0);
            add(d3, 2.0);
            add_cross(d1, d3, -1.0);
            add_cross(d3, d1, -1.0);
        }
    }

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(K, M);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("rayleigh_eigen: eigensolver failed");
    return solver.eigenvalues()(k - 1);
}

std::vector<SpectrumRow> spectrum_table(int count) {
    std::vector<SpectrumRow> rows;
    int k = 1;
    for (const SpectralRoot& r : eigen_roots(count)) {
        for (int m = 0; m < r.multiplicity; ++m) {
            rows.push_back({k++, r.t, r.sqrt_lambda, r.lambda, r.branch,
                            r.multiplicity});
        }
    }
    return rows;
}

void write_spectrum_csv(const std::string& path, int count) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "k,t,sqrt_lambda,lambda,branch,multiplicity\n";
    char line[256];
    for (const SpectrumRow& r : spectrum_table(count)) {
        std::snprintf(line, sizeof line, "%d,%.12g,%.12g,%.12g,%s,%d\n", r.k,
                      r.t, r.sqrt_lambda, r.lambda,
                      r.branch == QuadraticBranch::Plus ? "plus" : "minus",
                      r.multiplicity);
        out << line;
    }
}

}  // namespace membrane
