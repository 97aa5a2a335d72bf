#include "membrane/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace membrane {

SlopePair one_d_slopes(int n, int k) {
    if (n < 2) throw std::invalid_argument("one_d_slopes: N >= 2 required");
    if (k < 1 || k > n - 1)
        throw std::invalid_argument("one_d_slopes: k out of range [1, N-1]");
    return {std::sqrt(double(n - k) / (double(k) * n)),
            std::sqrt(double(k) / (double(n - k) * n))};
}

ConeSpec ConeSpec::one_d(int n, int k, bool reflected) {
    one_d_slopes(n, k);  // validate
    ConeSpec s;
    s.variant = ConeVariant::OneD;
    s.n_membranes = n;
    s.k = k;
    s.reflected = reflected;
    return s;
}
ConeSpec ConeSpec::v0(double rotation) {
    ConeSpec s;
    s.variant = ConeVariant::V0;
    s.rotation = rotation;
    return s;
}
ConeSpec ConeSpec::vs(double rotation) {
    ConeSpec s;
    s.variant = ConeVariant::Vs;
    s.rotation = rotation;
    return s;
}
ConeSpec ConeSpec::triple_critical() {
    ConeSpec s;
    s.variant = ConeVariant::TripleCritical;
    return s;
}
ConeSpec ConeSpec::explicit_1d() {
    ConeSpec s;
    s.variant = ConeVariant::Explicit1D;
    return s;
}

namespace {

// v_{0,1}: slope sqrt(2/3) along e_{-pi/6} on theta in [-2pi/3, pi/6],
// slope sqrt(1/6) along e_{pi/6} on [pi/6, 2pi/3], zero otherwise.
double v01(double x, double y) {
    const double r = std::hypot(x, y);
    if (r == 0) return 0.0;
    const double theta = std::atan2(y, x);
    const double pi = M_PI;
    auto dot = [&](double phi) { return x * std::cos(phi) + y * std::sin(phi); };
    if (theta >= -2 * pi / 3 && theta <= pi / 6)
        return std::sqrt(2.0 / 3.0) * dot(-pi / 6);
    if (theta >= pi / 6 && theta <= 2 * pi / 3)
        return std::sqrt(1.0 / 6.0) * dot(pi / 6);
    return 0.0;
}

double vs1(double x, double y) {
    return std::max(std::fabs(x), 2 * std::fabs(y)) / std::sqrt(10.0);
}

}  // namespace

std::vector<double> evaluate_cone(const ConeSpec& spec, double x, double y) {
    switch (spec.variant) {
        case ConeVariant::OneD: {
            const auto [a, b] = one_d_slopes(spec.n_membranes, spec.k);
            const double t = spec.reflected ? -x : x;
            const double tp = t > 0 ? t : 0.0;
            std::vector<double> u(spec.n_membranes);
            for (int i = 0; i < spec.n_membranes; ++i)
                u[i] = (i < spec.k) ? a * tp : -b * tp;
            return u;
        }
        case ConeVariant::V0: {
            const double c = std::cos(spec.rotation), s = std::sin(spec.rotation);
            // active rotation: evaluate the reference cone at R(-rot) x
            const double xr = c * x + s * y;
            const double yr = -s * x + c * y;
            const double u1 = v01(xr, yr);
            const double u3 = -v01(xr, -yr);
            return {u1, -u1 - u3, u3};
        }
        case ConeVariant::Vs: {
            const double c = std::cos(spec.rotation), s = std::sin(spec.rotation);
            const double xr = c * x + s * y;
            const double yr = -s * x + c * y;
            const double u1 = vs1(xr, yr);
            const double u3 = -vs1(yr, xr);
            return {u1, -u1 - u3, u3};
        }
        case ConeVariant::TripleCritical: {
            const double xp = x > 0 ? x : 0.0;
            return {xp, 0.0, -xp};
        }
        case ConeVariant::Explicit1D: {
            const auto u = explicit_1d_minimizer(x);
            return {u[0], u[1], u[2]};
        }
    }
    throw std::logic_error("evaluate_cone: unknown variant");
}

std::array<double, 3> explicit_1d_minimizer(double x) {
    const double lambda = std::sqrt(2.0) / std::sqrt(3.0);
    const double mu = 1.0 / std::sqrt(2.0);
    auto pos = [](double t) { return t > 0 ? t : 0.0; };
    const double u1 = lambda * pos(x - 1 + 1 / lambda);
    const double u2 = -0.5 * u1 + mu * pos(x - 1 + 1 / (2 * mu));
    return {u1, u2, -u1 - u2};
}

double explicit_kink_1() { return 1.0 - std::sqrt(1.5); }
double explicit_kink_2() { return 1.0 - 1.0 / std::sqrt(2.0); }

double cone_energy(const ConeSpec& spec) {
    const double pi = M_PI;
    switch (spec.variant) {
        case ConeVariant::OneD:
            // one separated pair on a half plane
            return pi / 2;
        case ConeVariant::TripleCritical:
            // two separations on the half plane {x > 0}
            return pi;
        case ConeVariant::Explicit1D:
            throw std::invalid_argument("cone_energy: explicit1d is not a cone");
        case ConeVariant::V0:
            // {u1 > u2} and {u2 > u3} are sectors of angle 5*pi/6 each
            return 5 * pi / 6;
        case ConeVariant::Vs: {
            // {u1 = u2} = {|x1| >= 2|x2|}, {u2 = u3} = {|x2| >= 2|x1|};
            // each coincidence set has total angle 4*atan(1/2)
            const double open_angle = 2 * pi - 4 * std::atan(0.5);
            return open_angle;  // two sets, each of disk area open_angle / 2
        }
    }
    throw std::logic_error("cone_energy: unknown variant");
}

std::optional<ConeClassification> classify_1d(const MembraneStack& stack, double tol) {
    const Grid& g = stack.grid();
    if (g.dim() != 1)
        throw std::invalid_argument("classify_1d: 1D stacks only");
    const int n = stack.n_membranes();
    const int nodes = g.nodes(0);

    // require approximately zero average
    for (int p = 0; p < nodes; ++p) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += stack.value(i, p);
        if (std::fabs(s) > n * tol)
            throw std::invalid_argument("classify_1d: sum u_i not ~ 0");
    }

    double best = std::numeric_limits<double>::infinity();
    ConeClassification out;
    for (int k = 1; k <= n - 1; ++k) {
        for (int refl = 0; refl < 2; ++refl) {
            const ConeSpec spec = ConeSpec::one_d(n, k, refl != 0);
            double res = 0;
            for (int p = 0; p < nodes; ++p) {
                const auto u = evaluate_cone(spec, g.node_x(p));
                for (int i = 0; i < n; ++i)
                    res = std::max(res, std::fabs(u[i] - stack.value(i, p)));
            }
            if (res < best) {
                best = res;
                out = {k, refl != 0, res};
            }
        }
    }
    if (best <= tol) return out;
    return std::nullopt;
}

ConeSpec ConeSpec::parse(const std::string& text) {
    std::istringstream in(text);
    std::string head;
    in >> head;
    auto kv = [&](std::string& key, std::string& val, const std::string& tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("ConeSpec: bad token '" + tok + "'");
        key = tok.substr(0, eq);
        val = tok.substr(eq + 1);
    };
    if (head == "oned") {
        int n = 3, k = 1;
        bool refl = false;
        std::string tok;
        while (in >> tok) {
            std::string key, val;
            kv(key, val, tok);
            if (key == "N") n = std::stoi(val);
            else if (key == "k") k = std::stoi(val);
            else if (key == "reflected") refl = (val == "true" || val == "1");
            else throw std::invalid_argument("ConeSpec: unknown key '" + key + "'");
        }
        return one_d(n, k, refl);
    }
    if (head == "v0" || head == "vs") {
        double rot = 0;
        std::string tok;
        while (in >> tok) {
            std::string key, val;
            kv(key, val, tok);
            if (key == "rot") rot = std::stod(val);
            else throw std::invalid_argument("ConeSpec: unknown key '" + key + "'");
        }
        return head == "v0" ? v0(rot) : vs(rot);
    }
    if (head == "triple") return triple_critical();
    if (head == "explicit1d") return explicit_1d();
    throw std::invalid_argument("ConeSpec: unknown variant '" + head + "'");
}

std::string ConeSpec::to_string() const {
    std::ostringstream out;
    switch (variant) {
        case ConeVariant::OneD:
            out << "oned N=" << n_membranes << " k=" << k
                << " reflected=" << (reflected ? "true" : "false");
            break;
        case ConeVariant::V0:
            out << "v0 rot=" << rotation;
            break;
        case ConeVariant::Vs:
            out << "vs rot=" << rotation;
            break;
        case ConeVariant::TripleCritical:
            out << "triple";
            break;
        case ConeVariant::Explicit1D:
            out << "explicit1d";
            break;
    }
    return out.str();
}

}  // namespace membrane
