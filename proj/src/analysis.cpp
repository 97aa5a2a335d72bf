#include "membrane/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "membrane/cones.hpp"
#include "membrane/io.hpp"
#include "membrane/solver.hpp"

namespace membrane {

namespace {
constexpr int kSurfacePoints = 720;

double cell_density(const MembraneStack& stack, int cx, int cy, double tau,
                    bool with_dirichlet) {
    const Grid& g = stack.grid();
    const int n = stack.n_membranes();
    double acc = 0.0;
    if (g.dim() == 1) {
        for (int i = 0; i < n; ++i) {
            const double s =
                (stack.value(i, cx + 1) - stack.value(i, cx)) / g.h(0);
            if (with_dirichlet) acc += s * s;
        }
        for (int i = 0; i + 1 < n; ++i) {
            const double gap =
                0.5 * ((stack.value(i, cx) - stack.value(i + 1, cx)) +
                       (stack.value(i, cx + 1) - stack.value(i + 1, cx + 1)));
            if (gap > tau) acc += 1.0;
        }
        return acc;
    }
    const std::size_t p00 = g.node_index(cx, cy), p10 = p00 + 1;
    const std::size_t p01 = g.node_index(cx, cy + 1), p11 = p01 + 1;
    for (int i = 0; i < n; ++i) {
        const auto& u = stack.field(i).data();
        if (with_dirichlet) {
            const double sx0 = (u[p10] - u[p00]) / g.h(0);
            const double sx1 = (u[p11] - u[p01]) / g.h(0);
            const double sy0 = (u[p01] - u[p00]) / g.h(1);
            const double sy1 = (u[p11] - u[p10]) / g.h(1);
            acc += 0.5 * (sx0 * sx0 + sx1 * sx1) + 0.5 * (sy0 * sy0 + sy1 * sy1);
        }
    }
    for (int i = 0; i + 1 < n; ++i) {
        const auto& a = stack.field(i).data();
        const auto& b = stack.field(i + 1).data();
        const double gap = 0.25 * ((a[p00] - b[p00]) + (a[p10] - b[p10]) +
                                   (a[p01] - b[p01]) + (a[p11] - b[p11]));
        if (gap > tau) acc += 1.0;
    }
    return acc;
}

}  // namespace

MembraneStack subtract_average(const MembraneStack& stack) {
    MembraneStack out = stack;
    const int n = out.n_membranes();
    for (std::size_t p = 0; p < out.grid().node_count(); ++p) {
        double avg = 0;
        for (int i = 0; i < n; ++i) avg += out.field(i)[p];
        avg /= n;
        for (int i = 0; i < n; ++i) out.field(i)[p] -= avg;
    }
    return out;
}

double sup_norm_on_ball(const MembraneStack& stack, Point center, double r) {
    const Grid& g = stack.grid();
    double worst = 0;
    const int nx = g.nodes(0);
    const int ny = g.dim() == 2 ? g.nodes(1) : 1;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const double dx = g.node_x(ix) - center[0];
            const double dy = g.dim() == 2 ? g.node_y(iy) - center[1] : 0.0;
            if (dx * dx + dy * dy > r * r) continue;
            const std::size_t p = g.node_index(ix, iy);
            for (int i = 0; i < stack.n_membranes(); ++i)
                worst = std::max(worst, std::fabs(stack.value(i, p)));
        }
    return worst;
}

WeissProfile weiss_profile(const MembraneStack& stack_in, Point center,
                           const std::vector<double>& radii, double tau) {
    const Grid& g = stack_in.grid();
    if (radii.empty())
        throw std::invalid_argument("weiss_profile: no radii given");
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] > radii[k - 1]))
            throw std::invalid_argument("weiss_profile: radii must increase");
    const double rmax = radii.empty() ? 0.0 : radii.back();
    if (center[0] - rmax < g.lo(0) || center[0] + rmax > g.hi(0) ||
        (g.dim() == 2 &&
         (center[1] - rmax < g.lo(1) || center[1] + rmax > g.hi(1))))
        throw std::invalid_argument("weiss_profile: ball leaves the domain");

    const MembraneStack stack = subtract_average(stack_in);
    const int n = stack.n_membranes();
    const int dim = g.dim();

    WeissProfile out;
    out.center = center;
    out.radii = radii;
    out.phi.reserve(radii.size());

    for (double r : radii) {
        // solid integral by cell-center inclusion
        double solid = 0;
        if (dim == 1) {
            for (int c = 0; c < g.cells(0); ++c) {
                if (std::fabs(g.cell_center_x(c) - center[0]) >= r) continue;
                solid += g.cell_volume() * cell_density(stack, c, 0, tau, true);
            }
        } else {
            for (int cy = 0; cy < g.cells(1); ++cy)
                for (int cx = 0; cx < g.cells(0); ++cx) {
                    const double dx = g.cell_center_x(cx) - center[0];
                    const double dy = g.cell_center_y(cy) - center[1];
                    if (dx * dx + dy * dy >= r * r) continue;
                    solid += g.cell_volume() * cell_density(stack, cx, cy, tau, true);
                }
        }

        double surface = 0;
        if (dim == 1) {
            for (double s : {-r, r}) {
                double norm2 = 0;
                for (int i = 0; i < n; ++i) {
                    const double v = stack.field(i).interpolate(center[0] + s);
                    norm2 += v * v;
                }
                surface += norm2;
            }
            out.phi.push_back(solid / r - surface / (r * r));
        } else {
            for (int q = 0; q < kSurfacePoints; ++q) {
                const double th = 2 * M_PI * q / kSurfacePoints;
                const double x = center[0] + r * std::cos(th);
                const double y = center[1] + r * std::sin(th);
                double norm2 = 0;
                for (int i = 0; i < n; ++i) {
                    const double v = stack.field(i).interpolate(x, y);
                    norm2 += v * v;
                }
                surface += norm2;
            }
            surface *= 2 * M_PI * r / kSurfacePoints;
            out.phi.push_back(solid / (r * r) - surface / (r * r * r));
        }
    }

    out.min_increment = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < out.phi.size(); ++k)
        out.min_increment = std::min(out.min_increment, out.phi[k] - out.phi[k - 1]);
    if (out.phi.size() < 2) out.min_increment = 0.0;
    return out;
}

MembraneStack rescale_blowup(const MembraneStack& stack, Point center, double r,
                             int ref_cells) {
    const Grid& g = stack.grid();
    if (r < 4 * g.max_h())
        throw std::invalid_argument("rescale_blowup: radius below 4h");
    if (center[0] - r < g.lo(0) || center[0] + r > g.hi(0) ||
        (g.dim() == 2 &&
         (center[1] - r < g.lo(1) || center[1] + r > g.hi(1))))
        throw std::invalid_argument("rescale_blowup: ball leaves the domain");

    Grid ref = g.dim() == 1 ? Grid::make_1d(-1, 1, ref_cells)
                            : Grid::make_2d(-1, 1, -1, 1, ref_cells, ref_cells);
    MembraneStack out(ref, stack.n_membranes(), 1e-9);
    const int nx = ref.nodes(0);
    const int ny = ref.dim() == 2 ? ref.nodes(1) : 1;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const double x = center[0] + r * ref.node_x(ix);
            const double y = g.dim() == 2 ? center[1] + r * ref.node_y(iy) : 0.0;
            const std::size_t p = ref.node_index(ix, iy);
            for (int i = 0; i < stack.n_membranes(); ++i)
                out.field(i)[p] = stack.field(i).interpolate(x, y) / r;
        }
    return out;
}

namespace {

// crossing parameter of (a - tau) along an edge, in [0,1]
double cross_at(double a, double b, double tau) {
    const double d = b - a;
    if (d == 0) return 0.5;
    double t = (tau - a) / d;
    return std::clamp(t, 0.0, 1.0);
}

struct SegmentSoup {
    std::vector<std::array<Point, 2>> segs;
};

long long key_of(Point p, double eps) {
    const long long kx = llround(p[0] / eps);
    const long long ky = llround(p[1] / eps);
    return kx * 2000003LL + ky;
}

std::vector<Polyline> chain_segments(const SegmentSoup& soup, double eps) {
    std::multimap<long long, std::size_t> by_end;
    for (std::size_t s = 0; s < soup.segs.size(); ++s) {
        by_end.emplace(key_of(soup.segs[s][0], eps), s);
        by_end.emplace(key_of(soup.segs[s][1], eps), s);
    }
    std::vector<char> used(soup.segs.size(), 0);
    std::vector<Polyline> out;
    for (std::size_t s0 = 0; s0 < soup.segs.size(); ++s0) {
        if (used[s0]) continue;
        used[s0] = 1;
        std::vector<Point> pts{soup.segs[s0][0], soup.segs[s0][1]};
        for (int dir = 0; dir < 2; ++dir) {
            while (true) {
                const Point tip = dir == 0 ? pts.back() : pts.front();
                const auto [lo, hi] = by_end.equal_range(key_of(tip, eps));
                std::size_t next = SIZE_MAX;
                for (auto it = lo; it != hi; ++it)
                    if (!used[it->second]) next = it->second;
                if (next == SIZE_MAX) break;
                used[next] = 1;
                const auto& seg = soup.segs[next];
                const double d0 = std::hypot(seg[0][0] - tip[0], seg[0][1] - tip[1]);
                const Point far = d0 < eps ? seg[1] : seg[0];
                if (dir == 0) pts.push_back(far);
                else pts.insert(pts.begin(), far);
            }
        }
        Polyline pl;
        pl.pts = std::move(pts);
        out.push_back(std::move(pl));
    }
    return out;
}

}  // namespace

FreeBoundarySet extract_free_boundaries(const MembraneStack& stack, double tau) {
    if (tau < 0) throw std::invalid_argument("extract_free_boundaries: tau < 0");
    const Grid& g = stack.grid();
    const int n = stack.n_membranes();
    FreeBoundarySet out;
    out.gamma.resize(n - 1);

    for (int i = 0; i + 1 < n; ++i) {
        if (g.dim() == 1) {
            for (int c = 0; c < g.cells(0); ++c) {
                const double a = stack.value(i, c) - stack.value(i + 1, c) - tau;
                const double b = stack.value(i, c + 1) - stack.value(i + 1, c + 1) - tau;
                if ((a > 0) == (b > 0)) continue;
                const double t = cross_at(a + tau, b + tau, tau);
                Polyline pl;
                pl.pts.push_back({g.node_x(c) + t * g.h(0), 0.0});
                out.gamma[i].push_back(std::move(pl));
            }
            continue;
        }

        SegmentSoup soup;
        const auto& ua = stack.field(i).data();
        const auto& ub = stack.field(i + 1).data();
        for (int cy = 0; cy < g.cells(1); ++cy)
            for (int cx = 0; cx < g.cells(0); ++cx) {
                const std::size_t p00 = g.node_index(cx, cy), p10 = p00 + 1;
                const std::size_t p01 = g.node_index(cx, cy + 1), p11 = p01 + 1;
                const double v00 = ua[p00] - ub[p00], v10 = ua[p10] - ub[p10];
                const double v01 = ua[p01] - ub[p01], v11 = ua[p11] - ub[p11];
                const int code = (v00 > tau) | ((v10 > tau) << 1) |
                                 ((v01 > tau) << 2) | ((v11 > tau) << 3);
                if (code == 0 || code == 15) continue;
                const double x0 = g.node_x(cx), y0 = g.node_y(cy);
                // points on the four cell faces where the gap crosses tau
                std::vector<Point> hits;
                auto edge = [&](double a, double b, Point pa, Point pb) {
                    if ((a > tau) == (b > tau)) return;
                    const double t = cross_at(a, b, tau);
                    hits.push_back({pa[0] + t * (pb[0] - pa[0]),
                                    pa[1] + t * (pb[1] - pa[1])});
                };
                edge(v00, v10, {x0, y0}, {x0 + g.h(0), y0});
                edge(v10, v11, {x0 + g.h(0), y0}, {x0 + g.h(0), y0 + g.h(1)});
                edge(v11, v01, {x0 + g.h(0), y0 + g.h(1)}, {x0, y0 + g.h(1)});
                edge(v01, v00, {x0, y0 + g.h(1)}, {x0, y0});
                if (hits.size() == 2) {
                    soup.segs.push_back({hits[0], hits[1]});
                } else if (hits.size() == 4) {
                    // ambiguous saddle: split by the cell-center value
                    const double vc = 0.25 * (v00 + v10 + v01 + v11);
                    if ((vc > tau) == (v00 > tau)) {
                        soup.segs.push_back({hits[0], hits[3]});
                        soup.segs.push_back({hits[1], hits[2]});
                    } else {
                        soup.segs.push_back({hits[0], hits[1]});
                        soup.segs.push_back({hits[2], hits[3]});
                    }
                }
            }
        out.gamma[i] = chain_segments(soup, 1e-9 * std::max(1.0, g.hi(0) - g.lo(0)));
    }

    // junctions: vertices of distinct indices within 2h, clustered
    const double near = 2 * g.max_h();
    std::vector<Point> raw;
    for (int i = 0; i + 1 < n; ++i)
        for (int j = i + 1; j + 1 < n; ++j)
            for (const auto& pi : out.gamma[i])
                for (const auto& pj : out.gamma[j])
                    for (const auto& a : pi.pts)
                        for (const auto& b : pj.pts) {
                            const double d = std::hypot(a[0] - b[0], a[1] - b[1]);
                            if (d <= near)
                                raw.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])});
                        }
    const double merge = 4 * g.max_h();
    for (const auto& p : raw) {
        bool merged = false;
        for (auto& q : out.junctions)
            if (std::hypot(p[0] - q[0], p[1] - q[1]) <= merge) {
                merged = true;
                break;
            }
        if (!merged) out.junctions.push_back(p);
    }
    // refine each junction to the centroid of nearby raw hits
    for (auto& q : out.junctions) {
        double sx = 0, sy = 0;
        int cnt = 0;
        for (const auto& p : raw)
            if (std::hypot(p[0] - q[0], p[1] - q[1]) <= merge) {
                sx += p[0];
                sy += p[1];
                ++cnt;
            }
        if (cnt) q = {sx / cnt, sy / cnt};
    }
    return out;
}

namespace {

double v0_fit_residual(const MembraneStack& blowup, double rot) {
    const Grid& g = blowup.grid();
    const ConeSpec spec = ConeSpec::v0(rot);
    double num = 0, den = 0;
    for (int iy = 0; iy < g.nodes(1); ++iy)
        for (int ix = 0; ix < g.nodes(0); ++ix) {
            const double x = g.node_x(ix), y = g.node_y(iy);
            const double r = std::hypot(x, y);
            if (r < 0.25 || r > 0.95) continue;
            const auto v = evaluate_cone(spec, x, y);
            const std::size_t p = g.node_index(ix, iy);
            for (int i = 0; i < 3; ++i) {
                const double d = blowup.value(i, p) - v[i];
                num += d * d;
                den += v[i] * v[i];
            }
        }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

JunctionFit junction_fit(const MembraneStack& stack, Point junction,
                         double fit_radius, double residual_threshold) {
    const Grid& g = stack.grid();
    if (fit_radius < 8 * g.max_h())
        throw std::invalid_argument("junction_fit: fit radius below 8h");
    const MembraneStack zero_avg = subtract_average(stack);
    const MembraneStack blowup = rescale_blowup(zero_avg, junction, fit_radius, 96);

    JunctionFit out;
    double best = std::numeric_limits<double>::infinity(), best_rot = 0;
    const double step = 0.5 * M_PI / 180.0;
    for (double rot = 0; rot < 2 * M_PI; rot += step) {
        const double res = v0_fit_residual(blowup, rot);
        if (res < best) {
            best = res;
            best_rot = rot;
        }
    }
    // golden-section refinement on [best_rot - step, best_rot + step]
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double a = best_rot - step, b = best_rot + step;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = v0_fit_residual(blowup, c), fd = v0_fit_residual(blowup, d);
    for (int it = 0; it < 40; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = v0_fit_residual(blowup, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = v0_fit_residual(blowup, d);
        }
    }
    out.rotation = std::fmod(0.5 * (a + b) + 2 * M_PI, 2 * M_PI);
    out.residual = v0_fit_residual(blowup, out.rotation);
    out.classified = out.residual <= residual_threshold;

    // ray angles from the blow-up's free boundaries: total-least-squares
    // direction per angular cluster of contour vertices
    const double href = blowup.grid().max_h();
    const auto fb = extract_free_boundaries(blowup, 2 * href);
    std::vector<double> angles;
    std::vector<Point> verts;
    for (const auto& polys : fb.gamma)
        for (const auto& pl : polys)
            for (const auto& p : pl.pts) {
                const double r = std::hypot(p[0], p[1]);
                if (r >= 4 * href && r <= 0.95) {
                    verts.push_back(p);
                    angles.push_back(std::atan2(p[1], p[0]));
                }
            }
    if (!verts.empty()) {
        std::vector<std::size_t> order(verts.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t u, std::size_t v) { return angles[u] < angles[v]; });
        std::vector<std::vector<std::size_t>> clusters;
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (clusters.empty() ||
                angles[order[k]] - angles[clusters.back().back()] > 0.3)
                clusters.emplace_back();
            clusters.back().push_back(order[k]);
        }
        // wraparound: merge first and last clusters when adjacent mod 2pi
        if (clusters.size() > 1 &&
            (angles[clusters.front().front()] + 2 * M_PI -
             angles[clusters.back().back()]) < 0.3) {
            for (auto idx : clusters.back()) clusters.front().push_back(idx);
            clusters.pop_back();
        }
        for (const auto& cl : clusters) {
            double mx = 0, my = 0;
            for (auto idx : cl) {
                mx += verts[idx][0];
                my += verts[idx][1];
            }
            mx /= cl.size();
            my /= cl.size();
            double sxx = 0, sxy = 0, syy = 0;
            for (auto idx : cl) {
                const double dx = verts[idx][0] - mx, dy = verts[idx][1] - my;
                sxx += dx * dx;
                sxy += dx * dy;
                syy += dy * dy;
            }
            double dirx, diry;
            if (cl.size() < 3 || (sxx + syy) < 1e-24) {
                dirx = mx;
                diry = my;
            } else {
                // principal axis of the scatter matrix
                const double tr = sxx + syy, det = sxx * syy - sxy * sxy;
                const double l = 0.5 * tr + std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
                if (std::fabs(sxy) > 1e-30) {
                    dirx = l - syy;
                    diry = sxy;
                } else {
                    dirx = sxx >= syy ? 1 : 0;
                    diry = sxx >= syy ? 0 : 1;
                }
                if (dirx * mx + diry * my < 0) {
                    dirx = -dirx;
                    diry = -diry;
                }
            }
            out.ray_angles.push_back(std::atan2(diry, dirx));
        }
        std::sort(out.ray_angles.begin(), out.ray_angles.end());
    }
    return out;
}

double equipartition_residual(const MembraneStack& stack, double branch_point,
                              int window_cells, double tau) {
    const Grid& g = stack.grid();
    if (g.dim() != 1)
        throw std::invalid_argument("equipartition_residual: 1D stacks only");
    if (window_cells < 8)
        throw std::invalid_argument("equipartition_residual: window below 8 cells");
    const int n = stack.n_membranes();
    const double h = g.h(0);
    const int node_b = int(std::lround((branch_point - g.lo(0)) / h));
    if (node_b < 0 || node_b > g.cells(0))
        throw std::invalid_argument("equipartition_residual: branch point outside grid");

    // membranes coinciding at the branch point
    const double coincide_tol = std::max(tau, 2 * h * max_slope(stack));
    std::vector<int> group;
    for (int i = 0; i < n; ++i) {
        if (group.empty()) {
            group.push_back(i);
            continue;
        }
        if (stack.value(group.back(), node_b) - stack.value(i, node_b) <= coincide_tol)
            group.push_back(i);
        else if (group.size() >= 2)
            break;
        else
            group = {i};
    }
    if (group.size() < 2)
        throw std::invalid_argument("equipartition_residual: no coinciding pair at point");

    // the first few cells past the branch point have sub-tolerance gaps even
    // on exact data; the window starts beyond them
    const int skip = 4;

    auto side_stats = [&](int dir, int& separations, bool& clean) {
        // window of nodes strictly on one side of the branch node
        separations = 0;
        clean = true;
        const int first = node_b + dir * skip;
        const int last = node_b + dir * (skip + window_cells);
        if (std::min(first, last) < 0 || std::max(first, last) > g.cells(0)) {
            clean = false;
            return;
        }
        for (std::size_t k = 0; k + 1 < group.size(); ++k) {
            bool open_all = true, closed_all = true;
            for (int p = std::min(first, last); p <= std::max(first, last); ++p) {
                const double gap = stack.value(group[k], p) - stack.value(group[k + 1], p);
                if (gap > std::max(tau, coincide_tol)) closed_all = false;
                else open_all = false;
            }
            if (!open_all && !closed_all) clean = false;  // crosses another branch
            if (open_all) ++separations;
        }
    };

    int sep_r, sep_l;
    bool clean_r, clean_l;
    side_stats(+1, sep_r, clean_r);
    side_stats(-1, sep_l, clean_l);
    int dir;
    if (clean_r && sep_r > 0 && (sep_r >= sep_l || !clean_l)) dir = +1;
    else if (clean_l && sep_l > 0) dir = -1;
    else throw std::invalid_argument("equipartition_residual: window crosses another branch point or no separation");
    const int separations = dir > 0 ? sep_r : sep_l;

    // least-squares slope of each group membrane over the window
    const int first = node_b + dir * skip;
    const int last = node_b + dir * (skip + window_cells);
    const int lo = std::min(first, last), hi = std::max(first, last);
    const int m = hi - lo + 1;
    double sum_x = 0, sum_xx = 0;
    for (int p = lo; p <= hi; ++p) {
        const double x = g.node_x(p);
        sum_x += x;
        sum_xx += x * x;
    }
    const double mean_x = sum_x / m;
    const double var = sum_xx - m * mean_x * mean_x;
    std::vector<double> slopes;
    for (int i : group) {
        double sum_xy = 0, sum_y = 0;
        for (int p = lo; p <= hi; ++p) {
            sum_xy += g.node_x(p) * stack.value(i, p);
            sum_y += stack.value(i, p);
        }
        slopes.push_back((sum_xy - mean_x * sum_y) / var);
    }
    double mean_slope = 0;
    for (double s : slopes) mean_slope += s;
    mean_slope /= slopes.size();
    double energy = 0;
    for (double s : slopes) energy += (s - mean_slope) * (s - mean_slope);
    return std::fabs(energy - separations);
}

void write_weiss_csv(const std::string& path, const WeissProfile& profile) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_weiss_csv: cannot open " + path);
    out << "r,phi\n";
    for (std::size_t k = 0; k < profile.radii.size(); ++k)
        out << format_full(profile.radii[k]) << "," << format_full(profile.phi[k])
            << "\n";
}

void write_boundaries_csv(const std::string& path, const FreeBoundarySet& fb) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_boundaries_csv: cannot open " + path);
    out << "index,polyline,x,y\n";
    for (std::size_t i = 0; i < fb.gamma.size(); ++i)
        for (std::size_t j = 0; j < fb.gamma[i].size(); ++j)
            for (const auto& p : fb.gamma[i][j].pts)
                out << (i + 1) << "," << j << "," << format_full(p[0]) << ","
                    << format_full(p[1]) << "\n";
}

void write_boundaries_svg(const std::string& path, const MembraneStack& stack,
                          const FreeBoundarySet& fb) {
    const Grid& g = stack.grid();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_boundaries_svg: cannot open " + path);
    const double w = g.hi(0) - g.lo(0);
    const double hgt = g.dim() == 2 ? g.hi(1) - g.lo(1) : 0.25 * w;
    const double scale = 900.0 / w;
    auto X = [&](double x) { return (x - g.lo(0)) * scale; };
    auto Y = [&](double y) {
        return g.dim() == 2 ? (g.hi(1) - y) * scale : 0.5 * hgt * scale;
    };
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w * scale
        << "' height='" << hgt * scale << "'>\n";
    out << "<rect width='100%' height='100%' fill='#ffffff'/>\n";

    if (g.dim() == 2) {
        // light shading where any pair is separated
        const double tau = 1e-9;
        for (int cy = 0; cy < g.cells(1); ++cy)
            for (int cx = 0; cx < g.cells(0); ++cx) {
                int sep = int(cell_density(stack, cx, cy, tau, false));
                if (!sep) continue;
                const char* fill = sep == 1 ? "#dce9f7" : "#f7e3dc";
                out << "<rect x='" << X(g.node_x(cx)) << "' y='"
                    << Y(g.node_y(cy + 1)) << "' width='" << g.h(0) * scale
                    << "' height='" << g.h(1) * scale << "' fill='" << fill
                    << "'/>\n";
            }
    }
    static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd"};
    for (std::size_t i = 0; i < fb.gamma.size(); ++i)
        for (const auto& pl : fb.gamma[i]) {
            out << "<polyline fill='none' stroke='" << colors[i % 4]
                << "' stroke-width='2' points='";
            for (const auto& p : pl.pts) out << X(p[0]) << "," << Y(p[1]) << " ";
            out << "'/>\n";
        }
    for (const auto& j : fb.junctions)
        out << "<circle cx='" << X(j[0]) << "' cy='" << Y(j[1])
            << "' r='5' fill='#000000'/>\n";
    out << "</svg>\n";
}

}  // namespace membrane
