#include "membrane/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace membrane {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_stack(std::ostream& out, const MembraneStack& stack) {
    const Grid& g = stack.grid();
    out << "membrane-stack v1\n";
    out << "dim " << g.dim() << "\n";
    out << "extents";
    for (int a = 0; a < g.dim(); ++a)
        out << " " << format_full(g.lo(a)) << " " << format_full(g.hi(a));
    out << "\n";
    out << "resolution";
    for (int a = 0; a < g.dim(); ++a) out << " " << g.cells(a);
    out << "\n";
    out << "membranes " << stack.n_membranes() << "\n";
    out << "tau_feas " << format_full(stack.feasibility_tol()) << "\n";
    for (int i = 0; i < stack.n_membranes(); ++i) {
        out << "field " << i << "\n";
        const auto& v = stack.field(i).data();
        for (double x : v) out << format_full(x) << "\n";
    }
}

void write_stack(const std::string& path, const MembraneStack& stack) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_stack: cannot open " + path);
    write_stack(out, stack);
}

MembraneStack read_stack(std::istream& in) {
    std::string word;
    in >> word;
    if (word != "membrane-stack")
        throw std::runtime_error("read_stack: bad magic '" + word + "'");
    in >> word;  // version
    auto expect = [&](const std::string& key) {
        in >> word;
        if (word != key)
            throw std::runtime_error("read_stack: expected '" + key + "', got '" +
                                     word + "'");
    };
    expect("dim");
    int dim;
    in >> dim;
    expect("extents");
    std::array<double, 2> lo{0, 0}, hi{0, 0};
    for (int a = 0; a < dim; ++a) in >> lo[a] >> hi[a];
    expect("resolution");
    std::array<int, 2> cells{0, 0};
    for (int a = 0; a < dim; ++a) in >> cells[a];
    expect("membranes");
    int n;
    in >> n;
    expect("tau_feas");
    double tau;
    in >> tau;
    Grid g(dim, lo, hi, cells);
    MembraneStack stack(g, n, tau);
    for (int i = 0; i < n; ++i) {
        expect("field");
        int idx;
        in >> idx;
        if (idx != i) throw std::runtime_error("read_stack: field blocks out of order");
        for (double& x : stack.field(i).data()) in >> x;
    }
    if (!in) throw std::runtime_error("read_stack: truncated file");
    return stack;
}

MembraneStack read_stack(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_stack: cannot open " + path);
    return read_stack(in);
}

}  // namespace membrane
