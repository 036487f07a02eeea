#include "oamqkd/field.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace oamqkd {

double ComplexField::power() const {
    double acc = 0.0;
    for (const auto& a : amplitudes) acc += std::norm(a);
    return acc * grid.cell_area();
}

void ComplexField::normalize_power() {
    const double p = power();
    if (!(p > 0.0)) throw std::runtime_error("normalize_power: field has zero power");
    const double s = 1.0 / std::sqrt(p);
    for (auto& a : amplitudes) a *= s;
}

cdouble overlap(const ComplexField& a, const ComplexField& b) {
    if (a.grid != b.grid) throw std::invalid_argument("overlap: grid mismatch");
    cdouble acc{0.0, 0.0};
    const std::size_t m = a.amplitudes.size();
    for (std::size_t i = 0; i < m; ++i) acc += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    return acc * a.grid.cell_area();
}

ComplexField apply_aperture(const ComplexField& f, double r_a) {
    if (!(r_a > 0.0)) throw std::invalid_argument("apply_aperture: r_a must be positive");
    ComplexField out = f;
    const double r2 = r_a * r_a;
    const std::size_t n = f.grid.n;
    for (std::size_t iy = 0; iy < n; ++iy) {
        const double y = f.grid.coord(iy);
        for (std::size_t ix = 0; ix < n; ++ix) {
            const double x = f.grid.coord(ix);
            if (x * x + y * y > r2) out.at(iy, ix) = cdouble{0.0, 0.0};
        }
    }
    return out;
}

double power_within_radius(const ComplexField& f, double r_a) {
    const double r2 = r_a * r_a;
    const std::size_t n = f.grid.n;
    double acc = 0.0;
    for (std::size_t iy = 0; iy < n; ++iy) {
        const double y = f.grid.coord(iy);
        for (std::size_t ix = 0; ix < n; ++ix) {
            const double x = f.grid.coord(ix);
            if (x * x + y * y <= r2) acc += std::norm(f.at(iy, ix));
        }
    }
    return acc * f.grid.cell_area();
}

void dump_field(std::ostream& os, const ComplexField& f, const std::string& kind,
                double z, int l) {
    os << "oamqkd-dump v1\n";
    os << "kind=" << kind << "\n";
    os << "n=" << f.grid.n << "\n";
    os << "delta=" << std::hexfloat << f.grid.delta << std::defaultfloat << "\n";
    os << "z=" << std::hexfloat << z << std::defaultfloat << "\n";
    os << "l=" << l << "\n";
    os << "data\n";
    os.write(reinterpret_cast<const char*>(f.amplitudes.data()),
             static_cast<std::streamsize>(f.amplitudes.size() * sizeof(cdouble)));
    if (!os) throw std::runtime_error("dump_field: write failed");
}

ComplexField load_field(std::istream& is, std::string* kind_out, double* z_out, int* l_out) {
    std::string line;
    if (!std::getline(is, line) || line != "oamqkd-dump v1")
        throw std::runtime_error("load_field: bad magic");
    std::size_t n = 0;
    double delta = 0.0, z = 0.0;
    int l = 0;
    std::string kind;
    while (std::getline(is, line) && line != "data") {
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("load_field: bad header line");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "kind") kind = val;
        else if (key == "n") n = std::stoul(val);
        else if (key == "delta") delta = std::strtod(val.c_str(), nullptr);
        else if (key == "z") z = std::strtod(val.c_str(), nullptr);
        else if (key == "l") l = std::stoi(val);
    }
    ComplexField f(GridSpec(n, delta));
    is.read(reinterpret_cast<char*>(f.amplitudes.data()),
            static_cast<std::streamsize>(f.amplitudes.size() * sizeof(cdouble)));
    if (!is) throw std::runtime_error("load_field: truncated payload");
    if (kind_out) *kind_out = kind;
    if (z_out) *z_out = z;
    if (l_out) *l_out = l;
    return f;
}

} // namespace oamqkd
