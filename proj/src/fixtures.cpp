#include "pwqnet/fixtures.hpp"

#include <stdexcept>

namespace pwqnet::fixtures {

Pwq1D ovf_1d() {
    Pwq1D f;
    f.breakpoints = {-5.0 / 3.0, -1.0, 1.0, 5.0 / 3.0};
    f.segments = {{11.0, 12.0, 6.0}, {5.0, 0.0, 0.0}, {11.0, -12.0, 6.0}};
    return f;
}

Pwa1D ovf_1d_lift_direct() {
    Pwa1D h;
    h.breakpoints = {-5.0 / 3.0, -1.0, 1.0, 5.0 / 3.0};
    h.pieces = {{-56.0 / 3.0, -56.0 / 3.0}, {10.0 / 3.0, 10.0 / 3.0}, {76.0 / 3.0, -56.0 / 3.0}};
    return h;
}

Pwa1D ovf_1d_lift_opt() {
    Pwa1D h;
    h.breakpoints = {-5.0 / 3.0, -1.0, 1.0, 5.0 / 3.0};
    h.pieces = {{-22.0, -22.0 / 3.0}, {0.0, 44.0 / 3.0}, {22.0, -22.0 / 3.0}};
    return h;
}

Pwq1D single_segment() {
    Pwq1D f;
    f.breakpoints = {-1.0, 1.0};
    f.segments = {{1.0, 0.0, 0.0}};
    return f;
}

Pwq1D nonconvex_example() {
    Pwq1D f;
    f.breakpoints = {-1.0, 0.0, 1.0};
    f.segments = {{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}};
    return f;
}

PwaND ovf_2d_lift() {
    PwaND h;
    auto piece = [](double a1, double a2, double d) {
        AffinePieceND p;
        p.a = Eigen::Vector2d(a1, a2);
        p.d = d;
        return p;
    };
    h.pieces = {
        piece(99.2, -24.34, -292.77),  piece(99.2, 245.83, -22.61),
        piece(-18.18, -32.03, 247.56), piece(-24.21, -21.76, 191.07),
        piece(-48.75, -104.4, 177.19), piece(-107.26, -63.29, -300.45),
    };
    return h;
}

PwqND ovf_2d() {
    const PwaND lift = ovf_2d_lift();
    const std::size_t k = lift.pieces.size();
    const double x1_lo = -10.0, x1_hi = 5.0;
    const double x2_lo = -2.0, x2_hi = 4.0;

    PwqND f;
    for (std::size_t i = 0; i < k; ++i) {
        // dominance cell of lift piece i, clipped to the box
        PolyRegion r;
        r.A.resize(static_cast<Eigen::Index>(k - 1 + 4), 2);
        r.b.resize(static_cast<Eigen::Index>(k - 1 + 4));
        Eigen::Index row = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            r.A.row(row) = (lift.pieces[j].a - lift.pieces[i].a).transpose();
            r.b[row] = lift.pieces[i].d - lift.pieces[j].d;
            ++row;
        }
        r.A.row(row) << -1.0, 0.0;
        r.b[row++] = -x1_lo;
        r.A.row(row) << 1.0, 0.0;
        r.b[row++] = x1_hi;
        r.A.row(row) << 0.0, -1.0;
        r.b[row++] = -x2_lo;
        r.A.row(row) << 0.0, 1.0;
        r.b[row++] = x2_hi;

        auto center = find_interior_point(r.A, r.b);
        if (!center) {
            throw std::runtime_error("2D fixture: dominance cell " + std::to_string(i) +
                                     " has no interior inside the box");
        }
        r.interior_point = *center;
        f.regions.push_back(std::move(r));

        QuadPieceND p;
        p.Q = Eigen::MatrixXd::Identity(2, 2);
        p.l = 0.5 * lift.pieces[i].a;
        p.c = 0.5 * lift.pieces[i].d;
        f.pieces.push_back(std::move(p));
    }
    return f;
}

}  // namespace pwqnet::fixtures
