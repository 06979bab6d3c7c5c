#include "hypuni/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace hypuni {

namespace {

// 15-point Kronrod abscissae/weights on [-1,1] (positive half) and the
// embedded 7-point Gauss weights. Values from QUADPACK dqk15.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
    double kronrod;
    double err;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    const double fc = f(c);
    resk += kWgk[7] * fc;
    resg += kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double x = h * kXgk[i];
        const double fsum = f(c - x) + f(c + x);
        resk += kWgk[i] * fsum;
        if (i % 2 == 1) resg += kWg[i / 2] * fsum;
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    if (!(abs_tol > 0)) throw QuadratureError("nonpositive quadrature tolerance");
    if (a == b) return 0.0;

    struct Panel {
        double a, b;
        PanelResult r;
    };
    std::vector<Panel> panels{{a, b, gk15(f, a, b)}};
    constexpr int kMaxPanels = 20000;
    while (true) {
        double total_err = 0.0;
        int worst = -1;
        double worst_err = 0.0;
        for (int i = 0; i < static_cast<int>(panels.size()); ++i) {
            total_err += panels[i].r.err;
            if (panels[i].r.err > worst_err) {
                worst_err = panels[i].r.err;
                worst = i;
            }
        }
        if (total_err <= abs_tol || worst < 0) break;
        if (static_cast<int>(panels.size()) >= kMaxPanels)
            throw QuadratureError("quadrature did not converge to tolerance " +
                                  std::to_string(abs_tol));
        const Panel p = panels[worst];
        const double m = 0.5 * (p.a + p.b);
        if (m == p.a || m == p.b)
            throw QuadratureError("quadrature interval collapsed before converging");
        panels[worst] = {p.a, m, gk15(f, p.a, m)};
        panels.push_back({m, p.b, gk15(f, m, p.b)});
    }
    // compensated total
    double sum = 0.0, comp = 0.0;
    for (const auto& p : panels) {
        const double y = p.r.kronrod - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double integrate_periodic(const std::function<double(double)>& f, int n) {
    if (n < 2) throw QuadratureError("periodic quadrature needs at least 2 nodes");
    const double h = 2.0 * std::numbers::pi / n;
    double sum = 0.0, comp = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = f(i * h) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum * h;
}

}  // namespace hypuni
