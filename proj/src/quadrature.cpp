#include "jmes/quadrature.hpp"

#include <cmath>

namespace jmes::quad {

namespace {

// 15-point Kronrod extension of 7-point Gauss, abscissae in [0,1] half-range.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.10479001032225018,
    0.14065325971552592, 0.16900472663926790, 0.19035057806478540,
    0.20443294007529889, 0.20948214108472782};
constexpr double kWg[4] = {0.12948496616886969, 0.27970539148927664,
                           0.38183005050511894, 0.41795918367346939};

struct PanelState {
    const Fn* f;
    double abs_tol;
    double rel_tol;
    int max_depth;
    Result out;
};

void refine(PanelState& st, double a, double b, double kron, double gauss, double tol,
            int depth) {
    const double err = std::fabs(kron - gauss);
    if (err <= tol || depth >= st.max_depth) {
        st.out.value += kron;
        st.out.error += err;
        if (depth >= st.max_depth && err > tol) st.out.converged = false;
        return;
    }
    const double m = 0.5 * (a + b);
    double kl, gl, kr, gr;
    gk15_panel(*st.f, a, m, &kl, &gl);
    gk15_panel(*st.f, m, b, &kr, &gr);
    st.out.evaluations += 30;
    refine(st, a, m, kl, gl, 0.5 * tol, depth + 1);
    refine(st, m, b, kr, gr, 0.5 * tol, depth + 1);
}

void simpson_refine(PanelState& st, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = (*st.f)(lm);
    const double frm = (*st.f)(rm);
    st.out.evaluations += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol || depth >= st.max_depth) {
        st.out.value += left + right + delta / 15.0;
        st.out.error += std::fabs(delta) / 15.0;
        if (depth >= st.max_depth && std::fabs(delta) > 15.0 * tol) st.out.converged = false;
        return;
    }
    simpson_refine(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1);
    simpson_refine(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

void gk15_panel(const Fn& f, double a, double b, double* kronrod, double* gauss) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double f1 = f(c - x);
        const double f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    *kronrod = resk * h;
    *gauss = resg * h;
}

Result adaptive_gk(const Fn& f, double a, double b, double abs_tol, double rel_tol,
                   int max_depth) {
    PanelState st{&f, abs_tol, rel_tol, max_depth, {}};
    if (a == b) return st.out;
    double kron, gauss;
    gk15_panel(f, a, b, &kron, &gauss);
    st.out.evaluations = 15;
    const double tol = std::max(abs_tol, rel_tol * std::fabs(kron));
    refine(st, a, b, kron, gauss, tol, 0);
    return st.out;
}

Result adaptive_simpson(const Fn& f, double a, double b, double abs_tol, int max_depth) {
    PanelState st{&f, abs_tol, 0.0, max_depth, {}};
    if (a == b) return st.out;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    st.out.evaluations = 3;
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_refine(st, a, b, fa, fm, fb, whole, abs_tol, 0);
    return st.out;
}

}  // namespace jmes::quad
