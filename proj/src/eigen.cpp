#include "urwbpc/eigen.hpp"

#include <cmath>

namespace urwbpc {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) s += a(i, j) * a(i, j);
        }
    }
    return std::sqrt(s);
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return std::sqrt(s);
}

}  // namespace

std::vector<double> jacobi_eigenvalues(const Matrix& input, double rel_tol, int max_sweeps) {
    if (!input.square()) throw std::invalid_argument("jacobi_eigenvalues: matrix is not square");
    const std::size_t n = input.rows();
    Matrix a = input;
    const double threshold = rel_tol * frobenius_norm(a);

    for (int sweep = 0; sweep <= max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= threshold) {
            std::vector<double> out(n);
            for (std::size_t i = 0; i < n; ++i) out[i] = a(i, i);
            return out;
        }
        if (sweep == max_sweeps) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                auto row_p = a.row(p);
                auto row_q = a.row(q);
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double g = row_p[r];
                    const double h = row_q[r];
                    row_p[r] = g - s * (h + tau * g);
                    row_q[r] = h + s * (g - tau * h);
                }
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    a(r, p) = row_p[r];
                    a(r, q) = row_q[r];
                }
            }
        }
    }
    throw EigenError("jacobi_eigenvalues: no convergence within the sweep cap");
}

std::vector<double> tridiagonal_ql_eigenvalues(const Matrix& input) {
    if (!input.square()) throw std::invalid_argument("tridiagonal_ql_eigenvalues: matrix is not square");
    const std::size_t n = input.rows();
    if (n == 0) return {};
    Matrix a = input;  // only the lower triangle is used from here on
    std::vector<double> d(n, 0.0);
    std::vector<double> e(n, 0.0);  // e[i] couples rows i-1 and i
    std::vector<double> u(n), p(n), q(n);

    for (std::size_t i = n - 1; i >= 1; --i) {
        d[i] = a(i, i);
        const std::size_t l = i - 1;
        double scale = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::fabs(a(i, k));
        if (i == 1 || scale == 0.0) {
            e[i] = a(i, l);
            continue;
        }
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) {
            u[k] = a(i, k) / scale;
            h += u[k] * u[k];
        }
        const double f = u[l];
        const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        u[l] = f - g;

        // p = B u / h over the leading i x i block, lower triangle only.
        std::fill(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(i), 0.0);
        for (std::size_t j = 0; j < i; ++j) {
            const auto row = a.row(j);
            double acc = 0.0;
            const double uj = u[j];
            for (std::size_t k = 0; k < j; ++k) {
                acc += row[k] * u[k];
                p[k] += row[k] * uj;
            }
            p[j] += acc + row[j] * uj;
        }
        double up = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            p[j] /= h;
            up += u[j] * p[j];
        }
        const double kk = up / (2.0 * h);
        for (std::size_t j = 0; j < i; ++j) q[j] = p[j] - kk * u[j];
        for (std::size_t j = 0; j < i; ++j) {
            auto row = a.row(j);
            const double uj = u[j];
            const double qj = q[j];
            for (std::size_t k = 0; k <= j; ++k) row[k] -= uj * q[k] + qj * u[k];
        }
    }
    d[0] = a(0, 0);

    // Implicit QL with Wilkinson-style shifts on (d, e).
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    if (n > 0) e[n - 1] = 0.0;
    constexpr double eps = 2.220446049250313e-16;
    constexpr int max_iter = 60;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m = l;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == max_iter) throw EigenError("tridiagonal_ql_eigenvalues: too many QL iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double shift = 0.0;
                bool underflow = false;
                for (std::size_t ii = m; ii-- > l;) {
                    const double f = s * e[ii];
                    const double b = c * e[ii];
                    r = std::hypot(f, g);
                    e[ii + 1] = r;
                    if (r == 0.0) {
                        d[ii + 1] -= shift;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[ii + 1] - shift;
                    r = (d[ii] - g) * s + 2.0 * c * b;
                    shift = s * r;
                    d[ii + 1] = g + shift;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= shift;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    return d;
}

std::vector<double> symmetric_eigenvalues(const Matrix& a, EigenMethod method) {
    if (!a.square()) throw std::invalid_argument("symmetric_eigenvalues: matrix is not square");
    if (a.rows() == 0) return {};
    switch (method) {
    case EigenMethod::Jacobi:
        return jacobi_eigenvalues(a);
    case EigenMethod::TridiagonalQl:
        return tridiagonal_ql_eigenvalues(a);
    case EigenMethod::Automatic:
        break;
    }
    return a.rows() <= kJacobiMaxSize ? jacobi_eigenvalues(a) : tridiagonal_ql_eigenvalues(a);
}

}  // namespace urwbpc
