#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace oracle {

using cpwqed::Complex;
using cpwqed::Matrix;

Matrix expm_taylor(const Matrix& a) {
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Matrix b = a / std::ldexp(1.0, squarings);

    Matrix result = Matrix::Identity(a.rows(), a.cols());
    Matrix term = result;
    for (int k = 1; k < 60; ++k) {
        term = term * b / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-20) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

Matrix unitary_propagate(const Matrix& h, const Matrix& rho0, double t) {
    const Matrix u = expm_taylor(Complex(0.0, -t) * h);
    return u * rho0 * u.adjoint();
}

namespace {

// coefficients c[0..n] of det(x I - H) = sum c[k] x^k, c[n] = 1
std::vector<double> faddeev_leverrier(const Matrix& h) {
    const int n = static_cast<int>(h.rows());
    std::vector<Complex> c(n + 1);
    c[n] = 1.0;
    Matrix m = Matrix::Zero(n, n);
    const Matrix id = Matrix::Identity(n, n);
    for (int k = 1; k <= n; ++k) {
        m = h * m + c[n - k + 1] * id;
        c[n - k] = -(h * m).trace() / static_cast<double>(k);
    }
    std::vector<double> out(n + 1);
    for (int k = 0; k <= n; ++k) out[k] = c[k].real();
    return out;
}

double horner(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

double horner_derivative(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t k = c.size() - 1; k >= 1; --k) v = v * x + static_cast<double>(k) * c[k];
    return v;
}

}  // namespace

std::vector<double> charpoly_eigenvalues(const Matrix& h) {
    const int n = static_cast<int>(h.rows());
    const std::vector<double> c = faddeev_leverrier(h);
    // Gershgorin bound on the spectrum
    double radius = 0.0;
    for (int i = 0; i < n; ++i) radius = std::max(radius, h.row(i).cwiseAbs().sum());
    radius *= 1.01;

    std::vector<double> roots;
    const int grid = 200000;
    double x0 = -radius;
    double f0 = horner(c, x0);
    for (int k = 1; k <= grid; ++k) {
        const double x1 = -radius + 2.0 * radius * k / grid;
        const double f1 = horner(c, x1);
        if (f0 == 0.0) {
            roots.push_back(x0);
        } else if (f0 * f1 < 0.0) {
            double lo = x0, hi = x1, flo = f0;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = horner(c, mid);
                if (flo * fm <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            double x = 0.5 * (lo + hi);
            for (int it = 0; it < 3; ++it) {
                const double d = horner_derivative(c, x);
                if (d == 0.0) break;
                const double next = x - horner(c, x) / d;
                if (next < lo || next > hi) break;
                x = next;
            }
            roots.push_back(x);
        }
        x0 = x1;
        f0 = f1;
    }
    if (static_cast<int>(roots.size()) != n) throw std::runtime_error("charpoly oracle: root count mismatch");
    std::sort(roots.begin(), roots.end());
    return roots;
}

Matrix random_hermitian(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist;
    Matrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = Complex(dist(gen), dist(gen));
    return 0.5 * (m + m.adjoint());
}

Matrix random_density(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist;
    Matrix a(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) a(i, j) = Complex(dist(gen), dist(gen));
    Matrix rho = a * a.adjoint();
    rho /= rho.trace();
    return rho;
}

Matrix naive_lindblad(const Matrix& h, const std::vector<Matrix>& ls, const Matrix& rho) {
    const Complex i(0.0, 1.0);
    Matrix out = -i * (h * rho - rho * h);
    for (const auto& l : ls) {
        const Matrix ld = l.adjoint();
        out += l * rho * ld - 0.5 * (ld * l * rho + rho * ld * l);
    }
    return out;
}

}  // namespace oracle
