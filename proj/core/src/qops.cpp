#include "cpwqed/qops.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "cpwqed/errors.hpp"

namespace cpwqed {

namespace {

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const Matrix& m, int dim, const char* what) {
    if (m.rows() != dim || m.cols() != dim) {
        std::ostringstream msg;
        msg << what << ": expected " << dim << "x" << dim << " matrix, got " << m.rows() << "x"
            << m.cols();
        throw DimensionError(msg.str());
    }
}

}  // namespace

// ---------------------------------------------------------------- BasisSpec

BasisSpec::BasisSpec() : BasisSpec({"sink", "b", "r", "a"}, 2) {}

BasisSpec::BasisSpec(std::vector<std::string> atom_levels, int n_max)
    : levels_(std::move(atom_levels)), n_max_(n_max) {
    if (levels_.empty()) throw InvalidArgument("BasisSpec: atom level list is empty");
    if (n_max_ < 0) throw InvalidArgument("BasisSpec: n_max must be >= 0");
    std::set<std::string> seen(levels_.begin(), levels_.end());
    if (seen.size() != levels_.size()) throw InvalidArgument("BasisSpec: duplicate atom level label");
}

int BasisSpec::level_index(std::string_view label) const {
    auto it = std::find(levels_.begin(), levels_.end(), label);
    if (it == levels_.end())
        throw InvalidArgument("BasisSpec: unknown atom level '" + std::string(label) + "'");
    return static_cast<int>(it - levels_.begin());
}

int BasisSpec::index(int level_i, int level_j, int photons) const {
    const int n = levels_per_atom();
    if (level_i < 0 || level_i >= n || level_j < 0 || level_j >= n || photons < 0 ||
        photons > n_max_)
        throw DimensionError("BasisSpec: basis state out of range");
    return (level_i * n + level_j) * cavity_dim() + photons;
}

int BasisSpec::index(std::string_view level_i, std::string_view level_j, int photons) const {
    return index(level_index(level_i), level_index(level_j), photons);
}

BasisSpec::State BasisSpec::decompose(int idx) const {
    if (idx < 0 || idx >= dim()) throw DimensionError("BasisSpec: index out of range");
    const int photons = idx % cavity_dim();
    const int pair = idx / cavity_dim();
    return {pair / levels_per_atom(), pair % levels_per_atom(), photons};
}

std::string BasisSpec::label(int idx) const {
    const State s = decompose(idx);
    return levels_[s.level_i] + "," + levels_[s.level_j] + "," + std::to_string(s.photons);
}

// ----------------------------------------------------------------- Operator

Operator::Operator(BasisSpec basis, Matrix entries) : basis_(std::move(basis)), m_(std::move(entries)) {
    require_square(m_, basis_.dim(), "Operator");
}

Operator Operator::zero(const BasisSpec& basis) {
    return Operator(basis, Matrix::Zero(basis.dim(), basis.dim()));
}

Operator Operator::identity(const BasisSpec& basis) {
    return Operator(basis, Matrix::Identity(basis.dim(), basis.dim()));
}

Operator Operator::adjoint() const { return Operator(basis_, m_.adjoint()); }

double Operator::hermiticity_defect() const { return max_abs(m_ - m_.adjoint()); }

Operator& Operator::operator+=(const Operator& rhs) {
    if (!(basis_ == rhs.basis_)) throw DimensionError("Operator +: basis mismatch");
    m_ += rhs.m_;
    return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
    if (!(basis_ == rhs.basis_)) throw DimensionError("Operator -: basis mismatch");
    m_ -= rhs.m_;
    return *this;
}

Operator& Operator::operator*=(Complex s) {
    m_ *= s;
    return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
    if (!(lhs.basis_ == rhs.basis_)) throw DimensionError("Operator *: basis mismatch");
    return Operator(lhs.basis_, lhs.m_ * rhs.m_);
}

// ------------------------------------------------------------------ factors

Matrix atom_identity(const BasisSpec& basis) {
    return Matrix::Identity(basis.levels_per_atom(), basis.levels_per_atom());
}

Matrix atom_transition(const BasisSpec& basis, int mu, int nu) {
    const int n = basis.levels_per_atom();
    if (mu < 0 || mu >= n || nu < 0 || nu >= n)
        throw DimensionError("atom_transition: level out of range");
    Matrix m = Matrix::Zero(n, n);
    m(mu, nu) = 1.0;
    return m;
}

Matrix cavity_identity(int n_max) { return Matrix::Identity(n_max + 1, n_max + 1); }

Matrix cavity_annihilation(int n_max) {
    Matrix c = Matrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) c(n - 1, n) = std::sqrt(static_cast<double>(n));
    return c;
}

Operator kron3(const BasisSpec& basis, const Matrix& a_i, const Matrix& a_j, const Matrix& a_c) {
    const int na = basis.levels_per_atom();
    const int nc = basis.cavity_dim();
    require_square(a_i, na, "kron3 (atom i factor)");
    require_square(a_j, na, "kron3 (atom j factor)");
    require_square(a_c, nc, "kron3 (cavity factor)");

    Matrix out = Matrix::Zero(basis.dim(), basis.dim());
    const int block = na * nc;
    for (int ri = 0; ri < na; ++ri) {
        for (int ci = 0; ci < na; ++ci) {
            const Complex x = a_i(ri, ci);
            if (x == Complex{}) continue;
            for (int rj = 0; rj < na; ++rj) {
                for (int cj = 0; cj < na; ++cj) {
                    const Complex y = x * a_j(rj, cj);
                    if (y == Complex{}) continue;
                    out.block(ri * block + rj * nc, ci * block + cj * nc, nc, nc) = y * a_c;
                }
            }
        }
    }
    return Operator(basis, std::move(out));
}

Operator on_atom(const BasisSpec& basis, int atom, const Matrix& single) {
    const Matrix id = atom_identity(basis);
    const Matrix idc = cavity_identity(basis.n_max());
    if (atom == 0) return kron3(basis, single, id, idc);
    if (atom == 1) return kron3(basis, id, single, idc);
    throw InvalidArgument("on_atom: atom must be 0 (i) or 1 (j)");
}

Operator pair_projector(const BasisSpec& basis, int mu, int nu) {
    return kron3(basis, atom_transition(basis, mu, mu), atom_transition(basis, nu, nu),
                 cavity_identity(basis.n_max()));
}

Operator any_atom_projector(const BasisSpec& basis, int lvl) {
    Matrix m = Matrix::Zero(basis.dim(), basis.dim());
    for (int k = 0; k < basis.dim(); ++k) {
        const auto s = basis.decompose(k);
        if (s.level_i == lvl || s.level_j == lvl) m(k, k) = 1.0;
    }
    return Operator(basis, std::move(m));
}

// ------------------------------------------------------------ DensityMatrix

DensityMatrix::DensityMatrix(BasisSpec basis, Matrix entries)
    : basis_(std::move(basis)), m_(std::move(entries)) {
    require_square(m_, basis_.dim(), "DensityMatrix");
}

DensityMatrix DensityMatrix::pure(const BasisSpec& basis, const Vector& ket) {
    if (ket.size() != basis.dim()) throw DimensionError("DensityMatrix::pure: ket dimension mismatch");
    const double norm = ket.norm();
    if (norm == 0.0) throw InvalidArgument("DensityMatrix::pure: zero ket");
    const Vector psi = ket / norm;
    return DensityMatrix(basis, psi * psi.adjoint());
}

DensityMatrix DensityMatrix::basis_state(const BasisSpec& basis, int idx) {
    basis.decompose(idx);  // range check
    Vector ket = Vector::Zero(basis.dim());
    ket(idx) = 1.0;
    return pure(basis, ket);
}

double DensityMatrix::purity() const {
    // tr(rho rho) = sum_ij rho_ij rho_ji
    return m_.cwiseProduct(m_.transpose()).sum().real();
}

double DensityMatrix::hermiticity_defect() const { return max_abs(m_ - m_.adjoint()); }

double DensityMatrix::min_eigenvalue() const {
    const Matrix herm = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

Complex DensityMatrix::expectation(const Operator& op) const {
    if (!(op.basis() == basis_)) throw DimensionError("expectation: basis mismatch");
    // tr(rho O) = sum_ij rho_ij O_ji
    return (m_.transpose().cwiseProduct(op.matrix())).sum();
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_tol) const {
    const double herm = hermiticity_defect();
    if (herm > herm_tol) {
        std::ostringstream msg;
        msg << "DensityMatrix: not Hermitian (defect " << herm << ")";
        throw InvalidArgument(msg.str());
    }
    const Complex tr = trace();
    if (std::abs(tr - Complex{1.0, 0.0}) > trace_tol) {
        std::ostringstream msg;
        msg << "DensityMatrix: trace " << tr.real() << (tr.imag() < 0 ? "" : "+") << tr.imag()
            << "i is not 1";
        throw InvalidArgument(msg.str());
    }
    const double lmin = min_eigenvalue();
    if (lmin < -eig_tol) {
        std::ostringstream msg;
        msg << "DensityMatrix: negative eigenvalue " << lmin;
        throw InvalidArgument(msg.str());
    }
}

// --------------------------------------------------------------- eigensolve

EigenSystem eig_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) throw DimensionError("eig_hermitian: matrix is not square");
    const double scale = std::max(1.0, max_abs(m));
    const double defect = max_abs(m - m.adjoint());
    if (defect > tol * scale) {
        std::ostringstream msg;
        msg << "eig_hermitian: input is not Hermitian (defect " << defect << ")";
        throw InvalidArgument(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()));
    if (solver.info() != Eigen::Success) throw NumericError("eig_hermitian: solver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenSystem eig_hermitian(const Operator& op, double tol) { return eig_hermitian(op.matrix(), tol); }

}  // namespace cpwqed
