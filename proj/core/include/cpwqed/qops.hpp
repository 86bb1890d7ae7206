#pragma once

// Operator algebra on the two-atom-plus-cavity Hilbert space
//     H = H_atom(i) ⊗ H_atom(j) ⊗ H_cavity(n_max)
// with dense complex matrices. Basis index ordering is row-major in
// (level_i, level_j, photons), photons varying fastest.

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cpwqed {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Indices of the default atomic ladder [sink, b, r, a].
namespace level {
inline constexpr int sink = 0;
inline constexpr int b = 1;
inline constexpr int r = 2;
inline constexpr int a = 3;
}  // namespace level

class BasisSpec {
public:
    struct State {
        int level_i;
        int level_j;
        int photons;
    };

    /// Default ladder {sink, b, r, a} with up to two cavity photons (dim 48).
    BasisSpec();
    BasisSpec(std::vector<std::string> atom_levels, int n_max);

    int levels_per_atom() const { return static_cast<int>(levels_.size()); }
    int n_max() const { return n_max_; }
    int cavity_dim() const { return n_max_ + 1; }
    int dim() const { return levels_per_atom() * levels_per_atom() * cavity_dim(); }
    const std::vector<std::string>& atom_levels() const { return levels_; }

    int level_index(std::string_view label) const;
    int index(int level_i, int level_j, int photons) const;
    int index(std::string_view level_i, std::string_view level_j, int photons) const;
    State decompose(int idx) const;
    /// "r,r,0"-style label of a basis vector.
    std::string label(int idx) const;

    friend bool operator==(const BasisSpec&, const BasisSpec&) = default;

private:
    std::vector<std::string> levels_;
    int n_max_;
};

class Operator {
public:
    Operator(BasisSpec basis, Matrix entries);

    static Operator zero(const BasisSpec& basis);
    static Operator identity(const BasisSpec& basis);

    const BasisSpec& basis() const { return basis_; }
    const Matrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

    Operator adjoint() const;
    /// max_ij |A - A†|_ij
    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }

    Operator& operator+=(const Operator& rhs);
    Operator& operator-=(const Operator& rhs);
    Operator& operator*=(Complex s);

    friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
    friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
    friend Operator operator*(Operator lhs, Complex s) { return lhs *= s; }
    friend Operator operator*(Complex s, Operator rhs) { return rhs *= s; }
    friend Operator operator*(const Operator& lhs, const Operator& rhs);

private:
    BasisSpec basis_;
    Matrix m_;
};

// Single-subsystem factors.
Matrix atom_identity(const BasisSpec& basis);
/// |mu><nu| on one atom.
Matrix atom_transition(const BasisSpec& basis, int mu, int nu);
Matrix cavity_identity(int n_max);
/// Truncated annihilation operator c on Fock states 0..n_max.
Matrix cavity_annihilation(int n_max);

/// a_i ⊗ a_j ⊗ a_c in the fixed (atom i, atom j, cavity) order.
Operator kron3(const BasisSpec& basis, const Matrix& a_i, const Matrix& a_j, const Matrix& a_c);

/// Single-atom operator acting on atom 0 (i) or 1 (j), identity elsewhere.
Operator on_atom(const BasisSpec& basis, int atom, const Matrix& single);
/// |mu_i nu_j><mu_i nu_j| ⊗ I_cavity.
Operator pair_projector(const BasisSpec& basis, int mu, int nu);
/// Projector onto every basis state in which at least one atom sits in `lvl`.
Operator any_atom_projector(const BasisSpec& basis, int lvl);

class DensityMatrix {
public:
    DensityMatrix(BasisSpec basis, Matrix entries);

    /// |psi><psi| with psi normalised.
    static DensityMatrix pure(const BasisSpec& basis, const Vector& ket);
    static DensityMatrix basis_state(const BasisSpec& basis, int idx);

    const BasisSpec& basis() const { return basis_; }
    const Matrix& matrix() const { return m_; }

    Complex trace() const { return m_.trace(); }
    double purity() const;
    double hermiticity_defect() const;
    double min_eigenvalue() const;
    Complex expectation(const Operator& op) const;
    Complex element(int row, int col) const { return m_(row, col); }

    /// Throws InvalidArgument if not Hermitian / unit trace / PSD within the tolerances.
    void validate(double herm_tol = 1e-10, double trace_tol = 1e-8, double eig_tol = 1e-8) const;

private:
    BasisSpec basis_;
    Matrix m_;
};

struct EigenSystem {
    Eigen::VectorXd values;  // ascending
    Matrix vectors;          // columns
};

/// Hermitian eigendecomposition; rejects inputs with max|A - A†| > tol.
EigenSystem eig_hermitian(const Matrix& m, double tol = 1e-12);
EigenSystem eig_hermitian(const Operator& op, double tol = 1e-12);

}  // namespace cpwqed
