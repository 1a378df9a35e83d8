#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "json.hpp"

#include "pingpong_lab/error.hpp"

namespace pplab {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

enum class Field { Real, Complex };

constexpr double kDefaultTol = 1e-9;

// Hermitian inner product, conjugate-linear in the second slot.
inline cplx inner(const CVec& u, const CVec& v) { return v.dot(u); }

class SquareMatrix {
public:
    SquareMatrix() = default;
    SquareMatrix(CMat entries, Field field);

    static SquareMatrix real(const RMat& m);
    static SquareMatrix complex(const CMat& m) { return SquareMatrix(m, Field::Complex); }
    static SquareMatrix identity(int d, Field field = Field::Real);

    int dim() const { return static_cast<int>(m_.rows()); }
    Field field() const { return field_; }
    bool is_real() const { return field_ == Field::Real; }
    const CMat& entries() const { return m_; }
    RMat real_entries() const;

    SquareMatrix operator*(const SquareMatrix& o) const;
    SquareMatrix inverse() const;
    SquareMatrix adjoint() const;
    SquareMatrix pow(int n) const;  // n may be negative
    cplx det() const;
    double op_norm() const;

    // Throws Singular when the matrix is not finite or has an exact zero pivot.
    void require_invertible(const char* what = "matrix") const;

private:
    CMat m_;
    Field field_ = Field::Real;
};

double op_norm(const CMat& m);

struct CartanData {
    SquareMatrix k;
    RVec mu;  // log singular values, non-increasing
    SquareMatrix k_prime;
    RVec sigma() const { return mu.array().exp().matrix(); }
};

struct GapFrame {
    int index = 0;
    CMat frame;  // d x index, orthonormal columns
    double gap_ratio = 1.0;
};

CartanData cartan_decompose(const SquareMatrix& g);
RVec singular_values(const SquareMatrix& g);
RVec singular_values(const CMat& g);
double sigma_ratio(const SquareMatrix& g, int i, int j);  // 1-based
RVec eigenvalue_moduli(const SquareMatrix& g);
RVec eigenvalue_moduli(const CMat& g);

// sigma_1(g^m)^{1/m} by repeated squaring with renormalization; m = 2^squarings.
double spectral_radius_power_oracle(const SquareMatrix& g, int squarings = 6);

GapFrame gap_frame(const SquareMatrix& g, int k, double tol = kDefaultTol);

// Top left / right singular vectors.
CVec top_left_singular(const CMat& g);
CVec top_right_singular(const CMat& g);

// Basis e_i ^ e_j, i < j, in lexicographic order.
SquareMatrix wedge_square(const SquareMatrix& g);
CMat wedge_square(const CMat& g);
// Plucker coordinates of u ^ v in the same basis.
CVec wedge_vectors(const CVec& u, const CVec& v);

// Orthonormal basis of Sym_d(R): for (i <= j) lexicographic, E_ii when i == j,
// (E_ij + E_ji)/sqrt(2) otherwise. sym_square_rep is X -> g^t X g.
SquareMatrix sym_square_rep(const SquareMatrix& g);
RVec sym_coords(const RMat& x);
RMat sym_from_coords(const RVec& c, int d);

// phi(g) = Sym(g)^T (x) Sym(g)^{-1}: X (x) Y -> g X g^t (x) g^{-t} Y g^{-1}.
// Kronecker index a*n + b with a the first factor.
SquareMatrix phi_rep(const SquareMatrix& g);

// Householder reflection H (Hermitian, unitary) with H n = alpha e_1, where
// alpha is the phase of n(0) (1 when n(0) = 0).
CMat householder_to_e1(const CVec& n);

nlohmann::json matrix_to_json(const SquareMatrix& g);
SquareMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const CVec& v, Field field);
CVec vector_from_json(const nlohmann::json& j, Field* field = nullptr);

}  // namespace pplab
