#include "pingpong_lab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace pplab {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::Input: return "E_INPUT";
        case ErrorCode::Dimension: return "E_DIM";
        case ErrorCode::Singular: return "E_SINGULAR";
        case ErrorCode::NoGap: return "E_NO_GAP";
        case ErrorCode::Degenerate: return "E_DEGENERATE";
        case ErrorCode::Precondition: return "E_PRECONDITION";
        case ErrorCode::Certification: return "E_CERTIFY";
        case ErrorCode::InsufficientData: return "E_INSUFFICIENT_DATA";
        case ErrorCode::Torsion: return "E_TORSION";
        case ErrorCode::Overflow: return "E_OVERFLOW";
        case ErrorCode::Budget: return "E_BUDGET";
        case ErrorCode::Numerical: return "E_NUMERICAL";
    }
    return "E_UNKNOWN";
}

SquareMatrix::SquareMatrix(CMat entries, Field field) : m_(std::move(entries)), field_(field) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
        throw Error(ErrorCode::Dimension, "matrix must be square and nonempty");
    if (!m_.allFinite()) throw Error(ErrorCode::Singular, "matrix has non-finite entries");
    if (field_ == Field::Real) {
        if (m_.imag().cwiseAbs().maxCoeff() != 0.0)
            throw Error(ErrorCode::Input, "real matrix has imaginary entries");
    }
}

SquareMatrix SquareMatrix::real(const RMat& m) { return SquareMatrix(m.cast<cplx>(), Field::Real); }

SquareMatrix SquareMatrix::identity(int d, Field field) {
    return SquareMatrix(CMat::Identity(d, d), field);
}

RMat SquareMatrix::real_entries() const {
    if (field_ != Field::Real) throw Error(ErrorCode::Input, "expected a real matrix");
    return m_.real();
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& o) const {
    if (dim() != o.dim()) throw Error(ErrorCode::Dimension, "product of matrices of different size");
    Field f = (field_ == Field::Real && o.field_ == Field::Real) ? Field::Real : Field::Complex;
    CMat p = m_ * o.m_;
    if (f == Field::Real) p = p.real().cast<cplx>();
    return SquareMatrix(std::move(p), f);
}

SquareMatrix SquareMatrix::inverse() const {
    require_invertible();
    if (is_real()) return SquareMatrix::real(real_entries().fullPivLu().inverse());
    return SquareMatrix(m_.fullPivLu().inverse(), field_);
}

SquareMatrix SquareMatrix::adjoint() const { return SquareMatrix(m_.adjoint(), field_); }

SquareMatrix SquareMatrix::pow(int n) const {
    SquareMatrix base = n < 0 ? inverse() : *this;
    SquareMatrix acc = identity(dim(), field_);
    unsigned e = static_cast<unsigned>(n < 0 ? -n : n);
    while (e) {
        if (e & 1u) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

cplx SquareMatrix::det() const { return m_.fullPivLu().determinant(); }

double SquareMatrix::op_norm() const { return pplab::op_norm(m_); }

void SquareMatrix::require_invertible(const char* what) const {
    Eigen::FullPivLU<CMat> lu(m_);
    lu.setThreshold(0.0);
    if (lu.rank() < dim()) throw Error(ErrorCode::Singular, std::string(what) + " is not invertible");
}

double op_norm(const CMat& m) {
    if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
    // BDCSVD switches to Jacobi below 16 columns; real inputs skip complex arithmetic.
    if (m.imag().isZero(0.0)) {
        Eigen::BDCSVD<RMat> svd(m.real());
        return svd.singularValues()(0);
    }
    Eigen::BDCSVD<CMat> svd(m);
    return svd.singularValues()(0);
}

CartanData cartan_decompose(const SquareMatrix& g) {
    g.require_invertible("cartan_decompose input");
    const int d = g.dim();
    CartanData out;
    RVec s;
    if (g.is_real()) {
        Eigen::JacobiSVD<RMat> svd(g.real_entries(), Eigen::ComputeFullU | Eigen::ComputeFullV);
        s = svd.singularValues();
        out.k = SquareMatrix::real(svd.matrixU());
        out.k_prime = SquareMatrix::real(svd.matrixV().transpose());
    } else {
        Eigen::JacobiSVD<CMat> svd(g.entries(), Eigen::ComputeFullU | Eigen::ComputeFullV);
        s = svd.singularValues();
        out.k = SquareMatrix(svd.matrixU(), Field::Complex);
        out.k_prime = SquareMatrix(svd.matrixV().adjoint(), Field::Complex);
    }
    if (s(d - 1) <= 0.0) throw Error(ErrorCode::Singular, "smallest singular value vanished");
    out.mu = s.array().log().matrix();
    return out;
}

RVec singular_values(const CMat& g) {
    Eigen::JacobiSVD<CMat> svd(g);
    return svd.singularValues();
}

RVec singular_values(const SquareMatrix& g) {
    if (g.is_real()) {
        Eigen::JacobiSVD<RMat> svd(g.real_entries());
        return svd.singularValues();
    }
    return singular_values(g.entries());
}

double sigma_ratio(const SquareMatrix& g, int i, int j) {
    const int d = g.dim();
    if (i < 1 || j < 1 || i > d || j > d) throw Error(ErrorCode::Input, "singular value index out of range");
    if (i == j) return 1.0;
    RVec s = singular_values(g);
    return s(i - 1) / s(j - 1);
}

static RVec sorted_desc(RVec v) {
    std::sort(v.data(), v.data() + v.size(), [](double a, double b) { return a > b; });
    return v;
}

RVec eigenvalue_moduli(const CMat& g) {
    Eigen::ComplexEigenSolver<CMat> es(g, false);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::Numerical, "eigen-solver did not converge");
    return sorted_desc(es.eigenvalues().cwiseAbs());
}

RVec eigenvalue_moduli(const SquareMatrix& g) {
    if (g.is_real()) {
        Eigen::EigenSolver<RMat> es(g.real_entries(), false);
        if (es.info() != Eigen::Success) throw Error(ErrorCode::Numerical, "eigen-solver did not converge");
        return sorted_desc(es.eigenvalues().cwiseAbs());
    }
    return eigenvalue_moduli(g.entries());
}

double spectral_radius_power_oracle(const SquareMatrix& g, int squarings) {
    CMat h = g.entries();
    double n = op_norm(h);
    h /= n;
    double logs = std::log(n);
    for (int s = 0; s < squarings; ++s) {
        h = h * h;
        n = op_norm(h);
        if (n == 0.0) return 0.0;
        h /= n;
        logs = 2.0 * logs + std::log(n);
    }
    return std::exp(logs / std::ldexp(1.0, squarings));
}

GapFrame gap_frame(const SquareMatrix& g, int k, double tol) {
    const int d = g.dim();
    if (k < 1 || k >= d) throw Error(ErrorCode::Input, "gap index out of range");
    CartanData c = cartan_decompose(g);
    double ratio = std::exp(c.mu(k - 1) - c.mu(k));
    if (!(ratio > 1.0 + tol)) throw Error(ErrorCode::NoGap, "no gap of index " + std::to_string(k));
    GapFrame f;
    f.index = k;
    f.frame = c.k.entries().leftCols(k);
    f.gap_ratio = ratio;
    return f;
}

CVec top_left_singular(const CMat& g) {
    Eigen::JacobiSVD<CMat> svd(g, Eigen::ComputeFullU);
    return svd.matrixU().col(0);
}

CVec top_right_singular(const CMat& g) {
    Eigen::JacobiSVD<CMat> svd(g, Eigen::ComputeFullV);
    return svd.matrixV().col(0);
}

CMat wedge_square(const CMat& g) {
    const int d = static_cast<int>(g.rows());
    if (d < 2) throw Error(ErrorCode::Dimension, "wedge square needs d >= 2");
    std::vector<std::pair<int, int>> idx;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) idx.emplace_back(i, j);
    const int n = static_cast<int>(idx.size());
    CMat w(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            auto [i, j] = idx[a];
            auto [k, l] = idx[b];
            w(a, b) = g(i, k) * g(j, l) - g(i, l) * g(j, k);
        }
    return w;
}

SquareMatrix wedge_square(const SquareMatrix& g) {
    CMat w = wedge_square(g.entries());
    if (g.is_real()) w = w.real().cast<cplx>();
    return SquareMatrix(std::move(w), g.field());
}

CVec wedge_vectors(const CVec& u, const CVec& v) {
    const int d = static_cast<int>(u.size());
    CVec out(d * (d - 1) / 2);
    int a = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) out(a++) = u(i) * v(j) - u(j) * v(i);
    return out;
}

RVec sym_coords(const RMat& x) {
    const int d = static_cast<int>(x.rows());
    RVec c(d * (d + 1) / 2);
    int a = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) c(a++) = (i == j) ? x(i, i) : std::sqrt(2.0) * 0.5 * (x(i, j) + x(j, i));
    return c;
}

RMat sym_from_coords(const RVec& c, int d) {
    RMat x = RMat::Zero(d, d);
    int a = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            if (i == j) {
                x(i, i) = c(a++);
            } else {
                x(i, j) = x(j, i) = c(a++) / std::sqrt(2.0);
            }
        }
    return x;
}

SquareMatrix sym_square_rep(const SquareMatrix& g) {
    const RMat m = g.real_entries();
    const int d = g.dim();
    const int n = d * (d + 1) / 2;
    RMat s(n, n);
    for (int b = 0; b < n; ++b) {
        RMat basis = sym_from_coords(RVec::Unit(n, b), d);
        s.col(b) = sym_coords(m.transpose() * basis * m);
    }
    return SquareMatrix::real(s);
}

SquareMatrix phi_rep(const SquareMatrix& g) {
    const RMat s = sym_square_rep(g).real_entries();
    const RMat a = s.transpose();
    const RMat b = s.inverse();
    const int n = static_cast<int>(s.rows());
    RMat k(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) k.block(i * n, j * n, n, n) = a(i, j) * b;
    return SquareMatrix::real(k);
}

CMat householder_to_e1(const CVec& n) {
    const int d = static_cast<int>(n.size());
    CVec m = n / n.norm();
    cplx ph = std::abs(m(0)) > 0.0 ? m(0) / std::abs(m(0)) : cplx(1.0, 0.0);
    m *= std::conj(ph);  // m(0) real, non-negative
    // v = m - e1, with the first entry formed without cancellation
    CVec v = m;
    double tail = m.tail(d - 1).squaredNorm();
    v(0) = -tail / (1.0 + m(0).real());
    CMat h = CMat::Identity(d, d);
    double vv = v.squaredNorm();
    if (vv > 0.0) h -= (2.0 / vv) * v * v.adjoint();
    return h;
}

nlohmann::json vector_to_json(const CVec& v, Field field) {
    nlohmann::json arr = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) {
        if (field == Field::Real)
            arr.push_back(v(i).real());
        else
            arr.push_back({v(i).real(), v(i).imag()});
    }
    return arr;
}

static cplx scalar_from_json(const nlohmann::json& e, bool* is_complex) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        *is_complex = true;
        return {e[0].get<double>(), e[1].get<double>()};
    }
    throw Error(ErrorCode::Input, "expected a number or [re, im] pair");
}

CVec vector_from_json(const nlohmann::json& j, Field* field) {
    if (!j.is_array() || j.empty()) throw Error(ErrorCode::Input, "expected a nonempty vector");
    CVec v(static_cast<int>(j.size()));
    bool cx = false;
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = scalar_from_json(j[i], &cx);
    if (field) *field = cx ? Field::Complex : Field::Real;
    return v;
}

nlohmann::json matrix_to_json(const SquareMatrix& g) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < g.dim(); ++i) rows.push_back(vector_to_json(g.entries().row(i).transpose(), g.field()));
    return rows;
}

SquareMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw Error(ErrorCode::Input, "matrix must be a nonempty array of rows");
    const int d = static_cast<int>(j.size());
    CMat m(d, d);
    bool cx = false;
    for (int i = 0; i < d; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != d)
            throw Error(ErrorCode::Dimension, "matrix rows must have length " + std::to_string(d));
        for (int k = 0; k < d; ++k) m(i, k) = scalar_from_json(j[i][k], &cx);
    }
    return SquareMatrix(m, cx ? Field::Complex : Field::Real);
}

}  // namespace pplab
