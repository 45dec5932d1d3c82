#include "lgtrap/operator_matrix.hpp"

#include <sstream>
#include <stdexcept>

#include "lgtrap/numeric.hpp"

namespace lgtrap {

OperatorMatrix::OperatorMatrix(std::string tag, Eigen::MatrixXcd m)
    : basis_tag(std::move(tag)), mat(std::move(m)) {
    if (mat.rows() != mat.cols())
        throw std::invalid_argument("OperatorMatrix: matrix must be square");
}

bool OperatorMatrix::is_hermitian(double tol) const {
    return (mat - mat.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

OperatorMatrix OperatorMatrix::zero(const std::string& tag, Eigen::Index dim) {
    return {tag, Eigen::MatrixXcd::Zero(dim, dim)};
}

OperatorMatrix OperatorMatrix::identity(const std::string& tag, Eigen::Index dim) {
    return {tag, Eigen::MatrixXcd::Identity(dim, dim)};
}

void require_same_basis(const OperatorMatrix& a, const OperatorMatrix& b, const char* what) {
    if (a.basis_tag != b.basis_tag)
        throw std::invalid_argument(std::string(what) + ": basis mismatch, '" + a.basis_tag +
                                    "' vs '" + b.basis_tag + "'");
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_basis(a, b, "operator+");
    return {a.basis_tag, a.mat + b.mat};
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_basis(a, b, "operator-");
    return {a.basis_tag, a.mat - b.mat};
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_basis(a, b, "operator*");
    return {a.basis_tag, a.mat * b.mat};
}

OperatorMatrix operator*(std::complex<double> c, const OperatorMatrix& a) {
    return {a.basis_tag, c * a.mat};
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_basis(a, b, "commutator");
    return {a.basis_tag, a.mat * b.mat - b.mat * a.mat};
}

OperatorMatrix matrix_power(const OperatorMatrix& a, int n) {
    if (n < 0) throw std::invalid_argument("matrix_power: negative exponent");
    OperatorMatrix out = OperatorMatrix::identity(a.basis_tag, a.dim());
    for (int i = 0; i < n; ++i) out.mat = out.mat * a.mat;
    return out;
}

double max_abs(const OperatorMatrix& a) {
    if (a.dim() == 0) return 0.0;
    return a.mat.cwiseAbs().maxCoeff();
}

std::string dump_operator_json(const OperatorMatrix& a, double threshold) {
    std::ostringstream os;
    os << '[';
    bool first = true;
    for (Eigen::Index r = 0; r < a.mat.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.mat.cols(); ++c) {
            const std::complex<double> v = a.mat(r, c);
            if (std::abs(v) <= threshold) continue;
            if (!first) os << ',';
            first = false;
            os << '[' << r << ',' << c << ',' << num::format_double(v.real()) << ','
               << num::format_double(v.imag()) << ']';
        }
    }
    os << ']';
    return os.str();
}

}  // namespace lgtrap
