#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace lgtrap {

// Dense complex matrix together with the tag of the basis it acts on.
// Every algebraic operation checks that the operand tags agree; mixing
// operators from different bases is a logic error, not a numerical one.
struct OperatorMatrix {
    std::string basis_tag;
    Eigen::MatrixXcd mat;

    OperatorMatrix() = default;
    OperatorMatrix(std::string tag, Eigen::MatrixXcd m);

    Eigen::Index dim() const { return mat.rows(); }

    OperatorMatrix dagger() const { return {basis_tag, mat.adjoint()}; }
    bool is_hermitian(double tol = 1e-12) const;

    static OperatorMatrix zero(const std::string& tag, Eigen::Index dim);
    static OperatorMatrix identity(const std::string& tag, Eigen::Index dim);
};

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(std::complex<double> c, const OperatorMatrix& a);

// [a, b] = ab - ba
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

// a^n by repeated multiplication (n >= 0)
OperatorMatrix matrix_power(const OperatorMatrix& a, int n);

// Largest entry magnitude; handy for "entry-exact zero" assertions.
double max_abs(const OperatorMatrix& a);

// Debug dump as a JSON array of [row, col, re, im] for the nonzero entries.
std::string dump_operator_json(const OperatorMatrix& a, double threshold = 0.0);

void require_same_basis(const OperatorMatrix& a, const OperatorMatrix& b, const char* what);

}  // namespace lgtrap
