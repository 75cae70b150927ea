#include "r2d/rational.hpp"

#include "r2d/common.hpp"

namespace r2d {

Rational parse_rational(const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0)
        throw Error("parse-error", "malformed rational '" + text + "'");
    if (q.get_den() == 0) throw Error("parse-error", "zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const CRat& a) {
    if (sgn(a.im) == 0) return rational_to_string(a.re);
    std::string s = rational_to_string(a.re);
    if (sgn(a.im) > 0) s += "+";
    return s + rational_to_string(a.im) + "i";
}

bool exactly_equal(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

bool exactly_equal(const IntMat& a, const IntMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

} // namespace r2d
