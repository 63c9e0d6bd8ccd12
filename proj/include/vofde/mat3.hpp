#pragma once

#include <array>
#include <cstddef>

namespace vofde {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

Vec3 multiply(const Mat3& m, const Vec3& v);
Mat3 multiply(const Mat3& a, const Mat3& b);
Mat3 scale(const Mat3& m, double s);

/// Maximum absolute row sum.
double norm_inf(const Mat3& m);
double norm_inf(const Vec3& v);

/// LU factorization with partial pivoting. singular() is set when a pivot is
/// exactly zero; solve() must not be called then.
class Lu3 {
public:
    explicit Lu3(const Mat3& m);

    bool singular() const noexcept { return singular_; }
    Vec3 solve(const Vec3& b) const;
    Mat3 solve(const Mat3& b) const;
    Mat3 inverse() const;

    /// ‖M‖∞ ‖M⁻¹‖∞; infinity when singular.
    double condition_inf() const;

private:
    Mat3 lu_{};
    std::array<std::size_t, 3> perm_{0, 1, 2};
    double norm_ = 0.0;
    bool singular_ = false;
};

}  // namespace vofde
