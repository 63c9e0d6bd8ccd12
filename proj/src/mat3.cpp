#include "vofde/mat3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace vofde {

Vec3 multiply(const Mat3& m, const Vec3& v)
{
    Vec3 out{};
    for (std::size_t i = 0; i < 3; ++i)
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    return out;
}

Mat3 multiply(const Mat3& a, const Mat3& b)
{
    Mat3 out{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    return out;
}

Mat3 scale(const Mat3& m, double s)
{
    Mat3 out = m;
    for (auto& row : out)
        for (auto& x : row)
            x *= s;
    return out;
}

double norm_inf(const Mat3& m)
{
    double best = 0.0;
    for (const auto& row : m)
        best = std::max(best, std::abs(row[0]) + std::abs(row[1]) + std::abs(row[2]));
    return best;
}

double norm_inf(const Vec3& v)
{
    return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

Lu3::Lu3(const Mat3& m) : lu_(m), norm_(norm_inf(m))
{
    for (std::size_t k = 0; k < 3; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < 3; ++i)
            if (std::abs(lu_[i][k]) > std::abs(lu_[pivot][k]))
                pivot = i;
        if (lu_[pivot][k] == 0.0) {
            singular_ = true;
            return;
        }
        if (pivot != k) {
            std::swap(lu_[pivot], lu_[k]);
            std::swap(perm_[pivot], perm_[k]);
        }
        for (std::size_t i = k + 1; i < 3; ++i) {
            lu_[i][k] /= lu_[k][k];
            for (std::size_t j = k + 1; j < 3; ++j)
                lu_[i][j] -= lu_[i][k] * lu_[k][j];
        }
    }
}

Vec3 Lu3::solve(const Vec3& b) const
{
    Vec3 x{b[perm_[0]], b[perm_[1]], b[perm_[2]]};
    for (std::size_t i = 1; i < 3; ++i)
        for (std::size_t j = 0; j < i; ++j)
            x[i] -= lu_[i][j] * x[j];
    for (std::size_t i = 3; i-- > 0;) {
        for (std::size_t j = i + 1; j < 3; ++j)
            x[i] -= lu_[i][j] * x[j];
        x[i] /= lu_[i][i];
    }
    return x;
}

Mat3 Lu3::solve(const Mat3& b) const
{
    Mat3 out{};
    for (std::size_t j = 0; j < 3; ++j) {
        const Vec3 col = solve(Vec3{b[0][j], b[1][j], b[2][j]});
        for (std::size_t i = 0; i < 3; ++i)
            out[i][j] = col[i];
    }
    return out;
}

Mat3 Lu3::inverse() const
{
    return solve(Mat3{Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}, Vec3{0.0, 0.0, 1.0}});
}

double Lu3::condition_inf() const
{
    if (singular_)
        return std::numeric_limits<double>::infinity();
    return norm_ * norm_inf(inverse());
}

}  // namespace vofde
