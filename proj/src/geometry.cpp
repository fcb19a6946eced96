// SPDX-License-Identifier: Apache-2.0

#include "isac/geometry.hpp"
#include "isac/error.hpp"

#include <algorithm>

isac::Vec3 isac::unit(const Vec3 &v)
{
    double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n))
        throw DegenerateGeometry("Cannot normalize a zero-length or non-finite vector.");
    return v / n;
}

double isac::wrap_two_pi(double angle)
{
    double a = std::fmod(angle, two_pi);
    if (a < 0.0)
        a += two_pi;
    if (a >= two_pi) // fmod rounding of tiny negatives
        a = 0.0;
    return a;
}

double isac::wrap_pi(double angle)
{
    double a = wrap_two_pi(angle);
    return a > pi ? a - two_pi : a;
}

isac::SphericalAngles isac::SphericalAngles::wrapped(double azimuth, double zenith)
{
    double zen = wrap_two_pi(zenith);
    if (zen > pi)
    {
        zen = two_pi - zen;
        azimuth += pi;
    }
    return {wrap_two_pi(azimuth), std::clamp(zen, 0.0, pi)};
}

isac::Vec3 isac::direction_vector(const SphericalAngles &angles)
{
    double sin_zen = std::sin(angles.zenith);
    return {std::cos(angles.azimuth) * sin_zen,
            std::sin(angles.azimuth) * sin_zen,
            std::cos(angles.zenith)};
}

isac::SphericalAngles isac::angles_from_vector(const Vec3 &v)
{
    double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n))
        throw DegenerateGeometry("Direction of a zero-length vector is undefined.");

    double zenith = std::acos(std::clamp(v.z / n, -1.0, 1.0));
    double azimuth = (v.x == 0.0 && v.y == 0.0) ? 0.0 : wrap_two_pi(std::atan2(v.y, v.x));
    return {azimuth, zenith};
}
