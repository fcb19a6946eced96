// SPDX-License-Identifier: Apache-2.0

#ifndef isac_geometry_H
#define isac_geometry_H

#include <cmath>
#include <numbers>

namespace isac
{
    inline constexpr double speed_of_light = 299792458.0; // m/s
    inline constexpr double pi = std::numbers::pi;
    inline constexpr double two_pi = 2.0 * std::numbers::pi;

    constexpr double deg_to_rad(double deg) { return deg * pi / 180.0; }
    constexpr double rad_to_deg(double rad) { return rad * 180.0 / pi; }

    // Cartesian 3-vector in meters (or dimensionless when used as a direction).
    struct Vec3
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;

        constexpr Vec3 &operator+=(const Vec3 &o)
        {
            x += o.x, y += o.y, z += o.z;
            return *this;
        }
        constexpr Vec3 &operator-=(const Vec3 &o)
        {
            x -= o.x, y -= o.y, z -= o.z;
            return *this;
        }
        constexpr Vec3 &operator*=(double s)
        {
            x *= s, y *= s, z *= s;
            return *this;
        }

        friend constexpr Vec3 operator+(Vec3 a, const Vec3 &b) { return a += b; }
        friend constexpr Vec3 operator-(Vec3 a, const Vec3 &b) { return a -= b; }
        friend constexpr Vec3 operator-(const Vec3 &a) { return {-a.x, -a.y, -a.z}; }
        friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
        friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
        friend constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
        friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
    };

    constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
    inline double norm(const Vec3 &v) { return std::sqrt(dot(v, v)); }
    inline double distance(const Vec3 &a, const Vec3 &b) { return norm(a - b); }
    inline double distance_2d(const Vec3 &a, const Vec3 &b) { return std::hypot(a.x - b.x, a.y - b.y); }
    inline bool is_finite(const Vec3 &v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

    // Unit vector along v. Throws DegenerateGeometry for a zero or non-finite vector.
    Vec3 unit(const Vec3 &v);

    double wrap_two_pi(double angle); // [0, 2*pi)
    double wrap_pi(double angle);     // (-pi, pi]

    // Direction in spherical coordinates, radians.
    // Azimuth is measured from +x toward +y, zenith from +z (zenith 0 points straight up).
    struct SphericalAngles
    {
        double azimuth = 0.0; // [0, 2*pi)
        double zenith = 0.0;  // [0, pi]

        // Brings arbitrary angles into range. A zenith outside [0, pi] is reflected through the
        // pole and the azimuth turned by pi, so the represented direction is preserved.
        static SphericalAngles wrapped(double azimuth, double zenith);
    };

    // (cos az sin zen, sin az sin zen, cos zen)
    Vec3 direction_vector(const SphericalAngles &angles);

    // Inverse of direction_vector for any nonzero v. Throws DegenerateGeometry on a zero vector.
    SphericalAngles angles_from_vector(const Vec3 &v);
}

#endif
