// SPDX-License-Identifier: Apache-2.0

#ifndef isac_antenna_H
#define isac_antenna_H

#include "isac/geometry.hpp"

#include <functional>
#include <string>
#include <vector>

namespace isac
{
    // Field pattern components along the spherical basis vectors (unitless amplitude).
    struct PolarizedField
    {
        double theta = 1.0;
        double phi = 0.0;
    };

    using FieldPattern = std::function<PolarizedField(const SphericalAngles &)>;

    FieldPattern isotropic_pattern(); // (1, 0) in every direction
    FieldPattern constant_pattern(double theta, double phi);

    // Single directional element with 8 dBi peak gain and 65 deg half-power beamwidth,
    // boresight along +x, linearly polarized with the given slant (0 = vertical).
    FieldPattern directional_pattern(double slant_rad);

    struct AntennaElement
    {
        Vec3 offset{};                          // Element position in the array frame, meters
        FieldPattern pattern = isotropic_pattern();

        PolarizedField field(const SphericalAngles &dir) const { return pattern(dir); }
    };

    // Array geometry as configured. Arrays are axis-aligned and face +x; there is no mechanical tilt.
    struct ArraySpec
    {
        std::string pattern = "isotropic"; // isotropic | directional
        int rows = 1;                      // Elements along z
        int columns = 1;                   // Elements along y
        double spacing_wavelengths = 0.5;
        double slant_deg = 0.0;
    };

    struct AntennaArray
    {
        std::vector<AntennaElement> elements;

        std::size_t size() const { return elements.size(); }

        static AntennaArray single(FieldPattern pattern = isotropic_pattern());
        static AntennaArray uniform_planar(int rows, int columns, double spacing_m, FieldPattern pattern);
        static AntennaArray from_spec(const ArraySpec &spec, double wavelength);
    };
}

#endif
