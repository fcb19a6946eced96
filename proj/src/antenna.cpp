// SPDX-License-Identifier: Apache-2.0

#include "isac/antenna.hpp"

#include <algorithm>
#include <stdexcept>

isac::FieldPattern isac::isotropic_pattern()
{
    return [](const SphericalAngles &) { return PolarizedField{1.0, 0.0}; };
}

isac::FieldPattern isac::constant_pattern(double theta, double phi)
{
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw std::invalid_argument("Field pattern components must be finite.");
    return [theta, phi](const SphericalAngles &) { return PolarizedField{theta, phi}; };
}

isac::FieldPattern isac::directional_pattern(double slant_rad)
{
    return [slant_rad](const SphericalAngles &dir)
    {
        double zen_deg = rad_to_deg(dir.zenith);
        double az_deg = rad_to_deg(wrap_pi(dir.azimuth));
        double a_vert = -std::min(12.0 * std::pow((zen_deg - 90.0) / 65.0, 2), 30.0);
        double a_hor = -std::min(12.0 * std::pow(az_deg / 65.0, 2), 30.0);
        double gain_db = 8.0 - std::min(-(a_vert + a_hor), 30.0);
        double amplitude = std::sqrt(std::pow(10.0, gain_db / 10.0));
        return PolarizedField{amplitude * std::cos(slant_rad), amplitude * std::sin(slant_rad)};
    };
}

isac::AntennaArray isac::AntennaArray::single(FieldPattern pattern)
{
    AntennaArray array;
    array.elements.push_back({Vec3{}, std::move(pattern)});
    return array;
}

isac::AntennaArray isac::AntennaArray::uniform_planar(int rows, int columns, double spacing_m, FieldPattern pattern)
{
    if (rows < 1 || columns < 1)
        throw std::invalid_argument("Array must have at least one row and one column.");
    if (!(spacing_m >= 0.0))
        throw std::invalid_argument("Element spacing cannot be negative.");

    AntennaArray array;
    array.elements.reserve(static_cast<std::size_t>(rows * columns));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < columns; ++c)
            array.elements.push_back({Vec3{0.0, c * spacing_m, r * spacing_m}, pattern});
    return array;
}

isac::AntennaArray isac::AntennaArray::from_spec(const ArraySpec &spec, double wavelength)
{
    FieldPattern pattern;
    if (spec.pattern == "isotropic")
        pattern = isotropic_pattern();
    else if (spec.pattern == "directional")
        pattern = directional_pattern(deg_to_rad(spec.slant_deg));
    else
        throw std::invalid_argument("Unknown antenna pattern '" + spec.pattern + "'.");
    return uniform_planar(spec.rows, spec.columns, spec.spacing_wavelengths * wavelength, pattern);
}
