// SPDX-License-Identifier: Apache-2.0

#include "isac/coefficients.hpp"
#include "isac/error.hpp"

#include <cmath>
#include <stdexcept>

namespace
{
    using cd = std::complex<double>;

    cd phase(double x)
    {
        return std::polar(1.0, isac::two_pi * x);
    }

    // Element and Doppler phase terms shared by all path types
    isac::PathCoefficient common_terms(const isac::AntennaElement &rx, const isac::AntennaElement &tx,
                                       const isac::Vec3 &tx_dir, const isac::Vec3 &rx_dir, const isac::Vec3 &velocity,
                                       double t, double wavelength, double delay)
    {
        if (!(wavelength > 0.0))
            throw std::invalid_argument("Wavelength must be positive.");
        isac::PathCoefficient c;
        c.doppler = isac::dot(tx_dir + rx_dir, velocity) / wavelength;
        c.delay = delay;
        c.value = phase(isac::dot(tx_dir, tx.offset) / wavelength) * phase(isac::dot(rx_dir, rx.offset) / wavelength) *
                  phase(c.doppler * t);
        return c;
    }
}

isac::PathCoefficient isac::los_path_coefficient(const AntennaElement &rx, const AntennaElement &tx,
                                                 const Vec3 &tx_dir, const Vec3 &rx_dir, const Vec3 &velocity,
                                                 double t, double wavelength, double delay)
{
    auto c = common_terms(rx, tx, tx_dir, rx_dir, velocity, t, wavelength, delay);
    auto f_tx = tx.field(angles_from_vector(tx_dir));
    auto f_rx = rx.field(angles_from_vector(rx_dir));
    c.value *= f_rx.theta * f_tx.theta - f_rx.phi * f_tx.phi;
    return c;
}

isac::PathCoefficient isac::nlos_path_coefficient(const AntennaElement &rx, const AntennaElement &tx,
                                                  const Vec3 &tx_dir, const Vec3 &rx_dir, const Ray &ray,
                                                  const Vec3 &velocity, double t, double wavelength, double delay)
{
    if (!(ray.xpr > 0.0))
        throw std::invalid_argument("Cross-polarization ratio must be positive.");

    auto c = common_terms(rx, tx, tx_dir, rx_dir, velocity, t, wavelength, delay);
    auto f_tx = tx.field(angles_from_vector(tx_dir));
    auto f_rx = rx.field(angles_from_vector(rx_dir));
    const double cross = std::sqrt(1.0 / ray.xpr);
    const cd m_tt = std::polar(1.0, ray.phases[0]);
    const cd m_tp = std::polar(cross, ray.phases[1]);
    const cd m_pt = std::polar(cross, ray.phases[2]);
    const cd m_pp = std::polar(1.0, ray.phases[3]);

    cd pol = f_rx.theta * (m_tt * f_tx.theta + m_tp * f_tx.phi) + f_rx.phi * (m_pt * f_tx.theta + m_pp * f_tx.phi);
    c.value *= pol;
    return c;
}

isac::PathCoefficient isac::los_sensing_coefficient(const AntennaElement &sx_element, const AntennaElement &tx_element,
                                                    const SensingGeometry &g, const Vec3 &velocity, double t,
                                                    double wavelength)
{
    const double d1 = distance(g.target, g.tx);
    const double d2 = distance(g.target, g.sx);
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw DegenerateGeometry("Sensing target coincides with the transmitter or sensing receiver.");
    return los_path_coefficient(sx_element, tx_element, (g.target - g.tx) / d1, (g.target - g.sx) / d2, velocity, t,
                                wavelength, (d1 + d2) / speed_of_light);
}

isac::PathCoefficient isac::nlos_sensing_coefficient(const AntennaElement &sx_element,
                                                     const AntennaElement &tx_element, const SphericalAngles &tx_dir,
                                                     const SphericalAngles &sx_dir, const Ray &ray,
                                                     const Vec3 &velocity, double t, double wavelength, double delay)
{
    return nlos_path_coefficient(sx_element, tx_element, direction_vector(tx_dir), direction_vector(sx_dir), ray,
                                 velocity, t, wavelength, delay);
}

isac::PathCoefficient isac::comm_los_coefficient(const AntennaElement &rx_element, const AntennaElement &tx_element,
                                                 const Vec3 &tx_position, const Vec3 &rx_position,
                                                 const Vec3 &velocity, double t, double wavelength)
{
    const double d = distance(tx_position, rx_position);
    if (!(d > 0.0))
        throw DegenerateGeometry("TX and RX must not coincide.");
    const Vec3 tx_dir = (rx_position - tx_position) / d;
    return los_path_coefficient(rx_element, tx_element, tx_dir, -tx_dir, velocity, t, wavelength, 0.0);
}

isac::PathCoefficient isac::comm_nlos_coefficient(const AntennaElement &rx_element, const AntennaElement &tx_element,
                                                  const SphericalAngles &departure, const SphericalAngles &arrival,
                                                  const Ray &ray, const Vec3 &velocity, double t, double wavelength,
                                                  double delay)
{
    return nlos_path_coefficient(rx_element, tx_element, direction_vector(departure), direction_vector(arrival), ray,
                                 velocity, t, wavelength, delay);
}
