// SPDX-License-Identifier: Apache-2.0

#ifndef isac_coefficients_H
#define isac_coefficients_H

#include "isac/antenna.hpp"
#include "isac/comm_generator.hpp"
#include "isac/geometry.hpp"

#include <complex>

namespace isac
{
    struct PathCoefficient
    {
        std::complex<double> value;
        double delay = 0.0;   // Seconds
        double doppler = 0.0; // Hz
    };

    struct SensingGeometry
    {
        Vec3 tx;     // Sensing transmitter
        Vec3 sx;     // Sensing receiver
        Vec3 target; // Scatterer or target
    };

    // Direct polarization path with unit directions pointing away from each end.
    //   value = F_rx^T diag(1, -1) F_tx * exp(j 2 pi r_tx^T d_tx / lambda) * exp(j 2 pi r_rx^T d_rx / lambda)
    //           * exp(j 2 pi doppler t),   doppler = (r_tx + r_rx)^T v / lambda
    PathCoefficient los_path_coefficient(const AntennaElement &rx, const AntennaElement &tx, const Vec3 &tx_dir,
                                         const Vec3 &rx_dir, const Vec3 &velocity, double t, double wavelength,
                                         double delay);

    // Scattered path with the random XPR / phase polarization matrix of the ray.
    // Throws std::invalid_argument for a non-positive XPR.
    PathCoefficient nlos_path_coefficient(const AntennaElement &rx, const AntennaElement &tx, const Vec3 &tx_dir,
                                          const Vec3 &rx_dir, const Ray &ray, const Vec3 &velocity, double t,
                                          double wavelength, double delay);

    // Echo from a point target seen in LOS on both legs. Delay is (d1 + d2) / c.
    // Throws DegenerateGeometry if the target coincides with the transmitter or sensing receiver.
    PathCoefficient los_sensing_coefficient(const AntennaElement &sx_element, const AntennaElement &tx_element,
                                            const SensingGeometry &geometry, const Vec3 &velocity, double t,
                                            double wavelength);

    // Echo ray leaving TX along tx_dir and arriving at SX from sx_dir.
    PathCoefficient nlos_sensing_coefficient(const AntennaElement &sx_element, const AntennaElement &tx_element,
                                             const SphericalAngles &tx_dir, const SphericalAngles &sx_dir,
                                             const Ray &ray, const Vec3 &velocity, double t, double wavelength,
                                             double delay);

    // Direct communication path. The arrival direction points from RX toward TX.
    PathCoefficient comm_los_coefficient(const AntennaElement &rx_element, const AntennaElement &tx_element,
                                         const Vec3 &tx_position, const Vec3 &rx_position, const Vec3 &velocity,
                                         double t, double wavelength);

    // One ray of a communication cluster.
    PathCoefficient comm_nlos_coefficient(const AntennaElement &rx_element, const AntennaElement &tx_element,
                                          const SphericalAngles &departure, const SphericalAngles &arrival,
                                          const Ray &ray, const Vec3 &velocity, double t, double wavelength,
                                          double delay);
}

#endif
