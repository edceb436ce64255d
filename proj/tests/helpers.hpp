#pragma once

#include <cmath>

#include "pdgeo/matrix.hpp"
#include "pdgeo/symcore.hpp"

namespace testutil {

inline pdgeo::SpdPoint spd(std::initializer_list<std::initializer_list<double>> rows)
{
    return pdgeo::SpdPoint(pdgeo::SymMatrix::from_dense(pdgeo::Matrix(rows)));
}

inline pdgeo::SpdPoint diag(std::initializer_list<double> d)
{
    const std::vector<double> v(d);
    return pdgeo::SpdPoint(pdgeo::SymMatrix::diagonal(v));
}

inline bool near(double a, double b, double tol)
{
    return std::abs(a - b) <= tol;
}

}  // namespace testutil
