#ifndef HEUNPATH_ERRORS_HPP
#define HEUNPATH_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heunpath
{

// Root of every failure raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// t coincides with 0 or 1, leaving fewer than four singular points.
class DegenerateSingularity : public Error
{
public:
    using Error::Error;
};

class PoleEvaluation : public Error
{
public:
    using Error::Error;
};

class InvalidSeed : public Error
{
public:
    using Error::Error;
};

class SeedDivergence : public Error
{
public:
    using Error::Error;
};

class DimensionMismatch : public Error
{
public:
    using Error::Error;
};

class NearSingularDiagonal : public Error
{
public:
    NearSingularDiagonal(std::size_t index, double magnitude);

    std::size_t index() const noexcept { return m_index; }
    double magnitude() const noexcept { return m_magnitude; }

private:
    std::size_t m_index;
    double m_magnitude;
};

class SegmentAnchorMismatch : public Error
{
public:
    using Error::Error;
};

class SegmentCrossesSingularity : public Error
{
public:
    SegmentCrossesSingularity(std::string singularity, double distance, double radius);

    const std::string &singularity() const noexcept { return m_singularity; }
    double distance() const noexcept { return m_distance; }

private:
    std::string m_singularity;
    double m_distance;
};

class SlowConvergence : public Error
{
public:
    using Error::Error;
};

class GridMismatch : public Error
{
public:
    using Error::Error;
};

} // namespace heunpath

#endif
