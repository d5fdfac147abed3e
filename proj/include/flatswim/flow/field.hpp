#pragma once

// Regular-grid planar velocity field.

#include <cstddef>
#include <filesystem>
#include <vector>

#include "flatswim/geometry.hpp"

namespace flatswim::flow {

/// Velocities on an nx × ny grid. Node (i, j) sits at
/// origin + (i·spacing, j·spacing); i runs along x, j along y.
class FlowField {
public:
    FlowField() = default;
    FlowField(std::size_t nx, std::size_t ny, double spacing, Vec2 origin = {});

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double spacing() const { return spacing_; }
    Vec2 origin() const { return origin_; }
    void set_origin(Vec2 origin) { origin_ = origin; }

    Vec2& at(std::size_t i, std::size_t j) { return data_[j * nx_ + i]; }
    const Vec2& at(std::size_t i, std::size_t j) const { return data_[j * nx_ + i]; }
    Vec2 node(std::size_t i, std::size_t j) const;
    const std::vector<Vec2>& values() const { return data_; }

    /// Bilinear sample at a world point; zero outside the grid.
    Vec2 sample(Vec2 p) const;
    /// Bilinear sample at fractional grid coordinates; zero outside.
    Vec2 sample_grid(double gi, double gj) const;

    /// Throws std::invalid_argument for an empty grid, spacing <= 0 or non-finite values.
    void validate() const;

private:
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    double spacing_ = 1.0;
    Vec2 origin_;
    std::vector<Vec2> data_;
};

FlowField uniform_field(std::size_t nx, std::size_t ny, double spacing, Vec2 velocity, Vec2 origin = {});

/// Closed line integral of u·dl around a circle, sampled bilinearly.
double circulation(const FlowField& field, Vec2 center, double radius, std::size_t samples = 720);

/// CSV with header x,y,u,v and one row per node, x varying fastest.
void write_field_csv(const std::filesystem::path& path, const FlowField& field);
/// Reads the CSV written by write_field_csv. The grid must be complete and regular.
FlowField read_field_csv(const std::filesystem::path& path);

}  // namespace flatswim::flow
