#ifndef QUADPROP_GRID_HPP
#define QUADPROP_GRID_HPP

#include "quadprop/fft.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace quadprop {

struct GridAxis {
    std::size_t n = 0;      // power of two, >= 8
    double center = 0.0;
    double spacing = 0.0;
    std::vector<double> scale_history; // mu factors applied by fast passes

    double point(std::size_t i) const {
        return center + (static_cast<double>(i) - static_cast<double>(n) / 2.0) * spacing;
    }
    double extent() const { return static_cast<double>(n) * spacing; }
};

struct Grid {
    std::vector<GridAxis> axes;

    std::size_t size() const;
    int dim() const { return static_cast<int>(axes.size()); }
    double cell_volume() const;
    void validate() const; // throws SpecError on invariant violation
};

Grid make_grid(std::size_t n, double center, double spacing);
Grid make_grid(const std::vector<GridAxis>& axes);

// Complex wavefunction samples on a uniform grid, row-major over axes.
struct GridState {
    Grid grid;
    std::vector<cdouble> values;
    double time = 0.0;
    double norm_log = 0.0; // discrete L2 norm at creation

    void stamp_norm();
};

GridState make_state(Grid grid, std::vector<cdouble> values, double time = 0.0);

double mass(const GridState& s);              // discrete squared L2 norm
double l2_norm(const GridState& s);
double l1_norm(const GridState& s);
double sup_norm(const GridState& s);
std::vector<double> centroid(const GridState& s);
// second moment about the centroid, per axis
std::vector<double> position_variance(const GridState& s);
double l2_distance(const GridState& a, const GridState& b);

// --- 1-d profile builders (tensor products assemble d-dim states) ---
// pi^{-1/4} w^{-1/2} exp(-(x-c)^2 / (2 w^2)) exp(i k x)
std::vector<cdouble> gaussian_profile(const GridAxis& ax, double center, double width, double momentum);
// normalized Hermite function of order n, scaled/centered
std::vector<cdouble> hermite_profile(const GridAxis& ax, int n, double center = 0.0, double width = 1.0);
// amp * sech(amp (x - c)) * exp(i v x)
std::vector<cdouble> soliton_profile(const GridAxis& ax, double amp, double speed, double center = 0.0);
// normalized random mixture of Hermite functions 0..max_order (smooth, decaying)
std::vector<cdouble> random_smooth_profile(const GridAxis& ax, std::mt19937_64& rng, int max_order = 6);

GridState product_state(const Grid& grid, const std::vector<std::vector<cdouble>>& profiles);

// Band-limited (trigonometric-interpolant) resampling onto a target grid via
// the chirp-z transform. Evaluation points beyond the source extent wrap
// periodically, so the source must decay at its edges.
GridState resample(const GridState& s, const Grid& target);

// In-place evaluation of one line at (scale * x + shift) through a zero-padded
// interpolant with a smooth high-frequency roll-off. The plain periodic
// interpolant amplifies edge-localized near-Nyquist content under repeated
// slightly-stretching evaluations (operator norm > 1), which destabilizes
// split-step dilation flows; the padded filtered variant is contractive.
void dilated_line_eval(std::vector<cdouble>& line, const GridAxis& ax, double scale, double shift);

// Walks every 1-d line along `axis`, calls fn on a contiguous copy, writes back.
template <typename Fn>
void for_each_line(std::vector<cdouble>& values, const Grid& grid, int axis, Fn&& fn) {
    const std::size_t n = grid.axes[static_cast<std::size_t>(axis)].n;
    std::size_t stride = 1;
    for (int a = grid.dim() - 1; a > axis; --a) stride *= grid.axes[static_cast<std::size_t>(a)].n;
    const std::size_t total = values.size();
    const std::size_t block = stride * n;
    std::vector<cdouble> line(n);
    for (std::size_t base = 0; base < total; base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            for (std::size_t i = 0; i < n; ++i) line[i] = values[base + off + i * stride];
            fn(line);
            for (std::size_t i = 0; i < n; ++i) values[base + off + i * stride] = line[i];
        }
    }
}

} // namespace quadprop

#endif
