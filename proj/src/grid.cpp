#include "quadprop/grid.hpp"
#include "quadprop/errors.hpp"

#include <algorithm>
#include <cmath>

namespace quadprop {

std::size_t Grid::size() const {
    std::size_t s = 1;
    for (const auto& ax : axes) s *= ax.n;
    return s;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (const auto& ax : axes) v *= ax.spacing;
    return v;
}

void Grid::validate() const {
    if (axes.empty() || axes.size() > 3)
        throw SpecError("grid must have 1..3 axes");
    for (const auto& ax : axes) {
        if (!is_pow2(ax.n) || ax.n < 8)
            throw SpecError("grid axis sample count must be a power of two >= 8");
        if (!(ax.spacing > 0.0) || !std::isfinite(ax.spacing) || !std::isfinite(ax.center))
            throw SpecError("grid spacing must be positive and finite");
    }
}

Grid make_grid(std::size_t n, double center, double spacing) {
    Grid g;
    g.axes.push_back({n, center, spacing, {}});
    g.validate();
    return g;
}

Grid make_grid(const std::vector<GridAxis>& axes) {
    Grid g;
    g.axes = axes;
    g.validate();
    return g;
}

void GridState::stamp_norm() { norm_log = l2_norm(*this); }

GridState make_state(Grid grid, std::vector<cdouble> values, double time) {
    grid.validate();
    if (values.size() != grid.size())
        throw SpecError("state values length inconsistent with grid");
    GridState s{std::move(grid), std::move(values), time, 0.0};
    s.stamp_norm();
    if (!std::isfinite(s.norm_log))
        throw SpecError("state norm is not finite");
    return s;
}

double mass(const GridState& s) {
    double acc = 0.0;
    for (const auto& v : s.values) acc += std::norm(v);
    return acc * s.grid.cell_volume();
}

double l2_norm(const GridState& s) { return std::sqrt(mass(s)); }

double l1_norm(const GridState& s) {
    double acc = 0.0;
    for (const auto& v : s.values) acc += std::abs(v);
    return acc * s.grid.cell_volume();
}

double sup_norm(const GridState& s) {
    double m = 0.0;
    for (const auto& v : s.values) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// accumulate sum of w(x_axis) |u|^2 for each axis
std::vector<double> weighted_moments(const GridState& s, int power, const std::vector<double>* shift) {
    const int d = s.grid.dim();
    std::vector<double> acc(static_cast<std::size_t>(d), 0.0);
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    const auto& vals = s.values;
    for (std::size_t lin = 0; lin < vals.size(); ++lin) {
        const double w = std::norm(vals[lin]);
        if (w != 0.0) {
            std::size_t rem = lin;
            for (int a = d - 1; a >= 0; --a) {
                const auto& ax = s.grid.axes[static_cast<std::size_t>(a)];
                idx[static_cast<std::size_t>(a)] = rem % ax.n;
                rem /= ax.n;
            }
            for (int a = 0; a < d; ++a) {
                double x = s.grid.axes[static_cast<std::size_t>(a)].point(idx[static_cast<std::size_t>(a)]);
                if (shift) x -= (*shift)[static_cast<std::size_t>(a)];
                acc[static_cast<std::size_t>(a)] += (power == 1 ? x : x * x) * w;
            }
        }
    }
    const double vol = s.grid.cell_volume();
    for (auto& v : acc) v *= vol;
    return acc;
}

} // namespace

std::vector<double> centroid(const GridState& s) {
    const double m = mass(s);
    auto mom = weighted_moments(s, 1, nullptr);
    for (auto& v : mom) v /= m;
    return mom;
}

std::vector<double> position_variance(const GridState& s) {
    const double m = mass(s);
    auto c = centroid(s);
    auto mom2 = weighted_moments(s, 2, &c);
    for (auto& v : mom2) v /= m;
    return mom2;
}

double l2_distance(const GridState& a, const GridState& b) {
    if (a.values.size() != b.values.size())
        throw SpecError("l2_distance needs states on identical grids");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) acc += std::norm(a.values[i] - b.values[i]);
    return std::sqrt(acc * a.grid.cell_volume());
}

std::vector<cdouble> gaussian_profile(const GridAxis& ax, double center, double width,
                                      double momentum) {
    if (!(width > 0.0)) throw SpecError("gaussian width must be positive");
    std::vector<cdouble> out(ax.n);
    const double norm = std::pow(M_PI, -0.25) / std::sqrt(width);
    for (std::size_t i = 0; i < ax.n; ++i) {
        const double x = ax.point(i);
        const double u = (x - center) / width;
        out[i] = norm * std::exp(-0.5 * u * u) *
                 cdouble(std::cos(momentum * x), std::sin(momentum * x));
    }
    return out;
}

std::vector<cdouble> hermite_profile(const GridAxis& ax, int n, double center, double width) {
    if (n < 0) throw SpecError("hermite order must be >= 0");
    std::vector<cdouble> out(ax.n);
    const double norm = std::pow(M_PI, -0.25) / std::sqrt(width);
    for (std::size_t i = 0; i < ax.n; ++i) {
        const double u = (ax.point(i) - center) / width;
        // stable recurrence for normalized Hermite functions
        double hm1 = 0.0;
        double h = std::exp(-0.5 * u * u);
        for (int k = 0; k < n; ++k) {
            const double hp = std::sqrt(2.0 / (k + 1.0)) * u * h -
                              std::sqrt(static_cast<double>(k) / (k + 1.0)) * hm1;
            hm1 = h;
            h = hp;
        }
        out[i] = norm * h;
    }
    return out;
}

std::vector<cdouble> soliton_profile(const GridAxis& ax, double amp, double speed, double center) {
    if (!(amp > 0.0)) throw SpecError("soliton amplitude must be positive");
    std::vector<cdouble> out(ax.n);
    for (std::size_t i = 0; i < ax.n; ++i) {
        const double x = ax.point(i);
        out[i] = amp / std::cosh(amp * (x - center)) *
                 cdouble(std::cos(speed * x), std::sin(speed * x));
    }
    return out;
}

std::vector<cdouble> random_smooth_profile(const GridAxis& ax, std::mt19937_64& rng, int max_order) {
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<cdouble> coeffs(static_cast<std::size_t>(max_order) + 1);
    for (auto& c : coeffs) c = cdouble(dist(rng), dist(rng));
    std::vector<cdouble> out(ax.n, cdouble(0.0, 0.0));
    for (int k = 0; k <= max_order; ++k) {
        auto h = hermite_profile(ax, k);
        for (std::size_t i = 0; i < ax.n; ++i) out[i] += coeffs[static_cast<std::size_t>(k)] * h[i];
    }
    double m = 0.0;
    for (const auto& v : out) m += std::norm(v);
    m = std::sqrt(m * ax.spacing);
    for (auto& v : out) v /= m;
    return out;
}

GridState product_state(const Grid& grid, const std::vector<std::vector<cdouble>>& profiles) {
    if (profiles.size() != grid.axes.size())
        throw SpecError("product_state needs one profile per axis");
    std::vector<cdouble> vals(grid.size(), cdouble(1.0, 0.0));
    const int d = grid.dim();
    std::size_t stride = grid.size();
    std::vector<std::size_t> strides(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        stride /= grid.axes[static_cast<std::size_t>(a)].n;
        strides[static_cast<std::size_t>(a)] = stride;
    }
    for (std::size_t lin = 0; lin < vals.size(); ++lin) {
        cdouble v(1.0, 0.0);
        for (int a = 0; a < d; ++a) {
            const std::size_t i =
                (lin / strides[static_cast<std::size_t>(a)]) % grid.axes[static_cast<std::size_t>(a)].n;
            v *= profiles[static_cast<std::size_t>(a)][i];
        }
        vals[lin] = v;
    }
    return make_state(grid, std::move(vals));
}

namespace {

// 1-d band-limited resample of one line: source axis -> target axis.
// Interpolant u(x) = (1/N) sum_j C_j exp(2 pi i xi_j (x - x0)) with
// C_j = sum_m u_m exp(-2 pi i xi_j (x_m - x0)), xi_j = (j - N/2)/(N dx).
void resample_line(std::vector<cdouble>& line, const GridAxis& src, const GridAxis& dst) {
    const std::size_t n = src.n;
    std::vector<cdouble> work(n);
    for (std::size_t m = 0; m < n; ++m)
        work[m] = (m % 2 == 0) ? line[m] : -line[m]; // centered-frequency shift
    fft_pow2(work, -1);
    const double dxi = 1.0 / (static_cast<double>(n) * src.spacing);
    const double xi0 = -0.5 * static_cast<double>(n) * dxi;
    const double shift = dst.point(0) - src.point(0);
    for (std::size_t j = 0; j < n; ++j) {
        const double ang = 2.0 * M_PI * (xi0 + static_cast<double>(j) * dxi) * shift;
        work[j] *= cdouble(std::cos(ang), std::sin(ang));
    }
    const double theta_w = 2.0 * M_PI * dxi * dst.spacing;
    auto vals = czt(work, dst.n, theta_w, 0.0);
    line.assign(dst.n, cdouble(0.0, 0.0));
    const double inv = 1.0 / static_cast<double>(n);
    const double theta0 = 2.0 * M_PI * xi0 * dst.spacing;
    for (std::size_t k = 0; k < dst.n; ++k) {
        const double ang = theta0 * static_cast<double>(k);
        line[k] = vals[k] * cdouble(std::cos(ang), std::sin(ang)) * inv;
    }
}

} // namespace

void dilated_line_eval(std::vector<cdouble>& line, const GridAxis& ax, double scale, double shift) {
    const std::size_t n = ax.n;
    const std::size_t np = 2 * n;
    std::vector<cdouble> work(np, cdouble(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        work[n / 2 + i] = (((n / 2 + i) % 2) == 0) ? line[i] : -line[i];
    fft_pow2(work, -1);
    // smooth spectral roll-off keeps the repeated stretch evaluation contractive
    const double half = static_cast<double>(np) / 2.0;
    for (std::size_t j = 0; j < np; ++j) {
        const double q = std::abs(static_cast<double>(j) - half) / half;
        work[j] *= std::exp(-36.0 * std::pow(q, 24));
    }
    const double dxi = 1.0 / (static_cast<double>(np) * ax.spacing);
    const double xi0 = -half * dxi;
    const double x0p = ax.center - half * ax.spacing; // left end of the padded window
    const double y0 = scale * ax.point(0) + shift;
    const double dy = scale * ax.spacing;
    for (std::size_t j = 0; j < np; ++j) {
        const double ang = 2.0 * M_PI * (xi0 + static_cast<double>(j) * dxi) * (y0 - x0p);
        work[j] *= cdouble(std::cos(ang), std::sin(ang));
    }
    auto vals = czt(work, n, 2.0 * M_PI * dxi * dy, 0.0);
    const double inv = 1.0 / static_cast<double>(np);
    const double theta0 = 2.0 * M_PI * xi0 * dy;
    for (std::size_t k = 0; k < n; ++k) {
        const double ang = theta0 * static_cast<double>(k);
        line[k] = vals[k] * cdouble(std::cos(ang), std::sin(ang)) * inv;
    }
}

GridState resample(const GridState& s, const Grid& target) {
    target.validate();
    if (target.dim() != s.grid.dim())
        throw SpecError("resample target must have the same dimension");
    GridState cur = s;
    for (int a = 0; a < s.grid.dim(); ++a) {
        const auto& src = cur.grid.axes[static_cast<std::size_t>(a)];
        const auto& dst = target.axes[static_cast<std::size_t>(a)];
        if (src.n == dst.n && src.center == dst.center && src.spacing == dst.spacing) continue;
        // resample along this axis only; other axes keep their current geometry
        std::vector<cdouble> out;
        Grid next = cur.grid;
        next.axes[static_cast<std::size_t>(a)] = dst;
        out.assign(next.size(), cdouble(0.0, 0.0));
        // gather lines from cur, resample, scatter into out
        std::size_t stride = 1;
        for (int b = cur.grid.dim() - 1; b > a; --b)
            stride *= cur.grid.axes[static_cast<std::size_t>(b)].n;
        const std::size_t n_src = src.n, n_dst = dst.n;
        const std::size_t block_src = stride * n_src, block_dst = stride * n_dst;
        const std::size_t nblocks = cur.values.size() / block_src;
        std::vector<cdouble> line;
        for (std::size_t blk = 0; blk < nblocks; ++blk) {
            for (std::size_t off = 0; off < stride; ++off) {
                line.assign(n_src, cdouble(0.0, 0.0));
                for (std::size_t i = 0; i < n_src; ++i)
                    line[i] = cur.values[blk * block_src + off + i * stride];
                resample_line(line, src, dst);
                for (std::size_t i = 0; i < n_dst; ++i)
                    out[blk * block_dst + off + i * stride] = line[i];
            }
        }
        cur.grid = next;
        cur.values = std::move(out);
    }
    cur.time = s.time;
    cur.stamp_norm();
    return cur;
}

} // namespace quadprop
