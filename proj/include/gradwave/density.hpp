// Binned densities over gradient space: uniform bin grids, ball integration,
// mass-conserving rebinning, exclusion masks and CSV serialization.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gradwave {

struct BinAxis {
    double first_center = 0.0;
    double step = 0.0;
    int count = 0;

    double center(int i) const { return first_center + i * step; }
    double lo_edge() const { return first_center - 0.5 * step; }
    double hi_edge() const { return center(count - 1) + 0.5 * step; }
    // May fall outside [0, count): callers range-check.
    int index_of(double u) const;
};

bool axes_equal(const std::vector<BinAxis>& a, const std::vector<BinAxis>& b,
                double tol = 1e-9);

// Cell-centered bins covering [lo_i, hi_i] with count_i bins per axis.
std::vector<BinAxis> make_bin_grid(const std::vector<double>& lo,
                                   const std::vector<double>& hi,
                                   const std::vector<int>& counts);

// Per-bin exclusion flags (near set C, out of range, boundary-tainted).
// Comparisons never read excluded bins.
struct ErrorMask {
    std::vector<std::uint8_t> excluded;

    bool empty_or_clear() const;
    double excluded_fraction() const;
    static ErrorMask none(std::size_t bins);
};

// Infinity-norm ball N_alpha(u0).
struct BallRegion {
    std::vector<double> center;
    double radius = 0.0;

    BallRegion(std::vector<double> center_, double radius_);
    double volume() const;
};

struct GradientDensity {
    int dim = 0;
    std::vector<BinAxis> axes;
    std::vector<double> values;      // density per unit gradient-space volume
    std::optional<double> tau;       // absent for oracle/sample-produced densities
    double prenorm_mass = 1.0;       // discrete mass before renormalization
    double clipped_mass = 0.0;       // mass removed by clipping (charfn path)
    double out_of_range_mass = 0.0;  // sample fraction outside the bin grid

    double bin_volume() const;
    std::size_t size() const { return values.size(); }
    double total_mass() const;

    std::size_t flat_index(const std::vector<int>& idx) const;
    std::vector<double> center_of(std::size_t flat) const;
    // Flat index of the bin containing u, or nullopt when outside the grid.
    std::optional<std::size_t> bin_containing(const std::vector<double>& u) const;
    // Value of the bin containing u; throws std::out_of_range outside the grid.
    double value_at(const std::vector<double>& u) const;
};

// Sum of bin values whose centers lie in the closed infinity-norm ball, times
// bin volume. Throws std::invalid_argument when the ball does not fit inside
// the covered range or the radius is not smaller than half the covered range.
double integrate_ball(const GradientDensity& density, const BallRegion& region);

// integrate_ball / (2*radius)^d.
double mean_in_ball(const GradientDensity& density, const BallRegion& region);

// Mass-conserving rebin onto a target grid: each source bin's mass lands in
// the target bin containing its center; mass falling outside is dropped and
// recorded in out_of_range_mass.
GradientDensity rebin(const GradientDensity& src, const std::vector<BinAxis>& target);

// CSV: header lines carry tau, bin volume and axes; one row per bin with
// columns u_1..u_d,value.
void save_density_csv(const GradientDensity& density, const std::string& path);

// Polar rebin of a 2-D density: mass per equal-angle sector, integrated over
// radius. Sector k is centered at angle 2πk/sectors (so the cardinal
// directions are sector centers); the zero-gradient bin has no orientation
// and is excluded.
std::vector<double> orientation_histogram(const GradientDensity& density, int sectors);

}  // namespace gradwave
