#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fraclab {

// Global cap on how many cells a single object may materialize.
// Default 2^26; the CLI maps --cell-budget / FRACLAB_CELL_BUDGET here.
std::uint64_t cell_budget();
void set_cell_budget(std::uint64_t budget);

// Base-b Cantor construction: keep the digits in `digits` for `depth`
// levels. Nominal dimension log|digits| / log base.
struct CantorSpec {
    std::int64_t base = 3;
    std::vector<int> digits = {0, 2};
    int depth = 1;

    double dimension() const;
    std::int64_t resolution() const;   // base^depth
    std::uint64_t cell_count() const;  // |digits|^depth
    void validate() const;
};

// A finite union of axis-aligned cells of side 1/resolution. `origin` is
// the lower corner of the bounding box in units of 1/resolution, so every
// coordinate the set touches is an exact rational on the absolute lattice.
// `cells` holds row-major flattened indices relative to origin, sorted and
// unique. Empty sets are only legal as the result of a filter and carry
// the `filtered` flag.
struct GridSet {
    int dim = 1;
    std::int64_t resolution = 1;
    std::vector<std::int64_t> origin;
    std::vector<std::int64_t> extent;
    std::vector<std::uint64_t> cells;
    bool filtered = false;

    std::size_t count() const { return cells.size(); }
    std::uint64_t total_extent_cells() const;

    std::uint64_t flatten(std::span<const std::int64_t> index) const;
    void unflatten(std::uint64_t flat, std::span<std::int64_t> index) const;
    std::vector<std::int64_t> cell_index(std::uint64_t flat) const;

    // Absolute center coordinates of a cell, (origin + index + 1/2)/N.
    void cell_center(std::uint64_t flat, std::span<double> out) const;
    std::vector<double> cell_center(std::uint64_t flat) const;

    // Cell diameter sqrt(dim)/N.
    double cell_diameter() const;

    void validate() const;

    bool operator==(const GridSet&) const = default;
};

struct SphereSubsetSpec {
    int dim = 2;
    double radius = 1.0;
    // Empty: the full sphere. Otherwise the Cantor restriction applied to
    // each normalized angular coordinate.
    std::optional<CantorSpec> angular;

    void validate() const;
};

GridSet make_cantor(const CantorSpec& spec);

// Full 1-D interval [0,1) at resolution N.
GridSet make_full_interval(std::int64_t resolution);

// Cartesian product of >= 2 one-dimensional sets of equal resolution.
GridSet make_product(const std::vector<GridSet>& factors);

// Cells of the ambient grid whose center lies within one cell diameter of
// the sphere |x| = radius, optionally restricted in angle.
GridSet make_sphere_subset(const SphereSubsetSpec& spec, std::int64_t resolution);

// Resolution N -> N/k; a coarse cell is present iff it contains a fine
// cell. k must divide N.
GridSet coarsen(const GridSet& s, std::int64_t k);

// Keeps cells whose center is within one cell diameter of the sphere
// |x - center| = radius. May return an empty (flagged) set.
GridSet restrict_to_sphere(const GridSet& s, std::span<const double> center, double radius);

// Occupied share of the bounding box spanned by the occupied cells.
double occupied_fraction(const GridSet& s);

namespace detail {
void check_budget(std::uint64_t needed, const char* op);
}

}  // namespace fraclab
