#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace percross::percsim {

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

enum class Geometry { rectangle, equilateral_triangle, isosceles_schramm };

enum class Observable { horizontal, horizontal_vertical, cluster_count, surround };

// Monte Carlo configuration. Site percolation on the triangular lattice,
// realized as a square index grid with two extra diagonal neighbor offsets;
// the domain shape is a site mask. `aspect` applies to the rectangle
// (width / height), `split` to the triangle geometries (boundary split
// fraction t in (0,1)). Results are bit-identical for a fixed (seed, config)
// regardless of `workers`.
struct LatticeRun {
    Geometry geometry = Geometry::rectangle;
    int side_sites = 128;       // L, number of site rows
    double aspect = 1.0;
    double split = 0.5;
    double occupation_p = 0.5;
    long trials = 100000;
    std::uint64_t seed = 1;
    int workers = 0;            // 0 = hardware concurrency
    bool square_bond = false;   // square-lattice bond variant (rectangle only)
};

struct CrossingEstimate {
    Observable observable = Observable::horizontal;
    double mean = 0.0;
    double std_error = 0.0;     // sample standard deviation / sqrt(trials)
    long trials = 0;
    std::uint64_t digest = 0;   // order-independent hash of per-trial outcomes
};

// ---------------------------------------------------------------------------
// Counter-based RNG (Philox 4x32, 10 rounds)
// ---------------------------------------------------------------------------

// One 128-bit block per (counter, key) pair; pure function of its inputs, so
// any trial/site can be sampled in isolation and parallel scheduling cannot
// change the stream.
void philox4x32(const std::uint32_t counter[4], const std::uint32_t key[2],
                std::uint32_t out[4]);

// ---------------------------------------------------------------------------
// Lattice geometry
// ---------------------------------------------------------------------------

// Site (i, j) sits at physical position (i + j/2, j*sqrt(3)/2); its six
// neighbors are offset by (+-1,0), (0,+-1), (+1,-1), (-1,+1).
//
// Segments are the geometry's boundary arcs, indexed in lexicographic name
// order; a boundary site on two arcs (a corner or split point) belongs to
// the earlier one. The isosceles geometry glues its two equal edges together
// by arc-length pairing (the pair becomes one site), leaving the base as the
// only boundary; the two sites nearest the marked apex stay unglued and the
// apex itself is not a percolation site.
struct Lattice {
    int nx = 0, ny = 0;                      // index-grid bounds
    std::vector<int> canon;                  // nx*ny -> site index, -1 outside
    std::vector<std::pair<int, int>> coords; // site index -> (i, j)
    std::vector<int> adj_off, adj;           // CSR adjacency over sites
    std::vector<std::int8_t> segment;        // site -> segment index, -1 interior
    std::vector<std::string> segment_names;
    int h_seg_a = -1, h_seg_b = -1;          // horizontal-crossing segment pair
    std::vector<std::uint8_t> wired;         // sites held open by fiat
    std::vector<int> apex_adjacent;          // probe sites next to the apex
    std::vector<std::pair<int, int>> bonds;  // square_bond: site index pairs
    int left_col = 0, right_col = 0;         // square_bond: column x-extents

    static Lattice build(const LatticeRun& run);

    int sites() const { return static_cast<int>(coords.size()); }
    int site_at(int i, int j) const {
        return (i >= 0 && i < nx && j >= 0 && j < ny) ? canon[j * nx + i] : -1;
    }
};

// ---------------------------------------------------------------------------
// Cluster machinery
// ---------------------------------------------------------------------------

struct UnionFind {
    std::vector<int> parent;
    std::vector<std::uint8_t> rank_of;

    explicit UnionFind(int n) { reset(n); }
    void reset(int n);
    int find(int x);
    void unite(int a, int b);
};

// Per-worker scratch buffers, reusable across trials.
struct Workspace {
    std::vector<std::uint8_t> open;
    UnionFind uf{0};
    std::vector<std::uint8_t> root_mask;
    std::vector<int> touched;
    std::vector<int> queue;
};

struct TrialOutcome {
    bool horizontal = false;
    bool horizontal_vertical = false;
    int cluster_count = 0;
    bool surround = false;
};

// Fill per-site open flags for one trial from the keyed RNG; wired sites are
// forced open afterwards.
void sample_sites(const Lattice& lat, const LatticeRun& run, long trial,
                  std::vector<std::uint8_t>& open);

// Observables on an explicit configuration (open[site] in {0,1}).
bool crossing_h(const Lattice& lat, const std::vector<std::uint8_t>& open);
bool crossing_hv(const Lattice& lat, const std::vector<std::uint8_t>& open);
int crossing_count(const Lattice& lat, const std::vector<std::uint8_t>& open);

// True iff the apex lies inside the hull of the open cluster grown from the
// wired arc: every lattice path from the apex probes to the free arc passes
// through that cluster. Open sites not attached to the wired arc do not
// block the escape; they are not part of the hull.
bool surrounded(const Lattice& lat, const std::vector<std::uint8_t>& open);

// Flood-fill cluster labels (-1 on closed sites); independent oracle for the
// union-find partition.
std::vector<int> cluster_labels(const Lattice& lat,
                                const std::vector<std::uint8_t>& open);

// Sample one trial and evaluate every observable the geometry supports.
TrialOutcome evaluate_trial(const Lattice& lat, const LatticeRun& run,
                            long trial, Workspace& ws);

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

// Runs config.trials independent trials and aggregates each supported
// observable: {horizontal, horizontal_vertical, cluster_count} for the
// rectangle and equilateral triangle, {surround} for the glued isosceles
// triangle, {horizontal} for the square-bond variant.
// Throws std::invalid_argument on config violations.
std::vector<CrossingEstimate> run(const LatticeRun& config);

} // namespace percross::percsim
