#include "percross/percsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

namespace percross::percsim {

namespace {

constexpr long kChunk = 256; // trials claimed per worker grab

// Geometry feasibility, checked by Lattice::build so tests can assemble
// small hand-built grids; the Monte Carlo driver enforces the stricter
// run-scale invariants on top.
void validate_geometry(const LatticeRun& run) {
    if (run.side_sites < 2) throw std::invalid_argument("LatticeRun: side_sites must be >= 2");
    if (run.geometry == Geometry::rectangle) {
        if (!(run.aspect > 0.0)) throw std::invalid_argument("LatticeRun: aspect must be positive");
    } else {
        if (run.square_bond)
            throw std::invalid_argument("LatticeRun: square_bond applies to the rectangle only");
        if (!(run.split > 0.0 && run.split < 1.0))
            throw std::invalid_argument("LatticeRun: split must lie in (0,1)");
    }
}

void validate(const LatticeRun& run) {
    validate_geometry(run);
    if (run.side_sites < 8) throw std::invalid_argument("LatticeRun: side_sites must be >= 8");
    if (!(run.occupation_p > 0.0 && run.occupation_p < 1.0))
        throw std::invalid_argument("LatticeRun: occupation_p must lie in (0,1)");
    if (run.trials < 1) throw std::invalid_argument("LatticeRun: trials must be positive");
    if (run.workers < 0) throw std::invalid_argument("LatticeRun: workers must be >= 0");
}

constexpr int kOffsets[6][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};

// Collect a deduplicated CSR adjacency from the canonical-index grid. The
// scan runs over grid positions rather than sites so that a glued position's
// neighbors attach to its canonical site.
void build_adjacency(Lattice& lat) {
    int n = lat.sites();
    lat.adj_off.assign(n + 1, 0);
    std::vector<std::vector<int>> nbr(n);
    for (int j = 0; j < lat.ny; ++j)
        for (int i = 0; i < lat.nx; ++i) {
            int u = lat.canon[j * lat.nx + i];
            if (u < 0) continue;
            for (const auto& d : kOffsets) {
                int v = lat.site_at(i + d[0], j + d[1]);
                if (v >= 0 && v != u) nbr[u].push_back(v);
            }
        }
    for (int u = 0; u < n; ++u) {
        std::sort(nbr[u].begin(), nbr[u].end());
        nbr[u].erase(std::unique(nbr[u].begin(), nbr[u].end()), nbr[u].end());
        lat.adj_off[u + 1] = lat.adj_off[u] + static_cast<int>(nbr[u].size());
    }
    lat.adj.reserve(lat.adj_off[n]);
    for (int u = 0; u < n; ++u) lat.adj.insert(lat.adj.end(), nbr[u].begin(), nbr[u].end());
}

uint32_t open_threshold(double p) {
    long long t = std::llround(p * 4294967296.0);
    t = std::max(1ll, std::min(t, 4294967295ll));
    return static_cast<std::uint32_t>(t);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace

// ---------------------------------------------------------------------------
// Philox
// ---------------------------------------------------------------------------

void philox4x32(const std::uint32_t counter[4], const std::uint32_t key[2],
                std::uint32_t out[4]) {
    std::uint32_t c0 = counter[0], c1 = counter[1], c2 = counter[2], c3 = counter[3];
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        if (round) {
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        std::uint64_t p0 = 0xD2511F53ull * c0;
        std::uint64_t p1 = 0xCD9E8D57ull * c2;
        std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
        std::uint32_t n1 = static_cast<std::uint32_t>(p1);
        std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
        std::uint32_t n3 = static_cast<std::uint32_t>(p0);
        c0 = n0; c1 = n1; c2 = n2; c3 = n3;
    }
    out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3;
}

// ---------------------------------------------------------------------------
// Lattice construction
// ---------------------------------------------------------------------------

Lattice Lattice::build(const LatticeRun& run) {
    validate_geometry(run);
    Lattice lat;
    int L = run.side_sites;

    if (run.geometry == Geometry::rectangle && run.square_bond) {
        // plain square grid; the percolation variables are the bonds
        int cols = std::max(2, static_cast<int>(std::lround(run.aspect * L)));
        lat.nx = cols;
        lat.ny = L;
        lat.canon.assign(static_cast<size_t>(cols) * L, -1);
        lat.segment_names = {"left", "right"};
        lat.h_seg_a = 0;
        lat.h_seg_b = 1;
        for (int j = 0; j < L; ++j)
            for (int i = 0; i < cols; ++i) {
                lat.canon[j * cols + i] = static_cast<int>(lat.coords.size());
                lat.coords.emplace_back(i, j);
                lat.segment.push_back(i == 0 ? 0 : (i == cols - 1 ? 1 : -1));
            }
        for (int j = 0; j < L; ++j)
            for (int i = 0; i + 1 < cols; ++i)
                lat.bonds.emplace_back(lat.canon[j * cols + i], lat.canon[j * cols + i + 1]);
        for (int j = 0; j + 1 < L; ++j)
            for (int i = 0; i < cols; ++i)
                lat.bonds.emplace_back(lat.canon[j * cols + i], lat.canon[(j + 1) * cols + i]);
        lat.left_col = 0;
        lat.right_col = cols - 1;
        lat.adj_off.assign(lat.sites() + 1, 0);
        return lat;
    }

    if (run.geometry == Geometry::rectangle) {
        // L rows of ncols sites; row start indices stagger so the left and
        // right edges zigzag around vertical lines, width ncols cells against
        // height L*sqrt(3)/2
        int ncols = static_cast<int>(std::lround(run.aspect * L * std::sqrt(3.0) / 2.0));
        if (ncols < 2) throw std::invalid_argument("LatticeRun: aspect too small for this L");
        int base = L / 2;
        lat.nx = base + ncols;
        lat.ny = L;
        lat.canon.assign(static_cast<size_t>(lat.nx) * lat.ny, -1);
        lat.segment_names = {"bottom", "left", "right", "top"};
        lat.h_seg_a = 1;
        lat.h_seg_b = 2;
        for (int j = 0; j < L; ++j) {
            int i0 = base - (j + 1) / 2;
            for (int k = 0; k < ncols; ++k) {
                int i = i0 + k;
                lat.canon[j * lat.nx + i] = static_cast<int>(lat.coords.size());
                lat.coords.emplace_back(i, j);
                int seg = -1;
                auto consider = [&seg](int s) { if (seg < 0 || s < seg) seg = s; };
                if (j == 0) consider(0);
                if (k == 0) consider(1);
                if (k == ncols - 1) consider(2);
                if (j == L - 1) consider(3);
                lat.segment.push_back(static_cast<std::int8_t>(seg));
            }
        }
        build_adjacency(lat);
        return lat;
    }

    if (run.geometry == Geometry::equilateral_triangle) {
        // exact lattice triangle: i, j >= 0, i + j <= L-1; vertices
        // B = (0,0), C = (L-1,0), apex A = (0,L-1); the base splits at
        // fraction t into Bw and wC, ties to the lexicographically earlier arc
        lat.nx = L;
        lat.ny = L;
        lat.canon.assign(static_cast<size_t>(L) * L, -1);
        lat.segment_names = {"AB", "Bw", "CA", "wC"};
        lat.h_seg_a = 1;
        lat.h_seg_b = 2;
        for (int j = 0; j < L; ++j)
            for (int i = 0; i + j <= L - 1; ++i) {
                lat.canon[j * L + i] = static_cast<int>(lat.coords.size());
                lat.coords.emplace_back(i, j);
                int seg = -1;
                auto consider = [&seg](int s) { if (seg < 0 || s < seg) seg = s; };
                if (i == 0) consider(0);
                if (j == 0) consider(i <= run.split * (L - 1) + 1e-9 ? 1 : 3);
                if (i + j == L - 1) consider(2);
                lat.segment.push_back(static_cast<std::int8_t>(seg));
            }
        build_adjacency(lat);
        return lat;
    }

    // isosceles_schramm: base 3m cells along j = 0, legs at angle pi/6 meeting
    // at the apex (m, m); leg sites (k,k) and (3m-2k, k) are one glued site
    // for k <= m-2, the apex is excluded, and only the base carries segments.
    int m = static_cast<int>(std::lround((L - 1) / 3.0));
    if (m < 2) throw std::invalid_argument("LatticeRun: side_sites too small for this geometry");
    int W = 3 * m;
    lat.nx = W + 1;
    lat.ny = m + 1;
    lat.canon.assign(static_cast<size_t>(lat.nx) * lat.ny, -1);
    lat.segment_names = {"B'w", "wC'"};
    for (int j = 0; j <= m; ++j)
        for (int i = j; i <= W - 2 * j; ++i) {
            if (i == m && j == m) continue;               // marked apex
            if (j <= m - 2 && i == W - 2 * j && i != j) continue; // glued twin
            lat.canon[j * lat.nx + i] = static_cast<int>(lat.coords.size());
            lat.coords.emplace_back(i, j);
            int seg = -1;
            if (j == 0) seg = (i <= run.split * W + 1e-9) ? 0 : 1;
            lat.segment.push_back(static_cast<std::int8_t>(seg));
        }
    for (int k = 0; k <= m - 2; ++k)
        lat.canon[k * lat.nx + (W - 2 * k)] = lat.canon[k * lat.nx + k];
    build_adjacency(lat);
    lat.wired.assign(lat.sites(), 0);
    for (int u = 0; u < lat.sites(); ++u)
        if (lat.segment[u] == 0) lat.wired[u] = 1;
    for (const auto& d : kOffsets) {
        int v = lat.site_at(m + d[0], m + d[1]);
        if (v >= 0) lat.apex_adjacent.push_back(v);
    }
    std::sort(lat.apex_adjacent.begin(), lat.apex_adjacent.end());
    lat.apex_adjacent.erase(std::unique(lat.apex_adjacent.begin(), lat.apex_adjacent.end()),
                            lat.apex_adjacent.end());
    return lat;
}

// ---------------------------------------------------------------------------
// Union-find
// ---------------------------------------------------------------------------

void UnionFind::reset(int n) {
    parent.resize(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    rank_of.assign(n, 0);
}

int UnionFind::find(int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]]; // path halving
        x = parent[x];
    }
    return x;
}

void UnionFind::unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_of[a] < rank_of[b]) std::swap(a, b);
    parent[b] = a;
    if (rank_of[a] == rank_of[b]) ++rank_of[a];
}

// ---------------------------------------------------------------------------
// Per-trial evaluation
// ---------------------------------------------------------------------------

void sample_sites(const Lattice& lat, const LatticeRun& run, long trial,
                  std::vector<std::uint8_t>& open) {
    int n = lat.bonds.empty() ? lat.sites() : static_cast<int>(lat.bonds.size());
    open.resize(n);
    const std::uint32_t thr = open_threshold(run.occupation_p);
    const std::uint32_t key[2] = {static_cast<std::uint32_t>(run.seed),
                                  static_cast<std::uint32_t>(run.seed >> 32)};
    std::uint32_t ctr[4] = {static_cast<std::uint32_t>(trial),
                            static_cast<std::uint32_t>(static_cast<std::uint64_t>(trial) >> 32),
                            0, 0};
    std::uint32_t r[4];
    for (int s = 0; s < n; s += 4) {
        ctr[2] = static_cast<std::uint32_t>(s >> 2);
        philox4x32(ctr, key, r);
        int lanes = std::min(4, n - s);
        for (int lane = 0; lane < lanes; ++lane)
            open[s + lane] = r[lane] < thr ? 1 : 0;
    }
    if (!lat.wired.empty())
        for (int u = 0; u < n; ++u)
            if (lat.wired[u]) open[u] = 1;
}

namespace {

void build_clusters(const Lattice& lat, const std::vector<std::uint8_t>& open,
                    UnionFind& uf) {
    uf.reset(lat.sites());
    if (!lat.bonds.empty()) {
        for (std::size_t b = 0; b < lat.bonds.size(); ++b)
            if (open[b]) uf.unite(lat.bonds[b].first, lat.bonds[b].second);
        return;
    }
    for (int u = 0; u < lat.sites(); ++u) {
        if (!open[u]) continue;
        for (int k = lat.adj_off[u]; k < lat.adj_off[u + 1]; ++k) {
            int v = lat.adj[k];
            if (v > u && open[v]) uf.unite(u, v);
        }
    }
}

// Per-root bitmask of touched boundary segments; roots seen get listed in
// ws.touched. In the bond variant every site belongs to a cluster.
void segment_masks(const Lattice& lat, const std::vector<std::uint8_t>& open,
                   Workspace& ws) {
    ws.root_mask.assign(lat.sites(), 0);
    ws.touched.clear();
    const bool site_model = lat.bonds.empty();
    for (int u = 0; u < lat.sites(); ++u) {
        if (lat.segment[u] < 0) continue;
        if (site_model && !open[u]) continue;
        int r = ws.uf.find(u);
        if (ws.root_mask[r] == 0) ws.touched.push_back(r);
        ws.root_mask[r] |= static_cast<std::uint8_t>(1u << lat.segment[u]);
    }
}

// The hull of the cluster grown from the wired arc is the set of sites that
// cannot reach the free arc without entering that cluster. Escape = the apex
// probes lie outside the hull. (A path blocked only by open sites from some
// unattached cluster still escapes: such sites are not part of the hull.)
bool hull_escape(const Lattice& lat, const std::vector<std::uint8_t>& open,
                 std::vector<int>& queue, std::vector<std::uint8_t>& marks) {
    marks.assign(lat.sites(), 0);
    queue.clear();
    // grow the wired-arc cluster; wired sites count open by fiat
    for (int u = 0; u < lat.sites(); ++u)
        if (lat.wired[u]) {
            marks[u] = 1;
            queue.push_back(u);
        }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int u = queue[head];
        for (int k = lat.adj_off[u]; k < lat.adj_off[u + 1]; ++k) {
            int v = lat.adj[k];
            if (!marks[v] && (open[v] || lat.wired[v])) {
                marks[v] = 1;
                queue.push_back(v);
            }
        }
    }
    queue.clear();
    for (int u : lat.apex_adjacent)
        if (!marks[u]) {
            marks[u] = 2;
            queue.push_back(u);
        }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int u = queue[head];
        if (lat.segment[u] == 1) return true; // reached the free arc
        for (int k = lat.adj_off[u]; k < lat.adj_off[u + 1]; ++k) {
            int v = lat.adj[k];
            if (!marks[v]) {
                marks[v] = 2;
                queue.push_back(v);
            }
        }
    }
    return false;
}

} // namespace

bool crossing_h(const Lattice& lat, const std::vector<std::uint8_t>& open) {
    if (lat.h_seg_a < 0)
        throw std::invalid_argument("crossing_h: geometry has no crossing pair");
    Workspace ws;
    build_clusters(lat, open, ws.uf);
    segment_masks(lat, open, ws);
    const std::uint8_t need = static_cast<std::uint8_t>((1u << lat.h_seg_a) | (1u << lat.h_seg_b));
    for (int r : ws.touched)
        if ((ws.root_mask[r] & need) == need) return true;
    return false;
}

bool crossing_hv(const Lattice& lat, const std::vector<std::uint8_t>& open) {
    if (lat.segment_names.size() < 4)
        throw std::invalid_argument("crossing_hv: geometry has fewer than four segments");
    Workspace ws;
    build_clusters(lat, open, ws.uf);
    segment_masks(lat, open, ws);
    for (int r : ws.touched)
        if (ws.root_mask[r] == 0x0f) return true;
    return false;
}

int crossing_count(const Lattice& lat, const std::vector<std::uint8_t>& open) {
    if (lat.h_seg_a < 0)
        throw std::invalid_argument("crossing_count: geometry has no crossing pair");
    Workspace ws;
    build_clusters(lat, open, ws.uf);
    segment_masks(lat, open, ws);
    const std::uint8_t need = static_cast<std::uint8_t>((1u << lat.h_seg_a) | (1u << lat.h_seg_b));
    int count = 0;
    for (int r : ws.touched)
        if ((ws.root_mask[r] & need) == need) ++count;
    return count;
}

bool surrounded(const Lattice& lat, const std::vector<std::uint8_t>& open) {
    if (lat.apex_adjacent.empty())
        throw std::invalid_argument("surrounded: geometry has no marked apex");
    std::vector<int> queue;
    std::vector<std::uint8_t> marks;
    return !hull_escape(lat, open, queue, marks);
}

std::vector<int> cluster_labels(const Lattice& lat,
                                const std::vector<std::uint8_t>& open) {
    int n = lat.sites();
    std::vector<int> label(n, -1);
    std::vector<int> queue;
    if (!lat.bonds.empty()) {
        // flood across open bonds; every site gets a label
        std::vector<std::vector<int>> nbr(n);
        for (std::size_t b = 0; b < lat.bonds.size(); ++b)
            if (open[b]) {
                nbr[lat.bonds[b].first].push_back(lat.bonds[b].second);
                nbr[lat.bonds[b].second].push_back(lat.bonds[b].first);
            }
        int next = 0;
        for (int s = 0; s < n; ++s) {
            if (label[s] >= 0) continue;
            label[s] = next;
            queue.assign(1, s);
            while (!queue.empty()) {
                int u = queue.back();
                queue.pop_back();
                for (int v : nbr[u])
                    if (label[v] < 0) {
                        label[v] = next;
                        queue.push_back(v);
                    }
            }
            ++next;
        }
        return label;
    }
    int next = 0;
    for (int s = 0; s < n; ++s) {
        if (!open[s] || label[s] >= 0) continue;
        label[s] = next;
        queue.assign(1, s);
        while (!queue.empty()) {
            int u = queue.back();
            queue.pop_back();
            for (int k = lat.adj_off[u]; k < lat.adj_off[u + 1]; ++k) {
                int v = lat.adj[k];
                if (open[v] && label[v] < 0) {
                    label[v] = next;
                    queue.push_back(v);
                }
            }
        }
        ++next;
    }
    return label;
}

TrialOutcome evaluate_trial(const Lattice& lat, const LatticeRun& run, long trial,
                            Workspace& ws) {
    sample_sites(lat, run, trial, ws.open);
    TrialOutcome out;
    if (run.geometry == Geometry::isosceles_schramm) {
        out.surround = !hull_escape(lat, ws.open, ws.queue, ws.root_mask);
        return out;
    }
    build_clusters(lat, ws.open, ws.uf);
    segment_masks(lat, ws.open, ws);
    const std::uint8_t need = static_cast<std::uint8_t>((1u << lat.h_seg_a) | (1u << lat.h_seg_b));
    for (int r : ws.touched) {
        std::uint8_t m = ws.root_mask[r];
        if ((m & need) == need) {
            out.horizontal = true;
            ++out.cluster_count;
        }
        if (!run.square_bond && m == 0x0f) out.horizontal_vertical = true;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

std::vector<CrossingEstimate> run(const LatticeRun& config) {
    validate(config);
    const Lattice lat = Lattice::build(config);
    const long trials = config.trials;
    int workers = config.workers;
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<int>(std::min<long>(workers, trials));

    struct Acc {
        long long h = 0, hv = 0, n = 0, n2 = 0, surr = 0;
        std::uint64_t digest = 0;
    };
    std::vector<Acc> accs(workers);
    std::atomic<long> next{0};

    auto body = [&](int w) {
        Workspace ws;
        Acc& a = accs[w];
        for (;;) {
            long t0 = next.fetch_add(kChunk, std::memory_order_relaxed);
            if (t0 >= trials) break;
            long t1 = std::min(trials, t0 + kChunk);
            for (long t = t0; t < t1; ++t) {
                TrialOutcome o = evaluate_trial(lat, config, t, ws);
                a.h += o.horizontal;
                a.hv += o.horizontal_vertical;
                a.n += o.cluster_count;
                a.n2 += static_cast<long long>(o.cluster_count) * o.cluster_count;
                a.surr += o.surround;
                std::uint64_t pack = static_cast<std::uint64_t>(o.horizontal) |
                                     (static_cast<std::uint64_t>(o.horizontal_vertical) << 1) |
                                     (static_cast<std::uint64_t>(o.surround) << 2) |
                                     (static_cast<std::uint64_t>(o.cluster_count) << 3);
                a.digest ^= splitmix64(splitmix64(static_cast<std::uint64_t>(t)) ^ pack);
            }
        }
    };

    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
        for (auto& th : pool) th.join();
    }

    Acc total;
    for (const Acc& a : accs) {
        total.h += a.h;
        total.hv += a.hv;
        total.n += a.n;
        total.n2 += a.n2;
        total.surr += a.surr;
        total.digest ^= a.digest;
    }

    auto estimate = [&](Observable obs, long long sum, long long sumsq) {
        CrossingEstimate e;
        e.observable = obs;
        e.trials = trials;
        e.digest = total.digest;
        e.mean = static_cast<double>(sum) / static_cast<double>(trials);
        double var = 0.0;
        if (trials > 1) {
            var = (static_cast<double>(sumsq) - trials * e.mean * e.mean) /
                  static_cast<double>(trials - 1);
            var = std::max(0.0, var);
        }
        e.std_error = std::sqrt(var / static_cast<double>(trials));
        return e;
    };

    std::vector<CrossingEstimate> out;
    if (config.geometry == Geometry::isosceles_schramm) {
        out.push_back(estimate(Observable::surround, total.surr, total.surr));
    } else if (config.square_bond) {
        out.push_back(estimate(Observable::horizontal, total.h, total.h));
    } else {
        out.push_back(estimate(Observable::horizontal, total.h, total.h));
        out.push_back(estimate(Observable::horizontal_vertical, total.hv, total.hv));
        out.push_back(estimate(Observable::cluster_count, total.n, total.n2));
    }
    return out;
}

} // namespace percross::percsim
