#include "entroflow/sde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <thread>

#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// strictly inside (0, 1)
double open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Counter-based normal pair: Box-Muller on hashes of (key, path, counter).
void normal_pair(std::uint64_t key, std::uint64_t path, std::uint64_t counter, double& z0, double& z1) {
    const std::uint64_t base = splitmix(key ^ splitmix(path ^ 0xD1B54A32D192ED03ULL) ^
                                        splitmix(counter ^ 0x8CB92BA72F3D8DD7ULL));
    const double u1 = open_unit(base);
    const double u2 = open_unit(splitmix(base ^ 0x2545F4914F6CDD1DULL));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    z0 = r * std::cos(a);
    z1 = r * std::sin(a);
}

unsigned thread_budget() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("ENTROFLOW_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return std::min(n, 8u);
}

constexpr std::uint64_t kStartCounter = ~std::uint64_t{0};
constexpr std::uint64_t kComponentCounter = ~std::uint64_t{1};

Point sample_start(const StartLaw& law, std::uint64_t key, std::uint64_t path, int dim) {
    const StartLaw::Component* comp = &law.components.front();
    if (law.components.size() > 1) {
        double total = 0.0;
        for (const auto& c : law.components) total += c.weight;
        const double u = open_unit(splitmix(key ^ splitmix(path ^ kComponentCounter))) * total;
        double acc = 0.0;
        for (const auto& c : law.components) {
            acc += c.weight;
            if (u <= acc) {
                comp = &c;
                break;
            }
        }
    }
    Point x = comp->mean;
    if (comp->variance > 0.0) {
        double z0, z1;
        normal_pair(key, path, kStartCounter, z0, z1);
        const double sd = std::sqrt(comp->variance);
        x[0] += sd * z0;
        if (dim == 2) x[1] += sd * z1;
    }
    return x;
}

}  // namespace

StartLaw StartLaw::delta(const Point& x) { return StartLaw{{Component{1.0, x, 0.0}}}; }

StartLaw StartLaw::gaussian(const Point& mean, double variance) {
    if (!(variance > 0.0)) throw InputError("StartLaw::gaussian: variance must be positive");
    return StartLaw{{Component{1.0, mean, variance}}};
}

StartLaw StartLaw::mixture(std::vector<Component> components) {
    if (components.empty()) throw InputError("StartLaw::mixture: needs at least one component");
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.weight >= 0.0) || !(c.variance >= 0.0))
            throw InputError("StartLaw::mixture: bad component");
        total += c.weight;
    }
    if (!(total > 0.0)) throw InputError("StartLaw::mixture: weights sum to zero");
    return StartLaw{std::move(components)};
}

PathEnsemble simulate(const ProblemSpec& spec, const StartLaw& start, double r, double t,
                      std::size_t count, double dt, std::uint64_t seed) {
    if (!(dt > 0.0)) throw InputError("simulate: dt must be positive");
    if (count < 1) throw InputError("simulate: count must be >= 1");
    if (!(t >= r)) throw InputError("simulate: requires r <= t");
    if (start.components.empty()) throw InputError("simulate: empty start law");

    const int dim = spec.grid.dimension;
    const double span = t - r;
    const auto steps = span > 0.0 ? static_cast<std::size_t>(std::ceil(span / dt - 1e-12)) : 0;

    PathEnsemble ens;
    ens.terminal.resize(count);
    ens.dimension = dim;
    ens.seed = seed;
    ens.dt = dt;
    ens.start_time = r;
    ens.end_time = t;
    ens.start = start;

    const std::uint64_t key = splitmix(seed ^ 0x6A09E667F3BCC909ULL);

    const auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            Point x = sample_start(start, key, p, dim);
            double tau = r;
            for (std::size_t k = 0; k < steps; ++k) {
                const double h = std::min(dt, t - tau);
                const Point b = spec.drift.eval(tau, x);
                for (int a = 0; a < dim; ++a) {
                    if (!std::isfinite(b[a]))
                        throw DivergenceError("simulate: non-finite drift", tau, k);
                }
                const double noise = std::sqrt(2.0 * spec.diffusion.kappa_at(tau) * h);
                double z0, z1;
                normal_pair(key, p, k, z0, z1);
                x[0] += b[0] * h + noise * z0;
                if (dim == 2) x[1] += b[1] * h + noise * z1;
                tau += h;
            }
            ens.terminal[p] = x;
        }
    };

    const unsigned workers = std::min<std::size_t>(thread_budget(), count);
    if (workers <= 1 || count < 1024) {
        run_range(0, count);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mutex;
        const std::size_t chunk = (count + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] {
                try {
                    run_range(begin, end);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }
    return ens;
}

HistogramResult empirical_density(const PathEnsemble& ensemble, const SpatialGrid& grid) {
    if (grid.dimension != ensemble.dimension)
        throw InputError("empirical_density: dimension mismatch");
    std::vector<double> counts(grid.cell_count(), 0.0);
    std::size_t in_box = 0, out_of_box = 0;

    for (const Point& x : ensemble.terminal) {
        bool inside = true;
        std::size_t idx[2] = {0, 0};
        for (int a = 0; a < grid.dimension; ++a) {
            const double rel = (x[a] - grid.min[a]) / grid.spacing(a);
            if (rel < 0.0 || x[a] > grid.max[a]) {
                inside = false;
                break;
            }
            idx[a] = std::min(static_cast<std::size_t>(rel), grid.n[a] - 1);
        }
        if (!inside) {
            ++out_of_box;
            continue;
        }
        counts[grid.index(idx[0], idx[1])] += 1.0;
        ++in_box;
    }
    if (in_box == 0) throw InputError("empirical_density: no samples inside the grid");

    const double norm = 1.0 / (static_cast<double>(in_box) * grid.cell_volume());
    for (double& c : counts) c *= norm;

    HistogramResult res{DensityGrid(grid, std::move(counts)), in_box, out_of_box, 0.0, false};
    res.out_fraction =
        static_cast<double>(out_of_box) / static_cast<double>(ensemble.terminal.size());
    res.coverage_warning = res.out_fraction > 1e-3;
    return res;
}

}  // namespace entroflow
