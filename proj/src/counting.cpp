#include "lrl/counting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "lrl/body_spec.hpp"
#include "lrl/error.hpp"
#include "lrl/parallel.hpp"

namespace lrl {
namespace {

constexpr double kMargin = 1e-9;

struct Range {
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    std::int64_t size() const noexcept { return hi >= lo ? hi - lo + 1 : 0; }
};

// Integers m with |m - center| <= half_width.
Range integer_range(double center, double half_width_sq) {
    if (!(half_width_sq >= 0.0)) return {};
    const double w = std::sqrt(half_width_sq);
    return {static_cast<std::int64_t>(std::ceil(center - w)), static_cast<std::int64_t>(std::floor(center + w))};
}

double outer_radius(const StarBody& body, double t) { return body.circumradius() * t * (1.0 + kMargin); }

void check_dilation(double t, const char* what) {
    if (!std::isfinite(t) || t < 0.0) throw DomainError(std::string(what) + " must be finite and non-negative");
}

// Calls visit(m0, m1, m2_range) for each column of the ball |m - x| <= radius,
// restricted to outermost coordinate m0.
template <class F>
void for_each_column_in_slab(int k, const Vec3& x, double radius, std::int64_t m0, F&& visit) {
    const double r2 = radius * radius;
    const double d0 = static_cast<double>(m0) - x[0];
    const double rem0 = r2 - d0 * d0;
    if (k == 2) {
        visit(m0, std::int64_t{0}, integer_range(x[1], rem0));
        return;
    }
    const Range r1 = integer_range(x[1], rem0);
    for (std::int64_t m1 = r1.lo; m1 <= r1.hi; ++m1) {
        const double d1 = static_cast<double>(m1) - x[1];
        visit(m0, m1, integer_range(x[2], rem0 - d1 * d1));
    }
}

}  // namespace

std::uint64_t candidate_count(const StarBody& body, const RigidMotion& motion, double t) {
    check_dilation(t, "dilation");
    const int k = body.dimension();
    const Vec3& x = motion.translation;
    const double radius = outer_radius(body, t);
    const Range r0 = integer_range(x[0], radius * radius);
    std::uint64_t total = 0;
    for (std::int64_t m0 = r0.lo; m0 <= r0.hi; ++m0)
        for_each_column_in_slab(k, x, radius, m0,
                                [&](std::int64_t, std::int64_t, Range r) { total += r.size(); });
    return total;
}

EntrySpectrum entry_spectrum(const StarBody& body, const RigidMotion& motion, double t_max, std::uint64_t budget) {
    check_dilation(t_max, "t_max");
    if (motion.dimension() != body.dimension()) throw DomainError("motion and body dimensions differ");
    const std::uint64_t needed = candidate_count(body, motion, t_max);
    if (needed > budget) throw BudgetExceeded(needed, budget);

    const int k = body.dimension();
    const Vec3& x = motion.translation;
    const double radius = outer_radius(body, t_max);
    const Range r0 = integer_range(x[0], radius * radius);

    // Contiguous slabs of m0; chunk boundaries do not depend on the worker
    // count, and the sorted result is the same multiset either way.
    const std::size_t n_slabs = static_cast<std::size_t>(r0.size());
    const std::size_t n_chunks = std::min<std::size_t>(n_slabs, std::max(1u, worker_count()) * 4);
    std::vector<std::vector<double>> buffers(n_chunks);

    body.visit([&](const auto& shape) {
        parallel_for(n_chunks, [&](std::size_t c) {
            const std::int64_t first = r0.lo + static_cast<std::int64_t>(n_slabs * c / n_chunks);
            const std::int64_t last = r0.lo + static_cast<std::int64_t>(n_slabs * (c + 1) / n_chunks);
            auto& out = buffers[c];
            for (std::int64_t m0 = first; m0 < last; ++m0) {
                for_each_column_in_slab(k, x, radius, m0, [&](std::int64_t a, std::int64_t b, Range r) {
                    for (std::int64_t m = r.lo; m <= r.hi; ++m) {
                        const IVec3 lattice = k == 2 ? IVec3{a, m, 0} : IVec3{a, b, m};
                        const double g = shape(inverse_motion_apply(motion, lattice));
                        if (g <= t_max) out.push_back(g);
                    }
                });
            }
            std::sort(out.begin(), out.end());
        });
    });

    EntrySpectrum spec;
    spec.body_id = format_body_spec(body);
    spec.motion = motion;
    spec.k = k;
    spec.t_max = t_max;
    std::size_t total = 0;
    for (const auto& b : buffers) total += b.size();
    spec.radii.reserve(total);
    std::vector<std::size_t> bounds{0};
    for (auto& b : buffers) {
        spec.radii.insert(spec.radii.end(), b.begin(), b.end());
        bounds.push_back(spec.radii.size());
        std::vector<double>().swap(b);
    }
    // Pairwise merge of the sorted runs.
    for (std::size_t width = 1; width < bounds.size() - 1; width *= 2) {
        for (std::size_t i = 0; i + width < bounds.size() - 1; i += 2 * width) {
            const std::size_t mid = bounds[i + width];
            const std::size_t end = bounds[std::min(i + 2 * width, bounds.size() - 1)];
            std::inplace_merge(spec.radii.begin() + bounds[i], spec.radii.begin() + mid, spec.radii.begin() + end);
        }
    }
    return spec;
}

std::uint64_t count_at(const EntrySpectrum& spectrum, double t) {
    if (std::isnan(t)) throw DomainError("count_at: t is NaN");
    if (t > spectrum.t_max)
        throw CoverageError("spectrum covers t <= " + format_double(spectrum.t_max) + ", requested " +
                            format_double(t));
    if (t < 0.0) return 0;
    return static_cast<std::uint64_t>(std::upper_bound(spectrum.radii.begin(), spectrum.radii.end(), t) -
                                      spectrum.radii.begin());
}

std::uint64_t lattice_count(const StarBody& body, const RigidMotion& motion, double T, std::uint64_t budget) {
    check_dilation(T, "T");
    if (motion.dimension() != body.dimension()) throw DomainError("motion and body dimensions differ");
    const std::uint64_t needed = candidate_count(body, motion, T);
    if (needed > budget) throw BudgetExceeded(needed, budget);

    const int k = body.dimension();
    const Vec3& x = motion.translation;
    const double radius = outer_radius(body, T);
    const double inner = body.inradius() * T * (1.0 - kMargin);
    const double inner2 = inner * inner;
    const Range r0 = integer_range(x[0], radius * radius);

    std::uint64_t count = 0;
    body.visit([&](const auto& shape) {
        auto test = [&](std::int64_t a, std::int64_t b, std::int64_t m) {
            const IVec3 lattice = k == 2 ? IVec3{a, m, 0} : IVec3{a, b, m};
            return shape(inverse_motion_apply(motion, lattice)) <= T;
        };
        for (std::int64_t m0 = r0.lo; m0 <= r0.hi; ++m0) {
            for_each_column_in_slab(k, x, radius, m0, [&](std::int64_t a, std::int64_t b, Range outer_r) {
                if (outer_r.size() == 0) return;
                const double d0 = static_cast<double>(a) - x[0];
                double rem = inner2 - d0 * d0;
                if (k == 3) {
                    const double d1 = static_cast<double>(b) - x[1];
                    rem -= d1 * d1;
                }
                Range in = integer_range(x[k - 1], rem);
                in.lo = std::max(in.lo, outer_r.lo);
                in.hi = std::min(in.hi, outer_r.hi);
                if (in.size() == 0) {
                    for (std::int64_t m = outer_r.lo; m <= outer_r.hi; ++m) count += test(a, b, m);
                    return;
                }
                count += static_cast<std::uint64_t>(in.size());
                for (std::int64_t m = outer_r.lo; m < in.lo; ++m) count += test(a, b, m);
                for (std::int64_t m = in.hi + 1; m <= outer_r.hi; ++m) count += test(a, b, m);
            });
        }
    });
    return count;
}

std::uint64_t boundary_ties(const EntrySpectrum& spectrum, double t, double rel) {
    const double lo = t * (1.0 - rel), hi = std::min(t * (1.0 + rel), spectrum.t_max);
    const auto first = std::lower_bound(spectrum.radii.begin(), spectrum.radii.end(), lo);
    const auto last = std::upper_bound(spectrum.radii.begin(), spectrum.radii.end(), hi);
    return last > first ? static_cast<std::uint64_t>(last - first) : 0;
}

// ---------------------------------------------------------------------------
// Binary dump

namespace {

constexpr char kMagic[8] = {'L', 'R', 'S', 'P', 'E', 'C', '1', '\0'};

template <class T>
void put_le(std::ostream& os, T v) {
    auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
    os.write(reinterpret_cast<const char*>(bits.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
    std::array<unsigned char, sizeof(T)> bits{};
    if (!is.read(reinterpret_cast<char*>(bits.data()), sizeof(T))) throw Error("truncated spectrum file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
    return std::bit_cast<T>(bits);
}

}  // namespace

void save_spectrum(const EntrySpectrum& spectrum, const std::filesystem::path& path) {
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open " + tmp.string() + " for writing");
        os.write(kMagic, sizeof kMagic);
        put_le<std::uint32_t>(os, static_cast<std::uint32_t>(spectrum.k));
        put_le<std::uint32_t>(os, 0);
        put_le<double>(os, spectrum.t_max);
        put_le<std::uint64_t>(os, spectrum.radii.size());
        if constexpr (std::endian::native == std::endian::little) {
            os.write(reinterpret_cast<const char*>(spectrum.radii.data()),
                     static_cast<std::streamsize>(spectrum.radii.size() * sizeof(double)));
        } else {
            for (double r : spectrum.radii) put_le<double>(os, r);
        }
        if (!os) throw Error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

EntrySpectrum load_spectrum(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path.string());
    char magic[8];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw Error(path.string() + " is not a spectrum dump (bad magic)");
    EntrySpectrum spec;
    spec.k = static_cast<int>(get_le<std::uint32_t>(is));
    if (spec.k != 2 && spec.k != 3) throw Error("spectrum dump has invalid dimension");
    get_le<std::uint32_t>(is);
    spec.t_max = get_le<double>(is);
    const auto count = get_le<std::uint64_t>(is);
    spec.motion = RigidMotion::identity(spec.k);
    spec.radii.resize(count);
    if constexpr (std::endian::native == std::endian::little) {
        if (!is.read(reinterpret_cast<char*>(spec.radii.data()), static_cast<std::streamsize>(count * sizeof(double))))
            throw Error("truncated spectrum file");
    } else {
        for (auto& r : spec.radii) r = get_le<double>(is);
    }
    if (!std::is_sorted(spec.radii.begin(), spec.radii.end())) throw Error("spectrum dump radii are not sorted");
    return spec;
}

}  // namespace lrl
