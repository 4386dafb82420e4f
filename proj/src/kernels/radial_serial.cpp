#include <cmath>

#include "vslicer/errors.hpp"
#include "vslicer/kernels.hpp"

namespace vslicer::kernels {

void log2_extents_serial(const HalfspaceList& list, std::span<const double> rays, std::size_t count,
                         std::span<double> out) {
    const auto d = static_cast<std::size_t>(list.dim());
    if (rays.size() < count * d || out.size() < count) throw InputError("log2_extents_serial: buffer too small");
    for (std::size_t r = 0; r < count; ++r) {
        out[r] = std::log2(radial_extent(list, rays.subspan(r * d, d)));
    }
}

}  // namespace vslicer::kernels
