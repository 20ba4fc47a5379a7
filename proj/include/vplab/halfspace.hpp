#pragma once

#include "vplab/vec.hpp"

namespace vplab {

/// Closed halfspace {x : <normal, x> <= offset} with |normal| = 1.
struct Halfspace {
    Vec normal;
    double offset = 0.0;
};

} // namespace vplab
