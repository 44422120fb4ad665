// Neumaier compensated summation. Deep synthesis sums millions of tiny
// masses; plain accumulation loses the 1e-12 identities the tests pin.

#pragma once

#include <cmath>

namespace mispolar {

struct Accum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

}  // namespace mispolar
