#pragma once

#include <complex>

namespace k3e {

using Complex = std::complex<double>;

}  // namespace k3e
