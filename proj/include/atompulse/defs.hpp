#pragma once

#include <complex>
#include <vector>

namespace atompulse {

using cplx = std::complex<double>;
using VecC = std::vector<cplx>;

}  // namespace atompulse
