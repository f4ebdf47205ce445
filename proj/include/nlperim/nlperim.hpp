#ifndef NLPERIM_NLPERIM_HPP
#define NLPERIM_NLPERIM_HPP

#include "autocorr.hpp"
#include "constants.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "io.hpp"
#include "kernels.hpp"
#include "minimize.hpp"
#include "patterns.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "torus.hpp"
#include "verify.hpp"

#endif
