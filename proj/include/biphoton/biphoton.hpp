#pragma once

// Umbrella header for the biphoton library.

#include "biphoton/bessel.hpp"
#include "biphoton/config_io.hpp"
#include "biphoton/core.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/fft.hpp"
#include "biphoton/mode_function.hpp"
#include "biphoton/oam.hpp"
#include "biphoton/quadrature.hpp"
#include "biphoton/schmidt.hpp"
#include "biphoton/sweep.hpp"
