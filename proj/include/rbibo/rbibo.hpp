#pragma once

#include "rbibo/error.hpp"
#include "rbibo/quadrature.hpp"
#include "rbibo/density.hpp"
#include "rbibo/bounded_signal.hpp"
#include "rbibo/measure.hpp"
#include "rbibo/signal.hpp"
#include "rbibo/dual_norm.hpp"
#include "rbibo/convolution.hpp"
#include "rbibo/stability.hpp"
#include "rbibo/spectrum.hpp"
#include "rbibo/dsl.hpp"
#include "rbibo/io.hpp"
