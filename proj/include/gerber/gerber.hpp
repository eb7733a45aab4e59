#pragma once

// Umbrella header: exact Gerstenhaber/BV machinery for Lie algebroids over
// the polynomial model Q[x_1..x_m].

#include "gerber/rational.hpp"
#include "gerber/scalar.hpp"
#include "gerber/multivector.hpp"
#include "gerber/algebroid.hpp"
#include "gerber/bv.hpp"
#include "gerber/linalg.hpp"
#include "gerber/homology.hpp"
#include "gerber/random.hpp"
#include "gerber/text.hpp"
#include "gerber/spec_io.hpp"
#include "gerber/registry.hpp"
