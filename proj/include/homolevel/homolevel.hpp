#pragma once

// Umbrella header for the library modules. The CLI lives in cli.hpp.

#include "error.hpp"
#include "gausslike.hpp"
#include "integrate.hpp"
#include "io.hpp"
#include "levelset.hpp"
#include "minvol.hpp"
#include "moments.hpp"
#include "multiindex.hpp"
#include "phf.hpp"
#include "polarity.hpp"
#include "polynomial.hpp"
