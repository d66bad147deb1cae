#pragma once

// Umbrella header for the spectral Navier-Stokes / Besov toolkit.

#include "nsb/analytic.hpp"
#include "nsb/blowup_monitor.hpp"
#include "nsb/csv.hpp"
#include "nsb/fft.hpp"
#include "nsb/field.hpp"
#include "nsb/field_io.hpp"
#include "nsb/grid.hpp"
#include "nsb/heat_leray.hpp"
#include "nsb/littlewood_paley.hpp"
#include "nsb/mild_solver.hpp"
#include "nsb/paraproduct.hpp"
#include "nsb/regression.hpp"
#include "nsb/spectral.hpp"
