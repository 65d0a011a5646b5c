#pragma once

#include "fractal_spectra/decimation.hpp"
#include "fractal_spectra/energy.hpp"
#include "fractal_spectra/geometry.hpp"
#include "fractal_spectra/harmonic_structure.hpp"
#include "fractal_spectra/linalg.hpp"
#include "fractal_spectra/oracle.hpp"
#include "fractal_spectra/rational.hpp"
#include "fractal_spectra/reproduce.hpp"
#include "fractal_spectra/svg.hpp"
#include "fractal_spectra/walk.hpp"
