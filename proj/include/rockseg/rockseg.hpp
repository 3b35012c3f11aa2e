#pragma once

#include "augment.hpp"
#include "denoise.hpp"
#include "diffusion.hpp"
#include "error.hpp"
#include "field.hpp"
#include "image.hpp"
#include "metrics.hpp"
#include "morphology.hpp"
#include "pgm.hpp"
#include "rng.hpp"
#include "segment.hpp"
#include "selftest.hpp"
#include "soft_io.hpp"
#include "synth.hpp"
#include "version.hpp"
