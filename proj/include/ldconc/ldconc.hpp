// Umbrella header.
#pragma once

#include "ldconc/bounds.hpp"
#include "ldconc/covers.hpp"
#include "ldconc/depstruct.hpp"
#include "ldconc/ensembles.hpp"
#include "ldconc/experiment.hpp"
#include "ldconc/io.hpp"
#include "ldconc/montecarlo.hpp"
#include "ldconc/random.hpp"
#include "ldconc/rational.hpp"
#include "ldconc/registry.hpp"
#include "ldconc/selfbound.hpp"
#include "ldconc/spectrum.hpp"
