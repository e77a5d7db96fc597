#pragma once

#include "hexmark/configuration.hpp"
#include "hexmark/errors.hpp"
#include "hexmark/exact.hpp"
#include "hexmark/functionals.hpp"
#include "hexmark/io.hpp"
#include "hexmark/lattice.hpp"
#include "hexmark/model.hpp"
#include "hexmark/parallel.hpp"
#include "hexmark/phase.hpp"
#include "hexmark/rng.hpp"
#include "hexmark/sampler.hpp"
#include "hexmark/svg.hpp"
#include "hexmark/uniqueness.hpp"
