#pragma once

#include "qwalk/conjecture.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/io.hpp"
#include "qwalk/markov.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/sampler.hpp"
#include "qwalk/spectrum.hpp"
#include "qwalk/trotter.hpp"
#include "qwalk/types.hpp"
#include "qwalk/walk.hpp"
