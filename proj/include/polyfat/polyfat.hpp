#pragma once

#include "polyfat/bounds.hpp"
#include "polyfat/delta_net.hpp"
#include "polyfat/envelope.hpp"
#include "polyfat/error.hpp"
#include "polyfat/experiment.hpp"
#include "polyfat/geometry.hpp"
#include "polyfat/hardness.hpp"
#include "polyfat/io.hpp"
#include "polyfat/jl.hpp"
#include "polyfat/learner.hpp"
#include "polyfat/lp.hpp"
#include "polyfat/parallel.hpp"
#include "polyfat/perceptron.hpp"
#include "polyfat/rng.hpp"
#include "polyfat/sampling.hpp"
