#pragma once

#include "errors.hpp"
#include "field.hpp"
#include "matrix.hpp"
#include "rng.hpp"
#include "sampling.hpp"
#include "montecarlo.hpp"
#include "quadrature.hpp"
#include "partition.hpp"
#include "jack.hpp"
#include "hyper_bc.hpp"
#include "spherical_a.hpp"
#include "bessel.hpp"
#include "weyl.hpp"
#include "experiments.hpp"
#include "io.hpp"
