#pragma once

#include "bandwidth.hpp"
#include "csv.hpp"
#include "empirical.hpp"
#include "error.hpp"
#include "estimator.hpp"
#include "experiments.hpp"
#include "kernels.hpp"
#include "models.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "transforms.hpp"
