#pragma once

#include "alive/oracles/clt_variance.hpp"
#include "alive/oracles/grid_posterior.hpp"
#include "alive/oracles/kalman.hpp"
#include "alive/oracles/nb_identities.hpp"
