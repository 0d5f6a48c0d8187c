#pragma once

#include "alive/models/abc_hmm.hpp"
#include "alive/models/iid.hpp"
#include "alive/models/linear_gaussian.hpp"
#include "alive/models/returns_csv.hpp"
#include "alive/models/stable.hpp"
#include "alive/models/stochastic_volatility.hpp"
