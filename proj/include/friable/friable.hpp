#pragma once

#include "friable/arith.hpp"
#include "friable/bump.hpp"
#include "friable/characters.hpp"
#include "friable/dispersion.hpp"
#include "friable/error.hpp"
#include "friable/expsums.hpp"
#include "friable/kloosterman.hpp"
#include "friable/parallel.hpp"
#include "friable/poisson.hpp"
#include "friable/scan.hpp"
#include "friable/sieve_cache.hpp"
#include "friable/smooth.hpp"
