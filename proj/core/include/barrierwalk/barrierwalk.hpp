#pragma once

#include "barrierwalk/asymptotics.hpp"
#include "barrierwalk/barrier.hpp"
#include "barrierwalk/density.hpp"
#include "barrierwalk/distributions.hpp"
#include "barrierwalk/error.hpp"
#include "barrierwalk/format.hpp"
#include "barrierwalk/lattice_table.hpp"
#include "barrierwalk/montecarlo.hpp"
#include "barrierwalk/rng.hpp"
