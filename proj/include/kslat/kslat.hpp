#pragma once

#include "kslat/error.hpp"
#include "kslat/tolerance.hpp"
#include "kslat/linalg.hpp"
#include "kslat/subspace.hpp"
#include "kslat/projector.hpp"
#include "kslat/lattice.hpp"
#include "kslat/burnside.hpp"
#include "kslat/valuation.hpp"
#include "kslat/io.hpp"
