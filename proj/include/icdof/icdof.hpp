#pragma once

// Everything at once. Individual headers can be included on their own.

#include "icdof/error.hpp"
#include "icdof/rational.hpp"
#include "icdof/monomial.hpp"
#include "icdof/exact_scalar.hpp"
#include "icdof/scalar_syntax.hpp"
#include "icdof/discrete_dist.hpp"
#include "icdof/channel.hpp"
#include "icdof/exact_kernel.hpp"
#include "icdof/condition_star.hpp"
#include "icdof/dof.hpp"
#include "icdof/infodim.hpp"
#include "icdof/sumset.hpp"
#include "icdof/optimizer.hpp"
#include "icdof/json_io.hpp"
