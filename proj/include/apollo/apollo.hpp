#pragma once

#include "apollo/case_config.hpp"
#include "apollo/counting.hpp"
#include "apollo/cusp_quotient.hpp"
#include "apollo/errors.hpp"
#include "apollo/exact.hpp"
#include "apollo/geometry.hpp"
#include "apollo/group.hpp"
#include "apollo/lattice.hpp"
#include "apollo/matrix.hpp"
#include "apollo/packed.hpp"
#include "apollo/packing.hpp"
#include "apollo/parallel.hpp"
#include "apollo/serialize.hpp"
