#pragma once

#include "delzant/canonical.hpp"
#include "delzant/census.hpp"
#include "delzant/chop.hpp"
#include "delzant/classification.hpp"
#include "delzant/decomposition.hpp"
#include "delzant/edge_homology.hpp"
#include "delzant/errors.hpp"
#include "delzant/json_io.hpp"
#include "delzant/lattice.hpp"
#include "delzant/minkowski.hpp"
#include "delzant/polygon.hpp"
#include "delzant/rational.hpp"
#include "delzant/scalar.hpp"
#include "delzant/shapes.hpp"
