#pragma once

// Umbrella header: geodesics of the H^1 right-invariant metric on monotone
// maps of [0,1], with the associated energies, flows, jump calculus, and the
// Camassa-Holm evolution.

#include "mongeo/version.hpp"

#include "mongeo/errors.hpp"
#include "mongeo/grid.hpp"
#include "mongeo/numerics.hpp"

#include "mongeo/monotone_map.hpp"
#include "mongeo/path_grid.hpp"

#include "mongeo/energy.hpp"
#include "mongeo/flow.hpp"
#include "mongeo/hellinger.hpp"
#include "mongeo/jump_record.hpp"
#include "mongeo/jump_transforms.hpp"

#include "mongeo/filling.hpp"
#include "mongeo/solver.hpp"

#include "mongeo/ch.hpp"

#include "mongeo/io.hpp"
#include "mongeo/svg.hpp"
