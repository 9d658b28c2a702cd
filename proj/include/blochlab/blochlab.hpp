#pragma once

#include "blochlab/arcs.hpp"
#include "blochlab/band_structure.hpp"
#include "blochlab/config.hpp"
#include "blochlab/eigensolver.hpp"
#include "blochlab/error.hpp"
#include "blochlab/fiber.hpp"
#include "blochlab/kronig_penney.hpp"
#include "blochlab/matrix.hpp"
#include "blochlab/parallel.hpp"
#include "blochlab/perturbation.hpp"
#include "blochlab/potentials.hpp"
