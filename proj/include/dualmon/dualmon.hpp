#pragma once

// Umbrella header for the dualmon simulation library.

#include "dualmon/circuit.hpp"
#include "dualmon/elementary.hpp"
#include "dualmon/errors.hpp"
#include "dualmon/fock.hpp"
#include "dualmon/io.hpp"
#include "dualmon/open_system.hpp"
#include "dualmon/parallel.hpp"
#include "dualmon/perturbation.hpp"
#include "dualmon/spectroscopy.hpp"
